#pragma once

// Authentication and key exchange: the SM-initiator and SP-responder state
// machines, the two open-channel messages and their bit-exact layouts.
//
// Message 1 (SM -> SP):  T_SM (32) || x(R_SM) (x width) || Auth_SM (mask width)
// Message 2 (SP -> SM):  T_SP (32) || Auth_SP (160)
//
// paper-160 wire profile: mask width = x width = 160 bits, To_SM is the
// 128-bit certificate digest followed by the 32-bit identity, and the mask is
// x(R') itself. 352 + 192 = 544 bits per handshake.
//
// strict wire profile: To_SM is the full certificate x-coordinate followed by
// the identity (192 bits) under a hash-expanded mask. 384 + 192 = 576 bits.

#include "lisa/ecqv.hpp"
#include "lisa/error.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string_view>
#include <utility>

namespace lisa {

enum class WireProfile { Paper160, Strict };

std::string_view to_string(WireProfile w) noexcept;
/// "paper-160" or "strict"; throws Error(InvalidConfig).
WireProfile parse_wire_profile(std::string_view name);

struct HandshakeConfig {
    std::uint32_t window = 5; // freshness window, logical seconds
    bool replay_cache = true;
    WireProfile wire = WireProfile::Paper160;
};

struct WireLayout {
    std::size_t x_bytes = 20;
    std::size_t mask_bytes = 20;

    static WireLayout make(const DomainParams& params, WireProfile wire);

    std::size_t request_bytes() const noexcept { return kTimestampBytes + x_bytes + mask_bytes; }
    std::size_t response_bytes() const noexcept { return kTimestampBytes + kDigestBytes; }
    std::size_t request_bits() const noexcept { return 8 * request_bytes(); }
    std::size_t response_bits() const noexcept { return 8 * response_bytes(); }
};

struct AuthRequest {
    Timestamp t_sm;
    FieldElement r_sm_x;
    MaskedToken auth_sm;
    friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};

struct AuthResponse {
    Timestamp t_sp;
    Digest auth_sp;
    friend bool operator==(const AuthResponse&, const AuthResponse&) = default;
};

Bytes encode_msg(const AuthRequest& msg, const WireLayout& layout);
Bytes encode_msg(const AuthResponse& msg);
/// Both throw Error(MalformedMessage) on a length mismatch.
AuthRequest decode_request(std::span<const std::uint8_t> bytes, const WireLayout& layout);
AuthResponse decode_response(std::span<const std::uint8_t> bytes);

/// |now - t| <= window.
bool is_fresh(Timestamp t, Timestamp now, std::uint32_t window) noexcept;

/// Auth_SP = h0((x(R'') || x(Cert) || ID) XOR T_SP), T_SP zero-extended on the
/// left to the width of the concatenation.
Digest auth_tag(const FieldElement& shared_x, const FieldElement& cert_x, Identity id, Timestamp t_sp,
                std::size_t x_width, OpCounters* counters = nullptr);

/// To_SM for the given wire profile.
Bytes credential_token(const Credential& cred, WireProfile wire, std::size_t x_width);

/// Mask applied to To_SM, derived from x(R').
Bytes token_mask(const FieldElement& shared_x, const WireLayout& layout, WireProfile wire,
                 OpCounters* counters = nullptr);

/// (t_sm, x(R_SM)) pairs seen inside the freshness window. Thread safe.
class ReplayCache {
  public:
    explicit ReplayCache(std::uint32_t window) : window_(window) {}

    /// Atomic check-and-insert; false if the pair is already present.
    /// Evicts entries that fell out of the window as of `now`.
    bool try_insert(Timestamp t_sm, const FieldElement& r_sm_x, Timestamp now);
    void erase(Timestamp t_sm, const FieldElement& r_sm_x);
    std::size_t size() const;

  private:
    using Key = std::pair<std::uint32_t, std::string>;

    std::uint32_t window_;
    mutable std::mutex mu_;
    std::set<Key> seen_;
};

enum class SmState { Init, Sent, Established, Failed };
enum class SpState { Idle, Challenged, Failed };

std::string_view to_string(SmState s) noexcept;
std::string_view to_string(SpState s) noexcept;

/// Smart-meter side of one handshake. Single owner; never serializes r_SM.
class SmSession {
  public:
    SmSession(DomainParams params, Credential cred, CurvePoint peer_q, HandshakeConfig config = {});

    /// Init -> Sent. Exactly two scalar multiplications.
    AuthRequest initiate(Timestamp now, Rng& rng, OpCounters* counters = nullptr);
    /// Same, with an injected ephemeral scalar.
    AuthRequest initiate_with(const Scalar& r_sm, Timestamp now, OpCounters* counters = nullptr);

    /// Sent -> Established, or Failed with TIMESTAMP_EXPIRED / AUTH_TAG_MISMATCH
    /// (thrown as Error after the state change).
    SessionKey finalize(const AuthResponse& resp, Timestamp now, OpCounters* counters = nullptr);

    SmState state() const noexcept { return state_; }
    std::optional<ErrorCode> failure() const noexcept { return failure_; }
    const std::optional<SessionKey>& key() const noexcept { return key_; }
    const Credential& credential() const noexcept { return cred_; }
    WireLayout layout() const noexcept { return layout_; }

  private:
    [[noreturn]] void fail(ErrorCode code, const std::string& detail = {});

    DomainParams params_;
    Credential cred_;
    CurvePoint peer_q_;
    HandshakeConfig config_;
    WireLayout layout_;
    Scalar r_sm_;
    FieldElement shared_x_;
    Timestamp t_sm_;
    SmState state_ = SmState::Init;
    std::optional<ErrorCode> failure_;
    std::optional<SessionKey> key_;
};

/// Service-provider side of one handshake. The directory and replay cache
/// are the only shared structures.
class SpSession {
  public:
    SpSession(DomainParams params, Credential self, const Directory& directory, HandshakeConfig config = {});

    /// Idle -> Challenged after three gates:
    ///   1  timestamp freshness (before any group operation)
    ///   1b replay cache
    ///   2  lift R_SM, derive x(R''), unmask To_SM, directory lookup
    ///   3  ECQV reconstruction of Q_A against the directory record
    /// Any failure moves to Failed and throws; nothing goes on the wire.
    AuthResponse respond(const AuthRequest& req, Timestamp now, ReplayCache* cache,
                         OpCounters* counters = nullptr);

    SpState state() const noexcept { return state_; }
    std::optional<ErrorCode> failure() const noexcept { return failure_; }
    const std::optional<SessionKey>& key() const noexcept { return key_; }
    const std::optional<RegistrationRecord>& peer() const noexcept { return peer_; }
    WireLayout layout() const noexcept { return layout_; }

  private:
    DomainParams params_;
    Credential self_;
    const Directory* directory_;
    HandshakeConfig config_;
    WireLayout layout_;
    SpState state_ = SpState::Idle;
    std::optional<ErrorCode> failure_;
    std::optional<SessionKey> key_;
    std::optional<RegistrationRecord> peer_;
};

} // namespace lisa
