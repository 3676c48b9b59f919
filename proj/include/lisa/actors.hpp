#pragma once

// TTP, SM and SP actors for the simulated network, and a helper that
// provisions a deployment (TTP, registered meters, one provider).

#include "lisa/handshake.hpp"
#include "lisa/simnet.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace lisa::simnet {

// Secure-channel message tags.
inline constexpr std::uint8_t kTagRegRequest = 0x10;
inline constexpr std::uint8_t kTagRegResponse = 0x11;
inline constexpr std::uint8_t kTagRecordPush = 0x12;

/// Answers registration requests and pushes each new record to every provider.
class TtpActor : public Actor {
  public:
    TtpActor(std::string name, std::shared_ptr<TrustedThirdParty> ttp, std::vector<std::string> providers);

    void on_message(Context& ctx, const Envelope& env) override;

    std::size_t issued() const noexcept { return issued_; }

  private:
    std::shared_ptr<TrustedThirdParty> ttp_;
    std::vector<std::string> providers_;
    std::size_t issued_ = 0;
};

struct SmRun {
    SmSession session;
    OpCounters counters;
    Bytes request;
};

class SmActor : public Actor {
  public:
    struct Options {
        std::string ttp = "ttp";
        std::string provider = "sp";
        CurvePoint provider_q;
        HandshakeConfig config;
        /// Handshake start offsets, in seconds after the actor is ready.
        std::vector<std::uint32_t> handshakes{0};
        /// Ephemeral scalars for the first handshakes, in order; the rest are random.
        std::vector<Scalar> forced_r_sm;
    };

    /// Already-registered meter.
    SmActor(std::string name, DomainParams params, Credential cred, Options options);
    /// Meter that registers with the TTP over the secure channel first.
    SmActor(std::string name, DomainParams params, Identity id, Options options);

    void start(Context& ctx) override;
    void on_message(Context& ctx, const Envelope& env) override;
    void on_timer(Context& ctx, std::uint64_t tag) override;
    bool mid_handshake() const override;

    const std::optional<Credential>& credential() const noexcept { return cred_; }
    const std::vector<SmRun>& runs() const noexcept { return runs_; }
    std::size_t unexpected_messages() const noexcept { return unexpected_; }

  private:
    void schedule_handshakes(Context& ctx);

    DomainParams params_;
    Identity id_;
    Options options_;
    std::optional<Credential> cred_;
    std::optional<Scalar> pending_r_a_;
    std::vector<SmRun> runs_;
    std::size_t unexpected_ = 0;
};

struct SpRun {
    Bytes request;
    std::optional<SpSession> session; // empty if the request failed to decode
    std::optional<ErrorCode> failure;
    OpCounters counters;
    std::uint64_t directory_lookups = 0;
};

class SpActor : public Actor {
  public:
    SpActor(std::string name, DomainParams params, Credential self, std::shared_ptr<Directory> directory,
            HandshakeConfig config, std::shared_ptr<ReplayCache> cache);

    void on_message(Context& ctx, const Envelope& env) override;

    const std::vector<SpRun>& runs() const noexcept { return runs_; }
    const Directory& directory() const noexcept { return *directory_; }
    OpCounters total_counters() const;

  private:
    DomainParams params_;
    Credential self_;
    std::shared_ptr<Directory> directory_;
    HandshakeConfig config_;
    std::shared_ptr<ReplayCache> cache_;
    std::vector<SpRun> runs_;
};

/// A TTP with registered meters and one registered provider whose directory
/// holds every meter record.
struct Deployment {
    std::shared_ptr<TrustedThirdParty> ttp;
    Credential provider;
    std::vector<Credential> meters;
    std::shared_ptr<Directory> directory;

    const DomainParams& params() const { return ttp->params(); }
};

inline constexpr std::uint32_t kFirstMeterId = 0x5A170001;
inline constexpr std::uint32_t kProviderId = 0x5E000001;

Deployment provision(const CurveParams& curve, std::size_t meters, std::uint64_t seed);

inline constexpr const char* kMeterName = "sm";
inline constexpr const char* kProviderName = "sp";

struct HandshakePlan {
    std::size_t meter = 0;
    HandshakeConfig config;
    std::vector<std::uint32_t> at{0};
    std::vector<Scalar> forced_r_sm;
    NetworkOptions network;
    /// Shared across runs when set; otherwise each run gets a fresh cache.
    std::shared_ptr<ReplayCache> cache;
};

/// Runs meter `plan.meter` against the deployment's provider ("sm" and "sp").
ScenarioResult run_handshakes(const Deployment& d, const HandshakePlan& plan, const AdversaryScript& script,
                              std::uint64_t seed);

} // namespace lisa::simnet
