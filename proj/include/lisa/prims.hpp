#pragma once

#include "lisa/bigint.hpp"
#include "lisa/counters.hpp"
#include "lisa/group.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace lisa {

inline constexpr std::size_t kDigestBytes = 20;     // 160-bit H0 output
inline constexpr std::size_t kIdentityBytes = 4;
inline constexpr std::size_t kTimestampBytes = 4;
inline constexpr std::size_t kCertDigestBytes = 16; // 128-bit certificate digest on the wire
inline constexpr std::uint8_t kKdfTag = 0x01;
inline constexpr std::uint8_t kMaskTag = 0x02;

struct Identity {
    std::uint32_t value = 0;
    friend auto operator<=>(const Identity&, const Identity&) = default;
};

/// Logical-clock seconds.
struct Timestamp {
    std::uint32_t seconds = 0;
    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    std::span<const std::uint8_t> view() const noexcept { return bytes; }
    std::size_t size() const noexcept { return N; }
    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

using Digest = FixedBytes<kDigestBytes>;
using SessionKey = FixedBytes<kDigestBytes>;
using CertDigest = FixedBytes<kCertDigestBytes>;

/// Auth_SM: the XOR-masked credential token. Width is set by the wire profile.
struct MaskedToken {
    Bytes bytes;
    friend bool operator==(const MaskedToken&, const MaskedToken&) = default;
};

/// SHA-256 truncated to its leading 160 bits. Counts one hash.
Digest h0(std::span<const std::uint8_t> data, OpCounters* counters = nullptr);

/// Digest read as a big-endian integer, reduced mod q.
Scalar scalar_from_digest(const Digest& d, const BigInt& q);

// Fixed-width big-endian encodings.
std::array<std::uint8_t, kIdentityBytes> encode(Identity id);
std::array<std::uint8_t, kTimestampBytes> encode(Timestamp t);
/// x-coordinate at `width` bytes; throws Error(ValueOutOfRange) if it does not fit.
Bytes encode_x(const FieldElement& x, std::size_t width);
Bytes encode(const Digest& d);

Identity decode_identity(std::span<const std::uint8_t> bytes);
Timestamp decode_timestamp(std::span<const std::uint8_t> bytes);
FieldElement decode_x(std::span<const std::uint8_t> bytes);

/// SK = h0(0x01 || ID || cert_x || shared_x || T_SP || T_SM), x values at
/// `x_width` bytes. Counts one hash and one kdf call.
SessionKey kdf(Identity id, const FieldElement& cert_x, const FieldElement& shared_x, Timestamp t_sp,
               Timestamp t_sm, std::size_t x_width, OpCounters* counters = nullptr);

/// payload (left-zero-padded to mask width) XOR mask XOR t (zero-extended).
/// Throws Error(PayloadTooWide) if the payload is wider than the mask.
MaskedToken xor_mask(std::span<const std::uint8_t> payload, std::span<const std::uint8_t> mask, Timestamp t);

/// The paper-160 form: the mask is key_x encoded at `width` bytes.
MaskedToken xor_mask(std::span<const std::uint8_t> payload, const FieldElement& key_x, Timestamp t,
                     std::size_t width);

/// Inverse of xor_mask: returns the full mask-width payload.
Bytes xor_unmask(const MaskedToken& token, std::span<const std::uint8_t> mask, Timestamp t);
Bytes xor_unmask(const MaskedToken& token, const FieldElement& key_x, Timestamp t);

/// Mask of arbitrary width derived from key_x: leading bytes of
/// h0(0x02 || ctr || x) for ctr = 0, 1, ... Counts one hash per block.
Bytes expand_mask(const FieldElement& key_x, std::size_t x_width, std::size_t width,
                  OpCounters* counters = nullptr);

} // namespace lisa
