#include "lisa/prims.hpp"

#include "lisa/error.hpp"

#include <openssl/sha.h>

#include <algorithm>

namespace lisa {

Digest h0(std::span<const std::uint8_t> data, OpCounters* counters) {
    std::array<std::uint8_t, SHA256_DIGEST_LENGTH> full{};
    SHA256(data.data(), data.size(), full.data());
    Digest d;
    std::copy_n(full.begin(), kDigestBytes, d.bytes.begin());
    count_hash(counters);
    return d;
}

Scalar scalar_from_digest(const Digest& d, const BigInt& q) {
    BigInt v = from_bytes_be(d.bytes);
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    return Scalar{std::move(r)};
}

std::array<std::uint8_t, kIdentityBytes> encode(Identity id) {
    const auto v = id.value;
    return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
            static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

std::array<std::uint8_t, kTimestampBytes> encode(Timestamp t) {
    const auto v = t.seconds;
    return {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
            static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
}

Bytes encode_x(const FieldElement& x, std::size_t width) {
    return to_bytes_be(x.value(), width);
}

Bytes encode(const Digest& d) {
    return Bytes(d.bytes.begin(), d.bytes.end());
}

namespace {

std::uint32_t load_u32(std::span<const std::uint8_t> b) {
    if(b.size() != 4) {
        throw Error(ErrorCode::MalformedMessage, "expected 4 bytes");
    }
    return std::uint32_t{b[0]} << 24 | std::uint32_t{b[1]} << 16 | std::uint32_t{b[2]} << 8 | std::uint32_t{b[3]};
}

} // namespace

Identity decode_identity(std::span<const std::uint8_t> bytes) {
    return Identity{load_u32(bytes)};
}

Timestamp decode_timestamp(std::span<const std::uint8_t> bytes) {
    return Timestamp{load_u32(bytes)};
}

FieldElement decode_x(std::span<const std::uint8_t> bytes) {
    return FieldElement{from_bytes_be(bytes)};
}

SessionKey kdf(Identity id, const FieldElement& cert_x, const FieldElement& shared_x, Timestamp t_sp,
               Timestamp t_sm, std::size_t x_width, OpCounters* counters) {
    Bytes buf;
    buf.reserve(1 + kIdentityBytes + 2 * x_width + 2 * kTimestampBytes);
    buf.push_back(kKdfTag);
    const auto id_enc = encode(id);
    buf.insert(buf.end(), id_enc.begin(), id_enc.end());
    const Bytes cx = encode_x(cert_x, x_width);
    buf.insert(buf.end(), cx.begin(), cx.end());
    const Bytes sx = encode_x(shared_x, x_width);
    buf.insert(buf.end(), sx.begin(), sx.end());
    const auto tsp = encode(t_sp);
    buf.insert(buf.end(), tsp.begin(), tsp.end());
    const auto tsm = encode(t_sm);
    buf.insert(buf.end(), tsm.begin(), tsm.end());

    const Digest d = h0(buf, counters);
    if(counters) {
        ++counters->kdf_calls;
    }
    SessionKey k;
    k.bytes = d.bytes;
    return k;
}

MaskedToken xor_mask(std::span<const std::uint8_t> payload, std::span<const std::uint8_t> mask, Timestamp t) {
    if(payload.size() > mask.size()) {
        throw Error(ErrorCode::PayloadTooWide,
                    std::to_string(payload.size()) + " bytes into a " + std::to_string(mask.size()) + "-byte mask");
    }
    MaskedToken out;
    out.bytes.assign(mask.begin(), mask.end());
    const std::size_t offset = mask.size() - payload.size();
    for(std::size_t i = 0; i != payload.size(); ++i) {
        out.bytes[offset + i] ^= payload[i];
    }
    const auto t_enc = encode(t);
    const std::size_t n = std::min(t_enc.size(), out.bytes.size());
    for(std::size_t i = 0; i != n; ++i) {
        out.bytes[out.bytes.size() - n + i] ^= t_enc[t_enc.size() - n + i];
    }
    return out;
}

MaskedToken xor_mask(std::span<const std::uint8_t> payload, const FieldElement& key_x, Timestamp t,
                     std::size_t width) {
    const Bytes mask = encode_x(key_x, width);
    return xor_mask(payload, mask, t);
}

Bytes xor_unmask(const MaskedToken& token, std::span<const std::uint8_t> mask, Timestamp t) {
    return xor_mask(token.bytes, mask, t).bytes;
}

Bytes xor_unmask(const MaskedToken& token, const FieldElement& key_x, Timestamp t) {
    return xor_mask(token.bytes, key_x, t, token.bytes.size()).bytes;
}

Bytes expand_mask(const FieldElement& key_x, std::size_t x_width, std::size_t width, OpCounters* counters) {
    Bytes out;
    out.reserve(width + kDigestBytes);
    const Bytes x = encode_x(key_x, x_width);
    for(std::uint8_t ctr = 0; out.size() < width; ++ctr) {
        Bytes block;
        block.reserve(2 + x.size());
        block.push_back(kMaskTag);
        block.push_back(ctr);
        block.insert(block.end(), x.begin(), x.end());
        const Digest d = h0(block, counters);
        out.insert(out.end(), d.bytes.begin(), d.bytes.end());
    }
    out.resize(width);
    return out;
}

} // namespace lisa
