#include "lisa/rng.hpp"

namespace lisa {

Rng::Rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32),
                      0x5eedu};
    engine_.seed(seq);
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for(;;) {
        const std::uint64_t v = engine_();
        if(v < limit) {
            return v % bound;
        }
    }
}

void Rng::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while(i < out.size()) {
        std::uint64_t v = engine_();
        for(int k = 0; k < 8 && i < out.size(); ++k, ++i) {
            out[i] = static_cast<std::uint8_t>(v >> 56);
            v <<= 8;
        }
    }
}

BigInt Rng::below(const BigInt& bound) {
    const std::size_t bits = bit_length(bound);
    const std::size_t nbytes = (bits + 7) / 8;
    Bytes buf(nbytes);
    const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
    for(;;) {
        fill(buf);
        buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
        BigInt v = from_bytes_be(buf);
        if(v < bound) {
            return v;
        }
    }
}

} // namespace lisa
