#pragma once

#include <cstdint>

namespace lisa {

/// Per-entity tally of cryptographic operations. Passed explicitly into every
/// counted operation; a null pointer means "don't count".
struct OpCounters {
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
    std::uint64_t hashes = 0;    // raw h0 invocations, kdf included
    std::uint64_t kdf_calls = 0;
    // Never touched by this protocol; kept so reports can show them as structurally zero.
    std::uint64_t pairings = 0;
    std::uint64_t sym_ciphers = 0;

    /// Hash count as the cost tables tally it: kdf calls excluded.
    std::uint64_t table_hashes() const noexcept { return hashes - kdf_calls; }

    void reset() noexcept { *this = OpCounters{}; }

    OpCounters& operator+=(const OpCounters& o) noexcept {
        mults += o.mults;
        adds += o.adds;
        hashes += o.hashes;
        kdf_calls += o.kdf_calls;
        pairings += o.pairings;
        sym_ciphers += o.sym_ciphers;
        return *this;
    }

    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

inline void count_mult(OpCounters* c) noexcept { if(c) ++c->mults; }
inline void count_add(OpCounters* c) noexcept { if(c) ++c->adds; }
inline void count_hash(OpCounters* c) noexcept { if(c) ++c->hashes; }

} // namespace lisa
