#pragma once

#include "lisa/bigint.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace lisa {

/// Seeded deterministic generator driving every random draw in the library.
///
/// Reproducibility is the point: identical seeds give identical transcripts.
/// This is NOT a cryptographically secure generator; a deployment would swap
/// in an OS-backed source behind the same interface.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream `stream` under `seed`. Used by the batch kernels so
    /// trial i draws the same values no matter which thread runs it.
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    std::uint32_t next_u32() { return static_cast<std::uint32_t>(engine_() >> 32); }

    /// Uniform in [0, bound). bound > 0.
    std::uint64_t uniform(std::uint64_t bound);

    void fill(std::span<std::uint8_t> out);

    /// Uniform in [0, bound) by rejection sampling. bound > 0.
    BigInt below(const BigInt& bound);

  private:
    std::mt19937_64 engine_;
};

} // namespace lisa
