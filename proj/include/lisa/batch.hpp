#pragma once

// Batch registration and handshake kernels. Each comes as a serial reference
// and an OpenMP version; trial i always draws from Rng(seed, i), so both
// produce identical results regardless of thread count or schedule.

#include "lisa/handshake.hpp"

#include <optional>
#include <span>
#include <vector>

namespace lisa::batch {

struct RegistrationTrial {
    Credential credential;
    RegistrationRecord record;
    /// d·P == H0(Cert||ID)·Cert + Q_T, checked independently of register_finish.
    bool identity_holds = false;
};

/// One registration against `ttp` without committing to its registry.
RegistrationTrial register_one(const TrustedThirdParty& ttp, Identity id, Rng& rng);

std::vector<RegistrationTrial> register_serial(const TrustedThirdParty& ttp, std::span<const Identity> ids,
                                               std::uint64_t seed);
std::vector<RegistrationTrial> register_parallel(const TrustedThirdParty& ttp, std::span<const Identity> ids,
                                                 std::uint64_t seed);

struct HandshakeBatch {
    DomainParams params;
    std::span<const Credential> meters; // trial i uses meters[i % size]
    Credential provider;
    const Directory* directory = nullptr;
    HandshakeConfig config;
    Timestamp now{1000};
};

struct HandshakeTrial {
    bool established = false; // both sides terminal-success
    std::optional<ErrorCode> failure;
    SessionKey sm_key;
    SessionKey sp_key;
    OpCounters sm;
    OpCounters sp;
    std::size_t msg1_bits = 0;
    std::size_t msg2_bits = 0;

    bool keys_match() const noexcept { return established && sm_key == sp_key; }
};

HandshakeTrial handshake_one(const HandshakeBatch& batch, std::size_t index, Rng& rng);

std::vector<HandshakeTrial> handshake_serial(const HandshakeBatch& batch, std::size_t count, std::uint64_t seed);
std::vector<HandshakeTrial> handshake_parallel(const HandshakeBatch& batch, std::size_t count, std::uint64_t seed);

/// Threads OpenMP will use for the parallel kernels.
int max_threads() noexcept;

} // namespace lisa::batch
