#include "lisa/batch.hpp"

#include <omp.h>

namespace lisa::batch {

RegistrationTrial register_one(const TrustedThirdParty& ttp, Identity id, Rng& rng) {
    const DomainParams& params = ttp.params();
    for(;;) {
        const PendingRegistration pending = register_begin(params, id, rng);
        const auto issued = ttp.issue_detached(pending.request, rng);
        try {
            RegistrationTrial t;
            t.credential = register_finish(params, id, pending.r_a, issued.response);
            t.record = issued.record;
            t.identity_holds = params.ec().mul_base(t.credential.d) ==
                               reconstruct_public_key(params, t.credential.cert, t.credential.id);
            return t;
        } catch(const Error& e) {
            if(e.code() != ErrorCode::ReconstructionMismatch) {
                throw;
            }
        }
    }
}

std::vector<RegistrationTrial> register_serial(const TrustedThirdParty& ttp, std::span<const Identity> ids,
                                               std::uint64_t seed) {
    std::vector<RegistrationTrial> out(ids.size());
    for(std::size_t i = 0; i < ids.size(); ++i) {
        Rng rng(seed, i);
        out[i] = register_one(ttp, ids[i], rng);
    }
    return out;
}

std::vector<RegistrationTrial> register_parallel(const TrustedThirdParty& ttp, std::span<const Identity> ids,
                                                 std::uint64_t seed) {
    std::vector<RegistrationTrial> out(ids.size());
    const auto n = static_cast<std::ptrdiff_t>(ids.size());
#pragma omp parallel for schedule(dynamic, 8)
    for(std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        // register_one only throws on programming errors; an escaping
        // exception would terminate inside the parallel region.
        try {
            out[i] = register_one(ttp, ids[i], rng);
        } catch(...) {
            out[i].identity_holds = false;
        }
    }
    return out;
}

HandshakeTrial handshake_one(const HandshakeBatch& batch, std::size_t index, Rng& rng) {
    HandshakeTrial t;
    const Credential& meter = batch.meters[index % batch.meters.size()];
    ReplayCache cache(batch.config.window);
    SmSession sm(batch.params, meter, batch.provider.q, batch.config);
    SpSession sp(batch.params, batch.provider, *batch.directory, batch.config);
    try {
        const AuthRequest req = sm.initiate(batch.now, rng, &t.sm);
        const Bytes m1 = encode_msg(req, sm.layout());
        t.msg1_bits = 8 * m1.size();
        const AuthResponse resp = sp.respond(decode_request(m1, sp.layout()), batch.now, &cache, &t.sp);
        const Bytes m2 = encode_msg(resp);
        t.msg2_bits = 8 * m2.size();
        t.sm_key = sm.finalize(decode_response(m2), batch.now, &t.sm);
        t.sp_key = *sp.key();
        t.established = sm.state() == SmState::Established && sp.state() == SpState::Challenged;
    } catch(const Error& e) {
        t.failure = e.code();
    }
    return t;
}

std::vector<HandshakeTrial> handshake_serial(const HandshakeBatch& batch, std::size_t count, std::uint64_t seed) {
    std::vector<HandshakeTrial> out(count);
    for(std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, i);
        out[i] = handshake_one(batch, i, rng);
    }
    return out;
}

std::vector<HandshakeTrial> handshake_parallel(const HandshakeBatch& batch, std::size_t count, std::uint64_t seed) {
    std::vector<HandshakeTrial> out(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 8)
    for(std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        out[i] = handshake_one(batch, static_cast<std::size_t>(i), rng);
    }
    return out;
}

int max_threads() noexcept {
    return omp_get_max_threads();
}

} // namespace lisa::batch
