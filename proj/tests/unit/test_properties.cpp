// Randomized properties with small hand-rolled generators. Every generator is
// seeded, so a failure reproduces from the CAPTURE'd case number.

#include "doctest.h"
#include "fixtures.hpp"

#include "lisa/handshake.hpp"

using namespace lisa;

namespace {

constexpr int kCases = 200;

struct Gen {
    Rng rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    Scalar scalar(const Curve& c) { return c.random_scalar(rng); }
    BigInt any_scalar(const Curve& c) { return rng.below(c.order() * 2); } // includes 0 and >= q
    CurvePoint point(const Curve& c) { return rng.uniform(16) == 0 ? CurvePoint::infinity() : c.mul_base(scalar(c)); }
    Bytes bytes(std::size_t max) {
        Bytes b(rng.uniform(max + 1));
        rng.fill(b);
        return b;
    }
    Timestamp ts() { return Timestamp{rng.next_u32()}; }
    FieldElement field(const Curve& c) { return FieldElement{rng.below(c.prime())}; }
};

} // namespace

TEST_SUITE("properties") {

TEST_CASE("group laws hold for random points (toy and micro)") {
    for(const auto& params : {profiles::toy(), fixtures::micro()}) {
        const Curve c(params);
        Gen g(1);
        for(int i = 0; i != kCases; ++i) {
            CAPTURE(i);
            const CurvePoint p = g.point(c);
            const CurvePoint q = g.point(c);
            const CurvePoint r = g.point(c);
            REQUIRE(c.add(p, q) == c.add(q, p));
            REQUIRE(c.add(c.add(p, q), r) == c.add(p, c.add(q, r)));
            REQUIRE(c.add(p, c.negate(p)).is_infinity());
            REQUIRE(c.on_curve(c.add(p, q)));
        }
    }
}

TEST_CASE("scalar multiplication is linear") {
    const Curve c(profiles::toy());
    Gen g(2);
    for(int i = 0; i != kCases; ++i) {
        CAPTURE(i);
        const BigInt a = g.any_scalar(c);
        const BigInt b = g.any_scalar(c);
        const CurvePoint p = g.point(c);
        REQUIRE(c.mul(a + b, p) == c.add(c.mul(a, p), c.mul(b, p)));
        REQUIRE(c.mul(a, c.mul(b, p)) == c.mul(BigInt(a * b), p));
        REQUIRE(c.mul(BigInt(a % c.order()), p) == c.mul(a, p));
    }
}

TEST_CASE("paper-160: mul distributes over the generator") {
    const Curve c(profiles::paper160());
    Gen g(3);
    for(int i = 0; i != 20; ++i) {
        const Scalar a = g.scalar(c);
        const Scalar b = g.scalar(c);
        REQUIRE(c.add(c.mul_base(a), c.mul_base(b)) == c.mul(BigInt((a.value() + b.value()) % c.order()), c.generator()));
    }
}

TEST_CASE("lift_x with the right parity is the inverse of taking x") {
    for(const auto& params : {profiles::toy(), profiles::paper160()}) {
        const Curve c(params);
        Gen g(4);
        for(int i = 0; i != 50; ++i) {
            const CurvePoint p = c.mul_base(g.scalar(c));
            REQUIRE(c.lift_x(p.x(), p.y_is_odd()) == p);
        }
    }
}

TEST_CASE("masking is an involution for any payload, key and timestamp") {
    const Curve c(profiles::paper160());
    Gen g(5);
    for(int i = 0; i != kCases; ++i) {
        CAPTURE(i);
        const Bytes payload = g.bytes(20);
        const FieldElement key = g.field(c);
        const Timestamp t = g.ts();
        const MaskedToken tok = xor_mask(payload, key, t, 20);
        REQUIRE(tok.bytes.size() == 20);
        Bytes padded(20 - payload.size(), 0);
        padded.insert(padded.end(), payload.begin(), payload.end());
        REQUIRE(xor_unmask(tok, key, t) == padded);

        const Bytes mask = expand_mask(key, 20, 24);
        Bytes wide = g.bytes(24);
        const MaskedToken w = xor_mask(wide, mask, t);
        Bytes wpad(24 - wide.size(), 0);
        wpad.insert(wpad.end(), wide.begin(), wide.end());
        REQUIRE(xor_unmask(w, mask, t) == wpad);
    }
}

TEST_CASE("message codecs round-trip random fields, on both wires") {
    const auto& d = fixtures::paper_deployment();
    const Curve& c = d.params().ec();
    Gen g(6);
    for(const auto wire : {WireProfile::Paper160, WireProfile::Strict}) {
        const WireLayout layout = WireLayout::make(d.params(), wire);
        for(int i = 0; i != kCases; ++i) {
            CAPTURE(i);
            AuthRequest req{g.ts(), g.field(c), MaskedToken{Bytes(layout.mask_bytes)}};
            g.rng.fill(req.auth_sm.bytes);
            const Bytes m1 = encode_msg(req, layout);
            REQUIRE(m1.size() * 8 == layout.request_bits());
            REQUIRE(decode_request(m1, layout) == req);

            AuthResponse resp{g.ts(), {}};
            g.rng.fill(resp.auth_sp.bytes);
            const Bytes m2 = encode_msg(resp);
            REQUIRE(m2.size() * 8 == 192);
            REQUIRE(decode_response(m2) == resp);

            // any other length is malformed
            const Bytes cut(m1.begin(), m1.end() - 1 - static_cast<long>(g.rng.uniform(m1.size() - 1)));
            REQUIRE_THROWS_AS(decode_request(cut, layout), Error);
        }
    }
}

TEST_CASE("honest handshakes agree for random meters, seeds, times and delays") {
    const auto& d = fixtures::toy_deployment();
    Gen g(7);
    for(const auto wire : {WireProfile::Paper160, WireProfile::Strict}) {
        HandshakeConfig cfg;
        cfg.wire = wire;
        cfg.window = static_cast<std::uint32_t>(g.rng.uniform(10));
        ReplayCache cache(cfg.window);
        for(int i = 0; i != kCases; ++i) {
            CAPTURE(i);
            const auto& meter = d.meters[g.rng.uniform(d.meters.size())];
            const std::uint32_t t0 = 1000 + static_cast<std::uint32_t>(g.rng.uniform(1u << 30));
            const std::uint32_t d1 = static_cast<std::uint32_t>(g.rng.uniform(cfg.window + 1));
            const std::uint32_t d2 = static_cast<std::uint32_t>(g.rng.uniform(cfg.window + 1));
            SmSession sm(d.params(), meter, d.provider.q, cfg);
            SpSession sp(d.params(), d.provider, *d.directory, cfg);
            const AuthRequest req = sm.initiate(Timestamp{t0}, g.rng);
            const AuthResponse resp = sp.respond(req, Timestamp{t0 + d1}, &cache);
            REQUIRE(sm.finalize(resp, Timestamp{t0 + d1 + d2}) == *sp.key());
            REQUIRE(sp.peer()->id == meter.id);
        }
    }
}

TEST_CASE("any single-bit corruption of a registration response is rejected") {
    Rng rng(8);
    TrustedThirdParty ttp = TrustedThirdParty::setup(profiles::paper160(), rng);
    const auto& params = ttp.params();
    Gen g(9);
    for(int i = 0; i != 40; ++i) {
        CAPTURE(i);
        const Identity id{static_cast<std::uint32_t>(500 + i)};
        const auto pending = register_begin(params, id, rng);
        const RegistrationResponse resp = ttp.issue(pending.request, rng);
        Bytes wire = resp.encode(params);
        const std::size_t bit = g.rng.uniform(wire.size() * 8);
        wire[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        bool rejected = false;
        try {
            register_finish(params, id, pending.r_a, RegistrationResponse::decode(wire, params));
        } catch(const Error&) {
            rejected = true;
        }
        REQUIRE(rejected);
    }
}

TEST_CASE("SP never accepts a request carrying another meter's identity") {
    const auto& d = fixtures::toy_deployment();
    Gen g(10);
    for(int i = 0; i != 50; ++i) {
        CAPTURE(i);
        const auto& a = d.meters[0];
        Credential forged = a;
        forged.id = d.meters[1 + g.rng.uniform(d.meters.size() - 1)].id;
        SmSession sm(d.params(), forged, d.provider.q);
        SpSession sp(d.params(), d.provider, *d.directory);
        const AuthRequest req = sm.initiate(Timestamp{1000}, g.rng);
        REQUIRE_THROWS_AS(sp.respond(req, Timestamp{1000}, nullptr), Error);
        REQUIRE(sp.key() == std::nullopt);
    }
}

}
