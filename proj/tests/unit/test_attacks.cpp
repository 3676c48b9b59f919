#include "doctest.h"
#include "fixtures.hpp"

#include "lisa/attacks.hpp"

#include "json.hpp"

using namespace lisa;
using namespace lisa::attacks;

namespace {

AttackConfig toy_cfg() {
    AttackConfig c;
    c.curve = profiles::toy();
    c.seed = 5;
    return c;
}

void all_pass(const std::vector<AttackVerdict>& vs) {
    REQUIRE_FALSE(vs.empty());
    for(const auto& v : vs) {
        INFO(v.line());
        CHECK(v.pass);
    }
}

bool has(const std::vector<AttackVerdict>& vs, std::string_view scenario) {
    for(const auto& v : vs) {
        if(v.scenario == scenario) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_SUITE("attacks") {

TEST_CASE("mutual authentication on toy") {
    const auto vs = scenario_mutual_auth(toy_cfg());
    all_pass(vs);
    CHECK(vs.front().feature == "SF1");
}

TEST_CASE("replay, with and without the cache") {
    auto cfg = toy_cfg();
    const auto cached = scenario_replay(cfg);
    all_pass(cached);
    CHECK(has(cached, "replay/in-window-cached"));
    cfg.handshake.replay_cache = false;
    const auto uncached = scenario_replay(cfg);
    all_pass(uncached);
    CHECK_FALSE(has(uncached, "replay/in-window-cached"));
}

TEST_CASE("impersonation on toy") { all_pass(scenario_impersonation(toy_cfg())); }

TEST_CASE("dos gate on toy") { all_pass(scenario_dos_gate(toy_cfg())); }

TEST_CASE("session-key secrecy and its corruption variants") {
    const auto vs = scenario_session_key_secrecy(toy_cfg());
    all_pass(vs);
    CHECK(has(vs, "secrecy/dlog-oracle"));
}

TEST_CASE("mitm: no single-bit flip is ever accepted by both sides") {
    const auto& d = fixtures::toy_deployment();
    const auto s = mitm_sweep_serial(d, HandshakeConfig{}, 8);
    const auto p = mitm_sweep_parallel(d, HandshakeConfig{}, 8);
    CHECK(s.size() == 352 + 192);
    CHECK(s == p);
    for(const auto& o : s) {
        CHECK_FALSE(o.compromised);
        CHECK(o.sm != SmState::Established);
    }
}

TEST_CASE("brute-force dlog and digest inversion are exact on toy") {
    const Curve curve(profiles::toy());
    const CurvePoint r = curve.mul(BigInt(4321), curve.generator());
    const auto k = brute_force_dlog(curve, r.x_coord());
    REQUIRE(k.has_value());
    CHECK(curve.mul_base(*k).x() == r.x());

    const auto& d = fixtures::toy_deployment();
    const auto x = invert_cert_digest(d.params(), d.meters[0].digest);
    REQUIRE(x.has_value());
    CHECK(*x == d.meters[0].cert.point.x_coord());
}

TEST_CASE("scenario dispatch and summary") {
    CHECK(scenario_names().size() == 7);
    CHECK_THROWS_WITH_AS(run("nope", toy_cfg()), doctest::Contains("INVALID_CONFIG"), Error);
    const auto vs = run("replay", toy_cfg());
    const auto j = nlohmann::json::parse(summary_json(vs));
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("passed") == vs.size());
    CHECK(j.at("failed") == 0);
    CHECK(j.at("verdicts").size() == vs.size());
    CHECK(vs.front().line().rfind("[PASS] SF2 replay/", 0) == 0);
}

}
