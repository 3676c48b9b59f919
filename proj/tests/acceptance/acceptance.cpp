// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include "fixtures.hpp"

#include "lisa/attacks.hpp"
#include "lisa/batch.hpp"
#include "lisa/bench.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace lisa;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<Identity> identities(std::size_t n) {
    std::vector<Identity> v;
    v.reserve(n);
    for(std::size_t i = 0; i != n; ++i) {
        v.push_back(Identity{static_cast<std::uint32_t>(0x5A200000 + i)});
    }
    return v;
}

Outcome c1_registration() {
    std::ostringstream d;
    bool ok = true;
    for(const auto& curve : {profiles::toy(), profiles::paper160()}) {
        Rng rng(101);
        const TrustedThirdParty ttp = TrustedThirdParty::setup(curve, rng);
        const auto t0 = std::chrono::steady_clock::now();
        const auto trials = batch::register_parallel(ttp, identities(1000), 101);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::size_t good = 0;
        for(const auto& t : trials) {
            good += t.identity_holds ? 1 : 0;
        }
        ok = ok && good == 1000;
        d << curve.name << " " << good << "/1000 in " << dt.count() << "s; ";
    }
    return {ok, d.str()};
}

Outcome c2_key_agreement() {
    const auto& dep = fixtures::paper_deployment();
    batch::HandshakeBatch b{dep.params(), dep.meters, dep.provider, dep.directory.get(), {}, Timestamp{1000}};
    const auto trials = batch::handshake_parallel(b, 1000, 202);
    std::size_t good = 0;
    for(const auto& t : trials) {
        good += t.keys_match() ? 1 : 0;
    }
    return {good == 1000, "paper-160 " + std::to_string(good) + "/1000 matching keys"};
}

Outcome c3_wire() {
    const auto m = bench::measure_handshake(profiles::paper160(), WireProfile::Paper160, 303);
    const auto& w = m.wire;
    std::ostringstream d;
    d << "rounds=" << w.rounds << " msg1=" << w.bits_msg1 << " msg2=" << w.bits_msg2 << " total=" << w.bits_total;
    return {w == bench::WireStats{2, 352, 192, 544}, d.str()};
}

Outcome c4_counts() {
    const auto m = bench::measure_handshake(profiles::paper160(), WireProfile::Paper160, 404);
    bool flagged = false;
    for(const auto& row : bench::compare(m, WireProfile::Paper160)) {
        if(row.metric == "sp_mults") {
            flagged = row.deviation;
        }
    }
    const std::uint64_t structural = m.sm.pairings + m.sp.pairings + m.sm.sym_ciphers + m.sp.sym_ciphers;
    std::ostringstream d;
    d << "sm_mults=" << m.sm.mults << " sm_hashes=" << m.sm.table_hashes() << " sp_mults=" << m.sp.mults
      << " sp_adds=" << m.sp.adds << " sp_deviation_flag=" << (flagged ? "set" : "unset")
      << " pairings+ciphers=" << structural;
    const bool ok = m.sm.mults == 2 && m.sp.mults == 2 && m.sp.adds == 1 && flagged && structural == 0;
    return {ok, d.str()};
}

Outcome c5_timing() {
    const auto curve = profiles::paper160();
    const auto prims = bench::time_primitives(curve, 300, 505);
    const auto sm = bench::time_sm_handshake(curve, WireProfile::Paper160, 300, 505);
    const auto m = bench::measure_handshake(curve, WireProfile::Paper160, 505);
    const auto t = bench::local_estimates(prims, sm, m.sp);
    std::ostringstream d;
    d << "T_a=" << t.t_a_us << "us T_h=" << t.t_h_us << "us T_m=" << t.t_m_us << "us ordering "
      << (t.ordering_holds ? "holds" : "violated") << "; estimate=" << t.sm_estimate_us
      << "us measured=" << t.sm_measured_us << "us ratio=" << t.sm_ratio << " tolerance "
      << (t.within_tolerance ? "met" : "missed");
    return {t.ordering_holds && t.within_tolerance, d.str()};
}

Outcome c6_attacks() {
    attacks::AttackConfig cfg;
    cfg.curve = profiles::toy();
    cfg.seed = 606;
    const auto t0 = std::chrono::steady_clock::now();
    const auto vs = attacks::run("all", cfg);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::size_t failed = 0;
    for(const auto& v : vs) {
        if(!v.pass) {
            ++failed;
            std::cout << "    " << v.line() << '\n';
        }
    }
    std::ostringstream d;
    d << vs.size() - failed << "/" << vs.size() << " verdicts in " << dt.count() << "s";
    return {failed == 0 && !vs.empty(), d.str()};
}

std::string capture(const std::string& cmd) {
    std::string out;
    FILE* p = ::popen(cmd.c_str(), "r");
    if(p == nullptr) {
        return "<popen failed>";
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while((n = std::fread(buf.data(), 1, buf.size(), p)) != 0) {
        out.append(buf.data(), n);
    }
    const int status = ::pclose(p);
    return out + "\n<status " + std::to_string(status) + ">";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome c7_determinism() {
    const std::string cli = LISA_CLI_PATH;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"demo", "demo --seed 707"},
        {"attack all", "attack all --profile toy --seed 707"},
        {"bench", "bench --reps 0 --seed 707 --out acceptance_bench.json"},
    };
    bool ok = true;
    std::ostringstream d;
    for(const auto& [label, args] : runs) {
        const std::string a = capture(cli + " " + args + " 2>&1");
        const std::string fa = slurp("acceptance_bench.json");
        const std::string b = capture(cli + " " + args + " 2>&1");
        const std::string fb = slurp("acceptance_bench.json");
        const bool same = a == b && fa == fb && a.find("<status 0>") != std::string::npos;
        ok = ok && same;
        d << label << (same ? " identical" : " DIFFERS") << "; ";
    }
    std::remove("acceptance_bench.json");
    return {ok, d.str()};
}

Outcome c8_oracle() {
    const Curve curve(profiles::toy());
    const oracle::Domain dom = fixtures::toy_domain();
    CurvePoint acc;
    const long q = curve.order().get_si();
    long mismatches = 0;
    for(long k = 0; k <= q; ++k) {
        if(curve.mul(BigInt(k), curve.generator()) != acc) {
            ++mismatches;
        }
        acc = curve.add(acc, curve.generator());
    }

    Rng rng(808);
    int transcripts = 0;
    int bad = 0;
    for(int trial = 0; trial != 100; ++trial) {
        const long d_t = static_cast<long>(rng.uniform(q - 1)) + 1;
        const long r_a = static_cast<long>(rng.uniform(q - 1)) + 1;
        const long r_t = static_cast<long>(rng.uniform(q - 1)) + 1;
        const long d_b = static_cast<long>(rng.uniform(q - 1)) + 1;
        const long r_sm = static_cast<long>(rng.uniform(q - 1)) + 1;
        const std::uint32_t id = rng.next_u32();
        const oracle::Registration ref = oracle::register_entity(dom, d_t, id, r_a, r_t);
        if(ref.cert.inf || ref.d == 0 || ref.r == 0) {
            continue;
        }
        const TrustedThirdParty ttp = TrustedThirdParty::setup_with_key(profiles::toy(), Scalar{BigInt(d_t)});
        const auto pending = register_begin_with(ttp.params(), Identity{id}, Scalar{BigInt(r_a)});
        const Scalar forced{BigInt(r_t)};
        Credential meter;
        try {
            meter = register_finish(ttp.params(), Identity{id}, pending.r_a,
                                    ttp.issue_detached(pending.request, rng, &forced).response);
        } catch(const Error&) {
            ++bad;
            continue;
        }
        const oracle::Handshake hs = oracle::handshake(dom, ref, id, d_b, r_sm, 2000, 2001);
        if(hs.shared_x == 0) {
            continue;
        }
        // provider credential: only d_B and Q_B matter to the responder
        Credential provider;
        provider.id = Identity{simnet::kProviderId};
        provider.d = Scalar{BigInt(d_b)};
        provider.q = curve.mul_base(provider.d);
        Directory dir;
        dir.insert(RegistrationRecord{meter.id, meter.cert, meter.q, meter.digest});

        SmSession sm(ttp.params(), meter, provider.q);
        SpSession sp(ttp.params(), provider, dir);
        try {
            const AuthRequest req = sm.initiate_with(Scalar{BigInt(r_sm)}, Timestamp{2000});
            const AuthResponse resp = sp.respond(req, Timestamp{2001}, nullptr);
            const SessionKey k = sm.finalize(resp, Timestamp{2001});
            const bool match = meter.d.value() == ref.d && fixtures::to_oracle(meter.cert.point) == ref.cert &&
                               encode_msg(req, sm.layout()) == hs.msg1 && encode_msg(resp) == hs.msg2 &&
                               Bytes(k.bytes.begin(), k.bytes.end()) == hs.key;
            bad += match ? 0 : 1;
        } catch(const Error&) {
            ++bad;
        }
        ++transcripts;
    }
    std::ostringstream d;
    d << "scalar_mul vs iteration: " << q + 1 - mismatches << "/" << q + 1 << " scalars; oracle transcripts: "
      << transcripts - bad << "/" << transcripts;
    return {mismatches == 0 && bad == 0 && transcripts >= 90, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 registration identity", c1_registration}, {"2 key agreement", c2_key_agreement},
        {"3 wire accounting", c3_wire},              {"4 operation accounting", c4_counts},
        {"5 local timing model", c5_timing},         {"6 attack suite", c6_attacks},
        {"7 determinism", c7_determinism},           {"8 toy oracle", c8_oracle},
    };
    int failed = 0;
    for(const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch(const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
