#include "lisa/cli.hpp"

#include "lisa/actors.hpp"
#include "lisa/attacks.hpp"
#include "lisa/bench.hpp"
#include "lisa/config.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

namespace lisa::cli {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> profile;
    std::optional<std::string> curve_file;
    std::optional<std::string> window;
    std::optional<std::string> wire;
    std::optional<std::string> seed;
    std::optional<std::string> out;
    std::optional<std::string> meters;
    std::optional<std::string> reps;
    std::optional<std::string> delay;
    bool no_replay_cache = false;
    bool serial = false;
};

Config resolve(const Flags& f) {
    Config cfg;
    if(f.config) {
        cfg = load_config(*f.config);
    } else if(const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
        cfg = load_config(env);
    }
    auto apply = [&](const char* key, const std::optional<std::string>& v) {
        if(v) {
            apply_setting(cfg, key, *v);
        }
    };
    apply("profile", f.profile);
    apply("curve_file", f.curve_file);
    apply("window", f.window);
    apply("wire", f.wire);
    apply("seed", f.seed);
    apply("out", f.out);
    apply("meters", f.meters);
    apply("reps", f.reps);
    apply("delay", f.delay);
    if(f.no_replay_cache) {
        cfg.replay_cache = false;
    }
    return cfg;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if(!f || !(f << body) || !f.flush()) {
        throw Error(ErrorCode::IoFailure, "cannot write '" + path + "'");
    }
}

std::string describe(const Config& cfg) {
    return "curve " + curve_label(cfg) + " wire " + std::string(to_string(cfg.wire)) + " window " +
           std::to_string(cfg.window) + " replay_cache " + (cfg.replay_cache ? "on" : "off") + " seed " +
           std::to_string(cfg.seed);
}

int cmd_registrar(const Config& cfg, std::ostream& out) {
    const simnet::Deployment d = simnet::provision(resolve_curve(cfg), cfg.meters, cfg.seed);
    const DomainParams& params = d.params();
    std::ostringstream dir;
    dir << "# " << describe(cfg) << '\n';
    dir << "# q_t " << hex_encode(encode_point(params.q_t, params.x_bytes())) << '\n';
    d.directory->export_text(dir, params);

    out << describe(cfg) << '\n';
    out << "ttp_public " << hex_encode(encode_point(params.q_t, params.x_bytes())) << '\n';
    out << "provider " << hex_encode(encode(d.provider.id)) << " q "
        << hex_encode(encode_point(d.provider.q, params.x_bytes())) << '\n';
    for(const auto& m : d.meters) {
        out << "meter " << hex_encode(encode(m.id)) << " cert "
            << hex_encode(encode_point(m.cert.point, params.x_bytes())) << " digest " << hex_encode(m.digest.view())
            << '\n';
    }
    if(cfg.out.empty()) {
        out << dir.str();
    } else {
        write_file(cfg.out, dir.str());
        out << "directory written to " << cfg.out << '\n';
    }
    return kExitOk;
}

int cmd_demo(const Config& cfg, std::ostream& out) {
    const simnet::Deployment d = simnet::provision(resolve_curve(cfg), 1, cfg.seed);
    simnet::HandshakePlan plan;
    plan.config = cfg.handshake();
    plan.network.open_delay = cfg.delay;
    const auto r = simnet::run_handshakes(d, plan, simnet::AdversaryScript{}, cfg.seed);

    const auto& sm = r.actor<simnet::SmActor>(simnet::kMeterName).runs().at(0);
    const auto& sp_runs = r.actor<simnet::SpActor>(simnet::kProviderName).runs();

    out << describe(cfg) << '\n';
    out << "meter " << hex_encode(encode(d.meters[0].id)) << " provider " << hex_encode(encode(d.provider.id))
        << '\n';
    out << r.trace.dump();

    const SmSession& s = sm.session;
    const SpSession* p = !sp_runs.empty() && sp_runs[0].session ? &*sp_runs[0].session : nullptr;
    out << "sm_state " << to_string(s.state()) << '\n';
    out << "sp_state " << (p != nullptr ? to_string(p->state()) : std::string_view("Idle")) << '\n';
    out << "sm_key " << (s.key() ? hex_encode(s.key()->view()) : "-") << '\n';
    out << "sp_key " << (p != nullptr && p->key() ? hex_encode(p->key()->view()) : "-") << '\n';

    const bool ok = s.state() == SmState::Established && p != nullptr && p->state() == SpState::Challenged &&
                    s.key() == p->key();
    if(ok) {
        out << "MATCH\n";
        return kExitOk;
    }
    std::optional<ErrorCode> why = s.failure();
    if(!why && !sp_runs.empty()) {
        why = sp_runs[0].failure;
    }
    out << (s.key() && p != nullptr && p->key() ? "MISMATCH" : "FAILED")
        << (why ? " " + std::string(to_string(*why)) : std::string()) << '\n';
    return kExitProtocol;
}

int cmd_attack(const Config& cfg, const std::string& name, bool serial, std::ostream& out) {
    attacks::AttackConfig ac;
    ac.curve = resolve_curve(cfg);
    ac.handshake = cfg.handshake();
    ac.seed = cfg.seed;
    ac.parallel = !serial;
    const auto verdicts = attacks::run(name, ac);
    std::size_t failed = 0;
    for(const auto& v : verdicts) {
        out << v.line() << '\n';
        failed += v.pass ? 0 : 1;
    }
    out << "summary passed=" << verdicts.size() - failed << " failed=" << failed << '\n';
    if(!cfg.out.empty()) {
        write_file(cfg.out, attacks::summary_json(verdicts) + "\n");
    }
    return failed == 0 ? kExitOk : kExitProtocol;
}

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
    if(cfg.out.empty()) {
        throw Error(ErrorCode::IoFailure, "bench needs an output path (--out)");
    }
    const bench::Report report =
        bench::build_report(curve_label(cfg), resolve_curve(cfg), cfg.wire, cfg.seed, cfg.reps);
    bench::emit_report(report, cfg.out);
    const auto j = bench::to_json(report);
    out << bench::deterministic_view(j).dump(2) << '\n';
    if(report.local) {
        // Timings differ run to run, so they stay off stdout.
        err << "timing " << j.at("timing").dump() << '\n';
        err << "local_estimates " << j.at("local_estimates").dump() << '\n';
    }
    out << "report written to " << cfg.out << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Smart-meter authentication and key agreement: registrar, demo, attacks, bench", "lisa"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config, "key=value config file (default: $LISA_CONFIG)");
    app.add_option("--profile", f.profile, "toy | paper-160 | strict");
    app.add_option("--curve-file", f.curve_file, "curve parameter file");
    app.add_option("--window", f.window, "freshness window in seconds");
    app.add_flag("--no-replay-cache", f.no_replay_cache, "disable the SP replay cache");
    app.add_option("--wire", f.wire, "paper-160 | strict");
    app.add_option("--seed", f.seed, "RNG seed");
    app.add_option("--out", f.out, "output path");
    app.add_option("--meters", f.meters, "registered meters");
    app.add_option("--reps", f.reps, "timing repetitions (0 = counts only)");
    app.add_option("--delay", f.delay, "open-channel delay in seconds");

    auto* registrar = app.add_subcommand("registrar", "set up a TTP, register meters and a provider, export the directory");
    auto* demo = app.add_subcommand("demo", "one honest handshake on the simulated network");
    auto* attack = app.add_subcommand("attack", "run an attack scenario or 'all'");
    std::string scenario;
    attack->add_option("scenario", scenario, "scenario name or 'all'")->required();
    attack->add_flag("--serial", f.serial, "run the MITM sweep without OpenMP");
    auto* bench_cmd = app.add_subcommand("bench", "operation counts, wire sizes and timings; writes a JSON report");
    for(auto* sub : {registrar, demo, attack, bench_cmd}) {
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch(const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Config cfg = resolve(f);
        if(registrar->parsed()) {
            return cmd_registrar(cfg, out);
        }
        if(demo->parsed()) {
            return cmd_demo(cfg, out);
        }
        if(attack->parsed()) {
            const auto& names = attacks::scenario_names();
            if(scenario != "all" && std::find(names.begin(), names.end(), scenario) == names.end()) {
                err << "unknown scenario '" << scenario << "'; expected all";
                for(const auto& n : names) {
                    err << ", " << n;
                }
                err << '\n';
                return kExitUsage;
            }
            return cmd_attack(cfg, scenario, f.serial, out);
        }
        return cmd_bench(cfg, out, err);
    } catch(const Error& e) {
        err << e.what() << '\n';
        switch(e.code()) {
            case ErrorCode::InvalidConfig:
            case ErrorCode::InvalidProfile:
            case ErrorCode::IoFailure: return kExitUsage;
            default: return kExitProtocol;
        }
    }
}

} // namespace lisa::cli
