#include "lisa/bench.hpp"

#include "lisa/actors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace lisa::bench {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kWarmup = 10;

TimingSample summarize(std::string op, std::string entity, std::vector<double> us) {
    std::sort(us.begin(), us.end());
    auto at = [&](double q) { return us[static_cast<std::size_t>(q * static_cast<double>(us.size() - 1))]; };
    TimingSample s;
    s.operation = std::move(op);
    s.entity = std::move(entity);
    s.reps = us.size();
    s.median_us = at(0.5);
    s.spread_us = at(0.75) - at(0.25);
    s.min_us = us.front();
    s.max_us = us.back();
    return s;
}

/// `reps` samples of `fn`, each averaged over `batch` calls.
template <typename Fn>
std::vector<double> sample(std::size_t reps, std::size_t batch, Fn&& fn) {
    for(std::size_t i = 0; i != kWarmup; ++i) {
        fn(i);
    }
    std::vector<double> out;
    out.reserve(reps);
    for(std::size_t r = 0; r != reps; ++r) {
        const auto t0 = Clock::now();
        for(std::size_t b = 0; b != batch; ++b) {
            fn(r * batch + b);
        }
        const std::chrono::duration<double, std::micro> dt = Clock::now() - t0;
        out.push_back(dt.count() / static_cast<double>(batch));
    }
    return out;
}

void check_reps(std::size_t reps) {
    if(reps < kMinReps) {
        throw Error(ErrorCode::InvalidConfig, "timing needs at least " + std::to_string(kMinReps) + " repetitions");
    }
}

// Keeps results observable so the timed calls are not optimised away.
volatile std::uint8_t g_sink = 0;

double median_of(const std::vector<TimingSample>& v, std::string_view op) {
    for(const auto& s : v) {
        if(s.operation == op) {
            return s.median_us;
        }
    }
    throw Error(ErrorCode::InvalidState, "no timing for " + std::string(op));
}

nlohmann::json counters_json(const OpCounters& c) {
    return {{"mults", c.mults},         {"adds", c.adds},           {"hashes", c.hashes},
            {"kdf_calls", c.kdf_calls}, {"table_hashes", c.table_hashes()},
            {"pairings", c.pairings},   {"sym_ciphers", c.sym_ciphers}};
}

OpCounters counters_from(const nlohmann::json& j) {
    OpCounters c;
    c.mults = j.at("mults").get<std::uint64_t>();
    c.adds = j.at("adds").get<std::uint64_t>();
    c.hashes = j.at("hashes").get<std::uint64_t>();
    c.kdf_calls = j.at("kdf_calls").get<std::uint64_t>();
    c.pairings = j.at("pairings").get<std::uint64_t>();
    c.sym_ciphers = j.at("sym_ciphers").get<std::uint64_t>();
    return c;
}

std::string formula(const OpCounters& c) {
    std::string out;
    auto term = [&](std::uint64_t n, const char* sym) {
        if(n == 0) {
            return;
        }
        if(!out.empty()) {
            out += " + ";
        }
        out += std::to_string(n) + sym;
    };
    term(c.mults, "T_m");
    term(c.adds, "T_a");
    term(c.table_hashes(), "T_h");
    return out;
}

} // namespace

HandshakeMeasurement measure_handshake(const CurveParams& curve, WireProfile wire, std::uint64_t seed) {
    const simnet::Deployment d = simnet::provision(curve, 1, seed);
    HandshakeConfig cfg;
    cfg.wire = wire;
    Rng rng(seed, 1);
    const Timestamp now{1000};
    ReplayCache cache(cfg.window);

    HandshakeMeasurement m;
    SmSession sm(d.params(), d.meters[0], d.provider.q, cfg);
    SpSession sp(d.params(), d.provider, *d.directory, cfg);
    const AuthRequest req = sm.initiate(now, rng, &m.sm);
    const AuthResponse resp = sp.respond(req, now, &cache, &m.sp);
    const SessionKey k = sm.finalize(resp, now, &m.sm);
    m.keys_match = sp.key() && *sp.key() == k;

    const WireLayout layout = sm.layout();
    m.wire.bits_msg1 = 8 * encode_msg(req, layout).size();
    m.wire.bits_msg2 = 8 * encode_msg(resp).size();
    m.wire.bits_total = m.wire.bits_msg1 + m.wire.bits_msg2;
    return m;
}

std::vector<TimingSample> time_primitives(const CurveParams& curve_params, std::size_t reps, std::uint64_t seed) {
    check_reps(reps);
    const Curve curve(curve_params);
    Rng rng(seed, 2);
    const std::size_t x_width = curve_params.x_bytes();

    constexpr std::size_t kPool = 64;
    std::vector<Scalar> scalars;
    std::vector<CurvePoint> points;
    for(std::size_t i = 0; i != kPool; ++i) {
        scalars.push_back(curve.random_scalar(rng));
        points.push_back(curve.mul_base(curve.random_scalar(rng)));
    }
    Bytes msg(2 * x_width + kIdentityBytes);
    rng.fill(msg);

    std::vector<TimingSample> out;
    out.push_back(summarize("scalar_mul", "any", sample(reps, 1, [&](std::size_t i) {
                                const CurvePoint p = curve.mul(scalars[i % kPool], points[(i + 1) % kPool]);
                                g_sink = g_sink ^ static_cast<std::uint8_t>(p.x().get_ui());
                            })));
    out.push_back(summarize("point_add", "any", sample(reps, 64, [&](std::size_t i) {
                                const CurvePoint p = curve.add(points[i % kPool], points[(i + 7) % kPool]);
                                g_sink = g_sink ^ static_cast<std::uint8_t>(p.x().get_ui());
                            })));
    out.push_back(summarize("h0", "any", sample(reps, 64, [&](std::size_t i) {
                                msg[0] = static_cast<std::uint8_t>(i);
                                g_sink = g_sink ^ h0(msg).bytes[0];
                            })));
    const FieldElement a = points[0].x_coord();
    const FieldElement b = points[1].x_coord();
    out.push_back(summarize("kdf", "any", sample(reps, 64, [&](std::size_t i) {
                                const SessionKey k = kdf(Identity{static_cast<std::uint32_t>(i)}, a, b,
                                                         Timestamp{1000}, Timestamp{1000}, x_width);
                                g_sink = g_sink ^ k.bytes[0];
                            })));
    return out;
}

TimingSample time_sm_handshake(const CurveParams& curve, WireProfile wire, std::size_t reps, std::uint64_t seed) {
    check_reps(reps);
    const simnet::Deployment d = simnet::provision(curve, 1, seed);
    HandshakeConfig cfg;
    cfg.wire = wire;
    cfg.replay_cache = false;
    Rng rng(seed, 3);
    const Timestamp now{1000};

    std::vector<double> us;
    for(std::size_t r = 0; r != reps + kWarmup; ++r) {
        SmSession sm(d.params(), d.meters[0], d.provider.q, cfg);
        SpSession sp(d.params(), d.provider, *d.directory, cfg);
        const Scalar r_sm = d.params().ec().random_scalar(rng);

        const auto t0 = Clock::now();
        const AuthRequest req = sm.initiate_with(r_sm, now);
        const auto t1 = Clock::now();
        const AuthResponse resp = sp.respond(req, now, nullptr);
        const auto t2 = Clock::now();
        g_sink = g_sink ^ sm.finalize(resp, now).bytes[0];
        const auto t3 = Clock::now();

        if(r >= kWarmup) {
            const std::chrono::duration<double, std::micro> dt = (t1 - t0) + (t3 - t2);
            us.push_back(dt.count());
        }
    }
    return summarize("sm_handshake", "sm", std::move(us));
}

std::vector<ComparisonRow> compare(const HandshakeMeasurement& m, WireProfile wire) {
    std::vector<ComparisonRow> rows;
    const std::string sm_formula = formula(m.sm);
    const std::string sp_formula = formula(m.sp);
    rows.push_back({"sm_compute_ms", 11.826, sm_formula, sm_formula != "2T_m + 1T_h",
                    "published ms are hardware-specific; measured column is the counted cost formula"});
    rows.push_back({"sp_compute_ms", 0.992, sp_formula, true,
                    "published formula T_m + T_a + 2T_h; the responder performs d_B*R_SM and the ECQV "
                    "reconstruction, i.e. two scalar multiplications"});
    rows.push_back({"bits_total", 544, m.wire.bits_total, m.wire.bits_total != 544,
                    wire == WireProfile::Strict ? "strict wire profile carries the full certificate x" : ""});
    rows.push_back({"rounds", 2, m.wire.rounds, m.wire.rounds != 2, ""});
    rows.push_back({"sm_mults", 2, m.sm.mults, m.sm.mults != 2, ""});
    rows.push_back({"sm_hashes", 1, m.sm.table_hashes(), m.sm.table_hashes() != 1,
                    "kdf call excluded, as in the published tally"});
    rows.push_back({"sp_mults", 1, m.sp.mults, m.sp.mults != 1, "see sp_compute_ms"});
    rows.push_back({"sp_adds", 1, m.sp.adds, m.sp.adds != 1, ""});
    rows.push_back({"sp_hashes", 2, m.sp.table_hashes(), m.sp.table_hashes() != 2,
                    "kdf call excluded, as in the published tally"});
    const std::uint64_t structural = m.sm.pairings + m.sp.pairings + m.sm.sym_ciphers + m.sp.sym_ciphers;
    rows.push_back({"pairings_and_ciphers", 0, structural, structural != 0, ""});
    return rows;
}

LocalEstimates local_estimates(const std::vector<TimingSample>& primitives, const TimingSample& sm_handshake,
                         const OpCounters& sp) {
    LocalEstimates t;
    t.t_m_us = median_of(primitives, "scalar_mul");
    t.t_a_us = median_of(primitives, "point_add");
    t.t_h_us = median_of(primitives, "h0");
    t.sm_estimate_us = 2 * t.t_m_us + t.t_h_us;
    t.sp_estimate_us = static_cast<double>(sp.mults) * t.t_m_us + static_cast<double>(sp.adds) * t.t_a_us +
                       static_cast<double>(sp.table_hashes()) * t.t_h_us;
    t.sm_measured_us = sm_handshake.median_us;
    t.sm_ratio = t.sm_measured_us / t.sm_estimate_us;
    t.ordering_holds = t.t_a_us < t.t_h_us && t.t_h_us < t.t_m_us;
    t.within_tolerance = std::abs(t.sm_ratio - 1.0) <= 0.25;
    return t;
}

Report build_report(const std::string& profile, const CurveParams& curve, WireProfile wire, std::uint64_t seed,
                    std::size_t reps) {
    Report r;
    r.profile = profile;
    r.wire = wire;
    r.seed = seed;
    r.reps = reps;
    r.measurement = measure_handshake(curve, wire, seed);
    r.comparison = compare(r.measurement, wire);
    if(reps > 0) {
        r.timing = time_primitives(curve, reps, seed);
        const TimingSample hs = time_sm_handshake(curve, wire, reps, seed);
        r.local = local_estimates(r.timing, hs, r.measurement.sp);
        r.timing.push_back(hs);
    }
    return r;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["profile"] = r.profile;
    j["wire"] = std::string(to_string(r.wire));
    j["seed"] = r.seed;
    j["reps"] = r.reps;
    j["keys_match"] = r.measurement.keys_match;
    j["counters"] = {{"sm", counters_json(r.measurement.sm)}, {"sp", counters_json(r.measurement.sp)}};
    const WireStats& w = r.measurement.wire;
    j["wire_stats"] = {
        {"rounds", w.rounds}, {"bits_msg1", w.bits_msg1}, {"bits_msg2", w.bits_msg2}, {"bits_total", w.bits_total}};
    j["comparison"] = nlohmann::json::array();
    for(const auto& row : r.comparison) {
        j["comparison"].push_back({{"metric", row.metric},
                                   {"published", row.published},
                                   {"measured", row.measured},
                                   {"deviation", row.deviation},
                                   {"note", row.note}});
    }
    j["timing"] = nlohmann::json::array();
    for(const auto& s : r.timing) {
        j["timing"].push_back({{"operation", s.operation},
                               {"entity", s.entity},
                               {"reps", s.reps},
                               {"median_us", s.median_us},
                               {"spread_us", s.spread_us},
                               {"min_us", s.min_us},
                               {"max_us", s.max_us}});
    }
    if(r.local) {
        const LocalEstimates& t = *r.local;
        j["local_estimates"] = {{"t_m_us", t.t_m_us},
                             {"t_a_us", t.t_a_us},
                             {"t_h_us", t.t_h_us},
                             {"sm_estimate_us", t.sm_estimate_us},
                             {"sp_estimate_us", t.sp_estimate_us},
                             {"sm_measured_us", t.sm_measured_us},
                             {"sm_ratio", t.sm_ratio},
                             {"ordering_holds", t.ordering_holds},
                             {"within_tolerance", t.within_tolerance}};
    }
    return j;
}

Report report_from_json(const nlohmann::json& j) {
    try {
        Report r;
        r.profile = j.at("profile").get<std::string>();
        r.wire = parse_wire_profile(j.at("wire").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.reps = j.at("reps").get<std::size_t>();
        r.measurement.keys_match = j.at("keys_match").get<bool>();
        r.measurement.sm = counters_from(j.at("counters").at("sm"));
        r.measurement.sp = counters_from(j.at("counters").at("sp"));
        const auto& w = j.at("wire_stats");
        r.measurement.wire = {w.at("rounds").get<std::size_t>(), w.at("bits_msg1").get<std::size_t>(),
                              w.at("bits_msg2").get<std::size_t>(), w.at("bits_total").get<std::size_t>()};
        for(const auto& row : j.at("comparison")) {
            r.comparison.push_back({row.at("metric").get<std::string>(), row.at("published"), row.at("measured"),
                                    row.at("deviation").get<bool>(), row.at("note").get<std::string>()});
        }
        for(const auto& s : j.at("timing")) {
            r.timing.push_back({s.at("operation").get<std::string>(), s.at("entity").get<std::string>(),
                                s.at("reps").get<std::size_t>(), s.at("median_us").get<double>(),
                                s.at("spread_us").get<double>(), s.at("min_us").get<double>(),
                                s.at("max_us").get<double>()});
        }
        if(j.contains("local_estimates")) {
            const auto& t = j.at("local_estimates");
            r.local = LocalEstimates{t.at("t_m_us").get<double>(),         t.at("t_a_us").get<double>(),
                                  t.at("t_h_us").get<double>(),         t.at("sm_estimate_us").get<double>(),
                                  t.at("sp_estimate_us").get<double>(), t.at("sm_measured_us").get<double>(),
                                  t.at("sm_ratio").get<double>(),       t.at("ordering_holds").get<bool>(),
                                  t.at("within_tolerance").get<bool>()};
        }
        return r;
    } catch(const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad report: ") + e.what());
    }
}

nlohmann::json deterministic_view(const nlohmann::json& report) {
    nlohmann::json j = report;
    j.erase("timing");
    j.erase("local_estimates");
    return j;
}

void emit_report(const Report& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if(!out) {
        throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    }
    out << to_json(r).dump(2) << '\n';
    out.flush();
    if(!out) {
        throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
    }
}

} // namespace lisa::bench
