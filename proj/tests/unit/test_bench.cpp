#include "doctest.h"
#include "fixtures.hpp"

#include "lisa/bench.hpp"

#include <cstdio>
#include <fstream>

using namespace lisa;
using namespace lisa::bench;

namespace {

const ComparisonRow& row(const std::vector<ComparisonRow>& rows, std::string_view metric) {
    for(const auto& r : rows) {
        if(r.metric == metric) {
            return r;
        }
    }
    throw std::runtime_error("missing row " + std::string(metric));
}

double median(const std::vector<TimingSample>& ts, std::string_view op) {
    for(const auto& t : ts) {
        if(t.operation == op) {
            return t.median_us;
        }
    }
    throw std::runtime_error("missing sample");
}

} // namespace

TEST_SUITE("bench") {

TEST_CASE("paper wire: exact counts and 352 + 192 bits") {
    const auto m = measure_handshake(profiles::paper160(), WireProfile::Paper160, 1);
    CHECK(m.keys_match);
    CHECK(m.sm == OpCounters{2, 0, 2, 1, 0, 0});
    CHECK(m.sp == OpCounters{2, 1, 3, 1, 0, 0});
    CHECK(m.sm.table_hashes() == 1);
    CHECK(m.sp.table_hashes() == 2);
    CHECK(m.wire == WireStats{2, 352, 192, 544});

    const auto rows = compare(m, WireProfile::Paper160);
    CHECK_FALSE(row(rows, "bits_total").deviation);
    CHECK_FALSE(row(rows, "sm_mults").deviation);
    CHECK_FALSE(row(rows, "sm_hashes").deviation);
    CHECK_FALSE(row(rows, "sm_compute_ms").deviation);
    CHECK(row(rows, "sm_compute_ms").measured == "2T_m + 1T_h");
    CHECK(row(rows, "sp_mults").deviation);
    CHECK(row(rows, "sp_mults").measured == 2);
    CHECK_FALSE(row(rows, "sp_adds").deviation);
    CHECK_FALSE(row(rows, "sp_hashes").deviation);
    CHECK_FALSE(row(rows, "pairings_and_ciphers").deviation);
}

TEST_CASE("strict wire: 576 bits, flagged") {
    const auto m = measure_handshake(profiles::paper160(), WireProfile::Strict, 1);
    CHECK(m.keys_match);
    CHECK(m.wire == WireStats{2, 384, 192, 576});
    CHECK(m.sm.hashes == 4);
    CHECK(m.sp.hashes == 5);
    CHECK(row(compare(m, WireProfile::Strict), "bits_total").deviation);
}

TEST_CASE("counts do not depend on the seed or the curve") {
    const auto a = measure_handshake(profiles::toy(), WireProfile::Paper160, 1);
    const auto b = measure_handshake(profiles::paper160(), WireProfile::Paper160, 99);
    CHECK(a.sm == b.sm);
    CHECK(a.sp == b.sp);
    CHECK(a.wire == b.wire);
}

TEST_CASE("report JSON round-trips and its deterministic view is stable") {
    const Report r = build_report("paper-160", profiles::paper160(), WireProfile::Paper160, 7, 0);
    CHECK(r.timing.empty());
    CHECK_FALSE(r.local.has_value());
    const auto j = to_json(r);
    const Report back = report_from_json(j);
    CHECK(to_json(back) == j);
    const Report again = build_report("paper-160", profiles::paper160(), WireProfile::Paper160, 7, 0);
    CHECK(deterministic_view(to_json(again)) == deterministic_view(j));
    CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), Error);
}

TEST_CASE("timing: minimum reps, sane ordering of the expensive ops") {
    CHECK_THROWS_WITH_AS(time_primitives(profiles::toy(), 10, 1), doctest::Contains("INVALID_CONFIG"), Error);
    const auto ts = time_primitives(profiles::paper160(), kMinReps, 1);
    REQUIRE(ts.size() == 4);
    for(const auto& t : ts) {
        CHECK(t.reps == kMinReps);
        CHECK(t.min_us <= t.median_us);
        CHECK(t.median_us <= t.max_us);
        CHECK(t.spread_us >= 0);
    }
    CHECK(median(ts, "point_add") < median(ts, "scalar_mul"));
    CHECK(median(ts, "h0") < median(ts, "scalar_mul"));

    const Report r = build_report("paper-160", profiles::paper160(), WireProfile::Paper160, 1, kMinReps);
    REQUIRE(r.local.has_value());
    CHECK(r.local->sm_estimate_us == doctest::Approx(2 * r.local->t_m_us + r.local->t_h_us));
    const auto j = to_json(r);
    CHECK(j.contains("timing"));
    CHECK(j.contains("local_estimates"));
    CHECK_FALSE(deterministic_view(j).contains("timing"));
}

TEST_CASE("local estimates arithmetic") {
    std::vector<TimingSample> prims{{"scalar_mul", "any", 100, 100, 0, 0, 0},
                                    {"point_add", "any", 100, 1, 0, 0, 0},
                                    {"h0", "any", 100, 2, 0, 0, 0}};
    const TimingSample sm{"sm_handshake", "sm", 100, 240, 0, 0, 0};
    const auto t = local_estimates(prims, sm, OpCounters{2, 1, 3, 1, 0, 0});
    CHECK(t.sm_estimate_us == 202);
    CHECK(t.sp_estimate_us == 205);
    CHECK(t.sm_ratio == doctest::Approx(240.0 / 202));
    CHECK(t.ordering_holds);
    CHECK(t.within_tolerance);
    prims[1].median_us = 3;
    CHECK_FALSE(local_estimates(prims, sm, OpCounters{}).ordering_holds);
}

TEST_CASE("emit_report writes parseable JSON and fails on a bad path") {
    const Report r = build_report("toy", profiles::toy(), WireProfile::Paper160, 1, 0);
    const std::string path = "bench_test_report.json";
    emit_report(r, path);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("wire_stats").at("bits_total") == 544);
    std::remove(path.c_str());
    CHECK_THROWS_WITH_AS(emit_report(r, "/nonexistent/dir/r.json"), doctest::Contains("IO_FAILURE"), Error);
}

}
