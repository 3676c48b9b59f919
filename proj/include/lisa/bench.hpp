#pragma once

// Cost accounting: exact per-entity operation counts and wire sizes for one
// handshake, wall-clock timing of the primitives, and a JSON report that sets
// both against the published figures.
//
// Report layout (one JSON object):
//   profile, wire, seed, reps
//   counters      {sm: {...}, sp: {...}}    exact, deterministic
//   wire_stats    {rounds, bits_msg1, bits_msg2, bits_total}
//   comparison    [{metric, published, measured, deviation, note}]
//   timing        [{operation, entity, reps, median_us, spread_us, min_us, max_us}]
//   local_estimates  {...}                      estimates from local timings
// Only `timing` and `local_estimates` vary between runs with the same seed.

#include "lisa/handshake.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lisa::bench {

struct WireStats {
    std::size_t rounds = 2;
    std::size_t bits_msg1 = 0;
    std::size_t bits_msg2 = 0;
    std::size_t bits_total = 0;
    friend bool operator==(const WireStats&, const WireStats&) = default;
};

struct HandshakeMeasurement {
    OpCounters sm;
    OpCounters sp;
    WireStats wire;
    bool keys_match = false;
};

/// One honest handshake between a fresh meter and provider, counted.
HandshakeMeasurement measure_handshake(const CurveParams& curve, WireProfile wire, std::uint64_t seed);

struct TimingSample {
    std::string operation; // scalar_mul, point_add, h0, kdf, sm_handshake
    std::string entity;    // "any" for primitives, "sm" for the handshake
    std::size_t reps = 0;
    double median_us = 0;
    double spread_us = 0;  // interquartile range
    double min_us = 0;
    double max_us = 0;
};

inline constexpr std::size_t kMinReps = 100;

/// scalar_mul, point_add, h0 and kdf timed in isolation, single threaded.
/// Throws Error(InvalidConfig) if reps < kMinReps.
std::vector<TimingSample> time_primitives(const CurveParams& curve, std::size_t reps, std::uint64_t seed);

/// SM-side compute of one handshake (initiate + finalize); the SP's part is
/// run between the two halves but not timed.
TimingSample time_sm_handshake(const CurveParams& curve, WireProfile wire, std::size_t reps, std::uint64_t seed);

struct ComparisonRow {
    std::string metric;
    nlohmann::json published;
    nlohmann::json measured;
    bool deviation = false;
    std::string note;
};

struct LocalEstimates {
    double t_m_us = 0;
    double t_a_us = 0;
    double t_h_us = 0;
    double sm_estimate_us = 0; // 2 T_m + T_h
    double sp_estimate_us = 0; // counted SP formula with local times
    double sm_measured_us = 0;
    double sm_ratio = 0;       // measured / estimate
    bool ordering_holds = false; // T_a < T_h < T_m
    bool within_tolerance = false; // |ratio - 1| <= 0.25
};

struct Report {
    std::string profile;
    WireProfile wire = WireProfile::Paper160;
    std::uint64_t seed = 0;
    std::size_t reps = 0;
    HandshakeMeasurement measurement;
    std::vector<ComparisonRow> comparison;
    std::vector<TimingSample> timing;
    std::optional<LocalEstimates> local;
};

/// Published figures alongside the measured analogs, deviations flagged.
std::vector<ComparisonRow> compare(const HandshakeMeasurement& m, WireProfile wire);

LocalEstimates local_estimates(const std::vector<TimingSample>& primitives, const TimingSample& sm_handshake,
                         const OpCounters& sp);

/// Counts always; timing only if reps > 0.
Report build_report(const std::string& profile, const CurveParams& curve, WireProfile wire, std::uint64_t seed,
                    std::size_t reps);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// The report minus the run-dependent keys (timing, local_estimates).
nlohmann::json deterministic_view(const nlohmann::json& report);

/// Writes the report as pretty JSON. Throws Error(IoFailure).
void emit_report(const Report& r, const std::string& path);

} // namespace lisa::bench
