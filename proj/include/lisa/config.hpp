#pragma once

// key=value configuration shared by the CLI subcommands.
//
//   profile       toy | paper-160 | strict      (default paper-160)
//   curve_file    path to a curve file; overrides the curve named by profile
//   window        freshness window in seconds   (default 5)
//   replay_cache  true | false                  (default true)
//   wire          paper-160 | strict            (default paper-160)
//   seed          unsigned integer              (default 1)
//   out           output path
//   meters        registered meters for demo/registrar (default 1)
//   reps          timing repetitions for bench  (default 200)
//   delay         open-channel delay in seconds (default 0)
//
// "strict" as a profile is shorthand for the paper-160 curve with the strict
// wire layout. Blank lines and lines starting with '#' are ignored.

#include "lisa/group.hpp"
#include "lisa/handshake.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace lisa {

struct Config {
    std::string profile = "paper-160";
    std::string curve_file;
    std::uint32_t window = 5;
    bool replay_cache = true;
    WireProfile wire = WireProfile::Paper160;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t meters = 1;
    std::size_t reps = 200;
    std::uint32_t delay = 0;

    HandshakeConfig handshake() const { return {window, replay_cache, wire}; }
};

/// Applies one key=value pair. Throws Error(InvalidConfig) for an unknown key
/// or a bad value.
void apply_setting(Config& cfg, std::string_view key, std::string_view value);

/// Parses a whole file body on top of `base`. Duplicate keys are rejected.
Config parse_config(std::string_view text, Config base = {});

/// Throws Error(IoFailure) if the file cannot be read.
Config load_config(const std::string& path, Config base = {});

/// The curve selected by curve_file, else by profile.
CurveParams resolve_curve(const Config& cfg);

/// Name of the selected curve as reported in output.
std::string curve_label(const Config& cfg);

} // namespace lisa
