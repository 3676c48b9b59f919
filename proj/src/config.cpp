#include "lisa/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lisa {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if(b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_uint(std::string_view key, std::string_view value, T max = std::numeric_limits<T>::max()) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if(ec != std::errc{} || ptr != value.data() + value.size() || value.empty() || v > max) {
        throw Error(ErrorCode::InvalidConfig,
                    "'" + std::string(key) + "' expects an unsigned integer, got '" + std::string(value) + "'");
    }
    return static_cast<T>(v);
}

bool parse_bool(std::string_view key, std::string_view value) {
    if(value == "true" || value == "1" || value == "on" || value == "yes") {
        return true;
    }
    if(value == "false" || value == "0" || value == "off" || value == "no") {
        return false;
    }
    throw Error(ErrorCode::InvalidConfig, "'" + std::string(key) + "' expects true/false");
}

} // namespace

void apply_setting(Config& cfg, std::string_view key, std::string_view value) {
    if(key == "profile") {
        if(value != "toy" && value != "paper-160" && value != "strict") {
            throw Error(ErrorCode::InvalidConfig, "unknown profile '" + std::string(value) + "'");
        }
        cfg.profile = std::string(value);
        if(value == "strict") {
            cfg.wire = WireProfile::Strict;
        }
    } else if(key == "curve_file") {
        cfg.curve_file = std::string(value);
    } else if(key == "window") {
        cfg.window = parse_uint<std::uint32_t>(key, value);
    } else if(key == "replay_cache") {
        cfg.replay_cache = parse_bool(key, value);
    } else if(key == "wire") {
        cfg.wire = parse_wire_profile(value);
    } else if(key == "seed") {
        cfg.seed = parse_uint<std::uint64_t>(key, value);
    } else if(key == "out") {
        cfg.out = std::string(value);
    } else if(key == "meters") {
        cfg.meters = parse_uint<std::size_t>(key, value, 1u << 20);
        if(cfg.meters == 0) {
            throw Error(ErrorCode::InvalidConfig, "'meters' must be at least 1");
        }
    } else if(key == "reps") {
        cfg.reps = parse_uint<std::size_t>(key, value, 1u << 24);
    } else if(key == "delay") {
        cfg.delay = parse_uint<std::uint32_t>(key, value);
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown config key '" + std::string(key) + "'");
    }
}

Config parse_config(std::string_view text, Config base) {
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while(!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const std::string_view line = trim(raw);
        if(line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if(eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if(!seen.insert(std::string(key)).second) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": duplicate key '" +
                                                      std::string(key) + "'");
        }
        apply_setting(base, key, value);
    }
    return base;
}

Config load_config(const std::string& path, Config base) {
    std::ifstream in(path, std::ios::binary);
    if(!in) {
        throw Error(ErrorCode::IoFailure, "cannot read config '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

CurveParams resolve_curve(const Config& cfg) {
    if(!cfg.curve_file.empty()) {
        return profiles::load(cfg.curve_file);
    }
    return profiles::by_name(cfg.profile == "strict" ? "paper-160" : cfg.profile);
}

std::string curve_label(const Config& cfg) {
    return cfg.curve_file.empty() ? resolve_curve(cfg).name : cfg.curve_file;
}

} // namespace lisa
