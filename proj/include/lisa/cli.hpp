#pragma once

// Command-line front end: registrar, demo, attack, bench.
//
// Exit codes: 0 success, 1 protocol failure, 2 usage error.
// Config comes from --config, else from $LISA_CONFIG; flags override it.

#include <iosfwd>
#include <string>
#include <vector>

namespace lisa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProtocol = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kConfigEnv = "LISA_CONFIG";

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lisa::cli
