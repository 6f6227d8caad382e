#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace looprod::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Seed used when neither --seed nor a config file provides one.
inline constexpr unsigned long long kDefaultSeed = 20240601ULL;

/*!
  Entry point behind the `looprod` binary. `args` excludes the program name.

  Subcommands: clt, asclt, slln, identity, dist-table. Returns 0 on success,
  1 on runtime failure (or a failed identity check), 2 on usage or
  configuration errors. The resolved configuration is always echoed to `err`.
*/
int parse_and_run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace looprod::cli
