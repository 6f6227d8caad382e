#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "looprod/asclt.hpp"
#include "looprod/montecarlo.hpp"

namespace looprod {

/// Shortest decimal string that round-trips to the same double; "nan"/"inf" otherwise.
std::string format_number(double value);

/// Header `n,M,ks,mean,sd,mean_remainder,mean_maxdev,seconds`. With includeTiming false the
/// seconds column is written as 0 so the bytes depend only on the configuration.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report, bool includeTiming);

/// Header `x,A_N,F_limit,gap`, one row per grid point.
void write_asclt_csv(std::ostream& out, const AscltReport& report);

/// Header `n,gm_prefix,gm_loo,err_prefix,err_loo`.
void write_slln_csv(std::ostream& out, const SllnReport& report);

/*!
  Writes a gnuplot script that plots the CSV at `csvPath`. The script is only
  written, never executed. Throws Error{IoError} for an empty report or an
  unwritable output path.
*/
void emit_plot_script(const ConvergenceReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath);
void emit_plot_script(const AscltReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath);
void emit_plot_script(const SllnReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath);

}  // namespace looprod
