#include "looprod/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "looprod/errors.hpp"

namespace looprod {

namespace {

std::ofstream open_for_write(const std::filesystem::path& outPath) {
    std::ofstream out(outPath);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + outPath.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& outPath) {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + outPath.string());
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.generic_string() + "'"; }

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report, bool includeTiming) {
    out << "n,M,ks,mean,sd,mean_remainder,mean_maxdev,seconds\n";
    for (const auto& row : report.rows) {
        out << row.n << ',' << row.M << ',' << format_number(row.ks) << ',' << format_number(row.mean) << ','
            << format_number(row.sd) << ',' << format_number(row.meanRemainder) << ','
            << format_number(row.meanMaxDeviation) << ',' << (includeTiming ? format_number(row.seconds) : "0")
            << '\n';
    }
}

void write_asclt_csv(std::ostream& out, const AscltReport& report) {
    out << "x,A_N,F_limit,gap\n";
    for (std::size_t j = 0; j < report.grid.size(); ++j) {
        out << format_number(report.grid[j]) << ',' << format_number(report.empirical[j]) << ','
            << format_number(report.limit[j]) << ',' << format_number(report.gap[j]) << '\n';
    }
}

void write_slln_csv(std::ostream& out, const SllnReport& report) {
    out << "n,gm_prefix,gm_loo,err_prefix,err_loo\n";
    for (const auto& row : report.rows) {
        out << row.n << ',' << format_number(row.gmPrefix) << ',' << format_number(row.gmLoo) << ','
            << format_number(row.errPrefix) << ',' << format_number(row.errLoo) << '\n';
    }
}

void emit_plot_script(const ConvergenceReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath) {
    if (report.rows.empty()) throw Error(ErrorCode::IoError, "refusing to plot an empty convergence report");
    auto out = open_for_write(outPath);
    out << "# KS distance to " << to_string(report.config.compareLaw) << " for statistic "
        << kind_name(report.config.kind) << ", " << report.config.spec.to_string() << "\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set logscale x\n"
        << "set logscale y\n"
        << "set xlabel 'n'\n"
        << "set ylabel 'KS distance'\n"
        << "plot " << quoted(csvPath) << " using 1:3 with linespoints title 'KS'\n";
    finish(out, outPath);
}

void emit_plot_script(const AscltReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath) {
    if (report.grid.empty()) throw Error(ErrorCode::IoError, "refusing to plot an empty ASCLT report");
    auto out = open_for_write(outPath);
    out << "# Logarithmic-average empirical CDF, statistic " << kind_name(report.kind) << ", N = " << report.N
        << "\n"
        << "set datafile separator ','\n"
        << "set key left top\n"
        << "set xlabel 'x'\n"
        << "set ylabel 'probability'\n"
        << "plot " << quoted(csvPath) << " using 1:2 with linespoints title 'A_N', \\\n"
        << "     " << quoted(csvPath) << " using 1:3 with lines title '" << to_string(report.law) << "'\n";
    finish(out, outPath);
}

void emit_plot_script(const SllnReport& report, const std::filesystem::path& csvPath,
                      const std::filesystem::path& outPath) {
    if (report.rows.empty()) throw Error(ErrorCode::IoError, "refusing to plot an empty SLLN report");
    auto out = open_for_write(outPath);
    out << "# Geometric-mean error |value - mu|, " << report.spec.to_string() << "\n"
        << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 'n'\n"
        << "set ylabel '|error|'\n"
        << "plot " << quoted(csvPath) << " using 1:4 with linespoints title 'gm-prefix', \\\n"
        << "     " << quoted(csvPath) << " using 1:5 with linespoints title 'gm-loo'\n";
    finish(out, outPath);
}

}  // namespace looprod
