#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "looprod/compensated.hpp"
#include "looprod/distributions.hpp"
#include "looprod/limits.hpp"
#include "looprod/statistics.hpp"
#include "looprod/streaming.hpp"

namespace looprod {

/// normal_quantile(p) for p = 0.05, 0.10, ..., 0.95.
std::vector<double> default_grid();

/*!
  Logarithmically weighted indicator counts over a fixed grid.

  Each accepted t_n adds 1/n to the bin of the first grid point x_j >= t_n
  (or to an overflow bin). weights()[j] is the running total of bins 0..j, so
  it equals sum_n (1/n) I(t_n <= x_j) and is nondecreasing in j by construction.
  The first accepted index is n = 2 and indices must then be consecutive.
*/
class LogAvgAccumulator {
public:
    /// Throws Error{UnsortedGrid} unless the grid is nonempty and strictly increasing.
    explicit LogAvgAccumulator(std::vector<double> grid);

    /// Throws Error{NonSequentialN} unless n == last_n() + 1.
    void accumulate(std::size_t n, double t);

    /// A_N(x_j) = weights[j] / total_weight. Throws Error{Empty} before the first accumulate().
    [[nodiscard]] std::vector<double> evaluate() const;
    /// weights[j] / log N, the normalization written in the classical statement.
    [[nodiscard]] std::vector<double> evaluate_log_normalized() const;

    [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
    [[nodiscard]] std::vector<double> weights() const;
    [[nodiscard]] double total_weight() const noexcept;
    [[nodiscard]] std::size_t last_n() const noexcept { return lastN_; }

private:
    std::vector<double> grid_;
    std::vector<CompensatedSum> bins_;  // grid_.size() + 1, last one is overflow
    std::size_t lastN_ = 1;
};

/// ASCLT comparison law for a statistic kind, on the log scale. Throws UnsupportedKind for gm-*.
LimitLaw asclt_comparison_law(StatisticKind kind);

/*!
  Produces t_2, t_3, ..., t_N along a single path drawn from stream 0 of `seed`.

  LeaveOneOutLogProduct is evaluated exactly (O(n)) while n <= exactCutoff and
  from the power-sum series afterwards, falling back to the exact form
  whenever the series is flagged invalid. LinearizedSum follows the same
  split, using the exact first-order closed form past the cutoff.
  PrefixLogProduct and StandardizedSum are updated exactly in O(1).
*/
class StatisticTrajectory {
public:
    StatisticTrajectory(const DistributionSpec& spec, StatisticKind kind, std::uint64_t seed, std::size_t exactCutoff);

    /// Draws the next observation and returns t_n; the first call returns t_2.
    double next();

    [[nodiscard]] std::size_t n() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t series_evaluations() const noexcept { return seriesCount_; }
    [[nodiscard]] std::size_t exact_fallbacks() const noexcept { return fallbackCount_; }
    [[nodiscard]] std::span<const double> path() const noexcept { return values_; }

private:
    double advance();

    StatisticKind kind_;
    Moments moments_;
    std::size_t exactCutoff_;
    Sampler sampler_;
    std::vector<double> values_;
    PowerSumState state_;
    CompensatedSum prefixLogs_;
    std::size_t seriesCount_ = 0;
    std::size_t fallbackCount_ = 0;
};

struct AscltReport {
    StatisticKind kind = StatisticKind::LeaveOneOutLogProduct;
    LimitLaw law;
    std::size_t N = 0;
    std::size_t exactCutoff = 0;
    std::uint64_t seed = 0;
    std::size_t firstN = 2;
    /// First n evaluated by the series, 0 if the run never left exact mode.
    std::size_t modeSwitchN = 0;
    std::size_t seriesEvaluations = 0;
    std::size_t exactFallbacks = 0;

    std::vector<double> grid;
    std::vector<double> empirical;      // A_N, normalized by sum_{n=2}^N 1/n
    std::vector<double> empiricalLogN;  // same weights normalized by log N
    std::vector<double> limit;
    std::vector<double> gap;  // |A_N - limit|
    double supGap = 0.0;
};

/// Throws Error{DegenerateN} for N < 2 or exactCutoff < 2; UnsupportedKind for gm-* kinds.
AscltReport run_asclt_path(const DistributionSpec& spec, StatisticKind kind, std::size_t N, std::uint64_t seed,
                           std::vector<double> grid, std::size_t exactCutoff);

}  // namespace looprod
