#include "looprod/asclt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "looprod/errors.hpp"

namespace looprod {

std::vector<double> default_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(normal_quantile(0.05 * i));
    return grid;
}

LogAvgAccumulator::LogAvgAccumulator(std::vector<double> grid) : grid_(std::move(grid)) {
    if (grid_.empty()) throw Error(ErrorCode::UnsortedGrid, "grid must be nonempty");
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (!std::isfinite(grid_[j]) || (j > 0 && !(grid_[j - 1] < grid_[j]))) {
            throw Error(ErrorCode::UnsortedGrid, "grid must be finite and strictly increasing");
        }
    }
    bins_.resize(grid_.size() + 1);
}

void LogAvgAccumulator::accumulate(std::size_t n, double t) {
    if (n != lastN_ + 1) {
        throw Error(ErrorCode::NonSequentialN,
                    "expected n = " + std::to_string(lastN_ + 1) + ", got n = " + std::to_string(n));
    }
    if (std::isnan(t)) throw Error(ErrorCode::OutOfRange, "statistic is NaN at n = " + std::to_string(n));
    const auto bin = static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), t) - grid_.begin());
    bins_[bin] += 1.0 / static_cast<double>(n);
    lastN_ = n;
}

std::vector<double> LogAvgAccumulator::weights() const {
    std::vector<double> out(grid_.size());
    double running = 0.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        running += bins_[j].value();
        out[j] = running;
    }
    return out;
}

double LogAvgAccumulator::total_weight() const noexcept {
    double running = 0.0;
    for (const auto& bin : bins_) running += bin.value();
    return running;
}

std::vector<double> LogAvgAccumulator::evaluate() const {
    if (lastN_ < 2) throw Error(ErrorCode::Empty, "no accumulation yet");
    auto out = weights();
    const double total = total_weight();
    for (auto& w : out) w /= total;
    return out;
}

std::vector<double> LogAvgAccumulator::evaluate_log_normalized() const {
    if (lastN_ < 2) throw Error(ErrorCode::Empty, "no accumulation yet");
    auto out = weights();
    const double norm = std::log(static_cast<double>(lastN_));
    for (auto& w : out) w /= norm;
    return out;
}

LimitLaw asclt_comparison_law(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::LeaveOneOutLogProduct:
        case StatisticKind::LinearizedSum:
        case StatisticKind::StandardizedSum:
            return LimitLaw::std_normal();
        case StatisticKind::PrefixLogProduct:
            return LimitLaw::normal_var2();
        default:
            throw Error(ErrorCode::UnsupportedKind,
                        std::string(kind_name(kind)) + " has a point-mass limit; no logarithmic-average CDF to compare");
    }
}

StatisticTrajectory::StatisticTrajectory(const DistributionSpec& spec, StatisticKind kind, std::uint64_t seed,
                                         std::size_t exactCutoff)
    : kind_(kind),
      moments_(moments(spec)),
      exactCutoff_(exactCutoff),
      sampler_(spec, seed, 0),
      state_(moments_.mu) {
    asclt_comparison_law(kind);
    advance();  // n = 1
}

double StatisticTrajectory::advance() {
    const double x = sampler_();
    values_.push_back(x);
    state_.update(x);
    const double n = static_cast<double>(values_.size());
    if (kind_ == StatisticKind::PrefixLogProduct) {
        prefixLogs_ += std::log1p(state_.p1() / (n * moments_.mu));
    }
    return x;
}

double StatisticTrajectory::next() {
    advance();
    const std::size_t n = values_.size();
    const double rootN = std::sqrt(static_cast<double>(n));
    switch (kind_) {
        case StatisticKind::StandardizedSum:
            return state_.p1() / (moments_.sigma * rootN);
        case StatisticKind::PrefixLogProduct:
            return prefixLogs_.value() / (moments_.gamma * rootN);
        case StatisticKind::LinearizedSum: {
            if (n <= exactCutoff_) return linearized_statistic(values_, moments_.mu, moments_.gamma);
            ++seriesCount_;
            // sum_k u_k = (n-1) D / m
            const double m = (static_cast<double>(n) - 1.0) * moments_.mu;
            return (static_cast<double>(n) - 1.0) * state_.p1() / m / (moments_.gamma * rootN);
        }
        case StatisticKind::LeaveOneOutLogProduct: {
            if (n > exactCutoff_) {
                const auto series = loo_log_series(state_, moments_.gamma);
                if (series.valid) {
                    ++seriesCount_;
                    return series.value;
                }
                ++fallbackCount_;
            }
            return loo_log_statistic(values_, moments_.mu, moments_.gamma);
        }
        default:
            break;
    }
    return 0.0;  // unreachable: constructor rejects gm-* kinds
}

AscltReport run_asclt_path(const DistributionSpec& spec, StatisticKind kind, std::size_t N, std::uint64_t seed,
                           std::vector<double> grid, std::size_t exactCutoff) {
    if (N < 2) throw Error(ErrorCode::DegenerateN, "ASCLT runs need N >= 2");
    if (exactCutoff < 2) throw Error(ErrorCode::DegenerateN, "exactCutoff must be >= 2");

    AscltReport report;
    report.kind = kind;
    report.law = asclt_comparison_law(kind);
    report.N = N;
    report.exactCutoff = exactCutoff;
    report.seed = seed;

    LogAvgAccumulator acc(std::move(grid));
    StatisticTrajectory trajectory(spec, kind, seed, exactCutoff);
    for (std::size_t n = 2; n <= N; ++n) {
        const double t = trajectory.next();
        if (report.modeSwitchN == 0 && trajectory.series_evaluations() == 1) report.modeSwitchN = n;
        acc.accumulate(n, t);
    }

    report.seriesEvaluations = trajectory.series_evaluations();
    report.exactFallbacks = trajectory.exact_fallbacks();
    report.grid.assign(acc.grid().begin(), acc.grid().end());
    report.empirical = acc.evaluate();
    report.empiricalLogN = acc.evaluate_log_normalized();
    for (std::size_t j = 0; j < report.grid.size(); ++j) {
        const double f = limit_cdf(report.law, report.grid[j]);
        report.limit.push_back(f);
        report.gap.push_back(std::abs(report.empirical[j] - f));
        report.supGap = std::max(report.supGap, report.gap.back());
    }
    return report;
}

}  // namespace looprod
