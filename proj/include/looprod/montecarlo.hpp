#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "looprod/distributions.hpp"
#include "looprod/limits.hpp"
#include "looprod/statistics.hpp"

namespace looprod {

/// Scale on which product-form statistics (loo, rw) are compared to their limit.
enum class Scale { Log, Product };

std::string_view scale_name(Scale scale) noexcept;

struct ExperimentConfig {
    DistributionSpec spec;
    StatisticKind kind = StatisticKind::LeaveOneOutLogProduct;
    std::vector<std::size_t> nList;
    std::size_t M = 1;
    std::uint64_t baseSeed = 0;
    LimitLaw compareLaw;
    std::size_t workers = 1;
    Scale scale = Scale::Log;
};

/// loo -> n01 | expnorm, rw -> n02 | expsqrt2, lin/std -> n01, gm-* -> point:mu.
LimitLaw default_compare_law(StatisticKind kind, Scale scale, const Moments& m);

/// Throws Error{ConfigError} on an empty or non-increasing nList, n < 2 for
/// leave-one-out kinds, M == 0, workers == 0, product scale on a non-product
/// kind, or a compareLaw inconsistent with the kind.
void validate(const ExperimentConfig& config);

/// Evaluates the statistic of `kind` on one path using analytic moments.
double compute_statistic(StatisticKind kind, std::span<const double> path, const Moments& m);

/// Sorted copy of the sample; F(x) = #{v <= x} / M.
class EmpiricalCdf {
public:
    /// Throws Error{Empty} on an empty sample.
    explicit EmpiricalCdf(std::vector<double> values);

    double operator()(double x) const noexcept;
    [[nodiscard]] std::span<const double> sorted_values() const noexcept { return sorted_; }
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(std::span<const double> values);

/// max_i max(|i/M - F(v_(i))|, |F(v_(i)) - (i-1)/M|) over the sorted sample.
double ks_distance(const EmpiricalCdf& emp, const LimitLaw& law);

struct ConvergenceRow {
    std::size_t n = 0;
    std::size_t M = 0;
    double ks = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double meanRemainder = 0.0;  // NaN unless kind is loo
    double meanMaxDeviation = 0.0;
    double seconds = 0.0;
    std::size_t failures = 0;  // replicates whose statistic threw
};

struct ConvergenceReport {
    ExperimentConfig config;
    std::vector<ConvergenceRow> rows;
};

/*!
  Runs M replicates per n. Replicate i of row r uses stream
  (r << 32) + i of config.baseSeed, and results are reduced in replicate
  order, so the report does not depend on config.workers.
*/
ConvergenceReport run_clt_experiment(const ExperimentConfig& config);

/// Same as run_clt_experiment but also returns the raw statistic values per row.
ConvergenceReport run_clt_experiment(const ExperimentConfig& config, std::vector<std::vector<double>>* rowValues);

struct SllnRow {
    std::size_t n = 0;
    double gmPrefix = 0.0;
    double gmLoo = 0.0;
    double errPrefix = 0.0;  // |gmPrefix - mu|
    double errLoo = 0.0;
};

struct SllnReport {
    DistributionSpec spec;
    std::uint64_t seed = 0;
    double mu = 0.0;
    std::vector<SllnRow> rows;
};

/// One path of length max(nList) from stream 0 of `seed`. Throws Error{ConfigError} unless
/// nList is nonempty, strictly increasing and starts at n >= 2.
SllnReport run_slln_experiment(const DistributionSpec& spec, std::span<const std::size_t> nList, std::uint64_t seed);

}  // namespace looprod
