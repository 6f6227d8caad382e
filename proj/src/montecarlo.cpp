#include "looprod/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "looprod/compensated.hpp"
#include "looprod/errors.hpp"

namespace looprod {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

bool is_product_kind(StatisticKind kind) {
    return kind == StatisticKind::LeaveOneOutLogProduct || kind == StatisticKind::PrefixLogProduct;
}

struct ReplicateResult {
    double value = kNaN;
    double remainder = kNaN;
    double maxDeviation = kNaN;
};

// Runs fn(i) for i in [0, count) on `workers` threads; fn must only write slot i.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 16;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(kChunk);
                if (begin >= count) return;
                const std::size_t end = std::min(count, begin + kChunk);
                for (std::size_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
}

double mean_of(std::span<const double> values) {
    CompensatedSum s;
    for (double v : values) s += v;
    return s.value() / static_cast<double>(values.size());
}

}  // namespace

std::string_view scale_name(Scale scale) noexcept { return scale == Scale::Log ? "log" : "product"; }

LimitLaw default_compare_law(StatisticKind kind, Scale scale, const Moments& m) {
    switch (kind) {
        case StatisticKind::LeaveOneOutLogProduct:
            return scale == Scale::Log ? LimitLaw::std_normal() : LimitLaw::exp_normal();
        case StatisticKind::PrefixLogProduct:
            return scale == Scale::Log ? LimitLaw::normal_var2() : LimitLaw::exp_sqrt2_normal();
        case StatisticKind::LinearizedSum:
        case StatisticKind::StandardizedSum:
            return LimitLaw::std_normal();
        case StatisticKind::GeometricMeanPrefix:
        case StatisticKind::GeometricMeanLoo:
            return LimitLaw::point_mass(m.mu);
    }
    return LimitLaw::std_normal();
}

void validate(const ExperimentConfig& config) {
    if (config.nList.empty()) config_error("nList must be nonempty");
    for (std::size_t i = 1; i < config.nList.size(); ++i) {
        if (config.nList[i] <= config.nList[i - 1]) config_error("nList must be strictly increasing");
    }
    const std::size_t minN = is_leave_one_out(config.kind) ? 2 : 1;
    if (config.nList.front() < minN) {
        config_error("n must be >= " + std::to_string(minN) + " for kind " + std::string(kind_name(config.kind)));
    }
    if (config.M == 0) config_error("M must be >= 1");
    if (config.workers == 0) config_error("workers must be >= 1");
    if (config.scale == Scale::Product && !is_product_kind(config.kind)) {
        config_error("product scale applies only to loo and rw");
    }
    const LimitLaw expected = default_compare_law(config.kind, config.scale, moments(config.spec));
    const bool consistent =
        config.compareLaw.tag == expected.tag &&
        (expected.tag != LimitTag::PointMass ||
         std::abs(config.compareLaw.location - expected.location) <= 1e-12 * std::abs(expected.location));
    if (!consistent) {
        config_error("compareLaw " + to_string(config.compareLaw) + " is inconsistent with kind " +
                     std::string(kind_name(config.kind)) + " on the " + std::string(scale_name(config.scale)) +
                     " scale (expected " + to_string(expected) + ")");
    }
}

double compute_statistic(StatisticKind kind, std::span<const double> path, const Moments& m) {
    switch (kind) {
        case StatisticKind::LeaveOneOutLogProduct: return loo_log_statistic(path, m.mu, m.gamma);
        case StatisticKind::PrefixLogProduct: return rw_log_statistic(path, m.mu, m.gamma);
        case StatisticKind::LinearizedSum: return linearized_statistic(path, m.mu, m.gamma);
        case StatisticKind::StandardizedSum: return standardized_sum(path, m.mu, m.sigma);
        case StatisticKind::GeometricMeanPrefix: return geometric_mean_prefix(path);
        case StatisticKind::GeometricMeanLoo: return geometric_mean_loo(path);
    }
    return kNaN;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw Error(ErrorCode::Empty, "empirical CDF needs at least one value");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const noexcept {
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

EmpiricalCdf empirical_cdf(std::span<const double> values) {
    return EmpiricalCdf(std::vector<double>(values.begin(), values.end()));
}

double ks_distance(const EmpiricalCdf& emp, const LimitLaw& law) {
    const auto values = emp.sorted_values();
    const double m = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = limit_cdf(law, values[i]);
        const double above = static_cast<double>(i + 1) / m - f;
        const double below = f - static_cast<double>(i) / m;
        worst = std::max({worst, std::abs(above), std::abs(below)});
    }
    return worst;
}

ConvergenceReport run_clt_experiment(const ExperimentConfig& config) { return run_clt_experiment(config, nullptr); }

ConvergenceReport run_clt_experiment(const ExperimentConfig& config, std::vector<std::vector<double>>* rowValues) {
    validate(config);
    const Moments m = moments(config.spec);
    const bool diagnostics = config.kind == StatisticKind::LeaveOneOutLogProduct;
    const bool product = config.scale == Scale::Product;

    ConvergenceReport report{config, {}};
    if (rowValues != nullptr) rowValues->clear();
    std::vector<ReplicateResult> results(config.M);

    for (std::size_t row = 0; row < config.nList.size(); ++row) {
        const std::size_t n = config.nList[row];
        const auto start = std::chrono::steady_clock::now();

        parallel_for(config.M, config.workers, [&](std::size_t rep) {
            const std::uint64_t stream = (static_cast<std::uint64_t>(row) << 32) + rep;
            const SamplePath path = sample(config.spec, n, config.baseSeed, stream);
            ReplicateResult r;
            try {
                r.value = compute_statistic(config.kind, path.view(), m);
                if (product) r.value = std::exp(r.value);
                if (diagnostics) {
                    r.remainder = remainder_magnitude(path.view(), m.mu, m.gamma);
                    r.maxDeviation = max_relative_deviation(path.view(), m.mu);
                }
            } catch (const Error&) {
                r.value = kNaN;
            }
            results[rep] = r;
        });

        ConvergenceRow out;
        out.n = n;
        out.M = config.M;
        std::vector<double> values;
        std::vector<double> remainders;
        std::vector<double> deviations;
        values.reserve(config.M);
        for (const auto& r : results) {
            if (std::isnan(r.value)) {
                ++out.failures;
                continue;
            }
            values.push_back(r.value);
            if (diagnostics) {
                remainders.push_back(r.remainder);
                deviations.push_back(r.maxDeviation);
            }
        }

        if (values.empty()) {
            out.ks = out.mean = out.sd = kNaN;
        } else {
            out.mean = mean_of(values);
            CompensatedSum ss;
            for (double v : values) ss += (v - out.mean) * (v - out.mean);
            out.sd = values.size() > 1 ? std::sqrt(ss.value() / static_cast<double>(values.size() - 1)) : 0.0;
            out.ks = ks_distance(EmpiricalCdf(values), config.compareLaw);
        }
        out.meanRemainder = remainders.empty() ? kNaN : mean_of(remainders);
        out.meanMaxDeviation = deviations.empty() ? kNaN : mean_of(deviations);
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.rows.push_back(out);
        if (rowValues != nullptr) rowValues->push_back(std::move(values));
    }
    return report;
}

SllnReport run_slln_experiment(const DistributionSpec& spec, std::span<const std::size_t> nList, std::uint64_t seed) {
    if (nList.empty()) config_error("nList must be nonempty");
    if (nList.front() < 2) config_error("SLLN runs need n >= 2 (gm-loo is undefined at n = 1)");
    for (std::size_t i = 1; i < nList.size(); ++i) {
        if (nList[i] <= nList[i - 1]) config_error("nList must be strictly increasing");
    }
    const Moments m = moments(spec);
    const SamplePath path = sample(spec, nList.back(), seed, 0);

    SllnReport report{spec, seed, m.mu, {}};
    CompensatedSum running;
    CompensatedSum logs;
    std::size_t k = 0;
    for (std::size_t n : nList) {
        for (; k < n; ++k) {
            running += path.values[k];
            logs += std::log(running.value() / static_cast<double>(k + 1));
        }
        SllnRow row;
        row.n = n;
        row.gmPrefix = std::exp(logs.value() / static_cast<double>(n));
        row.gmLoo = geometric_mean_loo(path.view().first(n));
        row.errPrefix = std::abs(row.gmPrefix - m.mu);
        row.errLoo = std::abs(row.gmLoo - m.mu);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace looprod
