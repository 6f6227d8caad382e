#include "looprod/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "looprod/compensated.hpp"
#include "looprod/errors.hpp"

namespace looprod {

namespace {

constexpr std::array<std::pair<StatisticKind, std::string_view>, 6> kKindNames{{
    {StatisticKind::LeaveOneOutLogProduct, "loo"},
    {StatisticKind::PrefixLogProduct, "rw"},
    {StatisticKind::LinearizedSum, "lin"},
    {StatisticKind::StandardizedSum, "std"},
    {StatisticKind::GeometricMeanPrefix, "gm-prefix"},
    {StatisticKind::GeometricMeanLoo, "gm-loo"},
}};

void require_nonempty(std::span<const double> path) {
    if (path.empty()) throw Error(ErrorCode::EmptyPath, "path must contain at least one value");
}

void require_loo(std::span<const double> path) {
    if (path.size() < 2) {
        throw Error(ErrorCode::DegenerateN, "leave-one-out statistics need n >= 2, got n = " + std::to_string(path.size()));
    }
}

double sum_deviations(std::span<const double> path, double mu) {
    CompensatedSum total;
    for (double x : path) total += x - mu;
    return total.value();
}

// (S_{n,k} - (n-1) mu) / ((n-1) mu) for every k, i.e. C_{n,k} - 1.
template <typename Fn>
void for_each_loo_increment(std::span<const double> path, double mu, Fn&& fn) {
    const double total = sum_deviations(path, mu);
    const double scale = static_cast<double>(path.size() - 1) * mu;
    for (double x : path) fn((total - (x - mu)) / scale);
}

}  // namespace

std::string_view kind_name(StatisticKind kind) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "";
}

std::optional<StatisticKind> parse_kind(std::string_view text) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (name == text) return k;
    }
    return std::nullopt;
}

bool is_leave_one_out(StatisticKind kind) noexcept {
    return kind == StatisticKind::LeaveOneOutLogProduct || kind == StatisticKind::LinearizedSum ||
           kind == StatisticKind::GeometricMeanLoo;
}

std::vector<double> prefix_sums(std::span<const double> path) {
    require_nonempty(path);
    std::vector<double> out;
    out.reserve(path.size());
    CompensatedSum running;
    for (double x : path) {
        running += x;
        out.push_back(running.value());
    }
    return out;
}

double loo_log_statistic(std::span<const double> path, double mu, double gamma) {
    require_loo(path);
    CompensatedSum total;
    for (double x : path) total += x;
    const double sn = total.value();

    CompensatedSum logs;
    std::size_t k = 0;
    for_each_loo_increment(path, mu, [&](double u) {
        if (sn - path[k] <= 0.0 || u <= -1.0) {
            throw Error(ErrorCode::NonpositiveLooSum, "S_{n,k} <= 0 at k = " + std::to_string(k + 1));
        }
        logs += std::log1p(u);
        ++k;
    });
    return logs.value() / (gamma * std::sqrt(static_cast<double>(path.size())));
}

double rw_log_statistic(std::span<const double> path, double mu, double gamma) {
    require_nonempty(path);
    CompensatedSum deviation;  // S_k - k mu
    CompensatedSum logs;
    double k = 0;
    for (double x : path) {
        k += 1.0;
        deviation += x - mu;
        logs += std::log1p(deviation.value() / (k * mu));
    }
    return logs.value() / (gamma * std::sqrt(k));
}

double linearized_statistic(std::span<const double> path, double mu, double gamma) {
    require_loo(path);
    CompensatedSum terms;
    for_each_loo_increment(path, mu, [&](double u) { terms += u; });
    return terms.value() / (gamma * std::sqrt(static_cast<double>(path.size())));
}

double standardized_sum(std::span<const double> path, double mu, double sigma) {
    require_nonempty(path);
    CompensatedSum total;
    for (double x : path) total += (x - mu) / sigma;
    return total.value() / std::sqrt(static_cast<double>(path.size()));
}

double geometric_mean_prefix(std::span<const double> path) {
    require_nonempty(path);
    CompensatedSum running;
    CompensatedSum logs;
    double k = 0;
    for (double x : path) {
        k += 1.0;
        running += x;
        logs += std::log(running.value() / k);
    }
    return std::exp(logs.value() / k);
}

double geometric_mean_loo(std::span<const double> path) {
    require_loo(path);
    CompensatedSum total;
    for (double x : path) total += x;
    const double sn = total.value();
    const double denom = static_cast<double>(path.size() - 1);
    CompensatedSum logs;
    for (double x : path) {
        const double loo = sn - x;
        if (loo <= 0.0) throw Error(ErrorCode::NonpositiveLooSum, "S_{n,k} <= 0");
        logs += std::log(loo / denom);
    }
    return std::exp(logs.value() / static_cast<double>(path.size()));
}

double max_relative_deviation(std::span<const double> path, double mu) {
    require_loo(path);
    double worst = 0.0;
    for_each_loo_increment(path, mu, [&](double u) { worst = std::max(worst, std::abs(u)); });
    return worst;
}

double remainder_magnitude(std::span<const double> path, double mu, double gamma) {
    require_loo(path);
    CompensatedSum squares;
    for_each_loo_increment(path, mu, [&](double u) { squares += u * u; });
    return squares.value() / (gamma * std::sqrt(static_cast<double>(path.size())));
}

}  // namespace looprod
