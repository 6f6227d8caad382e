#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace looprod {

/// Statistic tags; CLI strings are loo, rw, lin, std, gm-prefix, gm-loo.
enum class StatisticKind {
    LeaveOneOutLogProduct,
    PrefixLogProduct,
    LinearizedSum,
    StandardizedSum,
    GeometricMeanPrefix,
    GeometricMeanLoo,
};

std::string_view kind_name(StatisticKind kind) noexcept;
std::optional<StatisticKind> parse_kind(std::string_view text) noexcept;
/// True for kinds built on leave-one-out sums (need n >= 2).
bool is_leave_one_out(StatisticKind kind) noexcept;

/// X_1, X_1+X_2, ..., each prefix summed with compensation. Throws EmptyPath.
std::vector<double> prefix_sums(std::span<const double> path);

/*!
  Log of the normalized leave-one-out product,

      T_n = 1/(gamma sqrt n) * sum_k log( S_{n,k} / ((n-1) mu) ),   S_{n,k} = S_n - X_k.

  Each log is evaluated as log1p of the centred increment (D - d_k)/((n-1) mu),
  where d_k = X_k - mu and D is the compensated sum of the d_k, so exp(T_n) is
  the product statistic without ever forming the product.

  Throws DegenerateN (n < 2) or NonpositiveLooSum.
*/
double loo_log_statistic(std::span<const double> path, double mu, double gamma);

/// 1/(gamma sqrt n) * sum_k log(S_k / (k mu)). Throws EmptyPath.
double rw_log_statistic(std::span<const double> path, double mu, double gamma);

/// 1/(gamma sqrt n) * sum_k (S_{n,k}/((n-1) mu) - 1), evaluated term by term from the
/// leave-one-out deviations. Throws DegenerateN.
double linearized_statistic(std::span<const double> path, double mu, double gamma);

/// 1/sqrt(n) * sum_i (X_i - mu)/sigma. Throws EmptyPath.
double standardized_sum(std::span<const double> path, double mu, double sigma);

/// exp( (1/n) sum_k log(S_k / k) ). Throws EmptyPath.
double geometric_mean_prefix(std::span<const double> path);

/// exp( (1/n) sum_k log(S_{n,k} / (n-1)) ). Throws DegenerateN.
double geometric_mean_loo(std::span<const double> path);

/// max_k |S_{n,k}/((n-1) mu) - 1|. Throws DegenerateN.
double max_relative_deviation(std::span<const double> path, double mu);

/// 1/(gamma sqrt n) * sum_k (S_{n,k}/((n-1) mu) - 1)^2. Throws DegenerateN.
double remainder_magnitude(std::span<const double> path, double mu, double gamma);

}  // namespace looprod
