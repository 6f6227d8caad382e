#pragma once

#include <cstddef>

#include "looprod/compensated.hpp"

namespace looprod {

/*!
  Running state for O(1) updates of the leave-one-out log statistic.

  With d_k = X_k - mu, keeps n, S = sum X_k and the raw centred power sums
  p1 = sum d_k, p2 = sum d_k^2, p3 = sum d_k^3 (not divided by n), plus
  max |d_k|. All sums use compensated accumulation.
*/
class PowerSumState {
public:
    /// Throws Error{NonpositiveMu} unless mu > 0.
    explicit PowerSumState(double mu);

    /// Throws Error{NonpositiveDraw} unless x > 0.
    void update(double x);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] double sum() const noexcept { return sum_.value(); }
    [[nodiscard]] double p1() const noexcept { return p1_.value(); }
    [[nodiscard]] double p2() const noexcept { return p2_.value(); }
    [[nodiscard]] double p3() const noexcept { return p3_.value(); }
    [[nodiscard]] double max_abs_deviation() const noexcept { return maxAbsD_; }

private:
    std::size_t n_ = 0;
    double mu_;
    CompensatedSum sum_;
    CompensatedSum p1_;
    CompensatedSum p2_;
    CompensatedSum p3_;
    double maxAbsD_ = 0.0;
};

PowerSumState init_state(double mu);
PowerSumState update_state(PowerSumState state, double x);

struct SeriesEstimate {
    double value = 0.0;
    /// (|D| + max|d_k|) / ((n-1) mu) <= 1/2, which bounds every |C_{n,k} - 1|.
    bool valid = false;
    /// r = (|D| + max|d_k|) / ((n-1) mu), the common bound on |C_{n,k} - 1|.
    double ratio = 0.0;
    /// n r^4 / 4 / (gamma sqrt n): the leading fourth-order term at the worst case |u_k| = r.
    double leading_bound = 0.0;
    /// n r^4 / (4 (1 - r)) / (gamma sqrt n): a strict bound on |series - exact| for r < 1,
    /// since |sum_{j>=4} (-1)^{j+1} u^j / j| <= r^4 / (4 (1 - r)) when |u| <= r.
    double strict_bound = 0.0;
};

/*!
  Third-order surrogate of the leave-one-out log statistic from power sums.

  With D = p1, m = (n-1) mu and u_k = (D - d_k)/m,

      sum_k u_k   = (n-1) D / m
      sum_k u_k^2 = ((n-2) D^2 + p2) / m^2
      sum_k u_k^3 = ((n-3) D^3 + 3 D p2 - p3) / m^3

  and the value is (sum u - sum u^2 / 2 + sum u^3 / 3) / (gamma sqrt n).
  Throws Error{DegenerateN} when n < 2. Callers fall back to the exact
  evaluation when `valid` is false.
*/
SeriesEstimate loo_log_series(const PowerSumState& state, double gamma);

}  // namespace looprod
