#pragma once

#include <cmath>
#include <span>

namespace looprod {

/*!
  Neumaier's variant of Kahan summation.

  Each addition is split into the rounded sum and its exact rounding error
  (an error-free transformation); the errors are accumulated separately and
  folded back in on read. Unlike plain Kahan, the branch on magnitude keeps the
  compensation exact when the incoming term is larger than the running sum.
*/
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(double initial) : sum_(initial) {}

    CompensatedSum& operator+=(double value) noexcept {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    CompensatedSum& operator-=(double value) noexcept { return *this += -value; }

    [[nodiscard]] constexpr double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

[[nodiscard]] inline double compensated_sum(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) acc += v;
    return acc.value();
}

}  // namespace looprod
