#pragma once

#include <string>
#include <string_view>

namespace looprod {

/// Complementary error function, W. J. Cody's rational Chebyshev approximations (Math. Comp. 23, 1969).
double erfc_cody(double x) noexcept;

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2). Absolute error below 1e-15 on [-8, 8].
double normal_cdf(double x) noexcept;

/// Inverse of normal_cdf by bisection on [-38.5, 38.5] followed by secant polish.
/// Throws Error{OutOfRange} unless 0 < p < 1.
double normal_quantile(double p);

enum class LimitTag { StdNormal, NormalVar2, ExpNormal, ExpSqrt2Normal, PointMass };

struct LimitLaw {
    LimitTag tag = LimitTag::StdNormal;
    double location = 0.0;  // only used by PointMass

    static constexpr LimitLaw std_normal() noexcept { return {LimitTag::StdNormal, 0.0}; }
    static constexpr LimitLaw normal_var2() noexcept { return {LimitTag::NormalVar2, 0.0}; }
    static constexpr LimitLaw exp_normal() noexcept { return {LimitTag::ExpNormal, 0.0}; }
    static constexpr LimitLaw exp_sqrt2_normal() noexcept { return {LimitTag::ExpSqrt2Normal, 0.0}; }
    static constexpr LimitLaw point_mass(double mu) noexcept { return {LimitTag::PointMass, mu}; }

    friend bool operator==(const LimitLaw&, const LimitLaw&) = default;
};

/// n01, n02, expnorm, expsqrt2, point (PointMass renders as "point:<mu>").
std::string to_string(const LimitLaw& law);
std::string_view tag_name(LimitTag tag) noexcept;
/// Accepts the names above; "point" requires ":<mu>". Throws Error{ConfigError}.
LimitLaw parse_limit_law(std::string_view text);

double limit_cdf(const LimitLaw& law, double x) noexcept;

}  // namespace looprod
