#include "looprod/limits.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "looprod/errors.hpp"

namespace looprod {

namespace {

// Coefficients from Cody's CALERF (netlib specfun/erf).
constexpr std::array<double, 5> kErfA{3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
                                      3.20937758913846947e03, 1.85777706184603153e-1};
constexpr std::array<double, 4> kErfB{2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
                                      2.84423683343917062e03};
constexpr std::array<double, 9> kErfcC{5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
                                       2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
                                       2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
constexpr std::array<double, 8> kErfcD{1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
                                       1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
                                       3.43936767414372164e03, 1.23033935480374942e03};
constexpr std::array<double, 6> kErfcP{3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                                       1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr std::array<double, 5> kErfcQ{2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
                                       6.05183413124413191e-2, 2.33520497626869185e-3};

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kErfThreshold = 0.46875;
constexpr double kErfcBig = 26.543;  // erfc underflows beyond this
constexpr double kXSmall = 1.11e-16;

// exp(-y*y) split as exp(-ys*ys) * exp(-(y-ys)(y+ys)) with ys = y truncated to 1/16;
// avoids the cancellation in y*y for large y.
double scaled_exp_neg_square(double y) noexcept {
    const double ys = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ys) * (y + ys);
    return std::exp(-ys * ys) * std::exp(-del);
}

}  // namespace

double erfc_cody(double x) noexcept {
    if (std::isnan(x)) return x;
    const double y = std::abs(x);
    double result = 0;
    if (y <= kErfThreshold) {
        const double ysq = y > kXSmall ? y * y : 0.0;
        double num = kErfA[4] * ysq;
        double den = ysq;
        for (int i = 0; i < 3; ++i) {
            num = (num + kErfA[i]) * ysq;
            den = (den + kErfB[i]) * ysq;
        }
        // erf(x) directly; the sign of x is already carried by the factor x
        return 1.0 - x * (num + kErfA[3]) / (den + kErfB[3]);
    }
    if (y <= 4.0) {
        double num = kErfcC[8] * y;
        double den = y;
        for (int i = 0; i < 7; ++i) {
            num = (num + kErfcC[i]) * y;
            den = (den + kErfcD[i]) * y;
        }
        result = scaled_exp_neg_square(y) * (num + kErfcC[7]) / (den + kErfcD[7]);
    } else if (y < kErfcBig) {
        const double ysq = 1.0 / (y * y);
        double num = kErfcP[5] * ysq;
        double den = ysq;
        for (int i = 0; i < 4; ++i) {
            num = (num + kErfcP[i]) * ysq;
            den = (den + kErfcQ[i]) * ysq;
        }
        result = ysq * (num + kErfcP[4]) / (den + kErfcQ[4]);
        result = scaled_exp_neg_square(y) * (kInvSqrtPi - result) / y;
    }
    return x < 0 ? 2.0 - result : result;
}

double normal_cdf(double x) noexcept {
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    return 0.5 * erfc_cody(-x * std::numbers::sqrt2 * 0.5);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "normal_quantile requires 0 < p < 1, got " + std::to_string(p));
    }
    double lo = -38.5;
    double hi = 38.5;
    double flo = normal_cdf(lo) - p;
    double fhi = normal_cdf(hi) - p;
    // Bisection down to a bracket narrow enough for the secant step to be well conditioned.
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = normal_cdf(mid) - p;
        if (fmid == 0.0) return mid;
        if (fmid < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    // Safeguarded secant (regula falsi with the bracket kept).
    double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double fbest = std::min(std::abs(flo), std::abs(fhi));
    for (int iter = 0; iter < 40 && fhi != flo; ++iter) {
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = normal_cdf(x) - p;
        if (std::abs(fx) < fbest) {
            best = x;
            fbest = std::abs(fx);
        }
        if (fx == 0.0 || x == lo || x == hi) break;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return best;
}

std::string_view tag_name(LimitTag tag) noexcept {
    switch (tag) {
        case LimitTag::StdNormal: return "n01";
        case LimitTag::NormalVar2: return "n02";
        case LimitTag::ExpNormal: return "expnorm";
        case LimitTag::ExpSqrt2Normal: return "expsqrt2";
        case LimitTag::PointMass: return "point";
    }
    return "";
}

std::string to_string(const LimitLaw& law) {
    std::string out(tag_name(law.tag));
    if (law.tag == LimitTag::PointMass) {
        std::array<char, 64> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), law.location);
        out += ':';
        out.append(buf.data(), end);
    }
    return out;
}

LimitLaw parse_limit_law(std::string_view text) {
    for (auto tag : {LimitTag::StdNormal, LimitTag::NormalVar2, LimitTag::ExpNormal, LimitTag::ExpSqrt2Normal}) {
        if (text == tag_name(tag)) return LimitLaw{tag, 0.0};
    }
    if (text.starts_with("point:")) {
        const std::string value(text.substr(6));
        std::size_t used = 0;
        try {
            const double mu = std::stod(value, &used);
            if (used == value.size()) return LimitLaw::point_mass(mu);
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorCode::ConfigError,
                "unknown limit law '" + std::string(text) + "' (expected n01, n02, expnorm, expsqrt2, point:<mu>)");
}

double limit_cdf(const LimitLaw& law, double x) noexcept {
    switch (law.tag) {
        case LimitTag::StdNormal: return normal_cdf(x);
        case LimitTag::NormalVar2: return normal_cdf(x / std::numbers::sqrt2);
        case LimitTag::ExpNormal: return x > 0 ? normal_cdf(std::log(x)) : 0.0;
        case LimitTag::ExpSqrt2Normal: return x > 0 ? normal_cdf(std::log(x) / std::numbers::sqrt2) : 0.0;
        case LimitTag::PointMass: return x >= law.location ? 1.0 : 0.0;
    }
    return 0.0;
}

}  // namespace looprod
