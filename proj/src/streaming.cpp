#include "looprod/streaming.hpp"

#include <cmath>
#include <string>

#include "looprod/errors.hpp"

namespace looprod {

PowerSumState::PowerSumState(double mu) : mu_(mu) {
    if (!(mu > 0.0)) throw Error(ErrorCode::NonpositiveMu, "mu must be > 0, got " + std::to_string(mu));
}

void PowerSumState::update(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::NonpositiveDraw, "draws must be > 0, got " + std::to_string(x));
    const double d = x - mu_;
    const double d2 = d * d;
    ++n_;
    sum_ += x;
    p1_ += d;
    p2_ += d2;
    p3_ += d2 * d;
    maxAbsD_ = std::max(maxAbsD_, std::abs(d));
}

PowerSumState init_state(double mu) { return PowerSumState(mu); }

PowerSumState update_state(PowerSumState state, double x) {
    state.update(x);
    return state;
}

SeriesEstimate loo_log_series(const PowerSumState& state, double gamma) {
    if (state.n() < 2) {
        throw Error(ErrorCode::DegenerateN, "series needs n >= 2, got n = " + std::to_string(state.n()));
    }
    const double n = static_cast<double>(state.n());
    const double m = (n - 1.0) * state.mu();
    const double d = state.p1();
    const double p2 = state.p2();
    const double p3 = state.p3();
    const double a = d / m;

    // Each power sum is rescaled by m^j term by term so nothing overflows for large n.
    const double s1 = (n - 1.0) * a;
    const double s2 = (n - 2.0) * a * a + p2 / (m * m);
    const double s3 = (n - 3.0) * a * a * a + 3.0 * a * (p2 / (m * m)) - p3 / (m * m * m);

    const double norm = 1.0 / (gamma * std::sqrt(n));
    SeriesEstimate out;
    out.value = norm * (s1 - 0.5 * s2 + s3 / 3.0);
    out.ratio = (std::abs(d) + state.max_abs_deviation()) / m;
    out.valid = out.ratio <= 0.5;
    const double r4 = out.ratio * out.ratio * out.ratio * out.ratio;
    out.leading_bound = norm * n * r4 / 4.0;
    out.strict_bound = out.ratio < 1.0 ? norm * n * r4 / (4.0 * (1.0 - out.ratio)) : HUGE_VAL;
    return out;
}

}  // namespace looprod
