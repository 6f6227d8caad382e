#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "looprod/asclt.hpp"
#include "looprod/errors.hpp"

using namespace looprod;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected looprod::Error");
    return ErrorCode::Empty;
}

double harmonic(std::size_t n) {
    double h = 0;
    for (std::size_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
    return h;
}

}  // namespace

TEST_CASE("new_accumulator") {
    LogAvgAccumulator acc({-2, 0, 2});
    CHECK(acc.weights() == std::vector<double>{0, 0, 0});
    CHECK(acc.last_n() == 1);
    CHECK(code_of([] { LogAvgAccumulator({1, 1}); }) == ErrorCode::UnsortedGrid);
    CHECK(code_of([] { LogAvgAccumulator({2, 1}); }) == ErrorCode::UnsortedGrid);
    CHECK(code_of([] { LogAvgAccumulator(std::vector<double>{}); }) == ErrorCode::UnsortedGrid);

    const auto grid = default_grid();
    REQUIRE(grid.size() == 19);
    CHECK(grid[9] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(grid[18] == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("accumulate") {
    LogAvgAccumulator low({-2, 0, 2});
    low.accumulate(2, -1e9);
    CHECK(low.weights() == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(low.total_weight() == 0.5);

    LogAvgAccumulator mid({-2, 0, 2});
    mid.accumulate(2, -1.0);
    CHECK(mid.weights() == std::vector<double>{0.0, 0.5, 0.5});

    // t equal to a grid point counts (indicator uses <=)
    LogAvgAccumulator tie({-2, 0, 2});
    tie.accumulate(2, 0.0);
    CHECK(tie.weights() == std::vector<double>{0.0, 0.5, 0.5});

    LogAvgAccumulator twice({0});
    twice.accumulate(2, 0.1);
    CHECK(code_of([&] { twice.accumulate(2, 0.1); }) == ErrorCode::NonSequentialN);
    CHECK(code_of([&] { twice.accumulate(4, 0.1); }) == ErrorCode::NonSequentialN);
    CHECK(code_of([&] { LogAvgAccumulator({0}).accumulate(1, 0.0); }) == ErrorCode::NonSequentialN);
}

TEST_CASE("evaluate") {
    LogAvgAccumulator acc({-1, 0, 1});
    CHECK(code_of([&] { (void)acc.evaluate(); }) == ErrorCode::Empty);
    acc.accumulate(2, 0.5);
    CHECK(acc.evaluate() == std::vector<double>{0, 0, 1});
    acc.accumulate(3, -3);
    acc.accumulate(4, 7);
    const auto a = acc.evaluate();
    const auto w = acc.weights();
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == w[j] / acc.total_weight());
    CHECK(acc.total_weight() == doctest::Approx(harmonic(4) - 1.0).epsilon(1e-15));
    const auto logN = acc.evaluate_log_normalized();
    CHECK(logN[0] == doctest::Approx((1.0 / 3.0) / std::log(4.0)));
}

TEST_CASE("comparison laws") {
    CHECK(asclt_comparison_law(StatisticKind::LeaveOneOutLogProduct) == LimitLaw::std_normal());
    CHECK(asclt_comparison_law(StatisticKind::StandardizedSum) == LimitLaw::std_normal());
    CHECK(asclt_comparison_law(StatisticKind::PrefixLogProduct) == LimitLaw::normal_var2());
    CHECK(code_of([] { asclt_comparison_law(StatisticKind::GeometricMeanLoo); }) == ErrorCode::UnsupportedKind);
}

TEST_CASE("trajectory statistics agree with direct evaluation") {
    const auto spec = parse_distribution("gamma:4:0.5");
    const auto m = moments(spec);
    for (auto kind : {StatisticKind::LeaveOneOutLogProduct, StatisticKind::PrefixLogProduct,
                      StatisticKind::StandardizedSum, StatisticKind::LinearizedSum}) {
        StatisticTrajectory traj(spec, kind, 5, 1000000);
        for (int i = 0; i < 300; ++i) {
            const double t = traj.next();
            const auto path = traj.path();
            double direct = 0;
            switch (kind) {
                case StatisticKind::LeaveOneOutLogProduct: direct = loo_log_statistic(path, m.mu, m.gamma); break;
                case StatisticKind::PrefixLogProduct: direct = rw_log_statistic(path, m.mu, m.gamma); break;
                case StatisticKind::StandardizedSum: direct = standardized_sum(path, m.mu, m.sigma); break;
                default: direct = linearized_statistic(path, m.mu, m.gamma); break;
            }
            REQUIRE(t == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
        }
        CHECK(traj.series_evaluations() == 0);
        CHECK(traj.path().size() == 301);
    }
    const auto sampled = sample(spec, 301, 5, 0);
    StatisticTrajectory traj(spec, StatisticKind::StandardizedSum, 5, 2);
    for (int i = 0; i < 300; ++i) traj.next();
    CHECK(std::equal(sampled.values.begin(), sampled.values.end(), traj.path().begin()));
}

TEST_CASE("run_asclt_path with N = 2 is a single step") {
    const auto spec = parse_distribution("exponential:1");
    const auto report = run_asclt_path(spec, StatisticKind::StandardizedSum, 2, 3, default_grid(), 2);
    const auto path = sample(spec, 2, 3, 0);
    const double t2 = standardized_sum(path.view(), 1.0, 1.0);
    double expectedGap = 0;
    for (std::size_t j = 0; j < report.grid.size(); ++j) {
        const double step = t2 <= report.grid[j] ? 1.0 : 0.0;
        CHECK(report.empirical[j] == step);
        expectedGap = std::max(expectedGap, std::abs(step - normal_cdf(report.grid[j])));
    }
    CHECK(report.supGap == expectedGap);
    CHECK(report.firstN == 2);
    CHECK(code_of([&] { run_asclt_path(spec, StatisticKind::StandardizedSum, 1, 3, default_grid(), 2); }) ==
          ErrorCode::DegenerateN);
    CHECK(code_of([&] { run_asclt_path(spec, StatisticKind::LeaveOneOutLogProduct, 10, 3, default_grid(), 1); }) ==
          ErrorCode::DegenerateN);
    CHECK(code_of([&] { run_asclt_path(spec, StatisticKind::GeometricMeanPrefix, 10, 3, default_grid(), 2); }) ==
          ErrorCode::UnsupportedKind);
}

TEST_CASE("run_asclt_path reports the mode switch and monotone output") {
    const auto spec = parse_distribution("exponential:1");
    const auto report = run_asclt_path(spec, StatisticKind::LeaveOneOutLogProduct, 5000, 7, default_grid(), 1000);
    CHECK(report.modeSwitchN >= 1001);
    CHECK(report.seriesEvaluations + report.exactFallbacks == 4000);
    CHECK(std::is_sorted(report.empirical.begin(), report.empirical.end()));
    for (double a : report.empirical) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
    const auto exactOnly = run_asclt_path(spec, StatisticKind::LeaveOneOutLogProduct, 5000, 7, default_grid(), 5000);
    CHECK(exactOnly.modeSwitchN == 0);
    CHECK(exactOnly.seriesEvaluations == 0);
}

TEST_CASE("harmonic normalization over a long run") {
    LogAvgAccumulator acc(default_grid());
    const auto spec = parse_distribution("uniform:0.5:1.5");
    StatisticTrajectory traj(spec, StatisticKind::StandardizedSum, 1, 2);
    constexpr std::size_t N = 200000;
    for (std::size_t n = 2; n <= N; ++n) acc.accumulate(n, traj.next());
    CHECK(std::abs(acc.total_weight() - (harmonic(N) - 1.0)) <= 1e-9);
    const auto w = acc.weights();
    CHECK(std::is_sorted(w.begin(), w.end()));
    CHECK(w.back() <= acc.total_weight());
}
