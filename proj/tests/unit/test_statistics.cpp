#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "../support/oracles.hpp"
#include "looprod/distributions.hpp"
#include "looprod/errors.hpp"
#include "looprod/statistics.hpp"

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

const std::vector<DistributionSpec>& families() {
    static const std::vector<DistributionSpec> specs{
        parse_distribution("exponential:1"),   parse_distribution("gamma:4:0.5"),
        parse_distribution("gamma:0.7:3"),     parse_distribution("lognormal:0:0.5"),
        parse_distribution("uniform:0.5:1.5"), parse_distribution("twopoint:1:3:0.4")};
    return specs;
}

struct Case {
    DistributionSpec spec;
    SamplePath path;
    Moments m;
};

/// Random (family, n, seed) triples with n log-uniform in [lo, hi].
std::vector<Case> random_cases(std::size_t count, std::size_t lo, std::size_t hi, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> pick(0, families().size() - 1);
    std::uniform_real_distribution<double> logN(std::log(static_cast<double>(lo)), std::log(static_cast<double>(hi) + 0.999));
    std::vector<Case> cases;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& spec = families()[pick(gen)];
        const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::exp(logN(gen))), lo, hi);
        cases.push_back({spec, sample(spec, n, gen(), i), moments(spec)});
    }
    return cases;
}

}  // namespace

TEST_CASE("kind names") {
    for (auto kind : {StatisticKind::LeaveOneOutLogProduct, StatisticKind::PrefixLogProduct, StatisticKind::LinearizedSum,
                      StatisticKind::StandardizedSum, StatisticKind::GeometricMeanPrefix, StatisticKind::GeometricMeanLoo}) {
        CHECK(parse_kind(kind_name(kind)) == kind);
    }
    CHECK(kind_name(StatisticKind::GeometricMeanPrefix) == "gm-prefix");
    CHECK_FALSE(parse_kind("bogus").has_value());
}

TEST_CASE("prefix_sums") {
    const std::vector<double> path{1, 2, 3};
    CHECK(prefix_sums(path) == std::vector<double>{1, 3, 6});
    const std::vector<double> constant(5, 2.5);
    CHECK(prefix_sums(constant) == std::vector<double>{2.5, 5, 7.5, 10, 12.5});
    const auto random = sample(parse_distribution("lognormal:0:2"), 1000, 5, 0);
    const auto sums = prefix_sums(random.view());
    CHECK(std::adjacent_find(sums.begin(), sums.end(), std::greater_equal<>()) == sums.end());
    CHECK(code_of([] { prefix_sums({}); }) == ErrorCode::EmptyPath);
}

TEST_CASE("loo_log_statistic") {
    const std::vector<double> pair{2.5, 2.5};
    CHECK(loo_log_statistic(pair, 2.5, 0.7) == 0.0);

    // 50-digit value of (2/sqrt 3)(ln(5/4) + ln(4/4) + ln(3/4))
    const std::vector<double> path{1, 2, 3};
    CHECK(loo_log_statistic(path, 2.0, 0.5) == doctest::Approx(-0.074522665103754137).epsilon(1e-14));

    const std::vector<double> constant(7, 1.3);
    CHECK(loo_log_statistic(constant, 1.1, 0.4) ==
          doctest::Approx(std::sqrt(7.0) / 0.4 * std::log(1.3 / 1.1)).epsilon(1e-13));

    const std::vector<double> one{1.0};
    CHECK(code_of([&] { loo_log_statistic(one, 1, 1); }) == ErrorCode::DegenerateN);
    // a negative value can drive S_{n,k} below zero
    const std::vector<double> bad{-5.0, 1.0, 1.0};
    CHECK(code_of([&] { loo_log_statistic(bad, 1, 1); }) == ErrorCode::NonpositiveLooSum);
}

TEST_CASE("rw_log_statistic") {
    const std::vector<double> ones{1, 1, 1};
    CHECK(rw_log_statistic(ones, 1.0, 0.3) == 0.0);
    const std::vector<double> twos{2, 2};
    CHECK(rw_log_statistic(twos, 1.0, 1.0) == doctest::Approx(0.98025814346854719).epsilon(1e-15));
    const std::vector<double> constant(9, 0.7);
    CHECK(rw_log_statistic(constant, 0.7, 2.0) == 0.0);
    CHECK(code_of([] { rw_log_statistic({}, 1, 1); }) == ErrorCode::EmptyPath);
}

TEST_CASE("linearized_statistic and standardized_sum") {
    const std::vector<double> constant(4, 3.0);
    CHECK(linearized_statistic(constant, 3.0, 0.5) == 0.0);
    CHECK(standardized_sum(constant, 3.0, 0.5) == 0.0);
    const std::vector<double> symmetric{1, 3};
    CHECK(linearized_statistic(symmetric, 2.0, 0.5) == 0.0);
    CHECK(standardized_sum(symmetric, 2.0, 1.0) == 0.0);
    const std::vector<double> single{3};
    CHECK(standardized_sum(single, 2.0, 1.0) == 1.0);
    CHECK(code_of([&] { linearized_statistic(single, 1, 1); }) == ErrorCode::DegenerateN);
    CHECK(code_of([] { standardized_sum({}, 1, 1); }) == ErrorCode::EmptyPath);
}

TEST_CASE("geometric means") {
    const std::vector<double> constant(6, 1.7);
    CHECK(geometric_mean_prefix(constant) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(geometric_mean_loo(constant) == doctest::Approx(1.7).epsilon(1e-15));
    const std::vector<double> path{1, 3};
    CHECK(geometric_mean_prefix(path) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
    CHECK(geometric_mean_loo(path) == doctest::Approx(std::numbers::sqrt3).epsilon(1e-15));

    const auto exp1 = sample(parse_distribution("exponential:1"), 100000, 11, 0);
    CHECK(std::abs(geometric_mean_prefix(exp1.view()) - 1.0) < 0.02);
    CHECK(std::abs(geometric_mean_loo(exp1.view()) - 1.0) < 0.02);
    CHECK(code_of([] { geometric_mean_prefix({}); }) == ErrorCode::EmptyPath);
    const std::vector<double> one{1};
    CHECK(code_of([&] { geometric_mean_loo(one); }) == ErrorCode::DegenerateN);
}

TEST_CASE("deviation diagnostics") {
    const std::vector<double> constant(5, 2.0);
    CHECK(max_relative_deviation(constant, 2.0) == 0.0);
    CHECK(remainder_magnitude(constant, 2.0, 0.5) == 0.0);
    const std::vector<double> path{1, 3};
    CHECK(max_relative_deviation(path, 2.0) == 0.5);
    CHECK(remainder_magnitude(path, 2.0, 0.5) == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
    const std::vector<double> one{1};
    CHECK(code_of([&] { max_relative_deviation(one, 1); }) == ErrorCode::DegenerateN);
    CHECK(code_of([&] { remainder_magnitude(one, 1, 1); }) == ErrorCode::DegenerateN);
}

TEST_CASE("Exp(1): max deviation stays within 10x the LIL scale") {
    const auto spec = parse_distribution("exponential:1");
    for (std::size_t n : {1000, 10000, 100000}) {
        const double scale = std::sqrt(std::log(std::log(static_cast<double>(n))) / n);
        for (std::uint64_t r = 0; r < 100; ++r) {
            const auto path = sample(spec, n, 4242, r);
            REQUIRE(max_relative_deviation(path.view(), 1.0) / scale < 10.0);
        }
    }
}

TEST_CASE("Exp(1): remainder magnitude has mean within a factor 2 of gamma/sqrt(n)") {
    const auto spec = parse_distribution("exponential:1");
    constexpr std::size_t n = 10000;
    double total = 0;
    for (std::uint64_t r = 0; r < 200; ++r) total += remainder_magnitude(sample(spec, n, 99, r).view(), 1.0, 1.0);
    const double ratio = total / 200 / (1.0 / std::sqrt(double(n)));
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
}

TEST_CASE("property: statistics match 50-digit oracles on random paths") {
    for (const auto& c : random_cases(60, 2, 500, 1)) {
        CAPTURE(c.spec.to_string());
        CAPTURE(c.path.size());
        const auto v = c.path.view();
        CHECK(loo_log_statistic(v, c.m.mu, c.m.gamma) ==
              doctest::Approx(oracle::loo_log_statistic(v, c.m.mu, c.m.gamma)).epsilon(1e-11).scale(1.0));
        CHECK(rw_log_statistic(v, c.m.mu, c.m.gamma) ==
              doctest::Approx(oracle::rw_log_statistic(v, c.m.mu, c.m.gamma)).epsilon(1e-11).scale(1.0));
        CHECK(standardized_sum(v, c.m.mu, c.m.sigma) ==
              doctest::Approx(oracle::standardized_sum(v, c.m.mu, c.m.sigma)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: linearized leave-one-out sum equals the standardized sum") {
    for (const auto& c : random_cases(1000, 2, 10000, 2)) {
        const double lin = linearized_statistic(c.path.view(), c.m.mu, c.m.gamma);
        const double std = standardized_sum(c.path.view(), c.m.mu, c.m.sigma);
        REQUIRE(std::abs(lin - std) <= 1e-10 * (1.0 + std::abs(std)));
    }
}

TEST_CASE("property: scaling the path and mu together") {
    for (const auto& c : random_cases(100, 2, 2000, 3)) {
        for (double scale : {0.01, 3.0, 1000.0}) {
            std::vector<double> scaled(c.path.values);
            for (auto& x : scaled) x *= scale;
            const auto v = c.path.view();
            const double mu = c.m.mu;
            const double g = c.m.gamma;
            CHECK(std::abs(loo_log_statistic(scaled, scale * mu, g) - loo_log_statistic(v, mu, g)) <= 1e-12);
            CHECK(std::abs(rw_log_statistic(scaled, scale * mu, g) - rw_log_statistic(v, mu, g)) <= 1e-12);
            CHECK(std::abs(linearized_statistic(scaled, scale * mu, g) - linearized_statistic(v, mu, g)) <= 1e-12);
            CHECK(std::abs(max_relative_deviation(scaled, scale * mu) - max_relative_deviation(v, mu)) <= 1e-12);
            CHECK(std::abs(remainder_magnitude(scaled, scale * mu, g) - remainder_magnitude(v, mu, g)) <= 1e-12);
            CHECK(geometric_mean_prefix(scaled) == doctest::Approx(scale * geometric_mean_prefix(v)).epsilon(1e-12));
            CHECK(geometric_mean_loo(scaled) == doctest::Approx(scale * geometric_mean_loo(v)).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: permutation invariance of symmetric statistics") {
    std::mt19937_64 gen(4);
    for (const auto& c : random_cases(100, 2, 3000, 5)) {
        std::vector<double> shuffled(c.path.values);
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        const auto v = c.path.view();
        CHECK(std::abs(loo_log_statistic(shuffled, c.m.mu, c.m.gamma) - loo_log_statistic(v, c.m.mu, c.m.gamma)) <= 1e-12);
        CHECK(std::abs(linearized_statistic(shuffled, c.m.mu, c.m.gamma) - linearized_statistic(v, c.m.mu, c.m.gamma)) <=
              1e-12);
        CHECK(std::abs(standardized_sum(shuffled, c.m.mu, c.m.sigma) - standardized_sum(v, c.m.mu, c.m.sigma)) <= 1e-12);
        CHECK(geometric_mean_loo(shuffled) == doctest::Approx(geometric_mean_loo(v)).epsilon(1e-12));
    }
    // prefix-based statistics depend on order
    const std::vector<double> forward{1, 3};
    const std::vector<double> swapped{3, 1};
    CHECK(rw_log_statistic(forward, 2.0, 0.5) != doctest::Approx(rw_log_statistic(swapped, 2.0, 0.5)));
    CHECK(geometric_mean_prefix(forward) != doctest::Approx(geometric_mean_prefix(swapped)));
}

TEST_CASE("property: exp/log consistency of the product statistic") {
    for (const auto& c : random_cases(200, 2, 3000, 6)) {
        const double t = loo_log_statistic(c.path.view(), c.m.mu, c.m.gamma);
        CHECK(std::exp(t) > 0.0);
        if (std::abs(t) <= 50) CHECK(std::abs(std::log(std::exp(t)) - t) <= 1e-12);
    }
}

TEST_CASE("property: |loo - lin| <= 4 * remainder when max deviation < 1/2") {
    std::size_t checked = 0;
    for (const auto& c : random_cases(500, 2, 3000, 7)) {
        const auto v = c.path.view();
        if (max_relative_deviation(v, c.m.mu) >= 0.5) continue;
        ++checked;
        const double diff = std::abs(loo_log_statistic(v, c.m.mu, c.m.gamma) - linearized_statistic(v, c.m.mu, c.m.gamma));
        CHECK(diff <= 4.0 * remainder_magnitude(v, c.m.mu, c.m.gamma));
    }
    CHECK(checked > 300);
}
