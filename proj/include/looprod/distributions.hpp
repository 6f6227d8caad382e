#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "looprod/rng.hpp"

namespace looprod {

enum class Family { Exponential, Gamma, Lognormal, UniformPositive, TwoPoint };

/// Stable CLI/config name of a family ("exponential", "gamma", "lognormal", "uniform", "twopoint").
std::string_view family_name(Family family) noexcept;
std::size_t family_arity(Family family) noexcept;

/*!
  A validated positive-support distribution.

  Parameter order per family:
    exponential  rate
    gamma        shape, scale
    lognormal    logMean, logSd
    uniform      a, b          (0 < a < b)
    twopoint     low, high, pLow

  Instances are immutable once constructed through make_distribution().
*/
class DistributionSpec {
public:
    /// Exponential(1).
    DistributionSpec() : family_(Family::Exponential), params_{1.0, 0.0, 0.0}, arity_(1) {}

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] std::span<const double> params() const noexcept { return {params_.data(), arity_}; }
    [[nodiscard]] double param(std::size_t i) const { return params_.at(i); }

    /// "family:p1[:p2[:p3]]" with shortest round-trip parameter formatting.
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
    friend DistributionSpec make_distribution(std::string_view, std::span<const double>);
    DistributionSpec(Family family, std::span<const double> params);

    Family family_;
    std::array<double, 3> params_{};
    std::size_t arity_ = 0;
};

/// Throws Error{UnknownFamily} or Error{InvalidParams}.
DistributionSpec make_distribution(std::string_view familyName, std::span<const double> params);

/// Parses the `family:param1[:param2...]` grammar used by the CLI and configs.
DistributionSpec parse_distribution(std::string_view text);

struct Moments {
    double mu;
    double sigma;
    double gamma;  // coefficient of variation sigma/mu
};

Moments moments(const DistributionSpec& spec) noexcept;

/// Ordered positive draws plus the inputs that regenerate them bit-for-bit.
struct SamplePath {
    std::vector<double> values;
    DistributionSpec spec;
    std::uint64_t baseSeed = 0;
    std::uint64_t streamIndex = 0;

    [[nodiscard]] std::span<const double> view() const noexcept { return values; }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/*!
  Draws variates one at a time from stream (baseSeed, streamIndex).

  sample() is implemented on top of this class, so the k-th call here returns
  exactly values[k-1] of the corresponding SamplePath. Not thread-safe; each
  task owns its own sampler.
*/
class Sampler {
public:
    Sampler(const DistributionSpec& spec, std::uint64_t baseSeed, std::uint64_t streamIndex);

    double operator()();

    [[nodiscard]] const DistributionSpec& spec() const noexcept { return spec_; }

private:
    double standard_normal();
    double standard_gamma(double shape);

    DistributionSpec spec_;
    StreamRng rng_;
    double spareNormal_ = 0.0;
    bool hasSpare_ = false;
};

/// Throws Error{ZeroLength} when n == 0.
SamplePath sample(const DistributionSpec& spec, std::size_t n, std::uint64_t baseSeed, std::uint64_t streamIndex);

}  // namespace looprod
