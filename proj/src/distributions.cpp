#include "looprod/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "looprod/errors.hpp"

namespace looprod {

namespace {

constexpr std::array kFamilies{Family::Exponential, Family::Gamma, Family::Lognormal, Family::UniformPositive,
                               Family::TwoPoint};

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

void require(bool ok, std::string_view family, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidParams, std::string(family) + ": " + what);
}

}  // namespace

std::string_view family_name(Family family) noexcept {
    switch (family) {
        case Family::Exponential: return "exponential";
        case Family::Gamma: return "gamma";
        case Family::Lognormal: return "lognormal";
        case Family::UniformPositive: return "uniform";
        case Family::TwoPoint: return "twopoint";
    }
    return "";
}

std::size_t family_arity(Family family) noexcept {
    switch (family) {
        case Family::Exponential: return 1;
        case Family::TwoPoint: return 3;
        default: return 2;
    }
}

DistributionSpec::DistributionSpec(Family family, std::span<const double> params)
    : family_(family), arity_(params.size()) {
    std::copy(params.begin(), params.end(), params_.begin());
}

std::string DistributionSpec::to_string() const {
    std::string out(family_name(family_));
    for (double p : params()) {
        out += ':';
        out += format_double(p);
    }
    return out;
}

DistributionSpec make_distribution(std::string_view familyName, std::span<const double> params) {
    const Family* found = nullptr;
    for (const auto& f : kFamilies) {
        if (family_name(f) == familyName) found = &f;
    }
    if (found == nullptr) {
        throw Error(ErrorCode::UnknownFamily,
                    "'" + std::string(familyName) + "' (expected exponential, gamma, lognormal, uniform, twopoint)");
    }
    const Family family = *found;
    if (params.size() != family_arity(family)) {
        throw Error(ErrorCode::InvalidParams, std::string(familyName) + " takes " +
                                                  std::to_string(family_arity(family)) + " parameter(s), got " +
                                                  std::to_string(params.size()));
    }
    for (double p : params) require(std::isfinite(p), familyName, "parameters must be finite");

    switch (family) {
        case Family::Exponential:
            require(params[0] > 0, familyName, "rate must be > 0");
            break;
        case Family::Gamma:
            require(params[0] > 0 && params[1] > 0, familyName, "shape and scale must be > 0");
            break;
        case Family::Lognormal:
            // logSd = 0 would be a point mass (sigma = 0)
            require(params[1] > 0, familyName, "logSd must be > 0");
            break;
        case Family::UniformPositive:
            require(params[0] > 0 && params[0] < params[1], familyName, "requires 0 < a < b");
            break;
        case Family::TwoPoint:
            require(params[0] > 0 && params[0] < params[1], familyName, "requires 0 < low < high");
            require(params[2] > 0 && params[2] < 1, familyName, "requires 0 < pLow < 1");
            break;
    }
    return DistributionSpec(family, params);
}

DistributionSpec parse_distribution(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    std::vector<double> params;
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    while (colon != std::string_view::npos) {
        const auto next = rest.find(':');
        const std::string token(rest.substr(0, next));
        std::size_t used = 0;
        double value = 0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size()) {
            throw Error(ErrorCode::InvalidParams, "cannot parse parameter '" + token + "' in '" + std::string(text) + "'");
        }
        params.push_back(value);
        if (next == std::string_view::npos) break;
        rest = rest.substr(next + 1);
    }
    return make_distribution(name, params);
}

Moments moments(const DistributionSpec& spec) noexcept {
    const auto p = spec.params();
    double mu = 0;
    double var = 0;
    switch (spec.family()) {
        case Family::Exponential:
            mu = 1.0 / p[0];
            var = mu * mu;
            break;
        case Family::Gamma:
            mu = p[0] * p[1];
            var = p[0] * p[1] * p[1];
            break;
        case Family::Lognormal: {
            const double s2 = p[1] * p[1];
            mu = std::exp(p[0] + 0.5 * s2);
            var = std::expm1(s2) * std::exp(2.0 * p[0] + s2);
            break;
        }
        case Family::UniformPositive:
            mu = 0.5 * (p[0] + p[1]);
            var = (p[1] - p[0]) * (p[1] - p[0]) / 12.0;
            break;
        case Family::TwoPoint:
            mu = p[2] * p[0] + (1.0 - p[2]) * p[1];
            var = p[2] * (1.0 - p[2]) * (p[1] - p[0]) * (p[1] - p[0]);
            break;
    }
    const double sigma = std::sqrt(var);
    return {mu, sigma, sigma / mu};
}

Sampler::Sampler(const DistributionSpec& spec, std::uint64_t baseSeed, std::uint64_t streamIndex)
    : spec_(spec), rng_(baseSeed, streamIndex) {}

// Marsaglia polar method; the second variate of each accepted pair is cached.
double Sampler::standard_normal() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spareNormal_;
    }
    double u = 0, v = 0, s = 0;
    do {
        u = 2.0 * rng_.uniform() - 1.0;
        v = 2.0 * rng_.uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spareNormal_ = v * factor;
    hasSpare_ = true;
    return u * factor;
}

// Marsaglia & Tsang (2000) squeeze/rejection for shape >= 1; shape < 1 is
// boosted through Gamma(shape + 1) * U^(1/shape).
double Sampler::standard_gamma(double shape) {
    if (shape < 1.0) {
        const double boosted = standard_gamma(shape + 1.0);
        const double draw = boosted * std::exp(std::log(rng_.uniform_open()) / shape);
        return draw > 0 ? draw : std::numeric_limits<double>::min();
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0, v = 0;
        do {
            x = standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng_.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Sampler::operator()() {
    const auto p = spec_.params();
    switch (spec_.family()) {
        case Family::Exponential:
            return -std::log(rng_.uniform_open()) / p[0];
        case Family::Gamma:
            return standard_gamma(p[0]) * p[1];
        case Family::Lognormal:
            return std::exp(p[0] + p[1] * standard_normal());
        case Family::UniformPositive:
            return p[0] + (p[1] - p[0]) * rng_.uniform();
        case Family::TwoPoint:
            return rng_.uniform() < p[2] ? p[0] : p[1];
    }
    return 0.0;
}

SamplePath sample(const DistributionSpec& spec, std::size_t n, std::uint64_t baseSeed, std::uint64_t streamIndex) {
    if (n == 0) throw Error(ErrorCode::ZeroLength, "sample length must be >= 1");
    Sampler draw(spec, baseSeed, streamIndex);
    std::vector<double> values(n);
    for (auto& v : values) v = draw();
    return SamplePath{std::move(values), spec, baseSeed, streamIndex};
}

}  // namespace looprod
