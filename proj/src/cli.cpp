#include "looprod/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "looprod/asclt.hpp"
#include "looprod/compensated.hpp"
#include "looprod/distributions.hpp"
#include "looprod/errors.hpp"
#include "looprod/montecarlo.hpp"
#include "looprod/report_io.hpp"
#include "looprod/statistics.hpp"

namespace looprod::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kKindNames{"loo", "rw", "lin", "std", "gm-prefix", "gm-loo"};
const std::vector<std::string> kDefaultTableSpecs{"exponential:1", "gamma:4:0.5", "lognormal:0:0.5",
                                                  "uniform:0.5:1.5", "twopoint:1:3:0.5"};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flags shared by every subcommand; unset optionals fall back to the config file, then defaults.
struct CommonFlags {
    std::string configPath;
    std::string emitConfigPath;
    std::string outPath;
    std::string plotPath;
    std::optional<std::uint64_t> seed;
};

struct Flags {
    CommonFlags common;
    std::optional<std::string> dist;
    std::vector<std::string> dists;
    std::optional<std::string> stat;
    std::vector<std::size_t> nList;
    std::optional<std::size_t> n;
    std::optional<std::size_t> bigN;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> workers;
    std::optional<std::size_t> exactCutoff;
    std::vector<double> grid;
    std::optional<std::string> scale;
    std::optional<std::string> law;
    std::optional<double> muOverride;
    bool timing = false;
    std::string summaryPath;
};

Json load_config(const std::string& path, const std::string& subcommand) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path);
    Json config;
    try {
        config = Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ConfigError, "invalid JSON in " + path + ": " + e.what());
    }
    if (!config.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    if (config.contains("subcommand") && config["subcommand"] != subcommand) {
        throw Error(ErrorCode::ConfigError, "config is for subcommand " + config["subcommand"].dump() + ", not " +
                                                subcommand);
    }
    return config;
}

void reject_unknown_keys(const Json& config, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : config.items()) {
        if (key == "subcommand") continue;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
        }
    }
}

template <typename T>
T config_value(const Json& config, const char* key, const std::optional<T>& flag, const T& fallback) {
    if (flag) return *flag;
    if (!config.contains(key)) return fallback;
    try {
        return config.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("config key '") + key + "': " + e.what());
    }
}

template <typename T>
std::vector<T> config_list(const Json& config, const char* key, const std::vector<T>& flag,
                           const std::vector<T>& fallback) {
    return config_value<std::vector<T>>(config, key, flag.empty() ? std::nullopt : std::optional(flag), fallback);
}

std::string required_dist(const Json& config, const Flags& flags) {
    auto dist = config_value<std::string>(config, "spec", flags.dist, "");
    if (dist.empty()) throw UsageError("--dist is required (e.g. --dist exponential:1)");
    return dist;
}

StatisticKind resolve_kind(const std::string& name) {
    auto kind = parse_kind(name);
    if (!kind) throw Error(ErrorCode::ConfigError, "unknown statistic '" + name + "' (valid: loo, rw, lin, std, gm-prefix, gm-loo)");
    return *kind;
}

Scale resolve_scale(const std::string& name) {
    if (name == "log") return Scale::Log;
    if (name == "product") return Scale::Product;
    throw Error(ErrorCode::ConfigError, "unknown scale '" + name + "' (valid: log, product)");
}

void emit_config(const Json& resolved, const CommonFlags& common, std::ostream& err) {
    err << "resolved config: " << resolved.dump() << '\n';
    if (common.emitConfigPath.empty()) return;
    std::ofstream out(common.emitConfigPath);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + common.emitConfigPath);
    out << resolved.dump(2) << '\n';
}

/// Writes through `write` to --out, or to stdout when --out is absent.
template <typename Fn>
void write_output(const CommonFlags& common, std::ostream& out, Fn&& write) {
    if (common.outPath.empty()) {
        write(out);
        return;
    }
    std::ofstream file(common.outPath);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + common.outPath);
    write(file);
    file.flush();
    if (!file) throw Error(ErrorCode::IoError, "failed writing " + common.outPath);
}

void require_plot_csv(const CommonFlags& common) {
    if (!common.plotPath.empty() && common.outPath.empty()) throw UsageError("--plot requires --out (the script references the CSV)");
}

int run_clt(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Json config = load_config(flags.common.configPath, "clt");
    reject_unknown_keys(config, {"spec", "kind", "nList", "M", "baseSeed", "compareLaw", "workers", "scale", "timing"});
    require_plot_csv(flags.common);

    ExperimentConfig exp;
    exp.spec = parse_distribution(required_dist(config, flags));
    exp.kind = resolve_kind(config_value<std::string>(config, "kind", flags.stat, "loo"));
    exp.nList = config_list<std::size_t>(config, "nList", flags.nList, {100, 1000, 10000});
    exp.M = config_value<std::size_t>(config, "M", flags.reps, 1000);
    exp.baseSeed = config_value<std::uint64_t>(config, "baseSeed", flags.common.seed, kDefaultSeed);
    exp.workers = config_value<std::size_t>(config, "workers", flags.workers, 1);
    exp.scale = resolve_scale(config_value<std::string>(config, "scale", flags.scale, "log"));
    const LimitLaw defaultLaw = default_compare_law(exp.kind, exp.scale, moments(exp.spec));
    exp.compareLaw = parse_limit_law(config_value<std::string>(config, "compareLaw", flags.law, to_string(defaultLaw)));
    const bool timing = flags.timing || config.value("timing", false);
    validate(exp);

    Json resolved{{"subcommand", "clt"},
                  {"spec", exp.spec.to_string()},
                  {"kind", kind_name(exp.kind)},
                  {"nList", exp.nList},
                  {"M", exp.M},
                  {"baseSeed", exp.baseSeed},
                  {"compareLaw", to_string(exp.compareLaw)},
                  {"workers", exp.workers},
                  {"scale", scale_name(exp.scale)},
                  {"timing", timing}};
    emit_config(resolved, flags.common, err);

    const auto report = run_clt_experiment(exp);
    for (const auto& row : report.rows) {
        if (row.failures > 0) err << "warning: n = " << row.n << ": " << row.failures << " replicate(s) failed\n";
    }
    write_output(flags.common, out, [&](std::ostream& o) { write_convergence_csv(o, report, timing); });
    if (!flags.common.plotPath.empty()) emit_plot_script(report, flags.common.outPath, flags.common.plotPath);
    return kExitOk;
}

int run_asclt(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Json config = load_config(flags.common.configPath, "asclt");
    reject_unknown_keys(config, {"spec", "kind", "N", "baseSeed", "exactCutoff", "grid"});
    require_plot_csv(flags.common);

    const auto spec = parse_distribution(required_dist(config, flags));
    const auto kind = resolve_kind(config_value<std::string>(config, "kind", flags.stat, "loo"));
    const auto bigN = config_value<std::size_t>(config, "N", flags.bigN, 20000);
    const auto seed = config_value<std::uint64_t>(config, "baseSeed", flags.common.seed, kDefaultSeed);
    const auto cutoff = config_value<std::size_t>(config, "exactCutoff", flags.exactCutoff, 2000);
    const auto grid = config_list<double>(config, "grid", flags.grid, default_grid());

    Json resolved{{"subcommand", "asclt"}, {"spec", spec.to_string()}, {"kind", kind_name(kind)},
                  {"N", bigN},             {"baseSeed", seed},          {"exactCutoff", cutoff},
                  {"grid", grid}};
    emit_config(resolved, flags.common, err);

    const auto report = run_asclt_path(spec, kind, bigN, seed, grid, cutoff);
    err << "sup_gap=" << format_number(report.supGap) << " law=" << to_string(report.law)
        << " first_n=" << report.firstN << " mode_switch_n=" << report.modeSwitchN
        << " series_evaluations=" << report.seriesEvaluations << " exact_fallbacks=" << report.exactFallbacks << '\n';
    err << "note: accumulation starts at n = 2 and is normalized by sum_{n=2}^N 1/n; "
           "log N-normalized values are in the summary\n";

    write_output(flags.common, out, [&](std::ostream& o) { write_asclt_csv(o, report); });
    if (!flags.common.plotPath.empty()) emit_plot_script(report, flags.common.outPath, flags.common.plotPath);
    if (!flags.summaryPath.empty()) {
        Json summary{{"supGap", report.supGap},
                     {"law", to_string(report.law)},
                     {"firstN", report.firstN},
                     {"modeSwitchN", report.modeSwitchN},
                     {"seriesEvaluations", report.seriesEvaluations},
                     {"exactFallbacks", report.exactFallbacks},
                     {"A_N", report.empirical},
                     {"A_N_logN", report.empiricalLogN}};
        std::ofstream file(flags.summaryPath);
        if (!file) throw Error(ErrorCode::IoError, "cannot write " + flags.summaryPath);
        file << summary.dump(2) << '\n';
    }
    return kExitOk;
}

int run_slln(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Json config = load_config(flags.common.configPath, "slln");
    reject_unknown_keys(config, {"spec", "nList", "baseSeed"});
    require_plot_csv(flags.common);

    const auto spec = parse_distribution(required_dist(config, flags));
    const auto nList = config_list<std::size_t>(config, "nList", flags.nList, {1000, 10000, 100000});
    const auto seed = config_value<std::uint64_t>(config, "baseSeed", flags.common.seed, kDefaultSeed);

    Json resolved{{"subcommand", "slln"}, {"spec", spec.to_string()}, {"nList", nList}, {"baseSeed", seed}};
    emit_config(resolved, flags.common, err);

    const auto report = run_slln_experiment(spec, nList, seed);
    write_output(flags.common, out, [&](std::ostream& o) { write_slln_csv(o, report); });
    if (!flags.common.plotPath.empty()) emit_plot_script(report, flags.common.outPath, flags.common.plotPath);
    return kExitOk;
}

int run_identity(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Json config = load_config(flags.common.configPath, "identity");
    reject_unknown_keys(config, {"spec", "n", "reps", "baseSeed", "muOverride"});

    const auto spec = parse_distribution(required_dist(config, flags));
    const auto n = config_value<std::size_t>(config, "n", flags.n, 1000);
    const auto reps = config_value<std::size_t>(config, "reps", flags.reps, 100);
    const auto seed = config_value<std::uint64_t>(config, "baseSeed", flags.common.seed, kDefaultSeed);
    std::optional<double> muOverride = flags.muOverride;
    if (!muOverride && config.contains("muOverride")) muOverride = config["muOverride"].get<double>();
    if (n < 2) throw Error(ErrorCode::ConfigError, "identity check needs n >= 2");
    if (reps == 0) throw Error(ErrorCode::ConfigError, "reps must be >= 1");

    Json resolved{{"subcommand", "identity"}, {"spec", spec.to_string()}, {"n", n}, {"reps", reps}, {"baseSeed", seed}};
    if (muOverride) resolved["muOverride"] = *muOverride;
    emit_config(resolved, flags.common, err);

    // The override replaces mu only on the leave-one-out side; the standardized side keeps
    // the analytic moments, so any offset shows up as a discrepancy.
    const Moments m = moments(spec);
    const double linMu = muOverride.value_or(m.mu);
    double worst = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto path = sample(spec, n, seed, r);
        const double lin = linearized_statistic(path.view(), linMu, m.gamma);
        const double standardized = standardized_sum(path.view(), m.mu, m.sigma);
        worst = std::max(worst, std::abs(lin - standardized));
    }
    constexpr double kTolerance = 1e-10;
    out << "max_abs_discrepancy=" << format_number(worst) << " tolerance=" << format_number(kTolerance) << ' '
        << (worst <= kTolerance ? "PASS" : "FAIL") << '\n';
    return worst <= kTolerance ? kExitOk : kExitRuntime;
}

int run_dist_table(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Json config = load_config(flags.common.configPath, "dist-table");
    reject_unknown_keys(config, {"specs", "n", "baseSeed"});

    const auto specTexts = config_list<std::string>(config, "specs", flags.dists, kDefaultTableSpecs);
    const auto n = config_value<std::size_t>(config, "n", flags.n, 100000);
    const auto seed = config_value<std::uint64_t>(config, "baseSeed", flags.common.seed, kDefaultSeed);
    std::vector<DistributionSpec> specs;
    for (const auto& text : specTexts) specs.push_back(parse_distribution(text));
    if (n < 2) throw Error(ErrorCode::ConfigError, "dist-table needs n >= 2 draws");

    Json resolved{{"subcommand", "dist-table"}, {"specs", Json::array()}, {"n", n}, {"baseSeed", seed}};
    for (const auto& s : specs) resolved["specs"].push_back(s.to_string());
    emit_config(resolved, flags.common, err);

    write_output(flags.common, out, [&](std::ostream& o) {
        o << "spec,mu,sigma,gamma,sample_mean,sample_var,mean_z,var_z,min\n";
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const Moments m = moments(specs[i]);
            const auto path = sample(specs[i], n, seed, i);
            const double count = static_cast<double>(n);
            CompensatedSum sum;
            for (double x : path.values) sum += x;
            const double mean = sum.value() / count;
            CompensatedSum m2, m4;
            for (double x : path.values) {
                const double d = (x - mean) * (x - mean);
                m2 += d;
                m4 += d * d;
            }
            const double var = m2.value() / (count - 1.0);
            const double varSe = std::sqrt(std::max(m4.value() / count - var * var, 0.0) / count);
            const double meanZ = (mean - m.mu) / std::sqrt(var / count);
            const double varZ = (var - m.sigma * m.sigma) / varSe;
            const double smallest = *std::min_element(path.values.begin(), path.values.end());
            o << '"' << specs[i].to_string() << '"' << ',' << format_number(m.mu) << ',' << format_number(m.sigma)
              << ',' << format_number(m.gamma) << ',' << format_number(mean) << ',' << format_number(var) << ','
              << format_number(meanZ) << ',' << format_number(varZ) << ',' << format_number(smallest) << '\n';
        }
    });
    return kExitOk;
}

void add_common(CLI::App* sub, CommonFlags& common) {
    sub->add_option("--config", common.configPath, "JSON config; explicit flags override its values");
    sub->add_option("--emit-config", common.emitConfigPath, "write the resolved config as JSON");
    sub->add_option("--seed", common.seed, "base seed (default " + std::to_string(kDefaultSeed) + ")");
    sub->add_option("--out", common.outPath, "output CSV (default: stdout)");
}

}  // namespace

int parse_and_run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Limit theorems for products of partial sums: Monte Carlo verification"};
    app.name("looprod");
    app.require_subcommand(1);
    Flags flags;

    auto* clt = app.add_subcommand("clt", "Monte Carlo CLT experiment with KS distances to the limit law");
    add_common(clt, flags.common);
    clt->add_option("--dist", flags.dist, "family:param1[:param2...]");
    clt->add_option("--stat", flags.stat, "statistic")->check(CLI::IsMember(kKindNames));
    clt->add_option("--n", flags.nList, "comma-separated sample sizes")->delimiter(',');
    clt->add_option("--reps", flags.reps, "replicates per n (M)");
    clt->add_option("--workers", flags.workers, "worker threads");
    clt->add_option("--scale", flags.scale, "log or product")->check(CLI::IsMember({"log", "product"}));
    clt->add_option("--law", flags.law, "comparison law (n01, n02, expnorm, expsqrt2, point:<mu>)");
    clt->add_flag("--timing", flags.timing, "record wall-clock seconds per row (otherwise 0)");
    clt->add_option("--plot", flags.common.plotPath, "write a gnuplot script for the CSV");

    auto* asclt = app.add_subcommand("asclt", "single-path logarithmic-average (almost sure) CLT");
    add_common(asclt, flags.common);
    asclt->add_option("--dist", flags.dist, "family:param1[:param2...]");
    asclt->add_option("--stat", flags.stat, "statistic")->check(CLI::IsMember({"loo", "rw", "lin", "std"}));
    asclt->add_option("--N", flags.bigN, "path length");
    asclt->add_option("--exact-cutoff", flags.exactCutoff, "largest n evaluated exactly for loo/lin");
    asclt->add_option("--grid", flags.grid, "comma-separated evaluation grid")->delimiter(',');
    asclt->add_option("--summary", flags.summaryPath, "write run summary JSON");
    asclt->add_option("--plot", flags.common.plotPath, "write a gnuplot script for the CSV");

    auto* slln = app.add_subcommand("slln", "geometric means of prefix and leave-one-out sums along one path");
    add_common(slln, flags.common);
    slln->add_option("--dist", flags.dist, "family:param1[:param2...]");
    slln->add_option("--n", flags.nList, "comma-separated sample sizes")->delimiter(',');
    slln->add_option("--plot", flags.common.plotPath, "write a gnuplot script for the CSV");

    auto* identity = app.add_subcommand("identity", "check linearized leave-one-out sum == standardized sum");
    add_common(identity, flags.common);
    identity->add_option("--dist", flags.dist, "family:param1[:param2...]");
    identity->add_option("--n", flags.n, "path length");
    identity->add_option("--reps", flags.reps, "number of paths");
    identity->add_option("--mu-override", flags.muOverride, "mu used by the leave-one-out side only");

    auto* table = app.add_subcommand("dist-table", "analytic vs sampled moments per distribution");
    add_common(table, flags.common);
    table->add_option("--dist", flags.dists, "family:param1[:param2...] (repeatable)");
    table->add_option("--n", flags.n, "draws per distribution");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (clt->parsed()) return run_clt(flags, out, err);
        if (asclt->parsed()) return run_asclt(flags, out, err);
        if (slln->parsed()) return run_slln(flags, out, err);
        if (identity->parsed()) return run_identity(flags, out, err);
        if (table->parsed()) return run_dist_table(flags, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        const bool inputProblem = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::UnknownFamily ||
                                  e.code() == ErrorCode::InvalidParams;
        return inputProblem ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace looprod::cli
