// Pilot runs behind the calibrated acceptance thresholds. Prints a JSON
// document with per-seed values and summary percentiles; the committed copy
// lives in tests/fixtures/pilot_results.json.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "looprod/asclt.hpp"
#include "looprod/montecarlo.hpp"

using namespace looprod;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kFirstSeed = 1001;
constexpr std::size_t kSeeds = 50;

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Json summarize(const std::vector<double>& values) {
    return Json{{"median", percentile(values, 0.5)},
                {"p95", percentile(values, 0.95)},
                {"max", *std::max_element(values.begin(), values.end())},
                {"values", values}};
}

Json asclt_pilot() {
    const auto spec = parse_distribution("exponential:1");
    Json result{{"spec", spec.to_string()}, {"N", 20000}, {"exactCutoff", 2000}};
    for (auto kind : {StatisticKind::LeaveOneOutLogProduct, StatisticKind::StandardizedSum}) {
        std::vector<double> gaps;
        for (std::uint64_t s = 0; s < kSeeds; ++s) {
            gaps.push_back(run_asclt_path(spec, kind, 20000, kFirstSeed + s, default_grid(), 2000).supGap);
        }
        auto summary = summarize(gaps);
        summary["tolerance_1.5xp95"] = 1.5 * percentile(gaps, 0.95);
        result[std::string(kind_name(kind))] = summary;
    }
    return result;
}

Json slln_pilot() {
    const auto spec = parse_distribution("exponential:1");
    const std::vector<std::size_t> nList{1000, 10000, 100000};
    std::vector<std::vector<double>> errors(nList.size());
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
        const auto report = run_slln_experiment(spec, nList, kFirstSeed + s);
        for (std::size_t i = 0; i < nList.size(); ++i) errors[i].push_back(report.rows[i].errPrefix);
    }
    Json result{{"spec", spec.to_string()}, {"nList", nList}, {"errPrefix", Json::object()}};
    for (std::size_t i = 0; i < nList.size(); ++i) result["errPrefix"][std::to_string(nList[i])] = summarize(errors[i]);
    return result;
}

Json clt_pilot(StatisticKind kind, std::size_t seeds) {
    ExperimentConfig c;
    c.spec = parse_distribution("exponential:1");
    c.kind = kind;
    c.nList = {100, 1000, 10000};
    c.M = 5000;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    c.compareLaw = default_compare_law(kind, Scale::Log, moments(c.spec));
    std::vector<std::vector<double>> ks(c.nList.size());
    std::size_t decreasing = 0;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        c.baseSeed = kFirstSeed + s;
        const auto report = run_clt_experiment(c);
        for (std::size_t i = 0; i < report.rows.size(); ++i) ks[i].push_back(report.rows[i].ks);
        if (report.rows[0].ks > report.rows[1].ks && report.rows[1].ks > report.rows[2].ks) ++decreasing;
    }
    Json result{{"spec", c.spec.to_string()},
                {"kind", kind_name(kind)},
                {"law", to_string(c.compareLaw)},
                {"M", c.M},
                {"strictlyDecreasingRuns", decreasing},
                {"ks", Json::object()}};
    for (std::size_t i = 0; i < c.nList.size(); ++i) result["ks"][std::to_string(c.nList[i])] = summarize(ks[i]);
    return result;
}

}  // namespace

int main() {
    Json out{{"seeds", {{"first", kFirstSeed}, {"count", kSeeds}}},
             {"asclt", asclt_pilot()},
             {"slln", slln_pilot()},
             {"clt_loo", clt_pilot(StatisticKind::LeaveOneOutLogProduct, kSeeds)},
             {"clt_rw", clt_pilot(StatisticKind::PrefixLogProduct, kSeeds)}};
    std::cout << out.dump(2) << '\n';
}
