#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "looprod/asclt.hpp"
#include "looprod/distributions.hpp"
#include "looprod/errors.hpp"
#include "looprod/limits.hpp"
#include "looprod/montecarlo.hpp"
#include "looprod/statistics.hpp"
#include "looprod/streaming.hpp"

namespace py = pybind11;
using namespace looprod;

namespace {

StatisticKind kind_from(const std::string& name) {
    if (auto kind = parse_kind(name)) return *kind;
    throw Error(ErrorCode::ConfigError, "unknown statistic '" + name + "'");
}

// Wraps a path-in, double-out statistic so Python lists bind to std::span.
template <double (*F)(std::span<const double>, double, double)>
double on_list(const std::vector<double>& path, double a, double b) {
    return F(path, a, b);
}

}  // namespace

PYBIND11_MODULE(_looprod, m) {
    m.doc() = "Limit theorems for products of partial sums";

    static py::exception<Error> error(m, "LooprodError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<Moments>(m, "Moments")
        .def_readonly("mu", &Moments::mu)
        .def_readonly("sigma", &Moments::sigma)
        .def_readonly("gamma", &Moments::gamma);

    py::class_<DistributionSpec>(m, "DistributionSpec")
        .def(py::init([](const std::string& text) { return parse_distribution(text); }), py::arg("text"))
        .def_property_readonly("family", [](const DistributionSpec& s) { return std::string(family_name(s.family())); })
        .def_property_readonly("params", [](const DistributionSpec& s) {
            return std::vector<double>(s.params().begin(), s.params().end());
        })
        .def("moments", [](const DistributionSpec& s) { return moments(s); })
        .def("sample", [](const DistributionSpec& s, std::size_t n, std::uint64_t seed,
                          std::uint64_t stream) { return sample(s, n, seed, stream).values; },
             py::arg("n"), py::arg("seed"), py::arg("stream") = 0)
        .def("__str__", &DistributionSpec::to_string)
        .def("__repr__", [](const DistributionSpec& s) { return "DistributionSpec('" + s.to_string() + "')"; })
        .def("__eq__", [](const DistributionSpec& a, const DistributionSpec& b) { return a == b; });

    m.def("loo_log_statistic", &on_list<loo_log_statistic>, py::arg("path"), py::arg("mu"), py::arg("gamma"));
    m.def("rw_log_statistic", &on_list<rw_log_statistic>, py::arg("path"), py::arg("mu"), py::arg("gamma"));
    m.def("linearized_statistic", &on_list<linearized_statistic>, py::arg("path"), py::arg("mu"), py::arg("gamma"));
    m.def("standardized_sum", &on_list<standardized_sum>, py::arg("path"), py::arg("mu"), py::arg("sigma"));
    m.def("remainder_magnitude", &on_list<remainder_magnitude>, py::arg("path"), py::arg("mu"), py::arg("gamma"));
    m.def("geometric_mean_prefix", [](const std::vector<double>& p) { return geometric_mean_prefix(p); });
    m.def("geometric_mean_loo", [](const std::vector<double>& p) { return geometric_mean_loo(p); });
    m.def("max_relative_deviation", [](const std::vector<double>& p, double mu) { return max_relative_deviation(p, mu); });

    py::class_<SeriesEstimate>(m, "SeriesEstimate")
        .def_readonly("value", &SeriesEstimate::value)
        .def_readonly("valid", &SeriesEstimate::valid)
        .def_readonly("ratio", &SeriesEstimate::ratio)
        .def_readonly("leading_bound", &SeriesEstimate::leading_bound)
        .def_readonly("strict_bound", &SeriesEstimate::strict_bound);
    m.def("loo_log_series", [](const std::vector<double>& path, double mu, double gamma) {
        auto state = init_state(mu);
        for (double x : path) state.update(x);
        return loo_log_series(state, gamma);
    }, py::arg("path"), py::arg("mu"), py::arg("gamma"));

    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("normal_quantile", &normal_quantile, py::arg("p"));
    m.def("limit_cdf", [](const std::string& law, double x) { return limit_cdf(parse_limit_law(law), x); },
          py::arg("law"), py::arg("x"));
    m.def("default_grid", &default_grid);

    m.def("ks_distance", [](const std::vector<double>& values, const std::string& law) {
        return ks_distance(empirical_cdf(values), parse_limit_law(law));
    }, py::arg("values"), py::arg("law") = "n01");

    m.def("run_clt", [](const std::string& dist, const std::string& kind, std::vector<std::size_t> nList, std::size_t reps,
                        std::uint64_t seed, std::size_t workers) {
        ExperimentConfig c;
        c.spec = parse_distribution(dist);
        c.kind = kind_from(kind);
        c.nList = std::move(nList);
        c.M = reps;
        c.baseSeed = seed;
        c.workers = workers;
        c.compareLaw = default_compare_law(c.kind, Scale::Log, moments(c.spec));
        validate(c);
        py::gil_scoped_release release;
        const auto report = run_clt_experiment(c);
        std::vector<std::tuple<std::size_t, double, double, double>> rows;
        for (const auto& r : report.rows) rows.emplace_back(r.n, r.ks, r.mean, r.sd);
        return rows;
    }, py::arg("dist"), py::arg("kind"), py::arg("n_list"), py::arg("reps"), py::arg("seed"), py::arg("workers") = 1,
       "Rows of (n, ks, mean, sd).");

    m.def("run_asclt", [](const std::string& dist, const std::string& kind, std::size_t N, std::uint64_t seed,
                          std::size_t exactCutoff) {
        const auto report = run_asclt_path(parse_distribution(dist), kind_from(kind), N, seed, default_grid(), exactCutoff);
        return py::dict(py::arg("grid") = report.grid, py::arg("empirical") = report.empirical,
                        py::arg("limit") = report.limit, py::arg("sup_gap") = report.supGap);
    }, py::arg("dist"), py::arg("kind"), py::arg("N"), py::arg("seed"), py::arg("exact_cutoff") = 2000);
}
