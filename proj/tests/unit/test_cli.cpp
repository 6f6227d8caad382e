#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "looprod/cli.hpp"
#include "looprod/errors.hpp"
#include "looprod/report_io.hpp"

namespace fs = std::filesystem;
using looprod::cli::parse_and_run;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = parse_and_run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "looprod_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("clt writes one CSV row per n") {
    const auto r = run({"clt", "--dist", "exponential:1", "--stat", "loo", "--n", "10,100", "--reps", "50", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "n,M,ks,mean,sd,mean_remainder,mean_maxdev,seconds");
    CHECK(rows[1].starts_with("10,50,"));
    CHECK(rows[2].starts_with("100,50,"));
    CHECK(rows[2].ends_with(",0"));
    CHECK(r.err.find("resolved config") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2") {
    CHECK(run({"clt", "--dist", "exponential:1", "--stat", "bogus"}).code == 2);
    CHECK(run({"clt", "--dist", "weibull:1"}).code == 2);
    CHECK(run({"clt", "--dist", "exponential:-1"}).code == 2);
    CHECK(run({"clt", "--dist", "exponential:1", "--n", "100,10"}).code == 2);
    CHECK(run({"clt", "--stat", "loo"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"asclt", "--dist", "exponential:1", "--stat", "gm-loo"}).code == 2);
    CHECK(run({"clt", "--dist", "exponential:1", "--plot", "x.gp"}).code == 2);
    CHECK(run({"clt", "--config", "/nonexistent/config.json"}).code == 2);
}

TEST_CASE("--help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("clt") != std::string::npos);
}

TEST_CASE("identity passes and a wrong mu fails") {
    const auto ok = run({"identity", "--dist", "gamma:2:1", "--n", "500", "--reps", "20"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    const auto bad = run({"identity", "--dist", "exponential:1", "--n", "500", "--reps", "5", "--mu-override", "1.1"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("slln and dist-table") {
    const auto s = run({"slln", "--dist", "lognormal:0:1", "--n", "100,1000"});
    REQUIRE(s.code == 0);
    auto rows = lines(s.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "n,gm_prefix,gm_loo,err_prefix,err_loo");

    const auto t = run({"dist-table", "--dist", "exponential:1", "--dist", "uniform:1:3", "--n", "1000"});
    REQUIRE(t.code == 0);
    rows = lines(t.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "spec,mu,sigma,gamma,sample_mean,sample_var,mean_z,var_z,min");
    CHECK(rows[1].starts_with("\"exponential:1\",1,1,1,"));
    CHECK(rows[2].starts_with("\"uniform:1:3\",2,"));
}

TEST_CASE("asclt writes the grid and a summary") {
    const auto dir = scratch_dir();
    const auto summary = dir / "summary.json";
    const auto r = run({"asclt", "--dist", "exponential:1", "--N", "3000", "--seed", "11", "--summary", summary.string()});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "x,A_N,F_limit,gap");
    CHECK(rows.size() == 20);
    CHECK(r.err.find("sup_gap=") != std::string::npos);
    CHECK(slurp(summary).find("\"modeSwitchN\"") != std::string::npos);
}

TEST_CASE("emitted config reproduces the CSV byte for byte") {
    const auto dir = scratch_dir();
    const auto config = dir / "clt.json";
    const auto first = run({"clt", "--dist", "gamma:0.5:2", "--stat", "rw", "--n", "20,200", "--reps", "40", "--seed",
                            "99", "--workers", "3", "--emit-config", config.string()});
    REQUIRE(first.code == 0);
    const auto second = run({"clt", "--config", config.string()});
    REQUIRE(second.code == 0);
    CHECK(first.out == second.out);

    const auto overridden = run({"clt", "--config", config.string(), "--reps", "41"});
    REQUIRE(overridden.code == 0);
    CHECK(lines(overridden.out)[1].starts_with("20,41,"));

    CHECK(run({"slln", "--config", config.string()}).code == 2);
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"spec": "exponential:1", "bogusKey": 1})";
    }
    CHECK(run({"clt", "--config", (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("plot scripts reference the CSV") {
    const auto dir = scratch_dir();
    const auto csv = dir / "clt.csv";
    const auto plot = dir / "clt.gp";
    const auto r = run({"clt", "--dist", "exponential:1", "--n", "10,100", "--reps", "20", "--out", csv.string(), "--plot",
                        plot.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(lines(slurp(csv)).size() == 3);
    CHECK(slurp(plot).find(csv.string()) != std::string::npos);

    looprod::ConvergenceReport empty;
    CHECK_THROWS_AS(looprod::emit_plot_script(empty, csv, dir / "empty.gp"), looprod::Error);
}
