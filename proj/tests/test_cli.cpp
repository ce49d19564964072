#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pairglow/cli.hpp"
#include "pairglow/io.hpp"

using namespace pairglow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("pairglow_test_" + name))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::vector<std::vector<std::string>> read_csv(const fs::path& path)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(io::read_text(path));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path) << text;
}

} // namespace

TEST_CASE("simulate")
{
    TempDir dir("simulate");

    SUBCASE("writes the three outputs")
    {
        const auto r = invoke({"simulate", "--p", "0.5", "--q", "1", "--mu-bar", "1", "--tau-max",
                               "5", "--out", dir / "run"});
        REQUIRE(r.code == cli::kOk);
        const auto summary = nlohmann::json::parse(io::read_text(dir / "run/summary.json"));
        CHECK(summary["schema"] == 1);
        CHECK(summary["critical_times"]["t1"].get<double>() == doctest::Approx(1.76275).epsilon(1e-5));
        const auto trace = read_csv(dir / "run/concurrence.csv");
        CHECK(trace.front() == std::vector<std::string>{"tau", "c1", "c2", "C"});
        CHECK(trace.size() == 1002);
        const auto xs = read_csv(dir / "run/xstate.csv");
        CHECK(xs.front() == std::vector<std::string>{"tau", "eps", "rho_ee", "rho_eg_abs",
                                                     "sigma_pp", "sigma_pm_re", "rho_gg"});
    }
    SUBCASE("no excitation gives a flat zero trace")
    {
        REQUIRE(invoke({"simulate", "--p", "0", "--mu-bar", "1", "--out", dir / "zero"}).code == 0);
        const auto trace = read_csv(dir / "zero/concurrence.csv");
        for (std::size_t i = 1; i < trace.size(); ++i) {
            CHECK(std::stod(trace[i][3]) == 0.0);
        }
    }
    SUBCASE("identical input gives identical bytes")
    {
        const std::vector<std::string> base{"simulate", "--p", "0.37", "--q", "0.8", "--mu-bar",
                                            "0.41", "--out"};
        auto a = base;
        a.push_back(dir / "a");
        auto b = base;
        b.push_back(dir / "b");
        REQUIRE(invoke(a).code == 0);
        REQUIRE(invoke(b).code == 0);
        for (const char* f : {"concurrence.csv", "xstate.csv", "summary.json"}) {
            CHECK(io::read_text(fs::path(dir / "a") / f) == io::read_text(fs::path(dir / "b") / f));
        }
    }
    SUBCASE("pattern from a distance law")
    {
        write_file(dir.path / "s.json", R"({
  "initial": {"p": 0.5, "q": 1.0},
  "pattern": {"xi": 1.0, "distribution": {"kind": "radial_gaussian", "rbar_over_lambda0": 0.5, "dr_over_lambda0": 0.02}},
  "time": {"tau_max": 4.0, "n_steps": 41}
})");
        const auto r = invoke({"simulate", "--config", dir / "s.json", "--out", dir / "g"});
        REQUIRE(r.code == 0);
        const auto w = MotionDistribution::radial_gaussian(constants::pi, 0.04 * constants::pi);
        const auto summary = nlohmann::json::parse(r.out);
        CHECK(summary["pattern"]["mu_bar"].get<double>() ==
              doctest::Approx(mu_bar(1.0, w).mu_bar).epsilon(1e-12));
    }
}

TEST_CASE("exit codes")
{
    TempDir dir("exit");

    SUBCASE("out-of-range mu_bar")
    {
        const auto r = invoke({"simulate", "--p", "0.5", "--mu-bar", "1.5", "--out", dir / "x"});
        CHECK(r.code == cli::kInvalidConfig);
        CHECK(r.err.find("mu_bar") != std::string::npos);
    }
    SUBCASE("unknown flag")
    {
        CHECK(invoke({"simulate", "--bogus", "1"}).code == cli::kInvalidConfig);
    }
    SUBCASE("config errors name the line")
    {
        write_file(dir.path / "bad.json", "{\n  \"initial\": {\"p\": 0.5, \"q\": 1.0},\n"
                                          "  \"pattern\": {\"mu_bar\": 3.0}\n}\n");
        const auto r = invoke({"simulate", "--config", dir / "bad.json", "--out", dir / "x"});
        CHECK(r.code == cli::kInvalidConfig);
        CHECK(r.err.find("bad.json:3") != std::string::npos);

        write_file(dir.path / "broken.json", "{\n  \"initial\": {\"p\": 0.5,\n}\n");
        const auto s = invoke({"simulate", "--config", dir / "broken.json", "--out", dir / "x"});
        CHECK(s.code == cli::kInvalidConfig);
        CHECK(s.err.find("broken.json:3") != std::string::npos);
    }
    SUBCASE("quadrature budget exhausted")
    {
        write_file(dir.path / "far.json",
                   R"({"pattern": {"distribution": {"kind": "delta", "rbar_over_lambda0": 1e9}}})");
        const auto r = invoke({"simulate", "--config", dir / "far.json", "--p", "0.5", "--spectral",
                               "--eps-sp", "0.009", "--window-W", "1e15", "--out", dir / "x"});
        CHECK(r.code == cli::kNumericalFailure);
    }
    SUBCASE("output under a regular file")
    {
        write_file(dir.path / "plain", "x");
        const auto r = invoke({"simulate", "--p", "0.5", "--mu-bar", "1", "--out", dir / "plain/sub"});
        CHECK(r.code == cli::kOutputFailure);
        CHECK(invoke({"figures", "--which", "fig3", "--out", dir / "plain/sub"}).code ==
              cli::kOutputFailure);
    }
}

TEST_CASE("sweep")
{
    TempDir dir("sweep");

    SUBCASE("rows agree with single simulations and include empty cells")
    {
        REQUIRE(invoke({"sweep", "--p", "0,0.25,0.5,0.75", "--q", "0.3,1", "--mu-bar", "0.5,1",
                        "--jobs", "3", "--out", dir / "s"})
                    .code == 0);
        const auto rows = read_csv(dir / "s/sweep.csv");
        REQUIRE(rows.size() == 1 + 4 * 2 * 2);
        CHECK(rows[0] == std::vector<std::string>{"p", "q", "mu_bar", "eps1", "eps2", "t1", "t2",
                                                  "C_stat"});
        CHECK(rows[1][3].empty());
        CHECK(rows[1][4].empty());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& row = rows[i];
            const auto r = invoke({"simulate", "--p", row[0], "--q", row[1], "--mu-bar", row[2],
                                   "--n-steps", "2", "--out", dir / "single"});
            REQUIRE(r.code == 0);
            const auto ct = nlohmann::json::parse(r.out)["critical_times"];
            const char* keys[] = {"eps1", "eps2", "t1", "t2", "c_stationary"};
            for (int k = 0; k < 5; ++k) {
                const auto& v = ct[keys[k]];
                CHECK(row[3 + k] == (v.is_null() ? std::string{} : io::format_double(v.get<double>())));
            }
        }
    }
    SUBCASE("thread count does not change the table")
    {
        REQUIRE(invoke({"sweep", "--p", "lin:0.01:0.99:40", "--mu-bar", "lin:0:1:5", "--jobs", "1",
                        "--out", dir / "one"})
                    .code == 0);
        REQUIRE(invoke({"sweep", "--p", "lin:0.01:0.99:40", "--mu-bar", "lin:0:1:5", "--jobs", "7",
                        "--out", dir / "seven"})
                    .code == 0);
        CHECK(io::read_text(dir / "one/sweep.csv") == io::read_text(dir / "seven/sweep.csv"));
    }
    SUBCASE("quantity selection")
    {
        REQUIRE(invoke({"sweep", "--p", "0.5", "--quantities", "t2,eps1", "--out", dir / "sel"}).code == 0);
        CHECK(read_csv(dir / "sel/sweep.csv")[0] ==
              std::vector<std::string>{"p", "q", "mu_bar", "t2", "eps1"});
        CHECK(invoke({"sweep", "--p", "0.5", "--quantities", "t3", "--out", dir / "sel"}).code == 2);
    }
    SUBCASE("invalid grids")
    {
        CHECK(invoke({"sweep", "--out", dir / "e"}).code == cli::kInvalidConfig);
        CHECK(invoke({"sweep", "--p", "", "--out", dir / "e"}).code == cli::kInvalidConfig);
        CHECK(invoke({"sweep", "--p", "lin:0:1:0", "--out", dir / "e"}).code == cli::kInvalidConfig);
        CHECK(invoke({"sweep", "--p", "0.5,1.2", "--out", dir / "e"}).code == cli::kInvalidConfig);
        CHECK(invoke({"sweep", "--p", "0.5", "--jobs", "0", "--out", dir / "e"}).code ==
              cli::kInvalidConfig);
    }
    SUBCASE("environment sets the default worker count")
    {
        ::setenv("PAIRGLOW_JOBS", "3", 1);
        CHECK(cli::default_jobs() == 3);
        ::unsetenv("PAIRGLOW_JOBS");
        CHECK(cli::default_jobs() >= 1);
    }
    CHECK(cli::parse_grid("lin:0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("figures")
{
    TempDir dir("figures");
    REQUIRE(invoke({"figures", "--out", dir / "f"}).code == 0);

    const auto fig1 = read_csv(dir / "f/fig1.csv");
    CHECK(fig1.size() == 2001);
    CHECK(std::stod(fig1.back()[0]) == doctest::Approx(8.0 * constants::pi));
    CHECK(fs::exists(dir / "f/fig1_inset.csv"));

    const auto fig2 = read_csv(dir / "f/fig2.csv");
    CHECK(fig2[0] == std::vector<std::string>{"p", "eps1", "eps2_mu1", "eps2_mu0.5", "eps2_mu0"});
    bool found = false;
    for (const auto& row : fig2) {
        if (row[0] == "0.5") {
            CHECK(std::stod(row[1]) == doctest::Approx(0.171573).epsilon(1e-6));
            CHECK(std::stod(row[2]) < std::stod(row[1]));
            found = true;
        }
    }
    CHECK(found);

    const auto fig3 = read_csv(dir / "f/fig3.csv");
    for (std::size_t c = 1; c < fig3[1].size(); ++c) {
        CHECK(std::stod(fig3[1][c]) == 0.0);
    }
    CHECK(std::stod(fig3.back()[1]) == doctest::Approx(0.5).epsilon(1e-3));

    const auto fig4 = read_csv(dir / "f/fig4.csv");
    CHECK(std::stod(fig4[1][1]) == doctest::Approx(0.3).epsilon(1e-15));

    CHECK(invoke({"figures", "--which", "fig9", "--out", dir / "f"}).code == cli::kInvalidConfig);
}

TEST_CASE("validate, pattern and average")
{
    TempDir dir("misc");
    const std::vector<std::string> rb{"validate", "--lambda0", "780e-9", "--gamma0", "3.77e7",
                                      "--mass", "1.443e-25"};

    SUBCASE("advisory failure still exits 0")
    {
        auto args = rb;
        for (const char* a : {"--rbar", "1e-6", "--dr", "1e-12", "--json"}) {
            args.push_back(a);
        }
        const auto r = invoke(args);
        CHECK(r.code == 0);
        const auto report = nlohmann::json::parse(r.out);
        bool any_fail = false;
        for (const auto& m : report["margins"]) {
            any_fail = any_fail || !m["pass"].get<bool>();
        }
        CHECK(any_fail);
    }
    SUBCASE("strict factor decides borderline cases")
    {
        auto args = rb;
        for (const char* a : {"--rbar", "2e-6", "--dr", "4e-7", "--json"}) {
            args.push_back(a);
        }
        auto loose = args;
        loose.push_back("--strict-factor");
        loose.push_back("1");
        const auto strict = nlohmann::json::parse(invoke(args).out);
        const auto relaxed = nlohmann::json::parse(invoke(loose).out);
        int strict_passes = 0;
        int relaxed_passes = 0;
        for (std::size_t i = 0; i < strict["margins"].size(); ++i) {
            strict_passes += strict["margins"][i]["pass"].get<bool>();
            relaxed_passes += relaxed["margins"][i]["pass"].get<bool>();
        }
        CHECK(relaxed_passes > strict_passes);
    }
    SUBCASE("missing inputs")
    {
        CHECK(invoke({"validate", "--lambda0", "780e-9"}).code == cli::kInvalidConfig);
    }
    SUBCASE("pattern samples")
    {
        REQUIRE(invoke({"pattern", "--x-max", "10", "--n", "10", "--out", dir / "p"}).code == 0);
        const auto rows = read_csv(dir / "p/pattern.csv");
        REQUIRE(rows.size() == 11);
        CHECK(std::stod(rows[10][0]) == 10.0);
        CHECK(std::stod(rows[10][2]) == doctest::Approx(mu(1.0, 10.0)).epsilon(1e-15));
    }
    SUBCASE("average of a point law")
    {
        const auto r = invoke({"average", "--kind", "delta", "--rbar-over-lambda0", "0.5"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["near_field"]["mu_bar"].get<double>() == doctest::Approx(mu(1.0, constants::pi)));
        CHECK(invoke({"average", "--kind", "box", "--rbar-over-lambda0", "0.5"}).code == 2);
        CHECK(invoke({"average", "--kind", "delta", "--rbar-over-lambda0", "0.5", "--spectral",
                      "--eps-sp", "0.5"})
                  .code == cli::kInvalidConfig);
        CHECK(invoke({"average", "--kind", "delta", "--rbar-over-lambda0", "0.5", "--spectral",
                      "--window-W", "2"})
                  .code == cli::kInvalidConfig);
    }
}
