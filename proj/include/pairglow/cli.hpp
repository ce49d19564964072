#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairglow/concurrence.hpp"
#include "pairglow/dipole_pattern.hpp"
#include "pairglow/physcore.hpp"

namespace pairglow::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidConfig = 2,
    kNumericalFailure = 3,
    kOutputFailure = 4,
};

/// Where mu_bar comes from: a direct value, or a pattern averaged over a
/// motional distribution.
struct PatternSpec {
    std::optional<double> mu_bar;
    double xi = 1.0;
    std::optional<MotionDistribution> distribution;
    bool spectral = false;
    double eps_sp = 1e-6;
    double window_W = kDefaultWindow;
};

struct OutputPaths {
    std::string concurrence_csv = "concurrence.csv";
    std::string xstate_csv = "xstate.csv";
    std::string summary_json = "summary.json";
};

struct ScenarioConfig {
    InitialElectronicState initial;
    PatternSpec pattern;
    double tau_max = 10.0;
    int n_steps = 1001;
    OutputPaths outputs;

    /// Throws ConfigError for out-of-domain values.
    void validate() const;
    std::vector<double> tau_grid() const;
};

/// Reads a scenario document. Errors carry the line of the offending key
/// in `text` when it can be located.
ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::string& text = {},
                                  const std::string& source = "config");

/// mu_bar for the scenario, with the averaging diagnostics when a
/// distribution was given.
PatternAverage resolve_pattern(const PatternSpec& spec);

/// Writes the concurrence trace, the X-state trace and the JSON summary
/// into out_dir and returns the summary.
nlohmann::json run_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

inline const std::vector<std::string> kSweepQuantities = {"eps1", "eps2", "t1", "t2", "C_stat"};

struct SweepSpec {
    std::vector<double> p;
    std::vector<double> q{1.0};
    std::vector<double> mu_bar{1.0};
    std::vector<std::string> quantities = kSweepQuantities;
    std::string output = "sweep.csv";

    void validate() const;
};

/// "0.1,0.2,0.5" or "lin:min:max:n".
std::vector<double> parse_grid(const std::string& text);

SweepSpec sweep_from_json(const nlohmann::json& j, const std::string& text = {},
                          const std::string& source = "sweep");

struct SweepRow {
    double p;
    double q;
    double mu_bar;
    CriticalTimes times;
};

/// One row per (p, q, mu_bar) point in p-major order, evaluated on up to
/// `jobs` threads. Row order does not depend on the thread count.
std::vector<SweepRow> compute_sweep(const SweepSpec& spec, int jobs);

std::filesystem::path run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                int jobs);

enum class Figure { Pattern, Zeros, SeparableBirth, DegradedBell };

std::optional<Figure> figure_from_name(const std::string& name);

/// Writes the data files of one figure into out_dir and returns their paths.
std::vector<std::filesystem::path> run_figures(Figure which, const std::filesystem::path& out_dir);

/// x, mu(0, x), mu(1, x) on x_i = x_max i / n, i = 1..n.
std::filesystem::path write_pattern_csv(const std::filesystem::path& path, double x_max, int n);

/// Default worker count: PAIRGLOW_JOBS, else the hardware concurrency.
int default_jobs();

/// Full command-line entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pairglow::cli
