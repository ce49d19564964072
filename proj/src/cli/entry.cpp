#include <CLI11.hpp>

#include <ostream>

#include "pairglow/cli.hpp"
#include "pairglow/errors.hpp"
#include "pairglow/io.hpp"

namespace pairglow::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Document {
    json value = json::object();
    std::string text;
    std::string source = "command line";
};

Document load_document(const std::string& path)
{
    Document doc;
    if (path.empty()) {
        return doc;
    }
    doc.text = io::read_text(path);
    doc.source = path;
    doc.value = io::parse_document(doc.text, path);
    if (!doc.value.is_object()) {
        throw ConfigError(path + ":1: top level must be a JSON object", 1);
    }
    return doc;
}

template <typename T>
void override_value(json& target, const std::optional<T>& v, std::initializer_list<const char*> path)
{
    if (!v) {
        return;
    }
    json* node = &target;
    for (const char* key : path) {
        if (!node->is_object()) {
            *node = json::object();
        }
        node = &(*node)[key];
    }
    *node = *v;
}

struct CommonFlags {
    std::string config;
    std::string out = ".";
    std::optional<int> jobs;
    std::optional<double> window_W;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Entanglement dynamics of two free two-level atoms with quantized relative motion",
                 "pairglow"};
    app.require_subcommand(1);

    CommonFlags common;
    auto add_common = [&](CLI::App* sub, bool with_jobs) {
        sub->add_option("--config", common.config, "JSON configuration file");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--window-W", common.window_W, "spectral window half-width in linewidths");
        if (with_jobs) {
            sub->add_option("--jobs", common.jobs, "worker threads (default: PAIRGLOW_JOBS)");
        }
    };

    // simulate
    auto* simulate = app.add_subcommand("simulate", "time trace of the state and concurrence");
    add_common(simulate, false);
    std::optional<double> sim_p, sim_q, sim_mu, sim_xi, sim_tau_max, sim_eps_sp;
    std::optional<int> sim_steps;
    bool sim_spectral = false;
    simulate->add_option("--p", sim_p, "initial excited-state probability");
    simulate->add_option("--q", sim_q, "initial coherence factor");
    simulate->add_option("--mu-bar", sim_mu, "averaged dipole-dipole pattern");
    simulate->add_option("--xi", sim_xi, "dipole orientation factor");
    simulate->add_option("--tau-max", sim_tau_max, "final time in units of 1/gamma0");
    simulate->add_option("--n-steps", sim_steps, "number of time points");
    simulate->add_option("--eps-sp", sim_eps_sp, "gamma0/omega0 for the spectral average");
    simulate->add_flag("--spectral", sim_spectral, "average the Lorentzian-weighted pattern");

    // figures
    auto* figures = app.add_subcommand("figures", "data files for the four figures");
    add_common(figures, false);
    std::string which = "all";
    figures->add_option("--which", which, "fig1|fig2|fig3|fig4|all");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "critical times over a parameter grid");
    add_common(sweep, true);
    std::optional<std::string> sw_p, sw_q, sw_mu, sw_quantities;
    sweep->add_option("--p", sw_p, "grid: comma list or lin:min:max:n");
    sweep->add_option("--q", sw_q, "grid: comma list or lin:min:max:n");
    sweep->add_option("--mu-bar", sw_mu, "grid: comma list or lin:min:max:n");
    sweep->add_option("--quantities", sw_quantities, "comma list of eps1,eps2,t1,t2,C_stat");

    // validate
    auto* validate = app.add_subcommand("validate", "check the regime-of-validity conditions");
    add_common(validate, false);
    std::optional<double> v_omega0, v_lambda0, v_gamma0, v_mass, v_xi, v_rbar, v_dr, v_strict;
    bool v_json = false;
    validate->add_option("--omega0", v_omega0, "transition angular frequency [rad/s]");
    validate->add_option("--lambda0", v_lambda0, "transition wavelength [m]");
    validate->add_option("--gamma0", v_gamma0, "natural linewidth [rad/s]");
    validate->add_option("--mass", v_mass, "atomic mass [kg]");
    validate->add_option("--xi", v_xi, "dipole orientation factor");
    validate->add_option("--rbar", v_rbar, "mean inter-atomic distance [m]");
    validate->add_option("--dr", v_dr, "initial rms spread [m]");
    validate->add_option("--strict-factor", v_strict, "ratio that counts as 'much larger' (10)");
    validate->add_flag("--json", v_json, "print the JSON report instead of the table");

    // pattern
    auto* pattern = app.add_subcommand("pattern", "sample the dissipative dipole-dipole pattern");
    add_common(pattern, false);
    double pat_x_max = 8.0 * constants::pi;
    int pat_n = 2000;
    pattern->add_option("--x-max", pat_x_max, "largest k0 r");
    pattern->add_option("--n", pat_n, "number of samples");

    // average
    auto* average = app.add_subcommand("average", "average the pattern over a distance law");
    add_common(average, false);
    std::optional<std::string> av_kind;
    std::optional<double> av_rbar, av_dr, av_xi, av_eps_sp;
    bool av_spectral = false;
    average->add_option("--kind", av_kind, "delta|radial_gaussian");
    average->add_option("--rbar-over-lambda0", av_rbar, "mean distance / lambda0");
    average->add_option("--dr-over-lambda0", av_dr, "rms spread / lambda0");
    average->add_option("--xi", av_xi, "dipole orientation factor");
    average->add_option("--eps-sp", av_eps_sp, "gamma0/omega0 for the spectral average");
    average->add_flag("--spectral", av_spectral, "include the Lorentzian spectral average");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (simulate->parsed()) {
            auto doc = load_document(common.config);
            json& j = doc.value;
            override_value(j, sim_p, {"initial", "p"});
            override_value(j, sim_q, {"initial", "q"});
            if (sim_mu) {
                if (j.contains("pattern") && j["pattern"].is_object()) {
                    j["pattern"].erase("distribution");
                }
                override_value(j, sim_mu, {"pattern", "mu_bar"});
            }
            override_value(j, sim_xi, {"pattern", "xi"});
            override_value(j, sim_eps_sp, {"pattern", "eps_sp"});
            override_value(j, common.window_W, {"pattern", "window_W"});
            if (sim_spectral) {
                j["pattern"]["method"] = "spectral";
            }
            override_value(j, sim_tau_max, {"time", "tau_max"});
            override_value(j, sim_steps, {"time", "n_steps"});

            const auto cfg = scenario_from_json(j, doc.text, doc.source);
            const auto summary = run_simulate(cfg, common.out);
            out << summary.dump(2) << '\n';
        }
        else if (figures->parsed()) {
            std::vector<Figure> list;
            if (which == "all") {
                list = {Figure::Pattern, Figure::Zeros, Figure::SeparableBirth, Figure::DegradedBell};
            }
            else if (auto f = figure_from_name(which)) {
                list = {*f};
            }
            else {
                throw ConfigError("unknown figure \"" + which + "\"");
            }
            for (auto f : list) {
                for (const auto& path : run_figures(f, common.out)) {
                    out << path.string() << '\n';
                }
            }
        }
        else if (sweep->parsed()) {
            auto doc = load_document(common.config);
            SweepSpec spec;
            if (!common.config.empty()) {
                spec = sweep_from_json(doc.value, doc.text, doc.source);
            }
            if (sw_p) spec.p = parse_grid(*sw_p);
            if (sw_q) spec.q = parse_grid(*sw_q);
            if (sw_mu) spec.mu_bar = parse_grid(*sw_mu);
            if (sw_quantities) {
                spec.quantities.clear();
                std::istringstream in(*sw_quantities);
                for (std::string name; std::getline(in, name, ',');) {
                    spec.quantities.push_back(name);
                }
            }
            spec.validate();
            const int jobs = common.jobs.value_or(default_jobs());
            if (jobs < 1) {
                throw ConfigError("--jobs must be at least 1");
            }
            out << run_sweep(spec, common.out, jobs).string() << '\n';
        }
        else if (validate->parsed()) {
            auto doc = load_document(common.config);
            json& j = doc.value;
            override_value(j, v_omega0, {"omega0_rad_s"});
            override_value(j, v_lambda0, {"lambda0_m"});
            override_value(j, v_gamma0, {"gamma0_rad_s"});
            override_value(j, v_mass, {"mass_kg"});
            override_value(j, v_xi, {"xi"});
            override_value(j, v_rbar, {"rbar_m"});
            override_value(j, v_dr, {"dr_initial_m"});
            override_value(j, v_strict, {"strict_factor"});
            AtomPairConfig cfg;
            try {
                cfg = io::atom_pair_from_json(j);
            }
            catch (const ConfigError& e) {
                throw ConfigError(doc.source + ": " + e.what());
            }
            auto number = [&](const char* key) -> double {
                if (!j.contains(key) || !j.at(key).is_number()) {
                    const int line = io::locate_line(doc.text, json::json_pointer("/" + std::string(key)));
                    throw ConfigError(doc.source + (line ? ":" + std::to_string(line) : "") +
                                          ": missing number \"" + key + "\"",
                                      line);
                }
                return j.at(key).get<double>();
            };
            const double strict = j.contains("strict_factor") ? number("strict_factor") : 10.0;
            const auto report = validate_regime(cfg, number("rbar_m"), number("dr_initial_m"), strict);
            const auto report_json = io::to_json(report);
            if (v_json) {
                out << report_json.dump(2) << '\n';
            }
            else {
                out << io::format_table(report);
            }
            if (!common.out.empty() && common.out != ".") {
                io::ensure_directory(common.out);
                io::write_text(fs::path(common.out) / "validate.json", report_json.dump(2) + "\n");
            }
        }
        else if (pattern->parsed()) {
            io::ensure_directory(common.out);
            out << write_pattern_csv(fs::path(common.out) / "pattern.csv", pat_x_max, pat_n).string()
                << '\n';
        }
        else if (average->parsed()) {
            auto doc = load_document(common.config);
            json j = doc.value.contains("distribution") ? doc.value["distribution"] : doc.value;
            override_value(j, av_kind, {"kind"});
            override_value(j, av_rbar, {"rbar_over_lambda0"});
            override_value(j, av_dr, {"dr_over_lambda0"});
            double xi = doc.value.contains("xi") && doc.value["xi"].is_number()
                            ? doc.value["xi"].get<double>()
                            : 1.0;
            if (av_xi) xi = *av_xi;
            MotionDistribution w = MotionDistribution::delta(1.0);
            try {
                w = io::distribution_from_json(j);
            }
            catch (const ConfigError& e) {
                throw ConfigError(doc.source + ": " + e.what());
            }
            json result{{"schema", 1},
                        {"xi", xi},
                        {"rbar_x", w.rbar()},
                        {"dr_x", w.dr()},
                        {"near_field", io::to_json(mu_bar(xi, w))}};
            if (av_spectral) {
                const double eps = av_eps_sp.value_or(1e-6);
                const double W = common.window_W.value_or(kDefaultWindow);
                if (!(eps > 0.0 && eps < 1e-2)) {
                    throw ConfigError("--eps-sp must lie in (0, 1e-2)");
                }
                if (!(W >= 10.0)) {
                    throw ConfigError("--window-W must be at least 10");
                }
                result["full_spectral"] = io::to_json(mu_bar_spectral(xi, w, eps, W));
                result["full_spectral"]["eps_sp"] = eps;
                result["full_spectral"]["window_W"] = W;
                result["critical_distance_x"] = critical_distance(eps);
            }
            out << result.dump(2) << '\n';
            if (!common.out.empty() && common.out != ".") {
                io::ensure_directory(common.out);
                io::write_text(fs::path(common.out) / "average.json", result.dump(2) + "\n");
            }
        }
    }
    catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }
    catch (const io::OutputError& e) {
        err << "error: " << e.what() << '\n';
        return kOutputFailure;
    }
    catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kNumericalFailure;
    }
    catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}

} // namespace pairglow::cli
