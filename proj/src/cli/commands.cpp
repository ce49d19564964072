#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "pairglow/cli.hpp"
#include "pairglow/errors.hpp"
#include "pairglow/io.hpp"

namespace pairglow::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& out_dir, const std::string& name)
{
    const fs::path p(name);
    return p.is_absolute() ? p : out_dir / p;
}

std::optional<double> quantity(const CriticalTimes& ct, const std::string& name)
{
    if (name == "eps1") return ct.eps1;
    if (name == "eps2") return ct.eps2;
    if (name == "t1") return ct.t1;
    if (name == "t2") return ct.t2;
    return ct.c_stationary;
}

// Zero of f on the closed interval [0, 1]: the interior one when present,
// otherwise a boundary zero. Used for plotting where the boundary zeros are
// part of the curve.
std::optional<double> plotted_zero(const ZeroScan& z)
{
    if (!z.interior.empty()) return z.interior.front();
    if (z.at_lower) return 0.0;
    if (z.at_upper) return 1.0;
    return std::nullopt;
}

} // namespace

PatternAverage resolve_pattern(const PatternSpec& spec)
{
    if (spec.mu_bar) {
        return {*spec.mu_bar, AveragingMethod::NearFieldApprox, 0.0};
    }
    if (!spec.distribution) {
        throw ConfigError("pattern needs mu_bar or a distribution");
    }
    if (spec.spectral) {
        return mu_bar_spectral(spec.xi, *spec.distribution, spec.eps_sp, spec.window_W);
    }
    return mu_bar(spec.xi, *spec.distribution);
}

json run_simulate(const ScenarioConfig& cfg, const fs::path& out_dir)
{
    cfg.validate();
    const auto pattern = resolve_pattern(cfg.pattern);
    // Quadrature can overshoot |mu_bar| = 1 by its error estimate.
    const double mu_bar_value = std::clamp(pattern.mu_bar, -1.0, 1.0);

    const auto grid = cfg.tau_grid();
    const auto trace = trace_concurrence(cfg.initial, mu_bar_value, grid);
    const auto times = find_critical_times(cfg.initial.p, cfg.initial.q, mu_bar_value);

    io::ensure_directory(out_dir);
    {
        io::CsvWriter csv(resolve(out_dir, cfg.outputs.concurrence_csv), {"tau", "c1", "c2", "C"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.row(std::vector<double>{trace.tau[i], trace.c1[i], trace.c2[i],
                                        trace.concurrence[i]});
        }
        csv.close();
    }
    {
        io::CsvWriter csv(resolve(out_dir, cfg.outputs.xstate_csv),
                          {"tau", "eps", "rho_ee", "rho_eg_abs", "sigma_pp", "sigma_pm_re", "rho_gg"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& s = trace.states[i];
            csv.row(std::vector<double>{trace.tau[i], std::exp(-trace.tau[i]), s.rho_ee,
                                        std::abs(s.rho_eg), s.sigma_pp, s.sigma_pm.real(),
                                        s.rho_gg});
        }
        csv.close();
    }

    json pattern_json = io::to_json(pattern);
    pattern_json["mu_bar"] = mu_bar_value;
    if (cfg.pattern.distribution) {
        const auto& d = *cfg.pattern.distribution;
        pattern_json["xi"] = cfg.pattern.xi;
        pattern_json["distribution"] = {
            {"kind", d.kind() == DistributionKind::Delta ? "delta" : "radial_gaussian"},
            {"rbar_x", d.rbar()},
            {"dr_x", d.dr()}};
    }

    json summary{{"schema", 1},
                 {"initial", {{"p", cfg.initial.p}, {"q", cfg.initial.q}}},
                 {"pattern", pattern_json},
                 {"time", {{"tau_max", cfg.tau_max}, {"n_steps", cfg.n_steps}}},
                 {"critical_times", io::to_json(times)},
                 {"concurrence_initial", trace.concurrence.front()},
                 {"concurrence_final", trace.concurrence.back()}};
    io::write_text(resolve(out_dir, cfg.outputs.summary_json), summary.dump(2) + "\n");
    return summary;
}

std::vector<SweepRow> compute_sweep(const SweepSpec& spec, int jobs)
{
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.p.size() * spec.q.size() * spec.mu_bar.size());
    for (double p : spec.p) {
        for (double q : spec.q) {
            for (double m : spec.mu_bar) {
                rows.push_back({p, q, m, {}});
            }
        }
    }

    const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));

    auto work = [&](std::size_t slot) {
        try {
            for (std::size_t i = next++; i < rows.size(); i = next++) {
                rows[i].times = find_critical_times(rows[i].p, rows[i].q, rows[i].mu_bar);
            }
        }
        catch (...) {
            failures[slot] = std::current_exception();
            next = rows.size();
        }
    };

    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) {
        threads.emplace_back(work, static_cast<std::size_t>(w));
    }
    work(0);
    for (auto& t : threads) {
        t.join();
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    return rows;
}

fs::path run_sweep(const SweepSpec& spec, const fs::path& out_dir, int jobs)
{
    const auto rows = compute_sweep(spec, jobs);
    io::ensure_directory(out_dir);
    const auto path = resolve(out_dir, spec.output);

    std::vector<std::string> header{"p", "q", "mu_bar"};
    header.insert(header.end(), spec.quantities.begin(), spec.quantities.end());
    io::CsvWriter csv(path, header);
    for (const auto& r : rows) {
        std::vector<std::optional<double>> values{r.p, r.q, r.mu_bar};
        for (const auto& name : spec.quantities) {
            values.push_back(quantity(r.times, name));
        }
        csv.row(values);
    }
    csv.close();
    return path;
}

std::optional<Figure> figure_from_name(const std::string& name)
{
    if (name == "fig1") return Figure::Pattern;
    if (name == "fig2") return Figure::Zeros;
    if (name == "fig3") return Figure::SeparableBirth;
    if (name == "fig4") return Figure::DegradedBell;
    return std::nullopt;
}

fs::path write_pattern_csv(const fs::path& path, double x_max, int n)
{
    if (!(x_max > 0.0) || n < 1) {
        throw ConfigError("pattern sampling needs x_max > 0 and n >= 1");
    }
    io::CsvWriter csv(path, {"x", "mu_xi0", "mu_xi1"});
    for (int i = 1; i <= n; ++i) {
        const double x = x_max * i / n;
        csv.row(std::vector<double>{x, mu(0.0, x), mu(1.0, x)});
    }
    csv.close();
    return path;
}

namespace {

constexpr double kFigureMuBars[] = {1.0, 0.5, 0.0};

fs::path write_concurrence_figure(const fs::path& path, InitialElectronicState init)
{
    constexpr int kPoints = 1001;
    constexpr double kTauMax = 10.0;
    std::vector<double> grid(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        grid[static_cast<std::size_t>(i)] = kTauMax * i / (kPoints - 1);
    }
    std::vector<ConcurrenceTrace> traces;
    for (double m : kFigureMuBars) {
        traces.push_back(trace_concurrence(init, m, grid));
    }
    io::CsvWriter csv(path, {"tau", "C_mu1", "C_mu0.5", "C_mu0"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv.row(std::vector<double>{grid[i], traces[0].concurrence[i], traces[1].concurrence[i],
                                    traces[2].concurrence[i]});
    }
    csv.close();
    return path;
}

} // namespace

std::vector<fs::path> run_figures(Figure which, const fs::path& out_dir)
{
    io::ensure_directory(out_dir);
    std::vector<fs::path> written;

    switch (which) {
    case Figure::Pattern: {
        written.push_back(write_pattern_csv(out_dir / "fig1.csv", 8.0 * constants::pi, 2000));

        // Inset: distance average for a few spreads, xi = 1.
        const double spreads[] = {0.0, 0.05, 0.1, 0.25, 0.5};
        std::vector<std::string> header{"rbar_over_lambda0"};
        for (double s : spreads) {
            header.push_back("mu_bar_dr" + io::format_double(s));
        }
        io::CsvWriter csv(out_dir / "fig1_inset.csv", header);
        constexpr int kRows = 160;
        for (int i = 1; i <= kRows; ++i) {
            const double rbar = 4.0 * i / kRows;
            std::vector<double> values{rbar};
            const double to_x = 2.0 * constants::pi;
            for (double s : spreads) {
                const auto w = s == 0.0 ? MotionDistribution::delta(rbar * to_x)
                                        : MotionDistribution::radial_gaussian(rbar * to_x, s * to_x);
                values.push_back(mu_bar(1.0, w).mu_bar);
            }
            csv.row(values);
        }
        csv.close();
        written.push_back(out_dir / "fig1_inset.csv");
        break;
    }
    case Figure::Zeros: {
        io::CsvWriter csv(out_dir / "fig2.csv",
                          {"p", "eps1", "eps2_mu1", "eps2_mu0.5", "eps2_mu0"});
        constexpr int kRows = 200;
        for (int i = 0; i <= kRows; ++i) {
            const double p = static_cast<double>(i) / kRows;
            std::vector<std::optional<double>> values{p};
            if (p == 0.0) {
                values.resize(5);
            }
            else {
                values.push_back(plotted_zero(scan_zeros([&](double e) { return c1(e, p, 1.0); })));
                for (double m : kFigureMuBars) {
                    values.push_back(
                        plotted_zero(scan_zeros([&](double e) { return c2(e, p, m); })));
                }
            }
            csv.row(values);
        }
        csv.close();
        written.push_back(out_dir / "fig2.csv");
        break;
    }
    case Figure::SeparableBirth:
        written.push_back(write_concurrence_figure(out_dir / "fig3.csv", {1.0, 1.0}));
        break;
    case Figure::DegradedBell:
        written.push_back(write_concurrence_figure(out_dir / "fig4.csv", {0.5, 0.3}));
        break;
    }
    return written;
}

int default_jobs()
{
    if (const char* env = std::getenv("PAIRGLOW_JOBS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        }
        catch (const std::exception&) {
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

} // namespace pairglow::cli
