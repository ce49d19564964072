#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairglow/cli.hpp"
#include "pairglow/errors.hpp"
#include "pairglow/io.hpp"

namespace pairglow::cli {

using nlohmann::json;
using pointer = json::json_pointer;

namespace {

class DocumentReader {
  public:
    DocumentReader(const std::string& text, const std::string& source)
      : text_(text), source_(source)
    {
    }

    [[noreturn]] void fail(const pointer& where, const std::string& message) const
    {
        const int line = text_.empty() ? 0 : io::locate_line(text_, where);
        std::ostringstream msg;
        msg << source_;
        if (line > 0) {
            msg << ":" << line;
        }
        msg << ": " << where.to_string() << ": " << message;
        throw ConfigError(msg.str(), line);
    }

    double number(const json& parent, const pointer& base, const char* key) const
    {
        const auto where = base / key;
        if (!parent.contains(key)) {
            fail(where, "missing required number");
        }
        if (!parent.at(key).is_number()) {
            fail(where, "expected a number");
        }
        return parent.at(key).get<double>();
    }

    std::optional<double> maybe_number(const json& parent, const pointer& base,
                                       const char* key) const
    {
        if (!parent.contains(key)) {
            return std::nullopt;
        }
        return number(parent, base, key);
    }

    const json& object(const json& parent, const pointer& base, const char* key,
                       bool required) const
    {
        static const json empty = json::object();
        const auto where = base / key;
        if (!parent.contains(key)) {
            if (required) {
                fail(where, "missing required object");
            }
            return empty;
        }
        if (!parent.at(key).is_object()) {
            fail(where, "expected an object");
        }
        return parent.at(key);
    }

    std::string string(const json& parent, const pointer& base, const char* key,
                       const std::string& fallback) const
    {
        if (!parent.contains(key)) {
            return fallback;
        }
        if (!parent.at(key).is_string()) {
            fail(base / key, "expected a string");
        }
        return parent.at(key).get<std::string>();
    }

    std::vector<double> grid(const json& parent, const pointer& base, const char* key,
                             std::vector<double> fallback) const
    {
        const auto where = base / key;
        if (!parent.contains(key)) {
            return fallback;
        }
        const json& v = parent.at(key);
        if (v.is_number()) {
            return {v.get<double>()};
        }
        if (v.is_array()) {
            std::vector<double> out;
            for (const auto& e : v) {
                if (!e.is_number()) {
                    fail(where, "grid entries must be numbers");
                }
                out.push_back(e.get<double>());
            }
            return out;
        }
        if (v.is_object()) {
            const double lo = number(v, where, "min");
            const double hi = number(v, where, "max");
            const double n = number(v, where, "n");
            if (n < 1 || n != std::floor(n)) {
                fail(where / "n", "expected a positive integer");
            }
            std::ostringstream spec;
            spec << "lin:" << io::format_double(lo) << ':' << io::format_double(hi) << ':'
                 << static_cast<long>(n);
            return parse_grid(spec.str());
        }
        fail(where, "expected a number, an array or {min, max, n}");
    }

  private:
    const std::string& text_;
    const std::string& source_;
};

void check_unit(const DocumentReader& doc, const pointer& where, double v)
{
    if (!(v >= 0.0 && v <= 1.0)) {
        doc.fail(where, "must lie in [0, 1], got " + io::format_double(v));
    }
}

} // namespace

void ScenarioConfig::validate() const
{
    initial.validate();
    if (pattern.mu_bar.has_value() == pattern.distribution.has_value()) {
        throw ConfigError("exactly one of mu_bar or a distribution must be given");
    }
    if (pattern.mu_bar && !(std::abs(*pattern.mu_bar) <= 1.0)) {
        throw ConfigError("mu_bar must lie in [-1, 1], got " + io::format_double(*pattern.mu_bar));
    }
    if (!(pattern.xi >= 0.0 && pattern.xi <= 1.0)) {
        throw ConfigError("xi must lie in [0, 1]");
    }
    if (pattern.spectral && !(pattern.eps_sp > 0.0 && pattern.eps_sp < 1e-2)) {
        throw ConfigError("eps_sp must lie in (0, 1e-2)");
    }
    if (!(pattern.window_W >= 10.0)) {
        throw ConfigError("window_W must be at least 10");
    }
    if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
        throw ConfigError("tau_max must be positive");
    }
    if (n_steps < 2) {
        throw ConfigError("n_steps must be at least 2");
    }
}

std::vector<double> ScenarioConfig::tau_grid() const
{
    std::vector<double> grid(static_cast<std::size_t>(n_steps));
    for (int i = 0; i < n_steps; ++i) {
        grid[static_cast<std::size_t>(i)] = tau_max * i / (n_steps - 1);
    }
    return grid;
}

ScenarioConfig scenario_from_json(const json& j, const std::string& text, const std::string& source)
{
    const DocumentReader doc(text, source);
    const pointer root;
    if (!j.is_object()) {
        doc.fail(root, "scenario must be a JSON object");
    }

    ScenarioConfig cfg;

    const pointer init_ptr = root / "initial";
    const json& init = doc.object(j, root, "initial", true);
    cfg.initial.p = doc.number(init, init_ptr, "p");
    check_unit(doc, init_ptr / "p", cfg.initial.p);
    cfg.initial.q = doc.maybe_number(init, init_ptr, "q").value_or(1.0);
    check_unit(doc, init_ptr / "q", cfg.initial.q);

    const pointer pat_ptr = root / "pattern";
    const json& pat = doc.object(j, root, "pattern", true);
    cfg.pattern.mu_bar = doc.maybe_number(pat, pat_ptr, "mu_bar");
    const bool has_dist = pat.contains("distribution");
    if (cfg.pattern.mu_bar && has_dist) {
        doc.fail(pat_ptr / "distribution", "give either mu_bar or a distribution, not both");
    }
    if (!cfg.pattern.mu_bar && !has_dist) {
        doc.fail(pat_ptr, "needs mu_bar or a distribution");
    }
    if (cfg.pattern.mu_bar && !(std::abs(*cfg.pattern.mu_bar) <= 1.0)) {
        doc.fail(pat_ptr / "mu_bar",
                 "must lie in [-1, 1], got " + io::format_double(*cfg.pattern.mu_bar));
    }
    cfg.pattern.xi = doc.maybe_number(pat, pat_ptr, "xi").value_or(1.0);
    check_unit(doc, pat_ptr / "xi", cfg.pattern.xi);
    if (has_dist) {
        const pointer dist_ptr = pat_ptr / "distribution";
        try {
            cfg.pattern.distribution = io::distribution_from_json(pat.at("distribution"));
        }
        catch (const ConfigError& e) {
            doc.fail(dist_ptr, e.what());
        }
    }
    const auto method = doc.string(pat, pat_ptr, "method", "near_field");
    if (method != "near_field" && method != "spectral") {
        doc.fail(pat_ptr / "method", "expected \"near_field\" or \"spectral\"");
    }
    cfg.pattern.spectral = method == "spectral";
    cfg.pattern.eps_sp = doc.maybe_number(pat, pat_ptr, "eps_sp").value_or(cfg.pattern.eps_sp);
    cfg.pattern.window_W =
        doc.maybe_number(pat, pat_ptr, "window_W").value_or(cfg.pattern.window_W);
    if (cfg.pattern.spectral && !(cfg.pattern.eps_sp > 0.0 && cfg.pattern.eps_sp < 1e-2)) {
        doc.fail(pat_ptr / "eps_sp", "must lie in (0, 1e-2)");
    }
    if (!(cfg.pattern.window_W >= 10.0)) {
        doc.fail(pat_ptr / "window_W", "must be at least 10");
    }

    const pointer time_ptr = root / "time";
    const json& time = doc.object(j, root, "time", false);
    cfg.tau_max = doc.maybe_number(time, time_ptr, "tau_max").value_or(cfg.tau_max);
    if (!(cfg.tau_max > 0.0)) {
        doc.fail(time_ptr / "tau_max", "must be positive");
    }
    const double steps = doc.maybe_number(time, time_ptr, "n_steps").value_or(cfg.n_steps);
    if (steps < 2 || steps != std::floor(steps) || steps > 1e8) {
        doc.fail(time_ptr / "n_steps", "must be an integer >= 2");
    }
    cfg.n_steps = static_cast<int>(steps);

    const pointer out_ptr = root / "outputs";
    const json& outputs = doc.object(j, root, "outputs", false);
    cfg.outputs.concurrence_csv =
        doc.string(outputs, out_ptr, "concurrence_csv", cfg.outputs.concurrence_csv);
    cfg.outputs.xstate_csv = doc.string(outputs, out_ptr, "xstate_csv", cfg.outputs.xstate_csv);
    cfg.outputs.summary_json =
        doc.string(outputs, out_ptr, "summary_json", cfg.outputs.summary_json);

    cfg.validate();
    return cfg;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    auto to_number = [&](const std::string& token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        }
        catch (const std::exception&) {
            throw ConfigError("bad grid value \"" + token + "\" in \"" + text + "\"");
        }
        if (used != token.size()) {
            throw ConfigError("bad grid value \"" + token + "\" in \"" + text + "\"");
        }
        return v;
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep)) {
            parts.push_back(cur);
        }
        return parts;
    };

    if (text.rfind("lin:", 0) == 0) {
        const auto parts = split(text.substr(4), ':');
        if (parts.size() != 3) {
            throw ConfigError("linear grid must read lin:min:max:n, got \"" + text + "\"");
        }
        const double lo = to_number(parts[0]);
        const double hi = to_number(parts[1]);
        const double n = to_number(parts[2]);
        if (n < 1 || n != std::floor(n)) {
            throw ConfigError("grid point count must be a positive integer in \"" + text + "\"");
        }
        const auto count = static_cast<long>(n);
        for (long i = 0; i < count; ++i) {
            out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
        }
        return out;
    }
    for (const auto& token : split(text, ',')) {
        out.push_back(to_number(token));
    }
    return out;
}

void SweepSpec::validate() const
{
    if (p.empty() || q.empty() || mu_bar.empty()) {
        throw ConfigError("sweep grid is empty");
    }
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError("sweep p value " + io::format_double(v) + " outside [0, 1]");
        }
    }
    for (double v : q) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError("sweep q value " + io::format_double(v) + " outside [0, 1]");
        }
    }
    for (double v : mu_bar) {
        if (!(std::abs(v) <= 1.0)) {
            throw ConfigError("sweep mu_bar value " + io::format_double(v) + " outside [-1, 1]");
        }
    }
    if (quantities.empty()) {
        throw ConfigError("sweep needs at least one quantity");
    }
    for (const auto& name : quantities) {
        if (std::find(kSweepQuantities.begin(), kSweepQuantities.end(), name) ==
            kSweepQuantities.end()) {
            throw ConfigError("unknown sweep quantity \"" + name + "\"");
        }
    }
}

SweepSpec sweep_from_json(const json& j, const std::string& text, const std::string& source)
{
    const DocumentReader doc(text, source);
    const pointer root;
    if (!j.is_object()) {
        doc.fail(root, "sweep must be a JSON object");
    }
    SweepSpec spec;
    const pointer axes_ptr = root / "axes";
    const json& axes = doc.object(j, root, "axes", true);
    spec.p = doc.grid(axes, axes_ptr, "p", {});
    spec.q = doc.grid(axes, axes_ptr, "q", spec.q);
    spec.mu_bar = doc.grid(axes, axes_ptr, "mu_bar", spec.mu_bar);
    if (j.contains("quantities")) {
        const auto& qs = j.at("quantities");
        if (!qs.is_array()) {
            doc.fail(root / "quantities", "expected an array of names");
        }
        spec.quantities.clear();
        for (const auto& name : qs) {
            if (!name.is_string()) {
                doc.fail(root / "quantities", "expected an array of names");
            }
            spec.quantities.push_back(name.get<std::string>());
        }
    }
    spec.output = doc.string(j, root, "output", spec.output);
    try {
        spec.validate();
    }
    catch (const ConfigError& e) {
        doc.fail(axes_ptr, e.what());
    }
    return spec;
}

} // namespace pairglow::cli
