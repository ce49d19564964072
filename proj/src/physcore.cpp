#include "pairglow/physcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairglow/errors.hpp"

namespace pairglow {

using constants::hbar;
using constants::pi;
using constants::planck;
using constants::speed_of_light;

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << " must be positive and finite, got " << value;
        throw ConfigError(msg.str());
    }
}

} // namespace

AtomPairConfig AtomPairConfig::make(std::optional<double> omega0, std::optional<double> lambda0,
                                    double gamma0, double mass, double xi)
{
    if (!omega0 && !lambda0) {
        throw ConfigError("one of omega0 or lambda0 is required");
    }
    AtomPairConfig cfg;
    if (omega0) {
        require_positive(*omega0, "omega0");
    }
    if (lambda0) {
        require_positive(*lambda0, "lambda0");
    }
    cfg.omega0 = omega0 ? *omega0 : 2.0 * pi * speed_of_light / *lambda0;
    cfg.lambda0 = lambda0 ? *lambda0 : 2.0 * pi * speed_of_light / *omega0;
    cfg.gamma0 = gamma0;
    cfg.mass = mass;
    cfg.xi = xi;
    cfg.validate();
    return cfg;
}

void AtomPairConfig::validate() const
{
    require_positive(omega0, "omega0");
    require_positive(gamma0, "gamma0");
    require_positive(lambda0, "lambda0");
    require_positive(mass, "mass");
    if (!(xi >= 0.0 && xi <= 1.0)) {
        std::ostringstream msg;
        msg << "xi must lie in [0, 1], got " << xi;
        throw ConfigError(msg.str());
    }
    const double mismatch = lambda0 * omega0 / (2.0 * pi * speed_of_light) - 1.0;
    if (std::abs(mismatch) >= 1e-6) {
        std::ostringstream msg;
        msg << "lambda0 and omega0 are inconsistent: lambda0*omega0/(2 pi c) - 1 = " << mismatch;
        throw ConfigError(msg.str());
    }
}

std::vector<std::string> AtomPairConfig::warnings(double max_linewidth_ratio) const
{
    std::vector<std::string> out;
    const double ratio = gamma0 / omega0;
    if (ratio > max_linewidth_ratio) {
        std::ostringstream msg;
        msg << "gamma0/omega0 = " << ratio << " exceeds " << max_linewidth_ratio
            << "; the narrow-line approximations degrade";
        out.push_back(msg.str());
    }
    return out;
}

DimensionlessScales::DimensionlessScales(const AtomPairConfig& cfg)
  : omega0_(cfg.omega0), gamma0_(cfg.gamma0), k0_(2.0 * pi / cfg.lambda0)
{
    cfg.validate();
}

DimensionlessScales reduce_units(const AtomPairConfig& cfg) { return DimensionlessScales(cfg); }

bool RegimeReport::all_pass() const
{
    return std::all_of(margins.begin(), margins.end(), [](const RegimeMargin& m) { return m.pass; });
}

double dispersed_spread(double dr_initial, double dispersion_length)
{
    const double ratio = dispersion_length / dr_initial;
    const double r2 = ratio * ratio;
    return dr_initial * std::sqrt(1.0 + r2 * r2);
}

RegimeReport validate_regime(const AtomPairConfig& cfg, double rbar, double dr_initial,
                             double strict_factor)
{
    cfg.validate();
    require_positive(rbar, "rbar");
    require_positive(dr_initial, "dr_initial");
    if (!(strict_factor >= 1.0)) {
        std::ostringstream msg;
        msg << "strict_factor must be >= 1, got " << strict_factor;
        throw ConfigError(msg.str());
    }

    const double k0 = 2.0 * pi / cfg.lambda0;
    RegimeReport report;
    report.strict_factor = strict_factor;
    report.recoil_energy = (hbar * k0) * (hbar * k0) / (2.0 * cfg.mass);
    report.dispersion_length = std::sqrt(planck / (cfg.gamma0 * cfg.mass));
    report.dr_lower_bound = cfg.lambda0 * std::sqrt(report.recoil_energy / (hbar * cfg.gamma0));
    report.dr_final = dispersed_spread(dr_initial, report.dispersion_length);
    report.excited_lifetime = 2.0 * pi / cfg.gamma0;

    auto margin = [&](std::string name, double ratio) {
        report.margins.push_back({std::move(name), ratio, strict_factor, ratio >= strict_factor});
    };
    margin("distinguishability (rbar / dr_final)", rbar / report.dr_final);
    margin("spread above recoil bound (dr_initial / dr_lower_bound)",
           dr_initial / report.dr_lower_bound);
    margin("spread below mean distance (rbar / dr_initial)", rbar / dr_initial);

    report.warnings = cfg.warnings();
    return report;
}

} // namespace pairglow
