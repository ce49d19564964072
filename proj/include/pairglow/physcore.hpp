#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pairglow {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

/// Physical constants of the atom pair, in SI units.
struct AtomPairConfig {
    double omega0 = 0.0;  ///< transition angular frequency [rad/s]
    double gamma0 = 0.0;  ///< natural linewidth [rad/s]
    double lambda0 = 0.0; ///< transition wavelength [m]
    double mass = 0.0;    ///< atomic mass [kg]
    double xi = 1.0;      ///< sin^2 of the angle between separation and dipole

    /// Builds a configuration from either frequency or wavelength (or both,
    /// which must agree to 1e-6). Throws ConfigError on invalid constants.
    static AtomPairConfig make(std::optional<double> omega0, std::optional<double> lambda0,
                               double gamma0, double mass, double xi);

    /// Throws ConfigError when an invariant is broken.
    void validate() const;

    /// Non-fatal findings, e.g. a linewidth that is not small against omega0.
    std::vector<std::string> warnings(double max_linewidth_ratio = 1e-3) const;
};

/// Scale factors between SI quantities and the dimensionless variables used
/// everywhere downstream: tau = gamma0 t, x = k0 r, nu = (omega - omega0)/gamma0.
class DimensionlessScales {
  public:
    explicit DimensionlessScales(const AtomPairConfig& cfg);

    double omega0() const { return omega0_; }
    double gamma0() const { return gamma0_; }
    double k0() const { return k0_; }
    /// gamma0 / omega0, the single small parameter of the model.
    double eps_sp() const { return gamma0_ / omega0_; }

    double to_tau(double t) const { return gamma0_ * t; }
    double to_time(double tau) const { return tau / gamma0_; }
    double to_x(double r) const { return k0_ * r; }
    double to_length(double x) const { return x / k0_; }
    double to_nu(double omega) const { return (omega - omega0_) / gamma0_; }
    double to_omega(double nu) const { return omega0_ + gamma0_ * nu; }

  private:
    double omega0_;
    double gamma0_;
    double k0_;
};

DimensionlessScales reduce_units(const AtomPairConfig& cfg);

struct RegimeMargin {
    std::string name;
    double ratio = 0.0;    ///< measured ratio, larger is safer
    double required = 0.0; ///< ratio needed to pass (the strict factor)
    bool pass = false;
};

struct RegimeReport {
    double recoil_energy = 0.0;     ///< (hbar k0)^2 / 2m [J]
    double dispersion_length = 0.0; ///< sqrt(h / (gamma0 m)) [m]
    double dr_lower_bound = 0.0;    ///< lambda0 sqrt(E_r / (hbar gamma0)) [m]
    double dr_final = 0.0;          ///< spread after one excited-state lifetime [m]
    double excited_lifetime = 0.0;  ///< 2 pi / gamma0 [s]
    double strict_factor = 10.0;
    std::vector<RegimeMargin> margins;
    std::vector<std::string> warnings;

    bool all_pass() const;
};

/// Spread of the relative-position wavepacket after one excited-state
/// lifetime, starting from dr_initial.
double dispersed_spread(double dr_initial, double dispersion_length);

/// Checks the validity window rbar >> dr >> lambda0 sqrt(E_r / hbar gamma0),
/// with ">>" meaning "at least strict_factor times". Failures are reported,
/// not thrown; only non-positive inputs throw ConfigError.
RegimeReport validate_regime(const AtomPairConfig& cfg, double rbar, double dr_initial,
                             double strict_factor = 10.0);

} // namespace pairglow
