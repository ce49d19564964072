#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pairglow/density_dynamics.hpp"

namespace pairglow {

/// c1(eps) = q sqrt(p(1-p)) eps - (p/4)(1 - eps)^2, with eps = e^-tau.
double c1(double eps, double p, double q);

/// c2(eps) = (p/4) mu_bar (1 - eps)^2 - eps sqrt(p [1 - p/2 + p eps - 3/2 p eps^2]).
/// Independent of q. Radicand rounding below zero by at most 1e-12 is
/// clamped; anything larger throws NumericalError.
double c2(double eps, double p, double mu_bar);

/// Wootters concurrence of an X state:
/// 2 max{0, |rho_eg| - sqrt(sigma_pp sigma_mm), |sigma_pm| - sqrt(rho_ee rho_gg)}.
/// Throws DomainError for states violating the X-state invariants.
double concurrence_xstate(const XState& state);

/// Zeros of a function on the closed interval [0, 1].
struct ZeroScan {
    std::vector<double> interior; ///< zeros strictly inside (0, 1)
    bool at_lower = false;        ///< f(0) == 0
    bool at_upper = false;        ///< f(1) == 0

    int count() const
    {
        return static_cast<int>(interior.size()) + (at_lower ? 1 : 0) + (at_upper ? 1 : 0);
    }
};

struct RootScanOptions {
    int samples = 1000;
    double tolerance = 1e-12;
};

/// Uniform sign scan of f on [0, 1] followed by bisection of each bracket
/// down to the tolerance. Runs of exact zeros count as one zero.
ZeroScan scan_zeros(const std::function<double(double)>& f, const RootScanOptions& options = {});

struct CriticalTimes {
    std::optional<double> eps1; ///< zero of c1 in (0, 1)
    std::optional<double> eps2; ///< zero of c2 in (0, 1)
    std::optional<double> t1;   ///< gamma0 t of sudden death, -ln eps1
    std::optional<double> t2;   ///< gamma0 t of sudden birth, -ln eps2
    bool esd_occurs = false;
    bool esb_occurs = false;
    double c_stationary = 0.0;
    /// mu_bar < 0 lies outside the regime discussed for the model.
    bool extrapolated = false;

    /// t2 - t1 when both events occur.
    std::optional<double> disentanglement_window() const;
};

/// Locates the unique zeros of c1 and c2 and the derived event times.
///
/// Throws InvariantViolation if either function shows more than one sign
/// change, if p in (0,1) with q > 0 (resp. mu_bar >= 0) does not give
/// exactly one zero of c1 (resp. c2) on [0, 1], or if eps1 < eps2.
CriticalTimes find_critical_times(double p, double q, double mu_bar,
                                  const RootScanOptions& options = {});

struct ConcurrenceTrace {
    std::vector<double> tau;
    std::vector<double> c1;
    std::vector<double> c2;
    std::vector<double> concurrence;
    std::vector<XState> states;
};

/// Evaluates the state and concurrence on a strictly increasing grid. The
/// closed-form concurrence is cross-checked against concurrence_xstate at
/// every point (1e-12); a disagreement throws InvariantViolation. For
/// mu_bar < 0 the closed form uses the signed mu_bar and is only required not
/// to exceed the X-state value.
ConcurrenceTrace trace_concurrence(const InitialElectronicState& init, double mu_bar,
                                   std::span<const double> tau_grid);

} // namespace pairglow
