#include "pairglow/density_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairglow/errors.hpp"

namespace pairglow {

using constants::pi;

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr double kPositivitySlack = 1e-12;

void require_unit_interval(double v, const char* name)
{
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << name << " must lie in [0, 1], got " << v;
        throw ConfigError(msg.str());
    }
}

} // namespace

void InitialElectronicState::validate() const
{
    require_unit_interval(p, "p");
    require_unit_interval(q, "q");
}

double InitialElectronicState::coherence() const { return q * std::sqrt(p * (1.0 - p)); }

XState XState::initial(const InitialElectronicState& init)
{
    init.validate();
    XState s;
    s.rho_ee = init.p;
    s.rho_gg = 1.0 - init.p;
    s.rho_eg = init.coherence();
    return s;
}

void XState::check_invariants() const
{
    std::ostringstream msg;
    for (double v : {rho_ee, sigma_pp, sigma_mm, rho_gg}) {
        if (!(v >= -kPositivitySlack && v <= 1.0 + kPositivitySlack)) {
            msg << "population " << v << " outside [0, 1]";
            throw DomainError(msg.str());
        }
    }
    if (std::abs(trace() - 1.0) > kTraceTolerance) {
        msg << "trace " << trace() << " differs from 1";
        throw DomainError(msg.str());
    }
    if (std::abs(sigma_pp - sigma_mm) > kPositivitySlack) {
        msg << "sigma_pp " << sigma_pp << " != sigma_mm " << sigma_mm;
        throw DomainError(msg.str());
    }
    if (std::norm(rho_eg) > rho_ee * rho_gg + kPositivitySlack) {
        msg << "|rho_eg|^2 = " << std::norm(rho_eg) << " exceeds rho_ee*rho_gg";
        throw DomainError(msg.str());
    }
    if (std::norm(sigma_pm) > sigma_pp * sigma_mm + kPositivitySlack) {
        msg << "|sigma_pm|^2 = " << std::norm(sigma_pm) << " exceeds sigma_pp*sigma_mm";
        throw DomainError(msg.str());
    }
}

XState evolve_closed_form(const InitialElectronicState& init, double mu_bar, double tau)
{
    init.validate();
    if (!(tau >= 0.0)) {
        throw ConfigError("tau must be non-negative");
    }
    if (!(std::abs(mu_bar) <= 1.0)) {
        std::ostringstream msg;
        msg << "mu_bar must lie in [-1, 1], got " << mu_bar;
        throw ConfigError(msg.str());
    }

    const double eps = std::exp(-tau);
    const double growth = (1.0 - eps) * (1.0 - eps);
    const double p = init.p;

    XState s;
    s.rho_ee = p * eps * eps;
    s.rho_eg = init.coherence() * eps;
    s.sigma_pp = 0.25 * p * growth;
    s.sigma_mm = s.sigma_pp;
    s.sigma_pm = 0.25 * p * mu_bar * growth;
    s.rho_gg = 1.0 - s.rho_ee - 2.0 * s.sigma_pp;
    return s;
}

double spectral_weight_exact(double nu, double tau)
{
    const double damp = std::exp(-tau);
    const double beat = 1.0 + damp * damp - 2.0 * std::cos(nu * tau) * damp;
    return beat / (pi * (1.0 + nu * nu));
}

double spectral_weight_approx(double nu, double tau)
{
    const double rise = -std::expm1(-tau);
    return rise * rise / (pi * (1.0 + nu * nu));
}

SigmaElements sigma_exact(const InitialElectronicState& init, double xi, const MotionDistribution& w,
                          double eps_sp, double tau, double window_W)
{
    init.validate();
    if (!(tau >= 0.0)) {
        throw ConfigError("tau must be non-negative");
    }
    if (!(eps_sp > 0.0 && eps_sp < 1.0)) {
        throw ConfigError("eps_sp must lie in (0, 1)");
    }
    if (!(window_W > 0.0)) {
        throw ConfigError("window_W must be positive");
    }

    const double lo = detail::window_lower_edge(eps_sp, window_W);
    const double hi = window_W;
    const double mass = detail::lorentzian_mass(lo, hi);
    const double prefactor = 0.25 * init.p / mass;

    SigmaElements out;
    out.clipped = lo > -window_W;
    if (tau == 0.0 || init.p == 0.0) {
        return out;
    }

    const auto cube = [eps_sp](double nu) {
        const double s = 1.0 + eps_sp * nu;
        return s * s * s;
    };

    QuadratureOptions opts;
    opts.abs_tol = 1e-10;
    opts.initial_panels = detail::oscillation_panels(hi - lo, tau);
    const auto diag = integrate(
        [&](double nu) { return cube(nu) * spectral_weight_exact(nu, tau); }, lo, hi, opts);

    const double x_extent =
        w.kind() == DistributionKind::Delta ? w.rbar() : w.support_hi();
    opts.initial_panels = detail::oscillation_panels(hi - lo, tau + eps_sp * x_extent);
    double inner_error = 0.0;
    const auto pattern = [&](double nu) {
        const double s = 1.0 + eps_sp * nu;
        if (w.kind() == DistributionKind::Delta) {
            return mu(xi, s * w.rbar());
        }
        const auto avg = mu_bar(xi, w.scaled(s), QuadratureOptions{1e-10});
        inner_error = std::max(inner_error, avg.est_error);
        return avg.mu_bar;
    };
    const auto off = integrate(
        [&](double nu) { return cube(nu) * spectral_weight_exact(nu, tau) * pattern(nu); }, lo,
        hi, opts);

    out.diag = prefactor * diag.value;
    out.offdiag = prefactor * off.value;
    out.diag_error = prefactor * diag.abs_error;
    out.offdiag_error = prefactor * (off.abs_error + inner_error);
    return out;
}

} // namespace pairglow
