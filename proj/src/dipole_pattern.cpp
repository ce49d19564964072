#include "pairglow/dipole_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairglow/errors.hpp"

namespace pairglow {

using constants::pi;

namespace {

constexpr double kSeriesSwitch = 1e-2;
constexpr double kTailSigmas = 12.0;

void require_xi(double xi)
{
    if (!(xi >= 0.0 && xi <= 1.0)) {
        std::ostringstream msg;
        msg << "xi must lie in [0, 1], got " << xi;
        throw ConfigError(msg.str());
    }
}

double lorentzian(double nu) { return 1.0 / (pi * (1.0 + nu * nu)); }

} // namespace

MotionDistribution::MotionDistribution(DistributionKind kind, double rbar, double dr)
  : kind_(kind), rbar_(rbar), dr_(dr)
{
    if (kind_ == DistributionKind::RadialGaussian) {
        // mass of the untruncated Gaussian on x > 0
        norm_ = dr_ * std::sqrt(pi / 2.0) * std::erfc(-rbar_ / (dr_ * std::sqrt(2.0)));
    }
}

MotionDistribution MotionDistribution::delta(double rbar)
{
    if (!(rbar > 0.0) || !std::isfinite(rbar)) {
        throw ConfigError("delta distribution needs rbar > 0");
    }
    return MotionDistribution(DistributionKind::Delta, rbar, 0.0);
}

MotionDistribution MotionDistribution::radial_gaussian(double rbar, double dr)
{
    if (!(rbar > 0.0) || !std::isfinite(rbar)) {
        throw ConfigError("radial gaussian needs rbar > 0");
    }
    if (!(dr > 0.0) || !std::isfinite(dr)) {
        throw ConfigError("radial gaussian needs dr > 0 (use a delta law for dr = 0)");
    }
    return MotionDistribution(DistributionKind::RadialGaussian, rbar, dr);
}

double MotionDistribution::density(double x) const
{
    if (kind_ != DistributionKind::RadialGaussian || x < 0.0) {
        return 0.0;
    }
    const double z = (x - rbar_) / dr_;
    return std::exp(-0.5 * z * z) / norm_;
}

double MotionDistribution::support_lo() const
{
    return std::max(0.0, rbar_ - kTailSigmas * dr_);
}

double MotionDistribution::support_hi() const { return rbar_ + kTailSigmas * dr_; }

MotionDistribution MotionDistribution::scaled(double s) const
{
    return MotionDistribution(kind_, s * rbar_, s * dr_);
}

double mu(double xi, double x)
{
    require_xi(xi);
    x = std::abs(x);
    if (x < kSeriesSwitch) {
        const double x2 = x * x;
        return 1.0 - x2 * (xi + 1.0) / 10.0 + x2 * x2 * (2.0 * xi + 1.0) / 280.0;
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double x3 = x * x * x;
    return 1.5 * ((3.0 * xi - 2.0) * (x * c - s) / x3 + xi * s / x);
}

PatternAverage average_pattern(double xi, const std::function<double(double)>& density, double lo,
                               double hi, const QuadratureOptions& options)
{
    require_xi(xi);
    QuadratureOptions opts = options;
    opts.initial_panels = std::max(opts.initial_panels, detail::oscillation_panels(hi - lo, 1.0, 8));
    const auto r = integrate([&](double x) { return density(x) * mu(xi, x); }, lo, hi, opts);
    return {r.value, AveragingMethod::NearFieldApprox, r.abs_error};
}

PatternAverage mu_bar(double xi, const MotionDistribution& w, const QuadratureOptions& options)
{
    require_xi(xi);
    if (w.kind() == DistributionKind::Delta) {
        return {mu(xi, w.rbar()), AveragingMethod::NearFieldApprox, 0.0};
    }
    return average_pattern(
        xi, [&w](double x) { return w.density(x); }, w.support_lo(), w.support_hi(), options);
}

namespace detail {

double window_lower_edge(double eps_sp, double window_W)
{
    return std::max(-window_W, -1.0 / eps_sp);
}

double lorentzian_mass(double lo, double hi) { return (std::atan(hi) - std::atan(lo)) / pi; }

int oscillation_panels(double span, double omega, int floor_panels)
{
    const double half_periods = span * omega / pi;
    const double capped = std::min(half_periods, 150000.0);
    return std::max(floor_panels, static_cast<int>(std::ceil(capped)));
}

} // namespace detail

namespace {

struct WindowedIntegral {
    double value;
    double error;
    bool clipped;
};

// Int L(nu) (1 + eps nu)^3 g(1 + eps nu) dnu / Int L over the clipped window.
WindowedIntegral lorentz_window(const std::function<double(double)>& g, double eps_sp,
                                double window_W, double oscillation, double abs_tol)
{
    const double lo = detail::window_lower_edge(eps_sp, window_W);
    const double hi = window_W;
    const double mass = detail::lorentzian_mass(lo, hi);

    QuadratureOptions opts;
    opts.abs_tol = abs_tol * mass;
    opts.initial_panels = detail::oscillation_panels(hi - lo, oscillation);
    const auto r = integrate(
        [&](double nu) {
            const double scale = 1.0 + eps_sp * nu;
            return lorentzian(nu) * scale * scale * scale * g(scale);
        },
        lo, hi, opts);
    return {r.value / mass, r.abs_error / mass, lo > -window_W};
}

void require_spectral_inputs(double eps_sp, double window_W)
{
    if (!(eps_sp > 0.0 && eps_sp < 1.0)) {
        std::ostringstream msg;
        msg << "eps_sp must lie in (0, 1), got " << eps_sp;
        throw ConfigError(msg.str());
    }
    if (!(window_W > 0.0) || !std::isfinite(window_W)) {
        throw ConfigError("window_W must be positive");
    }
}

} // namespace

SpectralAverage a_spectral(double xi, double x, double eps_sp, double window_W)
{
    require_xi(xi);
    require_spectral_inputs(eps_sp, window_W);
    const auto g = [&](double scale) { return mu(xi, scale * x); };
    const double omega = eps_sp * std::abs(x);

    const auto main = lorentz_window(g, eps_sp, window_W, omega, 1e-10);
    const auto wide = lorentz_window(g, eps_sp, 2.0 * window_W, omega, 1e-10);
    return {main.value, main.error, std::abs(main.value - wide.value), main.clipped};
}

PatternAverage mu_bar_spectral(double xi, const MotionDistribution& w, double eps_sp,
                               double window_W)
{
    require_xi(xi);
    require_spectral_inputs(eps_sp, window_W);
    if (w.kind() == DistributionKind::Delta) {
        const auto a = a_spectral(xi, w.rbar(), eps_sp, window_W);
        return {a.value, AveragingMethod::FullSpectral, a.est_error};
    }

    double inner_error = 0.0;
    const auto g = [&](double scale) {
        const auto inner = mu_bar(xi, w.scaled(scale), QuadratureOptions{1e-10});
        inner_error = std::max(inner_error, inner.est_error);
        return inner.mu_bar;
    };
    const double omega = eps_sp * w.support_hi();
    const auto outer = lorentz_window(g, eps_sp, window_W, omega, 1e-8);
    return {outer.value, AveragingMethod::FullSpectral, outer.error + inner_error};
}

double critical_distance(double eps_sp)
{
    if (!(eps_sp > 0.0)) {
        throw ConfigError("eps_sp must be positive");
    }
    return 2.0 * pi / eps_sp;
}

double critical_distance(const DimensionlessScales& scales)
{
    return critical_distance(scales.eps_sp());
}

} // namespace pairglow
