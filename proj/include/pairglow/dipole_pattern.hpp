#pragma once

#include <functional>

#include "pairglow/physcore.hpp"
#include "pairglow/quadrature.hpp"

namespace pairglow {

enum class DistributionKind { Delta, RadialGaussian };

/// Probability law of the inter-atomic distance, in units of x = k0 r.
///
/// RadialGaussian is exp(-(x - rbar)^2 / (2 dr^2)) restricted to x > 0 and
/// renormalized there (not reflected).
class MotionDistribution {
  public:
    static MotionDistribution delta(double rbar);
    static MotionDistribution radial_gaussian(double rbar, double dr);

    DistributionKind kind() const { return kind_; }
    double rbar() const { return rbar_; }
    double dr() const { return dr_; }

    /// Normalized density on x > 0. Undefined for Delta.
    double density(double x) const;

    /// Interval outside of which the density is below e^-72 of its peak.
    double support_lo() const;
    double support_hi() const;

    /// The law of s * X when X follows this law (s > 0).
    MotionDistribution scaled(double s) const;

  private:
    MotionDistribution(DistributionKind kind, double rbar, double dr);

    DistributionKind kind_;
    double rbar_;
    double dr_;
    double norm_ = 1.0;
};

enum class AveragingMethod { NearFieldApprox, FullSpectral };

struct PatternAverage {
    double mu_bar = 0.0;
    AveragingMethod method = AveragingMethod::NearFieldApprox;
    double est_error = 0.0;
};

/// Dissipative part of the dipole-dipole coupling between two parallel
/// dipoles a distance x = k0 r apart. mu(xi, 0) = 1.
double mu(double xi, double x);

/// Average of mu over w with the pattern evaluated at the line center.
/// Delta laws are evaluated exactly; Gaussian laws by adaptive quadrature
/// (absolute tolerance 1e-8 by default).
PatternAverage mu_bar(double xi, const MotionDistribution& w, const QuadratureOptions& options = {});

/// Average of mu over an arbitrary normalized density supported on [lo, hi].
PatternAverage average_pattern(double xi, const std::function<double(double)>& density, double lo,
                               double hi, const QuadratureOptions& options = {});

inline constexpr double kDefaultWindow = 50.0;

struct SpectralAverage {
    double value = 0.0;
    double est_error = 0.0;
    /// |A(W) - A(2W)|, how much the result still depends on the window.
    double window_sensitivity = 0.0;
    /// True when the window reached below omega = 0 and was cut there.
    bool clipped = false;
};

/// Lorentzian-weighted spectral average of the pattern,
///   A(x) = Int dnu L(nu) (1 + eps nu)^3 mu(xi, (1 + eps nu) x)
/// over |nu| <= window_W, with L normalized to unit area on the window.
SpectralAverage a_spectral(double xi, double x, double eps_sp, double window_W = kDefaultWindow);

/// Distance average of a_spectral over w (FullSpectral counterpart of mu_bar).
PatternAverage mu_bar_spectral(double xi, const MotionDistribution& w, double eps_sp,
                               double window_W = kDefaultWindow);

/// k0 r_c = 2 pi / eps_sp: beyond this distance the linewidth washes out
/// the pattern.
double critical_distance(double eps_sp);
double critical_distance(const DimensionlessScales& scales);

namespace detail {

/// Lower end of the detuning window after clipping at omega = 0.
double window_lower_edge(double eps_sp, double window_W);

/// Area of the unit Lorentzian (1/pi)/(1 + nu^2) over [lo, hi].
double lorentzian_mass(double lo, double hi);

/// Panel count that resolves oscillations of angular frequency omega over a
/// span, with a floor for the Lorentzian peak.
int oscillation_panels(double span, double omega, int floor_panels = 64);

} // namespace detail

} // namespace pairglow
