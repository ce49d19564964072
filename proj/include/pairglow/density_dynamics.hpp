#pragma once

#include <complex>

#include "pairglow/dipole_pattern.hpp"

namespace pairglow {

/// rho(0) = p|ee><ee| + (1-p)|gg><gg| + q sqrt(p(1-p)) (|ee><gg| + h.c.)
struct InitialElectronicState {
    double p = 0.5; ///< excited-state probability
    double q = 1.0; ///< coherence degradation, 1 = pure state

    void validate() const;
    double coherence() const;
};

/// Two-qubit density matrix in X form, standard basis {ee, eg, ge, gg}.
///
/// rho_eg is the slowly varying envelope. The lab-frame element carries an
/// additional optical phase exp(-2 i omega0 t); it has unit modulus and is
/// applied only on request (lab_frame_rho_eg).
struct XState {
    double rho_ee = 0.0;
    double sigma_pp = 0.0;
    double sigma_mm = 0.0;
    double rho_gg = 1.0;
    std::complex<double> rho_eg{};
    std::complex<double> sigma_pm{};

    static XState initial(const InitialElectronicState& init);

    double trace() const { return rho_ee + sigma_pp + sigma_mm + rho_gg; }

    std::complex<double> lab_frame_rho_eg(double omega0_t) const
    {
        return rho_eg * std::polar(1.0, -2.0 * omega0_t);
    }

    /// Throws DomainError unless trace, positivity and exchange symmetry hold.
    void check_invariants() const;
};

/// Closed-form state at tau = gamma0 t with a single time scale: every inner
/// element grows as (1 - e^-tau)^2.
XState evolve_closed_form(const InitialElectronicState& init, double mu_bar, double tau);

/// (gamma0/pi)|g|^2 at detuning nu and time tau: the Lorentzian times the
/// damped beat 1 + e^-2tau - 2 cos(nu tau) e^-tau.
double spectral_weight_exact(double nu, double tau);

/// The same weight with the beat replaced by (1 - e^-tau)^2.
double spectral_weight_approx(double nu, double tau);

struct SigmaElements {
    double diag = 0.0;
    double offdiag = 0.0;
    double diag_error = 0.0;
    double offdiag_error = 0.0;
    bool clipped = false;
};

/// Inner elements from a windowed quadrature of the exact spectral weight,
/// keeping the omega^3 factor. Validation oracle for evolve_closed_form.
SigmaElements sigma_exact(const InitialElectronicState& init, double xi, const MotionDistribution& w,
                          double eps_sp, double tau, double window_W = kDefaultWindow);

} // namespace pairglow
