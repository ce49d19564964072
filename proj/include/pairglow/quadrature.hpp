#pragma once

#include <functional>

namespace pairglow {

struct QuadratureOptions {
    double abs_tol = 1e-8;
    double rel_tol = 0.0;
    /// Upper bound on the total number of panels after adaptive bisection.
    int max_subdivisions = 200000;
    /// Equal-width panels laid down before refinement starts. Oscillatory
    /// integrands need roughly one panel per half period.
    int initial_panels = 1;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    int panels = 0;
};

/// Adaptive 21-point Gauss-Kronrod integration of f over [a, b] with global
/// (largest-error-first) bisection.
///
/// Throws NumericalError when the subdivision budget is exhausted before
/// the error estimate drops below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

} // namespace pairglow
