#include "pairglow/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairglow/errors.hpp"

namespace pairglow {

namespace {

constexpr double kRadicandSlack = 1e-12;
constexpr double kConsistencyTolerance = 1e-12;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const std::function<double(double)>& f, double a, double b, double fa,
              double tolerance)
{
    while (b - a > tolerance) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) {
            return m;
        }
        if (sign_of(fm) == sign_of(fa)) {
            a = m;
            fa = fm;
        }
        else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

void require_inputs(double p, double q, double mu_bar)
{
    InitialElectronicState{p, q}.validate();
    if (!(std::abs(mu_bar) <= 1.0)) {
        std::ostringstream msg;
        msg << "mu_bar must lie in [-1, 1], got " << mu_bar;
        throw ConfigError(msg.str());
    }
}

std::string describe(const char* name, const ZeroScan& z, double p, double q, double mu_bar)
{
    std::ostringstream msg;
    msg << name << " has " << z.count() << " zeros on [0,1] (" << z.interior.size()
        << " interior) at p=" << p << " q=" << q << " mu_bar=" << mu_bar;
    return msg.str();
}

} // namespace

double c1(double eps, double p, double q)
{
    const double gap = 1.0 - eps;
    return q * std::sqrt(p * (1.0 - p)) * eps - 0.25 * p * gap * gap;
}

double c2(double eps, double p, double mu_bar)
{
    const double gap = 1.0 - eps;
    double radicand = p * (1.0 - 0.5 * p + p * eps - 1.5 * p * eps * eps);
    if (radicand < 0.0) {
        if (radicand < -kRadicandSlack) {
            std::ostringstream msg;
            msg << "c2: negative radicand " << radicand << " at eps=" << eps << " p=" << p;
            throw NumericalError(msg.str());
        }
        radicand = 0.0;
    }
    return 0.25 * p * mu_bar * gap * gap - eps * std::sqrt(radicand);
}

double concurrence_xstate(const XState& state)
{
    state.check_invariants();
    const double outer = std::abs(state.rho_eg) - std::sqrt(state.sigma_pp * state.sigma_mm);
    const double inner =
        std::abs(state.sigma_pm) - std::sqrt(std::max(0.0, state.rho_ee * state.rho_gg));
    return 2.0 * std::max({0.0, outer, inner});
}

ZeroScan scan_zeros(const std::function<double(double)>& f, const RootScanOptions& options)
{
    const int n = std::max(2, options.samples);
    ZeroScan out;

    double last_x = 0.0;
    double last_v = f(0.0);
    int last_sign = sign_of(last_v);
    out.at_lower = last_sign == 0;
    bool in_zero_run = out.at_lower;

    for (int i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double v = f(x);
        const int s = sign_of(v);
        if (s == 0) {
            if (i == n) {
                if (!in_zero_run) {
                    out.at_upper = true;
                }
            }
            else if (!in_zero_run) {
                out.interior.push_back(x);
            }
            in_zero_run = true;
            continue;
        }
        if (!in_zero_run && last_sign != 0 && s != last_sign) {
            out.interior.push_back(bisect(f, last_x, x, last_v, options.tolerance));
        }
        in_zero_run = false;
        last_x = x;
        last_v = v;
        last_sign = s;
    }
    return out;
}

std::optional<double> CriticalTimes::disentanglement_window() const
{
    if (esd_occurs && esb_occurs) {
        return *t2 - *t1;
    }
    return std::nullopt;
}

CriticalTimes find_critical_times(double p, double q, double mu_bar, const RootScanOptions& options)
{
    require_inputs(p, q, mu_bar);

    CriticalTimes out;
    out.extrapolated = mu_bar < 0.0;
    out.c_stationary = std::max(0.0, 0.5 * p * mu_bar);
    if (p == 0.0) {
        // c1 and c2 vanish identically; no state ever becomes entangled.
        return out;
    }

    const auto z1 = scan_zeros([&](double e) { return c1(e, p, q); }, options);
    const auto z2 = scan_zeros([&](double e) { return c2(e, p, mu_bar); }, options);

    const bool interior_p = p < 1.0;
    if (z1.interior.size() > 1 || (interior_p && q > 0.0 && z1.count() != 1)) {
        throw InvariantViolation(describe("c1", z1, p, q, mu_bar));
    }
    if (z2.interior.size() > 1 || (interior_p && mu_bar >= 0.0 && z2.count() != 1)) {
        throw InvariantViolation(describe("c2", z2, p, q, mu_bar));
    }

    if (!z1.interior.empty()) {
        out.eps1 = z1.interior.front();
        out.t1 = -std::log(*out.eps1);
        // c1 increases with eps, so C > 0 on [0, t1).
        out.esd_occurs = true;
    }
    if (!z2.interior.empty() && mu_bar > 0.0) {
        out.eps2 = z2.interior.front();
        out.t2 = -std::log(*out.eps2);
        out.esb_occurs = true;
    }

    if (out.eps1 && out.eps2 && *out.eps1 < *out.eps2) {
        std::ostringstream msg;
        msg << "zero ordering violated: eps1=" << *out.eps1 << " < eps2=" << *out.eps2
            << " at p=" << p << " q=" << q << " mu_bar=" << mu_bar;
        throw InvariantViolation(msg.str());
    }
    return out;
}

ConcurrenceTrace trace_concurrence(const InitialElectronicState& init, double mu_bar,
                                   std::span<const double> tau_grid)
{
    require_inputs(init.p, init.q, mu_bar);
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0) || (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))) {
            throw ConfigError("tau grid must be non-negative and strictly increasing");
        }
    }

    ConcurrenceTrace out;
    const std::size_t n = tau_grid.size();
    out.tau.assign(tau_grid.begin(), tau_grid.end());
    out.c1.reserve(n);
    out.c2.reserve(n);
    out.concurrence.reserve(n);
    out.states.reserve(n);

    for (double tau : tau_grid) {
        const double eps = std::exp(-tau);
        const double a = c1(eps, init.p, init.q);
        const double b = c2(eps, init.p, mu_bar);
        const double closed = 2.0 * std::max({0.0, a, b});

        XState state = evolve_closed_form(init, mu_bar, tau);
        const double matrix = concurrence_xstate(state);
        const bool consistent = mu_bar >= 0.0 ? std::abs(matrix - closed) <= kConsistencyTolerance
                                              : closed <= matrix + kConsistencyTolerance;
        if (!consistent) {
            std::ostringstream msg;
            msg << "closed-form concurrence " << closed << " disagrees with X-state value "
                << matrix << " at tau=" << tau;
            throw InvariantViolation(msg.str());
        }

        out.c1.push_back(a);
        out.c2.push_back(b);
        out.concurrence.push_back(closed);
        out.states.push_back(state);
    }
    return out;
}

} // namespace pairglow
