#include "pairglow/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "pairglow/errors.hpp"

namespace pairglow {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745600490, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_21(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_center = f(center);
    double kronrod = kKronrodWeights[10] * f_center;
    double gauss = 0.0;

    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }

    kronrod *= half;
    gauss *= half;
    return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options)
{
    QuadratureResult result;
    if (a == b) {
        return result;
    }
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw NumericalError("integrate: non-finite integration limits");
    }
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    const int initial = std::max(1, options.initial_panels);
    const int budget = std::max(options.max_subdivisions, initial);

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_error = 0.0;

    const double width = (hi - lo) / initial;
    for (int i = 0; i < initial; ++i) {
        const double pa = lo + width * i;
        const double pb = (i + 1 == initial) ? hi : lo + width * (i + 1);
        Panel p = gauss_kronrod_21(f, pa, pb);
        total += p.value;
        total_error += p.error;
        queue.push(p);
    }
    int panels = initial;

    const double tiny = 64.0 * std::numeric_limits<double>::epsilon();
    auto converged = [&] {
        return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
    };

    while (!converged()) {
        if (panels >= budget) {
            std::ostringstream msg;
            msg << "integrate: subdivision budget of " << budget << " panels exhausted on ["
                << lo << ", " << hi << "]; estimate " << total << " +- " << total_error
                << " (requested abs " << options.abs_tol << ", rel " << options.rel_tol << ")";
            throw NumericalError(msg.str());
        }

        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a <= tiny * std::max(1.0, std::abs(mid))) {
            std::ostringstream msg;
            msg << "integrate: panel [" << worst.a << ", " << worst.b
                << "] cannot be split further; estimate " << total << " +- " << total_error;
            throw NumericalError(msg.str());
        }
        queue.pop();

        Panel left = gauss_kronrod_21(f, worst.a, mid);
        Panel right = gauss_kronrod_21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    // Re-sum to shed the drift accumulated by incremental updates.
    total = 0.0;
    total_error = 0.0;
    while (!queue.empty()) {
        total += queue.top().value;
        total_error += queue.top().error;
        queue.pop();
    }

    result.value = sign * total;
    result.abs_error = total_error;
    result.panels = panels;
    result.evaluations = 21 * (initial + 2 * (panels - initial));
    return result;
}

} // namespace pairglow
