#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "pairglow/dipole_pattern.hpp"
#include "pairglow/errors.hpp"

using namespace pairglow;
using std::numbers::pi;

namespace {

// mu expressed through spherical Bessel functions: mu_0 = 3 j1(x)/x,
// mu_1 = 3/2 (j0(x) - j1(x)/x), linear in xi in between.
double mu_bessel(double xi, double x)
{
    const double j0 = boost::math::sph_bessel(0, x);
    const double j1 = boost::math::sph_bessel(1, x);
    const double perp = 1.5 * (j0 - j1 / x);
    const double para = 3.0 * j1 / x;
    return xi * perp + (1.0 - xi) * para;
}

double mu_direct_long(double xi, double x)
{
    const long double lx = x;
    const long double s = std::sin(lx);
    const long double c = std::cos(lx);
    return static_cast<double>(1.5L * ((3.0L * xi - 2.0L) * (lx * c - s) / (lx * lx * lx) +
                                       xi * s / lx));
}

template <typename F>
double gk(F f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

} // namespace

TEST_CASE("pattern reference values")
{
    CHECK(mu(1.0, pi) == doctest::Approx(-3.0 / (2.0 * pi * pi)).epsilon(1e-13));
    CHECK(std::abs(mu(1.0, pi) + 3.0 / (2.0 * pi * pi)) < 1e-12);
    CHECK(std::abs(mu(0.0, pi) - 3.0 / (pi * pi)) < 1e-12);
    CHECK(mu(1.0, pi) == doctest::Approx(-0.151982).epsilon(1e-6));
    CHECK(mu(0.0, pi) == doctest::Approx(0.303964).epsilon(1e-6));
    for (double xi : {0.0, 0.3, 1.0}) {
        CHECK(mu(xi, 0.0) == 1.0);
        CHECK(std::abs(mu(xi, 1e-9) - 1.0) < 1e-9);
    }
}

TEST_CASE("pattern agrees with the spherical Bessel form")
{
    for (double xi : {0.0, 0.25, 2.0 / 3.0, 1.0}) {
        for (double x = 0.05; x < 200.0; x *= 1.13) {
            CHECK(std::abs(mu(xi, x) - mu_bessel(xi, x)) < 1e-12);
        }
    }
}

TEST_CASE("series and closed form meet at the switch point")
{
    const double x = 1e-2;
    for (double xi : {0.0, 0.5, 1.0}) {
        const double series = mu(xi, std::nextafter(x, 0.0));
        CHECK(std::abs(series - mu_direct_long(xi, x)) < 1e-10);
        CHECK(std::abs(mu(xi, x) - series) < 1e-10);
    }
}

TEST_CASE("pattern is bounded and decays")
{
    for (double xi : {0.0, 0.5, 1.0}) {
        double max_value = -INFINITY;
        double min_value = INFINITY;
        double worst_decay = 0.0;
        for (int i = 1; i <= 200000; ++i) {
            const double x = 1e3 * i / 200000.0;
            const double m = mu(xi, x);
            max_value = std::max(max_value, m);
            min_value = std::min(min_value, m);
            if (x >= 10.0) {
                worst_decay = std::max(worst_decay, std::abs(m) * x / 2.0);
            }
        }
        CHECK(max_value <= 1.0);
        CHECK(min_value > -1.0);
        CHECK(worst_decay <= 1.0);
    }
    CHECK_THROWS_AS(mu(1.2, 1.0), ConfigError);
}

TEST_CASE("truncated Gaussian is normalized")
{
    for (auto [rbar, dr] : {std::pair{300.0, 100.0}, {5.0, 3.0}, {1.0, 4.0}, {50.0, 0.01}}) {
        const auto w = MotionDistribution::radial_gaussian(rbar, dr);
        const double mass = gk([&](double x) { return w.density(x); }, w.support_lo(), w.support_hi());
        CHECK(std::abs(mass - 1.0) < 1e-10);
    }
    // five sigmas from the origin the truncation is invisible
    const auto w = MotionDistribution::radial_gaussian(50.0, 10.0);
    const double untruncated_peak = 1.0 / (10.0 * std::sqrt(2.0 * pi));
    CHECK(std::abs(w.density(50.0) / untruncated_peak - 1.0) < 1e-6);

    CHECK_THROWS_AS(MotionDistribution::radial_gaussian(-1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(MotionDistribution::radial_gaussian(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(MotionDistribution::delta(0.0), ConfigError);
}

TEST_CASE("distance averages")
{
    SUBCASE("delta law is a point evaluation")
    {
        const auto avg = mu_bar(1.0, MotionDistribution::delta(pi));
        CHECK(avg.mu_bar == mu(1.0, pi));
        CHECK(avg.est_error == 0.0);
    }
    SUBCASE("weak localization averages the pattern away")
    {
        const auto w = MotionDistribution::radial_gaussian(300.0, 100.0);
        for (double xi : {0.0, 1.0}) {
            const auto avg = mu_bar(xi, w);
            CHECK(std::abs(avg.mu_bar) < 1e-3);
            const double oracle = gk([&](double x) { return w.density(x) * mu_bessel(xi, x); },
                                     1e-12, w.support_hi());
            CHECK(std::abs(avg.mu_bar - oracle) < 1e-8);
            CHECK(avg.est_error <= 1e-8);
        }
    }
    SUBCASE("narrow Gaussian approaches the point value")
    {
        const double dx = 1e-3;
        const double x0 = pi;
        const double h = 1e-3;
        const double second =
            (mu(1.0, x0 + h) - 2.0 * mu(1.0, x0) + mu(1.0, x0 - h)) / (h * h);
        const auto avg = mu_bar(1.0, MotionDistribution::radial_gaussian(x0, dx));
        CHECK(std::abs(avg.mu_bar - mu(1.0, x0)) <= 10.0 * dx * dx * std::abs(second));
    }
    SUBCASE("averaging is linear in the distribution")
    {
        const auto w1 = MotionDistribution::radial_gaussian(4.0, 1.0);
        const auto w2 = MotionDistribution::radial_gaussian(20.0, 3.0);
        const double lo = 0.0;
        const double hi = std::max(w1.support_hi(), w2.support_hi());
        for (double alpha : {0.0, 0.3, 0.8}) {
            const auto mix = average_pattern(
                0.7, [&](double x) { return alpha * w1.density(x) + (1 - alpha) * w2.density(x); },
                lo, hi);
            const double expect =
                alpha * mu_bar(0.7, w1).mu_bar + (1 - alpha) * mu_bar(0.7, w2).mu_bar;
            CHECK(std::abs(mix.mu_bar - expect) < 3e-8);
        }
    }
}

TEST_CASE("spectral average")
{
    SUBCASE("unit at the origin up to O(eps^2)")
    {
        const auto a = a_spectral(1.0, 0.0, 1e-6);
        CHECK(std::abs(a.value - 1.0) < 1e-8);
        CHECK_FALSE(a.clipped);
        CHECK(a.window_sensitivity < 1e-8);
    }
    SUBCASE("near field reproduces the line-center pattern")
    {
        for (double xi : {0.0, 1.0}) {
            for (double x : {0.5, 1.0, pi, 10.0, 100.0, 1000.0}) {
                CHECK(std::abs(a_spectral(xi, x, 1e-6).value - mu(xi, x)) < 1e-3);
            }
        }
    }
    SUBCASE("extreme far field averages to zero")
    {
        const auto a = a_spectral(1.0, 1e5, 1e-3);
        CHECK(std::abs(a.value) < 1e-2);
    }
    SUBCASE("converges to the pattern as eps -> 0")
    {
        const double x = 500.0;
        double prev = INFINITY;
        for (double eps : {1e-4, 1e-5, 1e-6}) {
            const double gap = std::abs(a_spectral(1.0, x, eps).value - mu(1.0, x));
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 1e-6);
    }
    SUBCASE("matches an independent windowed quadrature")
    {
        const double eps = 1e-3;
        const double x = 3.0 * pi;
        const auto g = [&](double nu) {
            const double s = 1.0 + eps * nu;
            return s * s * s * mu_bessel(0.4, s * x) / (pi * (1.0 + nu * nu));
        };
        const double mass = 2.0 * std::atan(50.0) / pi;
        const double oracle = gk(g, -50.0, 50.0) / mass;
        CHECK(std::abs(a_spectral(0.4, x, eps).value - oracle) < 1e-9);
    }
    SUBCASE("window reaching below omega = 0 is clipped")
    {
        const auto a = a_spectral(1.0, 2.0, 5e-3, 500.0);
        CHECK(a.clipped);
        CHECK(std::isfinite(a.value));
    }
    SUBCASE("distance average with the spectral weight")
    {
        const auto w = MotionDistribution::radial_gaussian(pi, 0.2);
        const auto full = mu_bar_spectral(1.0, w, 1e-6);
        CHECK(full.method == AveragingMethod::FullSpectral);
        CHECK(std::abs(full.mu_bar - mu_bar(1.0, w).mu_bar) < 1e-3);
        const auto point = mu_bar_spectral(1.0, MotionDistribution::delta(pi), 1e-6);
        CHECK(point.mu_bar == a_spectral(1.0, pi, 1e-6).value);
    }
    CHECK_THROWS_AS(a_spectral(1.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("critical distance")
{
    CHECK(critical_distance(1e-6) == doctest::Approx(2.0 * pi * 1e6));
    CHECK(critical_distance(1e-3) == doctest::Approx(2.0 * pi * 1e3));

    const auto cfg = AtomPairConfig::make(std::nullopt, 780e-9, 2.0 * pi * 6e6, 1.4e-25, 1.0);
    const auto scales = reduce_units(cfg);
    const double rc = scales.to_length(critical_distance(scales));
    CHECK(rc / cfg.lambda0 == doctest::Approx(cfg.omega0 / cfg.gamma0).epsilon(1e-12));
}
