/// @file test_exact1d.cpp
/// F_eps, the exact 1D minimiser, 1D energies, interval decomposition and 1D recovery.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "aniso/exact1d.hpp"
#include "doctest.h"

using namespace aniso;
using std::numbers::pi;

namespace {

// Composite 5-point Gauss-Legendre on 4000 panels.
double gauss_oracle(double t, double eps) {
    static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    const int panels = 4000;
    const double h = t / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double m = (p + 0.5) * h;
        for (int q = 0; q < 5; ++q) {
            const double x = m + 0.5 * h * xg[q];
            s += wg[q] * std::sqrt(std::sin(x) * std::sin(x) + eps * std::cos(x) * std::cos(x));
        }
    }
    return 0.5 * h * s;
}

// Adaptive Gauss-Kronrod.
double kronrod_oracle(double t, double eps) {
    auto f = [eps](double s) { return std::sqrt(std::sin(s) * std::sin(s) + eps * std::cos(s) * std::cos(s)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t, 12, 1e-14);
}

}  // namespace

TEST_CASE("F_eps closed forms and oracles") {
    for (double t : {-3.0, 0.0, 0.7, 5.0, 12.5}) CHECK(F_eps(t, 1.0) == t);
    CHECK(F_eps(pi, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(F_eps(pi / 2, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(F_eps(pi / 2, 0.25) - gauss_oracle(pi / 2, 0.25)) < 1e-10);
    for (double eps : {1e-3, 0.01, 0.25, 0.7, 2.0})
        for (double t : {0.1, 0.9, 1.5, 2.4, 3.0, 7.3}) {
            CHECK(std::abs(F_eps(t, eps) - kronrod_oracle(t, eps)) < 1e-12);
            CHECK(std::abs(F_eps(t, eps) - gauss_oracle(t, eps)) < 1e-10);
        }
    CHECK_THROWS_AS(F_eps(1.0, -0.1), InvalidArgument);
}

TEST_CASE("F_eps monotonicity and additivity") {
    for (double eps : {0.0, 1e-3, 0.1, 0.5}) {
        double prev = F_eps(-7.0, eps);
        for (double t = -7.0 + 0.05; t < 7.0; t += 0.05) {
            const double v = F_eps(t, eps);
            CHECK(v > prev);
            prev = v;
            CHECK(std::abs(F_eps(t + pi, eps) - F_eps(t, eps) - F_eps(pi, eps)) < 1e-10);
        }
    }
    for (double t : {0.3, 1.2, 2.9, 4.0})
        CHECK(F_eps(t, 0.0) < F_eps(t, 0.01));
    CHECK(F_eps(1.0, 0.01) < F_eps(1.0, 0.1));
    CHECK(F_eps(1.0, 0.1) < F_eps(1.0, 1.0));
}

TEST_CASE("F_eps inverse") {
    for (double y : {-4.0, 0.0, 2.5}) CHECK(F_eps_inverse(y, 1.0) == y);
    CHECK(F_eps_inverse(1.0, 0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    for (double eps : {0.0, 1e-3, 1.0}) {
        double worst = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double t = -10.0 + 0.01 * k;
            worst = std::max(worst, std::abs(F_eps_inverse(F_eps(t, eps), eps) - t));
        }
        CHECK(worst < 1e-9);
    }
    for (double eps : {1e-3, 0.3})
        for (double y : {-6.0, 0.4, 3.3, 17.0}) CHECK(std::abs(F_eps(F_eps_inverse(y, eps), eps) - y) <= 1e-10);
}

TEST_CASE("minimal 1D energy") {
    CHECK(minimal_energy_1d(1.0, 0.0, pi / 2).e_min == doctest::Approx(pi * pi / 8).epsilon(1e-15));
    CHECK(minimal_energy_1d(0.0, 0.0, pi).e_min == doctest::Approx(2.0).epsilon(1e-15));
    const Profile1D z = minimal_energy_1d(0.3, 1.1, 1.1);
    CHECK(z.e_min == 0.0);
    CHECK(z.tau == 0);
    CHECK(minimal_energy_1d(0.3, 1.0, 0.0).tau == -1);
    // General interval: (dF)^2 / (b - a).
    const Profile1D p = minimal_energy_1d(0.2, 0.0, 1.0, 0.0, 4.0);
    const double dF = F_eps(1.0, 0.2);
    CHECK(p.e_min == doctest::Approx(dF * dF / 4.0));
    // Increasing in eps.
    CHECK(minimal_energy_1d(0.01, 0, pi / 2).e_min < minimal_energy_1d(0.1, 0, pi / 2).e_min);
    CHECK_THROWS_AS(minimal_energy_1d(0.1, 0, 1, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("minimiser profile") {
    const auto x = uniform_samples(-1.0, 1.0, 512);
    const Profile1D lin = minimal_energy_1d(1.0, 0.0, pi / 2);
    const auto phi_lin = minimizer_profile_1d(lin, x);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(phi_lin[k] == doctest::Approx(pi / 4 * (x[k] + 1)));
    for (double eps : {1.0, 0.1, 0.01}) {
        const Profile1D p = minimal_energy_1d(eps, 0.0, pi / 2);
        const auto phi = minimizer_profile_1d(p, x);
        CHECK(phi.front() == 0.0);
        CHECK(phi.back() == pi / 2);
        CHECK(std::abs(energy_1d(phi, eps) - p.e_min) / p.e_min < 1e-3);
        // F(phi) is affine in x.
        const double slope = (F_eps(phi[300], eps) - F_eps(phi[100], eps)) / (x[300] - x[100]);
        CHECK(slope == doctest::Approx((F_eps(pi / 2, eps) - F_eps(0.0, eps)) / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("1D energy") {
    const auto x = uniform_samples(-1.0, 1.0, 512);
    std::vector<double> c(512, 0.4);
    CHECK(energy_1d(c, 0.3) == 0.0);
    std::vector<double> lin(512), lin0(512);
    for (std::size_t k = 0; k < x.size(); ++k) {
        lin[k] = pi / 4 * (x[k] + 1);
        lin0[k] = pi / 2 * (x[k] + 1);
    }
    CHECK(std::abs(energy_1d(lin, 1.0) - pi * pi / 8) / (pi * pi / 8) < 1e-5);
    const double e0 = energy_1d(lin0, 0.0);
    CHECK(std::abs(e0 - pi * pi / 4) < 1e-3);
    CHECK(e0 > 2.0);

    // Exact gradient.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> phi(40);
    for (double& v : phi) v = U(rng);
    const auto g = energy_1d_gradient(phi, 0.37);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        auto p = phi;
        p[k] += 1e-6;
        const double ep = energy_1d(p, 0.37);
        p[k] -= 2e-6;
        const double em = energy_1d(p, 0.37);
        CHECK(g[k] == doctest::Approx((ep - em) / 2e-6).epsilon(1e-6));
    }
}

TEST_CASE("discrete energies never undercut the minimum") {
    const int n = 4096;
    const auto x = uniform_samples(-1.0, 1.0, n);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int seed = 0; seed < 20; ++seed) {
        const double eps = seed % 2 ? 0.1 : 0.01;
        const Profile1D p = minimal_energy_1d(eps, 0.0, pi / 2);
        auto phi = minimizer_profile_1d(p, x);
        const double amp = 0.3 * std::abs(U(rng));
        double c[4];
        for (double& v : c) v = amp * U(rng);
        for (int k = 0; k < n; ++k)
            for (int m = 0; m < 4; ++m) phi[k] += c[m] * std::sin((m + 1) * pi * (x[k] + 1) / 2);
        CHECK(energy_1d(phi, eps) >= p.e_min - 1e-6);
    }
}

TEST_CASE("interval decomposition") {
    const int n = 2001;
    const auto x = uniform_samples(-1.0, 1.0, n);
    std::vector<double> up(n, pi / 2), flat(n, 0.0);
    const auto de = interval_decomposition(up, 0.1, 1e-3);
    REQUIRE(de.elliptic.size() == 1);
    CHECK(de.nonelliptic.empty());
    CHECK(de.elliptic[0].lo == -1.0);
    CHECK(de.elliptic[0].hi == 1.0);
    const auto dn = interval_decomposition(flat, 0.1, 1e-3);
    REQUIRE(dn.nonelliptic.size() == 1);
    CHECK(dn.elliptic.empty());

    const Profile1D p = minimal_energy_1d(0.01, 0.0, pi);
    const auto phi = minimizer_profile_1d(p, x);
    const auto d = interval_decomposition(phi, 0.2, 1e-3);
    const DecompositionCheck c = verify_decomposition(d, phi, -1.0, 1.0);
    CHECK(c.covers);
    CHECK(c.disjoint);
    CHECK(c.lengths);
    CHECK(c.predicates);
    CHECK(d.elliptic.size() >= 1);
    CHECK(d.nonelliptic.size() >= 2);

    // Terminal fix-up: the last elliptic stretch is shorter than 8 delta.
    std::vector<double> tail(n);
    for (int k = 0; k < n; ++k) tail[k] = x[k] < 0.9 ? 0.0 : (x[k] - 0.9) * 4.3;
    const auto dt = interval_decomposition(tail, 0.2, 2e-3);
    REQUIRE(!dt.elliptic.empty());
    CHECK(dt.elliptic.back().hi - dt.elliptic.back().lo == doctest::Approx(16e-3).epsilon(0.05));
    CHECK(verify_decomposition(dt, tail, -1.0, 1.0).ok());

    // Rapid oscillation violates the separation property.
    std::vector<double> fast(n);
    for (int k = 0; k < n; ++k) fast[k] = 60.0 * x[k];
    CHECK_THROWS_AS(interval_decomposition(fast, 0.1, 1e-3), SeparationViolated);
    try {
        interval_decomposition(fast, 0.1, 1e-3);
    } catch (const SeparationViolated& e) {
        CHECK(e.y() - e.x() < 16e-3);
    }
}

TEST_CASE("1D recovery") {
    const int n = 4096;
    const auto x = uniform_samples(-1.0, 1.0, n);
    std::vector<double> smooth(n);
    for (int k = 0; k < n; ++k) smooth[k] = std::sin(2 * x[k]);
    double prev = 1e9;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const Recovery1D r = recovery_1d(smooth, eps);
        double m = 0;
        for (int k = 200; k < n - 200; ++k) m = std::max(m, std::abs(r.phi_delta[k] - smooth[k]));
        CHECK(m < prev);
        prev = m;
    }

    // eps = 0 minimiser from 0 to pi: u1 = -x, target int (u1')^2 = 2.
    const Profile1D p = minimal_energy_1d(0.0, 0.0, pi);
    const auto phi = minimizer_profile_1d(p, x);
    double prev_curl = 1e9;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const Recovery1D r = recovery_1d(phi, eps);
        CHECK(r.delta == doctest::Approx(std::sqrt(eps)));
        const double curl = eps * r.energy.curl_part;
        CHECK(curl < prev_curl);
        prev_curl = curl;
        if (eps == 1e-3) CHECK(std::abs(r.energy.total - 2.0) / 2.0 < 0.05);
    }
    CHECK_THROWS_AS(recovery_1d(phi, 0.5), InvalidArgument);
}
