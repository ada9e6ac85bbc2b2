#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "aniso/errors.hpp"
#include "aniso/kinetic.hpp"

using namespace aniso;

namespace {

const double pi = std::acos(-1.0);

// Midpoint rule on an n x n tensor grid over T^2 with chi evaluated pointwise.
double delta_bruteforce(double th1, double th2, const std::function<double(double)>& phi, int n) {
    const double h = 2.0 * pi / n;
    std::vector<double> t(n), dchi(n);
    for (int a = 0; a < n; ++a) {
        t[a] = (a + 0.5) * h;
        const double c2 = std::cos(t[a] - th2) > 0.0 ? 1.0 : 0.0;
        const double c1 = std::cos(t[a] - th1) > 0.0 ? 1.0 : 0.0;
        dchi[a] = c2 - c1;
    }
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
        if (dchi[a] == 0.0) continue;
        for (int b = 0; b < n; ++b)
            if (dchi[b] != 0.0) sum += phi(t[a] - t[b]) * dchi[a] * dchi[b] * std::sin(t[a] - t[b]);
    }
    return 0.5 * sum * h * h;
}

// Delta for phi_0 in closed form, D = |theta2 - theta1| in [0, pi].
double delta_phi0_closed(double D) {
    return D <= pi / 2 ? 4.0 * (D - std::sin(D)) : 4.0 * (D - 2.0 + std::sin(D));
}

PhaseField2D smooth_phase(int cells, const std::function<double(double, double)>& f) {
    const Grid2D g = Grid2D::make(cells + 1, cells + 1, 1, 1);
    PhaseField2D p = PhaseField2D::make(g, {});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) p.at(i, j) = f(g.x(i), g.y(j));
    return p;
}

}  // namespace

TEST_CASE("angular grid nodes and interpolation") {
    CHECK_THROWS_AS(AngularGrid::make(60), InvalidArgument);
    CHECK_THROWS_AS(AngularGrid::make(66), InvalidArgument);
    const AngularGrid ag = AngularGrid::make(64);
    CHECK(ag.node(0) == doctest::Approx(pi / 64));
    const std::vector<double> g = ag.sample([](double s) { return std::sin(3 * s); });
    for (int k = 0; k < ag.n_s; ++k) {
        CHECK(ag.interpolate(g, ag.node(k)) == doctest::Approx(g[k]).epsilon(1e-14));
        CHECK(ag.interpolate(g, ag.node(k) + 2 * pi) == doctest::Approx(g[k]).epsilon(1e-12));
    }
}

TEST_CASE("weights: phi0 and sin 2s are admissible, cos and sin are not") {
    const AngularGrid ag = AngularGrid::make(256);
    CHECK(KineticWeight::phi0().oddness_defect(ag) == 0.0);
    CHECK(KineticWeight::phi0().periodicity_defect(ag) == 0.0);
    CHECK_NOTHROW(KineticWeight::sin2().validate(ag));
    CHECK_THROWS_AS(KineticWeight::custom("cos", [](double s) { return std::cos(s); }).validate(ag), InvalidArgument);
    CHECK_THROWS_AS(KineticWeight::custom("sin", [](double s) { return std::sin(s); }).validate(ag), InvalidArgument);
    const KineticWeight p0 = KineticWeight::phi0();
    CHECK(p0.phi(0.3) == 1.0);
    CHECK(p0.phi(2.0) == -1.0);
    CHECK(p0.phi(-0.3) == -1.0);
    CHECK(p0.phi(0.3 + pi) == 1.0);
}

TEST_CASE("entropy Phi_g closed forms") {
    const AngularGrid ag = AngularGrid::make(256);
    const std::vector<double> one(256, 1.0);
    for (double th : {0.0, 0.37, 1.9, -2.6, 7.1}) {
        const EntropyValue e = entropy_phi_g(ag, one, th);
        CHECK(std::abs(e.Phi[0] - 2 * std::cos(th)) < 1e-13);
        CHECK(std::abs(e.Phi[1] - 2 * std::sin(th)) < 1e-13);
        CHECK(e.lambda == 2.0);
    }
    // g = cos: Phi = (pi/2, 0), lambda = 0, interpolation error O(n_s^-2).
    double err[2];
    int idx = 0;
    for (int n : {128, 256}) {
        const AngularGrid a = AngularGrid::make(n);
        const std::vector<double> c = a.sample([](double s) { return std::cos(s); });
        double m = 0.0;
        for (double th : {0.1, 0.9, 2.2, -1.3}) {
            const EntropyValue e = entropy_phi_g(a, c, th);
            m = std::max({m, std::abs(e.Phi[0] - pi / 2), std::abs(e.Phi[1])});
            CHECK(std::abs(e.lambda) < 1e-15);
        }
        err[idx++] = m;
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("entropy chain rule residual") {
    const AngularGrid ag = AngularGrid::make(256);
    const std::vector<double> one(256, 1.0);
    const PhaseField2D smooth = smooth_phase(32, [](double x, double y) { return std::sin(x) * std::cos(y); });
    CHECK(entropy_production_residual(smooth, ag, one) <= 1e-8);
    const PhaseField2D flat = smooth_phase(32, [](double, double) { return 0.7; });
    const std::vector<double> c2 = ag.sample([](double s) { return std::cos(2 * s); });
    CHECK(entropy_production_residual(flat, ag, c2) == 0.0);

    std::vector<double> res;
    for (int cells : {32, 64, 128, 256})
        res.push_back(entropy_production_residual(
            smooth_phase(cells, [](double x, double y) { return std::sin(x) * std::cos(y); }), ag, c2));
    for (std::size_t k = 1; k < res.size(); ++k) {
        const double r = res[k - 1] / res[k];
        CHECK(r >= 3.0);
        CHECK(r <= 5.0);
    }
}

TEST_CASE("Theta evaluator is linear and gives 2 div u for g = 1") {
    const PhaseField2D p = smooth_phase(24, [](double x, double y) { return x * y + 0.3 * x; });
    const ThetaEvaluator te(p);
    const ScalarField2D one = te.apply([](double) { return 1.0; });
    for (std::size_t k = 0; k < one.values.size(); ++k)
        if (one.mask[k]) CHECK(one.values[k] == 2.0 * te.divergence().values[k]);
    auto g1 = [](double s) { return std::cos(2 * s) + 0.2; };
    auto g2 = [](double s) { return std::sin(s); };
    const ScalarField2D a = te.apply(g1), b = te.apply(g2);
    const ScalarField2D ab = te.apply([&](double s) { return 2.0 * g1(s) - 3.0 * g2(s); });
    for (std::size_t k = 0; k < ab.values.size(); ++k)
        CHECK(std::abs(ab.values[k] - (2.0 * a.values[k] - 3.0 * b.values[k])) < 1e-13);
}

TEST_CASE("Delta vanishes on the diagonal and is symmetric") {
    const AngularGrid ag = AngularGrid::make(256);
    const KineticWeight w = KineticWeight::phi0();
    for (int k = 0; k < 360; ++k) {
        const double th = 2 * pi * k / 360.0;
        CHECK(delta_quantity(th, th, w, ag) == 0.0);
        const double other = th + 0.731 * k / 17.0 - 1.0;
        CHECK(delta_quantity(th, other, w, ag) == delta_quantity(other, th, w, ag));
    }
}

TEST_CASE("Delta is zero for even or anti-pi-periodic weights") {
    const AngularGrid ag = AngularGrid::make(256);
    const KineticWeight c = KineticWeight::custom("cos", [](double s) { return std::cos(s); });
    const KineticWeight s = KineticWeight::custom("sin", [](double t) { return std::sin(t); });
    for (double d : {0.2, 1.0, 1.7, 2.9, pi}) {
        CHECK(std::abs(delta_quantity(0.4, 0.4 + d, c, ag)) < 1e-10);
        CHECK(std::abs(delta_quantity(0.4, 0.4 + d, s, ag)) < 1e-10);
    }
}

TEST_CASE("Delta against closed form and a brute-force tensor rule") {
    const AngularGrid ag = AngularGrid::make(256);
    const KineticWeight p0 = KineticWeight::phi0();
    for (double D : {1e-3, 0.05, 0.8, pi / 2, 2.0, 3.0, pi})
        CHECK(std::abs(delta_quantity(1.1, 1.1 + D, p0, ag) - delta_phi0_closed(D)) <= 1e-12 * (1 + delta_phi0_closed(D)));
    const KineticWeight s2 = KineticWeight::sin2();
    for (double D : {0.6, 1.4, 2.5}) {
        const double bf0 = delta_bruteforce(0.2, 0.2 + D, p0.phi, 1024);
        CHECK(delta_quantity(0.2, 0.2 + D, p0, ag) == doctest::Approx(bf0).epsilon(0.01));
        const double bf2 = delta_bruteforce(0.2, 0.2 + D, s2.phi, 1024);
        CHECK(delta_quantity(0.2, 0.2 + D, s2, ag) == doctest::Approx(bf2).epsilon(0.01));
    }
}

TEST_CASE("half-circle moment against adaptive quadrature") {
    const AngularGrid ag = AngularGrid::make(128);
    for (const KineticWeight& w : {KineticWeight::phi0(), KineticWeight::sin2()})
        for (double a : {0.0, 0.8, -2.1})
            for (double s : {0.3, 1.9}) {
                double oracle = 0.0;
                auto f = [&](double t) { return w.phi(t - s) * std::sin(t); };
                // Split at the weight breakpoints so the oracle sees smooth pieces.
                std::vector<double> cuts{a - pi / 2, a + pi / 2};
                if (w.breakpoint_spacing > 0)
                    for (int m = -8; m <= 8; ++m) {
                        const double c = s + m * w.breakpoint_spacing;
                        if (c > a - pi / 2 && c < a + pi / 2) cuts.push_back(c);
                    }
                std::sort(cuts.begin(), cuts.end());
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                    oracle += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1], 10,
                                                                                             1e-14);
                CHECK(half_circle_moment(a, s, w, ag) == doctest::Approx(oracle).epsilon(1e-12));
            }
}

TEST_CASE("coercivity scan for phi0") {
    const KineticWeight w = KineticWeight::phi0();
    const CoercivityScan a = coercivity_scan(w, AngularGrid::make(256), 360, true);
    const CoercivityScan b = coercivity_scan(w, AngularGrid::make(512));
    CHECK(a.c_min > 0.0);
    // Minimum at antipodal pairs: 4 (pi - 2) / 8.
    CHECK(a.c_min == doctest::Approx((pi - 2.0) / 2.0).epsilon(1e-10));
    CHECK(std::abs(std::remainder(a.argmin_theta2 - a.argmin_theta1, 2 * pi)) == doctest::Approx(pi));
    CHECK(std::abs(a.c_min - b.c_min) < 5e-4 * a.c_min);
    CHECK(a.rows.size() == 360u * 359u);
    bool all_above = true;
    for (const CoercivityRow& r : a.rows) all_above = all_above && r.ratio >= a.c_min;
    CHECK(all_above);
    std::ostringstream os;
    CoercivityScan small = a;
    small.rows.resize(3);
    write_coercivity_csv(os, small);
    CHECK(os.str().rfind("theta1,theta2,delta,coercivity_ratio\n", 0) == 0);
}

TEST_CASE("compensation identity: constant field and argument checks") {
    const AngularGrid ag = AngularGrid::make(64);
    const KineticWeight w = KineticWeight::sin2();
    const PhaseField2D flat = smooth_phase(32, [](double, double) { return 0.4; });
    const TestWindow z{0.0, 0.0, 0.6};
    const CompensationTerms c = compensation_residual(flat, w, ag, 0.125, z);
    CHECK(c.dtau_term == 0.0);
    CHECK(c.i_term == 0.0);
    CHECK(c.a_term == 0.0);
    CHECK(c.residual <= 1e-12);
    CHECK_THROWS_AS(compensation_residual(flat, w, ag, 0.1, z), InvalidArgument);
    CHECK_THROWS_AS(compensation_residual(flat, w, ag, 0.25, z), InvalidArgument);
    CHECK_THROWS_AS(compensation_residual(flat, w, ag, 0.125, TestWindow{0.3, 0.0, 0.6}), InvalidArgument);
    const KineticWeight bad = KineticWeight::custom("cos", [](double s) { return std::cos(s); });
    CHECK_THROWS_AS(compensation_residual(flat, bad, ag, 0.125, z), InvalidArgument);
}

TEST_CASE("compensation identity: I term vanishes for a divergence-free field") {
    const AngularGrid ag = AngularGrid::make(64);
    // Vortex (-x2, x1)/|x| seen through a window away from the centre.
    auto vort = [](double x, double y) { return std::atan2(x, -y); };
    // Theta is proportional to div u, so I^tau only sees the O(h^2) stencil error.
    std::vector<double> i_terms;
    for (int cells : {32, 64, 128}) {
        const CompensationTerms c =
            compensation_residual(smooth_phase(cells, vort), KineticWeight::sin2(), ag, 0.125, TestWindow{0.0, 0.6, 0.3});
        i_terms.push_back(std::abs(c.i_term));
    }
    CHECK(i_terms[0] < 2e-3);
    CHECK(i_terms[1] < i_terms[0] / 3.0);
    CHECK(i_terms[2] < i_terms[1] / 3.0);
}

TEST_CASE("compensation identity: weak residual decreases under refinement") {
    auto f = [](double x, double y) { return 0.3 * std::sin(pi * x) * std::sin(pi * y); };
    const TestWindow z{0.0, 0.0, 0.6};
    std::vector<double> res;
    for (auto [cells, ns] : {std::pair{32, 64}, std::pair{64, 128}, std::pair{128, 256}}) {
        const CompensationTerms c =
            compensation_residual(smooth_phase(cells, f), KineticWeight::sin2(), AngularGrid::make(ns), 0.125, z);
        MESSAGE("cells=" << cells << " n_s=" << ns << " dtau=" << c.dtau_term << " I=" << c.i_term
                         << " A=" << c.a_term << " residual=" << c.residual);
        res.push_back(c.residual);
    }
    CHECK(res[1] < res[0]);
    CHECK(res[2] < res[1]);
}
