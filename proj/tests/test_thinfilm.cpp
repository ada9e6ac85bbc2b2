#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "aniso/errors.hpp"
#include "aniso/exact1d.hpp"
#include "aniso/thinfilm.hpp"

using namespace aniso;

namespace {

const double pi = std::acos(-1.0);

PhaseField2D from_profile(const Grid2D& g, const ThinFilmParams& p, const std::vector<double>& prof) {
    PhaseField2D phi = PhaseField2D::make(g, {BcMode::dirichlet_x1_periodic_x2, p.phi_minus, p.phi_plus});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) phi.at(i, j) = prof[static_cast<std::size_t>(i)];
    return phi;
}

std::vector<double> node_x(const Grid2D& g) {
    std::vector<double> x;
    for (int i = 0; i < g.nx; ++i) x.push_back(g.x(i));
    return x;
}

// Ramp plus random smooth modes vanishing at x1 = +-1 and nodal noise.
PhaseField2D random_admissible(const Grid2D& g, const ThinFilmParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), shift(0.0, 2 * pi), noise(-0.05, 0.05);
    std::uniform_int_distribution<int> kx(1, 4), ky(0, 3);
    PhaseField2D phi = thinfilm_start(g, p, seed, 0.0);
    for (int m = 0; m < 3; ++m) {
        const double a = amp(rng), t = shift(rng);
        const int k = kx(rng), l = ky(rng);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                phi.at(i, j) += a * std::sin(k * pi * (g.x(i) + 1) / 2) * std::cos(l * pi * g.y(j) + t);
    }
    for (double& v : phi.phi) v += noise(rng);
    phi.enforce_bc();
    return phi;
}

}  // namespace

TEST_CASE("thin-film energy reductions") {
    const Grid2D g = thinfilm_grid(65, 8);
    const ThinFilmParams p{0.1, 0.1, 0.0, pi / 2};
    std::vector<double> prof;
    for (double x : node_x(g)) prof.push_back(pi / 4 * (x + 1) + 0.3 * std::sin(pi * (x + 1)));
    for (double aspect : {0.05, 0.1, 1.0, 4.0}) {
        ThinFilmParams q = p;
        q.aspect = aspect;
        const EnergyBreakdown e = thinfilm_energy(from_profile(g, q, prof), q);
        CHECK(e.total == doctest::Approx(energy_1d(prof, q.eps)).epsilon(1e-13));
    }

    PhaseField2D phi = thinfilm_start(g, p, 9, 0.4);
    ThinFilmParams unit = p;
    unit.aspect = 1.0;
    CHECK(thinfilm_energy(phi, unit).total == doctest::Approx(0.5 * energy(phase_to_vector(phi), 0.1).total).epsilon(1e-13));

    const ThinFilmParams flat{0.3, 0.2, 0.7, 0.7};
    CHECK(thinfilm_energy(thinfilm_start(g, flat, 1, 0.0), flat).total == 0.0);

    CHECK_THROWS_AS(thinfilm_energy(phi, ThinFilmParams{0.1, 0.1, 0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(thinfilm_energy(PhaseField2D::make(Grid2D::make(8, 8, 1, 1), {}), p), InvalidArgument);
    CHECK_THROWS_AS(thinfilm_energy(phi, ThinFilmParams{0.1, -1.0, 0.0, pi / 2}), InvalidArgument);
}

TEST_CASE("thin-film minimizers are one-dimensional") {
    OptimizerConfig cfg;
    cfg.record_trace = false;
    cfg.seed = 4;
    for (double eps : {0.1, 1.0}) {
        const ThinFilmParams p{eps, 0.1, 0.0, pi / 2};
        const ThinFilmResult r = minimize_thinfilm(p, thinfilm_grid(32, 32), cfg);
        CHECK(r.report.converged);
        CHECK(r.rel_err < 0.01);
        CHECK(r.x2_variation < 1e-8);
        if (eps == 1.0) CHECK(r.e_min == doctest::Approx(pi * pi / 8).epsilon(1e-14));
    }

    for (double eps : {0.03, 0.1, 0.3})
        for (double aspect : {0.03, 0.1, 0.3}) {
            const ThinFilmResult r = minimize_thinfilm({eps, aspect, 0.0, pi / 2}, thinfilm_grid(32, 16), cfg);
            CHECK(r.x2_variation < 1e-8);
        }

    // Starting at the discrete 1D minimiser leaves nothing to do.
    const ThinFilmParams p{0.1, 0.1, 0.0, pi / 2};
    const Grid2D g = thinfilm_grid(32, 16);
    std::vector<double> start = uniform_samples(0.0, pi / 2, g.nx);
    const auto [prof, rep1] = minimize_1d(start, p.eps, cfg);
    REQUIRE(rep1.converged);
    const ThinFilmResult r = minimize_thinfilm(p, from_profile(g, p, prof), cfg);
    CHECK(r.report.iterations == 0);
    CHECK(r.report.energy.total == doctest::Approx(energy_1d(prof, p.eps)).epsilon(1e-13));
}

TEST_CASE("symmetry defect inequality") {
    const ThinFilmParams p{0.1, 1.0, 0.0, pi / 2};
    const Grid2D fine = thinfilm_grid(2049, 4);
    const Profile1D exact = minimal_energy_1d(p.eps, p.phi_minus, p.phi_plus);
    const SymmetryDefect d0 = symmetry_defect_bound(from_profile(fine, p, minimizer_profile_1d(exact, node_x(fine))), p);
    CHECK(std::abs(d0.lhs) <= 1e-6);
    CHECK(std::abs(d0.rhs) <= 1e-6);

    for (double aspect : {1.0, 0.3})
        for (double eps : {0.1, 2.0}) {
            const ThinFilmParams q{eps, aspect, -0.4, 1.3};
            const Grid2D g = thinfilm_grid(64, 32);
            for (std::uint64_t s = 1; s <= 50; ++s) {
                const SymmetryDefect d = symmetry_defect_bound(random_admissible(g, q, s), q);
                CHECK(d.lhs > 0.0);
                CHECK(d.margin >= -1e-4 * (1.0 + d.lhs));
            }
        }
}

TEST_CASE("quadratic form certificate") {
    for (double eps : {1e-3, 0.1, 1.0, 3.0}) {
        const QuadraticCertificate q = quadratic_certificate(eps);
        CHECK(q.max_det_error <= 1e-12);
        CHECK(q.max_trace_error <= 1e-12);
        CHECK(q.min_ratio >= 1.0 - 1e-12);
    }
    CHECK_THROWS_AS(quadratic_certificate(0.0), InvalidArgument);
}

TEST_CASE("thin-film CSV") {
    std::ostringstream os;
    write_thinfilm_csv(os, {{0.1, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0}});
    CHECK(os.str().rfind("eps,aspect,energy,e_min,rel_err,x2_variation,margin\n", 0) == 0);
}
