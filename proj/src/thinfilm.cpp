#include "aniso/thinfilm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "aniso/errors.hpp"
#include "aniso/exact1d.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

namespace {

// 5-point Gauss rule on [0, 1].
struct Rule {
    std::array<double, 5> x{};
    std::array<double, 5> w{};
};

Rule unit_rule() {
    using G = boost::math::quadrature::gauss<double, 5>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    std::size_t k = 0;
    for (std::size_t m = a.size(); m-- > 1;) {
        r.x[k] = 0.5 * (1.0 - a[m]);
        r.w[k++] = 0.5 * w[m];
    }
    r.x[k] = 0.5;
    r.w[k++] = 0.5 * w[0];
    for (std::size_t m = 1; m < a.size(); ++m) {
        r.x[k] = 0.5 * (1.0 + a[m]);
        r.w[k++] = 0.5 * w[m];
    }
    return r;
}

void check_field(const PhaseField2D& phi, const ThinFilmParams& p) {
    p.validate();
    phi.validate();
    const Grid2D& g = phi.grid;
    if (phi.bc.mode != BcMode::dirichlet_x1_periodic_x2)
        throw InvalidArgument("thin-film fields need Dirichlet-x1 / periodic-x2 conditions");
    if (phi.bc.phi_minus != p.phi_minus || phi.bc.phi_plus != p.phi_plus)
        throw InvalidArgument("boundary phases differ from the thin-film parameters");
    if (g.lx != 1.0 || g.ly != 1.0) throw InvalidArgument("thin-film fields live on (-1, 1)^2");
}

// Integrals over the bilinear phase interpolant, cell by cell.
struct CellSums {
    double energy = 0.0;
    double d2sq = 0.0;
    double d1def = 0.0;
};

CellSums cell_sums(const PhaseField2D& phi, const ThinFilmParams& p, double e_min, int tau) {
    static const Rule rule = unit_rule();
    const Grid2D& g = phi.grid;
    const double s = 1.0 / p.aspect, eps = p.eps;
    const double c = tau * std::sqrt(e_min / 2.0);
    const int cx = g.cells_x(), cy = g.cells_y();
    std::vector<CellSums> rows(static_cast<std::size_t>(cy));
    parallel_rows(cy, [&](int j) {
        CellSums acc;
        const int j1 = (j + 1) % g.ny;
        for (int i = 0; i < cx; ++i) {
            const double f00 = phi.at(i, j), f10 = phi.at(i + 1, j), f01 = phi.at(i, j1), f11 = phi.at(i + 1, j1);
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b) {
                    const double x = rule.x[static_cast<std::size_t>(a)], y = rule.x[static_cast<std::size_t>(b)];
                    const double w = rule.w[static_cast<std::size_t>(a)] * rule.w[static_cast<std::size_t>(b)];
                    const double f = (1 - x) * (1 - y) * f00 + x * (1 - y) * f10 + (1 - x) * y * f01 + x * y * f11;
                    const double d1 = ((1 - y) * (f10 - f00) + y * (f11 - f01)) / g.hx;
                    const double d2 = ((1 - x) * (f01 - f00) + x * (f11 - f10)) / g.hy;
                    const double sn = std::sin(f), cs = std::cos(f);
                    const double dv = -sn * d1 + s * cs * d2;
                    const double cu = cs * d1 + s * sn * d2;
                    const double r = d1 - c / F_eps_derivative(f, eps);
                    acc.energy += w * 0.5 * (dv * dv + eps * cu * cu);
                    acc.d2sq += w * d2 * d2;
                    acc.d1def += w * r * r;
                }
        }
        rows[static_cast<std::size_t>(j)] = acc;
    });
    CellSums out;
    std::vector<double> e, d2, d1;
    for (const CellSums& r : rows) {
        e.push_back(r.energy);
        d2.push_back(r.d2sq);
        d1.push_back(r.d1def);
    }
    const double area = g.hx * g.hy;
    out.energy = area * ordered_sum(e);
    out.d2sq = area * ordered_sum(d2);
    out.d1def = area * ordered_sum(d1);
    return out;
}

}  // namespace

void ThinFilmParams::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("thin-film eps must be positive");
    if (!(aspect > 0.0) || !std::isfinite(aspect)) throw InvalidArgument("thin-film aspect must be positive");
    if (!std::isfinite(phi_minus) || !std::isfinite(phi_plus)) throw InvalidArgument("boundary phases must be finite");
}

EnergyScheme thinfilm_scheme(const ThinFilmParams& p) {
    p.validate();
    return {p.eps, 1.0 / p.aspect, 0.5};
}

Grid2D thinfilm_grid(int nx, int ny) {
    return grid_for({BcMode::dirichlet_x1_periodic_x2, 0.0, 0.0}, nx, ny, 1.0, 1.0);
}

EnergyBreakdown thinfilm_energy(const PhaseField2D& phi, const ThinFilmParams& p) {
    check_field(phi, p);
    return scheme_energy(phase_to_vector(phi), thinfilm_scheme(p));
}

PhaseField2D thinfilm_start(const Grid2D& grid, const ThinFilmParams& p, std::uint64_t seed, double amplitude) {
    p.validate();
    PhaseField2D phi = PhaseField2D::make(grid, {BcMode::dirichlet_x1_periodic_x2, p.phi_minus, p.phi_plus});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-amplitude, amplitude);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double t = (grid.x(i) + grid.lx) / (2.0 * grid.lx);
            phi.at(i, j) = p.phi_minus + t * (p.phi_plus - p.phi_minus) + noise(rng);
        }
    phi.enforce_bc();
    return phi;
}

double x2_variation(const PhaseField2D& phi) {
    ThinFilmParams p;
    p.phi_minus = phi.bc.phi_minus;
    p.phi_plus = phi.bc.phi_plus;
    p.aspect = 1.0;
    return cell_sums(phi, p, 0.0, 0).d2sq;
}

ThinFilmResult minimize_thinfilm(const ThinFilmParams& p, const PhaseField2D& start, const OptimizerConfig& cfg) {
    check_field(start, p);
    ThinFilmResult r;
    std::tie(r.field, r.report) = minimize_scheme(start, thinfilm_scheme(p), cfg);
    r.e_min = minimal_energy_1d(p.eps, p.phi_minus, p.phi_plus).e_min;
    r.rel_err = std::abs(r.report.energy.total - r.e_min) / r.e_min;
    r.x2_variation = x2_variation(r.field);
    return r;
}

ThinFilmResult minimize_thinfilm(const ThinFilmParams& p, const Grid2D& grid, const OptimizerConfig& cfg) {
    return minimize_thinfilm(p, thinfilm_start(grid, p, cfg.seed), cfg);
}

SymmetryDefect symmetry_defect_bound(const PhaseField2D& phi, const ThinFilmParams& p) {
    check_field(phi, p);
    const Profile1D prof = minimal_energy_1d(p.eps, p.phi_minus, p.phi_plus);
    const CellSums c = cell_sums(phi, p, prof.e_min, prof.tau);
    SymmetryDefect d;
    d.lhs = c.energy - prof.e_min;
    d.rhs = 0.5 * std::min(1.0, p.eps) * (c.d2sq / (p.aspect * p.aspect) + c.d1def);
    d.margin = d.lhs - d.rhs;
    return d;
}

QuadraticCertificate quadratic_certificate(double eps, int n) {
    if (!(eps > 0.0) || n < 1) throw InvalidArgument("certificate needs eps > 0 and n >= 1");
    const double two_pi = 2.0 * std::acos(-1.0);
    QuadraticCertificate q;
    q.min_ratio = INFINITY;
    const double floor = 2.0 * std::min(1.0, eps);
    for (int a = 0; a < n; ++a) {
        const double C = std::cos(two_pi * a / n), S = std::sin(two_pi * a / n);
        const double qa = (1 + eps) - (1 - eps) * C, qc = (1 + eps) + (1 - eps) * C, qb = (eps - 1) * S;
        q.max_det_error = std::max(q.max_det_error, std::abs(qa * qc - qb * qb - 4 * eps));
        q.max_trace_error = std::max(q.max_trace_error, std::abs(qa + qc - 2 * (1 + eps)));
        for (int b = 0; b < n; ++b) {
            const double X = std::cos(two_pi * b / n), Y = std::sin(two_pi * b / n);
            const double v = qa * X * X + qc * Y * Y + 2 * qb * X * Y;
            q.min_ratio = std::min(q.min_ratio, v / (floor * (X * X + Y * Y)));
        }
    }
    return q;
}

void write_thinfilm_csv(std::ostream& os, const std::vector<ThinFilmRow>& rows) {
    os << "eps,aspect,energy,e_min,rel_err,x2_variation,margin\n" << std::setprecision(17);
    for (const ThinFilmRow& r : rows)
        os << r.eps << ',' << r.aspect << ',' << r.energy << ',' << r.e_min << ',' << r.rel_err << ','
           << r.x2_variation << ',' << r.margin << '\n';
}

}  // namespace aniso
