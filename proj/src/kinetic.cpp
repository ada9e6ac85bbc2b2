#include "aniso/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <iomanip>
#include <ostream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "aniso/errors.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
constexpr double half_pi = boost::math::constants::half_pi<double>();
constexpr double two_pi = boost::math::constants::two_pi<double>();

// Integral over [a, b] (oriented) with 4-point Gauss-Legendre on every piece
// cut by the panel lattice k * panel and the lattices origin + m * step.
template <class F>
double panel_integrate(const F& f, double a, double b, double panel, const std::vector<double>& origins,
                       double step) {
    if (a == b) return 0.0;
    if (b < a) return -panel_integrate(f, b, a, panel, origins, step);
    std::vector<double> cuts{a, b};
    for (double k = std::floor(a / panel) + 1.0; k * panel < b; k += 1.0) cuts.push_back(k * panel);
    if (step > 0.0)
        for (double o : origins)
            for (double m = std::floor((a - o) / step) + 1.0; o + m * step < b; m += 1.0) cuts.push_back(o + m * step);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (hi - lo <= 1e-15 * (1.0 + std::abs(lo))) continue;
        sum += boost::math::quadrature::gauss<double, 4>::integrate(f, lo, hi);
    }
    return sum;
}

double wrap_diff(double theta1, double theta2) { return std::remainder(theta2 - theta1, two_pi); }

// int f over (theta + pi/2, theta' + pi/2) minus over (theta - pi/2, theta' - pi/2),
// both oriented; equals int f D chi when theta' = theta + d.
template <class F>
double arc_integral(const F& f, double theta, double d, double panel, const std::vector<double>& origins,
                    double step) {
    const double up = theta + half_pi, down = theta - half_pi;
    return panel_integrate(f, up, up + d, panel, origins, step) -
           panel_integrate(f, down, down + d, panel, origins, step);
}

// w(t) = (1 - t^2)^3 on |t| < 1 and its derivative.
double bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return q * q * q;
}

double bump_slope(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return -6.0 * t * q * q;
}

}  // namespace

AngularGrid AngularGrid::make(int n_s) {
    if (n_s < 64 || n_s % 4 != 0) throw InvalidArgument("n_s must be >= 64 and divisible by 4");
    AngularGrid ag;
    ag.n_s = n_s;
    ag.ds = two_pi / n_s;
    return ag;
}

std::vector<double> AngularGrid::sample(const std::function<double(double)>& g) const {
    std::vector<double> out(static_cast<std::size_t>(n_s));
    for (int k = 0; k < n_s; ++k) out[static_cast<std::size_t>(k)] = g(node(k));
    return out;
}

double AngularGrid::interpolate(const std::vector<double>& g, double s) const {
    const double u = s / ds - 0.5;
    const double fl = std::floor(u);
    const double frac = u - fl;
    long k = static_cast<long>(fl) % n_s;
    if (k < 0) k += n_s;
    const long k1 = (k + 1) % n_s;
    return (1.0 - frac) * g[static_cast<std::size_t>(k)] + frac * g[static_cast<std::size_t>(k1)];
}

KineticWeight KineticWeight::phi0() {
    return {"phi0",
            [](double s) {
                const double r = std::remainder(s, pi);
                if (r == 0.0 || std::abs(r) == half_pi) return 0.0;
                return r > 0.0 ? 1.0 : -1.0;
            },
            half_pi};
}

KineticWeight KineticWeight::sin2() {
    return {"sin2", [](double s) { return std::sin(2.0 * s); }, 0.0};
}

KineticWeight KineticWeight::custom(std::string name, std::function<double(double)> phi, double breakpoint_spacing) {
    if (!(breakpoint_spacing >= 0.0)) throw InvalidArgument("breakpoint spacing must be >= 0");
    return {std::move(name), std::move(phi), breakpoint_spacing};
}

double KineticWeight::oddness_defect(const AngularGrid& ag) const {
    double m = 0.0;
    for (int k = 0; k < ag.n_s; ++k) m = std::max(m, std::abs(phi(-ag.node(k)) + phi(ag.node(k))));
    return m;
}

double KineticWeight::periodicity_defect(const AngularGrid& ag) const {
    double m = 0.0;
    for (int k = 0; k < ag.n_s; ++k) m = std::max(m, std::abs(phi(ag.node(k) + pi) - phi(ag.node(k))));
    return m;
}

void KineticWeight::validate(const AngularGrid& ag) const {
    if (oddness_defect(ag) > 1e-12) throw InvalidArgument("weight '" + name + "' is not odd");
    if (periodicity_defect(ag) > 1e-12) throw InvalidArgument("weight '" + name + "' is not pi-periodic");
}

EntropyValue entropy_phi_g(const AngularGrid& ag, const std::vector<double>& g, double theta) {
    if (static_cast<int>(g.size()) != ag.n_s) throw InvalidArgument("g must have n_s samples");
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    const double a = theta - half_pi, b = theta + half_pi;
    // Cut the window at the interpolation nodes; on each piece g is linear.
    std::vector<double> cuts{a};
    for (double k = std::floor(a / ag.ds - 0.5) + 1.0; (k + 0.5) * ag.ds < b; k += 1.0) {
        const double s = (k + 0.5) * ag.ds;
        if (s > a) cuts.push_back(s);
    }
    cuts.push_back(b);
    cd acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double p = cuts[k], q = cuts[k + 1];
        const double len = q - p;
        if (len <= 0.0) continue;
        const double gp = ag.interpolate(g, p), gq = ag.interpolate(g, q);
        const double slope = (gq - gp) / len;
        const cd ep = std::exp(I * p), eq = std::exp(I * q);
        acc += gp * (-I) * (eq - ep) + slope * (-I * len * eq + eq - ep);
    }
    EntropyValue out;
    out.Phi = {acc.real(), acc.imag()};
    out.lambda = ag.interpolate(g, theta + half_pi) + ag.interpolate(g, theta - half_pi);
    return out;
}

double entropy_production_residual(const PhaseField2D& phi, const AngularGrid& ag, const std::vector<double>& g) {
    phi.validate();
    const Grid2D& grid = phi.grid;
    const VectorField2D u = phase_to_vector(phi);
    VectorField2D F = VectorField2D::make(grid);
    std::vector<double> lambda(grid.size());
    parallel_rows(grid.ny, [&](int j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            const EntropyValue e = entropy_phi_g(ag, g, phi.phi[k]);
            F.u1[k] = e.Phi[0];
            F.u2[k] = e.Phi[1];
            lambda[k] = e.lambda;
        }
    });
    const ScalarField2D divF = divergence(F);
    const ScalarField2D divU = divergence(u);
    ScalarField2D r = ScalarField2D::make(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        r.mask[k] = divF.mask[k] && divU.mask[k];
        r.values[k] = r.mask[k] ? divF.values[k] - lambda[k] * divU.values[k] : 0.0;
    }
    return l2_norm(r);
}

ThetaEvaluator::ThetaEvaluator(const PhaseField2D& phi) : phi_(phi), div_(aniso::divergence(phase_to_vector(phi))) {}

ScalarField2D ThetaEvaluator::apply(const std::function<double(double)>& g) const {
    ScalarField2D out = div_;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        if (out.mask[k]) out.values[k] = (g(phi_.phi[k] + half_pi) + g(phi_.phi[k] - half_pi)) * div_.values[k];
    return out;
}

ScalarField2D ThetaEvaluator::apply(const AngularGrid& ag, const std::vector<double>& g) const {
    if (static_cast<int>(g.size()) != ag.n_s) throw InvalidArgument("g must have n_s samples");
    return apply([&](double s) { return ag.interpolate(g, s); });
}

double delta_quantity(double theta1, double theta2, const KineticWeight& w, const AngularGrid& ag) {
    const double D = std::abs(wrap_diff(theta1, theta2));
    if (D == 0.0) return 0.0;
    auto K = [&](double r) { return w.phi(r) * std::sin(r); };
    auto f = [&](double r) { return (K(r) - 0.5 * K(r + pi) - 0.5 * K(r - pi)) * (D - std::abs(r)); };
    return panel_integrate(f, -D, D, ag.ds, {0.0, pi, -pi}, w.breakpoint_spacing);
}

double half_circle_moment(double a, double s, const KineticWeight& w, const AngularGrid& ag) {
    auto f = [&](double t) { return w.phi(t - s) * std::sin(t); };
    return panel_integrate(f, a - half_pi, a + half_pi, ag.ds, {s}, w.breakpoint_spacing);
}

CoercivityScan coercivity_scan(const KineticWeight& w, const AngularGrid& ag, int n_angles, bool keep_rows) {
    if (n_angles < 4) throw InvalidArgument("need at least 4 scan angles");
    std::vector<double> table(static_cast<std::size_t>(n_angles));
    parallel_rows(n_angles, [&](int m) {
        table[static_cast<std::size_t>(m)] = delta_quantity(0.0, two_pi * m / n_angles, w, ag);
    });
    CoercivityScan scan;
    scan.c_min = std::numeric_limits<double>::infinity();
    for (int k1 = 0; k1 < n_angles; ++k1)
        for (int k2 = 0; k2 < n_angles; ++k2) {
            if (k1 == k2) continue;
            const double t1 = two_pi * k1 / n_angles, t2 = two_pi * k2 / n_angles;
            const double delta = table[static_cast<std::size_t>(((k2 - k1) % n_angles + n_angles) % n_angles)];
            const double du = std::hypot(std::cos(t2) - std::cos(t1), std::sin(t2) - std::sin(t1));
            const double ratio = delta / (du * du * du);
            if (ratio < scan.c_min) {
                scan.c_min = ratio;
                scan.argmin_theta1 = t1;
                scan.argmin_theta2 = t2;
            }
            if (keep_rows) scan.rows.push_back({t1, t2, delta, ratio});
        }
    return scan;
}

double TestWindow::value(double x, double y) const { return bump((x - cx) / radius) * bump((y - cy) / radius); }

std::array<double, 2> TestWindow::gradient(double x, double y) const {
    const double tx = (x - cx) / radius, ty = (y - cy) / radius;
    return {bump_slope(tx) * bump(ty) / radius, bump(tx) * bump_slope(ty) / radius};
}

CompensationTerms compensation_residual(const PhaseField2D& phi, const KineticWeight& w, const AngularGrid& ag,
                                        double tau, const TestWindow& zeta) {
    phi.validate();
    w.validate(ag);
    const Grid2D& g = phi.grid;
    if (!(zeta.radius > 0.0)) throw InvalidArgument("window radius must be positive");
    const double steps = tau / g.hx;
    const long kt = std::lround(steps);
    if (std::abs(steps - static_cast<double>(kt)) > 1e-9) throw InvalidArgument("tau must be a whole number of x1 steps");
    const double reach = std::abs(tau);
    if (!g.periodic_x && (std::abs(zeta.cx) + zeta.radius + std::max(2.0 * reach, reach + g.hx) > g.lx + 1e-12))
        throw InvalidArgument("support violation: window must stay 2|tau| from the x1 edges");
    if (!g.periodic_y && std::abs(zeta.cy) + zeta.radius > g.ly + 1e-12)
        throw InvalidArgument("support violation: window leaves the domain in x2");

    const ScalarField2D div = divergence(phase_to_vector(phi));
    std::vector<double> row_d(static_cast<std::size_t>(g.ny), 0.0), row_i(row_d), row_a(row_d);
    const int k = static_cast<int>(kt);

    parallel_rows(g.ny, [&](int j) {
        double sd = 0.0, si = 0.0, sa = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            const double z = zeta.value(x, y);
            const std::array<double, 2> gz = zeta.gradient(x, y);
            if (z == 0.0 && gz[0] == 0.0 && gz[1] == 0.0) continue;
            int it, jt, ip, jp, im, jm;
            if (!g.shift(i, j, k, 0, it, jt) || !g.shift(i, j, k + 1, 0, ip, jp) || !g.shift(i, j, k - 1, 0, im, jm))
                throw InvalidArgument("support violation: shifted node outside the grid");
            const std::size_t n0 = g.index(i, j), nt = g.index(it, jt);
            if (!div.mask[n0] || !div.mask[nt]) throw InvalidArgument("support violation: divergence undefined");
            const double th = phi.phi[n0], tht = phi.phi[nt];
            const double d = wrap_diff(th, tht);

            const double dd = (delta_quantity(th, phi.phi[g.index(ip, jp)], w, ag) -
                               delta_quantity(th, phi.phi[g.index(im, jm)], w, ag)) /
                              (2.0 * g.hx);

            // Outer s-integrands have kinks where the t-window ends meet a weight breakpoint.
            const std::vector<double> o1{tht + half_pi}, o2{th + half_pi};
            auto a1f = [&](double s) { return std::cos(s) * half_circle_moment(tht, s, w, ag); };
            auto a2f = [&](double s) { return std::sin(s) * half_circle_moment(th, s, w, ag); };
            const double A1 = d == 0.0 ? 0.0 : arc_integral(a1f, th, d, ag.ds, o1, w.breakpoint_spacing);
            const double A2 = d == 0.0 ? 0.0 : arc_integral(a2f, th, d, ag.ds, o2, w.breakpoint_spacing);

            const double I = div.values[n0] * (half_circle_moment(tht, th + half_pi, w, ag) +
                                               half_circle_moment(tht, th - half_pi, w, ag)) -
                             div.values[nt] * (half_circle_moment(th, tht + half_pi, w, ag) +
                                               half_circle_moment(th, tht - half_pi, w, ag));
            sd += dd * z;
            si += I * z;
            sa += A1 * gz[0] + A2 * gz[1];
        }
        row_d[static_cast<std::size_t>(j)] = sd;
        row_i[static_cast<std::size_t>(j)] = si;
        row_a[static_cast<std::size_t>(j)] = sa;
    });
    CompensationTerms out;
    const double cell = g.hx * g.hy;
    out.dtau_term = ordered_sum(row_d) * cell;
    out.i_term = ordered_sum(row_i) * cell;
    out.a_term = ordered_sum(row_a) * cell;
    out.residual = std::abs(out.dtau_term - out.i_term + out.a_term);
    return out;
}

void write_coercivity_csv(std::ostream& os, const CoercivityScan& scan) {
    os << "theta1,theta2,delta,coercivity_ratio\n" << std::setprecision(17);
    for (const CoercivityRow& r : scan.rows)
        os << r.theta1 << ',' << r.theta2 << ',' << r.delta << ',' << r.ratio << '\n';
}

}  // namespace aniso
