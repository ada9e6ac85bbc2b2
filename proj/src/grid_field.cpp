#include "aniso/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "aniso/errors.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

namespace {

int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

double axis_stagger(double l, double h, bool periodic) {
    // Index coordinate of the origin, measured from node 0.
    const double origin = periodic ? l / h - 0.5 : l / h;
    const double frac = origin - std::floor(origin);
    return std::min(frac, 1.0 - frac);
}

void check_vector_field(const VectorField2D& u) {
    const std::size_t n = u.grid.size();
    if (u.u1.size() != n || u.u2.size() != n || u.mask.size() != n)
        throw InvalidArgument("vector field dimensions do not match its grid");
}

// One-axis derivative of a nodal array at (i, j). Returns false if the stencil
// touches an invalid node.
template <class F>
bool axis_derivative(const Grid2D& g, const Mask& mask, const F& f, int i, int j, bool along_x, double& out) {
    const int n = along_x ? g.nx : g.ny;
    const int k = along_x ? i : j;
    const bool periodic = along_x ? g.periodic_x : g.periodic_y;
    const double h = along_x ? g.hx : g.hy;
    auto at = [&](int kk, double& v) {
        const int ii = along_x ? kk : i;
        const int jj = along_x ? j : kk;
        const std::size_t id = g.index(ii, jj);
        if (!mask[id]) return false;
        v = f(id);
        return true;
    };
    double a = 0, b = 0, c = 0;
    if (periodic) {
        if (!at(wrap(k + 1, n), a) || !at(wrap(k - 1, n), b)) return false;
        out = (a - b) / (2.0 * h);
    } else if (k == 0) {
        if (!at(0, a) || !at(1, b) || !at(2, c)) return false;
        out = (2.0 * (b - a) - 0.5 * (c - a)) / h;
    } else if (k == n - 1) {
        if (!at(n - 1, a) || !at(n - 2, b) || !at(n - 3, c)) return false;
        out = (2.0 * (a - b) - 0.5 * (a - c)) / h;
    } else {
        if (!at(k + 1, a) || !at(k - 1, b)) return false;
        out = (a - b) / (2.0 * h);
    }
    return true;
}

enum class Op { div, curl };

ScalarField2D centred_operator(const VectorField2D& u, Op op) {
    check_vector_field(u);
    const Grid2D& g = u.grid;
    if (g.nx < 3 || g.ny < 3) throw InvalidArgument("centred stencil needs at least 3 nodes per axis");
    ScalarField2D out = ScalarField2D::make(g);
    auto f1 = [&](std::size_t id) { return u.u1[id]; };
    auto f2 = [&](std::size_t id) { return u.u2[id]; };
    parallel_rows(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            double a = 0, b = 0;
            bool ok = u.mask[id] != 0;
            if (op == Op::div) {
                ok = ok && axis_derivative(g, u.mask, f1, i, j, true, a) &&
                     axis_derivative(g, u.mask, f2, i, j, false, b);
                out.values[id] = a + b;
            } else {
                ok = ok && axis_derivative(g, u.mask, f2, i, j, true, a) &&
                     axis_derivative(g, u.mask, f1, i, j, false, b);
                out.values[id] = a - b;
            }
            if (!ok) out.values[id] = 0.0;
            out.mask[id] = ok ? 1 : 0;
        }
    });
    return out;
}

// Corner node indices of cell (ci, cj): a lower-left, b lower-right, c upper-left, d upper-right.
struct CellCorners {
    std::size_t a, b, c, d;
};

CellCorners corners(const Grid2D& g, int ci, int cj) {
    const int i1 = g.periodic_x ? wrap(ci + 1, g.nx) : ci + 1;
    const int j1 = g.periodic_y ? wrap(cj + 1, g.ny) : cj + 1;
    return {g.index(ci, cj), g.index(i1, cj), g.index(ci, j1), g.index(i1, j1)};
}

// Divergence and curl of the P1 interpolant on the two triangles of a cell.
struct TrianglePair {
    double div1, curl1, div2, curl2;
};

TrianglePair triangle_pair(const Grid2D& g, const CellCorners& k, const double* u1, const double* u2, double s) {
    const double ihx = 1.0 / g.hx;
    const double ihy = s / g.hy;
    TrianglePair t{};
    // Lower triangle (a, b, c): forward differences from a.
    const double d1u1 = (u1[k.b] - u1[k.a]) * ihx;
    const double d1u2 = (u2[k.b] - u2[k.a]) * ihx;
    const double d2u1 = (u1[k.c] - u1[k.a]) * ihy;
    const double d2u2 = (u2[k.c] - u2[k.a]) * ihy;
    t.div1 = d1u1 + d2u2;
    t.curl1 = d1u2 - d2u1;
    // Upper triangle (d, c, b): backward differences from d.
    const double e1u1 = (u1[k.d] - u1[k.c]) * ihx;
    const double e1u2 = (u2[k.d] - u2[k.c]) * ihx;
    const double e2u1 = (u1[k.d] - u1[k.b]) * ihy;
    const double e2u2 = (u2[k.d] - u2[k.b]) * ihy;
    t.div2 = e1u1 + e2u2;
    t.curl2 = e1u2 - e2u1;
    return t;
}

ScalarField2D cell_operator(const VectorField2D& u, Op op) {
    check_vector_field(u);
    const Grid2D& g = u.grid;
    ScalarField2D out;
    out.grid = g;
    out.cell_centred = true;
    const int cx = g.cells_x(), cy = g.cells_y();
    out.values.assign(static_cast<std::size_t>(cx) * cy, 0.0);
    out.mask.assign(out.values.size(), 0);
    parallel_rows(cy, [&](int cj) {
        for (int ci = 0; ci < cx; ++ci) {
            const CellCorners k = corners(g, ci, cj);
            const std::size_t id = static_cast<std::size_t>(cj) * cx + ci;
            if (!(u.mask[k.a] && u.mask[k.b] && u.mask[k.c] && u.mask[k.d])) continue;
            const TrianglePair t = triangle_pair(g, k, u.u1.data(), u.u2.data(), 1.0);
            out.values[id] = op == Op::div ? 0.5 * (t.div1 + t.div2) : 0.5 * (t.curl1 + t.curl2);
            out.mask[id] = 1;
        }
    });
    return out;
}

void check_scheme(const EnergyScheme& s) {
    if (!(s.eps >= 0.0) || !std::isfinite(s.eps)) throw InvalidArgument("eps must be finite and >= 0");
    if (!(s.y_scale > 0.0) || !std::isfinite(s.y_scale)) throw InvalidArgument("y_scale must be positive");
    if (!(s.prefactor > 0.0)) throw InvalidArgument("prefactor must be positive");
}

}  // namespace

Grid2D Grid2D::make(int nx, int ny, double lx, double ly, bool periodic_x, bool periodic_y) {
    if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 nodes per axis");
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw InvalidArgument("grid half-widths must be positive and finite");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.periodic_x = periodic_x;
    g.periodic_y = periodic_y;
    g.hx = periodic_x ? 2.0 * lx / nx : 2.0 * lx / (nx - 1);
    g.hy = periodic_y ? 2.0 * ly / ny : 2.0 * ly / (ny - 1);
    return g;
}

double Grid2D::x(int i) const { return -lx + (periodic_x ? (i + 0.5) * hx : i * hx); }

double Grid2D::y(int j) const { return -ly + (periodic_y ? (j + 0.5) * hy : j * hy); }

double Grid2D::node_weight(int i, int j) const {
    double wx = hx, wy = hy;
    if (!periodic_x && (i == 0 || i == nx - 1)) wx *= 0.5;
    if (!periodic_y && (j == 0 || j == ny - 1)) wy *= 0.5;
    return wx * wy;
}

double Grid2D::stagger_x() const { return axis_stagger(lx, hx, periodic_x); }

double Grid2D::stagger_y() const { return axis_stagger(ly, hy, periodic_y); }

bool Grid2D::shift(int i, int j, int di, int dj, int& oi, int& oj) const {
    oi = i + di;
    oj = j + dj;
    if (periodic_x) oi = wrap(oi, nx);
    else if (oi < 0 || oi >= nx) return false;
    if (periodic_y) oj = wrap(oj, ny);
    else if (oj < 0 || oj >= ny) return false;
    return true;
}

Grid2D grid_for(const BoundaryCondition& bc, int nx, int ny, double lx, double ly) {
    switch (bc.mode) {
        case BcMode::free: return Grid2D::make(nx, ny, lx, ly, false, false);
        case BcMode::dirichlet_x1_periodic_x2: return Grid2D::make(nx, ny, lx, ly, false, true);
        case BcMode::fully_periodic: return Grid2D::make(nx, ny, lx, ly, true, true);
    }
    throw InvalidArgument("unknown boundary-condition mode");
}

PhaseField2D PhaseField2D::make(const Grid2D& grid, const BoundaryCondition& bc, double fill) {
    PhaseField2D p;
    p.grid = grid;
    p.bc = bc;
    p.phi.assign(grid.size(), fill);
    p.enforce_bc();
    return p;
}

bool PhaseField2D::is_fixed(int i, int /*j*/) const {
    return bc.mode == BcMode::dirichlet_x1_periodic_x2 && (i == 0 || i == grid.nx - 1);
}

void PhaseField2D::enforce_bc() {
    if (bc.mode != BcMode::dirichlet_x1_periodic_x2) return;
    for (int j = 0; j < grid.ny; ++j) {
        at(0, j) = bc.phi_minus;
        at(grid.nx - 1, j) = bc.phi_plus;
    }
}

void PhaseField2D::validate() const {
    if (phi.size() != grid.size()) throw InvalidArgument("phase field dimensions do not match its grid");
    if (!std::isfinite(bc.phi_minus) || !std::isfinite(bc.phi_plus))
        throw InvalidArgument("boundary phases must be finite");
    const Grid2D expect = grid_for(bc, grid.nx, grid.ny, grid.lx, grid.ly);
    if (expect.periodic_x != grid.periodic_x || expect.periodic_y != grid.periodic_y)
        throw InvalidArgument("grid periodicity does not match the boundary-condition mode");
    for (double v : phi)
        if (!std::isfinite(v)) throw InvalidArgument("phase field contains non-finite values");
    if (bc.mode == BcMode::dirichlet_x1_periodic_x2) {
        for (int j = 0; j < grid.ny; ++j)
            if (at(0, j) != bc.phi_minus || at(grid.nx - 1, j) != bc.phi_plus)
                throw InvalidArgument("Dirichlet values at x1 = -lx/+lx do not match phi_minus/phi_plus (row " +
                                      std::to_string(j) + ")");
    }
}

VectorField2D VectorField2D::make(const Grid2D& grid, double u1, double u2) {
    VectorField2D v;
    v.grid = grid;
    v.u1.assign(grid.size(), u1);
    v.u2.assign(grid.size(), u2);
    v.mask.assign(grid.size(), 1);
    return v;
}

ScalarField2D ScalarField2D::make(const Grid2D& grid, double fill) {
    ScalarField2D f;
    f.grid = grid;
    f.values.assign(grid.size(), fill);
    f.mask.assign(grid.size(), 1);
    return f;
}

double offset_length(const Grid2D& grid, Offset h) { return std::hypot(h.di * grid.hx, h.dj * grid.hy); }

VectorField2D phase_to_vector(const PhaseField2D& phi) {
    if (phi.phi.size() != phi.grid.size()) throw InvalidArgument("phase field dimensions do not match its grid");
    VectorField2D u = VectorField2D::make(phi.grid);
    for (std::size_t k = 0; k < phi.phi.size(); ++k) {
        u.u1[k] = std::cos(phi.phi[k]);
        u.u2[k] = std::sin(phi.phi[k]);
    }
    u.unit = true;
    return u;
}

double max_unit_defect(const VectorField2D& u) {
    check_vector_field(u);
    double m = 0.0;
    for (std::size_t k = 0; k < u.u1.size(); ++k)
        if (u.mask[k]) m = std::max(m, std::abs(u.u1[k] * u.u1[k] + u.u2[k] * u.u2[k] - 1.0));
    return m;
}

ScalarField2D divergence(const VectorField2D& u) { return centred_operator(u, Op::div); }

ScalarField2D curl(const VectorField2D& u) { return centred_operator(u, Op::curl); }

ScalarField2D cell_divergence(const VectorField2D& u) { return cell_operator(u, Op::div); }

ScalarField2D cell_curl(const VectorField2D& u) { return cell_operator(u, Op::curl); }

EnergyBreakdown scheme_energy(const VectorField2D& u, const EnergyScheme& s) {
    check_vector_field(u);
    check_scheme(s);
    const Grid2D& g = u.grid;
    const int cx = g.cells_x(), cy = g.cells_y();
    std::vector<double> dsum(static_cast<std::size_t>(cy), 0.0), csum(static_cast<std::size_t>(cy), 0.0);
    parallel_rows(cy, [&](int cj) {
        double dd = 0.0, cc = 0.0;
        for (int ci = 0; ci < cx; ++ci) {
            const CellCorners k = corners(g, ci, cj);
            const TrianglePair t = triangle_pair(g, k, u.u1.data(), u.u2.data(), s.y_scale);
            if (u.mask[k.a] && u.mask[k.b] && u.mask[k.c]) {
                dd += t.div1 * t.div1;
                cc += t.curl1 * t.curl1;
            }
            if (u.mask[k.d] && u.mask[k.b] && u.mask[k.c]) {
                dd += t.div2 * t.div2;
                cc += t.curl2 * t.curl2;
            }
        }
        dsum[static_cast<std::size_t>(cj)] = dd;
        csum[static_cast<std::size_t>(cj)] = cc;
    });
    const double tri_area = 0.5 * g.hx * g.hy;
    EnergyBreakdown e;
    e.div_part = s.prefactor * tri_area * ordered_sum(dsum);
    e.curl_part = s.prefactor * tri_area * ordered_sum(csum);
    e.total = e.div_part + s.eps * e.curl_part;
    if (!std::isfinite(e.total)) throw NumericalFailure("energy is not finite");
    return e;
}

EnergyBreakdown energy(const VectorField2D& u, double eps, bool allow_non_unit) {
    if (!u.unit && !allow_non_unit) throw InvalidArgument("energy expects a unit field (or an explicit override)");
    return scheme_energy(u, EnergyScheme{eps, 1.0, 1.0});
}

ScalarField2D scheme_gradient(const PhaseField2D& phi, const EnergyScheme& s) {
    check_scheme(s);
    if (phi.phi.size() != phi.grid.size()) throw InvalidArgument("phase field dimensions do not match its grid");
    const Grid2D& g = phi.grid;
    const VectorField2D u = phase_to_vector(phi);
    const int cx = g.cells_x(), cy = g.cells_y();
    const std::size_t ncell = static_cast<std::size_t>(cx) * cy;
    // Per-triangle multipliers 2 P |T| div and 2 P |T| eps curl.
    std::vector<double> D1(ncell), C1(ncell), D2(ncell), C2(ncell);
    const double w = 2.0 * s.prefactor * 0.5 * g.hx * g.hy;
    parallel_rows(cy, [&](int cj) {
        for (int ci = 0; ci < cx; ++ci) {
            const std::size_t id = static_cast<std::size_t>(cj) * cx + ci;
            const TrianglePair t = triangle_pair(g, corners(g, ci, cj), u.u1.data(), u.u2.data(), s.y_scale);
            D1[id] = w * t.div1;
            C1[id] = w * s.eps * t.curl1;
            D2[id] = w * t.div2;
            C2[id] = w * s.eps * t.curl2;
        }
    });
    const double ihx = 1.0 / g.hx;
    const double ihy = s.y_scale / g.hy;
    ScalarField2D out = ScalarField2D::make(g);
    auto cell_id = [&](int ci, int cj, std::size_t& id) {
        if (g.periodic_x) ci = wrap(ci, g.nx);
        else if (ci < 0 || ci >= cx) return false;
        if (g.periodic_y) cj = wrap(cj, g.ny);
        else if (cj < 0 || cj >= cy) return false;
        id = static_cast<std::size_t>(cj) * cx + ci;
        return true;
    };
    parallel_rows(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t node = g.index(i, j);
            if (phi.is_fixed(i, j)) {
                out.values[node] = 0.0;
                continue;
            }
            double g1 = 0.0, g2 = 0.0;  // dE/du1, dE/du2
            std::size_t id;
            // Node as corner a of the lower triangle of cell (i, j).
            if (cell_id(i, j, id)) {
                g1 += D1[id] * (-ihx) + C1[id] * ihy;
                g2 += D1[id] * (-ihy) + C1[id] * (-ihx);
            }
            // Corner b of the lower triangle of cell (i-1, j).
            if (cell_id(i - 1, j, id)) {
                g1 += D1[id] * ihx;
                g2 += C1[id] * ihx;
            }
            // Corner c of the lower triangle of cell (i, j-1).
            if (cell_id(i, j - 1, id)) {
                g1 += C1[id] * (-ihy);
                g2 += D1[id] * ihy;
            }
            // Corner d of the upper triangle of cell (i-1, j-1).
            if (cell_id(i - 1, j - 1, id)) {
                g1 += D2[id] * ihx + C2[id] * (-ihy);
                g2 += D2[id] * ihy + C2[id] * ihx;
            }
            // Corner c of the upper triangle of cell (i, j-1).
            if (cell_id(i, j - 1, id)) {
                g1 += D2[id] * (-ihx);
                g2 += C2[id] * (-ihx);
            }
            // Corner b of the upper triangle of cell (i-1, j).
            if (cell_id(i - 1, j, id)) {
                g1 += C2[id] * ihy;
                g2 += D2[id] * (-ihy);
            }
            out.values[node] = -u.u2[node] * g1 + u.u1[node] * g2;
        }
    });
    for (double v : out.values)
        if (!std::isfinite(v)) throw NumericalFailure("energy gradient is not finite");
    return out;
}

ScalarField2D energy_gradient(const PhaseField2D& phi, double eps) {
    return scheme_gradient(phi, EnergyScheme{eps, 1.0, 1.0});
}

Offset snap_offset(const Grid2D& grid, double h1, double h2) {
    const double a = h1 / grid.hx, b = h2 / grid.hy;
    const double ra = std::round(a), rb = std::round(b);
    if (std::abs(a - ra) > 1e-9 * std::max(1.0, std::abs(a)) || std::abs(b - rb) > 1e-9 * std::max(1.0, std::abs(b)))
        throw InvalidArgument("offset is not a multiple of the grid spacing");
    return {static_cast<int>(ra), static_cast<int>(rb)};
}

VectorField2D finite_difference(const VectorField2D& u, Offset h) {
    check_vector_field(u);
    const Grid2D& g = u.grid;
    if ((!g.periodic_x && std::abs(h.di) >= g.nx - 1 && h.di != 0) ||
        (!g.periodic_y && std::abs(h.dj) >= g.ny - 1 && h.dj != 0))
        throw InvalidArgument("offset is not smaller than the domain extent");
    VectorField2D d = VectorField2D::make(g);
    d.unit = false;
    parallel_rows(g.ny, [&](int j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            int oi, oj;
            const bool ok = u.mask[id] && g.shift(i, j, h.di, h.dj, oi, oj) && u.mask[g.index(oi, oj)];
            d.mask[id] = ok ? 1 : 0;
            if (!ok) continue;
            const std::size_t od = g.index(oi, oj);
            d.u1[id] = u.u1[od] - u.u1[id];
            d.u2[id] = u.u2[od] - u.u2[id];
        }
    });
    return d;
}

VectorField2D finite_difference(const VectorField2D& u, double h1, double h2) {
    return finite_difference(u, snap_offset(u.grid, h1, h2));
}

double l2_norm(const ScalarField2D& f) {
    if (f.cell_centred) {
        double s = 0.0;
        for (std::size_t k = 0; k < f.values.size(); ++k)
            if (f.mask[k]) s += f.values[k] * f.values[k];
        return std::sqrt(s * f.grid.hx * f.grid.hy);
    }
    const Grid2D& g = f.grid;
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            if (f.mask[id]) s += g.node_weight(i, j) * f.values[id] * f.values[id];
        }
    return std::sqrt(s);
}

TraceProfile trace_profile(const VectorField2D& u, std::span<const double> deltas) {
    check_vector_field(u);
    const Grid2D& g = u.grid;
    if (g.periodic_x && g.periodic_y) throw InvalidArgument("fully periodic domain has no boundary");
    TraceProfile tp;
    tp.deltas.assign(deltas.begin(), deltas.end());

    // Boundary nodes (i, j) with inward unit step (si, sj).
    struct Site {
        int i, j, si, sj;
        double w;
    };
    std::vector<Site> sites;
    if (!g.periodic_x) {
        const int j0 = g.periodic_y ? 0 : 1, j1 = g.periodic_y ? g.ny : g.ny - 1;
        for (int j = j0; j < j1; ++j) sites.push_back({0, j, 1, 0, g.hy});
        for (int j = j0; j < j1; ++j) sites.push_back({g.nx - 1, j, -1, 0, g.hy});
    }
    if (!g.periodic_y) {
        const int i0 = g.periodic_x ? 0 : 1, i1 = g.periodic_x ? g.nx : g.nx - 1;
        for (int i = i0; i < i1; ++i) sites.push_back({i, 0, 0, 1, g.hx});
        for (int i = i0; i < i1; ++i) sites.push_back({i, g.ny - 1, 0, -1, g.hx});
    }
    for (const Site& s : sites) tp.arc_weight.push_back(s.w);

    std::vector<Mask> valid;
    for (double delta : deltas) {
        if (!(delta >= 0.0)) throw InvalidArgument("inset distances must be non-negative");
        if ((!g.periodic_x && delta > g.lx) || (!g.periodic_y && delta > g.ly))
            throw InvalidArgument("inset distance exceeds half the domain width");
        std::vector<double> p1, p2;
        Mask ok;
        for (const Site& s : sites) {
            const double h = s.si != 0 ? g.hx : g.hy;
            const double steps = delta / h;
            const int k = static_cast<int>(std::lround(steps));
            if (std::abs(steps - k) > 1e-9 * std::max(1.0, steps))
                throw InvalidArgument("inset distance is not a multiple of the grid spacing");
            const std::size_t id = g.index(s.i + k * s.si, s.j + k * s.sj);
            p1.push_back(u.u1[id]);
            p2.push_back(u.u2[id]);
            ok.push_back(u.mask[id]);
        }
        tp.u1.push_back(std::move(p1));
        tp.u2.push_back(std::move(p2));
        valid.push_back(std::move(ok));
    }
    for (std::size_t k = 0; k + 1 < tp.u1.size(); ++k) {
        double d = 0.0;
        for (std::size_t m = 0; m < sites.size(); ++m)
            if (valid[k][m] && valid[k + 1][m])
                d += tp.arc_weight[m] * std::hypot(tp.u1[k][m] - tp.u1[k + 1][m], tp.u2[k][m] - tp.u2[k + 1][m]);
        tp.successive_l1.push_back(d);
    }
    return tp;
}

void write_csv(std::ostream& os, const VectorField2D& u) {
    check_vector_field(u);
    const Grid2D& g = u.grid;
    os << "x,y,u1,u2,mask\n" << std::setprecision(17);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            os << g.x(i) << ',' << g.y(j) << ',' << u.u1[id] << ',' << u.u2[id] << ',' << int(u.mask[id]) << '\n';
        }
}

void write_csv(std::ostream& os, const ScalarField2D& f) {
    const Grid2D& g = f.grid;
    os << "x,y,value\n" << std::setprecision(17);
    if (f.cell_centred) {
        const int cx = g.cells_x(), cy = g.cells_y();
        for (int cj = 0; cj < cy; ++cj)
            for (int ci = 0; ci < cx; ++ci) {
                const std::size_t id = static_cast<std::size_t>(cj) * cx + ci;
                if (f.mask[id]) os << g.x(ci) + 0.5 * g.hx << ',' << g.y(cj) + 0.5 * g.hy << ',' << f.values[id] << '\n';
            }
        return;
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            if (f.mask[id]) os << g.x(i) << ',' << g.y(j) << ',' << f.values[id] << '\n';
        }
}

}  // namespace aniso
