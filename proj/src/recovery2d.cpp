#include "aniso/recovery2d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "aniso/besov.hpp"
#include "aniso/errors.hpp"
#include "aniso/exact1d.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

namespace {

double spacing(const Grid2D& g) { return std::max(g.hx, g.hy); }

void check_delta(const Grid2D& g, double delta) {
    if (!std::isfinite(delta) || delta < 2.0 * spacing(g) * (1.0 - 1e-12))
        throw InvalidArgument("delta must be at least 2 grid spacings");
}

// Grid steps y with |y| < delta, row-major in (dj, di).
std::vector<Offset> ball_offsets(const Grid2D& g, double delta, bool with_zero) {
    std::vector<Offset> out;
    const int mi = static_cast<int>(std::floor(delta / g.hx));
    const int mj = static_cast<int>(std::floor(delta / g.hy));
    for (int dj = -mj; dj <= mj; ++dj)
        for (int di = -mi; di <= mi; ++di) {
            if (!with_zero && di == 0 && dj == 0) continue;
            if (std::hypot(di * g.hx, dj * g.hy) < delta) out.push_back({di, dj});
        }
    return out;
}

// Source column of output column i is i - di. Each segment [i0, i1) maps i to i + shift.
struct Segment {
    int i0, i1, shift;
};

std::vector<Segment> column_segments(const Grid2D& g, int di) {
    const int n = g.nx;
    if (!g.periodic_x) {
        const int i0 = std::max(0, di), i1 = std::min(n, n + di);
        if (i0 >= i1) return {};
        return {{i0, i1, -di}};
    }
    const int d = ((di % n) + n) % n;
    std::vector<Segment> s;
    if (d < n) s.push_back({d, n, -d});
    if (d > 0) s.push_back({0, d, n - d});
    return s;
}

// Source row of output row j, or -1 if it leaves the grid.
int source_row(const Grid2D& g, int j, int dj) {
    const int js = j - dj;
    if (g.periodic_y) return ((js % g.ny) + g.ny) % g.ny;
    return (js < 0 || js >= g.ny) ? -1 : js;
}

// body(i, src) for every output column i of row j whose source under offset k exists.
template <class F>
void for_sources(const Grid2D& g, const std::vector<std::vector<Segment>>& segs, const Mollifier& rho, int j,
                 std::size_t k, F&& body) {
    const int js = source_row(g, j, rho.offsets[k].dj);
    if (js < 0) return;
    const std::size_t base = g.index(0, js);
    for (const Segment& s : segs[k])
        for (int i = s.i0; i < s.i1; ++i) body(i, base + static_cast<std::size_t>(i + s.shift));
}

std::vector<std::vector<Segment>> all_segments(const Grid2D& g, const Mollifier& rho) {
    std::vector<std::vector<Segment>> segs;
    for (Offset o : rho.offsets) segs.push_back(column_segments(g, o.di));
    return segs;
}

}  // namespace

Mollifier Mollifier::make(const Grid2D& grid, double delta) {
    check_delta(grid, delta);
    Mollifier m;
    m.delta = delta;
    for (Offset o : ball_offsets(grid, delta, true))
        if (o.di != 0 || o.dj != 0) m.offsets.push_back(o);
    double total = 1.0;
    for (Offset o : m.offsets) {
        const double r2 = (o.di * grid.hx * o.di * grid.hx + o.dj * grid.hy * o.dj * grid.hy) / (delta * delta);
        m.weights.push_back(std::pow(1.0 - r2, 3));
        total += m.weights.back();
    }
    // The centre goes last and takes 1 minus the running sum of the others; that
    // sum lies in [1/2, 1], so the subtraction and the final addition are exact.
    double rest = 0.0;
    for (double& w : m.weights) {
        w /= total;
        rest += w;
    }
    m.offsets.push_back({0, 0});
    m.weights.push_back(1.0 - rest);
    if (m.weight_sum() != 1.0) throw NumericalFailure("could not normalise mollifier weights");
    return m;
}

double Mollifier::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

VectorField2D mollify(const VectorField2D& u, const Mollifier& rho) {
    const Grid2D& g = u.grid;
    const auto segs = all_segments(g, rho);
    const std::size_t nk = rho.offsets.size();
    VectorField2D out = VectorField2D::make(g);
    std::vector<int> alive(static_cast<std::size_t>(g.ny), 0);
    parallel_rows(g.ny, [&](int j) {
        std::vector<double> a1(static_cast<std::size_t>(g.nx), 0.0), a2(a1.size(), 0.0);
        std::vector<int> cnt(a1.size(), 0);
        for (std::size_t k = 0; k < nk; ++k) {
            const double w = rho.weights[k];
            for_sources(g, segs, rho, j, k, [&](int i, std::size_t s) {
                a1[static_cast<std::size_t>(i)] += w * u.u1[s];
                a2[static_cast<std::size_t>(i)] += w * u.u2[s];
                cnt[static_cast<std::size_t>(i)] += u.mask[s] ? 1 : 0;
            });
        }
        int live = 0;
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            const bool ok = cnt[static_cast<std::size_t>(i)] == static_cast<int>(nk);
            out.mask[id] = ok ? 1 : 0;
            out.u1[id] = ok ? a1[static_cast<std::size_t>(i)] : 0.0;
            out.u2[id] = ok ? a2[static_cast<std::size_t>(i)] : 0.0;
            live += ok ? 1 : 0;
        }
        alive[static_cast<std::size_t>(j)] = live;
    });
    int total = 0;
    for (int a : alive) total += a;
    if (total == 0) throw InvalidArgument("delta too large for the domain: no node survives mollification");
    return out;
}

VectorField2D mollify(const VectorField2D& u, double delta) { return mollify(u, Mollifier::make(u.grid, delta)); }

ModulusMin min_modulus(const VectorField2D& u) {
    ModulusMin m;
    m.value = INFINITY;
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            const std::size_t k = u.grid.index(i, j);
            if (!u.mask[k]) continue;
            const double r = std::hypot(u.u1[k], u.u2[k]);
            if (r < m.value) m = {r, i, j};
        }
    return m;
}

namespace {

void require_projectable(const VectorField2D& ud) {
    const ModulusMin m = min_modulus(ud);
    if (m.i >= 0 && m.value < 0.5)
        throw ProjectionRefused("projection refused: |u_delta| = " + std::to_string(m.value) + " < 1/2 at node (" +
                                    std::to_string(m.i) + ", " + std::to_string(m.j) + ")",
                                m.i, m.j, m.value);
}

}  // namespace

VectorField2D project(const VectorField2D& ud) {
    require_projectable(ud);
    VectorField2D v = ud;
    v.unit = true;
    for (std::size_t k = 0; k < v.u1.size(); ++k) {
        if (!v.mask[k]) continue;
        const double r = std::hypot(ud.u1[k], ud.u2[k]);
        v.u1[k] = ud.u1[k] / r;
        v.u2[k] = ud.u2[k] / r;
    }
    return v;
}

double commutator_check(const VectorField2D& u, double delta) {
    if (max_unit_defect(u) > 1e-12) throw InvalidArgument("commutator check needs a unit field");
    const Mollifier rho = Mollifier::make(u.grid, delta);
    const VectorField2D m = mollify(u, rho);
    const Grid2D& g = u.grid;
    const auto segs = all_segments(g, rho);
    std::vector<double> worst(static_cast<std::size_t>(g.ny), 0.0);
    parallel_rows(g.ny, [&](int j) {
        std::vector<double> rhs(static_cast<std::size_t>(g.nx), 0.0);
        const std::size_t row = g.index(0, j);
        for (std::size_t k = 0; k < rho.offsets.size(); ++k) {
            const double w = rho.weights[k];
            for_sources(g, segs, rho, j, k, [&](int i, std::size_t s) {
                const double d1 = u.u1[s] - m.u1[row + static_cast<std::size_t>(i)];
                const double d2 = u.u2[s] - m.u2[row + static_cast<std::size_t>(i)];
                rhs[static_cast<std::size_t>(i)] += w * (d1 * d1 + d2 * d2);
            });
        }
        double r = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = row + static_cast<std::size_t>(i);
            if (!m.mask[id]) continue;
            const double lhs = 1.0 - (m.u1[id] * m.u1[id] + m.u2[id] * m.u2[id]);
            r = std::max(r, std::abs(lhs - rhs[static_cast<std::size_t>(i)]));
        }
        worst[static_cast<std::size_t>(j)] = r;
    });
    return *std::max_element(worst.begin(), worst.end());
}

Gradient2D gradient(const ScalarField2D& f) {
    if (f.cell_centred) throw InvalidArgument("gradient needs a node-sampled scalar");
    VectorField2D a = VectorField2D::make(f.grid), b = VectorField2D::make(f.grid);
    a.u1 = f.values;
    a.mask = f.mask;
    b.u2 = f.values;
    b.mask = f.mask;
    return {divergence(a), divergence(b)};
}

ScalarField2D div_projection(const VectorField2D& ud) {
    require_projectable(ud);
    const Grid2D& g = ud.grid;
    ScalarField2D q = ScalarField2D::make(g);
    q.mask = ud.mask;
    for (std::size_t k = 0; k < q.values.size(); ++k) q.values[k] = ud.u1[k] * ud.u1[k] + ud.u2[k] * ud.u2[k];
    const Gradient2D gq = gradient(q);
    ScalarField2D out = divergence(ud);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.mask[k] = out.mask[k] && gq.d1.mask[k] && gq.d2.mask[k];
        if (!out.mask[k]) {
            out.values[k] = 0.0;
            continue;
        }
        const double r = std::sqrt(q.values[k]);
        const double dot = ud.u1[k] * gq.d1.values[k] + ud.u2[k] * gq.d2.values[k];
        out.values[k] = out.values[k] / r - dot / (2.0 * r * r * r);
    }
    return out;
}

double vmo_modulus(const VectorField2D& u, double delta, int max_offsets, int* used) {
    check_delta(u.grid, delta);
    std::vector<Offset> all = ball_offsets(u.grid, delta, false);
    std::vector<Offset> hs = all;
    for (int stride = 2; max_offsets > 0 && static_cast<int>(hs.size()) > max_offsets; ++stride) {
        hs.clear();
        for (Offset h : all)
            if (h.di % stride == 0 && h.dj % stride == 0) hs.push_back(h);
    }
    if (hs.empty()) throw InvalidArgument("no offsets left in the ball");
    double acc = 0.0;
    for (Offset h : hs) {
        const double n = lp_difference_norm(u, h, 4.0, 0.0);
        acc += n * n * n * n;
    }
    if (used) *used = static_cast<int>(hs.size());
    return acc / static_cast<double>(hs.size()) / (delta * delta);
}

double dirichlet_integral(const VectorField2D& v) {
    const Grid2D& g = v.grid;
    ScalarField2D a = ScalarField2D::make(g), b = ScalarField2D::make(g);
    a.values = v.u1;
    a.mask = v.mask;
    b.values = v.u2;
    b.mask = v.mask;
    const Gradient2D ga = gradient(a), gb = gradient(b);
    std::vector<double> rows(static_cast<std::size_t>(g.ny), 0.0);
    parallel_rows(g.ny, [&](int j) {
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!(ga.d1.mask[k] && ga.d2.mask[k] && gb.d1.mask[k] && gb.d2.mask[k])) continue;
            const double e = ga.d1.values[k] * ga.d1.values[k] + ga.d2.values[k] * ga.d2.values[k] +
                             gb.d1.values[k] * gb.d1.values[k] + gb.d2.values[k] * gb.d2.values[k];
            s += g.node_weight(i, j) * e;
        }
        rows[static_cast<std::size_t>(j)] = s;
    });
    return ordered_sum(rows);
}

RecoveryCurve recovery_energy_curve(const VectorField2D& u, const std::vector<double>& eps_ladder,
                                    int vmo_max_offsets) {
    if (eps_ladder.empty()) throw InvalidArgument("empty eps ladder");
    RecoveryCurve curve;
    const double target = energy(u, 0.0).div_part;
    for (double eps : eps_ladder) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be positive and finite");
        RecoveryRow r;
        r.eps = eps;
        r.delta = std::max(eps, 2.0 * spacing(u.grid));
        const VectorField2D v = project(mollify(u, r.delta));
        const EnergyBreakdown e = energy(v, eps);
        r.div_part = e.div_part;
        r.curl_part = eps * e.curl_part;
        r.total = e.total;
        r.target = target;
        r.dirichlet_diag = r.delta * dirichlet_integral(v);
        r.vmo = vmo_modulus(u, r.delta, vmo_max_offsets);
        curve.rows.push_back(r);
    }
    for (std::size_t k = 1; k < curve.rows.size(); ++k)
        if (curve.rows[k].delta < curve.rows[k - 1].delta && !(curve.rows[k].vmo < curve.rows[k - 1].vmo))
            curve.warnings.push_back("VMO modulus does not decrease from delta = " +
                                     std::to_string(curve.rows[k - 1].delta) + " to " +
                                     std::to_string(curve.rows[k].delta));
    return curve;
}

VectorField2D embed_profile(const Grid2D& grid, double eps, double phi_minus, double phi_plus) {
    const Profile1D p = minimal_energy_1d(eps, phi_minus, phi_plus, -grid.lx, grid.lx);
    std::vector<double> xs(static_cast<std::size_t>(grid.nx));
    for (int i = 0; i < grid.nx; ++i) xs[static_cast<std::size_t>(i)] = grid.x(i);
    const std::vector<double> phi = minimizer_profile_1d(p, xs);
    VectorField2D u = VectorField2D::make(grid);
    u.unit = true;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            u.u1[grid.index(i, j)] = std::cos(phi[static_cast<std::size_t>(i)]);
            u.u2[grid.index(i, j)] = std::sin(phi[static_cast<std::size_t>(i)]);
        }
    return u;
}

void write_recovery_csv(std::ostream& os, const std::vector<RecoveryRow>& rows) {
    os << "eps,delta,div_part,curl_part,total,target,dirichlet_diag\n" << std::setprecision(17);
    for (const RecoveryRow& r : rows)
        os << r.eps << ',' << r.delta << ',' << r.div_part << ',' << r.curl_part << ',' << r.total << ','
           << r.target << ',' << r.dirichlet_diag << '\n';
}

}  // namespace aniso
