#include "aniso/besov.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "aniso/errors.hpp"
#include "aniso/parallel.hpp"

namespace aniso {

namespace {

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be finite and >= 1");
}

// Node lies in the margin-inset domain.
bool inside(const Grid2D& g, int i, int j, double margin) {
    const double tol = 1e-12 * (g.lx + g.ly);
    if (!g.periodic_x && std::abs(g.x(i)) > g.lx - margin + tol) return false;
    if (!g.periodic_y && std::abs(g.y(j)) > g.ly - margin + tol) return false;
    return true;
}

double pow_p(double r, double p) {
    if (p == 2.0) return r * r;
    if (p == 3.0) return r * r * r;
    if (p == 4.0) return (r * r) * (r * r);
    return std::pow(r, p);
}

}  // namespace

std::vector<Offset> dyadic_offsets(const Grid2D& g, int kmin, int kmax, const std::vector<Direction>& dirs) {
    std::vector<Offset> out;
    const double L = 2.0 * g.lx;
    for (Direction d : dirs)
        for (int k = kmin; k <= kmax; ++k) {
            const double len = L / std::ldexp(1.0, k);
            Offset h;
            switch (d) {
                case Direction::e1: h = {static_cast<int>(std::lround(len / g.hx)), 0}; break;
                case Direction::e2: h = {0, static_cast<int>(std::lround(len / g.hy))}; break;
                case Direction::diagonal:
                    h = {static_cast<int>(std::lround(len / (std::sqrt(2.0) * g.hx))),
                         static_cast<int>(std::lround(len / (std::sqrt(2.0) * g.hy)))};
                    break;
            }
            if (h.di == 0 && h.dj == 0) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](Offset o) { return o.di == h.di && o.dj == h.dj; });
            if (!dup) out.push_back(h);
        }
    return out;
}

double lp_difference_norm(const VectorField2D& u, Offset h, double p, double margin) {
    check_p(p);
    if (!(margin >= 0.0)) throw InvalidArgument("margin must be >= 0");
    const Grid2D& g = u.grid;
    const VectorField2D d = finite_difference(u, h);
    std::vector<double> rows(static_cast<std::size_t>(g.ny), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(g.ny), 0);
    parallel_rows(g.ny, [&](int j) {
        double acc = 0.0;
        int cnt = 0;
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t id = g.index(i, j);
            if (!d.mask[id] || !inside(g, i, j, margin)) continue;
            int oi, oj;
            g.shift(i, j, h.di, h.dj, oi, oj);
            if (!inside(g, oi, oj, margin)) continue;
            acc += pow_p(std::hypot(d.u1[id], d.u2[id]), p);
            ++cnt;
        }
        rows[static_cast<std::size_t>(j)] = acc;
        counts[static_cast<std::size_t>(j)] = cnt;
    });
    int total = 0;
    for (int c : counts) total += c;
    if (total == 0) throw InvalidArgument("empty intersection of the inset domain with its translate");
    return std::pow(ordered_sum(rows) * g.hx * g.hy, 1.0 / p);
}

RegularityScan regularity_scan(const VectorField2D& u, double s, double p, const std::vector<Offset>& offsets,
                               double margin) {
    RegularityScan scan;
    scan.p = p;
    scan.s = s;
    scan.margin = margin;
    scan.offsets = offsets;
    for (Offset h : offsets) {
        if (h.di == 0 && h.dj == 0) throw InvalidArgument("offsets must be nonzero");
        const double len = offset_length(u.grid, h);
        const double n = lp_difference_norm(u, h, p, margin);
        scan.lengths.push_back(len);
        scan.norms.push_back(n);
        scan.quotients.push_back(n / std::pow(len, s));
        scan.seminorm_lower_bound = std::max(scan.seminorm_lower_bound, scan.quotients.back());
    }
    return scan;
}

double besov_seminorm(const VectorField2D& u, double s, double p, const std::vector<Offset>& offsets,
                      double margin) {
    return regularity_scan(u, s, p, offsets, margin).seminorm_lower_bound;
}

double default_margin(const Grid2D& g, const std::vector<Offset>& offsets) {
    double m = 0.0;
    for (Offset h : offsets) m = std::max(m, offset_length(g, h));
    return 2.0 * m;
}

double gagliardo_seminorm(const VectorField2D& u, double s, double p, double margin,
                          std::optional<GagliardoPlan> plan) {
    check_p(p);
    if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("s must lie in (0, 1)");
    const Grid2D& g = u.grid;
    std::vector<std::size_t> ids;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (u.mask[g.index(i, j)] && inside(g, i, j, margin)) ids.push_back(g.index(i, j));
    if (ids.size() < 2) throw InvalidArgument("fewer than 2 nodes in the inset domain");
    const double w = g.hx * g.hy * g.hx * g.hy;
    const double expo = 2.0 + s * p;
    auto term = [&](std::size_t a, std::size_t b) {
        const int ia = static_cast<int>(a % g.nx), ja = static_cast<int>(a / g.nx);
        const int ib = static_cast<int>(b % g.nx), jb = static_cast<int>(b / g.nx);
        const double r = std::hypot(g.x(ia) - g.x(ib), g.y(ja) - g.y(jb));
        const double du = std::hypot(u.u1[a] - u.u1[b], u.u2[a] - u.u2[b]);
        return pow_p(du, p) / std::pow(r, expo) * w;
    };
    if (!plan) {
        if (ids.size() > 4096) throw InvalidArgument("grid too large for the exhaustive double sum; pass a plan");
        double sum = 0.0;
        for (std::size_t a : ids)
            for (std::size_t b : ids)
                if (a != b) sum += term(a, b);
        return sum;
    }
    if (plan->pairs == 0) throw InvalidArgument("sampling plan needs at least one pair");
    std::mt19937_64 rng(plan->seed);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    double sum = 0.0;
    std::size_t drawn = 0;
    while (drawn < plan->pairs) {
        const std::size_t a = ids[pick(rng)], b = ids[pick(rng)];
        if (a == b) continue;
        sum += term(a, b);
        ++drawn;
    }
    const double n = static_cast<double>(ids.size());
    return sum / static_cast<double>(drawn) * n * (n - 1.0);
}

ScalingFit fit_loglog(const std::vector<double>& lengths, const std::vector<double>& values) {
    ScalingFit f;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        if (!(values[k] > 0.0)) return f;
        xs.push_back(std::log(lengths[k]));
        ys.push_back(std::log(values[k]));
    }
    std::vector<double> distinct = lengths;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    f.n_scales = static_cast<int>(distinct.size());
    if (f.n_scales < 4) throw InvalidArgument("scaling fit needs at least 4 scales");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    f.alpha = sxy / sxx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.defined = true;
    return f;
}

ScalingFit scaling_exponent(const VectorField2D& u, double p, const std::vector<Offset>& offsets, double margin) {
    std::vector<double> lengths, norms;
    for (Offset h : offsets) {
        lengths.push_back(offset_length(u.grid, h));
        norms.push_back(lp_difference_norm(u, h, p, margin));
    }
    return fit_loglog(lengths, norms);
}

RegularityRatio regularity_ratio(const VectorField2D& u, const std::vector<Offset>& offsets, double margin) {
    RegularityRatio r;
    r.div_l2 = l2_norm(divergence(u));
    const double scale = std::sqrt(1.0 + r.div_l2);
    for (Offset h : offsets) {
        const double len = offset_length(u.grid, h);
        const double q = lp_difference_norm(u, h, 3.0, margin) / (scale * std::sqrt(len));
        r.lengths.push_back(len);
        r.ratios.push_back(q);
        r.value = std::max(r.value, q);
    }
    return r;
}

bool detects_growth(const std::vector<double>& q, double factor, int steps) {
    const int n = static_cast<int>(q.size());
    for (int start = 0; start + steps < n; ++start) {
        bool mono = true;
        for (int k = start; k < start + steps; ++k) mono = mono && q[k + 1] > q[k];
        if (mono && q[start + steps] >= factor * q[start]) return true;
    }
    return false;
}

void write_scan_csv(std::ostream& os, const Grid2D& g, const RegularityScan& scan) {
    os << "p,s,hx,hy,norm,quotient\n" << std::setprecision(17);
    for (std::size_t k = 0; k < scan.offsets.size(); ++k)
        os << scan.p << ',' << scan.s << ',' << scan.offsets[k].di * g.hx << ',' << scan.offsets[k].dj * g.hy << ','
           << scan.norms[k] << ',' << scan.quotients[k] << '\n';
}

void write_fit_csv(std::ostream& os, double p, const ScalingFit& fit) {
    os << "p,alpha,r2,n_scales\n" << std::setprecision(17);
    if (fit.defined) os << p << ',' << fit.alpha << ',' << fit.r2 << ',' << fit.n_scales << '\n';
    else os << p << ",undefined,undefined," << fit.n_scales << '\n';
}

}  // namespace aniso
