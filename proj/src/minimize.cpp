#include "aniso/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <string>

#include "aniso/errors.hpp"
#include "aniso/exact1d.hpp"

namespace aniso {

namespace {

double free_sup(const std::vector<double>& g, const std::vector<std::uint8_t>& free) {
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (free[k]) m = std::max(m, std::abs(g[k]));
    return m;
}

double free_dot(const std::vector<double>& a, const std::vector<double>& b, const std::vector<std::uint8_t>& free) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (free[k]) s += a[k] * b[k];
    return s;
}

void require_finite(const EnergyBreakdown& e, int iter) {
    if (!std::isfinite(e.total))
        throw NumericalFailure("non-finite energy at iteration " + std::to_string(iter));
}

void require_finite(const std::vector<double>& g, int iter) {
    for (double v : g)
        if (!std::isfinite(v)) throw NumericalFailure("non-finite gradient at iteration " + std::to_string(iter));
}

void check_config(const OptimizerConfig& cfg) {
    if (cfg.max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
    if (cfg.grad_tol < 0.0 || !std::isfinite(cfg.grad_tol)) throw InvalidArgument("grad_tol must be >= 0");
    if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) throw InvalidArgument("armijo_c must lie in (0, 1)");
    if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) throw InvalidArgument("backtrack must lie in (0, 1)");
    for (std::size_t k = 0; k < cfg.ladder.size(); ++k) {
        if (!(cfg.ladder[k] >= 0.0) || !std::isfinite(cfg.ladder[k]))
            throw InvalidArgument("ladder entries must be finite and >= 0");
        if (k > 0 && !(cfg.ladder[k] < cfg.ladder[k - 1])) throw InvalidArgument("ladder must be strictly decreasing");
    }
}

}  // namespace

MinimizeReport descend(std::vector<double>& x, const Objective& obj, const OptimizerConfig& cfg, double grad_tol,
                       int iter_offset) {
    if (obj.free.size() != x.size()) throw InvalidArgument("free mask does not match the coordinates");
    MinimizeReport rep;
    rep.grad_tol = grad_tol;

    EnergyBreakdown e = obj.energy(x);
    require_finite(e, iter_offset);
    std::vector<double> g = obj.gradient(x);
    require_finite(g, iter_offset);
    double gn = free_sup(g, obj.free);

    auto record = [&](int it, double step) {
        if (cfg.record_trace) rep.trace.push_back({iter_offset + it, e.total, e.div_part, e.curl_part, gn, step});
    };
    record(0, 0.0);

    // First trial step moves the largest free coordinate by 0.1.
    double alpha = gn > 0.0 ? 0.1 / gn : 0.0;
    std::vector<double> xn(x.size()), gprev;
    int it = 0;
    bool stalled = false;
    while (gn > grad_tol && it < cfg.max_iters) {
        const double g2 = free_dot(g, g, obj.free);
        double step = alpha;
        EnergyBreakdown en;
        bool accepted = false;
        for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
            for (std::size_t k = 0; k < x.size(); ++k) xn[k] = obj.free[k] ? x[k] - step * g[k] : x[k];
            en = obj.energy(xn);
            require_finite(en, iter_offset + it + 1);
            if (en.total <= e.total - cfg.armijo_c * step * g2) {
                accepted = true;
                break;
            }
            step *= cfg.backtrack;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        ++it;
        std::vector<double> gn_vec = obj.gradient(xn);
        require_finite(gn_vec, iter_offset + it);

        // Barzilai-Borwein: s = -step g, y = g_new - g.
        double sy = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (!obj.free[k]) continue;
            const double s = -step * g[k];
            const double y = gn_vec[k] - g[k];
            sy += s * y;
            ss += s * s;
        }
        alpha = sy > 0.0 ? ss / sy : 2.0 * step;

        x.swap(xn);
        g.swap(gn_vec);
        e = en;
        gn = free_sup(g, obj.free);
        record(it, step);
    }
    rep.energy = e;
    rep.iterations = it;
    rep.grad_norm = gn;
    rep.converged = gn <= grad_tol && !stalled;
    return rep;
}

std::vector<double> continuation_stages(double eps, const std::vector<double>& ladder) {
    std::vector<double> stages;
    for (double v : ladder)
        if (v > eps) stages.push_back(v);
    stages.push_back(eps);
    return stages;
}

std::pair<PhaseField2D, MinimizeReport> minimize_scheme(const PhaseField2D& phi0, const EnergyScheme& scheme,
                                                        const OptimizerConfig& cfg) {
    phi0.validate();
    check_config(cfg);
    const Grid2D& g = phi0.grid;
    const double tol =
        cfg.grad_tol > 0.0 ? cfg.grad_tol : 1e-8 * std::sqrt(static_cast<double>(g.cells_x()) * g.cells_y());

    Objective obj;
    obj.free.assign(g.size(), 1);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (phi0.is_fixed(i, j)) obj.free[g.index(i, j)] = 0;

    PhaseField2D work = phi0;
    EnergyScheme stage_scheme = scheme;
    obj.energy = [&](const std::vector<double>& x) {
        work.phi = x;
        return scheme_energy(phase_to_vector(work), stage_scheme);
    };
    obj.gradient = [&](const std::vector<double>& x) {
        work.phi = x;
        return scheme_gradient(work, stage_scheme).values;
    };

    std::vector<double> x = phi0.phi;
    MinimizeReport total;
    total.grad_tol = tol;
    total.converged = true;
    for (double eps : continuation_stages(scheme.eps, cfg.ladder)) {
        stage_scheme.eps = eps;
        MinimizeReport r = descend(x, obj, cfg, tol, total.iterations);
        total.stages.push_back({eps, r.energy, r.iterations, r.grad_norm, r.converged});
        total.iterations += r.iterations;
        total.converged = total.converged && r.converged;
        total.energy = r.energy;
        total.grad_norm = r.grad_norm;
        total.trace.insert(total.trace.end(), r.trace.begin(), r.trace.end());
    }
    PhaseField2D out = phi0;
    out.phi = x;
    return {out, total};
}

std::pair<PhaseField2D, MinimizeReport> minimize_energy(const PhaseField2D& phi0, double eps,
                                                        const OptimizerConfig& cfg) {
    return minimize_scheme(phi0, EnergyScheme{eps, 1.0, 1.0}, cfg);
}

std::pair<std::vector<double>, MinimizeReport> minimize_1d(const std::vector<double>& phi0, double eps,
                                                           const OptimizerConfig& cfg, double a, double b) {
    check_config(cfg);
    if (phi0.size() < 3) throw InvalidArgument("need at least 3 samples");
    const double tol = cfg.grad_tol > 0.0 ? cfg.grad_tol : 1e-8 * std::sqrt(static_cast<double>(phi0.size() - 1));
    Objective obj;
    obj.free.assign(phi0.size(), 1);
    obj.free.front() = 0;
    obj.free.back() = 0;
    double stage_eps = eps;
    obj.energy = [&](const std::vector<double>& x) { return energy_1d_parts(x, stage_eps, a, b); };
    obj.gradient = [&](const std::vector<double>& x) { return energy_1d_gradient(x, stage_eps, a, b); };
    std::vector<double> x = phi0;
    MinimizeReport total;
    total.grad_tol = tol;
    total.converged = true;
    for (double e : continuation_stages(eps, cfg.ladder)) {
        stage_eps = e;
        MinimizeReport r = descend(x, obj, cfg, tol, total.iterations);
        total.stages.push_back({e, r.energy, r.iterations, r.grad_norm, r.converged});
        total.iterations += r.iterations;
        total.converged = total.converged && r.converged;
        total.energy = r.energy;
        total.grad_norm = r.grad_norm;
        total.trace.insert(total.trace.end(), r.trace.begin(), r.trace.end());
    }
    return {x, total};
}

GradientCheck gradient_check(const PhaseField2D& phi, double eps, std::uint64_t seed, int nodes) {
    phi.validate();
    const Grid2D& g = phi.grid;
    const ScalarField2D grad = energy_gradient(phi, eps);
    GradientCheck out;
    std::vector<std::size_t> free_ids;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (phi.is_fixed(i, j)) out.pinned_zero = out.pinned_zero && grad.values[k] == 0.0;
            else free_ids.push_back(k);
        }
    std::mt19937_64 rng(seed);
    std::shuffle(free_ids.begin(), free_ids.end(), rng);
    if (static_cast<int>(free_ids.size()) > nodes) free_ids.resize(static_cast<std::size_t>(nodes));

    double gmax = 0.0;
    for (double v : grad.values) gmax = std::max(gmax, std::abs(v));
    PhaseField2D p = phi;
    const double step = 1e-6;
    for (std::size_t k : free_ids) {
        const double v = p.phi[k];
        p.phi[k] = v + step;
        const double ep = energy(phase_to_vector(p), eps).total;
        p.phi[k] = v - step;
        const double em = energy(phase_to_vector(p), eps).total;
        p.phi[k] = v;
        const double fd = (ep - em) / (2.0 * step);
        const double a = grad.values[k];
        const double denom = std::max({std::abs(a), std::abs(fd), 1e-3 * gmax});
        if (denom > 0.0) out.max_rel_error = std::max(out.max_rel_error, std::abs(a - fd) / denom);
        ++out.nodes_checked;
    }
    return out;
}

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace) {
    os << "iter,energy,div_part,curl_part,grad_norm,step\n" << std::setprecision(17);
    for (const IterationRecord& r : trace)
        os << r.iter << ',' << r.energy << ',' << r.div_part << ',' << r.curl_part << ',' << r.grad_norm << ','
           << r.step << '\n';
}

}  // namespace aniso
