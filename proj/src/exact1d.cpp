#include "aniso/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/ellint_2.hpp>

namespace aniso {

namespace {

using std::numbers::pi;

void check_eps(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and >= 0");
}

// int_0^r sqrt(sin^2 s + eps cos^2 s) ds for 0 <= r <= pi/2, as an incomplete
// elliptic integral of the second kind.
double quarter_integral(double r, double eps) {
    if (r <= 0.0) return 0.0;
    if (eps < 1.0) {
        // sin^2 + eps cos^2 = 1 - (1 - eps) sin^2(pi/2 - s)
        const double k = std::sqrt(1.0 - eps);
        return boost::math::ellint_2(k) - boost::math::ellint_2(k, 0.5 * pi - r);
    }
    // sin^2 + eps cos^2 = eps (1 - (1 - 1/eps) sin^2 s)
    const double k = std::sqrt(1.0 - 1.0 / eps);
    return std::sqrt(eps) * boost::math::ellint_2(k, r);
}

// F on [0, pi] via the symmetry of the integrand about pi/2.
double half_period(double r, double eps, double period) {
    return r <= 0.5 * pi ? quarter_integral(r, eps) : period - quarter_integral(pi - r, eps);
}

double period_of(double eps) {
    if (eps == 0.0) return 2.0;
    if (eps == 1.0) return pi;
    return 2.0 * quarter_integral(0.5 * pi, eps);
}

void check_samples(std::span<const double> phi, double a, double b) {
    if (phi.size() < 2) throw InvalidArgument("need at least 2 samples");
    if (!(b > a)) throw InvalidArgument("interval must satisfy b > a");
}

}  // namespace

double F_eps(double t, double eps) {
    check_eps(eps);
    if (!std::isfinite(t)) throw InvalidArgument("F_eps argument must be finite");
    if (eps == 1.0) return t;
    const double l = std::floor(t / pi);
    const double r = std::clamp(t - l * pi, 0.0, pi);
    if (eps == 0.0) {
        const double h = std::sin(0.5 * r);
        return 2.0 * l + 2.0 * h * h;  // 1 - cos r without cancellation
    }
    const double P = period_of(eps);
    return l * P + half_period(r, eps, P);
}

double F_eps_derivative(double t, double eps) {
    check_eps(eps);
    const double s = std::sin(t), c = std::cos(t);
    return std::sqrt(s * s + eps * c * c);
}

double F_eps_inverse(double y, double eps) {
    check_eps(eps);
    if (!std::isfinite(y)) throw InvalidArgument("F_eps_inverse argument must be finite");
    if (eps == 1.0) return y;
    const double P = period_of(eps);
    const double l = std::floor(y / P);
    const double r = std::clamp(y - l * P, 0.0, P);
    if (eps == 0.0) return l * pi + 2.0 * std::asin(std::sqrt(0.5 * r));  // arccos(1 - r)

    const double tol = 1e-13 * std::max(1.0, std::abs(y));
    double lo = 0.0, hi = pi;
    double x = pi * r / P;
    for (int it = 0; it < 200; ++it) {
        const double f = half_period(x, eps, P) - r;
        if (std::abs(f) <= tol) break;
        if (f > 0) hi = x;
        else lo = x;
        const double step = f / F_eps_derivative(x, eps);
        double nx = x - step;
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (nx == x) break;
        x = nx;
    }
    return l * pi + x;
}

Profile1D minimal_energy_1d(double eps, double phi_minus, double phi_plus, double a, double b) {
    check_eps(eps);
    if (!(b > a)) throw InvalidArgument("interval must satisfy b > a");
    Profile1D p;
    p.eps = eps;
    p.phi_minus = phi_minus;
    p.phi_plus = phi_plus;
    p.tau = phi_plus > phi_minus ? 1 : (phi_plus < phi_minus ? -1 : 0);
    p.a = a;
    p.b = b;
    const double dF = F_eps(phi_plus, eps) - F_eps(phi_minus, eps);
    p.e_min = dF * dF / (b - a);
    return p;
}

std::vector<double> minimizer_profile_1d(const Profile1D& p, std::span<const double> x) {
    const double F0 = F_eps(p.phi_minus, p.eps);
    const double dF = F_eps(p.phi_plus, p.eps) - F0;
    std::vector<double> phi(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == p.a) phi[k] = p.phi_minus;
        else if (x[k] == p.b) phi[k] = p.phi_plus;
        else phi[k] = F_eps_inverse(F0 + (x[k] - p.a) / (p.b - p.a) * dF, p.eps);
    }
    return phi;
}

std::vector<double> uniform_samples(double a, double b, int n) {
    if (n < 2 || !(b > a)) throw InvalidArgument("uniform_samples needs n >= 2 and b > a");
    std::vector<double> x(static_cast<std::size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = a + k * h;
    x.back() = b;
    return x;
}

EnergyBreakdown energy_1d_parts(std::span<const double> phi, double eps, double a, double b) {
    check_eps(eps);
    check_samples(phi, a, b);
    const double h = (b - a) / static_cast<double>(phi.size() - 1);
    double d = 0.0, c = 0.0;
    for (std::size_t k = 0; k + 1 < phi.size(); ++k) {
        const double dc = std::cos(phi[k + 1]) - std::cos(phi[k]);
        const double ds = std::sin(phi[k + 1]) - std::sin(phi[k]);
        d += dc * dc;
        c += ds * ds;
    }
    EnergyBreakdown e;
    e.div_part = d / h;
    e.curl_part = c / h;
    e.total = e.div_part + eps * e.curl_part;
    return e;
}

double energy_1d(std::span<const double> phi, double eps, double a, double b) {
    return energy_1d_parts(phi, eps, a, b).total;
}

std::vector<double> energy_1d_gradient(std::span<const double> phi, double eps, double a, double b) {
    check_eps(eps);
    check_samples(phi, a, b);
    const double h = (b - a) / static_cast<double>(phi.size() - 1);
    std::vector<double> g(phi.size(), 0.0);
    for (std::size_t k = 0; k + 1 < phi.size(); ++k) {
        const double c0 = std::cos(phi[k]), s0 = std::sin(phi[k]);
        const double c1 = std::cos(phi[k + 1]), s1 = std::sin(phi[k + 1]);
        const double dc = 2.0 * (c1 - c0) / h, ds = 2.0 * eps * (s1 - s0) / h;
        g[k] += dc * s0 - ds * c0;
        g[k + 1] += -dc * s1 + ds * c1;
    }
    return g;
}

double holder_quarter_seminorm(std::span<const double> phi, double a, double b) {
    check_samples(phi, a, b);
    const std::size_t n = phi.size();
    const double h = (b - a) / static_cast<double>(n - 1);
    double best = 0.0;
    for (std::size_t g = 1; g < n; g *= 2) {
        double m = 0.0;
        for (std::size_t k = 0; k + g < n; ++k) m = std::max(m, std::abs(phi[k + g] - phi[k]));
        best = std::max(best, m / std::pow(static_cast<double>(g) * h, 0.25));
    }
    return best;
}

IntervalDecomposition interval_decomposition(std::span<const double> phi, double lambda, double delta, double a,
                                             double b) {
    check_samples(phi, a, b);
    if (!(lambda > 0.0) || !(delta > 0.0)) throw InvalidArgument("lambda and delta must be positive");
    if (b - a < 8.0 * delta) throw InvalidArgument("interval shorter than 8 delta");
    const int n = static_cast<int>(phi.size());
    const double h = (b - a) / (n - 1);
    auto x = [&](int k) { return k == n - 1 ? b : a + k * h; };

    IntervalDecomposition d;
    d.lambda = lambda;
    d.delta = delta;
    d.holder_quarter = holder_quarter_seminorm(phi, a, b);
    d.holder_condition = lambda >= 2.0 * d.holder_quarter * std::pow(delta, 0.25);

    // Separation: |sin phi(x) - sin phi(y)| >= lambda only for |x - y| >= 16 delta.
    std::vector<double> s(phi.size()), f(phi.size());
    for (int k = 0; k < n; ++k) {
        s[k] = std::sin(phi[k]);
        f[k] = std::abs(s[k]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n && x(j) - x(i) < 16.0 * delta; ++j)
            if (std::abs(s[j] - s[i]) >= lambda) {
                std::ostringstream msg;
                msg << "lambda too small for the oscillation of phi: |sin phi(" << x(i) << ") - sin phi(" << x(j)
                    << ")| >= lambda with |x - y| < 16 delta";
                throw SeparationViolated(msg.str(), x(i), x(j));
            }

    struct Piece {
        int first, last;
        bool elliptic;
    };
    std::vector<Piece> pieces;
    int l = 0;
    while (l < n) {
        int m_ne = l, m_e = l;
        while (m_ne < n && f[m_ne] <= 2.0 * lambda) ++m_ne;
        while (m_e < n && f[m_e] >= lambda) ++m_e;
        const int m = std::max(m_ne, m_e);
        pieces.push_back({l, m - 1, m_e >= m_ne});
        l = m;
    }

    auto classify = [&](int first, int last, bool& elliptic) {
        bool e = true, ne = true;
        for (int k = first; k <= last; ++k) {
            e = e && f[k] >= lambda;
            ne = ne && f[k] <= 2.0 * lambda;
        }
        elliptic = e;
        return e || ne;
    };

    // Terminal fix-up: the last piece becomes [b - 8 delta, b].
    if (b - x(pieces.back().first) < 8.0 * delta) {
        int split = static_cast<int>(std::floor((b - 8.0 * delta - a) / h));
        while (split > 0 && b - x(split) < 8.0 * delta) --split;
        bool e = false;
        if (!classify(split, n - 1, e)) throw NumericalFailure("terminal interval is neither elliptic nor nonelliptic");
        while (!pieces.empty() && pieces.back().first >= split) pieces.pop_back();
        if (!pieces.empty()) pieces.back().last = split - 1;
        pieces.push_back({split, n - 1, e});
    }

    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const Piece& p = pieces[k];
        Interval iv{x(p.first), k + 1 < pieces.size() ? x(pieces[k + 1].first) : b, p.first, p.last};
        if (iv.hi - iv.lo < 8.0 * delta * (1.0 - 1e-12))
            throw NumericalFailure("decomposition produced an interval shorter than 8 delta");
        (p.elliptic ? d.elliptic : d.nonelliptic).push_back(iv);
    }
    return d;
}

DecompositionCheck verify_decomposition(const IntervalDecomposition& d, std::span<const double> phi, double a,
                                        double b) {
    DecompositionCheck c;
    struct Tagged {
        Interval iv;
        bool elliptic;
    };
    std::vector<Tagged> all;
    for (const Interval& iv : d.elliptic) all.push_back({iv, true});
    for (const Interval& iv : d.nonelliptic) all.push_back({iv, false});
    std::sort(all.begin(), all.end(), [](const Tagged& p, const Tagged& q) { return p.iv.lo < q.iv.lo; });
    if (all.empty()) return c;
    const int n = static_cast<int>(phi.size());

    c.covers = all.front().iv.lo == a && all.back().iv.hi == b && all.front().iv.first == 0 &&
               all.back().iv.last == n - 1;
    c.disjoint = true;
    c.lengths = true;
    c.predicates = true;
    for (std::size_t k = 0; k < all.size(); ++k) {
        const Interval& iv = all[k].iv;
        if (k + 1 < all.size()) {
            c.covers = c.covers && iv.hi == all[k + 1].iv.lo;
            c.disjoint = c.disjoint && all[k + 1].iv.first == iv.last + 1 && iv.hi <= all[k + 1].iv.lo;
        }
        c.lengths = c.lengths && iv.hi - iv.lo >= 8.0 * d.delta * (1.0 - 1e-12);
        for (int s = iv.first; s <= iv.last; ++s) {
            const double f = std::abs(std::sin(phi[s]));
            c.predicates = c.predicates && (all[k].elliptic ? f >= d.lambda : f <= 2.0 * d.lambda);
        }
    }
    return c;
}

Recovery1D recovery_1d_at(std::span<const double> phi, double eps, double delta, double a, double b) {
    check_eps(eps);
    check_samples(phi, a, b);
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
    if (delta > 0.25 * (b - a)) throw InvalidArgument("delta larger than |I|/4");
    const int n = static_cast<int>(phi.size());
    const double h = (b - a) / (n - 1);
    if (delta < 2.0 * h) throw InvalidArgument("delta must span at least 2 sample spacings");

    const int r = static_cast<int>(std::ceil(delta / h));
    std::vector<double> w(static_cast<std::size_t>(2 * r + 1), 0.0);
    double sum = 0.0;
    for (int k = -r; k <= r; ++k) {
        const double t = k * h / delta;
        const double v = t * t < 1.0 ? std::pow(1.0 - t * t, 3) : 0.0;
        w[static_cast<std::size_t>(k + r)] = v;
        sum += v;
    }
    for (double& v : w) v /= sum;

    Recovery1D out;
    out.delta = delta;
    out.phi_delta.resize(phi.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) acc += w[static_cast<std::size_t>(k + r)] * phi[std::clamp(i - k, 0, n - 1)];
        out.phi_delta[i] = acc;
    }
    out.u1.resize(phi.size());
    out.u2.resize(phi.size());
    for (int i = 0; i < n; ++i) {
        out.u1[i] = std::cos(out.phi_delta[i]);
        out.u2[i] = std::sin(out.phi_delta[i]);
    }
    out.energy = energy_1d_parts(out.phi_delta, eps, a, b);
    return out;
}

Recovery1D recovery_1d(std::span<const double> phi, double eps, double a, double b) {
    if (!(eps > 0.0)) throw InvalidArgument("recovery needs eps > 0");
    return recovery_1d_at(phi, eps, std::sqrt(eps), a, b);
}

}  // namespace aniso
