#include "aniso/singular.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <utility>

#include <boost/math/constants/constants.hpp>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double pi = boost::math::constants::pi<double>();
constexpr double two_pi = boost::math::constants::two_pi<double>();

// Unit vectors along the loop, after checking mask and norm.
std::vector<std::pair<double, double>> loop_values(const VectorField2D& u, const Loop& loop) {
    validate_loop(u.grid, loop);
    std::vector<std::pair<double, double>> v;
    for (Offset n : loop.nodes) {
        const std::size_t k = u.grid.index(n.di, n.dj);
        if (!u.mask[k]) throw InvalidArgument("loop '" + loop.id + "' crosses a masked node");
        if (std::abs(u.u1[k] * u.u1[k] + u.u2[k] * u.u2[k] - 1.0) > 1e-10)
            throw InvalidArgument("field is not unit on loop '" + loop.id + "'");
        v.emplace_back(u.u1[k], u.u2[k]);
    }
    return v;
}

}  // namespace

VectorField2D make_jump(const Grid2D& grid, const JumpSpec& spec) {
    if (!(std::abs(spec.n) < 1.0)) throw InvalidArgument("jump normal component must satisfy |n| < 1");
    for (int i = 0; i < grid.nx; ++i)
        if (grid.x(i) == 0.0) throw InvalidArgument("a node column lies on the interface x1 = 0");
    const double t = std::sqrt(1.0 - spec.n * spec.n);
    VectorField2D u = VectorField2D::make(grid);
    u.unit = true;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            u.u1[k] = spec.n;
            u.u2[k] = grid.x(i) > 0.0 ? t : -t;
        }
    return u;
}

VectorField2D make_vortex(const Grid2D& grid, double core_spacings) {
    if (!(core_spacings >= 0.0)) throw InvalidArgument("core radius must be >= 0");
    const double core = core_spacings * std::max(grid.hx, grid.hy);
    VectorField2D u = VectorField2D::make(grid);
    u.unit = true;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            const double x = grid.x(i), y = grid.y(j);
            const double r = std::hypot(x, y);
            if (r == 0.0) throw InvalidArgument("a node lies on the vortex centre");
            if (r < core) {
                u.mask[k] = 0;
                u.u1[k] = 0.0;
                u.u2[k] = 0.0;
                continue;
            }
            u.u1[k] = -y / r;
            u.u2[k] = x / r;
        }
    return u;
}

Loop rectangle_loop(const Grid2D& g, int i0, int j0, int i1, int j1, std::string id) {
    if (!(i0 < i1 && j0 < j1)) throw InvalidArgument("rectangle corners must satisfy i0 < i1, j0 < j1");
    Loop loop{std::move(id), {}};
    for (int i = i0; i < i1; ++i) loop.nodes.push_back({i, j0});
    for (int j = j0; j < j1; ++j) loop.nodes.push_back({i1, j});
    for (int i = i1; i > i0; --i) loop.nodes.push_back({i, j1});
    for (int j = j1; j > j0; --j) loop.nodes.push_back({i0, j});
    validate_loop(g, loop);
    return loop;
}

Loop circle_loop(const Grid2D& g, double cx, double cy, double r, int n_nodes, std::string id) {
    if (n_nodes < 3 || !(r > 0.0)) throw InvalidArgument("circle loop needs r > 0 and >= 3 nodes");
    Loop loop{std::move(id), {}};
    for (int k = 0; k < n_nodes; ++k) {
        const double a = two_pi * k / n_nodes;
        const double x = cx + r * std::cos(a), y = cy + r * std::sin(a);
        // Node coordinate x(i) = x(0) + i hx on both periodic and plain axes.
        const int i = static_cast<int>(std::lround((x - g.x(0)) / g.hx));
        const int j = static_cast<int>(std::lround((y - g.y(0)) / g.hy));
        if (loop.nodes.empty() || loop.nodes.back().di != i || loop.nodes.back().dj != j) loop.nodes.push_back({i, j});
    }
    if (loop.nodes.size() > 1 && loop.nodes.back().di == loop.nodes.front().di &&
        loop.nodes.back().dj == loop.nodes.front().dj)
        loop.nodes.pop_back();
    validate_loop(g, loop);
    return loop;
}

int loop_orientation(const Grid2D& g, const Loop& loop) {
    double area = 0.0;
    const std::size_t n = loop.nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Offset a = loop.nodes[k], b = loop.nodes[(k + 1) % n];
        area += g.x(a.di) * g.y(b.dj) - g.x(b.di) * g.y(a.dj);
    }
    return area >= 0.0 ? 1 : -1;
}

void validate_loop(const Grid2D& g, const Loop& loop) {
    const std::size_t n = loop.nodes.size();
    if (n < 3) throw InvalidArgument("loop '" + loop.id + "' needs at least 3 nodes");
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < n; ++k) {
        const Offset a = loop.nodes[k], b = loop.nodes[(k + 1) % n];
        if (a.di < 0 || a.di >= g.nx || a.dj < 0 || a.dj >= g.ny)
            throw InvalidArgument("loop '" + loop.id + "' leaves the grid");
        if (!seen.insert({a.di, a.dj}).second) throw InvalidArgument("loop '" + loop.id + "' is not simple");
        if (std::abs(b.di - a.di) > 2 || std::abs(b.dj - a.dj) > 2)
            throw InvalidArgument("loop '" + loop.id + "' has a step longer than 2 spacings");
    }
}

int winding_number(const VectorField2D& u, const Loop& loop) {
    const auto v = loop_values(u, loop);
    const std::size_t n = v.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto [a1, a2] = v[k];
        const auto [b1, b2] = v[(k + 1) % n];
        const double inc = std::atan2(a1 * b2 - a2 * b1, a1 * b1 + a2 * b2);
        if (std::abs(inc) >= pi * (1.0 - 1e-12))
            throw InvalidArgument("loop '" + loop.id + "' is under-resolved: phase jump reaches pi");
        total += inc;
    }
    const double w = total / two_pi;
    const long r = std::lround(w);
    if (std::abs(w - static_cast<double>(r)) > 1e-6) throw NumericalFailure("winding sum is not an integer");
    return static_cast<int>(r);
}

double jacobian_total(const VectorField2D& u, const Loop& loop) {
    const auto v = loop_values(u, loop);
    const std::size_t n = v.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto [a1, a2] = v[k];
        const auto [b1, b2] = v[(k + 1) % n];
        total += a1 * b2 - a2 * b1;
    }
    return 0.5 * total;
}

void write_loop_csv(std::ostream& os, const std::vector<LoopReport>& rows) {
    os << "loop_id,winding,jacobian_mass\n" << std::setprecision(17);
    for (const LoopReport& r : rows) os << r.id << ',' << r.winding << ',' << r.jacobian_mass << '\n';
}

}  // namespace aniso
