#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace aniso {

using Mask = std::vector<std::uint8_t>;

/// Rectangular node grid on [-lx, lx] x [-ly, ly].
///
/// Non-periodic axes carry nodes on both endpoints (spacing 2l/(n-1)).
/// Periodic axes carry n cell-centred nodes (spacing 2l/n) and wrap around,
/// so there is no duplicated seam. Storage is row-major: index = j*nx + i.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double lx = 1.0;
    double ly = 1.0;
    bool periodic_x = false;
    bool periodic_y = false;
    double hx = 0.0;
    double hy = 0.0;

    static Grid2D make(int nx, int ny, double lx, double ly,
                       bool periodic_x = false, bool periodic_y = false);

    double x(int i) const;
    double y(int j) const;
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }

    /// Number of cells along each axis (periodic axes close the last cell over the seam).
    int cells_x() const { return periodic_x ? nx : nx - 1; }
    int cells_y() const { return periodic_y ? ny : ny - 1; }

    /// Trapezoid quadrature weight of node (i, j).
    double node_weight(int i, int j) const;

    /// Distance, in units of spacing, from the origin to the nearest node
    /// coordinate along each axis (0.5 for even node counts).
    double stagger_x() const;
    double stagger_y() const;

    /// Moves (i, j) by (di, dj), wrapping periodic axes. Returns false when the
    /// target leaves a non-periodic axis.
    bool shift(int i, int j, int di, int dj, int& oi, int& oj) const;
};

enum class BcMode { free, dirichlet_x1_periodic_x2, fully_periodic };

struct BoundaryCondition {
    BcMode mode = BcMode::free;
    double phi_minus = 0.0;
    double phi_plus = 0.0;
};

/// Grid whose periodic axes match the boundary-condition mode.
Grid2D grid_for(const BoundaryCondition& bc, int nx, int ny, double lx = 1.0, double ly = 1.0);

/// Unwrapped phase samples; the vector field is u = (cos phi, sin phi).
struct PhaseField2D {
    Grid2D grid;
    BoundaryCondition bc;
    std::vector<double> phi;

    static PhaseField2D make(const Grid2D& grid, const BoundaryCondition& bc, double fill = 0.0);

    double& at(int i, int j) { return phi[grid.index(i, j)]; }
    double at(int i, int j) const { return phi[grid.index(i, j)]; }

    /// True for nodes pinned by the boundary condition (x1 = -lx or +lx in Dirichlet mode).
    bool is_fixed(int i, int j) const;

    /// Overwrites pinned nodes with the boundary phases.
    void enforce_bc();

    /// Throws InvalidArgument when sizes, periodicity or pinned values are inconsistent.
    void validate() const;
};

struct VectorField2D {
    Grid2D grid;
    std::vector<double> u1;
    std::vector<double> u2;
    Mask mask;
    bool unit = false;

    static VectorField2D make(const Grid2D& grid, double u1 = 0.0, double u2 = 0.0);

    bool valid(int i, int j) const { return mask[grid.index(i, j)] != 0; }
};

/// Node-sampled scalar, or cell-sampled when `cell_centred` is set (then the
/// storage is cells_x() by cells_y()).
struct ScalarField2D {
    Grid2D grid;
    std::vector<double> values;
    Mask mask;
    bool cell_centred = false;

    static ScalarField2D make(const Grid2D& grid, double fill = 0.0);
};

/// Offset in whole grid steps.
struct Offset {
    int di = 0;
    int dj = 0;
};

double offset_length(const Grid2D& grid, Offset h);

struct EnergyBreakdown {
    double div_part = 0.0;
    double curl_part = 0.0;
    double total = 0.0;
};

/// Weights of the discrete anisotropic functional
///   prefactor * sum_T |T| [ (d1 u1 + s d2 u2)^2 + eps (d1 u2 - s d2 u1)^2 ].
/// s = 1, prefactor = 1 is E_eps; s = 1/aspect, prefactor = 1/2 is the thin-film energy.
struct EnergyScheme {
    double eps = 0.0;
    double y_scale = 1.0;
    double prefactor = 1.0;
};

VectorField2D phase_to_vector(const PhaseField2D& phi);

/// Largest | |u|^2 - 1 | over the mask.
double max_unit_defect(const VectorField2D& u);

/// Centred second-order divergence (one-sided second order at non-periodic
/// edges). Nodes whose stencil touches an invalid node are masked out.
ScalarField2D divergence(const VectorField2D& u);
ScalarField2D curl(const VectorField2D& u);

/// Per-cell divergence / curl of the energy scheme (mean of the two triangles).
ScalarField2D cell_divergence(const VectorField2D& u);
ScalarField2D cell_curl(const VectorField2D& u);

/// Discrete E_eps. Each cell is split into two P1 triangles: forward differences
/// at the lower-left corner and backward differences at the upper-right corner.
/// A triangle contributes when its three vertices are valid.
EnergyBreakdown energy(const VectorField2D& u, double eps, bool allow_non_unit = false);
EnergyBreakdown scheme_energy(const VectorField2D& u, const EnergyScheme& scheme);

/// Exact gradient of energy(phase_to_vector(phi), eps) with respect to nodal
/// phases. Entries at pinned nodes are zero.
ScalarField2D energy_gradient(const PhaseField2D& phi, double eps);
ScalarField2D scheme_gradient(const PhaseField2D& phi, const EnergyScheme& scheme);

/// D^h u(x) = u(x + h) - u(x) on Omega cap (Omega - h); periodic axes wrap.
VectorField2D finite_difference(const VectorField2D& u, Offset h);
/// Physical offset; throws unless both components are grid multiples.
VectorField2D finite_difference(const VectorField2D& u, double h1, double h2);
Offset snap_offset(const Grid2D& grid, double h1, double h2);

/// Weighted L2 norm of a node-sampled scalar over its mask (trapezoid weights).
double l2_norm(const ScalarField2D& f);

struct TraceProfile {
    std::vector<double> deltas;
    /// Boundary parametrisation shared by all profiles: one entry per boundary
    /// node of the non-periodic sides (corners excluded), with arc-length weight.
    std::vector<double> arc_weight;
    std::vector<std::vector<double>> u1;
    std::vector<std::vector<double>> u2;
    /// L1(boundary) distance between profile k and k+1.
    std::vector<double> successive_l1;
};

/// Samples u(x - delta nu(x)) for every boundary node x and every inset delta.
TraceProfile trace_profile(const VectorField2D& u, std::span<const double> deltas);

/// CSV dumps: `x,y,u1,u2,mask` and `x,y,value`, row-major, 17 significant digits.
void write_csv(std::ostream& os, const VectorField2D& u);
void write_csv(std::ostream& os, const ScalarField2D& f);

}  // namespace aniso
