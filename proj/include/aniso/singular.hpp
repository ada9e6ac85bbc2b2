#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/grid_field.hpp"

namespace aniso {

struct JumpSpec {
    /// Common normal component; u+- = (n, +-sqrt(1 - n^2)).
    double n = 0.0;
};

/// u- for x1 < 0 and u+ for x1 > 0. Throws if |n| >= 1 or a node column sits on x1 = 0.
VectorField2D make_jump(const Grid2D& grid, const JumpSpec& spec);

/// Rotational vortex (-x2, x1)/|x|; nodes with |x| < core_spacings * max(hx, hy)
/// are masked out. Throws if a node sits on the origin.
VectorField2D make_vortex(const Grid2D& grid, double core_spacings = 2.0);

/// Closed loop of grid nodes; the last node connects back to the first.
struct Loop {
    std::string id;
    std::vector<Offset> nodes;  ///< (i, j) node indices
};

/// Counter-clockwise boundary of the node rectangle [i0, i1] x [j0, j1].
Loop rectangle_loop(const Grid2D& g, int i0, int j0, int i1, int j1, std::string id = "rect");

/// n_nodes points on the circle of radius r about (cx, cy), counter-clockwise,
/// each snapped to the nearest node; consecutive repeats are dropped.
Loop circle_loop(const Grid2D& g, double cx, double cy, double r, int n_nodes, std::string id = "circle");

/// +1 counter-clockwise, -1 clockwise (sign of the enclosed signed area).
int loop_orientation(const Grid2D& g, const Loop& loop);

/// Throws InvalidArgument unless the loop has >= 3 distinct in-grid nodes and
/// consecutive nodes are at most 2 steps apart in each direction.
void validate_loop(const Grid2D& g, const Loop& loop);

/// (1 / 2 pi) sum of wrapped phase increments along the loop. Throws when the
/// field is masked or not unit on the loop, or when an increment reaches pi.
int winding_number(const VectorField2D& u, const Loop& loop);

/// (1/2) sum over loop edges of u_k ^ u_{k+1} (the trapezoid rule for
/// (1/2) closed integral of u ^ du); equals the enclosed Jacobian mass.
double jacobian_total(const VectorField2D& u, const Loop& loop);

struct LoopReport {
    std::string id;
    int winding = 0;
    double jacobian_mass = 0.0;
};

/// `loop_id,winding,jacobian_mass`
void write_loop_csv(std::ostream& os, const std::vector<LoopReport>& rows);

}  // namespace aniso
