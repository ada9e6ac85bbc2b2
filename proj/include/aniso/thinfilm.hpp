#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aniso/grid_field.hpp"
#include "aniso/minimize.hpp"

namespace aniso {

struct ThinFilmParams {
    double eps = 0.1;
    /// Film thickness delta > 0; the square (-1, 1)^2 stands for (-1, 1) x (-delta, delta).
    double aspect = 0.1;
    double phi_minus = 0.0;
    double phi_plus = 0.0;

    void validate() const;
};

/// Energy scheme of E_{eps,delta}: s = 1/delta, prefactor 1/2.
EnergyScheme thinfilm_scheme(const ThinFilmParams& p);

/// Grid on (-1, 1)^2 with Dirichlet nodes on x1 = -1, 1 and periodic x2.
Grid2D thinfilm_grid(int nx, int ny);

/// (1/2) int (d1 u1 + d2 u2 / delta)^2 + eps (d1 u2 - d2 u1 / delta)^2 with the
/// triangle scheme. Throws unless phi carries Dirichlet-x1 / periodic-x2
/// conditions with the parameters' boundary phases on (-1, 1)^2.
EnergyBreakdown thinfilm_energy(const PhaseField2D& phi, const ThinFilmParams& p);

/// Linear ramp between the boundary phases plus seeded uniform noise of the
/// given amplitude on the free nodes.
PhaseField2D thinfilm_start(const Grid2D& grid, const ThinFilmParams& p, std::uint64_t seed, double amplitude = 0.5);

/// int (d2 phi)^2 over the square for the bilinear interpolant of phi.
double x2_variation(const PhaseField2D& phi);

struct ThinFilmResult {
    PhaseField2D field;
    MinimizeReport report;
    double e_min = 0.0;
    /// |energy - e_min| / e_min.
    double rel_err = 0.0;
    double x2_variation = 0.0;
};

/// Minimises E_{eps,delta} from `start`, or from thinfilm_start(grid, p, cfg.seed).
ThinFilmResult minimize_thinfilm(const ThinFilmParams& p, const PhaseField2D& start, const OptimizerConfig& cfg);
ThinFilmResult minimize_thinfilm(const ThinFilmParams& p, const Grid2D& grid, const OptimizerConfig& cfg);

struct SymmetryDefect {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

/// With phi_h the bilinear interpolant of the nodal phases (per-cell 5x5 Gauss):
///   lhs = E_{eps,delta}(e^{i phi_h}) - e_min,
///   rhs = (min(1, eps) / 2) int (d2 phi_h / delta)^2 + (d1 phi_h - tau sqrt(e_min / 2) / F'(phi_h))^2,
///   margin = lhs - rhs.
/// For delta = 1 this is the inequality for (1/2) E_eps on the square; the
/// inequality is exact for phi_h, so only quadrature error can make margin < 0.
SymmetryDefect symmetry_defect_bound(const PhaseField2D& phi, const ThinFilmParams& p);

/// Sampled check of q(X, Y) = ((1+eps) - (1-eps) C) X^2 + ((1+eps) + (1-eps) C) Y^2 + 2 (eps-1) S X Y
/// over n angles (C, S) = (cos t, sin t) and n directions (X, Y).
struct QuadraticCertificate {
    double max_det_error = 0.0;    ///< max |det q - 4 eps|
    double max_trace_error = 0.0;  ///< max |tr q - 2 (1 + eps)|
    /// min of q(X, Y) / (2 min(1, eps) (X^2 + Y^2)); >= 1 up to rounding.
    double min_ratio = 0.0;
};
QuadraticCertificate quadratic_certificate(double eps, int n = 360);

struct ThinFilmRow {
    double eps = 0.0;
    double aspect = 0.0;
    double energy = 0.0;
    double e_min = 0.0;
    double rel_err = 0.0;
    double x2_variation = 0.0;
    double margin = 0.0;
};

/// `eps,aspect,energy,e_min,rel_err,x2_variation,margin`
void write_thinfilm_csv(std::ostream& os, const std::vector<ThinFilmRow>& rows);

}  // namespace aniso
