#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/grid_field.hpp"

namespace aniso {

/// Discrete rho_delta for rho(x) = c (1 - |x|^2)^3 on B_1. Offsets are the grid
/// steps y with |y| < delta, the centre last; weights are renormalised so that
/// summing them in stored order gives exactly 1.
struct Mollifier {
    double delta = 0.0;
    std::vector<Offset> offsets;
    std::vector<double> weights;

    /// Throws unless delta >= 2 max(hx, hy).
    static Mollifier make(const Grid2D& grid, double delta);

    /// Sum of the weights in stored order.
    double weight_sum() const;
};

/// u_delta(x) = sum_k w_k u(x - y_k). A node is valid when every source node
/// exists (periodic axes wrap) and is valid, so the mask shrinks by delta.
/// The result is not flagged unit. Throws if no node survives.
VectorField2D mollify(const VectorField2D& u, const Mollifier& rho);
VectorField2D mollify(const VectorField2D& u, double delta);

/// v = u_delta / |u_delta| on the mask. Throws ProjectionRefused at the node of
/// smallest modulus when that modulus is below 1/2.
VectorField2D project(const VectorField2D& u_delta);

/// Smallest |u_delta| over the mask and where it is attained.
struct ModulusMin {
    double value = 0.0;
    int i = -1;
    int j = -1;
};
ModulusMin min_modulus(const VectorField2D& u_delta);

/// max over the mollified mask of | (1 - |u_delta|^2) - sum_k w_k |u(x - y_k) - u_delta(x)|^2 |,
/// both sides evaluated with the same weights. Requires a unit field.
double commutator_check(const VectorField2D& u, double delta);

/// Centred-difference gradient of a node scalar (same stencils as divergence()).
struct Gradient2D {
    ScalarField2D d1;
    ScalarField2D d2;
};
Gradient2D gradient(const ScalarField2D& f);

/// div v_delta by the chain rule
///   div u_delta / |u_delta| - <u_delta, grad |u_delta|^2> / (2 |u_delta|^3).
/// Throws ProjectionRefused under the same threshold as project().
ScalarField2D div_projection(const VectorField2D& u_delta);

/// Mean over nonzero grid offsets h with |h| < delta of ||D^h u||_{L^4}^4 / delta^2.
/// When max_offsets > 0 and the ball holds more offsets, a strided sublattice
/// of them is used (the stride is reported back through `used`, if given).
double vmo_modulus(const VectorField2D& u, double delta, int max_offsets = 0, int* used = nullptr);

/// sum of |grad v|^2 with centred differences and trapezoid weights over the mask.
double dirichlet_integral(const VectorField2D& v);

struct RecoveryRow {
    double eps = 0.0;
    /// max(eps, 2 max(hx, hy)).
    double delta = 0.0;
    double div_part = 0.0;
    /// eps * int (curl v)^2, so that total = div_part + curl_part.
    double curl_part = 0.0;
    double total = 0.0;
    /// int (div u)^2 over the full domain, discretised like the energy.
    double target = 0.0;
    /// delta * int |grad v_delta|^2.
    double dirichlet_diag = 0.0;
    double vmo = 0.0;
};

struct RecoveryCurve {
    std::vector<RecoveryRow> rows;
    /// Set when the VMO modulus fails to decrease along the ladder.
    std::vector<std::string> warnings;
};

/// Mollify-then-project with delta = eps for each rung; energies are reported on
/// the inset domain. ProjectionRefused propagates.
RecoveryCurve recovery_energy_curve(const VectorField2D& u, const std::vector<double>& eps_ladder,
                                    int vmo_max_offsets = 256);

/// u(x) = e^{i phi(x1)} with phi the exact 1D minimiser of E_eps on (-lx, lx).
VectorField2D embed_profile(const Grid2D& grid, double eps, double phi_minus, double phi_plus);

/// `eps,delta,div_part,curl_part,total,target,dirichlet_diag`
void write_recovery_csv(std::ostream& os, const std::vector<RecoveryRow>& rows);

}  // namespace aniso
