#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/grid_field.hpp"

namespace aniso {

/// Uniform nodes on T = R / 2 pi Z, s_k = (k + 1/2) ds with ds = 2 pi / n_s.
/// The half-step offset keeps nodes off multiples of pi/2; n_s divisible by 4
/// still maps s_k +- pi/2 onto nodes.
struct AngularGrid {
    int n_s = 0;
    double ds = 0.0;

    static AngularGrid make(int n_s);
    double node(int k) const { return (k + 0.5) * ds; }
    std::vector<double> sample(const std::function<double(double)>& g) const;
    /// Periodic piecewise-linear interpolation of node samples.
    double interpolate(const std::vector<double>& g, double s) const;
};

/// Weight on T in closed form. `breakpoint_spacing` > 0 declares possible
/// jumps of phi at its integer multiples (pi/2 for phi_0); 0 means smooth.
struct KineticWeight {
    std::string name;
    std::function<double(double)> phi;
    double breakpoint_spacing = 0.0;

    /// 1 on cos s sin s > 0, -1 on cos s sin s < 0, 0 on the axes.
    static KineticWeight phi0();
    static KineticWeight sin2();
    static KineticWeight custom(std::string name, std::function<double(double)> phi, double breakpoint_spacing = 0.0);

    /// Largest |phi(-s) + phi(s)| and |phi(s + pi) - phi(s)| over the nodes.
    double oddness_defect(const AngularGrid& ag) const;
    double periodicity_defect(const AngularGrid& ag) const;
    /// Throws InvalidArgument unless both defects are <= 1e-12.
    void validate(const AngularGrid& ag) const;
};

struct EntropyValue {
    std::array<double, 2> Phi{};
    double lambda = 0.0;
};

/// Phi_g(theta) = int_{theta-pi/2}^{theta+pi/2} g(s) e^{is} ds for the
/// piecewise-linear interpolant of the samples (integrated exactly), and
/// lambda = g(theta + pi/2) + g(theta - pi/2) from the same interpolant.
EntropyValue entropy_phi_g(const AngularGrid& ag, const std::vector<double>& g, double theta);

/// L2 norm over the grid of div Phi_g(u) - lambda(u) div u with centred stencils.
double entropy_production_residual(const PhaseField2D& phi, const AngularGrid& ag, const std::vector<double>& g);

/// Evaluates int_T Theta(s, x) g(s) ds = (g(theta + pi/2) + g(theta - pi/2)) div u(x).
class ThetaEvaluator {
public:
    explicit ThetaEvaluator(const PhaseField2D& phi);
    ScalarField2D apply(const std::function<double(double)>& g) const;
    ScalarField2D apply(const AngularGrid& ag, const std::vector<double>& g) const;
    const ScalarField2D& divergence() const { return div_; }

private:
    PhaseField2D phi_;
    ScalarField2D div_;
};

/// Delta^{phi,chi} for chi jumping from the half circle around theta1 to the
/// one around theta2. The double integral over T^2 is reduced along t - s to
/// int_{-D}^{D} [K(r) - K(r+pi)/2 - K(r-pi)/2] (D - |r|) dr, K(r) = phi(r) sin r,
/// D = |theta2 - theta1| wrapped to [0, pi], and integrated with 4-point
/// Gauss-Legendre on the panels of `ag` split at the weight's breakpoints.
double delta_quantity(double theta1, double theta2, const KineticWeight& w, const AngularGrid& ag);

/// G_a(s) = int_{a-pi/2}^{a+pi/2} phi(t - s) sin t dt.
double half_circle_moment(double a, double s, const KineticWeight& w, const AngularGrid& ag);

struct CoercivityRow {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double delta = 0.0;
    double ratio = 0.0;
};

struct CoercivityScan {
    double c_min = 0.0;
    double argmin_theta1 = 0.0;
    double argmin_theta2 = 0.0;
    std::vector<CoercivityRow> rows;
};

/// Delta / |e^{i theta2} - e^{i theta1}|^3 over an n_angles x n_angles sweep
/// (theta_k = 2 pi k / n_angles), skipping the diagonal.
CoercivityScan coercivity_scan(const KineticWeight& w, const AngularGrid& ag, int n_angles = 360,
                               bool keep_rows = false);

/// Smooth compactly supported window zeta(x) = w((x1-cx)/R) w((x2-cy)/R), w(t) = (1 - t^2)^3.
struct TestWindow {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.5;

    double value(double x, double y) const;
    std::array<double, 2> gradient(double x, double y) const;
};

struct CompensationTerms {
    double dtau_term = 0.0;  ///< int d/dtau Delta zeta (centred difference in tau)
    double i_term = 0.0;     ///< int I^tau zeta
    double a_term = 0.0;     ///< int <A^tau, grad zeta>
    double residual = 0.0;   ///< |dtau_term - i_term + a_term|
};

/// Weak residual of d/dtau Delta(x, tau e1) = I^tau + div A^tau against zeta.
/// tau must be a whole number of x1 steps and the window must stay 2|tau| away
/// from non-periodic x1 edges (and inside the domain in x2).
CompensationTerms compensation_residual(const PhaseField2D& phi, const KineticWeight& w, const AngularGrid& ag,
                                        double tau, const TestWindow& zeta);

/// `theta1,theta2,delta,coercivity_ratio`
void write_coercivity_csv(std::ostream& os, const CoercivityScan& scan);

}  // namespace aniso
