#pragma once

#include <span>
#include <string>
#include <vector>

#include "aniso/errors.hpp"
#include "aniso/grid_field.hpp"

namespace aniso {

/// F_eps(t) = int_0^t sqrt(sin^2 s + eps cos^2 s) ds. Elementary closed form for
/// eps = 0 and eps = 1; incomplete elliptic integral of the second kind
/// otherwise, reduced to [0, pi/2] with F(t + pi) = F(t) + F(pi) and the
/// symmetry of the integrand about pi/2.
double F_eps(double t, double eps);

/// F_eps'(t) = sqrt(sin^2 t + eps cos^2 t).
double F_eps_derivative(double t, double eps);

/// Inverse of F_eps. Branch formula for eps = 0; safeguarded Newton inside a
/// bisection bracket otherwise, to |F_eps(x) - y| <= 1e-12 (scaled by |y|).
double F_eps_inverse(double y, double eps);

/// Exact 1D minimiser data on (a, b).
struct Profile1D {
    double eps = 0.0;
    double phi_minus = 0.0;
    double phi_plus = 0.0;
    int tau = 0;
    double e_min = 0.0;
    double a = -1.0;
    double b = 1.0;
};

/// e_min = (F(phi_plus) - F(phi_minus))^2 / (b - a), which is 1/2 (F(phi_+) - F(phi_-))^2 on (-1, 1).
Profile1D minimal_energy_1d(double eps, double phi_minus, double phi_plus, double a = -1.0, double b = 1.0);

/// phi(x) = F^{-1}(F(phi_-) + (x - a)/(b - a) (F(phi_+) - F(phi_-))), endpoints exact.
std::vector<double> minimizer_profile_1d(const Profile1D& p, std::span<const double> x);

/// Uniform samples a = x_0 < ... < x_{n-1} = b.
std::vector<double> uniform_samples(double a, double b, int n);

/// 1D energy parts: div_part = int (u1')^2, curl_part = int (u2')^2 and
/// total = div_part + eps curl_part, with u = e^{i phi} and chord differences
/// on uniform samples of (a, b). This is the 2D triangle scheme restricted to
/// x2-independent fields.
EnergyBreakdown energy_1d_parts(std::span<const double> phi, double eps, double a = -1.0, double b = 1.0);
double energy_1d(std::span<const double> phi, double eps, double a = -1.0, double b = 1.0);

/// Exact gradient of energy_1d with respect to the samples.
std::vector<double> energy_1d_gradient(std::span<const double> phi, double eps, double a = -1.0, double b = 1.0);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    /// Samples first..last (inclusive) belong to this interval.
    int first = 0;
    int last = 0;
};

struct IntervalDecomposition {
    double lambda = 0.0;
    double delta = 0.0;
    std::vector<Interval> elliptic;
    std::vector<Interval> nonelliptic;
    /// Sample estimate of the C^{1/4} seminorm, and whether lambda >= 2 [phi]_{1/4} delta^{1/4}.
    double holder_quarter = 0.0;
    bool holder_condition = false;
};

/// Raised when |sin phi(x) - sin phi(y)| >= lambda for some |x - y| < 16 delta.
class SeparationViolated : public InvalidArgument {
public:
    SeparationViolated(const std::string& what, double x, double y) : InvalidArgument(what), x_(x), y_(y) {}
    double x() const { return x_; }
    double y() const { return y_; }

private:
    double x_;
    double y_;
};

/// Splits [a, b] into elliptic pieces (|sin phi| >= lambda) and nonelliptic
/// pieces (|sin phi| <= 2 lambda), each of length >= 8 delta. Follows the
/// sup-of-J^ne/J^e induction with the terminal fix-up at b - 8 delta.
/// The separation property that drives the construction is checked directly on
/// the samples (|sin phi(x) - sin phi(y)| >= lambda implies |x - y| >= 16 delta).
IntervalDecomposition interval_decomposition(std::span<const double> phi, double lambda, double delta,
                                             double a = -1.0, double b = 1.0);

/// Sample estimate of [phi]_{1/4}: max over dyadic gaps of |phi(x+g) - phi(x)| / g^{1/4}.
double holder_quarter_seminorm(std::span<const double> phi, double a, double b);

struct DecompositionCheck {
    bool covers = false;
    bool disjoint = false;
    bool lengths = false;
    bool predicates = false;
    bool ok() const { return covers && disjoint && lengths && predicates; }
};

DecompositionCheck verify_decomposition(const IntervalDecomposition& d, std::span<const double> phi, double a,
                                        double b);

struct Recovery1D {
    double delta = 0.0;
    std::vector<double> phi_delta;
    std::vector<double> u1;
    std::vector<double> u2;
    EnergyBreakdown energy;
};

/// u^[delta] = e^{i phi_delta} with phi_delta = phi * rho_delta, delta = sqrt(eps),
/// rho = c (1 - x^2)^3 on (-1, 1). phi is extended by constants outside (a, b).
Recovery1D recovery_1d(std::span<const double> phi, double eps, double a = -1.0, double b = 1.0);

/// Same construction at an explicit delta.
Recovery1D recovery_1d_at(std::span<const double> phi, double eps, double delta, double a = -1.0, double b = 1.0);

}  // namespace aniso
