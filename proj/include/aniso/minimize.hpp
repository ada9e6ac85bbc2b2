#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "aniso/grid_field.hpp"

namespace aniso {

struct OptimizerConfig {
    int max_iters = 20000;
    /// Sup-norm gradient tolerance; 0 selects 1e-8 * sqrt(cell count).
    double grad_tol = 0.0;
    /// Warm-start values of eps, strictly decreasing. Entries above the target
    /// eps are run first; the target itself is always the final stage.
    std::vector<double> ladder;
    std::uint64_t seed = 0;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 60;
    /// Keep the per-iteration trace (can be large).
    bool record_trace = true;
};

struct IterationRecord {
    int iter = 0;
    double energy = 0.0;
    double div_part = 0.0;
    double curl_part = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

struct ContinuationStage {
    double eps = 0.0;
    EnergyBreakdown energy;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
};

struct MinimizeReport {
    EnergyBreakdown energy;
    int iterations = 0;
    double grad_norm = 0.0;
    double grad_tol = 0.0;
    /// False when a stage stopped at max_iters (or could not make progress) above grad_tol.
    bool converged = false;
    std::vector<ContinuationStage> stages;
    std::vector<IterationRecord> trace;
};

/// Energy and gradient over a flat coordinate vector; coordinates with
/// free[k] == 0 are never moved.
struct Objective {
    std::function<EnergyBreakdown(const std::vector<double>&)> energy;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    std::vector<std::uint8_t> free;
};

/// Steepest descent with Armijo backtracking and a Barzilai-Borwein initial
/// step. Every accepted step lowers the energy. Throws NumericalFailure on
/// non-finite energy or gradient (the message names the iteration).
MinimizeReport descend(std::vector<double>& x, const Objective& obj, const OptimizerConfig& cfg, double grad_tol,
                       int iter_offset = 0);

/// Stage list implied by a target eps and a ladder.
std::vector<double> continuation_stages(double eps, const std::vector<double>& ladder);

/// Minimises the discrete E_eps over nodal phases; pinned nodes are untouched.
std::pair<PhaseField2D, MinimizeReport> minimize_energy(const PhaseField2D& phi0, double eps,
                                                        const OptimizerConfig& cfg);

/// Same for an arbitrary energy scheme (the eps ladder replaces scheme.eps stage by stage).
std::pair<PhaseField2D, MinimizeReport> minimize_scheme(const PhaseField2D& phi0, const EnergyScheme& scheme,
                                                        const OptimizerConfig& cfg);

/// Minimises energy_1d over samples with both endpoints fixed.
std::pair<std::vector<double>, MinimizeReport> minimize_1d(const std::vector<double>& phi0, double eps,
                                                           const OptimizerConfig& cfg, double a = -1.0,
                                                           double b = 1.0);

struct GradientCheck {
    double max_rel_error = 0.0;
    int nodes_checked = 0;
    /// Every pinned node carries an exactly zero gradient entry.
    bool pinned_zero = true;
};

/// Analytic gradient against central differences (step 1e-6) at up to 100
/// seeded random free nodes. Relative error uses max(|a|, |fd|, 1e-3 |g|_inf).
GradientCheck gradient_check(const PhaseField2D& phi, double eps, std::uint64_t seed = 0, int nodes = 100);

/// `iter,energy,div_part,curl_part,grad_norm,step`
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace);

}  // namespace aniso
