#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aniso/grid_field.hpp"

namespace aniso {

enum class Direction { e1, e2, diagonal };

/// Dyadic offsets |h| ~ L / 2^k, k = kmin..kmax, snapped to whole grid steps,
/// for each requested direction. L is the x1-width of the domain. Offsets that
/// snap to zero or repeat are dropped.
std::vector<Offset> dyadic_offsets(const Grid2D& g, int kmin = 2, int kmax = 8,
                                   const std::vector<Direction>& dirs = {Direction::e1, Direction::e2,
                                                                         Direction::diagonal});

/// || D^h u ||_{L^p(O' cap (O' - h))} where O' is the domain shrunk by `margin`
/// on non-periodic sides. Nodes carry the uniform weight hx*hy.
double lp_difference_norm(const VectorField2D& u, Offset h, double p, double margin = 0.0);

struct RegularityScan {
    double p = 0.0;
    double s = 0.0;
    double margin = 0.0;
    std::vector<Offset> offsets;
    std::vector<double> lengths;
    std::vector<double> norms;
    std::vector<double> quotients;
    /// max of the quotients: a lower bound for the B^s_{p,inf} seminorm.
    double seminorm_lower_bound = 0.0;
};

RegularityScan regularity_scan(const VectorField2D& u, double s, double p, const std::vector<Offset>& offsets,
                               double margin);

/// max_h || D^h u ||_p / |h|^s over the finite offset set (a lower bound for the true sup).
double besov_seminorm(const VectorField2D& u, double s, double p, const std::vector<Offset>& offsets, double margin);

/// Default margin 2 max|h|.
double default_margin(const Grid2D& g, const std::vector<Offset>& offsets);

struct GagliardoPlan {
    std::uint64_t seed = 0;
    std::size_t pairs = 0;
};

/// |u|^p_{W^{s,p}(O')} = sum over ordered node pairs x != y of
/// |u(x) - u(y)|^p / |x - y|^{2 + sp} (hx hy)^2. Exhaustive up to 4096 nodes in
/// O'; larger sets need a seeded Monte-Carlo plan.
double gagliardo_seminorm(const VectorField2D& u, double s, double p, double margin,
                          std::optional<GagliardoPlan> plan = std::nullopt);

struct ScalingFit {
    bool defined = false;
    double alpha = 0.0;
    double r2 = 0.0;
    int n_scales = 0;
};

/// Least-squares slope of log ||D^h u||_p against log |h|. Needs >= 4 distinct
/// scales; undefined when any norm is zero.
ScalingFit scaling_exponent(const VectorField2D& u, double p, const std::vector<Offset>& offsets, double margin);
ScalingFit fit_loglog(const std::vector<double>& lengths, const std::vector<double>& values);

struct RegularityRatio {
    double value = 0.0;
    double div_l2 = 0.0;
    std::vector<double> lengths;
    std::vector<double> ratios;
};

/// sup_h || D^h u ||_{L^3(O')} / ((1 + ||div u||_{L^2})^{1/2} |h|^{1/2}), with the
/// centred divergence over the whole domain.
RegularityRatio regularity_ratio(const VectorField2D& u, const std::vector<Offset>& offsets, double margin);

/// True when some run of `steps` consecutive entries (ordered by decreasing
/// |h|) grows strictly at every step and by at least `factor` overall.
bool detects_growth(const std::vector<double>& quotients, double factor = 1.5, int steps = 4);

/// `p,s,hx,hy,norm,quotient` and `p,alpha,r2,n_scales`.
void write_scan_csv(std::ostream& os, const Grid2D& g, const RegularityScan& scan);
void write_fit_csv(std::ostream& os, double p, const ScalingFit& fit);

}  // namespace aniso
