#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aniso/besov.hpp"
#include "aniso/errors.hpp"
#include "aniso/grid_field.hpp"
#include "aniso/minimize.hpp"

namespace aniso {

/// Invalid configuration; `key()` is the dotted path of the offending entry.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string key, const std::string& what) : InvalidArgument(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct GridSpec {
    int nx = 64;
    int ny = 64;
    double lx = 1.0;
    double ly = 1.0;
};

/// Prescribed fields for besov, recover and singular runs.
struct FieldSpec {
    std::string kind = "profile";  ///< jump, vortex, profile, smooth, constant
    double n = 0.0;                ///< jump normal component
    double core = 2.0;             ///< vortex core radius in spacings
    double eps0 = 0.1;             ///< eps of the embedded 1D profile
    double amplitude = 0.8;        ///< smooth field: phi = a sin(pi x1) cos(pi x2)
    double angle = 0.0;            ///< constant field direction
};

struct BesovSpec {
    int kmin = 3;
    int kmax = 7;
    std::vector<Direction> directions{Direction::e1};
    std::vector<double> p{3.0};
    /// Smoothness of the quotient; <= 0 selects 1/p.
    double s = 0.0;
    /// Inset of the domain; < 0 selects default_margin (2 max |h|).
    double margin = -1.0;
};

struct KineticSpec {
    std::vector<int> n_s{256, 512};
    int n_angles = 360;
    std::string weight = "phi0";
    /// (cells, n_s) pairs of the compensation-residual refinement.
    std::vector<std::pair<int, int>> refinements{{32, 64}, {64, 128}, {128, 256}};
};

struct LoopSpec {
    double radius_spacings = 64.0;
    int nodes = 256;
};

struct ExperimentConfig {
    std::string experiment;
    std::vector<double> eps{1.0};
    double phi_minus = 0.0;
    double phi_plus = 1.5707963267948966;
    GridSpec grid;
    BcMode bc = BcMode::dirichlet_x1_periodic_x2;
    OptimizerConfig optimizer;
    std::vector<std::uint64_t> seeds{0};
    BesovSpec besov;
    FieldSpec field;
    std::vector<double> aspect{0.1};
    KineticSpec kinetic;
    LoopSpec loop;
    /// Sample count of the 1D minimisation in exact1d runs (0 skips it).
    int samples = 512;
    std::string output;
    /// The configuration text as read.
    std::string source;
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> k{"minimize", "thinfilm", "exact1d", "besov",
                                            "kinetic",  "recover",  "singular", "gradcheck"};
    return k;
}

/// Parses and validates JSON text. Unknown keys, wrong types and
/// non-positive or non-finite numbers raise ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

enum class LogLevel { quiet, info, debug };

/// Reads ANISO_LOG (unset means info); throws ConfigError on other values.
LogLevel log_level_from_env();

/// Runs one experiment into `out` (created if missing): CSV artifacts, the
/// verbatim config as config.json, and manifest.json listing every other file
/// with its size and SHA-256. Returns the artifact names in manifest order.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out,
                                        LogLevel level, std::ostream& log);

/// `aniso <subcommand> --config <file> [--out <dir>] [--threads N]`.
/// Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure,
/// 1 anything else (I/O).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aniso
