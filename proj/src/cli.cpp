#include "aniso/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "aniso/exact1d.hpp"
#include "aniso/kinetic.hpp"
#include "aniso/parallel.hpp"
#include "aniso/recovery2d.hpp"
#include "aniso/singular.hpp"
#include "aniso/thinfilm.hpp"

namespace aniso {

namespace {

using json = nlohmann::json;

const double pi = std::acos(-1.0);

// ---- config reading ----

enum class Range { finite, positive, nonnegative };

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& j, const std::string& path, const std::vector<std::string>& keys) {
    if (!j.is_object()) throw ConfigError(path, "config entry '" + path + "' must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            throw ConfigError(join(path, it.key()), "unknown config key '" + join(path, it.key()) + "'");
}

double read_number(const json& v, const std::string& key, Range r) {
    if (!v.is_number()) throw ConfigError(key, "config key '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "config key '" + key + "' must be finite");
    if (r == Range::positive && !(x > 0.0)) throw ConfigError(key, "config key '" + key + "' must be positive");
    if (r == Range::nonnegative && !(x >= 0.0)) throw ConfigError(key, "config key '" + key + "' must be >= 0");
    return x;
}

long long read_integer(const json& v, const std::string& key, long long lo) {
    if (!v.is_number_integer()) throw ConfigError(key, "config key '" + key + "' must be an integer");
    const long long x = v.get<long long>();
    if (x < lo) throw ConfigError(key, "config key '" + key + "' must be >= " + std::to_string(lo));
    return x;
}

std::vector<double> read_numbers(const json& v, const std::string& key, Range r) {
    if (v.is_number()) return {read_number(v, key, r)};
    if (!v.is_array() || v.empty())
        throw ConfigError(key, "config key '" + key + "' must be a number or a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(read_number(v[k], key + "[" + std::to_string(k) + "]", r));
    return out;
}

std::string read_choice(const json& v, const std::string& key, const std::vector<std::string>& allowed) {
    if (!v.is_string()) throw ConfigError(key, "config key '" + key + "' must be a string");
    const std::string s = v.get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
        std::string list;
        for (const std::string& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw ConfigError(key, "config key '" + key + "' must be one of: " + list);
    }
    return s;
}

bool read_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError(key, "config key '" + key + "' must be true or false");
    return v.get<bool>();
}

int read_int(const json& v, const std::string& key, int lo) {
    const long long x = read_integer(v, key, lo);
    if (x > 1'000'000'000) throw ConfigError(key, "config key '" + key + "' is too large");
    return static_cast<int>(x);
}

BcMode bc_from(const std::string& s) {
    if (s == "free") return BcMode::free;
    if (s == "fully_periodic") return BcMode::fully_periodic;
    return BcMode::dirichlet_x1_periodic_x2;
}

void apply_defaults(ExperimentConfig& c, const json& j) {
    const std::string& k = c.experiment;
    if (!j.contains("eps")) {
        if (k == "exact1d") c.eps = {1.0, 0.1, 0.01};
        else if (k == "recover") c.eps = {0.1, 0.01, 0.001};
        else c.eps = {0.1};
    }
    if (!j.contains("bc") && (k == "besov" || k == "singular")) c.bc = BcMode::free;
    const bool has_field_kind = j.contains("field") && j["field"].contains("kind");
    if (!has_field_kind) {
        if (k == "besov") c.field.kind = "jump";
        else if (k == "singular") c.field.kind = "vortex";
    }
    if (!j.contains("grid") || !j["grid"].contains("nx") || !j["grid"].contains("ny")) {
        if (k == "besov" || k == "singular") c.grid.nx = c.grid.ny = 256;
    }
}

// ---- artifacts ----

std::string format(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void put(const std::string& name, const std::string& bytes) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << bytes;
        if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
        files_[name] = bytes;
    }

    std::vector<std::string> finish() {
        json m;
        m["files"] = json::array();
        std::vector<std::string> names;
        for (const auto& [name, bytes] : files_) {
            m["files"].push_back({{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
            names.push_back(name);
        }
        put_raw("manifest.json", m.dump(2) + "\n");
        return names;
    }

private:
    void put_raw(const std::string& name, const std::string& bytes) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << bytes;
        if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    }

    std::filesystem::path dir_;
    std::map<std::string, std::string> files_;
};

class Log {
public:
    Log(LogLevel level, std::ostream& os) : level_(level), os_(os) {}
    void info(const std::string& s) const {
        if (level_ != LogLevel::quiet) os_ << "[aniso] " << s << '\n';
    }
    void debug(const std::string& s) const {
        if (level_ == LogLevel::debug) os_ << "[aniso:debug] " << s << '\n';
    }

private:
    LogLevel level_;
    std::ostream& os_;
};

// ---- fields ----

Grid2D make_grid(const ExperimentConfig& c) {
    return grid_for({c.bc, c.phi_minus, c.phi_plus}, c.grid.nx, c.grid.ny, c.grid.lx, c.grid.ly);
}

PhaseField2D seeded_start(const Grid2D& g, const ExperimentConfig& c, std::uint64_t seed) {
    PhaseField2D phi = PhaseField2D::make(g, {c.bc, c.phi_minus, c.phi_plus});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double t = (g.x(i) + g.lx) / (2.0 * g.lx);
            const double ramp = c.bc == BcMode::fully_periodic ? 0.0 : c.phi_minus + t * (c.phi_plus - c.phi_minus);
            phi.at(i, j) = ramp + noise(rng);
        }
    phi.enforce_bc();
    return phi;
}

VectorField2D make_field(const Grid2D& g, const ExperimentConfig& c) {
    const FieldSpec& f = c.field;
    if (f.kind == "jump") return make_jump(g, {f.n});
    if (f.kind == "vortex") return make_vortex(g, f.core);
    if (f.kind == "profile") return embed_profile(g, f.eps0, c.phi_minus, c.phi_plus);
    VectorField2D u = VectorField2D::make(g);
    u.unit = true;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double p = f.kind == "smooth" ? f.amplitude * std::sin(pi * g.x(i)) * std::cos(pi * g.y(j)) : f.angle;
            u.u1[g.index(i, j)] = std::cos(p);
            u.u2[g.index(i, j)] = std::sin(p);
        }
    return u;
}

std::string suffix(const std::string& tag, double v) {
    std::ostringstream os;
    os << tag << std::setprecision(6) << v;
    return os.str();
}

// ---- runners ----

void run_exact1d(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    std::ostringstream sweep, plot;
    sweep << "eps,e_min,e_numeric,rel_err\n" << std::setprecision(17);
    plot << "eps,e_min\n" << std::setprecision(17);
    for (double eps : c.eps) {
        const Profile1D p = minimal_energy_1d(eps, c.phi_minus, c.phi_plus);
        double e_num = NAN, rel = NAN;
        if (c.samples > 0) {
            const auto [phi, rep] =
                minimize_1d(uniform_samples(c.phi_minus, c.phi_plus, c.samples), eps, c.optimizer);
            e_num = rep.energy.total;
            rel = std::abs(e_num - p.e_min) / p.e_min;
            if (!rep.converged) log.info("exact1d: 1D minimisation at eps = " + format(eps) + " did not converge");
        }
        sweep << eps << ',' << p.e_min << ',' << e_num << ',' << rel << '\n';
        plot << eps << ',' << p.e_min << '\n';
        const std::vector<double> xs = uniform_samples(-1.0, 1.0, std::max(c.samples, 2));
        const std::vector<double> phi = minimizer_profile_1d(p, xs);
        std::ostringstream prof;
        prof << "x,phi,u1,u2\n" << std::setprecision(17);
        for (std::size_t k = 0; k < xs.size(); ++k)
            prof << xs[k] << ',' << phi[k] << ',' << std::cos(phi[k]) << ',' << std::sin(phi[k]) << '\n';
        art.put("profile_" + suffix("eps", eps) + ".csv", prof.str());
        log.info("exact1d: eps = " + format(eps) + " e_min = " + format(p.e_min));
    }
    art.put("sweep.csv", sweep.str());
    art.put("plot_e_min.csv", plot.str());
}

void run_minimize(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const Grid2D g = make_grid(c);
    std::ostringstream sum;
    sum << "eps,seed,energy,div_part,curl_part,iterations,grad_norm,converged\n" << std::setprecision(17);
    for (double eps : c.eps)
        for (std::uint64_t seed : c.seeds) {
            const auto [phi, rep] = minimize_energy(seeded_start(g, c, seed), eps, c.optimizer);
            sum << eps << ',' << seed << ',' << rep.energy.total << ',' << rep.energy.div_part << ','
                << rep.energy.curl_part << ',' << rep.iterations << ',' << rep.grad_norm << ','
                << (rep.converged ? 1 : 0) << '\n';
            const std::string tag = suffix("eps", eps) + "_seed" + std::to_string(seed);
            std::ostringstream tr, fld, plot;
            write_trace_csv(tr, rep.trace);
            write_csv(fld, phase_to_vector(phi));
            plot << "iter,energy\n" << std::setprecision(17);
            for (const IterationRecord& r : rep.trace) plot << r.iter << ',' << r.energy << '\n';
            art.put("trace_" + tag + ".csv", tr.str());
            art.put("field_" + tag + ".csv", fld.str());
            art.put("plot_energy_" + tag + ".csv", plot.str());
            log.info("minimize: eps = " + format(eps) + " seed = " + std::to_string(seed) +
                     " energy = " + format(rep.energy.total) + " iterations = " + std::to_string(rep.iterations));
        }
    art.put("summary.csv", sum.str());
}

void run_thinfilm(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    if (c.bc != BcMode::dirichlet_x1_periodic_x2)
        throw ConfigError("bc", "config key 'bc' must be dirichlet_x1_periodic_x2 for thinfilm runs");
    const Grid2D g = thinfilm_grid(c.grid.nx, c.grid.ny);
    std::vector<ThinFilmRow> rows;
    for (double eps : c.eps)
        for (double aspect : c.aspect)
            for (std::uint64_t seed : c.seeds) {
                const ThinFilmParams p{eps, aspect, c.phi_minus, c.phi_plus};
                const ThinFilmResult r = minimize_thinfilm(p, thinfilm_start(g, p, seed), c.optimizer);
                const SymmetryDefect d = symmetry_defect_bound(r.field, p);
                rows.push_back({eps, aspect, r.report.energy.total, r.e_min, r.rel_err, r.x2_variation, d.margin});
                log.info("thinfilm: eps = " + format(eps) + " aspect = " + format(aspect) +
                         " rel_err = " + format(r.rel_err) + " x2_variation = " + format(r.x2_variation));
            }
    std::ostringstream os, plot;
    write_thinfilm_csv(os, rows);
    plot << "eps,rel_err\n" << std::setprecision(17);
    for (const ThinFilmRow& r : rows) plot << r.eps << ',' << r.rel_err << '\n';
    art.put("thinfilm.csv", os.str());
    art.put("plot_rel_err.csv", plot.str());
}

void run_besov(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const Grid2D g = make_grid(c);
    const VectorField2D u = make_field(g, c);
    const std::vector<Offset> offs = dyadic_offsets(g, c.besov.kmin, c.besov.kmax, c.besov.directions);
    const double margin = c.besov.margin >= 0.0 ? c.besov.margin : default_margin(g, offs);
    std::ostringstream fits;
    fits << "p,alpha,r2,n_scales\n" << std::setprecision(17);
    for (double p : c.besov.p) {
        const double s = c.besov.s > 0.0 ? c.besov.s : 1.0 / p;
        std::ostringstream scan;
        write_scan_csv(scan, g, regularity_scan(u, s, p, offs, margin));
        art.put("scan_" + suffix("p", p) + ".csv", scan.str());
        const ScalingFit f = scaling_exponent(u, p, offs, margin);
        fits << p << ',' << f.alpha << ',' << f.r2 << ',' << f.n_scales << '\n';
        log.info("besov: p = " + format(p) + " alpha = " + format(f.alpha) + " r2 = " + format(f.r2));
    }
    art.put("fits.csv", fits.str());
    const RegularityRatio rr = regularity_ratio(u, offs, margin);
    std::ostringstream ratio;
    ratio << "length,ratio\n" << std::setprecision(17);
    for (std::size_t k = 0; k < rr.lengths.size(); ++k) ratio << rr.lengths[k] << ',' << rr.ratios[k] << '\n';
    art.put("plot_ratio.csv", ratio.str());
    log.info("besov: regularity ratio = " + format(rr.value) +
             (detects_growth(rr.ratios) ? " (growth detected)" : " (no growth)"));
}

void run_kinetic(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const KineticWeight w = c.kinetic.weight == "sin2" ? KineticWeight::sin2() : KineticWeight::phi0();
    std::ostringstream sum;
    sum << "n_s,c_min,argmin_theta1,argmin_theta2\n" << std::setprecision(17);
    for (int ns : c.kinetic.n_s) {
        const CoercivityScan s = coercivity_scan(w, AngularGrid::make(ns), c.kinetic.n_angles, true);
        std::ostringstream os;
        write_coercivity_csv(os, s);
        art.put("coercivity_ns" + std::to_string(ns) + ".csv", os.str());
        sum << ns << ',' << s.c_min << ',' << s.argmin_theta1 << ',' << s.argmin_theta2 << '\n';
        log.info("kinetic: n_s = " + std::to_string(ns) + " c_min = " + format(s.c_min));
    }
    art.put("coercivity.csv", sum.str());

    auto field = [](int cells, auto f) {
        const Grid2D g = Grid2D::make(cells + 1, cells + 1, 1, 1);
        PhaseField2D phi = PhaseField2D::make(g, {});
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) phi.at(i, j) = f(g.x(i), g.y(j));
        return phi;
    };
    std::ostringstream comp, ent;
    comp << "grid,n_s,residual\n" << std::setprecision(17);
    ent << "grid,residual\n" << std::setprecision(17);
    for (auto [cells, ns] : c.kinetic.refinements) {
        const AngularGrid ag = AngularGrid::make(ns);
        const PhaseField2D phi = field(cells, [](double x, double y) { return 0.3 * std::sin(pi * x) * std::sin(pi * y); });
        const CompensationTerms t = compensation_residual(phi, KineticWeight::sin2(), ag, 0.125, TestWindow{0.0, 0.0, 0.6});
        comp << cells << ',' << ns << ',' << t.residual << '\n';
        const PhaseField2D psi = field(cells, [](double x, double y) { return std::sin(x) * std::cos(y); });
        const double r = entropy_production_residual(psi, ag, ag.sample([](double s) { return std::cos(2 * s); }));
        ent << cells << ',' << r << '\n';
        log.info("kinetic: cells = " + std::to_string(cells) + " compensation residual = " + format(t.residual) +
                 " chain-rule residual = " + format(r));
    }
    art.put("compensation.csv", comp.str());
    art.put("plot_chain_rule.csv", ent.str());
}

void run_recover(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const Grid2D g = make_grid(c);
    const RecoveryCurve curve = recovery_energy_curve(make_field(g, c), c.eps);
    for (const std::string& w : curve.warnings) log.info("recover: warning: " + w);
    std::ostringstream os, plot;
    write_recovery_csv(os, curve.rows);
    plot << "eps,total\n" << std::setprecision(17);
    for (const RecoveryRow& r : curve.rows) {
        plot << r.eps << ',' << r.total << '\n';
        log.info("recover: eps = " + format(r.eps) + " delta = " + format(r.delta) + " total = " + format(r.total) +
                 " target = " + format(r.target));
    }
    art.put("recovery.csv", os.str());
    art.put("plot_total.csv", plot.str());
}

void run_singular(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const Grid2D g = make_grid(c);
    const VectorField2D u = make_field(g, c);
    const double h = std::max(g.hx, g.hy);
    const double r = c.loop.radius_spacings * h;
    std::vector<Loop> loops{circle_loop(g, 0.0, 0.0, r, c.loop.nodes, "around_origin"),
                            circle_loop(g, 0.5 * g.lx, 0.5 * g.ly, std::min(r, 0.25 * std::min(g.lx, g.ly)),
                                        c.loop.nodes, "off_centre")};
    std::vector<LoopReport> rows;
    for (const Loop& l : loops) {
        rows.push_back({l.id, winding_number(u, l), jacobian_total(u, l)});
        log.info("singular: " + l.id + " winding = " + std::to_string(rows.back().winding) +
                 " jacobian = " + format(rows.back().jacobian_mass));
    }
    std::ostringstream os;
    write_loop_csv(os, rows);
    art.put("loops.csv", os.str());
}

void run_gradcheck(const ExperimentConfig& c, Artifacts& art, const Log& log) {
    const Grid2D g = make_grid(c);
    std::ostringstream os;
    os << "eps,seed,max_rel_error,nodes_checked,pinned_zero\n" << std::setprecision(17);
    for (double eps : c.eps)
        for (std::uint64_t seed : c.seeds) {
            const GradientCheck r = gradient_check(seeded_start(g, c, seed), eps, seed);
            os << eps << ',' << seed << ',' << r.max_rel_error << ',' << r.nodes_checked << ','
               << (r.pinned_zero ? 1 : 0) << '\n';
            log.info("gradcheck: eps = " + format(eps) + " max_rel_error = " + format(r.max_rel_error));
        }
    art.put("gradcheck.csv", os.str());
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "", {"experiment", "eps", "phi_minus", "phi_plus", "grid", "bc", "optimizer", "seeds", "besov",
                       "field", "aspect", "kinetic", "loop", "samples", "output"});
    ExperimentConfig c;
    c.source = text;
    if (!j.contains("experiment")) throw ConfigError("experiment", "config key 'experiment' is required");
    c.experiment = read_choice(j["experiment"], "experiment", experiment_kinds());
    if (j.contains("eps")) c.eps = read_numbers(j["eps"], "eps", Range::positive);
    if (j.contains("phi_minus")) c.phi_minus = read_number(j["phi_minus"], "phi_minus", Range::finite);
    if (j.contains("phi_plus")) c.phi_plus = read_number(j["phi_plus"], "phi_plus", Range::finite);
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"nx", "ny", "lx", "ly"});
        if (g.contains("nx")) c.grid.nx = read_int(g["nx"], "grid.nx", 3);
        if (g.contains("ny")) c.grid.ny = read_int(g["ny"], "grid.ny", 3);
        if (g.contains("lx")) c.grid.lx = read_number(g["lx"], "grid.lx", Range::positive);
        if (g.contains("ly")) c.grid.ly = read_number(g["ly"], "grid.ly", Range::positive);
    }
    if (j.contains("bc"))
        c.bc = bc_from(read_choice(j["bc"], "bc", {"free", "dirichlet_x1_periodic_x2", "fully_periodic"}));
    c.optimizer.record_trace = false;
    if (j.contains("optimizer")) {
        const json& o = j["optimizer"];
        check_keys(o, "optimizer", {"max_iters", "grad_tol", "ladder", "record_trace"});
        if (o.contains("max_iters")) c.optimizer.max_iters = read_int(o["max_iters"], "optimizer.max_iters", 1);
        if (o.contains("grad_tol")) c.optimizer.grad_tol = read_number(o["grad_tol"], "optimizer.grad_tol", Range::nonnegative);
        if (o.contains("ladder")) c.optimizer.ladder = read_numbers(o["ladder"], "optimizer.ladder", Range::positive);
        if (o.contains("record_trace")) c.optimizer.record_trace = read_bool(o["record_trace"], "optimizer.record_trace");
    }
    if (j.contains("seeds")) {
        const json& s = j["seeds"];
        c.seeds.clear();
        if (s.is_number_integer()) c.seeds.push_back(static_cast<std::uint64_t>(read_integer(s, "seeds", 0)));
        else if (s.is_array() && !s.empty())
            for (std::size_t k = 0; k < s.size(); ++k)
                c.seeds.push_back(static_cast<std::uint64_t>(read_integer(s[k], "seeds[" + std::to_string(k) + "]", 0)));
        else throw ConfigError("seeds", "config key 'seeds' must be an integer or a non-empty array of integers");
    }
    c.optimizer.seed = c.seeds.front();
    if (j.contains("besov")) {
        const json& b = j["besov"];
        check_keys(b, "besov", {"kmin", "kmax", "directions", "p", "s", "margin"});
        if (b.contains("kmin")) c.besov.kmin = read_int(b["kmin"], "besov.kmin", 0);
        if (b.contains("kmax")) c.besov.kmax = read_int(b["kmax"], "besov.kmax", 0);
        if (c.besov.kmax < c.besov.kmin) throw ConfigError("besov.kmax", "config key 'besov.kmax' must be >= besov.kmin");
        if (b.contains("directions")) {
            const json& d = b["directions"];
            if (!d.is_array() || d.empty())
                throw ConfigError("besov.directions", "config key 'besov.directions' must be a non-empty array");
            c.besov.directions.clear();
            for (std::size_t k = 0; k < d.size(); ++k) {
                const std::string s =
                    read_choice(d[k], "besov.directions[" + std::to_string(k) + "]", {"e1", "e2", "diagonal"});
                c.besov.directions.push_back(s == "e1" ? Direction::e1 : s == "e2" ? Direction::e2 : Direction::diagonal);
            }
        }
        if (b.contains("p")) c.besov.p = read_numbers(b["p"], "besov.p", Range::positive);
        for (double p : c.besov.p)
            if (p < 1.0) throw ConfigError("besov.p", "config key 'besov.p' must be >= 1");
        if (b.contains("s")) c.besov.s = read_number(b["s"], "besov.s", Range::positive);
        if (b.contains("margin")) c.besov.margin = read_number(b["margin"], "besov.margin", Range::nonnegative);
    }
    if (j.contains("field")) {
        const json& f = j["field"];
        check_keys(f, "field", {"kind", "n", "core", "eps0", "amplitude", "angle"});
        if (f.contains("kind"))
            c.field.kind = read_choice(f["kind"], "field.kind", {"jump", "vortex", "profile", "smooth", "constant"});
        if (f.contains("n")) c.field.n = read_number(f["n"], "field.n", Range::finite);
        if (std::abs(c.field.n) >= 1.0) throw ConfigError("field.n", "config key 'field.n' must satisfy |n| < 1");
        if (f.contains("core")) c.field.core = read_number(f["core"], "field.core", Range::nonnegative);
        if (f.contains("eps0")) c.field.eps0 = read_number(f["eps0"], "field.eps0", Range::positive);
        if (f.contains("amplitude")) c.field.amplitude = read_number(f["amplitude"], "field.amplitude", Range::finite);
        if (f.contains("angle")) c.field.angle = read_number(f["angle"], "field.angle", Range::finite);
    }
    if (j.contains("aspect")) c.aspect = read_numbers(j["aspect"], "aspect", Range::positive);
    if (j.contains("kinetic")) {
        const json& k = j["kinetic"];
        check_keys(k, "kinetic", {"n_s", "n_angles", "weight", "refinements"});
        if (k.contains("n_s")) {
            c.kinetic.n_s.clear();
            for (double v : read_numbers(k["n_s"], "kinetic.n_s", Range::positive)) {
                if (v != std::floor(v)) throw ConfigError("kinetic.n_s", "config key 'kinetic.n_s' must hold integers");
                c.kinetic.n_s.push_back(static_cast<int>(v));
            }
        }
        if (k.contains("n_angles")) c.kinetic.n_angles = read_int(k["n_angles"], "kinetic.n_angles", 2);
        if (k.contains("weight")) c.kinetic.weight = read_choice(k["weight"], "kinetic.weight", {"phi0", "sin2"});
        if (k.contains("refinements")) {
            const json& r = k["refinements"];
            if (!r.is_array())
                throw ConfigError("kinetic.refinements", "config key 'kinetic.refinements' must be an array of [cells, n_s]");
            c.kinetic.refinements.clear();
            for (std::size_t m = 0; m < r.size(); ++m) {
                const std::string key = "kinetic.refinements[" + std::to_string(m) + "]";
                if (!r[m].is_array() || r[m].size() != 2) throw ConfigError(key, "config key '" + key + "' must be [cells, n_s]");
                c.kinetic.refinements.emplace_back(read_int(r[m][0], key, 4), read_int(r[m][1], key, 4));
            }
        }
    }
    if (j.contains("loop")) {
        const json& l = j["loop"];
        check_keys(l, "loop", {"radius_spacings", "nodes"});
        if (l.contains("radius_spacings"))
            c.loop.radius_spacings = read_number(l["radius_spacings"], "loop.radius_spacings", Range::positive);
        if (l.contains("nodes")) c.loop.nodes = read_int(l["nodes"], "loop.nodes", 3);
    }
    if (j.contains("samples")) c.samples = read_int(j["samples"], "samples", 0);
    if (c.samples == 1) throw ConfigError("samples", "config key 'samples' must be 0 or >= 2");
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw ConfigError("output", "config key 'output' must be a string");
        c.output = j["output"].get<std::string>();
    }
    apply_defaults(c, j);
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &n, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int k = 0; k < n; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    return os.str();
}

LogLevel log_level_from_env() {
    const char* v = std::getenv("ANISO_LOG");
    if (!v) return LogLevel::info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::quiet;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    throw ConfigError("ANISO_LOG", "ANISO_LOG must be quiet, info or debug");
}

std::vector<std::string> run_experiment(const ExperimentConfig& c, const std::filesystem::path& out, LogLevel level,
                                        std::ostream& log_stream) {
    const Log log(level, log_stream);
    Artifacts art(out);
    art.put("config.json", c.source);
    log.debug("experiment " + c.experiment + " into " + out.string() + " with " + std::to_string(thread_count()) +
              " thread(s)");
    const std::string& k = c.experiment;
    if (k == "exact1d") run_exact1d(c, art, log);
    else if (k == "minimize") run_minimize(c, art, log);
    else if (k == "thinfilm") run_thinfilm(c, art, log);
    else if (k == "besov") run_besov(c, art, log);
    else if (k == "kinetic") run_kinetic(c, art, log);
    else if (k == "recover") run_recover(c, art, log);
    else if (k == "singular") run_singular(c, art, log);
    else if (k == "gradcheck") run_gradcheck(c, art, log);
    else throw ConfigError("experiment", "unknown experiment '" + k + "'");
    return art.finish();
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"aniso: anisotropic energy experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    int threads = 1;
    for (const std::string& kind : experiment_kinds()) {
        CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config's 'output')");
        sub->add_option("--threads", threads, "worker threads (default 1)")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    }
    const std::string kind = app.get_subcommands().front()->get_name();
    try {
        const LogLevel level = log_level_from_env();
        std::ifstream f(config_path, std::ios::binary);
        if (!f) throw ConfigError("--config", "cannot read config file '" + config_path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        const ExperimentConfig cfg = parse_config(ss.str());
        if (cfg.experiment != kind)
            throw ConfigError("experiment", "config key 'experiment' is '" + cfg.experiment + "' but the subcommand is '" +
                                                kind + "'");
        const std::string dir = out_dir.empty() ? cfg.output : out_dir;
        if (dir.empty()) throw ConfigError("output", "no output directory: pass --out or set config key 'output'");
        set_thread_count(threads);
        const std::vector<std::string> files = run_experiment(cfg, dir, level, err);
        out << "wrote " << files.size() + 1 << " files to " << dir << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key() << "]: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace aniso
