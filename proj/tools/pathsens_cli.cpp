// pathsens: command-line front end for the sensitivity toolkit.
//
// Subcommands: schlogl, langevin, zgb, exact.  Reports are JSON (the full
// resolved configuration and seed are embedded so every run is replayable),
// traces and sweeps are CSV.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error
// (absolute continuity, absorbing state, reducibility), 4 partial results.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathsens/pathsens.hpp"

using nlohmann::json;
using namespace pathsens;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kPartialResults = 4;

std::filesystem::path output_dir() {
    if (const char* env = std::getenv("PATHSENS_OUT_DIR")) return env;
    return ".";
}

std::filesystem::path resolve_out(const std::string& out, const std::string& fallback) {
    std::filesystem::path p = out.empty() ? fallback : out;
    if (p.is_relative()) p = output_dir() / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    f << j.dump(2) << "\n";
}

json eigen_to_json(const EigenReport& rep) {
    json j;
    j["values"] = rep.values;
    j["vectors"] = rep.vectors;
    j["degenerate"] = rep.degenerate;
    return j;
}

json fim_to_json(const Matrix& f, const std::vector<std::string>& names) {
    json j;
    j["k"] = f.rows();
    j["names"] = names;
    std::vector<double> data(f.data(), f.data() + f.rows() * f.cols());
    j["data"] = data;  // row-major
    return j;
}

void write_trace_csv(const ConvergenceTrace& tr, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    f.precision(17);
    f << "abscissa,estimate\n";
    for (const auto& pt : tr.points()) f << pt.abscissa << ',' << pt.estimate << "\n";
}

// Direction syntax: "axes" expands to +-eps0*e_k for all k; otherwise a
// comma-separated list of +ek / -ek tokens, or semicolon-separated explicit
// vectors "0.05,0,0,0;0,-0.05,0,0".
std::vector<Perturbation> parse_directions(const std::string& text, std::size_t k,
                                           double eps0) {
    std::vector<Perturbation> dirs;
    if (text == "axes") {
        for (std::size_t i = 0; i < k; ++i) {
            dirs.push_back(Perturbation::axis(i, k, eps0));
            dirs.push_back(Perturbation::axis(i, k, -eps0));
        }
        return dirs;
    }
    if (text == "none") return dirs;
    if (text.find_first_not_of("+-e0123456789,") == std::string::npos &&
        text.find('e') != std::string::npos && text.find(';') == std::string::npos &&
        text.find("e") != std::string::npos && text.find_first_of("+-") == 0) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.size() < 3 || (tok[0] != '+' && tok[0] != '-') || tok[1] != 'e')
                throw std::invalid_argument("bad direction token: " + tok);
            const std::size_t idx = std::stoul(tok.substr(2));
            if (idx < 1 || idx > k)
                throw std::invalid_argument("direction index out of range: " + tok);
            dirs.push_back(Perturbation::axis(idx - 1, k, tok[0] == '+' ? eps0 : -eps0));
        }
        return dirs;
    }
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        Vec v;
        std::stringstream comps(group);
        std::string comp;
        while (std::getline(comps, comp, ',')) v.push_back(std::stod(comp));
        if (v.size() != k)
            throw std::invalid_argument("direction vector has wrong dimension: " + group);
        dirs.emplace_back(std::move(v), group);
    }
    return dirs;
}

struct CommonOpts {
    std::string params;
    std::string directions = "axes";
    double epsilon0 = 0.05;
    std::string estimator = "h1";
    std::uint64_t seed = 1;
    std::size_t replicas = 1;
    bool log_scale = false;
    std::string out;
    std::string config_file;
    double trace_growth = 1.3;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--params", o.params, "comma-separated parameter values");
    cmd->add_option("--directions", o.directions,
                    "axes | +ek,-ek,... | explicit vectors 'a,b,..;c,d,..'");
    cmd->add_option("--epsilon0", o.epsilon0, "axis perturbation magnitude");
    cmd->add_option("--estimator", o.estimator, "h1 | h2")
        ->check(CLI::IsMember({"h1", "h2"}));
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--replicas", o.replicas, "independent replicas (stream ids 0..R-1)");
    cmd->add_flag("--log-scale", o.log_scale, "relative (log-parameter) sensitivity");
    cmd->add_option("--out", o.out, "report path (JSON)");
    cmd->add_option("--config", o.config_file, "JSON config file; flags override it");
    cmd->add_option("--trace-every", o.trace_growth,
                    "convergence-trace checkpoint growth factor (>1)");
}

Vec parse_values(const std::string& text) {
    Vec v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
}

// Flags not explicitly set on the command line fall back to config values.
void apply_config_overrides(const CLI::App* cmd, const json& cfg, CommonOpts& o) {
    auto use = [&](const char* flag, auto& target, const char* key) {
        using T = std::decay_t<decltype(target)>;
        if (cmd->count(flag) == 0 && cfg.contains(key)) target = cfg.at(key).get<T>();
    };
    use("--params", o.params, "params");
    use("--directions", o.directions, "directions");
    use("--epsilon0", o.epsilon0, "epsilon0");
    use("--estimator", o.estimator, "estimator");
    use("--seed", o.seed, "seed");
    use("--replicas", o.replicas, "replicas");
    use("--out", o.out, "out");
    use("--trace-every", o.trace_growth, "trace_every");
    if (cmd->count("--log-scale") == 0 && cfg.contains("log_scale"))
        o.log_scale = cfg.at("log_scale").get<bool>();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    f >> j;
    if (j.contains("config")) j = j.at("config");  // accept a previous report as config
    return j;
}

// mean and std error across replica estimates (replica count >= 2), else the
// single replica's batch-means error
struct Pooled {
    double estimate;
    double std_error;
};

Pooled pool(const std::vector<double>& est, const std::vector<double>& err) {
    if (est.size() == 1) return {est[0], err[0]};
    double m = 0.0;
    for (double x : est) m += x;
    m /= static_cast<double>(est.size());
    double v = 0.0;
    for (double x : est) v += (x - m) * (x - m);
    v /= static_cast<double>(est.size() - 1);
    return {m, std::sqrt(v / static_cast<double>(est.size()))};
}

// ---------------------------------------------------------------------------
// schlogl
// ---------------------------------------------------------------------------

struct SchloglOpts {
    CommonOpts common;
    double volume = 15.0;
    std::int64_t x0 = 100;
    std::size_t jumps = 1000000;
    double burn_in = 10.0;
    std::string trace_out;
    std::string dump_trajectory;
};

// tri-diagonal truncated rate matrices for the exact oracle
Matrix schlogl_rate_matrix(const models::SchloglModel& model, const ParameterVector& theta,
                           std::size_t x_max) {
    Matrix c(x_max + 1, x_max + 1);
    std::vector<double> r;
    for (std::size_t x = 0; x <= x_max; ++x) {
        model.rates(static_cast<std::int64_t>(x), theta, r);
        if (x + 1 <= x_max) c(x, x + 1) = r[models::SchloglModel::kBirth];
        if (x >= 1) c(x, x - 1) = r[models::SchloglModel::kDeath];
    }
    return c;
}

std::vector<Matrix> schlogl_grad_matrices(const models::SchloglModel& model,
                                          const ParameterVector& theta, std::size_t x_max) {
    std::vector<Matrix> g(4, Matrix(x_max + 1, x_max + 1));
    std::vector<double> gb;
    for (std::size_t x = 0; x <= x_max; ++x) {
        model.rate_grads(static_cast<std::int64_t>(x), theta,
                         models::SchloglModel::kBirth, gb);
        if (x + 1 <= x_max)
            for (std::size_t k = 0; k < 4; ++k) g[k](x, x + 1) = gb[k];
        model.rate_grads(static_cast<std::int64_t>(x), theta,
                         models::SchloglModel::kDeath, gb);
        if (x >= 1)
            for (std::size_t k = 0; k < 4; ++k) g[k](x, x - 1) = gb[k];
    }
    return g;
}

int run_schlogl(const SchloglOpts& o) {
    const CommonOpts& c = o.common;
    ParameterVector theta(c.params.empty() ? Vec{3.0, 1.0, 2.0, 3.5} : parse_values(c.params),
                          {"k1A", "k2", "k3B", "k4"});
    models::SchloglModel model(o.volume);
    if (!model.admissible(theta))
        throw std::invalid_argument("schlogl: parameters must be 4 positive values");

    std::vector<Perturbation> dirs = parse_directions(c.directions, 4, c.epsilon0);
    if (c.log_scale) {
        std::vector<Perturbation> scaled;
        for (const auto& d : dirs) scaled.push_back(log_scale_perturbation(d, theta));
        dirs = std::move(scaled);
    }
    for (const auto& d : dirs)
        if (!model.admissible(perturbed(theta, d)))
            throw std::invalid_argument("schlogl: direction '" + d.label +
                                        "' leaves the admissible region");

    // exact oracle on the truncated chain
    const auto bd = exact::birth_death_stationary(
        [&](std::size_t x) {
            std::vector<double> r;
            model.rates(static_cast<std::int64_t>(x), theta, r);
            return r[models::SchloglModel::kBirth];
        },
        [&](std::size_t x) {
            std::vector<double> r;
            model.rates(static_cast<std::int64_t>(x), theta, r);
            return r[models::SchloglModel::kDeath];
        });
    const Matrix c_theta = schlogl_rate_matrix(model, theta, bd.x_max);
    const std::vector<Matrix> grads = schlogl_grad_matrices(model, theta, bd.x_max);
    const Matrix fim_exact_raw = exact::exact_fim_ctmc(c_theta, grads, bd.mu);
    Matrix fim_exact = fim_exact_raw;

    // simulation, one pass per replica, all directions at once
    std::vector<std::vector<double>> est(dirs.size()), err(dirs.size());
    FimAccumulator fim_acc(4);
    ConvergenceTrace first_dir_trace(c.trace_growth);
    std::ofstream traj;
    if (!o.dump_trajectory.empty()) {
        traj.open(resolve_out(o.dump_trajectory, "trajectory.csv"));
        traj.precision(17);
        traj << "time,state_digest,event\n";
    }

    double sampled_time = 0.0;
    for (std::size_t rep = 0; rep < c.replicas; ++rep) {
        RngStream rng(c.seed, rep);
        SsaOptions opt;
        opt.burn_in_time = o.burn_in;
        opt.max_jumps = o.jumps;
        CtmcFimH1<models::SchloglModel> fim_hook(model, theta);
        double t = 0.0;
        auto dump_hook = [&](const std::int64_t& s, const std::vector<double>&, double,
                             std::size_t ev, double dt) {
            t += dt;
            if (traj.is_open() && rep == 0)
                traj << t << ',' << model.digest(s) << ',' << ev << "\n";
        };
        try {
            if (c.estimator == "h1") {
                CtmcRerH1<models::SchloglModel> rer(model, theta, dirs);
                run_ssa(model, o.x0, theta, rng, opt, rer, fim_hook, dump_hook);
                for (std::size_t d = 0; d < dirs.size(); ++d) {
                    est[d].push_back(rer.estimate(d));
                    err[d].push_back(rer.std_error(d));
                }
                if (rep == 0 && !dirs.empty()) first_dir_trace = rer.trace(0);
                sampled_time += rer.sampled_time();
            } else {
                CtmcRerH2<models::SchloglModel> rer(model, theta, dirs);
                run_ssa(model, o.x0, theta, rng, opt, rer, fim_hook, dump_hook);
                for (std::size_t d = 0; d < dirs.size(); ++d) {
                    est[d].push_back(rer.estimate(d));
                    err[d].push_back(rer.std_error(d));
                }
                if (rep == 0 && !dirs.empty()) first_dir_trace = rer.trace(0);
            }
        } catch (const AbsorbingStateError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kNumericalError;
        }
        fim_acc.merge(fim_hook.accumulator());
    }
    Matrix fim = fim_acc.estimate();
    if (c.log_scale) {
        fim = log_scale_fim(fim, theta);
        fim_exact = log_scale_fim(fim_exact, theta);
    }
    const EigenReport eig = eigen_sym(fim);

    json report;
    report["command"] = "schlogl";
    report["config"] = {{"params", c.params.empty() ? "3,1,2,3.5" : c.params},
                        {"volume", o.volume},
                        {"x0", o.x0},
                        {"jumps", o.jumps},
                        {"burn_in", o.burn_in},
                        {"directions", c.directions},
                        {"epsilon0", c.epsilon0},
                        {"estimator", c.estimator},
                        {"seed", c.seed},
                        {"replicas", c.replicas},
                        {"log_scale", c.log_scale},
                        {"trace_every", c.trace_growth}};
    json jdirs = json::array();
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const Pooled p = pool(est[d], err[d]);
        const Perturbation& eps = dirs[d];
        const ParameterVector tp = perturbed(theta, eps);
        const double exact_rer =
            exact::exact_rer_ctmc(c_theta, schlogl_rate_matrix(model, tp, bd.x_max), bd.mu);
        jdirs.push_back({{"direction", eps.label},
                         {"eps", eps.eps},
                         {"estimate", p.estimate},
                         {"std_error", p.std_error},
                         {"samples", o.jumps},
                         {"horizon", sampled_time / static_cast<double>(c.replicas)},
                         {"exact", exact_rer},
                         {"fim_quadratic", rer_quadratic(eps, fim_exact_raw)}});
    }
    report["directions"] = jdirs;
    report["fim"] = fim_to_json(fim, theta.names);
    report["fim_exact"] = fim_to_json(fim_exact, theta.names);
    report["eigen"] = eigen_to_json(eig);
    report["a_optimality"] = a_optimality(eig);
    report["d_optimality"] = a_optimality(eig);  // same determinant, both labels emitted

    write_json(report, resolve_out(c.out, "schlogl_report.json"));
    if (!o.trace_out.empty() && !dirs.empty())
        write_trace_csv(first_dir_trace, resolve_out(o.trace_out, "schlogl_trace.csv"));
    return kOk;
}

// ---------------------------------------------------------------------------
// langevin
// ---------------------------------------------------------------------------

struct LangevinOpts {
    CommonOpts common;
    models::LangevinSettings settings;
    double time = 10000.0;
    double burn_in = 100.0;
    std::string trace_out;
};

int run_langevin(const LangevinOpts& o) {
    const CommonOpts& c = o.common;
    ParameterVector theta(c.params.empty() ? Vec{0.3, 0.3, 1.0} : parse_values(c.params),
                          {"D_e", "a", "r_e"});
    models::LangevinModel model(o.settings);
    if (!model.admissible(theta))
        throw std::invalid_argument("langevin: parameters must be 3 positive values");

    std::vector<Perturbation> dirs = parse_directions(c.directions, 3, c.epsilon0);
    if (c.log_scale) {
        std::vector<Perturbation> scaled;
        for (const auto& d : dirs) scaled.push_back(log_scale_perturbation(d, theta));
        dirs = std::move(scaled);
    }

    ChainOptions opt;
    opt.steps = static_cast<std::size_t>(o.time / o.settings.dt);
    opt.burn_in_steps = static_cast<std::size_t>(o.burn_in / o.settings.dt);

    std::vector<std::vector<double>> est(dirs.size()), err(dirs.size());
    FimAccumulator fim_acc(3);
    ConvergenceTrace first_dir_trace(c.trace_growth);
    for (std::size_t rep = 0; rep < c.replicas; ++rep) {
        RngStream rng(c.seed, rep);
        auto s0 = model.initial_state(rng);
        ChainFimH2<models::LangevinModel> fim_hook(model, theta);
        try {
            ChainRerH2<models::LangevinModel> rer(model, theta, dirs);
            run_chain(model, s0, theta, rng, opt, rer, fim_hook);
            for (std::size_t d = 0; d < dirs.size(); ++d) {
                est[d].push_back(rer.estimate(d));
                err[d].push_back(rer.std_error(d));
            }
            if (rep == 0 && !dirs.empty()) first_dir_trace = rer.trace(0);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kNumericalError;
        }
        fim_acc.merge(fim_hook.accumulator());
    }
    Matrix fim = fim_acc.estimate();
    // per-unit-time normalization: per-step outer products divided by dt
    fim *= 1.0 / o.settings.dt;
    if (c.log_scale) fim = log_scale_fim(fim, theta);
    const EigenReport eig = eigen_sym(fim);

    json report;
    report["command"] = "langevin";
    report["config"] = {{"params", c.params.empty() ? "0.3,0.3,1" : c.params},
                        {"n_particles", o.settings.n_particles},
                        {"dim", o.settings.dim},
                        {"mass", o.settings.mass},
                        {"friction", o.settings.friction},
                        {"diffusion", o.settings.diffusion},
                        {"dt", o.settings.dt},
                        {"alpha", o.settings.alpha},
                        {"time", o.time},
                        {"burn_in", o.burn_in},
                        {"directions", c.directions},
                        {"epsilon0", c.epsilon0},
                        {"seed", c.seed},
                        {"replicas", c.replicas},
                        {"log_scale", c.log_scale},
                        {"trace_every", c.trace_growth}};
    json jdirs = json::array();
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const Pooled p = pool(est[d], err[d]);
        jdirs.push_back({{"direction", dirs[d].label},
                         {"eps", dirs[d].eps},
                         {"estimate", p.estimate},
                         {"std_error", p.std_error},
                         {"samples", opt.steps - opt.burn_in_steps},
                         {"horizon", o.time - o.burn_in}});
    }
    report["directions"] = jdirs;
    report["fim"] = fim_to_json(fim, theta.names);
    report["eigen"] = eigen_to_json(eig);
    report["a_optimality"] = a_optimality(eig);
    report["d_optimality"] = a_optimality(eig);
    // quadratic-form level-set data for each parameter-plane pair
    json planes = json::array();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            planes.push_back({{"axes", {theta.names[i], theta.names[j]}},
                              {"quadratic",
                               {fim(i, i), fim(i, j), fim(j, j)}}});
    report["level_sets"] = planes;

    write_json(report, resolve_out(c.out, "langevin_report.json"));
    if (!o.trace_out.empty() && !dirs.empty())
        write_trace_csv(first_dir_trace, resolve_out(o.trace_out, "langevin_trace.csv"));
    return kOk;
}

// ---------------------------------------------------------------------------
// zgb
// ---------------------------------------------------------------------------

struct ZgbOpts {
    CommonOpts common;
    int lattice = 64;
    double time = 100.0;
    double burn_in = 10.0;
    std::string snapshot_prefix;
    std::string phase_out;
    std::string phase_grid;  // "k1_lo,k1_hi,n1,k2_lo,k2_hi,n2"
    double phase_time = 20.0;
    double phase_burn_in = 5.0;
};

void write_lattice_csv(const models::ZgbLattice& lat, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    for (int y = 0; y < lat.size; ++y) {
        for (int x = 0; x < lat.size; ++x) {
            if (x) f << ',';
            f << static_cast<int>(lat.spin[static_cast<std::size_t>(y) * lat.size + x]);
        }
        f << "\n";
    }
}

struct ZgbRunResult {
    std::vector<double> rer_est, rer_err;  // per direction
    Matrix fim{2, 2};
    models::ZgbLattice final_lattice;
};

ZgbRunResult run_zgb_once(int L, double k1, double k2, const std::vector<Perturbation>& dirs,
                          double burn_in, double horizon, RngStream& rng) {
    models::ZgbSimulator sim(models::ZgbLattice(L), k1, k2);
    std::vector<RerAccumulator> accs(dirs.size());
    std::vector<BatchMeans> batches(dirs.size(), BatchMeans(32));
    FimAccumulator fim(2);
    Matrix sample(2, 2);
    sim.run(rng, burn_in, horizon, [&](const models::ZgbAggregates& agg, double dt) {
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const double s = agg.rer_sample(k1, k2, dirs[d].eps[0], dirs[d].eps[1]);
            accs[d].add(s, dt);
            batches[d].add(s, dt);
        }
        sample(0, 0) = agg.fim_sample_11(k1);
        sample(1, 1) = agg.fim_sample_22(k2);
        fim.add_matrix(sample, dt);
    });
    ZgbRunResult out;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        out.rer_est.push_back(accs[d].estimate());
        out.rer_err.push_back(batches[d].std_error());
    }
    out.fim = fim.estimate();
    out.final_lattice = sim.lattice();
    return out;
}

int run_zgb(const ZgbOpts& o) {
    const CommonOpts& c = o.common;
    ParameterVector theta(c.params.empty() ? Vec{0.35, 0.85} : parse_values(c.params),
                          {"k1", "k2"});
    models::zgb_check_theta(theta);
    std::vector<Perturbation> dirs =
        parse_directions(c.directions, 2, c.epsilon0 == 0.05 ? 0.02 : c.epsilon0);
    if (c.log_scale) {
        std::vector<Perturbation> scaled;
        for (const auto& d : dirs) scaled.push_back(log_scale_perturbation(d, theta));
        dirs = std::move(scaled);
    }
    for (const auto& d : dirs) models::zgb_check_theta(perturbed(theta, d));

    std::vector<std::vector<double>> est(dirs.size()), err(dirs.size());
    FimAccumulator fim_acc(2);
    models::ZgbLattice final_lat;
    for (std::size_t rep = 0; rep < c.replicas; ++rep) {
        RngStream rng(c.seed, rep);
        ZgbRunResult r;
        try {
            r = run_zgb_once(o.lattice, theta[0], theta[1], dirs, o.burn_in, o.time, rng);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kNumericalError;
        }
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            est[d].push_back(r.rer_est[d]);
            err[d].push_back(r.rer_err[d]);
        }
        fim_acc.add_matrix(r.fim);
        if (rep == 0) final_lat = r.final_lattice;
    }
    Matrix fim = fim_acc.estimate();
    if (c.log_scale) fim = log_scale_fim(fim, theta);
    const EigenReport eig = eigen_sym(fim);

    json report;
    report["command"] = "zgb";
    report["config"] = {{"params", c.params.empty() ? "0.35,0.85" : c.params},
                        {"lattice", o.lattice},
                        {"time", o.time},
                        {"burn_in", o.burn_in},
                        {"directions", c.directions},
                        {"epsilon0", c.epsilon0},
                        {"seed", c.seed},
                        {"replicas", c.replicas},
                        {"log_scale", c.log_scale}};
    json jdirs = json::array();
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const Pooled p = pool(est[d], err[d]);
        jdirs.push_back({{"direction", dirs[d].label},
                         {"eps", dirs[d].eps},
                         {"estimate", p.estimate},
                         {"std_error", p.std_error},
                         {"horizon", o.time - o.burn_in}});
    }
    report["directions"] = jdirs;
    report["fim"] = fim_to_json(fim, theta.names);
    report["eigen"] = eigen_to_json(eig);
    report["a_optimality"] = a_optimality(eig);
    report["d_optimality"] = a_optimality(eig);
    write_json(report, resolve_out(c.out, "zgb_report.json"));

    if (!o.snapshot_prefix.empty()) {
        write_lattice_csv(final_lat, resolve_out(o.snapshot_prefix + "_base.csv", ""));
        int idx = 0;
        for (const auto& d : dirs) {
            const ParameterVector tp = perturbed(theta, d);
            RngStream rng(c.seed, 1000 + idx);
            models::ZgbSimulator sim(models::ZgbLattice(o.lattice), tp[0], tp[1]);
            sim.run(rng, o.time, o.time, [](const models::ZgbAggregates&, double) {});
            write_lattice_csv(sim.lattice(),
                              resolve_out(o.snapshot_prefix + "_" + d.label + ".csv", ""));
            ++idx;
        }
    }

    if (!o.phase_out.empty()) {
        Vec spec = parse_values(o.phase_grid.empty() ? "0.2,0.5,4,0.5,1.2,4" : o.phase_grid);
        if (spec.size() != 6) throw std::invalid_argument("zgb: bad --phase-grid");
        const auto g1 = linspace(spec[0], spec[1], static_cast<std::size_t>(spec[2]));
        const auto g2 = linspace(spec[3], spec[4], static_cast<std::size_t>(spec[5]));
        std::size_t point = 0;
        const PhaseDiagram diagram = phase_diagram(g1, g2, [&](double k1, double k2) {
            RngStream rng(c.seed, 2000 + point++);
            const auto r = run_zgb_once(o.lattice, k1, k2, {}, o.phase_burn_in, o.phase_time,
                                        rng);
            return r.fim;
        });
        write_phase_diagram_csv(diagram, resolve_out(o.phase_out, "zgb_phase.csv"));
        for (const auto& pt : diagram.points)
            if (!pt.valid) {
                std::cerr << "warning: phase point (" << pt.p1 << "," << pt.p2
                          << ") failed: " << pt.error << "\n";
                return kPartialResults;
            }
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

struct ExactOpts {
    std::string chain_file, perturbed_file;
    bool ctmc = false;
    int verify_m = -1;
    bool schlogl_stationary = false;
    std::string schlogl_params = "3,1,2,3.5";
    double volume = 15.0;
    std::string out;
};

int run_exact(const ExactOpts& o) {
    json report;
    report["command"] = "exact";
    if (o.schlogl_stationary) {
        ParameterVector theta(parse_values(o.schlogl_params), {"k1A", "k2", "k3B", "k4"});
        models::SchloglModel model(o.volume);
        const auto bd = exact::birth_death_stationary(
            [&](std::size_t x) {
                std::vector<double> r;
                model.rates(static_cast<std::int64_t>(x), theta, r);
                return r[models::SchloglModel::kBirth];
            },
            [&](std::size_t x) {
                std::vector<double> r;
                model.rates(static_cast<std::int64_t>(x), theta, r);
                return r[models::SchloglModel::kDeath];
            });
        report["stationary"] = bd.mu;
        report["x_max"] = bd.x_max;
        write_json(report, resolve_out(o.out, "exact_report.json"));
        return kOk;
    }
    if (o.chain_file.empty() || o.perturbed_file.empty())
        throw std::invalid_argument("exact: --chain and --perturbed are required");
    const Matrix a = exact::load_matrix(o.chain_file);
    const Matrix b = exact::load_matrix(o.perturbed_file);
    try {
        if (o.ctmc) {
            const Vec mu = exact::finite_stationary_ctmc(a);
            report["stationary"] = mu;
            report["rer"] = exact::exact_rer_ctmc(a, b, mu);
        } else {
            const Vec mu = exact::finite_stationary(a);
            report["stationary"] = mu;
            report["rer"] = exact::exact_rer_chain(a, b, mu);
            if (o.verify_m >= 0) {
                const std::size_t m = static_cast<std::size_t>(o.verify_m);
                const double path_re = exact::brute_force_path_re(a, b, m);
                const double decomposed =
                    static_cast<double>(m) * report["rer"].get<double>() +
                    exact::relative_entropy(mu, exact::finite_stationary(b));
                report["verify"] = {{"m", m},
                                    {"path_re", path_re},
                                    {"decomposed", decomposed},
                                    {"residual", std::abs(path_re - decomposed)}};
            }
        }
    } catch (const exact::SupportViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    write_json(report, resolve_out(o.out, "exact_report.json"));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Path-space sensitivity toolkit: relative entropy rate and Fisher "
                 "information estimation for stationary stochastic dynamics"};
    app.require_subcommand(1);

    SchloglOpts so;
    CLI::App* schlogl = app.add_subcommand("schlogl", "bistable reaction network benchmark");
    add_common(schlogl, so.common);
    schlogl->add_option("--volume", so.volume, "system volume");
    schlogl->add_option("--x0", so.x0, "initial molecule count");
    schlogl->add_option("--jumps", so.jumps, "jump-count horizon");
    schlogl->add_option("--burn-in", so.burn_in, "burn-in time");
    schlogl->add_option("--trace-out", so.trace_out, "convergence trace CSV");
    schlogl->add_option("--dump-trajectory", so.dump_trajectory, "trajectory CSV");

    LangevinOpts lo;
    CLI::App* langevin = app.add_subcommand("langevin", "Morse-chain Langevin benchmark");
    add_common(langevin, lo.common);
    langevin->add_option("--particles", lo.settings.n_particles, "particle count");
    langevin->add_option("--dim", lo.settings.dim, "spatial dimension");
    langevin->add_option("--mass", lo.settings.mass, "particle mass");
    langevin->add_option("--friction", lo.settings.friction, "friction gamma");
    langevin->add_option("--diffusion", lo.settings.diffusion, "noise strength sigma");
    langevin->add_option("--dt", lo.settings.dt, "integrator step");
    langevin->add_option("--alpha", lo.settings.alpha, "non-gradient drive strength");
    langevin->add_option("--time", lo.time, "total simulated time");
    langevin->add_option("--burn-in", lo.burn_in, "burn-in time");
    langevin->add_option("--trace-out", lo.trace_out, "convergence trace CSV");

    ZgbOpts zo;
    CLI::App* zgb = app.add_subcommand("zgb", "lattice CO-oxidation benchmark");
    add_common(zgb, zo.common);
    zgb->add_option("--lattice", zo.lattice, "lattice side length");
    zgb->add_option("--time", zo.time, "total simulated time");
    zgb->add_option("--burn-in", zo.burn_in, "burn-in time");
    zgb->add_option("--snapshots", zo.snapshot_prefix, "lattice snapshot CSV prefix");
    zgb->add_option("--phase-out", zo.phase_out, "phase-diagram CSV path");
    zgb->add_option("--phase-grid", zo.phase_grid, "k1_lo,k1_hi,n1,k2_lo,k2_hi,n2");
    zgb->add_option("--phase-time", zo.phase_time, "per-point simulated time");
    zgb->add_option("--phase-burn-in", zo.phase_burn_in, "per-point burn-in");

    ExactOpts eo;
    CLI::App* exact_cmd = app.add_subcommand("exact", "small-system oracle utilities");
    exact_cmd->add_option("--chain", eo.chain_file, "matrix file (rows whitespace-separated)");
    exact_cmd->add_option("--perturbed", eo.perturbed_file, "perturbed matrix file");
    exact_cmd->add_flag("--ctmc", eo.ctmc, "treat matrices as rate matrices");
    exact_cmd->add_option("--verify", eo.verify_m,
                          "decomposition check horizon M (chains only)");
    exact_cmd->add_flag("--schlogl-stationary", eo.schlogl_stationary,
                        "emit the truncated birth-death stationary law");
    exact_cmd->add_option("--schlogl-params", eo.schlogl_params, "k1A,k2,k3B,k4");
    exact_cmd->add_option("--volume", eo.volume, "system volume");
    exact_cmd->add_option("--out", eo.out, "report path (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (schlogl->parsed()) {
            apply_config_overrides(schlogl, load_config(so.common.config_file), so.common);
            return run_schlogl(so);
        }
        if (langevin->parsed()) {
            apply_config_overrides(langevin, load_config(lo.common.config_file), lo.common);
            return run_langevin(lo);
        }
        if (zgb->parsed()) {
            apply_config_overrides(zgb, load_config(zo.common.config_file), zo.common);
            return run_zgb(zo);
        }
        if (exact_cmd->parsed()) return run_exact(eo);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const exact::SupportViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kConfigError;
}
