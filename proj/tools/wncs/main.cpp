// Command line front end: rate bounds, power design, simulation, cover-time
// statistics, and config validation. Every run drops a manifest that can be
// fed back through --config to reproduce the outputs byte for byte.

#include "wncs/config.hpp"
#include "wncs/error.hpp"
#include "wncs/lpsolve.hpp"
#include "wncs/numerics.hpp"
#include "wncs/power.hpp"
#include "wncs/protocols.hpp"
#include "wncs/rng.hpp"
#include "wncs/sim.hpp"
#include "wncs/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace {

using nlohmann::json;
using namespace wncs;

json to_json(const Vector& v) { return json(v); }

json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write file: " + path);
    f << j.dump(2) << "\n";
}

struct CommonArgs {
    std::string config;
    std::string out = ".";
    std::uint64_t seed = 42;
    unsigned threads = 0;
    double tol = 1e-6;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
    std::size_t trials = 0;   // 0: take from config
    std::size_t grid = 0;     // 0: take from config / default
    double delta = -1.0;      // <0: take from config
    std::string mode = "lp";  // power only
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_mode) {
    cmd->add_option("--config", a.config, "config or run-manifest JSON")->required();
    cmd->add_option("--out", a.out, "output directory");
    a.seed_opt = cmd->add_option("--seed", a.seed, "random seed");
    a.trials_opt = cmd->add_option("--trials", a.trials, "number of trials");
    a.grid_opt = cmd->add_option("--grid", a.grid, "grid resolution / output points");
    a.delta_opt = cmd->add_option("--delta", a.delta, "stability slack delta");
    cmd->add_option("--tol", a.tol, "relative tolerance for gain computations");
    cmd->add_option("--threads", a.threads, "worker threads (0 = auto)");
    if (with_mode) {
        cmd->add_option("--mode", a.mode, "lp, two-link, or region")
            ->check(CLI::IsMember({"lp", "two-link", "region"}));
    }
}

// manifest re-runs restore the recorded flags unless the user passed new ones
void apply_manifest_flags(const LoadedConfig& lc, CommonArgs& a) {
    if (!lc.from_manifest || !lc.manifest_flags.is_object()) return;
    const json& mf = lc.manifest_flags;
    if (a.seed_opt && !a.seed_opt->count() && mf.contains("seed")) {
        a.seed = mf["seed"].get<std::uint64_t>();
    }
    if (a.trials_opt && !a.trials_opt->count() && mf.contains("trials")) {
        a.trials = mf["trials"].get<std::size_t>();
    }
    if (a.grid_opt && !a.grid_opt->count() && mf.contains("grid")) {
        a.grid = mf["grid"].get<std::size_t>();
    }
    if (a.delta_opt && !a.delta_opt->count() && mf.contains("delta")) {
        a.delta = mf["delta"].get<double>();
    }
    if (mf.contains("mode") && a.mode == "lp") a.mode = mf["mode"].get<std::string>();
}

json effective_flags(const CommonArgs& a) {
    json f;
    f["seed"] = a.seed;
    f["trials"] = a.trials;
    f["grid"] = a.grid;
    f["delta"] = a.delta;
    f["tol"] = a.tol;
    f["mode"] = a.mode;
    return f;
}

void finish_run(const CommonArgs& a, const LoadedConfig& lc, const std::string& command,
                std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.config = lc.doc;
    m.flags = effective_flags(a);
    m.outputs = std::move(outputs);
    write_manifest((std::filesystem::path(a.out) / "manifest.json").string(), m);
}

double resolve_omega(const Config& cfg) {
    if (cfg.omega) return *cfg.omega;
    if (cfg.tau_bar) return 1.0 / *cfg.tau_bar;
    if (cfg.power) return 1.0 / cfg.power->tau_bar;
    throw ConfigError("config has no transmission rate (transmission.omega or tau_bar)");
}

json curve_summary(const RateBoundResult& r) {
    json j;
    j["omega_star"] = r.omega_star;
    j["tabbara_omega"] = r.tabbara_omega;
    j["validity_floor"] = r.validity_floor;
    return j;
}

void write_curve_csv(const std::string& path, const std::vector<LhsSample>& curve) {
    Vector w(curve.size()), lhs(curve.size()), rho(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        w[i] = curve[i].omega;
        lhs[i] = curve[i].lhs;
        rho[i] = curve[i].rho;
    }
    write_csv(path, {"omega", "lhs", "rho"}, {w, lhs, rho});
}

int cmd_rate(CommonArgs& a) {
    const LoadedConfig lc = load_config_file(a.config);
    apply_manifest_flags(lc, a);
    const Config cfg = parse_config(lc.doc);
    if (!cfg.network) throw ConfigError("rate analysis needs a 'network' block");
    const LtiWncs sys = build_system(cfg);
    const RateAnalysis ra = analyze_rates(sys, *cfg.network, a.tol);

    std::filesystem::create_directories(a.out);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(a.out) / name).string();
    };
    write_curve_csv(out("lhs_stochastic.csv"), ra.stochastic.lhs_curve);
    write_curve_csv(out("lhs_deterministic.csv"), ra.deterministic.lhs_curve);

    json rep;
    rep["stochastic"] = curve_summary(ra.stochastic);
    rep["stochastic"]["gamma"] = ra.gamma_stochastic;
    rep["stochastic"]["growth_norm"] = ra.norm_a_abs;
    rep["deterministic"] = curve_summary(ra.deterministic);
    rep["deterministic"]["gamma"] = ra.gamma_deterministic;
    rep["deterministic"]["growth_constant"] = ra.l;
    json kc;
    kc["a1"] = ra.constants.a1;
    kc["a2"] = ra.constants.a2;
    kc["eta"] = ra.constants.eta;
    kc["l1"] = ra.constants.l1;
    kc["kappa_bar"] = ra.constants.kappa_bar;
    kc["expected_kappa"] = to_json(ra.constants.expected_kappa);
    rep["protocol_constants"] = kc;
    rep["node_probabilities"] = to_json(node_probabilities(*cfg.network));
    if (!cfg.annotations.is_null()) rep["annotations"] = cfg.annotations;
    write_json(out("rate_report.json"), rep);

    finish_run(a, lc, "rate",
               {"rate_report.json", "lhs_stochastic.csv", "lhs_deterministic.csv"});
    std::printf("stochastic omega* %.6f (floor %.6f, single-probability %.6f)\n",
                ra.stochastic.omega_star, ra.stochastic.validity_floor,
                ra.stochastic.tabbara_omega);
    std::printf("round-robin omega* %.6f (floor %.6f, single-probability %.6f)\n",
                ra.deterministic.omega_star, ra.deterministic.validity_floor,
                ra.deterministic.tabbara_omega);
    return 0;
}

int cmd_power(CommonArgs& a) {
    const LoadedConfig lc = load_config_file(a.config);
    apply_manifest_flags(lc, a);
    const Config cfg = parse_config(lc.doc);
    if (!cfg.power) throw ConfigError("power design needs a 'power' block");
    PowerConfig pc = *cfg.power;
    if (a.delta >= 0.0) pc.delta = a.delta;
    const StabilityConstant stab = make_stability_constant(pc.tau_bar, pc.gamma, pc.l, pc.eta,
                                                           pc.delta, pc.channel.a);
    std::filesystem::create_directories(a.out);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(a.out) / name).string();
    };

    json rep;
    rep["c_tau"] = stab.c_tau;
    rep["tau_bar"] = stab.tau_bar;
    rep["delta"] = stab.delta;
    std::vector<std::string> outputs{"solution.json"};

    if (a.mode == "lp") {
        const std::size_t grid = a.grid ? a.grid : pc.grid;
        const PowerSolution sol = solve_problem2(pc.channel, stab, grid, a.threads);
        rep["q_star"] = to_json(sol.q_star);
        rep["powers"] = to_json(sol.powers);
        rep["objective"] = sol.objective;
        rep["sinr"] = to_json(sol.sinr_values);
        rep["phi"] = to_json(sol.phi_values);
        rep["phi_product"] = sol.phi_product;
        rep["required_product"] = sol.required_product;
        rep["p_max_margin"] = sol.p_max_margin;
        rep["grid"] = grid ? grid : default_grid_resolution(pc.channel.g.rows());
    } else if (a.mode == "two-link") {
        const TwoLinkFeasibility feas = two_link_feasibility(pc.channel, stab);
        rep["tau_bar_bound"] = feas.tau_bar_bound;
        rep["c_min"] = feas.c_min;
        rep["feasible"] = feas.feasible;
        rep["within_p_max"] = feas.within_p_max;
        if (feas.interval_nonempty) {
            const auto iv = two_link_interval(pc.channel, stab.c_tau);
            rep["epsilon_interval"] = {iv.first, iv.second};
            rep["epsilon_star"] = feas.optimum.epsilon;
            rep["powers"] = to_json(feas.optimum.powers);
            rep["objective"] = feas.optimum.objective;
            rep["quadratic"] = {feas.optimum.quad_a, feas.optimum.quad_b,
                                feas.optimum.quad_c};
            rep["used_scan_fallback"] = feas.optimum.used_scan_fallback;
        }
    } else {  // region
        const std::size_t res = a.grid ? a.grid : 200;
        const RegionGrid grid = stability_region(pc.channel, stab, 0.0, pc.channel.p_max, 0.0,
                                                 pc.channel.p_max, res);
        Vector p1, p2, feas;
        p1.reserve(res * res);
        for (std::size_t i = 0; i < res; ++i) {
            for (std::size_t j = 0; j < res; ++j) {
                p1.push_back(grid.p1_values[i]);
                p2.push_back(grid.p2_values[j]);
                feas.push_back(double(grid.feasible[i * res + j]));
            }
        }
        write_csv(out("region.csv"), {"p1", "p2", "feasible"}, {p1, p2, feas});
        outputs.push_back("region.csv");
        std::size_t count = 0;
        for (double v : feas) count += v > 0.5;
        rep["resolution"] = res;
        rep["feasible_points"] = count;
    }
    if (!cfg.annotations.is_null()) rep["annotations"] = cfg.annotations;
    write_json(out("solution.json"), rep);
    finish_run(a, lc, "power", outputs);
    std::printf("power mode %s written to %s\n", a.mode.c_str(), a.out.c_str());
    return 0;
}

int cmd_simulate(CommonArgs& a) {
    const LoadedConfig lc = load_config_file(a.config);
    apply_manifest_flags(lc, a);
    const Config cfg = parse_config(lc.doc);
    if (!cfg.network) throw ConfigError("simulation needs a 'network' block");
    const LtiWncs sys = build_system(cfg);

    SimConfig sc;
    sc.omega = resolve_omega(cfg);
    sc.protocol = cfg.protocol;
    sc.horizon = cfg.horizon;
    sc.dt = cfg.sim_dt;
    sc.grid_points = a.grid ? a.grid : cfg.grid_points;
    sc.x0 = cfg.x0 ? *cfg.x0 : Vector(sys.nx, 0.1);
    sc.e0 = cfg.e0 ? *cfg.e0 : Vector(sys.ne, 0.0);
    const std::size_t trials = a.trials ? a.trials : cfg.trials;

    std::filesystem::create_directories(a.out);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(a.out) / name).string();
    };
    json rep;
    rep["omega"] = sc.omega;
    rep["horizon"] = sc.horizon;
    rep["trials"] = trials;

    if (trials <= 1) {
        Rng rng(a.seed);
        const Trajectory tr = simulate(sys, *cfg.network, sc, rng);
        std::vector<std::string> header{"t", "norm"};
        std::vector<Vector> cols{tr.times, tr.norms};
        const std::size_t nz = sys.nx + sys.ne;
        for (std::size_t i = 0; i < nz; ++i) {
            header.push_back("z" + std::to_string(i));
            Vector col(tr.z.size());
            for (std::size_t j = 0; j < tr.z.size(); ++j) col[j] = tr.z[j][i];
            cols.push_back(std::move(col));
        }
        write_csv(out("trajectory.csv"), header, cols);
        rep["arrivals"] = tr.n_arrivals;
        rep["divergent"] = tr.divergent;
        rep["final_norm"] = tr.norms.back();
        if (!cfg.annotations.is_null()) rep["annotations"] = cfg.annotations;
        write_json(out("sim_report.json"), rep);
        finish_run(a, lc, "simulate", {"trajectory.csv", "sim_report.json"});
        std::printf("1 trial, %zu arrivals, final norm %.6e\n", tr.n_arrivals,
                    tr.norms.back());
    } else {
        const MonteCarloResult mc =
            monte_carlo_decay(sys, *cfg.network, sc, trials, a.seed, a.threads);
        write_csv(out("decay.csv"), {"t", "mean_norm", "q90", "q99"},
                  {mc.times, mc.mean_norm, mc.q90, mc.q99});
        rep["divergent"] = mc.divergent;
        rep["decay_rate"] = mc.fit.slope;
        rep["decay_rate_interval"] = {mc.fit.slope_lo, mc.fit.slope_hi};
        rep["intercept"] = mc.fit.intercept;
        rep["final_over_initial"] = mc.final_over_initial;
        if (!cfg.annotations.is_null()) rep["annotations"] = cfg.annotations;
        write_json(out("decay_report.json"), rep);
        finish_run(a, lc, "simulate", {"decay.csv", "decay_report.json"});
        std::printf("%zu trials (%zu divergent), decay rate %.4f [%.4f, %.4f]\n", trials,
                    mc.divergent, mc.fit.slope, mc.fit.slope_lo, mc.fit.slope_hi);
    }
    return 0;
}

int cmd_cover(CommonArgs& a) {
    const LoadedConfig lc = load_config_file(a.config);
    apply_manifest_flags(lc, a);
    const Config cfg = parse_config(lc.doc);
    if (!cfg.network) throw ConfigError("cover statistics need a 'network' block");
    const std::vector<double> f = node_probabilities(*cfg.network);
    const std::size_t trials = a.trials ? a.trials : 100000;

    Rng rng(a.seed);
    Rng renewal_rng = rng.split(1);
    Rng chain_rng = rng.split(2);

    std::map<std::uint64_t, std::uint64_t> hist;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t v = sample_cover_time_renewal(f, renewal_rng);
        ++hist[v];
        sum += double(v);
        sumsq += double(v) * double(v);
    }
    const double mean = sum / double(trials);
    const double var = (sumsq - double(trials) * mean * mean) / double(trials - 1);

    const std::uint64_t slots = std::max<std::uint64_t>(trials, 100000);
    const ProtocolStats stats =
        empirical_protocol_stats(*cfg.network, cfg.protocol, slots, chain_rng);

    std::filesystem::create_directories(a.out);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(a.out) / name).string();
    };
    Vector values, counts;
    for (const auto& [v, n] : hist) {
        values.push_back(double(v));
        counts.push_back(double(n));
    }
    write_csv(out("cover_hist.csv"), {"cover_time", "count"}, {values, counts});

    json rep;
    rep["node_probabilities"] = to_json(f);
    rep["formula_mean"] = expected_cover_time(f);
    rep["pgf_radius"] = cover_time_pgf_radius(f);
    rep["renewal_mc_mean"] = mean;
    rep["renewal_mc_se"] = std::sqrt(var / double(trials));
    rep["protocol"] =
        cfg.protocol == ProtocolKind::RoundRobin ? "round-robin" : "stochastic";
    rep["chain_slots"] = stats.slots;
    rep["chain_cover_mean"] = stats.cover_mean;
    rep["chain_cover_se"] = stats.cover_se;
    rep["chain_covers"] = stats.covers;
    rep["node_visit_rate"] = to_json(stats.node_visit_rate);
    rep["node_success_rate"] = to_json(stats.node_success_rate);
    if (!cfg.annotations.is_null()) rep["annotations"] = cfg.annotations;
    write_json(out("cover_report.json"), rep);
    finish_run(a, lc, "cover", {"cover_hist.csv", "cover_report.json"});
    std::printf("renewal mean %.4f (formula %.4f), full-cover chain mean %.4f\n", mean,
                expected_cover_time(f), stats.cover_mean);
    return 0;
}

int cmd_validate(CommonArgs& a) {
    try {
        const LoadedConfig lc = load_config_file(a.config);
        const Config cfg = parse_config(lc.doc);
        json rep;
        rep["file"] = a.config;
        rep["from_manifest"] = lc.from_manifest;
        if (cfg.plant && cfg.controller) {
            const LtiWncs sys = build_system(cfg);
            rep["nx"] = sys.nx;
            rep["ne"] = sys.ne;
            rep["nw"] = sys.nw;
        }
        if (cfg.network) {
            validate_topology(*cfg.network);
            rep["nodes"] = cfg.network->n_nodes();
            rep["node_probabilities"] = to_json(node_probabilities(*cfg.network));
            if (cfg.plant && cfg.controller) {
                const LtiWncs sys = build_system(cfg);
                if (sys.ne != cfg.network->ne) {
                    throw ConfigError("network covers " +
                                      std::to_string(cfg.network->ne) +
                                      " coordinates but the loop has " +
                                      std::to_string(sys.ne));
                }
            }
        }
        if (cfg.power) {
            validate_channel(cfg.power->channel);
            rep["power_links"] = cfg.power->channel.g.rows();
        }
        std::printf("%s\n", rep.dump(2).c_str());
        std::printf("config OK\n");
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stability analysis and power design for control over lossy networks"};
    app.require_subcommand(1);

    CommonArgs rate_args, power_args, sim_args, cover_args, val_args;
    CLI::App* rate = app.add_subcommand("rate", "minimum stabilizing transmission rates");
    add_common(rate, rate_args, false);
    CLI::App* power = app.add_subcommand("power", "transmit power design");
    add_common(power, power_args, true);
    CLI::App* sim = app.add_subcommand("simulate", "jump-flow Monte Carlo simulation");
    add_common(sim, sim_args, false);
    CLI::App* cover = app.add_subcommand("cover", "protocol cover-time statistics");
    add_common(cover, cover_args, false);
    CLI::App* val = app.add_subcommand("validate", "check a config file");
    val->add_option("--config", val_args.config, "config or run-manifest JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (rate->parsed()) return cmd_rate(rate_args);
        if (power->parsed()) return cmd_power(power_args);
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (cover->parsed()) return cmd_cover(cover_args);
        if (val->parsed()) return cmd_validate(val_args);
        return 4;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
