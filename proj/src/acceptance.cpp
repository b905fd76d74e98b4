#include "wncs/acceptance.hpp"

#include "wncs/config.hpp"
#include "wncs/error.hpp"
#include "wncs/lpsolve.hpp"
#include "wncs/numerics.hpp"
#include "wncs/power.hpp"
#include "wncs/protocols.hpp"
#include "wncs/rng.hpp"
#include "wncs/sim.hpp"
#include "wncs/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>

namespace wncs {

namespace {

// pinned tolerances, one block so a release diff shows every change
constexpr double kRoundedTol = 5e-3;        // c1: vs two-decimal reference values
constexpr double kCoverSigmas = 3.0;        // c2, c9: Monte Carlo agreement
constexpr double kPgfDerivRel = 1e-4;       // c2: pgf derivative vs mean
constexpr double kEpsAbsTol = 0.01;         // c3: epsilon* vs 0.38
constexpr double kPowerRel = 0.02;          // c3: powers vs (9.9, 17.6)
constexpr double kTauBoundRel = 0.01;       // c3: tau_bar bound vs 0.0205
constexpr double kLpVsClosedRel = 0.01;     // c3: grid LP vs closed form
constexpr double kSymmetricRel = 1e-6;      // c4
constexpr double kVertexTol = 1e-8;         // c5: objective agreement
constexpr double kSweepRel = 1e-4;          // c6: bisection vs sweep
constexpr double kSimilarityRel = 1e-6;     // c6
constexpr double kMinRateMargin = 1.2;      // c7: single-probability bound ratio
constexpr double kFinalNormRatio = 0.01;    // c8
constexpr double kDivergentShare = 0.10;    // c8 contrast alternative
constexpr double kEq29Margin = 1e-6;        // c10

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

bool near_abs(double v, double ref, double tol) { return std::fabs(v - ref) <= tol; }
bool near_rel(double v, double ref, double tol) {
    return std::fabs(v - ref) <= tol * std::fabs(ref);
}

struct Ctx {
    std::string dir;
    unsigned threads = 0;
};

Config load_cfg(const Ctx& ctx, const char* name) {
    return parse_config(load_config_file(ctx.dir + "/" + name).doc);
}

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& msg) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAIL ") + msg;
    }
    void note(const std::string& msg) {
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
};

// ---- criterion 1: round-robin contraction constants ------------------------

Check c1_rr_constants(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "rate_full_loop.json");
    const AsUgesConstants k = rr_constants(*cfg.network);
    c.require(k.expected_kappa.size() == 2, "two scheduling slots");
    c.require(near_abs(k.expected_kappa[0], 0.93, kRoundedTol),
              fmt("slot 0 contraction %.10f vs 0.93", k.expected_kappa[0]));
    c.require(near_abs(k.expected_kappa[1], 0.82, kRoundedTol),
              fmt("slot 1 contraction %.10f vs 0.82", k.expected_kappa[1]));
    c.require(near_abs(k.kappa_bar, 0.93, kRoundedTol),
              fmt("kappa_bar %.10f vs 0.93", k.kappa_bar));
    c.require(near_abs(k.eta, std::sqrt(0.5), kRoundedTol),
              fmt("eta %.10f vs sqrt(1/2)", k.eta));
    c.require(near_abs(k.l1, std::sqrt(2.0), kRoundedTol), fmt("l1 %.10f vs sqrt(2)", k.l1));
    c.require(k.a1 == 1.0 && near_abs(k.a2, std::sqrt(2.0), 1e-12), "a1 = 1, a2 = sqrt(2)");
    return c;
}

// ---- criterion 2: stochastic-protocol cover time ----------------------------

Check c2_cover_time(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "rate_full_loop.json");
    const std::vector<double> f = node_probabilities(*cfg.network);
    const double et = expected_cover_time(f);
    c.require(near_abs(et, 7.5, 1e-12), fmt("renewal mean %.12f vs 7.5", et));

    Rng rng(0xC2C2);
    const std::size_t n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = double(sample_cover_time_renewal(f, rng));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / double(n);
    const double sd = std::sqrt((sumsq - double(n) * mean * mean) / double(n - 1));
    const double se = sd / std::sqrt(double(n));
    c.require(std::fabs(mean - et) <= kCoverSigmas * se,
              fmt("sampled mean %.4f within %.1f se (%.4f) of %.2f", mean, kCoverSigmas, se,
                  et));

    const double g1 = cover_time_pgf(f, 1.0);
    c.require(near_abs(g1, 1.0, 1e-12), fmt("pgf(1) = %.15f", g1));
    const double h = 1e-6;
    const double deriv = (cover_time_pgf(f, 1.0 + h) - cover_time_pgf(f, 1.0 - h)) / (2.0 * h);
    c.require(near_rel(deriv, et, kPgfDerivRel),
              fmt("pgf'(1) %.8f vs mean %.8f", deriv, et));
    return c;
}

// ---- criterion 3: two-link power design -------------------------------------

Check c3_two_link(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "power_two_link.json");
    const PowerConfig& pc = *cfg.power;
    const StabilityConstant stab = make_stability_constant(pc.tau_bar, pc.gamma, pc.l, pc.eta,
                                                           pc.delta, pc.channel.a);
    c.note(fmt("budget c = %.6f", stab.c_tau));

    const TwoLinkOptimum opt = two_link_epsilon_star(pc.channel, stab.c_tau);
    c.require(near_abs(opt.epsilon, 0.38, kEpsAbsTol),
              fmt("epsilon* %.6f vs 0.38", opt.epsilon));
    c.require(near_rel(opt.powers[0], 9.9, kPowerRel),
              fmt("p1 %.4f vs 9.9", opt.powers[0]));
    c.require(near_rel(opt.powers[1], 17.6, kPowerRel),
              fmt("p2 %.4f vs 17.6", opt.powers[1]));

    const TwoLinkFeasibility feas = two_link_feasibility(pc.channel, stab);
    c.require(near_rel(feas.tau_bar_bound, 0.0205, kTauBoundRel),
              fmt("tau_bar bound %.8f vs 0.0205", feas.tau_bar_bound));
    c.require(feas.feasible, "two-link design feasible under p_max");

    const PowerSolution lp = solve_problem2(pc.channel, stab, 200, ctx.threads);
    c.require(near_rel(lp.objective, opt.objective, kLpVsClosedRel),
              fmt("grid-200 LP total %.6f vs closed form %.6f", lp.objective, opt.objective));
    return c;
}

// ---- criterion 4: symmetric channel closed form -----------------------------

Check c4_symmetric(const Ctx&) {
    Check c;
    ChannelModel ch;
    ch.g = Matrix{{0.2, 0.2}, {0.2, 0.2}};
    ch.sigma2 = {1.0, 1.0};
    ch.a = 1.0;
    ch.p_max = 70.0;
    const StabilityConstant stab =
        make_stability_constant(0.002, 11.59, 0.0, std::sqrt(0.5), 1e-6, ch.a);
    c.require(stab.c_tau > 2.0, fmt("budget c = %.6f above 2", stab.c_tau));

    const double p_each = two_link_symmetric_power(0.2, 1.0, stab.c_tau);
    const PowerSolution lp = solve_problem2(ch, stab, 50, 1);
    c.require(near_rel(lp.objective, 2.0 * p_each, kSymmetricRel),
              fmt("LP total %.10f vs closed form %.10f", lp.objective, 2.0 * p_each));
    c.require(near_abs(lp.q_star[0], 0.5, 1e-12), fmt("split q1 = %.4f", lp.q_star[0]));
    return c;
}

// ---- criterion 5: linear-program vertex cross-check -------------------------

Check c5_lp_vertices(const Ctx&) {
    Check c;
    Rng rng(0xC5C5);
    const int instances = 500;
    int checked = 0;
    double worst = 0.0;
    for (int inst = 0; inst < instances; ++inst) {
        const std::size_t n = 3;
        const std::size_t m = 1 + rng.uniform_index(6);
        LpProblem p;
        p.a = Matrix(m, n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) p.a(i, j) = rng.uniform01() * 3.0 - 1.0;
        }
        p.c.resize(n);
        for (auto& v : p.c) v = 0.1 + 1.9 * rng.uniform01();
        Vector xbar(n);
        for (auto& v : xbar) v = 3.0 * rng.uniform01();
        const Vector axbar = p.a * xbar;
        p.b.resize(m);
        for (std::size_t i = 0; i < m; ++i) p.b[i] = axbar[i] - 2.0 * rng.uniform01();

        const LpOutcome out = lp_solve(p);
        if (out.status != LpStatus::Optimal) {
            c.require(false, fmt("instance %d not optimal", inst));
            return c;
        }

        // oracle: enumerate all vertices of {Ax >= b, x >= 0}
        Matrix g = vcat(p.a, Matrix::identity(n));
        Vector h = p.b;
        h.resize(m + n, 0.0);
        double best = std::numeric_limits<double>::infinity();
        const std::size_t rows = m + n;
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = i + 1; j < rows; ++j) {
                for (std::size_t k = j + 1; k < rows; ++k) {
                    Matrix sq(3, 3);
                    Vector rhs(3);
                    const std::size_t pick[3] = {i, j, k};
                    for (int r = 0; r < 3; ++r) {
                        for (std::size_t col = 0; col < 3; ++col) {
                            sq(r, col) = g(pick[r], col);
                        }
                        rhs[r] = h[pick[r]];
                    }
                    Vector x;
                    try {
                        x = lu_solve(sq, rhs);
                    } catch (const NumericsError&) {
                        continue;
                    }
                    bool ok = true;
                    for (int r = 0; r < 3 && ok; ++r) {
                        double resid = -rhs[r];
                        for (std::size_t col = 0; col < 3; ++col) {
                            resid += sq(r, col) * x[col];
                        }
                        if (std::fabs(resid) > 1e-7) ok = false;  // ill-conditioned corner
                    }
                    const Vector gx = g * x;
                    for (std::size_t r = 0; r < rows && ok; ++r) {
                        if (gx[r] < h[r] - 1e-8 * (1.0 + std::fabs(h[r]))) ok = false;
                    }
                    if (!ok) continue;
                    best = std::min(best, dot(p.c, x));
                }
            }
        }
        if (!std::isfinite(best)) {
            c.require(false, fmt("instance %d: no feasible vertex found", inst));
            return c;
        }
        const double err = std::fabs(out.objective - best) / (1.0 + std::fabs(best));
        worst = std::max(worst, err);
        if (err > kVertexTol) {
            c.require(false, fmt("instance %d: simplex %.12f vs vertices %.12f", inst,
                                 out.objective, best));
            return c;
        }
        ++checked;
    }
    c.require(checked == instances,
              fmt("%d random feasible programs matched (worst gap %.2e)", checked, worst));
    return c;
}

// ---- criterion 6: L2 gain bisection vs sweep --------------------------------

Check c6_l2_gain(const Ctx&) {
    Check c;
    Rng rng(0xC6C6);
    const int systems = 50;
    double worst_sweep = 0.0, worst_sim = 0.0;
    for (int s = 0; s < systems; ++s) {
        const std::size_t n = 2 + rng.uniform_index(3);
        const std::size_t m = 1 + rng.uniform_index(2);
        const std::size_t p = 1 + rng.uniform_index(2);
        StateSpace ss;
        ss.a = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) ss.a(i, j) = rng.uniform01() * 2.0 - 1.0;
        }
        const double shift = spectral_abscissa(ss.a) + 0.5 + rng.uniform01();
        for (std::size_t i = 0; i < n; ++i) ss.a(i, i) -= shift;
        ss.b = Matrix(n, m);
        ss.c = Matrix(p, n);
        ss.d = Matrix(p, m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) ss.b(i, j) = rng.uniform01() * 2.0 - 1.0;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < n; ++j) ss.c(i, j) = rng.uniform01() * 2.0 - 1.0;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < m; ++j) ss.d(i, j) = 0.2 * (rng.uniform01() * 2.0 - 1.0);
        }

        const double g_bisect = l2_gain(ss, 1e-8);
        const double g_sweep = l2_gain_sweep(ss, 400);
        const double err = std::fabs(g_bisect - g_sweep) / std::max(g_bisect, 1e-12);
        worst_sweep = std::max(worst_sweep, err);
        if (err > kSweepRel) {
            c.require(false, fmt("system %d: bisection %.10f vs sweep %.10f", s, g_bisect,
                                 g_sweep));
            return c;
        }

        // similarity transform: scaled Householder reflector
        Vector v(n);
        for (auto& val : v) val = rng.uniform01() + 0.1;
        Matrix q = Matrix::identity(n);
        const double vtv = dot(v, v);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) q(i, j) -= 2.0 * v[i] * v[j] / vtv;
        }
        Vector scales(n);
        for (auto& val : scales) val = 0.5 + 1.5 * rng.uniform01();
        const Matrix t = q * Matrix::diag(scales);
        const Matrix tinv = inverse(t);
        StateSpace st;
        st.a = t * ss.a * tinv;
        st.b = t * ss.b;
        st.c = ss.c * tinv;
        st.d = ss.d;
        const double g_sim = l2_gain(st, 1e-8);
        const double err2 = std::fabs(g_bisect - g_sim) / std::max(g_bisect, 1e-12);
        worst_sim = std::max(worst_sim, err2);
        if (err2 > kSimilarityRel) {
            c.require(false, fmt("system %d: gain %.10f changed to %.10f under similarity", s,
                                 g_bisect, g_sim));
            return c;
        }
    }
    c.require(true, fmt("%d systems: worst sweep gap %.2e, worst similarity gap %.2e", systems,
                        worst_sweep, worst_sim));
    return c;
}

// ---- criterion 7: minimum stabilizing rates ----------------------------------

Check c7_min_rates(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "rate_full_loop.json");
    const LtiWncs sys = build_system(cfg);
    const RateAnalysis ra = analyze_rates(sys, *cfg.network, 1e-8);

    StochasticGainInputs si{ra.gamma_stochastic, ra.norm_a_abs,
                            node_probabilities(*cfg.network)};
    const double w_s = ra.stochastic.omega_star;
    c.require(smallgain_lhs_stochastic(w_s, si) < 1.0,
              fmt("stochastic lhs(%.4f) < 1", w_s));
    c.require(smallgain_lhs_stochastic(0.99 * w_s, si) >= 1.0,
              "stochastic lhs(0.99 omega*) >= 1");
    const double ratio_s = ra.stochastic.tabbara_omega / w_s;
    c.require(w_s <= ra.stochastic.tabbara_omega && ratio_s > kMinRateMargin,
              fmt("single-probability bound %.4f / omega* %.4f = %.3f > %.2f",
                  ra.stochastic.tabbara_omega, w_s, ratio_s, kMinRateMargin));

    DeterministicGainInputs di{ra.gamma_deterministic, ra.l, ra.constants};
    const double w_d = ra.deterministic.omega_star;
    c.require(smallgain_lhs_deterministic(w_d, di) < 1.0,
              fmt("round-robin lhs(%.4f) < 1", w_d));
    c.require(smallgain_lhs_deterministic(0.99 * w_d, di) >= 1.0,
              "round-robin lhs(0.99 omega*) >= 1");
    const double ratio_d = ra.deterministic.tabbara_omega / w_d;
    c.require(w_d <= ra.deterministic.tabbara_omega && ratio_d > kMinRateMargin,
              fmt("single-probability bound %.4f / omega* %.4f = %.3f > %.2f",
                  ra.deterministic.tabbara_omega, w_d, ratio_d, kMinRateMargin));

    c.note(fmt("gains: stochastic %.6f, round-robin %.6f", ra.gamma_stochastic,
               ra.gamma_deterministic));
    if (cfg.annotations.is_object()) {
        c.note("reference values kept as annotations only: " + cfg.annotations.dump());
    }
    return c;
}

// ---- criterion 8: closed-loop decay at the certified rate --------------------

Check c8_decay(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "sim_full_loop.json");
    const LtiWncs sys = build_system(cfg);
    const RateAnalysis ra = analyze_rates(sys, *cfg.network, 1e-8);

    SimConfig sc;
    sc.omega = ra.deterministic.omega_star;
    sc.protocol = cfg.protocol;
    sc.horizon = cfg.horizon;
    sc.grid_points = cfg.grid_points;
    if (!cfg.x0) {
        c.require(false, "simulation.x0 missing from config");
        return c;
    }
    sc.x0 = *cfg.x0;
    sc.e0 = cfg.e0 ? *cfg.e0 : Vector(sys.ne, 0.0);

    const MonteCarloResult mc =
        monte_carlo_decay(sys, *cfg.network, sc, cfg.trials, 0xC8C8, ctx.threads);
    c.require(mc.fit.slope < 0.0 && mc.fit.slope_hi < 0.0,
              fmt("decay rate %.4f (95%% interval [%.4f, %.4f]) below zero at omega %.4f",
                  mc.fit.slope, mc.fit.slope_lo, mc.fit.slope_hi, sc.omega));
    c.require(mc.final_over_initial < kFinalNormRatio,
              fmt("final/initial mean norm %.3e < %.2f", mc.final_over_initial,
                  kFinalNormRatio));
    c.require(mc.divergent == 0, fmt("%zu divergent trials", mc.divergent));

    // contrast well below the certified region (a fifth of the stochastic
    // pipeline's validity floor; the round-robin floor would be %.1f)
    SimConfig slow = sc;
    slow.omega = 0.2 * ra.stochastic.validity_floor;
    slow.dt = 0.0;
    const MonteCarloResult bad =
        monte_carlo_decay(sys, *cfg.network, slow, cfg.trials, 0xC8C8, ctx.threads);
    const double div_share = double(bad.divergent) / double(bad.trials);
    c.require(bad.fit.slope >= 0.0 || div_share > kDivergentShare,
              fmt("contrast at omega %.4f: slope %.4f, divergent share %.2f "
                  "(round-robin floor alternative omega %.4f)",
                  slow.omega, bad.fit.slope, div_share,
                  0.2 * ra.deterministic.validity_floor));
    return c;
}

// ---- criterion 9: jump semantics on shipped configs ---------------------------

Check c9_exactness(const Ctx& ctx) {
    Check c;
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(ctx.dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    c.require(!files.empty(), "configs present");

    int cfg_index = 0;
    for (const auto& path : files) {
        const std::string base = std::filesystem::path(path).filename().string();
        const LoadedConfig lc = load_config_file(path);
        if (lc.from_manifest) continue;
        const Config cfg = parse_config(lc.doc);
        if (!cfg.plant || !cfg.controller || !cfg.network) {
            c.require(false, base + ": not simulable (plant/controller/network missing)");
            continue;
        }
        const LtiWncs sys = build_system(cfg);
        double omega = 0.0;
        if (cfg.omega) {
            omega = *cfg.omega;
        } else if (cfg.tau_bar) {
            omega = 1.0 / *cfg.tau_bar;
        } else if (cfg.power) {
            omega = 1.0 / cfg.power->tau_bar;
        } else {
            c.require(false, base + ": no transmission rate");
            continue;
        }

        SimConfig sc;
        sc.omega = omega;
        sc.protocol = cfg.protocol;
        sc.horizon = 0.4;
        sc.grid_points = 81;
        sc.record_jump_states = true;
        sc.x0 = cfg.x0 ? *cfg.x0 : Vector(sys.nx, 0.1);
        sc.e0 = cfg.e0 ? *cfg.e0 : Vector(sys.ne, 0.05);
        if (sc.x0.size() != sys.nx) sc.x0 = Vector(sys.nx, 0.1);
        if (sc.e0.size() != sys.ne) sc.e0 = Vector(sys.ne, 0.05);

        Rng rng(0xC9C9 + std::uint64_t(cfg_index));
        const Trajectory tr = simulate(sys, *cfg.network, sc, rng);
        const NetworkTopology& topo = *cfg.network;
        const std::size_t nn = topo.n_nodes();

        std::size_t bad_x = 0, bad_zero = 0, bad_keep = 0, bad_link = 0, bad_order = 0;
        for (std::size_t j = 0; j < tr.jumps.size(); ++j) {
            const JumpRecord& r = tr.jumps[j];
            for (std::size_t i = 0; i < sys.nx; ++i) {
                if (r.pre[i] != r.post[i]) ++bad_x;
            }
            for (std::size_t node = 0; node < nn; ++node) {
                for (const auto& link : topo.nodes[node].links) {
                    bool first = true;
                    double link_diag = 1.0;
                    for (std::size_t coord : link.coords) {
                        const double d = r.diag[coord];
                        if (d != 0.0 && d != 1.0) ++bad_link;
                        if (node != r.node && d != 1.0) ++bad_link;
                        if (first) {
                            link_diag = d;
                            first = false;
                        } else if (d != link_diag) {
                            ++bad_link;  // a link succeeds or fails as a unit
                        }
                        const double pre = r.pre[sys.nx + coord];
                        const double post = r.post[sys.nx + coord];
                        if (d == 0.0 && post != 0.0) ++bad_zero;
                        if (d == 1.0 && post != pre) ++bad_keep;
                    }
                }
            }
            if (cfg.protocol == ProtocolKind::RoundRobin && r.node != j % nn) ++bad_order;
        }
        c.require(bad_x == 0 && bad_zero == 0 && bad_keep == 0 && bad_link == 0 &&
                      bad_order == 0,
                  fmt("%s: %zu jumps exact", base.c_str(), tr.jumps.size()));

        if (tr.jumps.size() >= 10) {
            double prev = 0.0, sum = 0.0, sumsq = 0.0;
            for (const auto& r : tr.jumps) {
                const double gap = r.t - prev;
                prev = r.t;
                sum += gap;
                sumsq += gap * gap;
            }
            const double n = double(tr.jumps.size());
            const double mean = sum / n;
            const double sd = std::sqrt(std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)));
            const double se = sd / std::sqrt(n);
            c.require(std::fabs(mean - 1.0 / omega) <= kCoverSigmas * se,
                      fmt("%s: interarrival mean %.6f vs %.6f (se %.6f)", base.c_str(), mean,
                          1.0 / omega, se));
        } else {
            c.require(false, base + ": too few arrivals to test interarrival law");
        }
        ++cfg_index;
    }
    return c;
}

// ---- criterion 10: four-link power allocation ---------------------------------

Check c10_four_link(const Ctx& ctx) {
    Check c;
    const Config cfg = load_cfg(ctx, "power_four_link.json");
    const PowerConfig& pc = *cfg.power;
    const StabilityConstant stab = make_stability_constant(pc.tau_bar, pc.gamma, pc.l, pc.eta,
                                                           pc.delta, pc.channel.a);
    const PowerSolution sol = solve_problem2(pc.channel, stab, pc.grid, ctx.threads);
    c.require(sol.p_max_margin >= -1e-9, fmt("p_max margin %.4f", sol.p_max_margin));
    c.require(sol.phi_product >= sol.required_product - kEq29Margin,
              fmt("success product %.8f >= required %.8f - %.0e", sol.phi_product,
                  sol.required_product, kEq29Margin));
    const double ref[4] = {15.0, 10.0, 14.0, 11.0};
    double dist = 0.0;
    for (int i = 0; i < 4; ++i) dist = std::max(dist, std::fabs(sol.powers[i] - ref[i]));
    c.note(fmt("powers (%.2f, %.2f, %.2f, %.2f) vs reference (15, 10, 14, 11), "
               "max deviation %.2f (informational; cross gains are assumed values)",
               sol.powers[0], sol.powers[1], sol.powers[2], sol.powers[3], dist));
    c.note(fmt("budget c = %.6f, total power %.4f", stab.c_tau, sol.objective));
    return c;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const std::string& config_dir, unsigned threads) {
    Ctx ctx{config_dir, threads};
    struct Item {
        const char* name;
        double budget;
        Check (*fn)(const Ctx&);
    };
    const Item items[] = {
        {"round-robin contraction constants", 1.0, c1_rr_constants},
        {"stochastic-protocol cover time", 10.0, c2_cover_time},
        {"two-link power design", 30.0, c3_two_link},
        {"symmetric channel closed form", 1.0, c4_symmetric},
        {"linear-program vertex cross-check", 30.0, c5_lp_vertices},
        {"L2 gain bisection vs sweep", 60.0, c6_l2_gain},
        {"minimum stabilizing rates", 30.0, c7_min_rates},
        {"closed-loop decay at the certified rate", 300.0, c8_decay},
        {"jump semantics on shipped configs", 60.0, c9_exactness},
        {"four-link power allocation", 30.0, c10_four_link},
    };

    std::vector<CriterionResult> results;
    int idx = 1;
    for (const auto& item : items) {
        CriterionResult r;
        r.index = idx++;
        r.name = item.name;
        r.budget_seconds = item.budget;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Check c = item.fn(ctx);
            r.pass = c.pass;
            r.detail = c.detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        r.seconds = std::chrono::duration<double>(t1 - t0).count();
        if (r.seconds > r.budget_seconds) {
            r.pass = false;
            r.detail += fmt("; over time budget (%.1fs > %.1fs)", r.seconds, r.budget_seconds);
        }
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace wncs
