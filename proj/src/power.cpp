#include "wncs/power.hpp"

#include "wncs/error.hpp"
#include "wncs/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace wncs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_powers(const ChannelModel& ch, const Vector& powers) {
    if (powers.size() != ch.g.rows()) {
        throw DimensionError("power vector does not match channel size");
    }
    for (double p : powers) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("negative or non-finite power");
    }
}

// interior lattice points k/r of the simplex (k integer >= 1, sum = r),
// generated in lexicographic order of k
void simplex_rec(std::size_t pos, std::size_t remaining, std::vector<std::size_t>& k,
                 std::size_t r, std::vector<Vector>& out) {
    const std::size_t dims = k.size();
    if (pos + 1 == dims) {
        k[pos] = remaining;
        Vector q(dims);
        for (std::size_t i = 0; i < dims; ++i) q[i] = double(k[i]) / double(r);
        out.push_back(std::move(q));
        return;
    }
    for (std::size_t v = 1; v + (dims - pos - 1) <= remaining; ++v) {
        k[pos] = v;
        simplex_rec(pos + 1, remaining - v, k, r, out);
    }
}

void enumerate_simplex(std::size_t dims, std::size_t r, std::vector<Vector>& out) {
    std::vector<std::size_t> k(dims);
    simplex_rec(0, r, k, r, out);
}

double objective_at(const ChannelModel& ch, double c_tau, double epsilon) {
    Vector p = two_link_powers(ch, c_tau, epsilon);
    return p[0] + p[1];
}

} // namespace

double compute_c_tau(double tau_bar, double gamma, double l, double eta, double delta,
                     double a) {
    if (!(tau_bar > 0.0)) throw DomainError("tau_bar must be positive");
    if (!(a > 0.0)) throw DomainError("outage exponent a must be positive");
    if (gamma < 0.0 || l < 0.0) throw DomainError("negative gain constants");
    if (!(eta >= 0.0) || eta >= 1.0) throw DomainError("eta must lie in [0, 1)");
    if (delta < 0.0) throw DomainError("delta must be nonnegative");
    const double required = tau_bar * (gamma + l) / (1.0 - eta);
    const double arg = required - delta;
    if (arg >= 1.0) {
        throw InfeasibleError("required success probability " + std::to_string(required) +
                              " is not below 1; tau_bar too large for these gains");
    }
    if (arg <= 0.0) {
        throw InfeasibleError("slack delta " + std::to_string(delta) +
                              " already exceeds the stability requirement " +
                              std::to_string(required));
    }
    return -std::log(arg) / a;
}

StabilityConstant make_stability_constant(double tau_bar, double gamma, double l, double eta,
                                          double delta, double a) {
    StabilityConstant s;
    s.tau_bar = tau_bar;
    s.gamma = gamma;
    s.l = l;
    s.eta = eta;
    s.delta = delta;
    s.a = a;
    s.c_tau = compute_c_tau(tau_bar, gamma, l, eta, delta, a);
    return s;
}

double sinr(const ChannelModel& ch, const Vector& powers, std::size_t i) {
    check_powers(ch, powers);
    if (i >= powers.size()) throw DimensionError("link index out of range");
    double denom = ch.sigma2[i];
    for (std::size_t j = 0; j < powers.size(); ++j) {
        if (j != i) denom += ch.g(j, i) * powers[j];
    }
    return ch.g(i, i) * powers[i] / denom;
}

Vector all_sinr(const ChannelModel& ch, const Vector& powers) {
    Vector out(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) out[i] = sinr(ch, powers, i);
    return out;
}

double phi_outage(double a, double sinr_value) {
    if (!(a > 0.0)) throw DomainError("outage exponent a must be positive");
    if (!(sinr_value > 0.0)) return 0.0;
    return std::exp(-a / sinr_value);
}

LpProblem build_power_lp(const ChannelModel& ch, double c_tau, const Vector& q) {
    validate_channel(ch);
    const std::size_t n = ch.g.rows();
    if (q.size() != n) throw DimensionError("budget split does not match channel size");
    if (!(c_tau > 0.0)) throw DomainError("c_tau must be positive");
    double qsum = 0.0;
    for (double v : q) {
        if (!(v > 0.0)) throw DomainError("budget split must be strictly positive");
        qsum += v;
    }
    if (std::fabs(qsum - 1.0) > 1e-9) throw DomainError("budget split must sum to 1");

    LpProblem lp;
    lp.c.assign(n, 1.0);
    lp.a = Matrix(2 * n, n);
    lp.b.assign(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            lp.a(i, j) = (i == j) ? ch.g(i, i) * q[i] * c_tau : -ch.g(j, i);
        }
        lp.b[i] = ch.sigma2[i];
        lp.a(n + i, i) = -1.0;
        lp.b[n + i] = -ch.p_max;
    }
    return lp;
}

std::size_t default_grid_resolution(std::size_t n_links) {
    return n_links <= 3 ? 50 : 12;
}

PowerSolution solve_problem2(const ChannelModel& ch, const StabilityConstant& stab,
                             std::size_t grid, unsigned threads) {
    validate_channel(ch);
    const std::size_t n = ch.g.rows();
    if (grid == 0) grid = default_grid_resolution(n);
    if (grid < n) throw DomainError("grid resolution below the link count");
    if (!(stab.c_tau > 0.0)) throw DomainError("c_tau must be positive");

    std::vector<Vector> points;
    enumerate_simplex(n, grid, points);

    struct Best {
        bool found = false;
        double objective = kInf;
        std::size_t index = 0;
        Vector powers;
    };
    auto better = [](const Best& a, const Best& b) {
        if (!b.found) return true;
        if (!a.found) return false;
        if (a.objective != b.objective) return a.objective < b.objective;
        return a.index < b.index;  // lexicographically smaller q wins ties
    };

    unsigned nthreads = threads;
    if (nthreads == 0) {
        nthreads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    }
    if (points.size() < 64) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, std::max<std::size_t>(points.size(), 1));

    std::vector<Best> bests(nthreads);
    auto worker = [&](unsigned t) {
        Best local;
        for (std::size_t i = t; i < points.size(); i += nthreads) {
            LpOutcome lp = lp_solve(build_power_lp(ch, stab.c_tau, points[i]));
            if (lp.status != LpStatus::Optimal) continue;
            Best cand{true, lp.objective, i, lp.x};
            if (better(cand, local)) local = cand;
        }
        bests[t] = local;
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    Best best;
    for (const auto& b : bests) {
        if (better(b, best)) best = b;
    }
    if (!best.found) {
        throw InfeasibleError("no feasible power allocation on the probability grid");
    }

    PowerSolution out;
    out.q_star = points[best.index];
    out.powers = best.powers;
    out.objective = best.objective;
    out.sinr_values = all_sinr(ch, out.powers);
    out.phi_values.resize(n);
    out.phi_product = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.phi_values[i] = phi_outage(ch.a, out.sinr_values[i]);
        out.phi_product *= out.phi_values[i];
    }
    out.required_product = std::exp(-ch.a * stab.c_tau);
    out.p_max_margin = kInf;
    for (double p : out.powers) out.p_max_margin = std::min(out.p_max_margin, ch.p_max - p);
    return out;
}

std::pair<double, double> two_link_interval(const ChannelModel& ch, double c_tau) {
    validate_channel(ch);
    if (ch.g.rows() != 2) throw DimensionError("closed form needs exactly two links");
    if (!(c_tau > 0.0)) throw DomainError("c_tau must be positive");
    const double cross = ch.g(0, 1) * ch.g(1, 0);
    const double disc = 0.25 - cross / (ch.g(0, 0) * ch.g(1, 1) * c_tau * c_tau);
    if (disc < 0.0) {
        throw InfeasibleError("no budget split supports both links: c_tau " +
                              std::to_string(c_tau) + " is below the cross-gain threshold");
    }
    const double h = std::sqrt(disc);
    return {0.5 - h, 0.5 + h};
}

Vector two_link_powers(const ChannelModel& ch, double c_tau, double epsilon) {
    const auto iv = two_link_interval(ch, c_tau);
    if (!(epsilon > iv.first) || !(epsilon < iv.second)) {
        throw DomainError("epsilon " + std::to_string(epsilon) +
                          " outside the feasible interval (" + std::to_string(iv.first) + ", " +
                          std::to_string(iv.second) + ")");
    }
    const double g11 = ch.g(0, 0), g22 = ch.g(1, 1);
    const double g12 = ch.g(0, 1), g21 = ch.g(1, 0);
    const double s1 = ch.sigma2[0], s2 = ch.sigma2[1];
    const double c = c_tau;
    const double den = g11 * g22 * c * c * epsilon * (1.0 - epsilon) - g12 * g21;
    const double p1 = (g22 * c * s1 * (1.0 - epsilon) + g21 * s2) / den;
    const double p2 = (g11 * c * s2 * epsilon + g12 * s1) / den;
    return {p1, p2};
}

TwoLinkOptimum two_link_epsilon_star(const ChannelModel& ch, double c_tau) {
    const auto iv = two_link_interval(ch, c_tau);
    const double g11 = ch.g(0, 0), g22 = ch.g(1, 1);
    const double g12 = ch.g(0, 1), g21 = ch.g(1, 0);
    const double s1 = ch.sigma2[0], s2 = ch.sigma2[1];
    const double c = c_tau;

    TwoLinkOptimum out;
    // stationarity of p1(eps) + p2(eps): quad_a eps^2 + quad_b eps + quad_c = 0
    const double alpha = g22 * c * s1 + g21 * s2 + g12 * s1;
    const double beta = g11 * c * s2 - g22 * c * s1;
    const double gc2 = g11 * g22 * c * c;
    out.quad_a = beta * gc2;
    out.quad_b = 2.0 * alpha * gc2;
    out.quad_c = -(beta * g12 * g21 + alpha * gc2);

    std::vector<double> candidates;
    const double scale = std::max({std::fabs(out.quad_a), std::fabs(out.quad_b),
                                   std::fabs(out.quad_c)});
    if (std::fabs(out.quad_a) > 1e-14 * scale) {
        const double disc = out.quad_b * out.quad_b - 4.0 * out.quad_a * out.quad_c;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            const double qq = -0.5 * (out.quad_b + std::copysign(root, out.quad_b));
            candidates.push_back(qq / out.quad_a);
            if (qq != 0.0) candidates.push_back(out.quad_c / qq);
        }
    } else if (std::fabs(out.quad_b) > 0.0) {
        candidates.push_back(-out.quad_c / out.quad_b);
    }

    bool have = false;
    for (double eps : candidates) {
        if (!(eps > iv.first) || !(eps < iv.second)) continue;
        const double obj = objective_at(ch, c_tau, eps);
        if (!have || obj < out.objective ||
            (obj == out.objective && eps < out.epsilon)) {
            out.epsilon = eps;
            out.objective = obj;
            have = true;
        }
    }

    if (!have) {
        // dense scan plus golden-section polish inside the open interval
        out.used_scan_fallback = true;
        const double pad = 1e-9 * (iv.second - iv.first);
        const double lo = iv.first + pad, hi = iv.second - pad;
        const int pts = 2001;
        double best_eps = lo, best_obj = kInf;
        for (int i = 0; i < pts; ++i) {
            const double eps = lo + (hi - lo) * double(i) / double(pts - 1);
            const double obj = objective_at(ch, c_tau, eps);
            if (obj < best_obj) {
                best_obj = obj;
                best_eps = eps;
            }
        }
        const double step = (hi - lo) / double(pts - 1);
        double a = std::max(lo, best_eps - step), b = std::min(hi, best_eps + step);
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = objective_at(ch, c_tau, x1), f2 = objective_at(ch, c_tau, x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = objective_at(ch, c_tau, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = objective_at(ch, c_tau, x2);
            }
        }
        out.epsilon = 0.5 * (a + b);
        out.objective = objective_at(ch, c_tau, out.epsilon);
    }

    out.powers = two_link_powers(ch, c_tau, out.epsilon);
    return out;
}

double two_link_symmetric_power(double g, double sigma2, double c_tau) {
    if (!(g > 0.0) || !(sigma2 > 0.0)) throw DomainError("gains and noise must be positive");
    if (!(c_tau > 2.0)) {
        throw DomainError("symmetric closed form needs c_tau > 2");
    }
    return 2.0 * sigma2 / ((c_tau - 2.0) * g);
}

TwoLinkFeasibility two_link_feasibility(const ChannelModel& ch, const StabilityConstant& stab) {
    validate_channel(ch);
    if (ch.g.rows() != 2) throw DimensionError("closed form needs exactly two links");
    TwoLinkFeasibility out;
    out.c_min = 2.0 * std::sqrt(ch.g(0, 1) * ch.g(1, 0) / (ch.g(0, 0) * ch.g(1, 1)));
    out.tau_bar_bound = (1.0 - stab.eta) * (stab.delta + std::exp(-stab.a * out.c_min)) /
                        (stab.gamma + stab.l);
    out.interval_nonempty = stab.c_tau >= out.c_min;
    if (out.interval_nonempty) {
        out.optimum = two_link_epsilon_star(ch, stab.c_tau);
        const double pmax_used = std::max(out.optimum.powers[0], out.optimum.powers[1]);
        out.within_p_max = pmax_used <= ch.p_max;
    }
    out.feasible = out.interval_nonempty && out.within_p_max;
    return out;
}

ConstraintCheck single_node_constraint(const ChannelModel& ch, const StabilityConstant& stab,
                                       const Vector& powers) {
    check_powers(ch, powers);
    ConstraintCheck out;
    out.lhs = stab.tau_bar * (stab.gamma + stab.l) / (1.0 - stab.eta);
    double prod = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        prod *= phi_outage(stab.a, sinr(ch, powers, i));
    }
    out.rhs = stab.delta + prod;
    out.satisfied = out.lhs <= out.rhs;
    return out;
}

double multi_node_stability_lhs(const std::vector<ChannelModel>& node_channels,
                                const std::vector<Vector>& node_powers, double tau_bar,
                                double gamma, double l, std::optional<double> eta) {
    if (node_channels.empty() || node_channels.size() != node_powers.size()) {
        throw DimensionError("one channel and one power vector per node required");
    }
    if (!(tau_bar > 0.0)) throw DomainError("tau_bar must be positive");
    const std::size_t n = node_channels.size();
    const double eta_v = eta ? *eta : rr_eta(n);
    if (!(eta_v >= 0.0) || eta_v >= 1.0) throw DomainError("eta must lie in [0, 1)");

    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = 1.0;
        const auto& ch = node_channels[i];
        for (std::size_t k = 0; k < node_powers[i].size(); ++k) {
            f *= phi_outage(ch.a, sinr(ch, node_powers[i], k));
        }
        kappa[i] = 1.0 - f * (1.0 - eta_v);
    }

    const double omega = 1.0 / tau_bar;
    if (omega <= l) return kInf;
    auto s = s_infinity_core(omega, l, kappa);
    if (!s) return kInf;
    return gamma * *s / (omega - l);
}

RegionGrid stability_region(const ChannelModel& ch, const StabilityConstant& stab,
                            double p1_lo, double p1_hi, double p2_lo, double p2_hi,
                            std::size_t resolution) {
    validate_channel(ch);
    if (ch.g.rows() != 2) throw DimensionError("region tabulation needs exactly two links");
    if (resolution < 2) throw DomainError("resolution must be at least 2");
    if (!(p1_hi > p1_lo) || !(p2_hi > p2_lo) || p1_lo < 0.0 || p2_lo < 0.0) {
        throw DomainError("power ranges must be nonnegative and increasing");
    }
    RegionGrid out;
    out.p1_values.resize(resolution);
    out.p2_values.resize(resolution);
    out.feasible.assign(resolution * resolution, 0);
    for (std::size_t i = 0; i < resolution; ++i) {
        out.p1_values[i] = p1_lo + (p1_hi - p1_lo) * double(i) / double(resolution - 1);
        out.p2_values[i] = p2_lo + (p2_hi - p2_lo) * double(i) / double(resolution - 1);
    }
    for (std::size_t i = 0; i < resolution; ++i) {
        for (std::size_t j = 0; j < resolution; ++j) {
            const Vector p{out.p1_values[i], out.p2_values[j]};
            out.feasible[i * resolution + j] =
                single_node_constraint(ch, stab, p).satisfied ? 1 : 0;
        }
    }
    return out;
}

} // namespace wncs
