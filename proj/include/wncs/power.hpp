#pragma once

// Transmit power selection under an outage-probability stability budget.
// A transmission interval bound tau_bar converts into a budget C on the
// summed inverse SINRs; feasible powers are found either by a closed form
// (two links) or by a linear program swept over a probability simplex.

#include "wncs/lpsolve.hpp"
#include "wncs/model.hpp"
#include "wncs/protocols.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace wncs {

struct StabilityConstant {
    double c_tau = 0.0;    // inverse-SINR budget
    double delta = 0.0;
    double tau_bar = 0.0;
    double gamma = 0.0;
    double l = 0.0;
    double eta = 0.0;
    double a = 1.0;        // outage exponent
};

// -ln(tau_bar (gamma+l)/(1-eta) - delta)/a. InfeasibleError when the
// argument leaves (0,1): the required success probability would be >= 1
// (tau_bar too large) or the slack delta already exceeds the requirement.
double compute_c_tau(double tau_bar, double gamma, double l, double eta, double delta,
                     double a);

StabilityConstant make_stability_constant(double tau_bar, double gamma, double l, double eta,
                                          double delta, double a);

// SINR of link i under simultaneous transmission at the given powers.
double sinr(const ChannelModel& ch, const Vector& powers, std::size_t i);
Vector all_sinr(const ChannelModel& ch, const Vector& powers);

// Success probability exp(-a/sinr) of one link.
double phi_outage(double a, double sinr_value);

// min sum p s.t. SINR_i >= 1/(q_i C) and p_i <= p_max, for one interior
// split q of the budget (q_i > 0, sum q = 1).
LpProblem build_power_lp(const ChannelModel& ch, double c_tau, const Vector& q);

struct PowerSolution {
    Vector q_star;            // budget split that won
    Vector powers;
    double objective = 0.0;   // sum of powers
    Vector sinr_values;
    Vector phi_values;
    double phi_product = 0.0;
    double required_product = 0.0;  // exp(-a c_tau)
    double p_max_margin = 0.0;      // min_i (p_max - p_i)
};

std::size_t default_grid_resolution(std::size_t n_links);

// Sweep interior lattice points q = k/r (k integer >= 1, sum k = r) of the
// simplex, solve the LP at each, return the feasible point with the smallest
// power sum (ties: lexicographically smallest q). InfeasibleError when no
// lattice point admits feasible powers.
PowerSolution solve_problem2(const ChannelModel& ch, const StabilityConstant& stab,
                             std::size_t grid = 0, unsigned threads = 0);

// Two-link closed form. Interval of budget splits epsilon for which the
// constraint pair has a positive solution:
// 1/2 -+ sqrt(1/4 - g12 g21 / (g11 g22 C^2)).
std::pair<double, double> two_link_interval(const ChannelModel& ch, double c_tau);

// Exact powers meeting both SINR constraints with equality at split epsilon
// (DomainError outside the interval).
Vector two_link_powers(const ChannelModel& ch, double c_tau, double epsilon);

struct TwoLinkOptimum {
    double epsilon = 0.0;
    Vector powers;
    double objective = 0.0;
    double quad_a = 0.0, quad_b = 0.0, quad_c = 0.0;  // stationarity quadratic
    bool used_scan_fallback = false;
};

// Minimizing split of the total power: root of the stationarity quadratic
// inside the interval, with a dense-scan fallback if the quadratic fails to
// deliver one.
TwoLinkOptimum two_link_epsilon_star(const ChannelModel& ch, double c_tau);

// Symmetric special case (all four gains g, equal noise): epsilon = 1/2 and
// p = 2 sigma2 / ((C - 2) g). DomainError when C <= 2.
double two_link_symmetric_power(double g, double sigma2, double c_tau);

struct TwoLinkFeasibility {
    double tau_bar_bound = 0.0;   // largest tau_bar with a nonempty interval
    double c_min = 0.0;           // 2 sqrt(g12 g21 / (g11 g22))
    bool interval_nonempty = false;
    bool within_p_max = false;
    bool feasible = false;
    TwoLinkOptimum optimum;       // populated when the interval is nonempty
};

TwoLinkFeasibility two_link_feasibility(const ChannelModel& ch, const StabilityConstant& stab);

struct ConstraintCheck {
    double lhs = 0.0;       // tau_bar (gamma+l)/(1-eta)
    double rhs = 0.0;       // delta + prod phi
    bool satisfied = false;
};

// Single-node stability inequality at the given powers.
ConstraintCheck single_node_constraint(const ChannelModel& ch, const StabilityConstant& stab,
                                       const Vector& powers);

// N-node round-robin check: node n succeeds with f_n = prod_i phi(sinr_n_i),
// the contraction sequence is rebuilt from those f, and the deterministic
// small-gain lhs is evaluated at omega = 1/tau_bar. +inf when the series
// diverges. eta defaults to the round-robin value for n nodes.
double multi_node_stability_lhs(const std::vector<ChannelModel>& node_channels,
                                const std::vector<Vector>& node_powers, double tau_bar,
                                double gamma, double l,
                                std::optional<double> eta = std::nullopt);

struct RegionGrid {
    Vector p1_values;
    Vector p2_values;
    std::vector<std::uint8_t> feasible;  // row-major over (p1 index, p2 index)
};

// Tabulate the single-node stability inequality over a power rectangle.
RegionGrid stability_region(const ChannelModel& ch, const StabilityConstant& stab,
                            double p1_lo, double p1_hi, double p2_lo, double p2_hi,
                            std::size_t resolution);

} // namespace wncs
