#pragma once

// Small-gain rate bounds: evaluate the stochastic-protocol and round-robin
// stability conditions, invert them for the minimum stabilizing arrival
// rate, and compare against the single-probability (min f) bound.

#include "wncs/model.hpp"
#include "wncs/protocols.hpp"

#include <optional>
#include <vector>

namespace wncs {

struct StochasticGainInputs {
    double gamma = 0.0;     // L2 gain of the x subsystem
    double norm_a = 0.0;    // growth bound |A| (LTI: entrywise-abs norm of A22)
    std::vector<double> f;  // per-node cumulative probabilities, schedule order
};

struct DeterministicGainInputs {
    double gamma = 0.0;
    double l = 0.0;         // growth constant (LTI: l1 |A22| / a1)
    AsUgesConstants constants;
};

struct LhsSample {
    double omega = 0.0;
    double lhs = 0.0;
    double rho = 0.0;       // series/divergence indicator at this omega
};

struct RateBoundResult {
    double omega_star = 0.0;
    double tabbara_omega = 0.0;    // same pipeline with every f_n := min f_n
    double validity_floor = 0.0;
    std::vector<LhsSample> lhs_curve;
};

// Hard lower bound on omega for the stochastic condition's domain:
// N |A| / min_n [f_n (N-n+1)].
double stochastic_validity_floor(double norm_a, const std::vector<double>& f);

// prod_n (N-n+1) f_n / [(N-n+1) f_n - N |A| / omega] - 1. DomainError at or
// below the floor.
double rho_omega(double omega, double norm_a, const std::vector<double>& f);

// E{T} gamma (1+rho) / ((omega-|A|)(1-rho)); stability certified iff < 1.
// Returns +inf when rho >= 1 (series side diverges).
double smallgain_lhs_stochastic(double omega, const StochasticGainInputs& in);

RateBoundResult min_rate_stochastic(const StochasticGainInputs& in);

// sum_{j>=0} (omega/(omega-L))^j prod_{i<j} E{kappa_i} for the periodic
// slot sequence, summed in closed form over one period. Returns nullopt when
// the per-period ratio reaches 1 (divergent series).
std::optional<double> s_infinity_core(double omega, double l,
                                      const std::vector<double>& expected_kappa);

// Same, but guarded by the theorem's domain condition omega > L/(1-kappa_bar)
// (DomainError otherwise).
double s_infinity(double omega, double l, const std::vector<double>& expected_kappa,
                  double kappa_bar);

// gamma s_infinity(omega) / (a1 omega - a1 L); +inf when the series diverges.
double smallgain_lhs_deterministic(double omega, const DeterministicGainInputs& in);

RateBoundResult min_rate_deterministic(const DeterministicGainInputs& in);

enum class RateMode { Stochastic, Deterministic };

// The comparison pipeline: every f_n replaced by min f_n (equivalently every
// expected-kappa slot replaced by kappa_bar).
double tabbara_bound(const StochasticGainInputs& in);
double tabbara_bound(const DeterministicGainInputs& in);

// L2 gain of the x subsystem x' = A11 x + A12 e + E1 w feeding the error
// dynamics. Stochastic mode: output A21 x. Deterministic mode: the weighted
// query with inputs (e, a1 w') and output l1 (A21 x + E2 a1 w').
// DomainError when A11 is not Hurwitz (emulation premise violated).
double x_subsystem_gain(const LtiWncs& sys, RateMode mode, const AsUgesConstants& constants,
                        double tol = 1e-6);

// Entrywise-absolute spectral norm |A22| used by the stochastic pipeline.
double abs_norm_a22(const LtiWncs& sys);

// Everything cmd_rate needs for one wiring: both pipelines plus inputs.
struct RateAnalysis {
    AsUgesConstants constants;
    double gamma_stochastic = 0.0;
    double gamma_deterministic = 0.0;
    double norm_a_abs = 0.0;   // |abs(A22)|
    double norm_a22 = 0.0;     // plain |A22|
    double l = 0.0;            // l1 |A22| / a1
    RateBoundResult stochastic;
    RateBoundResult deterministic;
};

RateAnalysis analyze_rates(const LtiWncs& sys, const NetworkTopology& topo, double gain_tol = 1e-6);

} // namespace wncs
