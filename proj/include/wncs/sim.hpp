#pragma once

// Event-driven simulation of the jump-flow system: RK4 flow between Poisson
// transmission instants, multiplicative jumps on the error coordinates at
// each instant, Monte Carlo decay statistics over many trials.

#include "wncs/matrix.hpp"
#include "wncs/model.hpp"
#include "wncs/protocols.hpp"
#include "wncs/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace wncs {

// Right-hand side dz/dt = f(t, z). When `lti` is set the simulator bypasses
// the std::function and multiplies the flat matrix directly.
struct Dynamics {
    std::function<void(double, const Vector&, Vector&)> rhs;
    const Matrix* lti = nullptr;

    void eval(double t, const Vector& z, Vector& dz) const;
};

struct Rk4Workspace {
    Vector k1, k2, k3, k4, stage;
    void resize(std::size_t n);
};

// One classic Runge-Kutta step of size h, in place.
void rk4_step(const Dynamics& dyn, double t, double h, Vector& z, Rk4Workspace& ws);

struct SimConfig {
    double omega = 0.0;            // Poisson transmission rate
    ProtocolKind protocol = ProtocolKind::RoundRobin;
    double horizon = 1.0;
    double dt = 0.0;               // 0: min(1/(20 omega), 1e-3 / |A11|)
    std::size_t grid_points = 500; // output samples including t = 0 and horizon
    Vector x0, e0;
    bool record_jump_states = false;  // keep pre/post state at every jump
};

struct JumpRecord {
    double t = 0.0;
    std::size_t node = 0;
    bool node_success = false;
    Vector diag;        // e-update diagonal (record_jump_states only)
    Vector pre, post;   // full state around the jump (record_jump_states only)
};

struct Trajectory {
    Vector times;
    std::vector<Vector> z;    // full state at each grid time
    Vector norms;
    std::vector<JumpRecord> jumps;
    std::size_t n_arrivals = 0;
    bool divergent = false;
    double divergence_time = 0.0;
};

double default_sim_dt(double omega, double norm_a11);

// One trial. The flow matrix is [[A11, A12], [A21, A22]] acting on (x, e)
// with the disturbance held at zero; integration is cut exactly at every
// arrival and every grid time. Divergence (norm above 1e12 or non-finite)
// stops the trial and pads the remaining grid with +inf norms.
Trajectory simulate(const LtiWncs& sys, const NetworkTopology& topo, const SimConfig& cfg,
                    Rng& rng);

struct DecayFit {
    double slope = 0.0;      // c in log mean-norm ~ intercept + c t (tail half)
    double intercept = 0.0;
    double slope_lo = 0.0;   // bootstrap 95% interval
    double slope_hi = 0.0;
};

struct MonteCarloResult {
    Vector times;
    Vector mean_norm;        // over non-divergent trials
    Vector q90, q99;
    std::size_t trials = 0;
    std::size_t divergent = 0;
    DecayFit fit;
    double final_over_initial = 0.0;  // mean norm at horizon / mean norm at 0
};

// Runs `trials` independent trials (trial i uses rng.split(i), so results do
// not depend on the thread layout) and fits the tail-half decay rate with a
// 200-resample bootstrap interval.
MonteCarloResult monte_carlo_decay(const LtiWncs& sys, const NetworkTopology& topo,
                                   const SimConfig& cfg, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 0);

struct ProtocolStats {
    std::vector<double> node_visit_rate;    // share of slots granted to each node
    std::vector<double> node_success_rate;  // full-node successes per grant
    double cover_mean = 0.0;                // transmissions per completed cover
    double cover_se = 0.0;
    std::size_t covers = 0;
    std::uint64_t slots = 0;
};

// Pure jump-chain statistics (no flow): every node must land a fully
// successful transmission, then the cover restarts.
ProtocolStats empirical_protocol_stats(const NetworkTopology& topo, ProtocolKind kind,
                                       std::uint64_t slots, Rng& rng);

} // namespace wncs
