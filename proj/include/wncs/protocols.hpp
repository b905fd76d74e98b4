#pragma once

// Scheduling-protocol analytics: cover-time statistics for the stochastic
// protocol, the almost-surely-UGES constants of round robin under Bernoulli
// losses, and jump-matrix sampling shared with the simulator.

#include "wncs/model.hpp"
#include "wncs/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wncs {

// Lyapunov constants of an a.s. UGES protocol: a1|e| <= W <= a2|e|, per-jump
// expected contraction E{kappa_k} (periodic, slot s serves node s mod N),
// uniform bound kappa_bar, lossless contraction eta, Lipschitz constant l1.
struct AsUgesConstants {
    double a1 = 1.0;
    double a2 = 1.0;
    double eta = 0.0;
    double l1 = 1.0;
    double kappa_bar = 0.0;
    std::vector<double> expected_kappa;
};

// Round-robin lossless contraction sqrt((N-1)/N).
double rr_eta(std::size_t n_nodes);

// a1 = 1, a2 = sqrt(N), l1 = sqrt(N), eta as above; per-slot expected
// contraction 1 - f_n (1 - eta) with f_n the node's cumulative success
// probability; kappa_bar is the worst slot. Throws ConfigError on an
// invalid topology.
AsUgesConstants rr_constants(const NetworkTopology& topo);

// Smallest uniform kappa_bar = max_k [p_eta(k) eta + 1 - p_eta(k)] if < 1;
// nullopt when the sequence admits no contraction (some p_eta(k) = 0 with
// eta... = 1, i.e. the bound reaches 1).
std::optional<double> lift_uges_to_as_uges(double eta, const std::vector<double>& p_eta);

// Mean cover time of the stochastic protocol in the node order given:
// sum_n N / ((N-n+1) f_n). Throws DomainError if any f_n = 0.
double expected_cover_time(const std::vector<double>& f);

// Probability generating function of the cover time: product over n of the
// geometric pgf with stage probability q_n = (N-n+1) f_n / N. Valid for
// |s| < cover_time_pgf_radius(f); outside -> DomainError.
double cover_time_pgf(const std::vector<double>& f, double s);
double cover_time_pgf_radius(const std::vector<double>& f);

// One sample of the stage-wise renewal chain the formulas above describe
// (sum of independent geometrics).
std::uint64_t sample_cover_time_renewal(const std::vector<double>& f, Rng& rng);

// Outcome of one transmission instant: scheduled node, per-link Bernoulli
// results, and the diagonal of the e-update matrix (0 zeroes a coordinate,
// 1 keeps it).
struct JumpDraw {
    std::size_t node = 0;
    bool node_success = false;
    std::vector<std::uint8_t> link_success;
    std::vector<double> diag;
};

// k is the 1-based jump index; round robin grants node (k-1) mod N, the
// stochastic protocol draws the node uniformly.
JumpDraw sample_jump_matrix(Rng& rng, ProtocolKind kind, const NetworkTopology& topo,
                            std::uint64_t k);

} // namespace wncs
