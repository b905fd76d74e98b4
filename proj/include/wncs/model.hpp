#pragma once

// Closed-loop assembly: plant and dynamic output controller exchanging
// signals over a shared network with zero-order hold between updates. State
// x stacks plant and controller states; e stacks the hold errors on the
// networked signals. Between updates
//   x' = A11 x + A12 e + E1 w
//   e' = A21 x + A22 e + E2 w
// and at transmission instants the scheduled node's successful links have
// their error coordinates zeroed.

#include "wncs/matrix.hpp"

#include <cstddef>
#include <vector>

namespace wncs {

// x' = Ap x + Bp u + Ep w, y = Cp x
struct LtiPlant {
    Matrix ap, bp, ep, cp;
};

// xc' = Ac xc + Bc y, u = Cc xc
struct LtiController {
    Matrix ac, bc, cc;
};

struct LtiWncs {
    Matrix a11, a12, a21, a22, e1, e2;
    std::size_t nx = 0, ne = 0, nw = 0;
};

// Both y and u cross the network (e = (e_y, e_u)) versus only y (control
// inputs wired directly, e = e_y).
enum class Wiring { Full, SensorOnly };

LtiWncs build_closed_loop(const LtiPlant& plant, const LtiController& ctrl);
LtiWncs build_sensor_only_loop(const LtiPlant& plant, const LtiController& ctrl);

// One transmitter-receiver pair inside a node: its success probability and
// the error coordinates it carries.
struct NetworkLink {
    double f = 1.0;
    std::vector<std::size_t> coords;
};

struct NetworkNode {
    std::vector<NetworkLink> links;
};

// Nodes transmit as units (all links of the scheduled node at once); the
// link->coordinate map must partition {0..ne-1}.
struct NetworkTopology {
    std::vector<NetworkNode> nodes;
    std::size_t ne = 0;

    std::size_t n_nodes() const { return nodes.size(); }
};

// Throws ConfigError if probabilities leave (0,1] or the coordinate map is
// not a partition of {0..ne-1}.
void validate_topology(const NetworkTopology& topo);

// Product of the node's per-link success probabilities (probability the
// whole node's packet set lands). node is 0-based.
double cumulative_success(const NetworkTopology& topo, std::size_t node);
std::vector<double> node_probabilities(const NetworkTopology& topo);

enum class ProtocolKind { RoundRobin, StochasticUniform };

// Per-node wireless channel: g(i,j) is the gain of transmitter i at
// receiver j, so SINR_i = g(i,i) p_i / (sigma2_i + sum_{j!=i} g(j,i) p_j).
struct ChannelModel {
    Matrix g;
    Vector sigma2;
    double a = 1.0;
    double p_max = 0.0;
};

void validate_channel(const ChannelModel& ch);

} // namespace wncs
