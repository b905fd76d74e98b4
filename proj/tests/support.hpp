#pragma once

// Shared fixture: the unstable batch reactor (plant data from Green &
// Limebeer, p. 62) with its stabilizing dynamic output controller, and the
// two-node network splitting sensors and actuation commands.

#include "wncs/model.hpp"

namespace wncs::testsup {

inline LtiPlant reactor_plant() {
    LtiPlant p;
    p.ap = Matrix{{1.38, -0.2077, 6.715, -5.676},
                  {-0.5814, -4.29, 0, 0.675},
                  {1.067, 4.273, -6.654, 5.893},
                  {0.048, 4.273, 1.343, -2.104}};
    p.bp = Matrix{{0, 0}, {5.679, 0}, {1.136, -3.146}, {1.136, 0}};
    p.cp = Matrix{{1, 0, 1, -1}, {0, 1, 0, 0}};
    p.ep = Matrix(4, 0);
    return p;
}

inline LtiController reactor_controller() {
    LtiController c;
    c.ac = Matrix{{-7.88, -4.86, -2.55, 3.59},
                  {-0.72, -6.60, -0.59, 0.65},
                  {-11.61, -23.35, -13.19, 11.92},
                  {-10.43, -21.57, -9.22, 8.34}};
    c.bc = Matrix{{9.26, 4.65}, {0.85, 4.72}, {10.97, 27.28}, {10.62, 26.33}};
    c.cc = Matrix{{0.13, 0.42, 0.046, -0.15}, {0.59, 0.26, -1.39, 1.52}};
    return c;
}

// node 0 carries the two sensor channels (success 0.3 and 0.8), node 1 the
// two actuation channels (0.75 and 0.8); cumulative f = (0.24, 0.6)
inline NetworkTopology reactor_topology() {
    NetworkTopology topo;
    topo.ne = 4;
    topo.nodes = {NetworkNode{{NetworkLink{0.3, {0}}, NetworkLink{0.8, {1}}}},
                  NetworkNode{{NetworkLink{0.75, {2}}, NetworkLink{0.8, {3}}}}};
    return topo;
}

} // namespace wncs::testsup
