#include "wncs/model.hpp"

#include "wncs/error.hpp"

#include <cmath>

namespace wncs {

namespace {

void check_plant_controller(const LtiPlant& plant, const LtiController& ctrl) {
    const std::size_t np = plant.ap.rows();
    const std::size_t nu = plant.bp.cols();
    const std::size_t ny = plant.cp.rows();
    const std::size_t nc = ctrl.ac.rows();
    if (plant.ap.cols() != np) throw DimensionError("plant state matrix must be square");
    if (plant.bp.rows() != np) throw DimensionError("plant input matrix row mismatch");
    if (plant.cp.cols() != np) throw DimensionError("plant output matrix column mismatch");
    if (!plant.ep.empty() && plant.ep.rows() != np)
        throw DimensionError("plant disturbance matrix row mismatch");
    if (ctrl.ac.cols() != nc) throw DimensionError("controller state matrix must be square");
    if (ctrl.bc.rows() != nc || ctrl.bc.cols() != ny)
        throw DimensionError("controller input matrix must be nc x ny");
    if (ctrl.cc.rows() != nu || ctrl.cc.cols() != nc)
        throw DimensionError("controller output matrix must be nu x nc");
}

// g maps x' to the drift of the held signals; the hold errors then flow as
// e' = -g x' which yields the A21/A22/E2 blocks.
LtiWncs assemble(const LtiPlant& plant, const LtiController& ctrl, const Matrix& a12,
                 const Matrix& g) {
    const std::size_t np = plant.ap.rows();
    const std::size_t nc = ctrl.ac.rows();
    const std::size_t nx = np + nc;
    const std::size_t nw = plant.ep.empty() ? 0 : plant.ep.cols();

    LtiWncs sys;
    sys.nx = nx;
    sys.ne = a12.cols();
    sys.nw = nw;

    sys.a11 = Matrix(nx, nx);
    sys.a11.set_block(0, 0, plant.ap);
    sys.a11.set_block(0, np, plant.bp * ctrl.cc);
    sys.a11.set_block(np, 0, ctrl.bc * plant.cp);
    sys.a11.set_block(np, np, ctrl.ac);

    sys.a12 = a12;

    sys.e1 = Matrix(nx, nw);
    if (nw) sys.e1.set_block(0, 0, plant.ep);

    sys.a21 = -1.0 * (g * sys.a11);
    sys.a22 = -1.0 * (g * sys.a12);
    sys.e2 = -1.0 * (g * sys.e1);
    return sys;
}

} // namespace

LtiWncs build_closed_loop(const LtiPlant& plant, const LtiController& ctrl) {
    check_plant_controller(plant, ctrl);
    const std::size_t np = plant.ap.rows();
    const std::size_t nc = ctrl.ac.rows();
    const std::size_t nu = plant.bp.cols();
    const std::size_t ny = plant.cp.rows();
    const std::size_t ne = ny + nu;

    Matrix a12(np + nc, ne);
    a12.set_block(0, ny, plant.bp);
    a12.set_block(np, 0, ctrl.bc);

    Matrix g(ne, np + nc);
    g.set_block(0, 0, plant.cp);
    g.set_block(ny, np, ctrl.cc);

    return assemble(plant, ctrl, a12, g);
}

LtiWncs build_sensor_only_loop(const LtiPlant& plant, const LtiController& ctrl) {
    check_plant_controller(plant, ctrl);
    const std::size_t np = plant.ap.rows();
    const std::size_t nc = ctrl.ac.rows();
    const std::size_t ny = plant.cp.rows();

    Matrix a12(np + nc, ny);
    a12.set_block(np, 0, ctrl.bc);

    Matrix g = hcat(plant.cp, Matrix(ny, nc));

    return assemble(plant, ctrl, a12, g);
}

void validate_topology(const NetworkTopology& topo) {
    if (topo.nodes.empty()) throw ConfigError("network needs at least one node");
    std::vector<int> seen(topo.ne, 0);
    for (const auto& node : topo.nodes) {
        if (node.links.empty()) throw ConfigError("every node needs at least one link");
        for (const auto& link : node.links) {
            if (!(link.f > 0.0) || link.f > 1.0)
                throw ConfigError("link success probability must lie in (0,1]");
            for (std::size_t c : link.coords) {
                if (c >= topo.ne) throw ConfigError("link coordinate index out of range");
                if (seen[c]++) throw ConfigError("error coordinate assigned to two links");
            }
        }
    }
    for (std::size_t c = 0; c < topo.ne; ++c)
        if (!seen[c]) throw ConfigError("error coordinate not covered by any link");
}

double cumulative_success(const NetworkTopology& topo, std::size_t node) {
    if (node >= topo.nodes.size()) throw DimensionError("node index out of range");
    double f = 1.0;
    for (const auto& link : topo.nodes[node].links) f *= link.f;
    return f;
}

std::vector<double> node_probabilities(const NetworkTopology& topo) {
    std::vector<double> f(topo.nodes.size());
    for (std::size_t n = 0; n < topo.nodes.size(); ++n) f[n] = cumulative_success(topo, n);
    return f;
}

void validate_channel(const ChannelModel& ch) {
    const std::size_t l = ch.g.rows();
    if (l == 0 || ch.g.cols() != l) throw ConfigError("channel gain matrix must be square");
    if (ch.sigma2.size() != l) throw ConfigError("noise vector length must match link count");
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            if (!(ch.g(i, j) > 0.0) || !std::isfinite(ch.g(i, j)))
                throw ConfigError("channel gains must be strictly positive");
    for (double s : ch.sigma2)
        if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("noise variances must be positive");
    if (!(ch.a > 0.0)) throw ConfigError("outage parameter must be positive");
    if (!(ch.p_max > 0.0)) throw ConfigError("power cap must be positive");
}

} // namespace wncs
