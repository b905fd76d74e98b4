#include "wncs/protocols.hpp"

#include "wncs/error.hpp"

#include <algorithm>
#include <cmath>

namespace wncs {

double rr_eta(std::size_t n_nodes) {
    if (n_nodes == 0) throw DomainError("round robin needs at least one node");
    double n = static_cast<double>(n_nodes);
    return std::sqrt((n - 1.0) / n);
}

AsUgesConstants rr_constants(const NetworkTopology& topo) {
    validate_topology(topo);
    const std::size_t n = topo.n_nodes();
    AsUgesConstants c;
    c.a1 = 1.0;
    c.a2 = std::sqrt(static_cast<double>(n));
    c.l1 = std::sqrt(static_cast<double>(n));
    c.eta = rr_eta(n);
    c.expected_kappa.resize(n);
    double worst = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        double f = cumulative_success(topo, s);
        c.expected_kappa[s] = 1.0 - f * (1.0 - c.eta);
        worst = std::max(worst, c.expected_kappa[s]);
    }
    c.kappa_bar = worst;
    return c;
}

std::optional<double> lift_uges_to_as_uges(double eta, const std::vector<double>& p_eta) {
    if (eta < 0.0 || eta >= 1.0) throw DomainError("eta must lie in [0,1)");
    if (p_eta.empty()) throw DomainError("need at least one slot probability");
    double worst = 0.0;
    for (double p : p_eta) {
        if (p < 0.0 || p > 1.0) throw DomainError("slot probabilities must lie in [0,1]");
        worst = std::max(worst, p * eta + 1.0 - p);
    }
    if (worst >= 1.0) return std::nullopt;
    return worst;
}

namespace {

std::vector<double> stage_probabilities(const std::vector<double>& f) {
    const double n = static_cast<double>(f.size());
    if (f.empty()) throw DomainError("need at least one node probability");
    std::vector<double> q(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > 0.0) || f[i] > 1.0)
            throw DomainError("cover time needs probabilities in (0,1]");
        q[i] = (n - static_cast<double>(i)) * f[i] / n;
    }
    return q;
}

} // namespace

double expected_cover_time(const std::vector<double>& f) {
    double sum = 0.0;
    for (double q : stage_probabilities(f)) sum += 1.0 / q;
    return sum;
}

double cover_time_pgf_radius(const std::vector<double>& f) {
    double qmin = 1.0;
    for (double q : stage_probabilities(f)) qmin = std::min(qmin, q);
    return 1.0 / (1.0 - qmin);
}

double cover_time_pgf(const std::vector<double>& f, double s) {
    auto q = stage_probabilities(f);
    if (std::fabs(s) >= cover_time_pgf_radius(f))
        throw DomainError("pgf argument outside its radius of convergence");
    double g = 1.0;
    for (double qi : q) g *= qi * s / (1.0 - (1.0 - qi) * s);
    return g;
}

std::uint64_t sample_cover_time_renewal(const std::vector<double>& f, Rng& rng) {
    std::uint64_t total = 0;
    for (double q : stage_probabilities(f)) {
        // geometric: trials until first success, support {1,2,...}
        std::uint64_t trials = 1;
        while (!rng.bernoulli(q)) ++trials;
        total += trials;
    }
    return total;
}

JumpDraw sample_jump_matrix(Rng& rng, ProtocolKind kind, const NetworkTopology& topo,
                            std::uint64_t k) {
    if (k == 0) throw DomainError("jump index is 1-based");
    const std::size_t n = topo.n_nodes();
    JumpDraw d;
    d.node = kind == ProtocolKind::RoundRobin
                 ? static_cast<std::size_t>((k - 1) % n)
                 : static_cast<std::size_t>(rng.uniform_index(n));
    d.diag.assign(topo.ne, 1.0);
    const auto& links = topo.nodes[d.node].links;
    d.link_success.resize(links.size());
    d.node_success = true;
    for (std::size_t i = 0; i < links.size(); ++i) {
        bool ok = rng.bernoulli(links[i].f);
        d.link_success[i] = ok ? 1 : 0;
        if (ok) {
            for (std::size_t c : links[i].coords) d.diag[c] = 0.0;
        } else {
            d.node_success = false;
        }
    }
    return d;
}

} // namespace wncs
