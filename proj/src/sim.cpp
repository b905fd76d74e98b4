#include "wncs/sim.hpp"

#include "wncs/error.hpp"
#include "wncs/kernels.hpp"
#include "wncs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>

namespace wncs {

namespace {

constexpr double kDivergenceNorm = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool diverged(const Vector& z) {
    const double n = kern::nrm2(z.data(), z.size());
    return !std::isfinite(n) || n > kDivergenceNorm;
}

struct FitLine {
    double slope = 0.0, intercept = 0.0;
};

FitLine least_squares(const double* x, const double* y, std::size_t n) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = double(n);
    const double denom = nn * sxx - sx * sx;
    FitLine f;
    f.slope = (nn * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / nn;
    return f;
}

} // namespace

void Dynamics::eval(double t, const Vector& z, Vector& dz) const {
    if (lti) {
        dz.resize(z.size());
        kern::matvec(lti->data(), lti->rows(), lti->cols(), z.data(), dz.data());
        return;
    }
    rhs(t, z, dz);
}

void Rk4Workspace::resize(std::size_t n) {
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    stage.resize(n);
}

void rk4_step(const Dynamics& dyn, double t, double h, Vector& z, Rk4Workspace& ws) {
    const std::size_t n = z.size();
    ws.resize(n);
    dyn.eval(t, z, ws.k1);
    std::copy(z.begin(), z.end(), ws.stage.begin());
    kern::axpy(0.5 * h, ws.k1.data(), ws.stage.data(), n);
    dyn.eval(t + 0.5 * h, ws.stage, ws.k2);
    std::copy(z.begin(), z.end(), ws.stage.begin());
    kern::axpy(0.5 * h, ws.k2.data(), ws.stage.data(), n);
    dyn.eval(t + 0.5 * h, ws.stage, ws.k3);
    std::copy(z.begin(), z.end(), ws.stage.begin());
    kern::axpy(h, ws.k3.data(), ws.stage.data(), n);
    dyn.eval(t + h, ws.stage, ws.k4);
    kern::axpy(h / 6.0, ws.k1.data(), z.data(), n);
    kern::axpy(h / 3.0, ws.k2.data(), z.data(), n);
    kern::axpy(h / 3.0, ws.k3.data(), z.data(), n);
    kern::axpy(h / 6.0, ws.k4.data(), z.data(), n);
}

double default_sim_dt(double omega, double norm_a11) {
    if (!(omega > 0.0)) throw DomainError("arrival rate must be positive");
    double dt = 1.0 / (20.0 * omega);
    if (norm_a11 > 0.0) dt = std::min(dt, 1e-3 / norm_a11);
    return dt;
}

Trajectory simulate(const LtiWncs& sys, const NetworkTopology& topo, const SimConfig& cfg,
                    Rng& rng) {
    validate_topology(topo);
    if (topo.ne != sys.ne) throw DimensionError("topology and system disagree on ne");
    if (cfg.x0.size() != sys.nx || cfg.e0.size() != sys.ne) {
        throw DimensionError("initial state does not match system dimensions");
    }
    if (!(cfg.omega > 0.0)) throw DomainError("arrival rate must be positive");
    if (!(cfg.horizon > 0.0)) throw DomainError("horizon must be positive");
    if (cfg.grid_points < 2) throw DomainError("need at least two grid points");

    const std::size_t nx = sys.nx, ne = sys.ne, nz = nx + ne;
    Matrix f(nz, nz);
    f.set_block(0, 0, sys.a11);
    f.set_block(0, nx, sys.a12);
    f.set_block(nx, 0, sys.a21);
    f.set_block(nx, nx, sys.a22);
    Dynamics dyn;
    dyn.lti = &f;

    const double dt = cfg.dt > 0.0 ? cfg.dt : default_sim_dt(cfg.omega, spectral_norm(sys.a11));
    const std::size_t g = cfg.grid_points;

    Trajectory traj;
    traj.times.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        traj.times[i] = cfg.horizon * double(i) / double(g - 1);
    }
    traj.z.reserve(g);
    traj.norms.resize(g, 0.0);

    Vector z(nz);
    std::copy(cfg.x0.begin(), cfg.x0.end(), z.begin());
    std::copy(cfg.e0.begin(), cfg.e0.end(), z.begin() + nx);
    traj.z.push_back(z);
    traj.norms[0] = kern::nrm2(z.data(), nz);

    Rk4Workspace ws;
    ws.resize(nz);
    double t = 0.0;
    double next_arrival = rng.exponential(cfg.omega);
    std::uint64_t k = 1;

    auto integrate_to = [&](double target) {
        if (target <= t) {
            t = target;
            return true;
        }
        const double span = target - t;
        const std::size_t steps = std::max<std::size_t>(1, std::size_t(std::ceil(span / dt)));
        const double h = span / double(steps);
        for (std::size_t s = 0; s < steps; ++s) {
            rk4_step(dyn, t + double(s) * h, h, z, ws);
            if ((s & 15u) == 15u && diverged(z)) {
                traj.divergent = true;
                traj.divergence_time = t + double(s + 1) * h;
                return false;
            }
        }
        t = target;
        if (diverged(z)) {
            traj.divergent = true;
            traj.divergence_time = t;
            return false;
        }
        return true;
    };

    std::size_t gi = 1;
    while (gi < g) {
        if (next_arrival <= traj.times[gi]) {
            if (!integrate_to(next_arrival)) break;
            const JumpDraw jd = sample_jump_matrix(rng, cfg.protocol, topo, k);
            JumpRecord rec;
            rec.t = t;
            rec.node = jd.node;
            rec.node_success = jd.node_success;
            if (cfg.record_jump_states) rec.pre = z;
            for (std::size_t i = 0; i < ne; ++i) z[nx + i] *= jd.diag[i];
            if (cfg.record_jump_states) {
                rec.post = z;
                rec.diag = jd.diag;
            }
            traj.jumps.push_back(std::move(rec));
            next_arrival = t + rng.exponential(cfg.omega);
            ++k;
        } else {
            if (!integrate_to(traj.times[gi])) break;
            traj.z.push_back(z);
            traj.norms[gi] = kern::nrm2(z.data(), nz);
            ++gi;
        }
    }
    traj.n_arrivals = traj.jumps.size();
    for (; gi < g; ++gi) {
        traj.z.push_back(z);
        traj.norms[gi] = kInf;
    }
    return traj;
}

MonteCarloResult monte_carlo_decay(const LtiWncs& sys, const NetworkTopology& topo,
                                   const SimConfig& cfg, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
    if (trials == 0) throw DomainError("at least one trial required");
    SimConfig run = cfg;
    if (run.dt <= 0.0) run.dt = default_sim_dt(cfg.omega, spectral_norm(sys.a11));
    const std::size_t g = run.grid_points;

    std::vector<double> norms(trials * g, 0.0);
    std::vector<std::uint8_t> bad(trials, 0);
    Rng base(seed);

    unsigned nthreads = threads;
    if (nthreads == 0) nthreads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    nthreads = std::min<unsigned>(nthreads, trials);
    auto worker = [&](unsigned tid) {
        for (std::size_t i = tid; i < trials; i += nthreads) {
            Rng r = base.split(i);
            Trajectory tr = simulate(sys, topo, run, r);
            std::copy(tr.norms.begin(), tr.norms.end(), norms.begin() + i * g);
            bad[i] = tr.divergent ? 1 : 0;
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
        for (auto& th : pool) th.join();
    }

    MonteCarloResult out;
    out.trials = trials;
    out.times.resize(g);
    for (std::size_t j = 0; j < g; ++j) out.times[j] = run.horizon * double(j) / double(g - 1);

    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < trials; ++i) {
        if (!bad[i]) alive.push_back(i);
    }
    out.divergent = trials - alive.size();
    out.mean_norm.assign(g, kInf);
    out.q90.assign(g, kInf);
    out.q99.assign(g, kInf);
    if (alive.empty()) {
        out.fit.slope = kInf;
        out.final_over_initial = kInf;
        return out;
    }

    Vector column(alive.size());
    for (std::size_t j = 0; j < g; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < alive.size(); ++i) {
            column[i] = norms[alive[i] * g + j];
            acc += column[i];
        }
        out.mean_norm[j] = acc / double(alive.size());
        std::sort(column.begin(), column.end());
        auto rank = [&](double q) {
            const std::size_t idx =
                std::min(column.size() - 1,
                         std::size_t(std::ceil(q * double(column.size()))) -
                             (q > 0.0 ? 1 : 0));
            return column[idx];
        };
        out.q90[j] = rank(0.90);
        out.q99[j] = rank(0.99);
    }
    out.final_over_initial = out.mean_norm.back() / out.mean_norm.front();

    // log-linear fit on the tail half of the horizon
    std::size_t tail0 = 0;
    while (tail0 < g && out.times[tail0] < 0.5 * run.horizon) ++tail0;
    const std::size_t tail_n = g - tail0;
    Vector tx(tail_n), ty(tail_n);
    auto tail_slope = [&](const std::vector<std::size_t>& rows) {
        for (std::size_t j = 0; j < tail_n; ++j) {
            double acc = 0.0;
            for (std::size_t r : rows) acc += norms[r * g + tail0 + j];
            acc /= double(rows.size());
            tx[j] = out.times[tail0 + j];
            ty[j] = std::log(std::max(acc, 1e-300));
        }
        return least_squares(tx.data(), ty.data(), tail_n);
    };
    const FitLine fit = tail_slope(alive);
    out.fit.slope = fit.slope;
    out.fit.intercept = fit.intercept;

    const int nboot = 200;
    Vector slopes(nboot);
    Rng boot = base.split(0xB007u);
    std::vector<std::size_t> sample(alive.size());
    for (int b = 0; b < nboot; ++b) {
        for (auto& s : sample) s = alive[boot.uniform_index(alive.size())];
        slopes[b] = tail_slope(sample).slope;
    }
    std::sort(slopes.begin(), slopes.end());
    out.fit.slope_lo = slopes[std::size_t(std::floor(0.025 * (nboot - 1)))];
    out.fit.slope_hi = slopes[std::size_t(std::ceil(0.975 * (nboot - 1)))];
    return out;
}

ProtocolStats empirical_protocol_stats(const NetworkTopology& topo, ProtocolKind kind,
                                       std::uint64_t slots, Rng& rng) {
    validate_topology(topo);
    if (slots == 0) throw DomainError("at least one slot required");
    const std::size_t n = topo.n_nodes();

    ProtocolStats out;
    out.slots = slots;
    std::vector<std::uint64_t> visits(n, 0), wins(n, 0);
    std::vector<std::uint8_t> covered(n, 0);
    std::size_t covered_count = 0;
    std::uint64_t len = 0;
    double sum = 0.0, sumsq = 0.0;

    for (std::uint64_t s = 1; s <= slots; ++s) {
        const JumpDraw jd = sample_jump_matrix(rng, kind, topo, s);
        ++visits[jd.node];
        ++len;
        if (jd.node_success) {
            ++wins[jd.node];
            if (!covered[jd.node]) {
                covered[jd.node] = 1;
                if (++covered_count == n) {
                    sum += double(len);
                    sumsq += double(len) * double(len);
                    ++out.covers;
                    covered_count = 0;
                    len = 0;
                    std::fill(covered.begin(), covered.end(), 0);
                }
            }
        }
    }

    out.node_visit_rate.resize(n);
    out.node_success_rate.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.node_visit_rate[i] = double(visits[i]) / double(slots);
        out.node_success_rate[i] = visits[i] ? double(wins[i]) / double(visits[i]) : 0.0;
    }
    if (out.covers > 0) {
        out.cover_mean = sum / double(out.covers);
        if (out.covers > 1) {
            const double var =
                (sumsq - double(out.covers) * out.cover_mean * out.cover_mean) /
                double(out.covers - 1);
            out.cover_se = std::sqrt(std::max(0.0, var) / double(out.covers));
        }
    }
    return out;
}

} // namespace wncs
