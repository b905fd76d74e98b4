#include "wncs/stability.hpp"

#include "wncs/error.hpp"
#include "wncs/matrix.hpp"
#include "wncs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wncs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketHi = 1e12;

void check_f(const std::vector<double>& f) {
    if (f.empty()) throw DomainError("empty probability vector");
    for (double p : f) {
        if (!(p > 0.0) || p > 1.0) throw DomainError("node probability outside (0, 1]");
    }
}

// min over schedule positions n (1-based) of f_n (N-n+1)
double min_stage_weight(const std::vector<double>& f) {
    const std::size_t n = f.size();
    double m = kInf;
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, f[i] * double(n - i));
    return m;
}

struct LhsRho {
    double lhs;
    double rho;
};

LhsRho stochastic_lhs_rho(double omega, const StochasticGainInputs& in) {
    const double rho = rho_omega(omega, in.norm_a, in.f);
    if (rho >= 1.0) return {kInf, rho};
    const double et = expected_cover_time(in.f);
    return {et * in.gamma * (1.0 + rho) / ((omega - in.norm_a) * (1.0 - rho)), rho};
}

LhsRho deterministic_lhs_rho(double omega, const DeterministicGainInputs& in) {
    const auto& kappa = in.constants.expected_kappa;
    const double s = s_infinity(omega, in.l, kappa, in.constants.kappa_bar);
    const double r = omega / (omega - in.l);
    double per_period = 1.0;
    for (double k : kappa) per_period *= r * k;
    return {in.gamma * s / (in.constants.a1 * (omega - in.l)), per_period};
}

// Bisect the strictly decreasing lhs for its crossing of 1. Returns the
// certified (upper) endpoint; lo itself when the floor already certifies.
template <typename Fn>
double solve_min_rate(double floor, Fn lhs_at) {
    const double lo0 = floor * (1.0 + 1e-9);
    if (lhs_at(lo0) < 1.0) return lo0;
    if (!(lhs_at(kBracketHi) < 1.0)) {
        throw InfeasibleError("stability condition not met for any arrival rate up to 1e12");
    }
    double lo = lo0, hi = kBracketHi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lhs_at(mid) < 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

template <typename Fn>
void fill_curve(RateBoundResult& out, Fn lhs_rho_at) {
    const double lo = out.validity_floor * (1.0 + 1e-3);
    const double hi = 10.0 * std::max({out.omega_star, out.tabbara_omega, out.validity_floor});
    const int pts = 200;
    out.lhs_curve.reserve(pts);
    for (int i = 0; i < pts; ++i) {
        const double w = lo * std::pow(hi / lo, double(i) / double(pts - 1));
        const LhsRho v = lhs_rho_at(w);
        out.lhs_curve.push_back({w, v.lhs, v.rho});
    }
}

} // namespace

double stochastic_validity_floor(double norm_a, const std::vector<double>& f) {
    check_f(f);
    if (norm_a < 0.0) throw DomainError("negative growth bound");
    return double(f.size()) * norm_a / min_stage_weight(f);
}

double rho_omega(double omega, double norm_a, const std::vector<double>& f) {
    const double floor = stochastic_validity_floor(norm_a, f);
    if (!(omega > floor)) {
        throw DomainError("arrival rate " + std::to_string(omega) +
                          " at or below the validity floor " + std::to_string(floor));
    }
    const std::size_t n = f.size();
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = f[i] * double(n - i);
        prod *= w / (w - double(n) * norm_a / omega);
    }
    return prod - 1.0;
}

double smallgain_lhs_stochastic(double omega, const StochasticGainInputs& in) {
    return stochastic_lhs_rho(omega, in).lhs;
}

std::optional<double> s_infinity_core(double omega, double l,
                                      const std::vector<double>& expected_kappa) {
    if (expected_kappa.empty()) throw DomainError("empty contraction sequence");
    if (!(omega > l)) return std::nullopt;
    const double r = omega / (omega - l);
    double partial = 0.0, pi = 1.0, rs = 1.0;
    for (double k : expected_kappa) {
        partial += rs * pi;
        pi *= k;
        rs *= r;
    }
    const double per_period = rs * pi; // r^P prod kappa
    if (per_period >= 1.0) return std::nullopt;
    return partial / (1.0 - per_period);
}

double s_infinity(double omega, double l, const std::vector<double>& expected_kappa,
                  double kappa_bar) {
    if (!(kappa_bar < 1.0) || kappa_bar < 0.0) {
        throw DomainError("contraction factor outside [0, 1)");
    }
    const double floor = l / (1.0 - kappa_bar);
    if (!(omega > floor)) {
        throw DomainError("arrival rate " + std::to_string(omega) +
                          " at or below the validity floor " + std::to_string(floor));
    }
    auto s = s_infinity_core(omega, l, expected_kappa);
    if (!s) {
        // above the floor the per-period ratio is < 1, so this is numeric only
        throw NumericsError("contraction series failed to converge above its floor");
    }
    return *s;
}

double smallgain_lhs_deterministic(double omega, const DeterministicGainInputs& in) {
    return deterministic_lhs_rho(omega, in).lhs;
}

RateBoundResult min_rate_stochastic(const StochasticGainInputs& in) {
    if (in.gamma < 0.0) throw DomainError("negative gain");
    RateBoundResult out;
    out.validity_floor = stochastic_validity_floor(in.norm_a, in.f);
    out.omega_star = solve_min_rate(out.validity_floor, [&](double w) {
        return stochastic_lhs_rho(w, in).lhs;
    });
    out.tabbara_omega = tabbara_bound(in);
    fill_curve(out, [&](double w) { return stochastic_lhs_rho(w, in); });
    return out;
}

RateBoundResult min_rate_deterministic(const DeterministicGainInputs& in) {
    if (in.gamma < 0.0) throw DomainError("negative gain");
    RateBoundResult out;
    out.validity_floor = in.l / (1.0 - in.constants.kappa_bar);
    out.omega_star = solve_min_rate(out.validity_floor, [&](double w) {
        return deterministic_lhs_rho(w, in).lhs;
    });
    out.tabbara_omega = tabbara_bound(in);
    fill_curve(out, [&](double w) { return deterministic_lhs_rho(w, in); });
    return out;
}

double tabbara_bound(const StochasticGainInputs& in) {
    check_f(in.f);
    StochasticGainInputs flat = in;
    const double fmin = *std::min_element(in.f.begin(), in.f.end());
    std::fill(flat.f.begin(), flat.f.end(), fmin);
    const double floor = stochastic_validity_floor(flat.norm_a, flat.f);
    return solve_min_rate(floor, [&](double w) { return stochastic_lhs_rho(w, flat).lhs; });
}

double tabbara_bound(const DeterministicGainInputs& in) {
    DeterministicGainInputs flat = in;
    std::fill(flat.constants.expected_kappa.begin(), flat.constants.expected_kappa.end(),
              in.constants.kappa_bar);
    const double floor = flat.l / (1.0 - flat.constants.kappa_bar);
    return solve_min_rate(floor, [&](double w) { return deterministic_lhs_rho(w, flat).lhs; });
}

double x_subsystem_gain(const LtiWncs& sys, RateMode mode, const AsUgesConstants& constants,
                        double tol) {
    if (!is_hurwitz(sys.a11)) {
        throw DomainError("x subsystem matrix is not Hurwitz; no finite L2 gain");
    }
    StateSpace ss;
    ss.a = sys.a11;
    if (mode == RateMode::Stochastic) {
        ss.b = hcat(sys.a12, sys.e1);
        ss.c = sys.a21;
        ss.d = Matrix(ss.c.rows(), ss.b.cols());
    } else {
        Matrix e1w = sys.e1;
        e1w *= constants.a1;
        ss.b = hcat(sys.a12, e1w);
        ss.c = sys.a21;
        ss.c *= constants.l1;
        Matrix e2w = sys.e2;
        e2w *= constants.l1 * constants.a1;
        ss.d = hcat(Matrix(sys.a21.rows(), sys.a12.cols()), e2w);
    }
    return l2_gain(ss, tol);
}

double abs_norm_a22(const LtiWncs& sys) {
    return spectral_norm(sys.a22.abs());
}

RateAnalysis analyze_rates(const LtiWncs& sys, const NetworkTopology& topo, double gain_tol) {
    RateAnalysis out;
    out.constants = rr_constants(topo);
    out.gamma_stochastic = x_subsystem_gain(sys, RateMode::Stochastic, out.constants, gain_tol);
    out.gamma_deterministic =
        x_subsystem_gain(sys, RateMode::Deterministic, out.constants, gain_tol);
    out.norm_a_abs = abs_norm_a22(sys);
    out.norm_a22 = spectral_norm(sys.a22);
    out.l = out.constants.l1 * out.norm_a22 / out.constants.a1;
    StochasticGainInputs si{out.gamma_stochastic, out.norm_a_abs, node_probabilities(topo)};
    out.stochastic = min_rate_stochastic(si);
    DeterministicGainInputs di{out.gamma_deterministic, out.l, out.constants};
    out.deterministic = min_rate_deterministic(di);
    return out;
}

} // namespace wncs
