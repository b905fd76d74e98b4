#include "wncs/lpsolve.hpp"

#include "wncs/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace wncs {

namespace {

using LD = long double;

constexpr LD kCostEps = 1e-11L;   // entering threshold on reduced costs
constexpr LD kPivotEps = 1e-12L;  // smallest pivot magnitude we accept
constexpr int kIterCap = 50000;

double clamp_tiny(LD v) {
    return std::fabs(double(v)) < 1e-13 ? 0.0 : double(v);
}

// Dense tableau over columns [x | surplus | artificial | rhs]. Rows are
// pre-flipped so the rhs is nonnegative; d records the flips.
struct Tableau {
    std::size_t n = 0, m = 0, ncol = 0;
    std::vector<std::vector<LD>> t;  // m rows, ncol+1 wide
    std::vector<LD> obj;             // reduced costs, obj[ncol] = -objective
    std::vector<std::size_t> basis;  // column basic in each row
    std::vector<double> d;           // row sign flips
    int iters = 0;

    void pivot(std::size_t r, std::size_t e) {
        auto& row = t[r];
        const LD piv = row[e];
        for (auto& v : row) v /= piv;
        row[e] = 1.0L;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const LD f = t[i][e];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j <= ncol; ++j) t[i][j] -= f * row[j];
            t[i][e] = 0.0L;
        }
        const LD f = obj[e];
        if (f != 0.0L) {
            for (std::size_t j = 0; j <= ncol; ++j) obj[j] -= f * row[j];
            obj[e] = 0.0L;
        }
        basis[r] = e;
    }

    // Bland: smallest-index improving column among the first `limit` columns.
    bool entering(std::size_t limit, std::size_t& e) const {
        for (std::size_t j = 0; j < limit; ++j) {
            if (obj[j] < -kCostEps) {
                e = j;
                return true;
            }
        }
        return false;
    }

    // Min-ratio row; ties go to the smallest basic variable (Bland). Returns
    // false when the column has no positive entry at all (unbounded ray).
    bool leaving(std::size_t e, std::size_t& r) const {
        bool any_positive = false;
        bool found = false;
        LD best = std::numeric_limits<LD>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const LD piv = t[i][e];
            if (piv <= 0.0L) continue;
            any_positive = true;
            if (piv <= kPivotEps) continue;
            const LD ratio = t[i][ncol] / piv;
            const LD slack = 1e-12L * (1.0L + std::min(ratio, best));
            if (!found || ratio < best - slack) {
                best = ratio;
                r = i;
                found = true;
            } else if (ratio <= best + slack && basis[i] < basis[r]) {
                r = i;
            }
        }
        if (!any_positive) return false;
        if (!found) {
            throw NumericsError("degenerate pivot: all candidate pivots below 1e-12");
        }
        return true;
    }
};

} // namespace

const char* lp_status_name(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

LpOutcome lp_solve(const LpProblem& problem) {
    const std::size_t n = problem.c.size();
    const std::size_t m = problem.b.size();
    if (problem.a.rows() != m || (m > 0 && problem.a.cols() != n)) {
        throw DimensionError("constraint matrix does not match c and b");
    }
    for (double v : problem.c) {
        if (!std::isfinite(v)) throw DomainError("non-finite objective coefficient");
    }
    for (double v : problem.b) {
        if (!std::isfinite(v)) throw DomainError("non-finite right-hand side");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(problem.a(i, j))) {
                throw DomainError("non-finite constraint coefficient");
            }
        }
    }

    Tableau tb;
    tb.n = n;
    tb.m = m;
    tb.ncol = n + 2 * m;
    tb.t.assign(m, std::vector<LD>(tb.ncol + 1, 0.0L));
    tb.obj.assign(tb.ncol + 1, 0.0L);
    tb.basis.resize(m);
    tb.d.resize(m);

    LD bmax = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
        tb.d[i] = problem.b[i] < 0.0 ? -1.0 : 1.0;
        const LD s = tb.d[i];
        for (std::size_t j = 0; j < n; ++j) tb.t[i][j] = s * LD(problem.a(i, j));
        tb.t[i][n + i] = -s;          // surplus for A x - s = b
        tb.t[i][n + m + i] = 1.0L;    // artificial
        tb.t[i][tb.ncol] = s * LD(problem.b[i]);
        tb.basis[i] = n + m + i;
        bmax = std::max(bmax, tb.t[i][tb.ncol]);
    }

    // phase 1: min sum of artificials; artificials never re-enter
    for (std::size_t j = 0; j <= tb.ncol; ++j) {
        LD acc = 0.0L;
        for (std::size_t i = 0; i < m; ++i) acc += tb.t[i][j];
        tb.obj[j] = (j >= n + m && j < tb.ncol ? 1.0L : 0.0L) - acc;
    }
    for (std::size_t e, r;;) {
        if (!tb.entering(n + m, e)) break;
        if (++tb.iters > kIterCap) throw NumericsError("simplex iteration limit exceeded");
        if (!tb.leaving(e, r)) {
            throw NumericsError("phase 1 produced an unbounded direction");
        }
        tb.pivot(r, e);
    }

    LpOutcome out;
    const LD infeas = -tb.obj[tb.ncol];
    if (infeas > 1e-9L * (1.0L + bmax)) {
        out.status = LpStatus::Infeasible;
        out.farkas.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            // artificial reduced cost is 1 - y_i for the equality-form dual y
            out.farkas[i] = clamp_tiny(LD(tb.d[i]) * (1.0L - tb.obj[n + m + i]));
        }
        return out;
    }

    // drive leftover artificials out of the basis where possible
    for (std::size_t r = 0; r < m; ++r) {
        if (tb.basis[r] < n + m) continue;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (std::fabs(double(tb.t[r][j])) > double(kPivotEps)) {
                tb.pivot(r, j);
                break;
            }
        }
        // a row with no usable pivot is redundant; its artificial stays at zero
    }

    // phase 2 objective row rebuilt from the real costs
    std::vector<LD> cost(tb.ncol, 0.0L);
    for (std::size_t j = 0; j < n; ++j) cost[j] = LD(problem.c[j]);
    for (std::size_t j = 0; j <= tb.ncol; ++j) {
        LD acc = 0.0L;
        for (std::size_t i = 0; i < m; ++i) acc += cost[tb.basis[i]] * tb.t[i][j];
        tb.obj[j] = (j < tb.ncol ? cost[j] : 0.0L) - acc;
    }
    for (std::size_t e, r;;) {
        if (!tb.entering(n + m, e)) break;
        if (++tb.iters > kIterCap) throw NumericsError("simplex iteration limit exceeded");
        if (!tb.leaving(e, r)) {
            out.status = LpStatus::Unbounded;
            return out;
        }
        tb.pivot(r, e);
    }

    out.status = LpStatus::Optimal;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (tb.basis[i] < n) out.x[tb.basis[i]] = std::max(0.0, clamp_tiny(tb.t[i][tb.ncol]));
    }
    out.objective = dot(problem.c, out.x);
    out.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.dual[i] = std::max(0.0, clamp_tiny(LD(tb.d[i]) * -tb.obj[n + m + i]));
    }
    return out;
}

} // namespace wncs
