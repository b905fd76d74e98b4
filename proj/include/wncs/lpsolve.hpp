#pragma once

// Dense two-phase simplex for small linear programs of the form
//   min c'x  s.t.  A x >= b,  x >= 0.
// Emits the optimal dual on success and a Farkas certificate on
// infeasibility so callers can verify outcomes independently.

#include "wncs/matrix.hpp"

namespace wncs {

struct LpProblem {
    Vector c;  // n objective coefficients
    Matrix a;  // m x n constraint rows
    Vector b;  // m right-hand sides
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::Optimal;
    Vector x;                // primal solution (Optimal)
    double objective = 0.0;  // c'x (Optimal)
    Vector dual;             // y >= 0 with y'A <= c', c'x = y'b (Optimal)
    Vector farkas;           // y >= 0 with y'A <= 0, y'b > 0 (Infeasible)
};

LpOutcome lp_solve(const LpProblem& problem);

const char* lp_status_name(LpStatus status);

} // namespace wncs
