#include "wncs/error.hpp"
#include "wncs/lpsolve.hpp"
#include "wncs/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace wncs;

namespace {

// feasible bounded instance: costs positive (bounded below), rhs reachable
LpProblem random_feasible(Rng& rng, std::size_t m, std::size_t n) {
    LpProblem p;
    p.a = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) p.a(i, j) = 3.0 * rng.uniform01() - 1.0;
    p.c.resize(n);
    for (auto& v : p.c) v = 0.1 + 1.9 * rng.uniform01();
    Vector xbar(n);
    for (auto& v : xbar) v = 3.0 * rng.uniform01();
    p.b = p.a * xbar;
    for (auto& v : p.b) v -= 2.0 * rng.uniform01();
    return p;
}

void check_kkt(const LpProblem& p, const LpOutcome& out) {
    const std::size_t m = p.a.rows(), n = p.a.cols();
    REQUIRE(out.status == LpStatus::Optimal);
    REQUIRE(out.x.size() == n);
    REQUIRE(out.dual.size() == m);

    // primal feasibility
    const Vector ax = p.a * out.x;
    for (std::size_t i = 0; i < m; ++i)
        CHECK(ax[i] >= p.b[i] - 1e-8 * (1.0 + std::abs(p.b[i])));
    for (double v : out.x) CHECK(v >= -1e-12);

    // dual feasibility: y >= 0, A^T y <= c
    for (double v : out.dual) CHECK(v >= -1e-12);
    for (std::size_t j = 0; j < n; ++j) {
        double aty = 0.0;
        for (std::size_t i = 0; i < m; ++i) aty += p.a(i, j) * out.dual[i];
        CHECK(aty <= p.c[j] + 1e-8 * (1.0 + std::abs(p.c[j])));
    }

    // complementary slackness
    for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(out.dual[i] * (ax[i] - p.b[i])) < 1e-7 * (1.0 + std::abs(p.b[i])));
    for (std::size_t j = 0; j < n; ++j) {
        double aty = 0.0;
        for (std::size_t i = 0; i < m; ++i) aty += p.a(i, j) * out.dual[i];
        CHECK(std::abs((p.c[j] - aty) * out.x[j]) < 1e-7 * (1.0 + std::abs(p.c[j])));
    }

    // zero duality gap
    double yb = 0.0;
    for (std::size_t i = 0; i < m; ++i) yb += out.dual[i] * p.b[i];
    CHECK(std::abs(out.objective - yb) < 1e-8 * (1.0 + std::abs(out.objective)));
}

} // namespace

TEST_CASE("one-variable problem") {
    LpProblem p;
    p.c = {1.0};
    p.a = Matrix{{1.0}};
    p.b = {2.0};
    const LpOutcome out = lp_solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.x[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.objective == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.dual[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-variable vertex solution with known dual") {
    // min x + y s.t. x + 2y >= 4, 3x + y >= 6
    LpProblem p;
    p.c = {1.0, 1.0};
    p.a = Matrix{{1, 2}, {3, 1}};
    p.b = {4.0, 6.0};
    const LpOutcome out = lp_solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.x[0] == doctest::Approx(1.6).epsilon(1e-10));
    CHECK(out.x[1] == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(out.objective == doctest::Approx(2.8).epsilon(1e-10));
    CHECK(out.dual[0] == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(out.dual[1] == doctest::Approx(0.2).epsilon(1e-10));
    check_kkt(p, out);
}

TEST_CASE("redundant constraint leaves a zero multiplier") {
    // min x + y s.t. x >= 1, y >= 2, x + y >= 2 (slack at the optimum)
    LpProblem p;
    p.c = {1.0, 1.0};
    p.a = Matrix{{1, 0}, {0, 1}, {1, 1}};
    p.b = {1.0, 2.0, 2.0};
    const LpOutcome out = lp_solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(out.dual[2] == doctest::Approx(0.0).epsilon(1e-12));
    check_kkt(p, out);
}

TEST_CASE("negative rhs rows are handled by the sign flip") {
    // min x s.t. -x >= -5 (x <= 5) and x >= 1
    LpProblem p;
    p.c = {1.0};
    p.a = Matrix{{-1}, {1}};
    p.b = {-5.0, 1.0};
    const LpOutcome out = lp_solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    check_kkt(p, out);
}

TEST_CASE("infeasible system returns a Farkas certificate") {
    // x >= 1 and -x >= 0 cannot both hold with x >= 0
    LpProblem p;
    p.c = {1.0};
    p.a = Matrix{{1}, {-1}};
    p.b = {1.0, 0.0};
    const LpOutcome out = lp_solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    REQUIRE(out.farkas.size() == 2);

    // certificate of infeasibility: y >= 0, y^T A <= 0, y^T b > 0
    double yta = 0.0, ytb = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(out.farkas[i] >= -1e-12);
        yta += out.farkas[i] * p.a(i, 0);
        ytb += out.farkas[i] * p.b[i];
    }
    CHECK(yta <= 1e-9);
    CHECK(ytb > 1e-9);
}

TEST_CASE("random infeasible systems certify their infeasibility") {
    Rng rng(4242);
    std::size_t infeasible_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        // x >= u and x <= l with l < u forced on a random coordinate
        const std::size_t n = 2;
        LpProblem p;
        p.c = {1.0, 1.0};
        const double split = rng.uniform01();
        p.a = Matrix{{1, 0}, {-1, 0}, {0, 1}};
        p.b = {1.0 + split, -(0.5 * split), 0.5};
        const LpOutcome out = lp_solve(p);
        REQUIRE(out.status == LpStatus::Infeasible);
        ++infeasible_seen;
        double yta0 = 0.0, yta1 = 0.0, ytb = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(out.farkas[i] >= -1e-12);
            yta0 += out.farkas[i] * p.a(i, 0);
            yta1 += out.farkas[i] * p.a(i, 1);
            ytb += out.farkas[i] * p.b[i];
        }
        CHECK(yta0 <= 1e-9);
        CHECK(yta1 <= 1e-9);
        CHECK(ytb > 1e-9);
        (void)n;
    }
    CHECK(infeasible_seen == 200);
}

TEST_CASE("unbounded problems are flagged") {
    LpProblem p;
    p.c = {-1.0};
    p.a = Matrix{{1}};
    p.b = {1.0};
    CHECK(lp_solve(p).status == LpStatus::Unbounded);

    // unbounded direction in a 2d cone
    LpProblem q;
    q.c = {-1.0, 0.0};
    q.a = Matrix{{1, -1}, {0, 1}};
    q.b = {0.0, 1.0};
    CHECK(lp_solve(q).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate pivots are reported as numerical failures") {
    // entering column exists but its only positive pivot is below threshold
    LpProblem p;
    p.c = {0.0, -1.0};
    p.a = Matrix{{1.0, 5e-13}};
    p.b = {1.0};
    CHECK_THROWS_AS((void)lp_solve(p), NumericsError);
}

TEST_CASE("KKT conditions hold on random feasible instances") {
    Rng rng(777);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(5);
        const std::size_t n = 1 + rng.uniform_index(4);
        const LpProblem p = random_feasible(rng, m, n);
        const LpOutcome out = lp_solve(p);
        check_kkt(p, out);
    }
}

TEST_CASE("row scaling leaves the solution invariant and rescales the duals") {
    Rng rng(31415);
    for (int trial = 0; trial < 50; ++trial) {
        const LpProblem p = random_feasible(rng, 3, 3);
        const LpOutcome base = lp_solve(p);
        if (base.status != LpStatus::Optimal) continue;

        LpProblem scaled = p;
        Vector s(3);
        for (std::size_t i = 0; i < 3; ++i) {
            s[i] = 0.1 + 10.0 * rng.uniform01();
            for (std::size_t j = 0; j < 3; ++j) scaled.a(i, j) *= s[i];
            scaled.b[i] *= s[i];
        }
        const LpOutcome out = lp_solve(scaled);
        REQUIRE(out.status == LpStatus::Optimal);
        CHECK(out.objective == doctest::Approx(base.objective).epsilon(1e-8));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(out.x[j] == doctest::Approx(base.x[j]).epsilon(1e-6));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(out.dual[i] * s[i] == doctest::Approx(base.dual[i]).epsilon(1e-6));
    }
}

TEST_CASE("cost scaling rescales the objective") {
    Rng rng(2718);
    const LpProblem p = random_feasible(rng, 3, 2);
    const LpOutcome base = lp_solve(p);
    REQUIRE(base.status == LpStatus::Optimal);
    LpProblem scaled = p;
    for (auto& v : scaled.c) v *= 7.0;
    const LpOutcome out = lp_solve(scaled);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.objective == doctest::Approx(7.0 * base.objective).epsilon(1e-9));
}

TEST_CASE("dimension and value validation") {
    LpProblem p;
    p.c = {1.0};
    p.a = Matrix{{1.0}};
    p.b = {1.0, 2.0};
    CHECK_THROWS_AS((void)lp_solve(p), DimensionError);
    p.b = {std::nan("")};
    CHECK_THROWS_AS((void)lp_solve(p), DomainError);
}
