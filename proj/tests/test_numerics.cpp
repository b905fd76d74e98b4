#include "wncs/error.hpp"
#include "wncs/numerics.hpp"
#include "wncs/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace wncs;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * (2.0 * rng.uniform01() - 1.0);
    return m;
}

std::vector<Complex> sorted_eigs(const Matrix& m) {
    auto e = eigenvalues(m);
    std::sort(e.begin(), e.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return e;
}

} // namespace

TEST_CASE("spectral norm on diagonal, orthogonal, and generic matrices") {
    CHECK(spectral_norm(Matrix::diag({1, -7, 3})) == doctest::Approx(7.0));
    // rotation by 30 degrees: all singular values are 1
    const double c = std::cos(0.5), s = std::sin(0.5);
    CHECK(spectral_norm(Matrix{{c, -s}, {s, c}}) == doctest::Approx(1.0));
    // closed form for [[1,2],[3,4]]: sigma_max^2 = 15 + sqrt(221)
    CHECK(spectral_norm(Matrix{{1, 2}, {3, 4}}) ==
          doctest::Approx(std::sqrt(15.0 + std::sqrt(221.0))).epsilon(1e-10));
    // rank-1 rectangular: norm is |u||v|
    CHECK(spectral_norm(Matrix{{2, 4, 6}}) == doctest::Approx(std::sqrt(56.0)));
    CHECK(spectral_norm(Matrix(2, 2, 0.0)) == doctest::Approx(0.0));
}

TEST_CASE("eigenvalues of structured matrices") {
    auto d = sorted_eigs(Matrix::diag({3, 1, 2}));
    CHECK(d[0].real() == doctest::Approx(1.0));
    CHECK(d[1].real() == doctest::Approx(2.0));
    CHECK(d[2].real() == doctest::Approx(3.0));

    // planar rotation scaled by 2: eigenvalues +-2i
    auto r = sorted_eigs(Matrix{{0, -2}, {2, 0}});
    CHECK(r[0].real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r[0].imag() == doctest::Approx(-2.0));
    CHECK(r[1].imag() == doctest::Approx(2.0));

    // companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    Matrix comp{{6, -11, 6}, {1, 0, 0}, {0, 1, 0}};
    auto e = sorted_eigs(comp);
    CHECK(e[0].real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e[1].real() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(e[2].real() == doctest::Approx(3.0).epsilon(1e-8));

    // defective Jordan block: double eigenvalue 2 (sqrt(eps) sensitivity)
    auto j = eigenvalues(Matrix{{2, 1}, {0, 2}});
    for (auto& z : j) {
        CHECK(z.real() == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(std::abs(z.imag()) < 1e-6);
    }

    // badly scaled entries exercise the balancing pass
    auto b = sorted_eigs(Matrix{{0.0, 1e6}, {1e-6, 0.0}});
    CHECK(b[0].real() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(b[1].real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eigenvalues are similarity invariant") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(4);
        Matrix a = random_matrix(rng, n, n, 2.0);
        Matrix t = random_matrix(rng, n, n);
        for (std::size_t i = 0; i < n; ++i) t(i, i) += 3.0; // keep well conditioned
        Matrix sim = t * a * inverse(t);
        auto e1 = sorted_eigs(a);
        auto e2 = sorted_eigs(sim);
        REQUIRE(e1.size() == e2.size());
        for (std::size_t i = 0; i < e1.size(); ++i) {
            CHECK(std::abs(e1[i] - e2[i]) < 1e-6 * (1.0 + std::abs(e1[i])));
        }
    }
}

TEST_CASE("spectral abscissa and Hurwitz test") {
    CHECK(spectral_abscissa(Matrix{{-1, 100}, {0, -2}}) == doctest::Approx(-1.0));
    CHECK(is_hurwitz(Matrix{{-1, 0}, {0, -3}}));
    CHECK_FALSE(is_hurwitz(Matrix{{1, 0}, {0, -3}}));
    CHECK_FALSE(is_hurwitz(Matrix{{0, -1}, {1, 0}})); // marginally stable is not Hurwitz
}

TEST_CASE("frequency response of a first-order lag") {
    // y = 3/(s+2) w: |H(i w)| = 3/sqrt(4+w^2)
    StateSpace sys{Matrix{{-2}}, Matrix{{3}}, Matrix{{1}}, Matrix(1, 1, 0.0)};
    for (double w : {0.0, 1.0, 2.0, 10.0}) {
        CHECK(sigma_max_response(sys, w) ==
              doctest::Approx(3.0 / std::sqrt(4.0 + w * w)).epsilon(1e-10));
    }
}

TEST_CASE("l2 gain closed forms") {
    // first-order lag peaks at w = 0 with gain b*c/a
    StateSpace lag{Matrix{{-2}}, Matrix{{3}}, Matrix{{4}}, Matrix(1, 1, 0.0)};
    CHECK(l2_gain(lag, 1e-9) == doctest::Approx(6.0).epsilon(1e-7));

    // resonant second-order system x'' + 2 zeta x' + x = w, y = x:
    // peak gain 1 / (2 zeta sqrt(1 - zeta^2)) for zeta < 1/sqrt(2)
    const double zeta = 0.1;
    StateSpace res{Matrix{{0, 1}, {-1, -2 * zeta}}, Matrix{{0}, {1}}, Matrix{{1, 0}},
                   Matrix(1, 1, 0.0)};
    CHECK(l2_gain(res, 1e-9) ==
          doctest::Approx(1.0 / (2.0 * zeta * std::sqrt(1.0 - zeta * zeta))).epsilon(1e-7));

    // feedthrough shifts the whole response
    StateSpace withd{Matrix{{-1}}, Matrix{{0}}, Matrix{{0}}, Matrix{{5}}};
    CHECK(l2_gain(withd, 1e-9) == doctest::Approx(5.0).epsilon(1e-7));

    CHECK_THROWS_AS((void)l2_gain(StateSpace{Matrix{{1}}, Matrix{{1}}, Matrix{{1}},
                                             Matrix(1, 1, 0.0)}),
                    DomainError);
}

TEST_CASE("bisection gain agrees with a dense frequency sweep") {
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(3);
        const std::size_t m = 1 + rng.uniform_index(2);
        const std::size_t p = 1 + rng.uniform_index(2);
        Matrix a = random_matrix(rng, n, n, 1.5);
        const double shift = spectral_abscissa(a) + 0.4 + rng.uniform01();
        for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;
        StateSpace sys{a, random_matrix(rng, n, m), random_matrix(rng, p, n),
                       random_matrix(rng, p, m, 0.2)};
        const double g = l2_gain(sys, 1e-8);
        const double s = l2_gain_sweep(sys, 400);
        CHECK(g >= s * (1.0 - 1e-8)); // sweep lower-bounds the certified gain
        CHECK(std::abs(g - s) <= 1e-4 * std::max(1.0, g));
    }
}
