#include "wncs/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace wncs;

TEST_CASE("determinism and split independence") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // split is a pure function of (key, stream): child streams do not depend
    // on how far the parent has advanced
    Rng p1(7), p2(7);
    (void)p2.next_u64();
    (void)p2.next_u64();
    Rng c1 = p1.split(3), c2 = p2.split(3);
    for (int i = 0; i < 10; ++i) CHECK(c1.next_u64() == c2.next_u64());

    // different streams and different seeds disagree immediately
    CHECK(Rng(7).split(1).next_u64() != Rng(7).split(2).next_u64());
    CHECK(Rng(1).next_u64() != Rng(2).next_u64());
}

TEST_CASE("uniform01 bounds and KS statistic at the 1 percent level") {
    const std::size_t n = 100000;
    Rng rng(90125);
    std::vector<double> u(n);
    for (auto& x : u) {
        x = rng.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = double(i) / n - u[i];
        const double hi = u[i] - double(i) / n;
        d = std::max({d, lo + 1.0 / n, hi});
    }
    // 1% critical value for the one-sample KS statistic
    CHECK(d < 1.6276 / std::sqrt(double(n)));
}

TEST_CASE("uniform_open never returns zero") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform_open();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("exponential mean within three standard errors") {
    const std::size_t n = 200000;
    const double rate = 2.0;
    Rng rng(31337);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rng.exponential(rate);
    const double mean = sum / double(n);
    const double se = (1.0 / rate) / std::sqrt(double(n)); // sd of Exp(rate) is 1/rate
    CHECK(std::abs(mean - 1.0 / rate) < 3.0 * se);
}

TEST_CASE("bernoulli edge probabilities") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.bernoulli(1.0));
        CHECK_FALSE(rng.bernoulli(0.0));
    }
    std::size_t hits = 0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) hits += rng.bernoulli(0.3);
    const double se = std::sqrt(0.3 * 0.7 / double(n));
    CHECK(std::abs(double(hits) / double(n) - 0.3) < 4.0 * se);
}

TEST_CASE("uniform_index range and balance") {
    Rng rng(99);
    std::vector<std::size_t> counts(5, 0);
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t v = rng.uniform_index(5);
        REQUIRE(v < 5);
        ++counts[v];
    }
    for (auto c : counts) {
        const double se = std::sqrt(0.2 * 0.8 / double(n));
        CHECK(std::abs(double(c) / double(n) - 0.2) < 4.0 * se);
    }
    CHECK(rng.uniform_index(1) == 0);
}
