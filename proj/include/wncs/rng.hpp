#pragma once

// Counter-based splittable RNG (splitmix64 finalizer over key + counter).
// Counter mode means a stream's draws depend only on (key, index), so
// trial-parallel Monte Carlo is reproducible regardless of thread schedule:
// split one child stream per trial and the results are byte-identical
// whether trials run serially or across threads.

#include <cmath>
#include <cstdint>

namespace wncs {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    // Independent child stream; deterministic in (parent key, stream index).
    Rng split(std::uint64_t stream) const {
        return Rng(from_key{}, mix(key_ ^ mix(stream + 0x632be59bd9b4e019ull)));
    }

    std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }

    // [0, 1): suited to Bernoulli thresholds (u < p has probability p exactly
    // in the 53-bit lattice sense).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]: safe as a log argument.
    double uniform_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n) by rejection, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

private:
    struct from_key {};
    Rng(from_key, std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace wncs
