#pragma once

#include <cmath>
#include <cstdint>

namespace neurowf {

/// Deterministic 64-bit generator (xorshift-multiply, splitmix64 seeding).
/// All randomness in the library flows through this type so that results are
/// reproducible from a single seed independently of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed + 0x9e3779b97f4a7c15ULL)) {
        // avoid the all-zero state
        if (state_ == 0) state_ = 0x853c49e6748fea9bULL;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal draw via Box-Muller (one variate per call).
    double normal01() {
        const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal01(); }

    /// Derive an independent stream seed from (seed, tags...). Deterministic
    /// in the argument values, insensitive to call order elsewhere.
    static std::uint64_t derive(std::uint64_t seed) { return splitmix(seed); }
    template <typename... Tags>
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
        return derive(splitmix(seed ^ (tag + 0x9e3779b97f4a7c15ULL)), rest...);
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

}  // namespace neurowf
