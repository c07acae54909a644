#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace traj::rng {

// Counter-addressed randomness. Every consumer derives an independent stream
// from a key built out of the run seed and the entity being sampled (faculty
// id, trial index, publication id, ...), so results do not depend on
// evaluation order or thread count, and are identical across platforms.

inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// FNV-1a
inline constexpr std::uint64_t hash_str(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t part) {
    return mix64(key ^ mix64(part));
}

inline constexpr std::uint64_t derive(std::uint64_t key, std::string_view part) {
    return derive(key, hash_str(part));
}

class Stream {
public:
    explicit Stream(std::uint64_t key) : state_(mix64(key)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    // Uniform on the open interval (0, 1).
    double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Box-Muller; two uniforms per draw, no cached state.
    double next_normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double next_normal(double mean, double sd) { return mean + sd * next_normal(); }

    // Unbiased integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Knuth multiplication for small means; additivity split keeps it exact
    // for large ones.
    long next_poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        long total = 0;
        while (mean > 30.0) {
            total += next_poisson_small(mean / 2.0);
            mean -= mean / 2.0;
        }
        return total + next_poisson_small(mean);
    }

    // Marsaglia-Tsang, boosted for shape < 1.
    double next_gamma(double shape, double scale) {
        if (shape < 1.0) {
            double u = next_unit();
            return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = next_normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_unit();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    // Gamma-Poisson mixture: mean mu, variance mu*(1 + zeta*mu).
    long next_negbin(double mu, double zeta) {
        if (!(mu > 0.0)) return 0;
        double lambda = next_gamma(1.0 / zeta, zeta * mu);
        return next_poisson(lambda);
    }

private:
    long next_poisson_small(double mean) {
        const double limit = std::exp(-mean);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_unit();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t state_;
};

}  // namespace traj::rng
