#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mvattrib {

// splitmix64 step; used both as a stream deriver and to seed the generator.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic stream derivation: seed + a small tuple of stream ids.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = seed;
    uint64_t h = splitmix64(s);
    s ^= a;
    h ^= splitmix64(s);
    s ^= b;
    h ^= splitmix64(s);
    s ^= c;
    h ^= splitmix64(s);
    return h;
}

// FNV-1a 64-bit, used to hash stage names and file contents for manifests.
inline uint64_t fnv1a64(std::span<const char> bytes, uint64_t h = 0xcbf29ce484222325ULL) {
    for (char ch : bytes) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256** with explicit sampling helpers. The sampling rules are part of
// this codebase (not delegated to <random> distributions) so that seeded runs
// reproduce bit-for-bit on any toolchain.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection-free modulo bias is negligible for
    // the pool sizes used here, but we reject anyway to keep draws exact.
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Knuth's product-of-uniforms method, chunked so large means do not
    // underflow exp(-mean).
    uint64_t poisson(double mean) {
        if (mean < 0) throw std::invalid_argument("poisson: mean must be non-negative");
        uint64_t count = 0;
        double remaining = mean;
        while (remaining > 30.0) {
            const double chunk = 30.0;
            count += poisson_knuth(chunk);
            remaining -= chunk;
        }
        return count + poisson_knuth(remaining);
    }

    // Index draw proportional to non-negative weights.
    size_t pick_weighted(std::span<const double> weights) {
        double total = 0;
        for (double w : weights) total += w;
        if (!(total > 0)) throw std::invalid_argument("pick_weighted: total weight must be positive");
        double u = uniform() * total;
        double acc = 0;
        for (size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

    // Draw against a precomputed inclusive cumulative-sum table.
    size_t pick_cumulative(std::span<const double> cumulative) {
        if (cumulative.empty()) throw std::invalid_argument("pick_cumulative: empty table");
        const double total = cumulative.back();
        double u = uniform() * total;
        size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t poisson_knuth(double mean) {
        const double threshold = std::exp(-mean);
        uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > threshold);
        return k - 1;
    }

    uint64_t state_[4];
};

} // namespace mvattrib
