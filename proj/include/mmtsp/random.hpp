#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace mmtsp {

/// Deterministic RNG used everywhere in the solver.
///
/// Doubles are derived from the raw 64-bit stream (53-bit mantissa trick)
/// instead of std::uniform_real_distribution, so the value sequence for a
/// given seed is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Requires n > 0.
    std::size_t next_index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::next_index: n must be positive");
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t span = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % span);
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

/// Roulette draw proportional to non-negative weights.
///
/// Zero-weight entries are never selected while any positive weight remains.
/// If the total weight is zero or non-finite the draw falls back to a uniform
/// choice over all entries.
inline std::size_t roulette_index(const std::vector<double>& weights, Rng& rng) {
    if (weights.empty()) throw std::invalid_argument("roulette_index: empty weights");
    double total = 0.0;
    for (double w : weights) total += (w > 0.0 ? w : 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) return rng.next_index(weights.size());
    double x = rng.next_double() * total;
    std::size_t last_positive = 0;
    bool seen = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0)) continue;
        if (x < weights[i]) return i;
        x -= weights[i];
        last_positive = i;
        seen = true;
    }
    // Floating-point underflow in the prefix walk lands here; the last
    // positive-weight entry is the correct owner of the residual mass.
    return seen ? last_positive : rng.next_index(weights.size());
}

/// Argmin over values with exact ties broken uniformly at random
/// (reservoir sampling: the k-th tied candidate replaces the pick with
/// probability 1/k). Consumes randomness only when ties occur.
inline std::size_t argmin_reservoir(const std::vector<double>& values, Rng& rng) {
    if (values.empty()) throw std::invalid_argument("argmin_reservoir: empty values");
    std::size_t pick = 0;
    double best = values[0];
    std::size_t ties = 1;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < best) {
            best = values[i];
            pick = i;
            ties = 1;
        } else if (values[i] == best) {
            ++ties;
            if (rng.next_double() < 1.0 / static_cast<double>(ties)) pick = i;
        }
    }
    return pick;
}

} // namespace mmtsp
