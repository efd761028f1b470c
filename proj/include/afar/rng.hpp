// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace afar {

/// Deterministic random stream (xoshiro256++), derived from a master seed
/// plus a stream name. Every stochastic subsystem draws from its own named
/// stream, so enabling or disabling one noise source never shifts the draws
/// seen by another, and sequences are identical across platforms (no
/// dependence on the standard library's distribution implementations).
class RngStream {
public:
    RngStream() { seed(0, ""); }
    RngStream(uint64_t master_seed, std::string_view name) { seed(master_seed, name); }

    void seed(uint64_t master_seed, std::string_view name) {
        uint64_t x = master_seed ^ fnv1a(name);
        for (auto& s : state_) s = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller transform; always consumes exactly two uniforms so the
    /// stream position does not depend on earlier draws.
    double gaussian(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static constexpr uint64_t fnv1a(std::string_view s) {
        uint64_t h = 1469598103934665603ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return h;
    }

    static constexpr uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t state_[4]{};
};

} // namespace afar
