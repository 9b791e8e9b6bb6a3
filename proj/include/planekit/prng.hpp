#pragma once

#include <cstdint>

#include "planekit/scalar.hpp"

namespace planekit {

/// splitmix64 stream. Used instead of <random> distributions so that
/// seeded runs produce identical byte streams on every platform.
class Prng {
public:
    explicit Prng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-enough integer in [lo, hi] for desk-scale ranges.
    long long uniform(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(next() % span);
    }

    /// Small scalar p/d with p in [-9, 9], d in [1, 4].
    template <class S>
    S small_scalar() {
        return fraction<S>(uniform(-9, 9), uniform(1, 4));
    }

    /// Small nonzero scalar away from the homogeneity fixed points 0, +1, -1.
    template <class S>
    S scaling_factor() {
        for (;;) {
            long long p = uniform(-5, 5);
            long long d = uniform(1, 3);
            if (p == 0 || p == d || p == -d) continue;
            return fraction<S>(p, d);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace planekit
