#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "mflow/vec.hpp"

namespace mflow {

/// Deterministic splitmix64 stream. Used everywhere randomness is needed so
/// that identical seeds give byte-identical outputs on repeated runs.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Marsaglia polar (sqrt/log only).
    double normal() {
        for (;;) {
            double u = 2.0 * uniform() - 1.0;
            double v = 2.0 * uniform() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    Vec normal_vec(std::size_t n) {
        Vec r(n);
        for (auto& x : r) x = normal();
        return r;
    }

    /// Uniform direction on the unit sphere.
    Vec unit_vec(std::size_t n) {
        for (;;) {
            Vec r = normal_vec(n);
            double nr = norm(r);
            if (nr > 1e-12) return scale(r, 1.0 / nr);
        }
    }

    /// Uniform point in the ball of given radius around the origin.
    Vec ball_point(std::size_t n, double radius) {
        Vec d = unit_vec(n);
        double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
        return scale(d, r);
    }
};

/// Derives an independent substream from (seed, tag) via FNV-1a on the tag.
inline Rng seeded_stream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return Rng(seed ^ h);
}

/// Fixed set of pseudo-random unit directions, deterministic in (dim, count, seed).
inline std::vector<Vec> unit_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
    Rng rng = seeded_stream(seed, "unit-directions");
    std::vector<Vec> dirs;
    dirs.reserve(count);
    if (dim == 1) {
        for (std::size_t i = 0; i < count; ++i) dirs.push_back(Vec{i % 2 == 0 ? 1.0 : -1.0});
        return dirs;
    }
    for (std::size_t i = 0; i < count; ++i) dirs.push_back(rng.unit_vec(dim));
    return dirs;
}

}  // namespace mflow
