#pragma once

#include <cstdint>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace fastgm {

// Deterministic random streams keyed by (global seed, element index, ball
// counter). Streams for a given key are identical across runs and across
// vectors, which is what makes sketches of different vectors comparable.

struct StreamKey {
    std::uint64_t global_seed = 0;
    std::uint64_t element_index = 0;
    std::uint64_t ball_counter = 0;
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Full 64-bit avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ mix64(v));
}

} // namespace detail

// Counter-free SplitMix64 generator seeded from a mixed StreamKey.
// State is 64 bits; period 2^64 per key. Frozen: bitwise test vectors
// depend on this exact construction.
class RandomStream {
public:
    explicit RandomStream(const StreamKey& key) noexcept
        : state_(detail::combine(
              detail::combine(detail::mix64(key.global_seed), key.element_index),
              key.ball_counter)) {}

    std::uint64_t next_u64() noexcept {
        ++draw_count_;
        return detail::mix64(state_ += 0x9e3779b97f4a7c15ULL);
    }

    // Uniform in (0, 1). A raw zero (probability 2^-53) is remapped to the
    // smallest positive value so ln(u) stays finite.
    double next_uniform() noexcept {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        if (u == 0.0) u = std::numeric_limits<double>::min();
        return u;
    }

    // Uniform integer in {1, ..., m}, unbiased via rejection.
    std::uint64_t next_int(std::uint64_t m) {
        if (m == 0) throw std::invalid_argument("next_int: m must be >= 1");
        if (m == 1) return 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                    - std::numeric_limits<std::uint64_t>::max() % m;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % m + 1;
    }

    // Gamma(shape, 1) for integer shape >= 1. Small shapes sum exponentials;
    // larger shapes use Marsaglia-Tsang squeeze with Box-Muller normals.
    // Consumes a variable number of draws; callers rekey per call.
    double next_gamma(std::uint64_t shape) {
        if (shape == 0) throw std::invalid_argument("next_gamma: shape must be >= 1");
        if (shape <= 8) {
            double acc = 0.0;
            for (std::uint64_t l = 0; l < shape; ++l) acc -= std::log(next_uniform());
            return acc;
        }
        const double d = static_cast<double>(shape) - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = next_normal();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double v = t * t * t;
            double u = next_uniform();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t draw_count() const noexcept { return draw_count_; }

private:
    double next_normal() noexcept {
        // Box-Muller, cosine branch only.
        double u1 = next_uniform();
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t state_;
    std::uint64_t draw_count_ = 0;
};

inline RandomStream derive_stream(const StreamKey& key) noexcept {
    return RandomStream(key);
}

} // namespace fastgm
