#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fastgm/bbm.hpp"
#include "fastgm/keyed_rng.hpp"
#include "fastgm/sparse_vector.hpp"

namespace fastgm {

// Sketching parameters. Fixes all randomness and fill schedules.
struct SketchConfig {
    std::uint32_t k = 256;          // registers
    std::uint32_t delta = 0;        // round increment for the ball budget; 0 means k
    double phi = -1.0;              // hash/gamma branch threshold; < 0 means k/10
    std::uint64_t global_seed = 0;

    std::uint32_t effective_delta() const noexcept { return delta == 0 ? k : delta; }
    double effective_phi() const noexcept {
        return phi < 0.0 ? static_cast<double>(k) / 10.0 : phi;
    }

    void validate() const {
        if (k == 0) throw std::invalid_argument("SketchConfig: k must be >= 1");
        if (effective_phi() >= static_cast<double>(k))
            throw std::invalid_argument("SketchConfig: phi must be < k");
    }
};

// k registers: per bin, the element index achieving the minimal scaled
// first-arrival time, and that time.
struct GumbelMaxSketch {
    static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t k = 0;
    std::uint64_t global_seed = 0;
    std::vector<std::uint32_t> s;
    std::vector<double> y;

    bool complete() const noexcept {
        for (auto v : s)
            if (v == kEmpty) return false;
        return !s.empty();
    }
};

struct SketchStats {
    std::uint64_t balls = 0;
    std::uint64_t calls = 0;
};

namespace detail {

inline GumbelMaxSketch empty_sketch(const SketchConfig& cfg) {
    GumbelMaxSketch sk;
    sk.k = cfg.k;
    sk.global_seed = cfg.global_seed;
    sk.s.assign(cfg.k, GumbelMaxSketch::kEmpty);
    sk.y.assign(cfg.k, std::numeric_limits<double>::infinity());
    return sk;
}

inline void require_sketchable(const SparseVector& v) {
    if (v.empty())
        throw std::invalid_argument("sketch: vector has no positive elements");
}

inline std::uint32_t scan_max_register(const GumbelMaxSketch& sk) {
    std::uint32_t j_star = 0;
    for (std::uint32_t j = 1; j < sk.k; ++j)
        if (sk.y[j] > sk.y[j_star]) j_star = j;
    return j_star;
}

} // namespace detail

// Exact oracle: run every element's balls-and-bins process to exhaustion
// and take the per-bin argmin. O(k ln k * n+) but unconditionally correct;
// the fast path below must match it register for register.
inline GumbelMaxSketch sketch_exhaustive(const SparseVector& v, const SketchConfig& cfg) {
    cfg.validate();
    detail::require_sketchable(v);

    GumbelMaxSketch sk = detail::empty_sketch(cfg);
    const double phi = cfg.effective_phi();
    for (const auto& e : v.entries()) {
        const FillResult fill = bbm_mix_full(e.index, e.weight, cfg.k, phi, cfg.global_seed);
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            if (sk.s[j] == GumbelMaxSketch::kEmpty || fill.times[j] < sk.y[j]) {
                sk.y[j] = fill.times[j];
                sk.s[j] = e.index;
            }
        }
    }
    return sk;
}

// FastGM: LinearFill budgets ceil(R * v_i^*) balls per element per round
// until no register is empty, then FastPrune stops each process once its
// next ball lands beyond the current maximum register.
inline GumbelMaxSketch sketch_fastgm(const SparseVector& v, const SketchConfig& cfg,
                                     SketchStats* stats = nullptr) {
    cfg.validate();
    detail::require_sketchable(v);

    const std::uint32_t k = cfg.k;
    const double phi = cfg.effective_phi();
    const double weight_sum = v.sum();
    const auto& entries = v.entries();
    const std::size_t n = entries.size();

    GumbelMaxSketch sk = detail::empty_sketch(cfg);
    SketchStats local;
    std::vector<ProcessState> states(n, ProcessState(k));

    std::uint64_t budget = 0;  // R
    std::uint32_t k_star = k;

    auto target_balls = [&](std::size_t idx) {
        return static_cast<std::uint64_t>(
            std::ceil(static_cast<double>(budget) * entries[idx].weight / weight_sum));
    };

    // LinearFill
    while (k_star != 0) {
        budget += cfg.effective_delta();
        for (std::size_t idx = 0; idx < n; ++idx) {
            ProcessState& st = states[idx];
            const double v_i = entries[idx].weight;
            const std::uint64_t r_i = target_balls(idx);
            while (st.m > 0 && st.z < r_i) {
                const BallEvent ev = get_next_balls(st, k, phi, cfg.global_seed, entries[idx].index);
                ++local.calls;
                local.balls += ev.batch;
                const double b = ev.raw_time / (k * v_i);
                if (sk.s[ev.bin] == GumbelMaxSketch::kEmpty) {
                    sk.y[ev.bin] = b;
                    sk.s[ev.bin] = entries[idx].index;
                    --k_star;
                } else if (b < sk.y[ev.bin]) {
                    sk.y[ev.bin] = b;
                    sk.s[ev.bin] = entries[idx].index;
                }
            }
        }
    }

    // FastPrune
    std::uint32_t j_star = detail::scan_max_register(sk);
    std::vector<std::size_t> active(n);
    for (std::size_t idx = 0; idx < n; ++idx) active[idx] = idx;

    while (!active.empty()) {
        budget += cfg.effective_delta();
        std::vector<std::size_t> still_active;
        still_active.reserve(active.size());
        for (std::size_t idx : active) {
            ProcessState& st = states[idx];
            const double v_i = entries[idx].weight;
            // Every ball after the last one is strictly later, so a process
            // whose latest arrival already exceeds y* is done; without this
            // check a tiny-weight element waits out thousands of budget
            // rounds before it may emit the ball that prunes it.
            if (st.x / (k * v_i) > sk.y[j_star]) continue;
            const std::uint64_t r_i = target_balls(idx);
            bool pruned = false;
            while (st.m > 0 && st.z < r_i) {
                const BallEvent ev = get_next_balls(st, k, phi, cfg.global_seed, entries[idx].index);
                ++local.calls;
                local.balls += ev.batch;
                const double b = ev.raw_time / (k * v_i);
                if (b > sk.y[j_star]) {
                    pruned = true;
                    break;
                }
                if (b < sk.y[ev.bin]) {
                    sk.y[ev.bin] = b;
                    sk.s[ev.bin] = entries[idx].index;
                    if (ev.bin == j_star) j_star = detail::scan_max_register(sk);
                }
            }
            // An exhausted process has filled all its bins; no later ball
            // can beat its own first arrivals.
            if (!pruned && st.m > 0) still_active.push_back(idx);
        }
        active = std::move(still_active);
    }

    if (stats) *stats = local;
    return sk;
}

// Direct Gumbel-Max baseline: k independent draws per positive element,
// O(k n+). Same output distribution as the engines above under a different
// randomness realization; kept for timing and distribution cross-checks.
inline GumbelMaxSketch sketch_gumbel_direct(const SparseVector& v, const SketchConfig& cfg) {
    cfg.validate();
    detail::require_sketchable(v);

    GumbelMaxSketch sk = detail::empty_sketch(cfg);
    for (const auto& e : v.entries()) {
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            RandomStream rng = derive_stream({cfg.global_seed, e.index, j});
            const double b = -std::log(rng.next_uniform()) / e.weight;
            if (sk.s[j] == GumbelMaxSketch::kEmpty || b < sk.y[j]) {
                sk.y[j] = b;
                sk.s[j] = e.index;
            }
        }
    }
    return sk;
}

// (j*, y*) with ties resolved to the smallest bin index.
inline std::pair<std::uint32_t, double> max_register(const GumbelMaxSketch& sk) {
    if (!sk.complete())
        throw std::logic_error("max_register: sketch has unfilled registers");
    const std::uint32_t j_star = detail::scan_max_register(sk);
    return {j_star, sk.y[j_star]};
}

} // namespace fastgm
