#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <stdexcept>
#include <vector>

#include "fastgm/keyed_rng.hpp"

namespace fastgm {

// Balls-and-bins generators. One process simulates a rate-k Poisson stream
// of balls thrown uniformly into k bins; the first arrival per bin, scaled
// by 1/(k*v_i), has the EXP(v_i) marginal of -ln(a)/v_i.
//
// Raw ball streams depend only on (global_seed, element index, ball count),
// never on the weight, so the same element draws the same balls in every
// vector containing it.

// Per-element simulation state. The logical permutation pi holds this
// process's still-empty bins at positions 0..m-1 and the filled ones at
// m..k-1. It starts as the identity and only displaced entries are stored,
// so constructing a state is O(1) regardless of k; a process that emits
// few balls touches only a few entries.
struct ProcessState {
    double x = 0.0;           // cumulative unit-rate arrival time, unscaled
    std::uint64_t z = 0;      // cumulative balls emitted
    std::uint32_t m = 0;      // still-empty bin count

    explicit ProcessState(std::uint32_t k) : m(k) {}

    bool exhausted() const noexcept { return m == 0; }

    std::uint32_t pi(std::uint32_t pos) const {
        const auto it = displaced_.find(pos);
        return it == displaced_.end() ? pos : it->second;
    }

    void pi_swap(std::uint32_t a, std::uint32_t b) {
        const std::uint32_t va = pi(a), vb = pi(b);
        displaced_[a] = vb;
        displaced_[b] = va;
    }

private:
    std::unordered_map<std::uint32_t, std::uint32_t> displaced_;
};

struct BallEvent {
    double raw_time;      // x after the call (unit-rate)
    std::uint32_t bin;    // 0-based bin index
    std::uint64_t batch;  // balls emitted by this call
};

// One step of BBM-Mix. Hash branch while many bins are empty, geometric
// batching plus a Gamma jump once m <= phi. Each call rekeys its stream
// from (global_seed, i, z), which keeps draws consistent across vectors.
inline BallEvent get_next_balls(ProcessState& state, std::uint32_t k, double phi,
                                std::uint64_t global_seed, std::uint64_t i) {
    if (state.m == 0) throw std::logic_error("get_next_balls: process exhausted");

    RandomStream rng = derive_stream({global_seed, i, state.z});
    const double u = rng.next_uniform();

    double x_inc;
    std::uint64_t batch;
    std::uint32_t c;
    // m == k must take the hash branch; the geometric formula divides by
    // ln(1 - m/k) which is -inf there.
    if (state.m > phi || state.m == k) {
        x_inc = -std::log(u);
        batch = 1;
        const auto j = static_cast<std::uint32_t>(rng.next_int(k) - 1);
        if (j < state.m) {
            state.pi_swap(j, state.m - 1);
            c = state.pi(state.m - 1);
            --state.m;
        } else {
            c = state.pi(j);
        }
    } else {
        const double p_miss = 1.0 - static_cast<double>(state.m) / static_cast<double>(k);
        batch = static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(p_miss))) + 1;
        x_inc = rng.next_gamma(batch);
        const auto j = static_cast<std::uint32_t>(rng.next_int(state.m) - 1);
        state.pi_swap(j, state.m - 1);
        c = state.pi(state.m - 1);
        --state.m;
    }

    state.x += x_inc;
    state.z += batch;
    return {state.x, c, batch};
}

// Output of a full single-process run: per-bin first-arrival times scaled
// by 1/(k*v_i), plus instrumentation.
struct FillResult {
    std::vector<double> times;
    std::uint64_t iterations = 0;
    std::uint64_t balls = 0;
};

// BBM-Mix run to exhaustion for one element.
inline FillResult bbm_mix_full(std::uint64_t i, double v_i, std::uint32_t k, double phi,
                               std::uint64_t global_seed) {
    if (!(v_i > 0.0)) throw std::invalid_argument("bbm_mix_full: weight must be positive");
    if (k == 0) throw std::invalid_argument("bbm_mix_full: k must be >= 1");

    ProcessState state(k);
    FillResult out;
    out.times.assign(k, -1.0);
    std::uint32_t unfilled = k;
    while (unfilled > 0) {
        const BallEvent ev = get_next_balls(state, k, phi, global_seed, i);
        ++out.iterations;
        out.balls += ev.batch;
        if (out.times[ev.bin] < 0.0) {
            out.times[ev.bin] = ev.raw_time / (k * v_i);
            --unfilled;
        }
    }
    return out;
}

// Reference BBM-Hash: one exponential step and one uniform bin per
// iteration until every bin holds a ball. Coupon-collector iteration count.
inline FillResult bbm_hash_full(std::uint64_t i, double v_i, std::uint32_t k,
                                std::uint64_t global_seed) {
    if (!(v_i > 0.0)) throw std::invalid_argument("bbm_hash_full: weight must be positive");
    if (k == 0) throw std::invalid_argument("bbm_hash_full: k must be >= 1");

    FillResult out;
    out.times.assign(k, -1.0);
    double x = 0.0;
    std::uint64_t z = 0;
    std::uint32_t unfilled = k;
    while (unfilled > 0) {
        RandomStream rng = derive_stream({global_seed, i, z});
        x -= std::log(rng.next_uniform()) / (k * v_i);
        const auto j = static_cast<std::uint32_t>(rng.next_int(k) - 1);
        ++z;
        ++out.iterations;
        ++out.balls;
        if (out.times[j] < 0.0) {
            out.times[j] = x;
            --unfilled;
        }
    }
    return out;
}

// Reference BBM-Permutation: exactly k iterations, each filling one empty
// bin chosen Fisher-Yates style; batch sizes are geometric, batch times
// Gamma. Optionally reports the final permutation (a uniform random one).
inline FillResult bbm_permutation_full(std::uint64_t i, double v_i, std::uint32_t k,
                                       std::uint64_t global_seed,
                                       std::vector<std::uint32_t>* final_pi = nullptr) {
    if (!(v_i > 0.0)) throw std::invalid_argument("bbm_permutation_full: weight must be positive");
    if (k == 0) throw std::invalid_argument("bbm_permutation_full: k must be >= 1");

    FillResult out;
    out.times.assign(k, -1.0);
    ProcessState state(k);
    while (state.m > 0) {
        RandomStream rng = derive_stream({global_seed, i, state.z});
        const double u = rng.next_uniform();
        std::uint64_t batch = 1;
        if (state.m < k) {
            const double p_miss = 1.0 - static_cast<double>(state.m) / static_cast<double>(k);
            batch = static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(p_miss))) + 1;
        }
        state.x += rng.next_gamma(batch);
        state.z += batch;
        const auto j = static_cast<std::uint32_t>(rng.next_int(state.m) - 1);
        state.pi_swap(j, state.m - 1);
        out.times[state.pi(state.m - 1)] = state.x / (k * v_i);
        --state.m;
        ++out.iterations;
        out.balls += batch;
    }
    if (final_pi) {
        final_pi->resize(k);
        for (std::uint32_t pos = 0; pos < k; ++pos) (*final_pi)[pos] = state.pi(pos);
    }
    return out;
}

} // namespace fastgm
