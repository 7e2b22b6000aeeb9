#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastgm/keyed_rng.hpp"
#include "fastgm/sketch.hpp"
#include "fastgm/sparse_vector.hpp"

namespace fastgm {

// Benchmark harness: synthetic vectors, wall-clock timing of the sketch
// methods, and ball/call instrumentation.

enum class WeightDist { Uniform, Exponential };

inline const char* to_string(WeightDist d) {
    return d == WeightDist::Uniform ? "uniform" : "exponential";
}

enum class SketchMethod { FastGM, Exhaustive, Direct };

inline const char* to_string(SketchMethod m) {
    switch (m) {
        case SketchMethod::FastGM: return "fastgm";
        case SketchMethod::Exhaustive: return "exhaustive";
        default: return "direct";
    }
}

// Dense-support synthetic vector: indices 0..n_plus-1, weights from the
// named distribution. Deterministic in (n_plus, dist, seed).
inline SparseVector gen_synthetic(std::uint64_t n_plus, WeightDist dist, std::uint64_t seed) {
    if (n_plus == 0) throw std::invalid_argument("gen_synthetic: n_plus must be >= 1");
    // Tagged key so generation never shares a stream with sketching.
    RandomStream rng = derive_stream({seed, 0x47454E5F56454353ULL, n_plus});
    std::vector<SparseVector::Entry> entries;
    entries.reserve(n_plus);
    for (std::uint64_t i = 0; i < n_plus; ++i) {
        const double u = rng.next_uniform();
        const double w = dist == WeightDist::Uniform ? u : -std::log(u);
        entries.push_back({static_cast<std::uint32_t>(i), w});
    }
    return SparseVector::from_entries(std::move(entries));
}

struct BenchGrid {
    std::vector<std::uint64_t> n_plus_values;
    std::vector<std::uint32_t> k_values;
    WeightDist dist = WeightDist::Uniform;
    std::uint32_t trials = 5;       // timed trials per cell; a warm-up run is discarded
    std::uint64_t seed = 1;
    std::vector<SketchMethod> methods{SketchMethod::FastGM, SketchMethod::Direct};
};

struct BenchRow {
    SketchMethod method;
    std::uint64_t n_plus;
    std::uint32_t k;
    WeightDist dist;
    std::uint32_t trials;
    double mean_ms;
    double median_ms;
    double stddev_ms;
    std::uint64_t balls;            // total across trials; fastgm only
    std::uint64_t calls;
    double speedup_vs_direct;       // 0 when direct is not in the grid
};

namespace detail {

struct TimingStats {
    double mean_ms, median_ms, stddev_ms;
};

inline TimingStats summarize_ms(std::vector<double> samples) {
    TimingStats t{};
    const auto n = static_cast<double>(samples.size());
    for (double s : samples) t.mean_ms += s;
    t.mean_ms /= n;
    for (double s : samples) t.stddev_ms += (s - t.mean_ms) * (s - t.mean_ms);
    t.stddev_ms = samples.size() > 1 ? std::sqrt(t.stddev_ms / (n - 1.0)) : 0.0;
    std::sort(samples.begin(), samples.end());
    t.median_ms = samples.size() % 2 == 1
                      ? samples[samples.size() / 2]
                      : 0.5 * (samples[samples.size() / 2 - 1] + samples[samples.size() / 2]);
    return t;
}

} // namespace detail

inline std::vector<BenchRow> run_bench(const BenchGrid& grid) {
    if (grid.n_plus_values.empty() || grid.k_values.empty() || grid.methods.empty())
        throw std::invalid_argument("run_bench: empty grid");
    const std::uint32_t trials = std::max<std::uint32_t>(grid.trials, 3);

    std::vector<BenchRow> rows;
    for (std::uint64_t n_plus : grid.n_plus_values) {
        const SparseVector v = gen_synthetic(n_plus, grid.dist, grid.seed);
        for (std::uint32_t k : grid.k_values) {
            SketchConfig cfg;
            cfg.k = k;
            cfg.global_seed = grid.seed;

            double direct_mean_ms = 0.0;
            std::vector<BenchRow> cell_rows;
            for (SketchMethod method : grid.methods) {
                std::vector<double> times_ms;
                std::uint64_t balls = 0, calls = 0;
                for (std::uint32_t t = 0; t <= trials; ++t) {
                    SketchStats stats;
                    const auto t0 = std::chrono::steady_clock::now();
                    switch (method) {
                        case SketchMethod::FastGM: sketch_fastgm(v, cfg, &stats); break;
                        case SketchMethod::Exhaustive: sketch_exhaustive(v, cfg); break;
                        case SketchMethod::Direct: sketch_gumbel_direct(v, cfg); break;
                    }
                    const auto t1 = std::chrono::steady_clock::now();
                    if (t == 0) continue;  // warm-up
                    times_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
                    balls += stats.balls;
                    calls += stats.calls;
                }
                const auto ts = detail::summarize_ms(std::move(times_ms));
                if (method == SketchMethod::Direct) direct_mean_ms = ts.mean_ms;
                cell_rows.push_back({method, n_plus, k, grid.dist, trials, ts.mean_ms,
                                     ts.median_ms, ts.stddev_ms, balls, calls, 0.0});
            }
            for (auto& row : cell_rows) {
                if (direct_mean_ms > 0.0 && row.mean_ms > 0.0)
                    row.speedup_vs_direct = direct_mean_ms / row.mean_ms;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "method,n_plus,k,dist,trials,mean_ms,median_ms,stddev_ms,balls,calls,"
           "speedup_vs_direct\n";
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.n_plus << ',' << r.k << ','
            << to_string(r.dist) << ',' << r.trials << ',' << r.mean_ms << ','
            << r.median_ms << ',' << r.stddev_ms << ',' << r.balls << ',' << r.calls << ','
            << r.speedup_vs_direct << '\n';
    }
}

struct PhiCalibration {
    double hash_ns_per_iter;
    double perm_ns_per_iter;
    double ratio;               // t_hash / t_perm
    double implied_phi(std::uint32_t k) const { return ratio * k; }
};

// Times the two branch regimes of the ball generator on this host and
// reports the implied hash/gamma switch point k * t_hash/t_perm.
inline PhiCalibration calibrate_phi(std::uint32_t k = 1024, std::uint64_t iters = 200000,
                                    std::uint64_t seed = 7) {
    using clock = std::chrono::steady_clock;
    PhiCalibration cal{};

    // Hash regime: phi = 0 keeps every call in the hash branch.
    {
        ProcessState st(k);
        const auto t0 = clock::now();
        std::uint64_t done = 0;
        while (done < iters) {
            if (st.exhausted()) st = ProcessState(k);
            get_next_balls(st, k, 0.0, seed, done);
            ++done;
        }
        cal.hash_ns_per_iter =
            std::chrono::duration<double, std::nano>(clock::now() - t0).count() / iters;
    }
    // Gamma regime: phi = k forces the batching branch after the first call.
    {
        ProcessState st(k);
        const auto t0 = clock::now();
        std::uint64_t done = 0;
        while (done < iters) {
            if (st.exhausted()) st = ProcessState(k);
            get_next_balls(st, k, static_cast<double>(k), seed, done);
            ++done;
        }
        cal.perm_ns_per_iter =
            std::chrono::duration<double, std::nano>(clock::now() - t0).count() / iters;
    }
    cal.ratio = cal.hash_ns_per_iter / cal.perm_ns_per_iter;
    return cal;
}

} // namespace fastgm
