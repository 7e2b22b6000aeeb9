#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fastgm/sketch.hpp"
#include "fastgm/sparse_vector.hpp"

namespace fastgm {

struct SimilarityEstimate {
    double value = 0.0;     // matching registers / k
    std::uint32_t k = 0;
};

namespace detail {

// Union-merge of two sorted entry lists as (index, u_weight, v_weight)
// with 0 for absent entries.
struct MergedEntry {
    std::uint32_t index;
    double u;
    double v;
};

inline std::vector<MergedEntry> merge_entries(const SparseVector& u, const SparseVector& v) {
    std::vector<MergedEntry> out;
    out.reserve(u.size() + v.size());
    const auto& ue = u.entries();
    const auto& ve = v.entries();
    std::size_t a = 0, b = 0;
    while (a < ue.size() || b < ve.size()) {
        if (b == ve.size() || (a < ue.size() && ue[a].index < ve[b].index)) {
            out.push_back({ue[a].index, ue[a].weight, 0.0});
            ++a;
        } else if (a == ue.size() || ve[b].index < ue[a].index) {
            out.push_back({ve[b].index, 0.0, ve[b].weight});
            ++b;
        } else {
            out.push_back({ue[a].index, ue[a].weight, ve[b].weight});
            ++a;
            ++b;
        }
    }
    return out;
}

} // namespace detail

// Probability Jaccard similarity: sum over the common support of
// 1 / sum_l max(u_l/u_i, v_l/v_i), entries absent from a vector
// contributing ratio 0. Scale-invariant; equals the register collision
// probability of the sketches. Empty input yields 0 and sets *degenerate.
inline double jaccard_p(const SparseVector& u, const SparseVector& v,
                        bool* degenerate = nullptr) {
    if (degenerate) *degenerate = false;
    if (u.empty() || v.empty()) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const auto merged = detail::merge_entries(u, v);
    double total = 0.0;
    for (const auto& mi : merged) {
        if (mi.u <= 0.0 || mi.v <= 0.0) continue;
        double denom = 0.0;
        for (const auto& ml : merged)
            denom += std::max(ml.u / mi.u, ml.v / mi.v);
        total += 1.0 / denom;
    }
    return total;
}

// Weighted Jaccard: sum min / sum max. Both empty -> 0.
inline double jaccard_w(const SparseVector& u, const SparseVector& v) {
    const auto merged = detail::merge_entries(u, v);
    double num = 0.0, den = 0.0;
    for (const auto& m : merged) {
        num += std::min(m.u, m.v);
        den += std::max(m.u, m.v);
    }
    return den > 0.0 ? num / den : 0.0;
}

// Fraction of matching registers between two sketches drawn under the same
// (k, seed). Estimates jaccard_p of the underlying vectors.
inline SimilarityEstimate estimate_similarity(const GumbelMaxSketch& a,
                                              const GumbelMaxSketch& b) {
    if (a.k != b.k || a.global_seed != b.global_seed)
        throw std::invalid_argument("estimate_similarity: sketches have mismatched k or seed");
    std::uint32_t matches = 0;
    for (std::uint32_t j = 0; j < a.k; ++j)
        if (a.s[j] == b.s[j]) ++matches;
    return {static_cast<double>(matches) / static_cast<double>(a.k), a.k};
}

inline double rmse(const std::vector<double>& estimates, double truth) {
    if (estimates.empty()) throw std::invalid_argument("rmse: empty estimate list");
    double acc = 0.0;
    for (double e : estimates) acc += (e - truth) * (e - truth);
    return std::sqrt(acc / static_cast<double>(estimates.size()));
}

} // namespace fastgm
