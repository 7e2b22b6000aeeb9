#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "fastgm/similarity.hpp"
#include "fastgm/sketch.hpp"
#include "fastgm/sparse_vector.hpp"

namespace fastgm {

// Graph-embedding layer: sketch each row of the self-loop-augmented
// adjacency matrix; higher orders re-sketch rows augmented with decayed
// register histograms of the previous order's neighbor sketches.

struct Edge {
    std::uint32_t u;
    std::uint32_t v;
    double weight = 1.0;
};

// Self-loop-augmented adjacency rows. Every row contains its own index.
struct SLAGraph {
    std::uint32_t node_count = 0;
    std::vector<SparseVector> rows;
};

struct NodeEmbedding {
    std::vector<GumbelMaxSketch> sketches;
    std::uint32_t order = 1;
};

inline SLAGraph build_sla(const std::vector<Edge>& edges, std::uint32_t n,
                          double self_weight = 1.0) {
    if (!(self_weight > 0.0))
        throw std::invalid_argument("build_sla: self_weight must be positive");
    std::vector<std::map<std::uint32_t, double>> acc(n);
    for (std::uint32_t u = 0; u < n; ++u) acc[u][u] = self_weight;
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::invalid_argument("build_sla: edge references node id out of range");
        if (e.weight < 0.0)
            throw std::invalid_argument("build_sla: negative edge weight");
        if (e.weight == 0.0) continue;
        acc[e.u][e.v] += e.weight;
        if (e.u != e.v) acc[e.v][e.u] += e.weight;
    }
    SLAGraph g;
    g.node_count = n;
    g.rows.reserve(n);
    for (std::uint32_t u = 0; u < n; ++u) {
        std::vector<SparseVector::Entry> entries;
        entries.reserve(acc[u].size());
        for (const auto& [idx, w] : acc[u]) entries.push_back({idx, w});
        g.rows.push_back(SparseVector::from_entries(std::move(entries)));
    }
    return g;
}

// r-order embeddings. Order 1 sketches the raw SLA rows. For order t > 1,
// each neighbor w of u contributes decay * (register-value frequencies of
// w's (t-1)-order sketch) to u's row before sketching.
inline NodeEmbedding embed_nodes(const SLAGraph& g, const SketchConfig& cfg,
                                 std::uint32_t r, double decay = 0.005) {
    if (r == 0) throw std::invalid_argument("embed_nodes: order must be >= 1");
    if (!(decay > 0.0)) throw std::invalid_argument("embed_nodes: decay must be positive");

    NodeEmbedding emb;
    emb.order = r;
    emb.sketches.reserve(g.node_count);
    for (const auto& row : g.rows)
        emb.sketches.push_back(sketch_fastgm(row, cfg));

    for (std::uint32_t t = 2; t <= r; ++t) {
        std::vector<GumbelMaxSketch> next;
        next.reserve(g.node_count);
        for (std::uint32_t u = 0; u < g.node_count; ++u) {
            std::map<std::uint32_t, double> acc;
            for (const auto& e : g.rows[u].entries()) acc[e.index] += e.weight;
            for (const auto& e : g.rows[u].entries()) {
                if (e.index == u) continue;
                const GumbelMaxSketch& ws = emb.sketches[e.index];
                std::map<std::uint32_t, double> hist;
                for (auto sv : ws.s) hist[sv] += 1.0;
                for (const auto& [idx, count] : hist)
                    acc[idx] += decay * count / static_cast<double>(cfg.k);
            }
            std::vector<SparseVector::Entry> entries;
            entries.reserve(acc.size());
            for (const auto& [idx, w] : acc) entries.push_back({idx, w});
            next.push_back(sketch_fastgm(SparseVector::from_entries(std::move(entries)), cfg));
        }
        emb.sketches = std::move(next);
    }
    return emb;
}

// Fraction of equal registers; the link-scoring metric for embeddings.
inline double hamming_similarity(const GumbelMaxSketch& a, const GumbelMaxSketch& b) {
    return estimate_similarity(a, b).value;
}

} // namespace fastgm
