// Command-line front end: sketch corpora, estimate pair similarities,
// embed graphs, and benchmark the sketch methods.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fastgm/bench.hpp"
#include "fastgm/embedding.hpp"
#include "fastgm/io_formats.hpp"
#include "fastgm/similarity.hpp"
#include "fastgm/sketch.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw fastgm::FormatError("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw fastgm::FormatError("cannot open output file: " + path);
    return out;
}

struct SketchArgs {
    std::string input, out, method = "fastgm";
    std::uint32_t k = 256;
    std::uint64_t seed = kDefaultSeed;
    std::uint32_t delta = 0;
    double phi = -1.0;
    std::uint32_t threads = 1;
    bool verbose = false;
};

fastgm::GumbelMaxSketch sketch_one(const fastgm::SparseVector& v, const fastgm::SketchConfig& cfg,
                                   const std::string& method) {
    if (method == "fastgm") return fastgm::sketch_fastgm(v, cfg);
    if (method == "exhaustive") return fastgm::sketch_exhaustive(v, cfg);
    return fastgm::sketch_gumbel_direct(v, cfg);
}

int cmd_sketch(const SketchArgs& args) {
    auto in = open_input(args.input);
    const auto vectors = fastgm::parse_vectors(in);

    fastgm::SketchConfig cfg;
    cfg.k = args.k;
    cfg.global_seed = args.seed;
    cfg.delta = args.delta;
    cfg.phi = args.phi;
    cfg.validate();

    std::vector<fastgm::NamedSketch> sketches(vectors.size());
    const std::uint32_t threads = std::max<std::uint32_t>(args.threads, 1);
    auto worker = [&](std::uint32_t t) {
        for (std::size_t i = t; i < vectors.size(); i += threads) {
            sketches[i] = {vectors[i].first, sketch_one(vectors[i].second, cfg, args.method)};
            if (args.verbose && t == 0)
                std::cerr << "sketched " << vectors[i].first << "\n";
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint32_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    auto out = open_output(args.out, std::ios::binary);
    fastgm::write_sketches(out, sketches);
    std::cout << "wrote " << sketches.size() << " sketches (k=" << cfg.k
              << ", seed=" << cfg.global_seed << ") to " << args.out << "\n";
    return kExitOk;
}

struct SimilarityArgs {
    std::string sketches, pairs, exact, csv;
};

int cmd_similarity(const SimilarityArgs& args) {
    auto sk_in = open_input(args.sketches, std::ios::binary);
    const auto sketches = fastgm::read_sketches(sk_in);
    std::map<std::string, const fastgm::GumbelMaxSketch*> by_id;
    for (const auto& ns : sketches) by_id[ns.id] = &ns.sketch;

    auto pairs_in = open_input(args.pairs);
    const auto pairs = fastgm::parse_pairs(pairs_in);

    std::map<std::string, fastgm::SparseVector> exact;
    const bool have_exact = !args.exact.empty();
    if (have_exact) {
        auto vec_in = open_input(args.exact);
        for (auto& [id, v] : fastgm::parse_vectors(vec_in)) exact.emplace(id, std::move(v));
    }

    std::ostringstream csv;
    csv << "id1,id2,estimate,J_P,J_W,abs_error\n";
    for (const auto& [id1, id2] : pairs) {
        const auto a = by_id.find(id1);
        const auto b = by_id.find(id2);
        if (a == by_id.end() || b == by_id.end())
            throw fastgm::FormatError("pair references unknown sketch id: " + id1 + "/" + id2);
        const double est = fastgm::estimate_similarity(*a->second, *b->second).value;
        csv << id1 << ',' << id2 << ',' << est << ',';
        if (have_exact) {
            const auto u = exact.find(id1);
            const auto v = exact.find(id2);
            if (u == exact.end() || v == exact.end())
                throw fastgm::FormatError("pair references unknown vector id: " + id1 + "/" + id2);
            const double jp = fastgm::jaccard_p(u->second, v->second);
            const double jw = fastgm::jaccard_w(u->second, v->second);
            csv << jp << ',' << jw << ',' << std::abs(est - jp);
        } else {
            csv << ",,";
        }
        csv << '\n';
    }
    if (args.csv.empty()) {
        std::cout << csv.str();
    } else {
        open_output(args.csv) << csv.str();
        std::cout << "wrote " << pairs.size() << " pair rows to " << args.csv << "\n";
    }
    return kExitOk;
}

struct EmbedArgs {
    std::string graph, out;
    std::uint32_t k = 128;
    std::uint32_t order = 5;
    double decay = 0.005;
    std::uint64_t seed = kDefaultSeed;
};

int cmd_embed(const EmbedArgs& args) {
    auto in = open_input(args.graph);
    const auto edges = fastgm::parse_graph(in);
    std::uint32_t n = 0;
    for (const auto& e : edges) n = std::max({n, e.u + 1, e.v + 1});
    if (n == 0) throw fastgm::FormatError("graph has no edges");

    fastgm::SketchConfig cfg;
    cfg.k = args.k;
    cfg.global_seed = args.seed;
    cfg.validate();

    const auto g = fastgm::build_sla(edges, n);
    const auto emb = fastgm::embed_nodes(g, cfg, args.order, args.decay);

    std::vector<fastgm::NamedSketch> out;
    out.reserve(n);
    for (std::uint32_t u = 0; u < n; ++u)
        out.push_back({std::to_string(u), emb.sketches[u]});
    auto os = open_output(args.out, std::ios::binary);
    fastgm::write_sketches(os, out);
    std::cout << "wrote embeddings for " << n << " nodes (k=" << cfg.k
              << ", order=" << args.order << ") to " << args.out << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::vector<std::uint64_t> n_plus{10000};
    std::vector<std::uint32_t> ks{256};
    std::string dist = "uniform";
    std::uint32_t trials = 5;
    std::vector<std::string> methods{"fastgm", "direct"};
    std::string csv;
    std::uint64_t seed = kDefaultSeed;
    bool calibrate = false;
};

int cmd_bench(const BenchArgs& args) {
    if (args.calibrate) {
        const auto cal = fastgm::calibrate_phi();
        std::cout << "hash branch: " << cal.hash_ns_per_iter << " ns/iter\n"
                  << "gamma branch: " << cal.perm_ns_per_iter << " ns/iter\n"
                  << "t_hash/t_perm = " << cal.ratio << " (implied phi = " << cal.ratio
                  << " * k)\n";
        return kExitOk;
    }

    fastgm::BenchGrid grid;
    grid.n_plus_values = args.n_plus;
    grid.k_values = args.ks;
    grid.dist = args.dist == "uniform" ? fastgm::WeightDist::Uniform
                                       : fastgm::WeightDist::Exponential;
    grid.trials = args.trials;
    grid.seed = args.seed;
    grid.methods.clear();
    for (const auto& m : args.methods) {
        if (m == "fastgm") grid.methods.push_back(fastgm::SketchMethod::FastGM);
        else if (m == "exhaustive") grid.methods.push_back(fastgm::SketchMethod::Exhaustive);
        else grid.methods.push_back(fastgm::SketchMethod::Direct);
    }

    const auto rows = fastgm::run_bench(grid);
    if (args.csv.empty()) {
        fastgm::write_bench_csv(std::cout, rows);
    } else {
        auto out = open_output(args.csv);
        fastgm::write_bench_csv(out, rows);
        std::cout << "wrote " << rows.size() << " bench rows to " << args.csv << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FastGM sketching toolkit"};
    app.require_subcommand(1);

    SketchArgs sk;
    auto* sketch = app.add_subcommand("sketch", "Sketch a vector corpus to a binary file");
    sketch->add_option("--input", sk.input, "Tab-delimited vector corpus")->required();
    sketch->add_option("--k", sk.k, "Registers per sketch")->check(CLI::PositiveNumber);
    sketch->add_option("--seed", sk.seed, "Global seed (default 42)");
    sketch->add_option("--out", sk.out, "Output sketch file")->required();
    sketch->add_option("--method", sk.method, "Sketch method")
        ->check(CLI::IsMember({"fastgm", "exhaustive", "direct"}));
    sketch->add_option("--delta", sk.delta, "Round budget increment (default k)");
    sketch->add_option("--phi", sk.phi, "Hash/gamma threshold (default k/10)");
    sketch->add_option("--threads", sk.threads, "Worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    sketch->add_flag("--verbose", sk.verbose, "Per-vector progress on stderr");

    SimilarityArgs sim;
    auto* similarity = app.add_subcommand("similarity", "Estimate similarities for id pairs");
    similarity->add_option("--sketches", sim.sketches, "Sketch file")->required();
    similarity->add_option("--pairs", sim.pairs, "Tab-delimited id pairs")->required();
    similarity->add_option("--exact", sim.exact, "Vector corpus for exact J_P/J_W columns");
    similarity->add_option("--csv", sim.csv, "Write CSV here instead of stdout");

    EmbedArgs em;
    auto* embed = app.add_subcommand("embed", "Sketch-based node embeddings for a graph");
    embed->add_option("--graph", em.graph, "Tab-delimited edge list")->required();
    embed->add_option("--k", em.k, "Embedding size")->check(CLI::PositiveNumber);
    embed->add_option("--order", em.order, "Proximity order (default 5)")
        ->check(CLI::PositiveNumber);
    embed->add_option("--decay", em.decay, "Neighbor decay weight (default 0.005)");
    embed->add_option("--seed", em.seed, "Global seed (default 42)");
    embed->add_option("--out", em.out, "Output sketch file")->required();

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "Benchmark sketch methods on synthetic vectors");
    bench->add_option("--n", be.n_plus, "Positive element counts")->delimiter(',');
    bench->add_option("--k", be.ks, "Register counts")->delimiter(',');
    bench->add_option("--dist", be.dist, "Weight distribution")
        ->check(CLI::IsMember({"uniform", "exponential"}));
    bench->add_option("--trials", be.trials, "Timed trials per cell (min 3)");
    bench->add_option("--methods", be.methods, "Methods to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"fastgm", "exhaustive", "direct"}));
    bench->add_option("--csv", be.csv, "Write the report CSV here");
    bench->add_option("--seed", be.seed, "Global seed (default 42)");
    bench->add_flag("--calibrate", be.calibrate, "Measure t_hash/t_perm and the implied phi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sketch->parsed()) return cmd_sketch(sk);
        if (similarity->parsed()) return cmd_similarity(sim);
        if (embed->parsed()) return cmd_embed(em);
        return cmd_bench(be);
    } catch (const fastgm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const fastgm::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
