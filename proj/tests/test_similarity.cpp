#include <doctest.h>

#include <cmath>
#include <vector>

#include "fastgm/similarity.hpp"
#include "fastgm/sketch.hpp"

using namespace fastgm;

TEST_SUITE("similarity") {

TEST_CASE("jaccard_p identity, disjointness, hand value") {
    const auto u = SparseVector::from_dense({2.0, 1.0});
    const auto v = SparseVector::from_dense({1.0, 1.0});
    const auto w = SparseVector::from_entries({{5, 3.0}, {9, 1.0}});

    CHECK(jaccard_p(u, u) == doctest::Approx(1.0));
    CHECK(jaccard_p(u, w) == 0.0);
    // term i=0: 1/(max(1,1)+max(1/2,1)); term i=1: 1/(max(2,1)+max(1,1))
    CHECK(jaccard_p(u, v) == doctest::Approx(5.0 / 6.0));
    CHECK(jaccard_p(v, u) == doctest::Approx(jaccard_p(u, v)));
}

TEST_CASE("jaccard_p is scale invariant") {
    const auto u = SparseVector::from_dense({2.0, 1.0, 0.0, 0.3});
    const auto v = SparseVector::from_dense({1.0, 1.0, 0.5});
    const double base = jaccard_p(u, v);
    CHECK(std::abs(jaccard_p(u.scaled(3.7), v.scaled(0.01)) - base) < 1e-12);
}

TEST_CASE("jaccard_p empty input sets the degenerate flag") {
    const auto u = SparseVector::from_dense({1.0});
    bool degenerate = false;
    CHECK(jaccard_p(SparseVector(), u, &degenerate) == 0.0);
    CHECK(degenerate);
    CHECK(jaccard_p(u, u, &degenerate) == doctest::Approx(1.0));
    CHECK_FALSE(degenerate);
}

TEST_CASE("jaccard_w values") {
    const auto u = SparseVector::from_dense({2.0, 1.0});
    const auto v = SparseVector::from_dense({1.0, 1.0});
    const auto w = SparseVector::from_entries({{5, 3.0}});

    CHECK(jaccard_w(u, u) == doctest::Approx(1.0));
    CHECK(jaccard_w(u, w) == 0.0);
    CHECK(jaccard_w(u, v) == doctest::Approx(2.0 / 3.0));
    CHECK(jaccard_w(SparseVector(), SparseVector()) == 0.0);
    CHECK(jaccard_w(v, u) == doctest::Approx(jaccard_w(u, v)));
}

TEST_CASE("estimate_similarity basics") {
    SketchConfig cfg;
    cfg.k = 64;
    cfg.global_seed = 3;
    const auto u = SparseVector::from_dense({2.0, 1.0});
    const auto a = sketch_fastgm(u, cfg);
    CHECK(estimate_similarity(a, a).value == 1.0);

    const auto disjoint = SparseVector::from_entries({{10, 1.0}, {11, 4.0}});
    CHECK(estimate_similarity(a, sketch_fastgm(disjoint, cfg)).value == 0.0);

    SketchConfig other = cfg;
    other.global_seed = 4;
    CHECK_THROWS_AS(estimate_similarity(a, sketch_fastgm(u, other)), std::invalid_argument);
    other = cfg;
    other.k = 32;
    CHECK_THROWS_AS(estimate_similarity(a, sketch_fastgm(u, other)), std::invalid_argument);
}

TEST_CASE("collision rate converges to jaccard_p") {
    const auto u = SparseVector::from_dense({2.0, 1.0});
    const auto v = SparseVector::from_dense({1.0, 1.0});
    SketchConfig cfg;
    cfg.k = 256;
    std::size_t matches = 0, total = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        cfg.global_seed = t;
        const auto a = sketch_fastgm(u, cfg);
        const auto b = sketch_fastgm(v, cfg);
        for (std::uint32_t j = 0; j < cfg.k; ++j) {
            if (a.s[j] == b.s[j]) ++matches;
            ++total;
        }
    }
    const double p = 5.0 / 6.0;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    CHECK(std::abs(static_cast<double>(matches) / total - p) < 3.0 * sigma);
}

TEST_CASE("rmse") {
    CHECK_THROWS_AS(rmse({}, 0.5), std::invalid_argument);
    CHECK(rmse({0.3, 0.3, 0.3}, 0.3) == 0.0);
    CHECK(rmse({0.0, 1.0}, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("estimator behaves the same for fastgm and direct sketches") {
    const auto u = SparseVector::from_dense({2.0, 1.0});
    const auto v = SparseVector::from_dense({1.0, 1.0});
    SketchConfig cfg;
    cfg.k = 128;
    double sum_fast = 0.0, sum_direct = 0.0;
    const std::size_t trials = 200;
    for (std::uint64_t t = 0; t < trials; ++t) {
        cfg.global_seed = t;
        sum_fast += estimate_similarity(sketch_fastgm(u, cfg), sketch_fastgm(v, cfg)).value;
        sum_direct += estimate_similarity(sketch_gumbel_direct(u, cfg),
                                          sketch_gumbel_direct(v, cfg)).value;
    }
    const double p = 5.0 / 6.0;
    const double sigma = std::sqrt(p * (1.0 - p) / (static_cast<double>(trials) * cfg.k));
    CHECK(std::abs(sum_fast / trials - p) < 4.0 * sigma);
    CHECK(std::abs(sum_direct / trials - p) < 4.0 * sigma);
}

} // TEST_SUITE
