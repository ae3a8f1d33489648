#include <cmath>
#include <set>

#include "camuv/fixtures.hpp"
#include "camuv/indep.hpp"
#include "camuv/rng.hpp"
#include "camuv/synth.hpp"
#include "doctest.h"

using namespace camuv;

namespace {

// independent preferential-attachment reimplementation: explicit degree
// array, linear-scan weighted draw
CausalGraph reference_ba(int n_nodes, int attach, uint64_t seed) {
    Rng rng(hash_mix(seed, 0xba1u));
    std::vector<int> weight(static_cast<size_t>(n_nodes), 0);
    weight[0] = 1;
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n_nodes; ++v) {
        const int m = std::min(v, attach);
        std::set<int> targets;
        while (static_cast<int>(targets.size()) < m) {
            long total = 0;
            for (int u = 0; u < v; ++u)
                if (!targets.count(u)) total += weight[static_cast<size_t>(u)];
            long tick = static_cast<long>(rng.below(static_cast<uint64_t>(total)));
            for (int u = 0; u < v; ++u) {
                if (targets.count(u)) continue;
                tick -= weight[static_cast<size_t>(u)];
                if (tick < 0) {
                    targets.insert(u);
                    break;
                }
            }
        }
        for (int u : targets) {
            edges.emplace_back(u, v);
            ++weight[static_cast<size_t>(u)];
            ++weight[static_cast<size_t>(v)];
        }
        ++weight[static_cast<size_t>(v)];
    }
    std::vector<Vertex> vertices;
    for (int v = 0; v < n_nodes; ++v) vertices.push_back({v, "v" + std::to_string(v), true});
    return CausalGraph(std::move(vertices), std::move(edges));
}

}  // namespace

TEST_CASE("preferential-attachment graphs have the requested shape") {
    const CausalGraph g = sample_ba_graph(40, 5, 10, 7);
    CHECK(g.vertex_count() == 40);
    CHECK(g.observed_count() == 10);
    CHECK(g.topological_order().size() == 40);  // construction enforces acyclicity
    CHECK(sample_ba_graph(40, 5, 10, 7) == g);  // seed determinism

    const CausalGraph tiny = sample_ba_graph(2, 1, 2, 3);
    CHECK(tiny.edges() == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(tiny.observed_count() == 2);

    CHECK_THROWS(sample_ba_graph(5, 5, 9, 0));
}

TEST_CASE("attachment bias matches an independent sampler") {
    // in-degrees are fixed by construction; the preferential part shows in
    // how often early vertices are chosen as attachment targets
    const int n_nodes = 25, attach = 3, draws = 500;
    std::vector<double> main_out(5, 0.0), ref_out(5, 0.0);
    for (uint64_t seed = 0; seed < draws; ++seed) {
        const CausalGraph a = sample_ba_graph(n_nodes, attach, n_nodes, seed);
        const CausalGraph b = reference_ba(n_nodes, attach, hash_mix(seed, 0x9eu));
        for (int v = 0; v < 5; ++v) {
            main_out[static_cast<size_t>(v)] += static_cast<double>(a.children(v).size());
            ref_out[static_cast<size_t>(v)] += static_cast<double>(b.children(v).size());
        }
    }
    for (int v = 0; v < 5; ++v) {
        const double m = main_out[static_cast<size_t>(v)] / draws;
        const double r = ref_out[static_cast<size_t>(v)] / draws;
        CHECK(std::fabs(m - r) / r < 0.05);
    }
}

TEST_CASE("er graphs with hidden structure") {
    const CausalGraph g = sample_er_graph_with_hidden(10, 0.2, 20, 20, 11);
    CHECK(g.observed_count() == 10);
    CHECK(g.vertex_count() == 50);  // one fresh hidden vertex per requested pair
    int hidden_edges = 0;
    for (const auto& [p, c] : g.edges())
        if (!g.is_observed(p) || !g.is_observed(c)) ++hidden_edges;
    CHECK(hidden_edges >= 80);

    const CausalGraph empty = sample_er_graph_with_hidden(3, 0.0, 0, 0, 5);
    CHECK(empty.vertex_count() == 3);
    CHECK(empty.edges().empty());

    for (uint64_t seed = 0; seed < 1000; ++seed)
        CHECK(sample_er_graph_with_hidden(6, 0.3, 3, 3, seed).topological_order().size() == 12);

    CHECK_THROWS(sample_er_graph_with_hidden(3, 0.2, 10, 0, 0));  // more pairs than exist
}

TEST_CASE("sampled datasets are standardized and deterministic") {
    const ScmSpec spec = ScmSpec::random_coefficients(fixture_graph("fig1a"), 21);
    const Dataset d = sample_dataset(spec, 400);
    CHECK(d.n == 400);
    CHECK(d.p == 3);
    for (int j = 0; j < d.p; ++j) {
        const auto& col = d.column(j);
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= d.n;
        double var = 0.0;
        for (double v : col) var += (v - mean) * (v - mean);
        var /= d.n - 1;
        CHECK(std::fabs(mean) <= 1e-9);
        CHECK(std::fabs(var - 1.0) <= 1e-9);
    }

    const Dataset d2 = sample_dataset(spec, 400);
    CHECK(d2.columns == d.columns);  // bit-identical on the same spec

    // a parentless vertex is pure standardized noise
    const CausalGraph lone({{0, "x1", true}}, {});
    const Dataset root = sample_dataset(ScmSpec::random_coefficients(lone, 3), 1000);
    double m4 = 0.0;
    for (double v : root.column(0)) m4 += v * v * v * v;
    m4 /= root.n;
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.25));  // gaussian kurtosis

    CHECK_THROWS(sample_dataset(spec, 0));
}

TEST_CASE("direct effects in the confounded fixture are detectable") {
    int rejected = 0;
    const int trials = 100;
    for (uint64_t seed = 0; seed < trials; ++seed) {
        const ScmSpec spec = ScmSpec::random_coefficients(fixture_graph("fig1a"), hash_mix(seed, 0x77u));
        const Dataset d = sample_dataset(spec, 500);
        if (hsic_pvalue(d.column(0), d.column(1)).p_value < 0.05) ++rejected;
    }
    CHECK(rejected >= 95);
}

TEST_CASE("dataset csv round trip") {
    const ScmSpec spec = ScmSpec::random_coefficients(fixture_graph("figC1"), 9);
    const Dataset d = sample_dataset(spec, 60);
    const Dataset back = Dataset::from_csv(d.to_csv());
    CHECK(back.labels == d.labels);
    CHECK(back.columns == d.columns);

    CHECK_THROWS_WITH_AS(Dataset::from_csv("a,b\n1.0\n"), doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS(Dataset::from_csv("a,b\n1.0,zzz\n"));
}
