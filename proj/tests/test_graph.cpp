#include <filesystem>
#include <fstream>
#include <sstream>

#include "camuv/fixtures.hpp"
#include "camuv/graph.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "properties.hpp"

using namespace camuv;
using namespace camuv::testsupport;

namespace {

VertexSet observed_of(const CausalGraph& g) { return g.observed_vertices(); }

int by_label(const CausalGraph& g, const std::string& label) {
    const auto id = g.vertex_by_label(label);
    REQUIRE(id.has_value());
    return *id;
}

// independent enumeration of simple directed paths, recursion-free
std::vector<std::vector<int>> paths_reference(const CausalGraph& g, int src, int dst) {
    std::vector<std::vector<int>> found;
    std::vector<std::vector<int>> stack{{src}};
    while (!stack.empty()) {
        std::vector<int> cur = stack.back();
        stack.pop_back();
        if (cur.back() == dst) {
            found.push_back(cur);
            continue;
        }
        const auto& kids = g.children(cur.back());
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            if (std::find(cur.begin(), cur.end(), *it) != cur.end()) continue;
            std::vector<int> nxt = cur;
            nxt.push_back(*it);
            stack.push_back(std::move(nxt));
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace

TEST_CASE("graph construction validates invariants") {
    CHECK_THROWS(CausalGraph({{0, "a", true}, {1, "b", true}}, {{0, 1}, {1, 0}}));  // cycle
    CHECK_THROWS(CausalGraph({{0, "a", true}}, {{0, 0}}));                          // self loop
    CHECK_THROWS(CausalGraph({{0, "a", true}, {1, "b", true}}, {{0, 1}, {0, 1}}));  // duplicate
    CHECK_THROWS(CausalGraph({{0, "a", true}, {2, "b", true}}, {}));                // ids not dense
}

TEST_CASE("directed paths on the mediator fixture") {
    const CausalGraph g = fixture_graph("fig1c");
    const auto paths = directed_paths(g, by_label(g, "x4"), by_label(g, "x5"));
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == std::vector<int>{by_label(g, "x4"), by_label(g, "U3"), by_label(g, "x5")});
}

TEST_CASE("directed paths: disconnected pair gives the empty list") {
    const CausalGraph g({{0, "a", true}, {1, "b", true}}, {});
    CHECK(directed_paths(g, 0, 1).empty());
    CHECK_THROWS(directed_paths(g, 0, 5));
}

TEST_CASE("directed paths match an independent enumeration on random graphs") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        const CausalGraph g = random_small_dag(seed, 6, 0.5);
        for (int a = 0; a < g.vertex_count(); ++a)
            for (int b = 0; b < g.vertex_count(); ++b) {
                if (a == b) continue;
                auto got = directed_paths(g, a, b);
                std::sort(got.begin(), got.end());
                CHECK(got == paths_reference(g, a, b));
            }
    }
}

TEST_CASE("unobserved causal paths on the benchmark fixtures") {
    const CausalGraph c = fixture_graph("fig1c");
    CHECK(has_ucp(c, by_label(c, "x4"), by_label(c, "x5"), observed_of(c)));

    const CausalGraph d = fixture_graph("fig1d");
    const int x1 = by_label(d, "x1"), x2 = by_label(d, "x2"), x3 = by_label(d, "x3");
    CHECK_FALSE(has_ucp(d, x1, x2, observed_of(d)));
    VertexSet without_x3;
    for (int v : observed_of(d))
        if (v != x3) without_x3.push_back(v);
    CHECK(has_ucp(d, x1, x2, without_x3));

    const CausalGraph chain({{0, "x1", true}, {1, "x2", true}}, {{0, 1}});
    CHECK_FALSE(has_ucp(chain, 0, 1, observed_of(chain)));  // a direct edge is not an unobserved path
    CHECK_THROWS(has_ucp(chain, 0, 1, VertexSet{0}));       // xj must be inside xprime
}

TEST_CASE("unobserved backdoor paths on the benchmark fixtures") {
    const CausalGraph a = fixture_graph("fig1a");
    const int x1 = by_label(a, "x1"), x2 = by_label(a, "x2"), x3 = by_label(a, "x3");
    CHECK(has_ubp(a, x3, x2, observed_of(a)));
    CHECK_FALSE(has_ubp(a, x1, x2, observed_of(a)));
    VertexSet without_x3;
    for (int v : observed_of(a))
        if (v != x3) without_x3.push_back(v);
    CHECK(has_ubp(a, x1, x2, without_x3));

    const CausalGraph fork({{0, "x1", true}, {1, "x2", true}, {2, "x3", true}}, {{1, 0}, {1, 2}});
    CHECK_FALSE(has_ubp(fork, 0, 2, observed_of(fork)));  // observed apex adjacent to both ends
}

TEST_CASE("d-separation on the benchmark fixtures") {
    const CausalGraph c = fixture_graph("fig1c");
    CHECK(d_separated(c, by_label(c, "x1"), by_label(c, "x5"), {by_label(c, "x4")}));

    const CausalGraph d = fixture_graph("fig1d");
    CHECK(d_separated(d, by_label(d, "x4"), by_label(d, "x3"), {by_label(d, "x1")}));

    const CausalGraph split({{0, "a", true}, {1, "b", true}, {2, "c", true}, {3, "d", true}}, {{0, 1}, {2, 3}});
    CHECK(d_separated(split, 0, 3, {}));

    const CausalGraph collider({{0, "a", true}, {1, "c", true}, {2, "b", true}}, {{0, 1}, {2, 1}});
    CHECK(d_separated(collider, 0, 2, {}));
    CHECK_FALSE(d_separated(collider, 0, 2, {1}));
}

TEST_CASE("ground-truth pair classes on the benchmark fixtures") {
    const CausalGraph a = fixture_graph("fig1a");
    const int x1 = by_label(a, "x1"), x2 = by_label(a, "x2"), x3 = by_label(a, "x3");
    CHECK(ground_truth_pair_class(a, x1, x2, observed_of(a)) == PairClass::visible_edge(x1, x2));
    CHECK(ground_truth_pair_class(a, x2, x3, observed_of(a)) == PairClass::invisible());

    const CausalGraph b = fixture_graph("fig1b");
    CHECK(ground_truth_pair_class(b, by_label(b, "x1"), by_label(b, "x2"), observed_of(b)) ==
          PairClass::visible_non_edge());

    // symmetry of the unordered variants, orientation of the ordered one
    for (const auto& name : fixture_names()) {
        const CausalGraph g = fixture_graph(name);
        const VertexSet obs = observed_of(g);
        for (size_t i = 0; i < obs.size(); ++i) {
            for (size_t j = i + 1; j < obs.size(); ++j) {
                const PairClass pc = ground_truth_pair_class(g, obs[i], obs[j], obs);
                const PairClass rev = ground_truth_pair_class(g, obs[j], obs[i], obs);
                CHECK(pc == rev);
                if (pc.kind == PairKind::VisibleEdge) CHECK(g.has_edge(pc.parent, pc.child));
            }
        }
    }
}

TEST_CASE("ancestor sets") {
    const CausalGraph a = fixture_graph("fig1a");
    CHECK(ancestors(a, by_label(a, "x2")) ==
          std::set<int>{by_label(a, "x1"), by_label(a, "x3"), by_label(a, "U1"), by_label(a, "U2")});

    const CausalGraph iso({{0, "a", true}}, {});
    CHECK(ancestors(iso, 0).empty());

    const CausalGraph chain({{0, "a", true}, {1, "b", true}, {2, "c", true}}, {{0, 1}, {1, 2}});
    CHECK(ancestors(chain, 2) == std::set<int>{0, 1});

    for (uint64_t seed = 0; seed < 40; ++seed) {
        const CausalGraph g = random_small_dag(seed, 7, 0.4);
        for (int v = 0; v < g.vertex_count(); ++v) CHECK(ancestors(g, v).count(v) == 0);
    }
}

TEST_CASE("graph json round trip and shipped fixture files") {
    for (const auto& name : fixture_names()) {
        const CausalGraph g = fixture_graph(name);
        CHECK(CausalGraph::from_json_string(g.to_json_string()) == g);

        const auto path = std::filesystem::path(CAMUV_SOURCE_DIR) / "fixtures" / (name + ".json");
        REQUIRE_MESSAGE(std::filesystem::exists(path), "missing fixture file " << path.string());
        CHECK(CausalGraph::load_json_file(path.string()) == g);
    }
}

TEST_CASE("ucp/ubp subset monotonicity and d-separation cross-check") {
    const auto mono = property_ucp_ubp_subset_monotonicity(120);
    CHECK_MESSAGE(mono.ok, mono.detail);
    const auto dsep = property_dsep_bruteforce_agreement(120);
    CHECK_MESSAGE(dsep.ok, dsep.detail);
}
