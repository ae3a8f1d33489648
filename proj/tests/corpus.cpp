#include "corpus.hpp"

#include <algorithm>

#include "camuv/rng.hpp"

namespace camuv::testsupport {

CausalGraph random_oracle_graph(uint64_t seed) {
    Rng rng(hash_mix(seed, 0x0c0a9u));
    const int n_obs = 4 + rng.below_int(2);

    std::vector<int> order(static_cast<size_t>(n_obs));
    for (int i = 0; i < n_obs; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<int> rank(static_cast<size_t>(n_obs));
    for (int i = 0; i < n_obs; ++i) rank[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_obs; ++i)
        for (int j = i + 1; j < n_obs; ++j)
            if (rng.uniform() < 0.35)
                edges.push_back(rank[static_cast<size_t>(i)] < rank[static_cast<size_t>(j)]
                                    ? std::make_pair(i, j)
                                    : std::make_pair(j, i));

    std::vector<Vertex> vertices;
    for (int v = 0; v < n_obs; ++v) vertices.push_back({v, "x" + std::to_string(v + 1), true});

    const int n_hidden = rng.below_int(3);
    int next_id = n_obs;
    for (int h = 0; h < n_hidden; ++h) {
        const int hid = next_id++;
        vertices.push_back({hid, "u" + std::to_string(h + 1), false});
        const bool confounder = rng.below(2) == 0;
        if (confounder) {
            const int a = rng.below_int(n_obs);
            int b = rng.below_int(n_obs - 1);
            if (b >= a) ++b;
            edges.emplace_back(hid, a);
            edges.emplace_back(hid, b);
            continue;
        }
        // mediator: splice a random observed edge when one exists, otherwise
        // bridge a random order-compatible pair
        std::vector<size_t> observed_edges;
        for (size_t e = 0; e < edges.size(); ++e)
            if (edges[e].first < n_obs && edges[e].second < n_obs) observed_edges.push_back(e);
        if (!observed_edges.empty() && rng.below(2) == 0) {
            const size_t pick = observed_edges[static_cast<size_t>(rng.below(observed_edges.size()))];
            const auto [src, dst] = edges[pick];
            edges.erase(edges.begin() + static_cast<long>(pick));
            edges.emplace_back(src, hid);
            edges.emplace_back(hid, dst);
        } else {
            const int a = rng.below_int(n_obs);
            int b = rng.below_int(n_obs - 1);
            if (b >= a) ++b;
            const int src = rank[static_cast<size_t>(a)] < rank[static_cast<size_t>(b)] ? a : b;
            const int dst = src == a ? b : a;
            edges.emplace_back(src, hid);
            edges.emplace_back(hid, dst);
        }
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return CausalGraph(std::move(vertices), std::move(edges));
}

CausalGraph random_small_dag(uint64_t seed, int max_vertices, double edge_prob) {
    Rng rng(hash_mix(seed, 0x5d49u));
    const int n = 2 + rng.below_int(max_vertices - 1);

    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<int> rank(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rank[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob)
                edges.push_back(rank[static_cast<size_t>(i)] < rank[static_cast<size_t>(j)]
                                    ? std::make_pair(i, j)
                                    : std::make_pair(j, i));

    // at least two observed vertices; ids stay dense, observed need not be a prefix
    std::vector<bool> observed(static_cast<size_t>(n), false);
    const auto chosen = rng.sample_without_replacement(n, 2 + rng.below_int(n - 1));
    for (int v : chosen) observed[static_cast<size_t>(v)] = true;

    std::vector<Vertex> vertices;
    int xs = 0, us = 0;
    for (int v = 0; v < n; ++v)
        vertices.push_back({v,
                            observed[static_cast<size_t>(v)] ? "x" + std::to_string(++xs) : "u" + std::to_string(++us),
                            observed[static_cast<size_t>(v)]});
    return CausalGraph(std::move(vertices), std::move(edges));
}

}  // namespace camuv::testsupport
