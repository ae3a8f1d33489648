#pragma once

#include <cstdint>

#include "camuv/graph.hpp"

namespace camuv::testsupport {

// Random ground-truth graph for the oracle suites: 4-5 observed vertices,
// 0-2 hidden vertices injected as confounders of observed pairs or mediators
// spliced into / bridged across observed pairs.
CausalGraph random_oracle_graph(uint64_t seed);

// Small random DAG for graph-level property checks; vertex count in
// [2, max_vertices], a random subset observed (at least two).
CausalGraph random_small_dag(uint64_t seed, int max_vertices, double edge_prob);

}  // namespace camuv::testsupport
