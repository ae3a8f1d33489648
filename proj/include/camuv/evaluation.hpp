#pragma once

#include <string>

#include "camuv/discovery.hpp"
#include "camuv/graph.hpp"

namespace camuv {

struct MetricReport {
    double tp = 0.0, fp = 0.0, tn = 0.0, fn = 0.0;  // fractional under half credit
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    std::string task;
    bool degenerate = false;  // a vacuous precision/recall denominator occurred
};

// Ordered pairs (i,j) scored against true parenthood of column j over column
// i. An Unknown entry contributes the expected confusion of a base-rate
// random guess: 0.5*P/(P+N) to TP and FN, 0.5*N/(P+N) to TN and FP.
MetricReport score_adjacency(const TriAdjacency& predicted, const CausalGraph& truth);

// Ancestor relation: predicted positives are the closure of Edge entries and
// the certified-ancestor sets; certified non-ancestors, pairs opposing a
// predicted ancestor and fully determined matrices give determined
// negatives. Remaining pairs carry half credit, or count as plain negatives
// when strict is set.
MetricReport score_ancestors(const DiscoveryResult& predicted, const CausalGraph& truth,
                             bool strict = false);

}  // namespace camuv
