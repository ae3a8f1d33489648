#include "camuv/evaluation.hpp"

#include <stdexcept>

namespace camuv {

namespace {

void finalize(MetricReport& r) {
    if (r.tp + r.fp > 0.0) {
        r.precision = r.tp / (r.tp + r.fp);
    } else {
        r.precision = 1.0;
        r.degenerate = true;
    }
    if (r.tp + r.fn > 0.0) {
        r.recall = r.tp / (r.tp + r.fn);
    } else {
        r.recall = 1.0;
        r.degenerate = true;
    }
    r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
}

}  // namespace

MetricReport score_adjacency(const TriAdjacency& predicted, const CausalGraph& truth) {
    const int p = predicted.size();
    if (p != truth.observed_count()) throw std::invalid_argument("variable count mismatch");

    int pos = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j && truth.has_edge(truth.vertex_of_column(j), truth.vertex_of_column(i))) ++pos;
    const int total = p * (p - 1);
    const int neg = total - pos;
    const double frac_pos = total > 0 ? static_cast<double>(pos) / total : 0.0;
    const double frac_neg = total > 0 ? static_cast<double>(neg) / total : 0.0;

    MetricReport r;
    r.task = "adjacency";
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            const bool truth_edge = truth.has_edge(truth.vertex_of_column(j), truth.vertex_of_column(i));
            switch (predicted.get(i, j)) {
                case Tri::Edge:
                    (truth_edge ? r.tp : r.fp) += 1.0;
                    break;
                case Tri::NoEdge:
                    (truth_edge ? r.fn : r.tn) += 1.0;
                    break;
                case Tri::Unknown:
                    r.tp += 0.5 * frac_pos;
                    r.fn += 0.5 * frac_pos;
                    r.tn += 0.5 * frac_neg;
                    r.fp += 0.5 * frac_neg;
                    break;
            }
        }
    }
    finalize(r);
    return r;
}

MetricReport score_ancestors(const DiscoveryResult& predicted, const CausalGraph& truth, bool strict) {
    const int p = predicted.adjacency.size();
    if (p != truth.observed_count()) throw std::invalid_argument("variable count mismatch");

    const std::set<std::pair<int, int>> positives = predicted.ancestor_closure();
    const bool everything_determined = predicted.adjacency.fully_determined();

    std::vector<std::set<int>> true_anc(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i)
        for (int a : ancestors(truth, truth.vertex_of_column(i)))
            if (truth.is_observed(a)) true_anc[static_cast<size_t>(i)].insert(truth.column_of(a));

    MetricReport r;
    r.task = "ancestor";
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            const bool truth_anc = true_anc[static_cast<size_t>(i)].count(j) > 0;
            if (positives.count({i, j})) {
                (truth_anc ? r.tp : r.fp) += 1.0;
                continue;
            }
            const bool determined_negative = predicted.non_ancestors_found[static_cast<size_t>(i)].count(j) > 0 ||
                                             positives.count({j, i}) > 0 || everything_determined;
            if (determined_negative || strict) {
                (truth_anc ? r.fn : r.tn) += 1.0;
            } else {
                if (truth_anc) {
                    r.tp += 0.5;
                    r.fn += 0.5;
                } else {
                    r.tn += 0.5;
                    r.fp += 0.5;
                }
            }
        }
    }
    finalize(r);
    return r;
}

}  // namespace camuv
