#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "camuv/graph.hpp"

namespace camuv {

// one structural term (x + shift)^exponent + offset on an edge parent -> child
struct EdgeTerm {
    double shift = 0.0;
    double offset = 0.0;
    int exponent = 2;  // >= 2, the additive-model class needs nonlinearity
};

struct ScmSpec {
    CausalGraph graph;
    std::map<std::pair<int, int>, EdgeTerm> edge_terms;  // keyed (parent, child)
    std::vector<double> noise_scale;                     // per vertex, positive
    uint64_t seed = 0;

    // shift, offset ~ U[-1,1], exponent uniform on {2,3}, noise scale U[0.5,1]
    static ScmSpec random_coefficients(CausalGraph graph, uint64_t seed);

    uint64_t hash() const;
};

struct Provenance {
    std::string generator;  // "ba", "er", "fixture:<name>", ...
    uint64_t seed = 0;
    uint64_t spec_hash = 0;
    int n_samples = 0;
    std::vector<int> observed_ids;
    std::string params;  // key=value summary of generator parameters

    std::string to_json_string() const;
};

struct Dataset {
    int n = 0;
    int p = 0;
    std::vector<std::vector<double>> columns;  // column-major, p columns of length n
    std::vector<std::string> labels;
    Provenance provenance;

    const std::vector<double>& column(int j) const { return columns.at(static_cast<size_t>(j)); }

    std::string to_csv() const;
    static Dataset from_csv(const std::string& text);
    static Dataset load_csv_file(const std::string& path);
    void save_csv_file(const std::string& path) const;
};

// Preferential-attachment DAG: every new vertex draws attachments_per_node
// distinct earlier vertices (degree-weighted) and receives an edge from each,
// so edges point from earlier-attached to later-attached. A seeded uniform
// subset of n_observed vertices is flagged observed.
CausalGraph sample_ba_graph(int n_nodes, int attachments_per_node, int n_observed, uint64_t seed);

// ER DAG over the observed vertices (edges oriented along a random
// topological order), then hidden structure is injected: each confounder pair
// gains a fresh hidden common parent; each mediator pair (a before b) routes
// a -> hidden -> b, replacing a direct edge a -> b when one exists.
CausalGraph sample_er_graph_with_hidden(int n_observed, double edge_prob, int n_confounder_pairs,
                                        int n_mediator_pairs, uint64_t seed);

// Ancestral sampling of Eq-style additive structural terms plus Gaussian
// noise; every vertex is standardized to zero mean / unit variance right
// after generation; only observed columns are returned.
Dataset sample_dataset(const ScmSpec& spec, int n_samples);

}  // namespace camuv
