#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "camuv/engine.hpp"

namespace camuv {

enum class Tri : uint8_t { NoEdge = 0, Edge = 1, Unknown = 2 };

// p x p matrix over {Edge, NoEdge, Unknown}; entry (i,j) == Edge means x_j is
// inferred to be a parent of x_i. The diagonal is fixed at NoEdge. Entries
// only ever move Unknown -> determined.
class TriAdjacency {
public:
    explicit TriAdjacency(int p);

    int size() const { return p_; }
    Tri get(int i, int j) const;
    void set(int i, int j, Tri value);

    bool fully_determined() const;
    int unknown_count() const;

    // every pair is (Edge,NoEdge), (NoEdge,Edge), (NoEdge,NoEdge) or
    // (Unknown,Unknown); holds for cam_uv output and the visibility snapshot
    bool pair_states_symmetric() const;
    // weaker form for refined matrices: an Edge always faces a NoEdge, but a
    // NoEdge may face an Unknown
    bool pair_states_consistent() const;

    bool operator==(const TriAdjacency& o) const { return p_ == o.p_ && cells_ == o.cells_; }

private:
    void check_indices(int i, int j) const;

    int p_ = 0;
    std::vector<Tri> cells_;
};

struct SearchConfig {
    double alpha = 0.1;
    int max_parents = 3;  // cap on every enumerated regression-set size
    std::string ci_test = "knn";
    uint64_t seed = 0;
    bool cold_start = false;  // skip cam_uv, start from all-Unknown
    // forbidden_parents[i][j] true forbids inferring x_j as a parent of x_i;
    // empty means no prior knowledge
    std::vector<std::vector<bool>> forbidden_parents;

    bool edge_allowed(int child, int parent) const;
};

struct DiscoveryResult {
    TriAdjacency adjacency;   // final matrix including refinements on invisible pairs
    TriAdjacency visibility;  // snapshot after the visibility phase (the sound/complete classification)
    std::vector<std::set<int>> ancestors_found;              // M_i: certified ancestors of x_i
    std::vector<std::set<int>> non_ancestors_found;          // H_i: certified non-ancestors of x_i
    std::vector<std::set<std::pair<int, int>>> parent_of_pair;  // C_k: x_k parents one of each pair

    double alpha = 0.1;
    int max_parents = 3;
    std::string method;
    uint64_t seed = 0;

    explicit DiscoveryResult(int p);

    // certified ancestor relation: Edge entries plus M_i, transitively closed;
    // contains (i, j) when x_j is an ancestor of x_i
    std::set<std::pair<int, int>> ancestor_closure() const;

    std::string to_json_string() const;
    static DiscoveryResult from_json_string(const std::string& text);

    bool operator==(const DiscoveryResult& o) const;
};

// Baseline search. Phase 1 grows candidate-parent sets by scanning variable
// subsets of increasing size for a sink whose residual separates from the
// rest; phase 2 prunes redundant members; pairs are then classified from the
// accumulated sets.
TriAdjacency cam_uv(TestEngine& engine, const SearchConfig& cfg);

// Full search: cam_uv (or cold start), then the visibility refinement, the
// helper-set scan, the conditional-independence phase and the parent
// propagation fixpoint.
DiscoveryResult cam_uvx(TestEngine& engine, const SearchConfig& cfg);

// wraps a bare cam_uv matrix so both algorithms score through one interface
DiscoveryResult as_discovery_result(TriAdjacency a, const SearchConfig& cfg, const std::string& method);

}  // namespace camuv
