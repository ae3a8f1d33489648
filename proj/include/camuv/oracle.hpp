#pragma once

#include <set>

#include "camuv/graph.hpp"

namespace camuv {

// ids of external noises still present in a regression residual; always
// contains the regressed variable's own id
using NoiseSet = std::set<int>;

// Noise content of xi - G(m) under the optimal additive regression: G
// reproduces the contributions of parents of xi inside m and zeroes the rest,
// so n_k survives exactly when some directed path k -> ... -> p -> xi has its
// final parent p outside m. Hidden parents are never blockable.
NoiseSet residual_noise_set(const CausalGraph& g, int xi, const VertexSet& m);

// residuals are independent iff their noise sets are disjoint
bool oracle_residual_independent(const CausalGraph& g, int xi, const VertexSet& m, int xj,
                                 const VertexSet& n);

// conditional independence of observed variables == d-separation
bool oracle_ci(const CausalGraph& g, int a, int b, const VertexSet& z);

enum class QuantifierMode {
    Exhaustive,    // enumerate every admissible regression-set pair
    ParentPruned,  // restrict the search to observed parents of the endpoints
};

// subsets of universe with size <= max_size (all sizes when max_size < 0),
// ordered by size then lexicographically
std::vector<VertexSet> subsets_of(const VertexSet& universe, int max_size = -1);

// Exists m <= universe_m, n <= universe_n such that
//   residual(xi | m u base_m)  indep  residual(xj | n u base_n).
// The building block behind all quantified oracle queries below.
bool oracle_exists_independent(const CausalGraph& g, int xi, const VertexSet& universe_m,
                               const VertexSet& base_m, int xj, const VertexSet& universe_n,
                               const VertexSet& base_n, QuantifierMode mode = QuantifierMode::Exhaustive);

// For every m <= xprime \ {xi}, n <= xprime \ {xj} the residuals stay
// dependent (the all-regressions-fail pattern of an invisible pair).
bool oracle_always_dependent(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                             QuantifierMode mode = QuantifierMode::Exhaustive);

// Some m, n <= xprime \ {xi, xj} make the residuals independent (the pattern
// of a visible non-edge).
bool oracle_separable_excluding_pair(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                                     QuantifierMode mode = QuantifierMode::Exhaustive);

// Dependence for all m <= xprime \ {child, parent}, n <= xprime \ {parent},
// plus separability once the parent joins the child's regression set (the
// pattern of a visible edge parent -> child).
bool oracle_visible_parent_pattern(const CausalGraph& g, const VertexSet& xprime, int parent,
                                   int child, QuantifierMode mode = QuantifierMode::Exhaustive);

// Exists a cover q1 u q2 = helpers and m, n <= xprime \ {xi,xj} \ helpers with
//   residual(xi | m u q1 u (parent_in_m ? {xj} : {}))  indep  residual(xj | n u q2).
// Shared existence pattern of the helper-set characterizations.
bool oracle_separable_with_helpers(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                                   const VertexSet& helpers, bool parent_in_m,
                                   QuantifierMode mode = QuantifierMode::Exhaustive);

}  // namespace camuv
