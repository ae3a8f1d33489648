#include "camuv/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace camuv {

namespace {

void check_regression_args(const CausalGraph& g, int xi, const VertexSet& m) {
    if (xi < 0 || xi >= g.vertex_count()) throw std::invalid_argument("unknown vertex id");
    if (!g.is_observed(xi)) throw std::invalid_argument("regressed variable must be observed");
    for (int v : m) {
        if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("unknown vertex id in regression set");
        if (!g.is_observed(v)) throw std::invalid_argument("regression set must be observed");
        if (v == xi) throw std::invalid_argument("regression set must not contain the regressed variable");
    }
}

VertexSet set_minus(const VertexSet& s, std::initializer_list<int> drop) {
    VertexSet out;
    for (int v : s)
        if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
    return out;
}

VertexSet set_union(VertexSet a, const VertexSet& b) {
    a.insert(a.end(), b.begin(), b.end());
    return set_sorted(std::move(a));
}

VertexSet observed_parents_of_pair(const CausalGraph& g, int xi, int xj) {
    VertexSet out;
    for (int p : g.parents(xi))
        if (g.is_observed(p)) out.push_back(p);
    for (int p : g.parents(xj))
        if (g.is_observed(p)) out.push_back(p);
    return set_sorted(std::move(out));
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

NoiseSet residual_noise_set(const CausalGraph& g, int xi, const VertexSet& m) {
    check_regression_args(g, xi, m);
    NoiseSet out{xi};
    for (int p : g.parents(xi)) {
        if (g.is_observed(p) && set_contains(m, p)) continue;
        out.insert(p);
        for (int a : ancestors(g, p)) out.insert(a);
    }
    return out;
}

bool oracle_residual_independent(const CausalGraph& g, int xi, const VertexSet& m, int xj,
                                 const VertexSet& n) {
    if (xi == xj) throw std::invalid_argument("residual pair endpoints must differ");
    const NoiseSet a = residual_noise_set(g, xi, m);
    const NoiseSet b = residual_noise_set(g, xj, n);
    for (int v : a)
        if (b.count(v)) return false;
    return true;
}

bool oracle_ci(const CausalGraph& g, int a, int b, const VertexSet& z) {
    return d_separated(g, a, b, z);
}

std::vector<VertexSet> subsets_of(const VertexSet& universe, int max_size) {
    const int n = static_cast<int>(universe.size());
    const int cap = max_size < 0 ? n : std::min(max_size, n);
    std::vector<VertexSet> out;
    for (uint32_t bits = 0; bits < (1u << n); ++bits) {
        if (__builtin_popcount(bits) > cap) continue;
        VertexSet s;
        for (int i = 0; i < n; ++i)
            if (bits & (1u << i)) s.push_back(universe[static_cast<size_t>(i)]);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool oracle_exists_independent(const CausalGraph& g, int xi, const VertexSet& universe_m,
                               const VertexSet& base_m, int xj, const VertexSet& universe_n,
                               const VertexSet& base_n, QuantifierMode mode) {
    VertexSet um = universe_m;
    VertexSet un = universe_n;
    if (mode == QuantifierMode::ParentPruned) {
        const VertexSet parents = observed_parents_of_pair(g, xi, xj);
        um = intersect(um, parents);
        un = intersect(un, parents);
    }
    for (const auto& m : subsets_of(um)) {
        const VertexSet full_m = set_union(m, base_m);
        for (const auto& n : subsets_of(un)) {
            if (oracle_residual_independent(g, xi, full_m, xj, set_union(n, base_n))) return true;
        }
    }
    return false;
}

bool oracle_always_dependent(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                             QuantifierMode mode) {
    return !oracle_exists_independent(g, xi, set_minus(xprime, {xi}), {}, xj,
                                      set_minus(xprime, {xj}), {}, mode);
}

bool oracle_separable_excluding_pair(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                                     QuantifierMode mode) {
    const VertexSet range = set_minus(xprime, {xi, xj});
    return oracle_exists_independent(g, xi, range, {}, xj, range, {}, mode);
}

bool oracle_visible_parent_pattern(const CausalGraph& g, const VertexSet& xprime, int parent,
                                   int child, QuantifierMode mode) {
    // dependence must persist while the parent stays out of the child's set
    const bool dependent = !oracle_exists_independent(
        g, child, set_minus(xprime, {child, parent}), {}, parent, set_minus(xprime, {parent}), {}, mode);
    if (!dependent) return false;
    // and independence must emerge for some set containing the parent
    return oracle_exists_independent(g, child, set_minus(xprime, {child}), {}, parent,
                                     set_minus(xprime, {child, parent}), {}, mode);
}

bool oracle_separable_with_helpers(const CausalGraph& g, const VertexSet& xprime, int xi, int xj,
                                   const VertexSet& helpers, bool parent_in_m, QuantifierMode mode) {
    VertexSet range = set_minus(xprime, {xi, xj});
    for (int h : helpers) range = set_minus(range, {h});
    for (const auto& q1 : subsets_of(helpers)) {
        for (const auto& q2 : subsets_of(helpers)) {
            if (set_union(q1, q2) != helpers) continue;
            VertexSet base_m = q1;
            if (parent_in_m) base_m = set_union(base_m, {xj});
            if (oracle_exists_independent(g, xi, range, base_m, xj, range, q2, mode)) return true;
        }
    }
    return false;
}

}  // namespace camuv
