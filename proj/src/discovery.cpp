#include "camuv/discovery.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <stdexcept>

#include "camuv/oracle.hpp"
#include "json.hpp"

namespace camuv {

TriAdjacency::TriAdjacency(int p) : p_(p) {
    if (p < 2) throw std::invalid_argument("need at least two variables");
    cells_.assign(static_cast<size_t>(p) * static_cast<size_t>(p), Tri::Unknown);
    for (int i = 0; i < p; ++i) cells_[static_cast<size_t>(i) * static_cast<size_t>(p) + static_cast<size_t>(i)] = Tri::NoEdge;
}

void TriAdjacency::check_indices(int i, int j) const {
    if (i < 0 || i >= p_ || j < 0 || j >= p_) throw std::invalid_argument("index out of range");
}

Tri TriAdjacency::get(int i, int j) const {
    check_indices(i, j);
    return cells_[static_cast<size_t>(i) * static_cast<size_t>(p_) + static_cast<size_t>(j)];
}

void TriAdjacency::set(int i, int j, Tri value) {
    check_indices(i, j);
    if (i == j) throw std::invalid_argument("diagonal is fixed");
    Tri& cell = cells_[static_cast<size_t>(i) * static_cast<size_t>(p_) + static_cast<size_t>(j)];
    if (cell != Tri::Unknown && cell != value)
        throw std::logic_error("tri-adjacency entries may only move Unknown -> determined");
    cell = value;
}

bool TriAdjacency::fully_determined() const { return unknown_count() == 0; }

int TriAdjacency::unknown_count() const {
    int c = 0;
    for (Tri t : cells_)
        if (t == Tri::Unknown) ++c;
    return c;
}

bool TriAdjacency::pair_states_symmetric() const {
    for (int i = 0; i < p_; ++i) {
        for (int j = i + 1; j < p_; ++j) {
            const Tri a = get(i, j);
            const Tri b = get(j, i);
            const bool ok = (a == Tri::Edge && b == Tri::NoEdge) || (a == Tri::NoEdge && b == Tri::Edge) ||
                            (a == Tri::NoEdge && b == Tri::NoEdge) || (a == Tri::Unknown && b == Tri::Unknown);
            if (!ok) return false;
        }
    }
    return true;
}

bool TriAdjacency::pair_states_consistent() const {
    for (int i = 0; i < p_; ++i) {
        for (int j = i + 1; j < p_; ++j) {
            const Tri a = get(i, j);
            const Tri b = get(j, i);
            if (a == Tri::Edge && b != Tri::NoEdge) return false;
            if (b == Tri::Edge && a != Tri::NoEdge) return false;
        }
    }
    return true;
}

bool SearchConfig::edge_allowed(int child, int parent) const {
    if (forbidden_parents.empty()) return true;
    return !forbidden_parents.at(static_cast<size_t>(child)).at(static_cast<size_t>(parent));
}

DiscoveryResult::DiscoveryResult(int p)
    : adjacency(p),
      visibility(p),
      ancestors_found(static_cast<size_t>(p)),
      non_ancestors_found(static_cast<size_t>(p)),
      parent_of_pair(static_cast<size_t>(p)) {}

std::set<std::pair<int, int>> DiscoveryResult::ancestor_closure() const {
    const int p = adjacency.size();
    std::vector<std::set<int>> anc(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j)
            if (i != j && adjacency.get(i, j) == Tri::Edge) anc[static_cast<size_t>(i)].insert(j);
        for (int j : ancestors_found[static_cast<size_t>(i)]) anc[static_cast<size_t>(i)].insert(j);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < p; ++i) {
            std::set<int> grown = anc[static_cast<size_t>(i)];
            for (int m : anc[static_cast<size_t>(i)])
                grown.insert(anc[static_cast<size_t>(m)].begin(), anc[static_cast<size_t>(m)].end());
            grown.erase(i);
            if (grown != anc[static_cast<size_t>(i)]) {
                anc[static_cast<size_t>(i)] = std::move(grown);
                changed = true;
            }
        }
    }
    std::set<std::pair<int, int>> out;
    for (int i = 0; i < p; ++i)
        for (int j : anc[static_cast<size_t>(i)]) out.insert({i, j});
    return out;
}

namespace {

nlohmann::json tri_to_json(const TriAdjacency& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < a.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < a.size(); ++j) {
            switch (a.get(i, j)) {
                case Tri::Edge: row.push_back(1); break;
                case Tri::NoEdge: row.push_back(0); break;
                case Tri::Unknown: row.push_back(nullptr); break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

TriAdjacency tri_from_json(const nlohmann::json& rows) {
    const int p = static_cast<int>(rows.size());
    TriAdjacency a(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const auto& cell = rows.at(static_cast<size_t>(i)).at(static_cast<size_t>(j));
            if (i == j) continue;
            if (cell.is_null()) continue;
            a.set(i, j, cell.get<int>() == 1 ? Tri::Edge : Tri::NoEdge);
        }
    }
    return a;
}

}  // namespace

std::string DiscoveryResult::to_json_string() const {
    nlohmann::json j;
    j["p"] = adjacency.size();
    j["A"] = tri_to_json(adjacency);
    j["visibility"] = tri_to_json(visibility);
    j["M"] = nlohmann::json::array();
    j["H"] = nlohmann::json::array();
    j["C"] = nlohmann::json::array();
    for (const auto& s : ancestors_found) j["M"].push_back(s);
    for (const auto& s : non_ancestors_found) j["H"].push_back(s);
    for (const auto& pairs : parent_of_pair) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [a, b] : pairs) out.push_back({a, b});
        j["C"].push_back(std::move(out));
    }
    j["alpha"] = alpha;
    j["max_parents"] = max_parents;
    j["method"] = method;
    j["seed"] = seed;
    return j.dump(2);
}

DiscoveryResult DiscoveryResult::from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int p = j.at("p").get<int>();
    DiscoveryResult r(p);
    r.adjacency = tri_from_json(j.at("A"));
    r.visibility = tri_from_json(j.at("visibility"));
    for (int i = 0; i < p; ++i) {
        for (const auto& v : j.at("M").at(static_cast<size_t>(i))) r.ancestors_found[static_cast<size_t>(i)].insert(v.get<int>());
        for (const auto& v : j.at("H").at(static_cast<size_t>(i))) r.non_ancestors_found[static_cast<size_t>(i)].insert(v.get<int>());
        for (const auto& pr : j.at("C").at(static_cast<size_t>(i)))
            r.parent_of_pair[static_cast<size_t>(i)].insert({pr.at(0).get<int>(), pr.at(1).get<int>()});
    }
    r.alpha = j.at("alpha").get<double>();
    r.max_parents = j.at("max_parents").get<int>();
    r.method = j.at("method").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    return r;
}

bool DiscoveryResult::operator==(const DiscoveryResult& o) const {
    return adjacency == o.adjacency && visibility == o.visibility && ancestors_found == o.ancestors_found &&
           non_ancestors_found == o.non_ancestors_found && parent_of_pair == o.parent_of_pair;
}

namespace {

using Columns = std::vector<int>;

Columns all_columns_except(int p, std::initializer_list<int> drop) {
    Columns out;
    for (int v = 0; v < p; ++v)
        if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
    return out;
}

Columns with_member(Columns s, int v) {
    s.insert(std::lower_bound(s.begin(), s.end(), v), v);
    return s;
}

Columns minus_member(const Columns& s, int v) {
    Columns out;
    for (int x : s)
        if (x != v) out.push_back(x);
    return out;
}

Columns to_columns(const std::set<int>& s) { return Columns(s.begin(), s.end()); }

// lexicographic t-subsets of {0..p-1}
std::vector<Columns> combinations(int p, int t) {
    std::vector<Columns> out;
    Columns idx(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i) idx[static_cast<size_t>(i)] = i;
    while (true) {
        out.push_back(idx);
        int pos = t - 1;
        while (pos >= 0 && idx[static_cast<size_t>(pos)] == p - t + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<size_t>(pos)];
        for (int q = pos + 1; q < t; ++q) idx[static_cast<size_t>(q)] = idx[static_cast<size_t>(q - 1)] + 1;
    }
    return out;
}

struct SearchState {
    TestEngine& engine;
    const SearchConfig& cfg;
    int p;
    TriAdjacency a;
    std::vector<std::set<int>> anc_found;      // M_i
    std::vector<std::set<int>> nonanc_found;   // H_i
    std::vector<std::set<std::pair<int, int>>> pair_claims;  // C_k

    SearchState(TestEngine& eng, const SearchConfig& c, TriAdjacency init)
        : engine(eng), cfg(c), p(init.size()), a(std::move(init)),
          anc_found(static_cast<size_t>(p)), nonanc_found(static_cast<size_t>(p)),
          pair_claims(static_cast<size_t>(p)) {}

    bool indep(double pvalue) const { return pvalue > cfg.alpha; }

    double res_pv(int xi, const Columns& m, int xj, const Columns& n) {
        return engine.residual_independence_pvalue(xi, m, xj, n);
    }

    std::set<int> certified_ancestors(int i) const {
        std::set<int> out;
        std::deque<int> queue{i};
        std::vector<bool> seen(static_cast<size_t>(p), false);
        seen[static_cast<size_t>(i)] = true;
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            auto absorb = [&](int v) {
                if (!seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = true;
                    out.insert(v);
                    queue.push_back(v);
                }
            };
            for (int j = 0; j < p; ++j)
                if (j != cur && a.get(cur, j) == Tri::Edge) absorb(j);
            for (int j : anc_found[static_cast<size_t>(cur)]) absorb(j);
        }
        out.erase(i);
        return out;
    }

    void check_visible(int i, int j);
    void check_on_path(int i, int j);
    void check_ci_fixpoint(const std::vector<std::pair<int, int>>& ordered_pairs);
    void check_parent_invi();
};

void SearchState::check_visible(int i, int j) {
    Columns q;
    for (int k = 0; k < p; ++k) {
        if (k == i || k == j) continue;
        if (a.get(j, k) == Tri::Unknown || a.get(i, k) == Tri::Unknown ||
            a.get(i, k) == Tri::Edge || a.get(j, k) == Tri::Edge)
            q.push_back(k);
    }

    bool i_not_parent = false;
    bool j_not_parent = false;
    const auto subsets = subsets_of(q, cfg.max_parents);
    for (const auto& m : subsets) {
        for (const auto& n : subsets) {
            if (indep(res_pv(i, m, j, n))) {
                a.set(i, j, Tri::NoEdge);
                a.set(j, i, Tri::NoEdge);
                return;
            }
            if (!i_not_parent && indep(res_pv(i, with_member(m, j), j, n))) i_not_parent = true;
            if (!j_not_parent && indep(res_pv(i, m, j, with_member(n, i)))) j_not_parent = true;
            if (i_not_parent && j_not_parent) {
                a.set(i, j, Tri::NoEdge);
                a.set(j, i, Tri::NoEdge);
                return;
            }
        }
    }
    if (i_not_parent && cfg.edge_allowed(i, j)) {
        a.set(i, j, Tri::Edge);
        a.set(j, i, Tri::NoEdge);
    } else if (j_not_parent && cfg.edge_allowed(j, i)) {
        a.set(j, i, Tri::Edge);
        a.set(i, j, Tri::NoEdge);
    }
}

void SearchState::check_on_path(int i, int j) {
    for (int k = 0; k < p; ++k) {
        if (k == i || k == j) continue;
        if (a.get(i, k) != Tri::Unknown && a.get(j, k) != Tri::Unknown) continue;

        bool is_on_path = true;
        for (const auto& m : subsets_of(all_columns_except(p, {i, k}), cfg.max_parents)) {
            for (const auto& n : subsets_of(all_columns_except(p, {j, k}), cfg.max_parents)) {
                if (indep(res_pv(i, m, j, n))) {
                    is_on_path = false;
                    break;
                }
            }
            if (!is_on_path) break;
        }
        if (!is_on_path) continue;

        pair_claims[static_cast<size_t>(k)].insert({std::min(i, j), std::max(i, j)});
        if (a.get(i, j) == Tri::Edge) {
            anc_found[static_cast<size_t>(i)].insert(k);
            nonanc_found[static_cast<size_t>(k)].insert(i);
            if (a.get(k, i) == Tri::Unknown) a.set(k, i, Tri::NoEdge);
        } else if (a.get(j, i) == Tri::Edge) {
            anc_found[static_cast<size_t>(j)].insert(k);
            nonanc_found[static_cast<size_t>(k)].insert(j);
            if (a.get(k, j) == Tri::Unknown) a.set(k, j, Tri::NoEdge);
        }
    }
}

void SearchState::check_ci_fixpoint(const std::vector<std::pair<int, int>>& ordered_pairs) {
    // Run to a fixpoint so the outcome does not depend on the pair order:
    // every application is sound on its own, and firing only ever adds facts.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [i, j] : ordered_pairs) {
            if (nonanc_found[static_cast<size_t>(i)].count(j)) continue;
            for (int k : certified_ancestors(i)) {
                if (k == i || k == j) continue;
                if (indep(engine.conditional_independence_pvalue(k, j, {i}))) {
                    nonanc_found[static_cast<size_t>(i)].insert(j);
                    if (a.get(i, j) == Tri::Unknown) a.set(i, j, Tri::NoEdge);
                    anc_found[static_cast<size_t>(j)].insert(i);
                    changed = true;
                    break;
                }
            }
        }
    }
}

void SearchState::check_parent_invi() {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = 0; k < p; ++k) {
            for (const auto& [u, v] : pair_claims[static_cast<size_t>(k)]) {
                const std::pair<int, int> orders[2] = {{u, v}, {v, u}};
                for (const auto& [i, j] : orders) {
                    if (a.get(j, k) != Tri::Unknown) continue;
                    if (!nonanc_found[static_cast<size_t>(i)].count(k) && a.get(i, k) != Tri::NoEdge) continue;
                    if (!cfg.edge_allowed(j, k)) continue;
                    a.set(j, k, Tri::Edge);
                    if (a.get(k, j) == Tri::Unknown) a.set(k, j, Tri::NoEdge);
                    changed = true;
                }
            }
        }
    }
}

}  // namespace

TriAdjacency cam_uv(TestEngine& engine, const SearchConfig& cfg) {
    const int p = engine.variable_count();
    if (p < 2) throw std::invalid_argument("need at least two variables");
    SearchState st(engine, cfg, TriAdjacency(p));

    std::vector<std::set<int>> cand(static_cast<size_t>(p));  // candidate parents per variable

    // Phase 1: grow candidate sets, scanning subset sizes upward and
    // re-scanning a size until it stabilizes.
    const int t_max = std::min(p, cfg.max_parents + 1);
    for (int t = 2; t <= t_max; ++t) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& k_set : combinations(p, t)) {
                int best_b = -1;
                double best_min = -std::numeric_limits<double>::infinity();
                for (int b : k_set) {
                    Columns reg = to_columns(cand[static_cast<size_t>(b)]);
                    for (int other : k_set)
                        if (other != b && !std::binary_search(reg.begin(), reg.end(), other))
                            reg = with_member(reg, other);
                    double min_pv = std::numeric_limits<double>::infinity();
                    for (int other : k_set) {
                        if (other == b) continue;
                        min_pv = std::min(min_pv, st.res_pv(b, reg, other, to_columns(cand[static_cast<size_t>(other)])));
                    }
                    if (min_pv > best_min) {
                        best_min = min_pv;
                        best_b = b;
                    }
                }
                if (best_b >= 0 && best_min > cfg.alpha) {
                    for (int other : k_set) {
                        if (other != best_b && cand[static_cast<size_t>(best_b)].insert(other).second) changed = true;
                    }
                }
            }
        }
    }

    // Phase 2: drop members whose removal keeps the residuals independent.
    for (int i = 0; i < p; ++i) {
        const std::set<int> snapshot = cand[static_cast<size_t>(i)];
        for (int m : snapshot) {
            Columns reduced = to_columns(cand[static_cast<size_t>(i)]);
            reduced = minus_member(reduced, m);
            if (st.indep(st.res_pv(i, reduced, m, to_columns(cand[static_cast<size_t>(m)]))))
                cand[static_cast<size_t>(i)].erase(m);
        }
    }

    // Pair classification from the accumulated sets.
    TriAdjacency a(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const Columns mi = minus_member(to_columns(cand[static_cast<size_t>(i)]), j);
            const Columns mj = minus_member(to_columns(cand[static_cast<size_t>(j)]), i);
            if (st.indep(st.res_pv(i, mi, j, mj))) {
                a.set(i, j, Tri::NoEdge);
                a.set(j, i, Tri::NoEdge);
                continue;
            }
            if (cand[static_cast<size_t>(i)].count(j) && cfg.edge_allowed(i, j) &&
                st.indep(st.res_pv(i, to_columns(cand[static_cast<size_t>(i)]), j, mj))) {
                a.set(i, j, Tri::Edge);
                a.set(j, i, Tri::NoEdge);
                continue;
            }
            if (cand[static_cast<size_t>(j)].count(i) && cfg.edge_allowed(j, i) &&
                st.indep(st.res_pv(j, to_columns(cand[static_cast<size_t>(j)]), i, mi))) {
                a.set(j, i, Tri::Edge);
                a.set(i, j, Tri::NoEdge);
                continue;
            }
        }
    }
    return a;
}

DiscoveryResult cam_uvx(TestEngine& engine, const SearchConfig& cfg) {
    const int p = engine.variable_count();
    TriAdjacency init = cfg.cold_start ? TriAdjacency(p) : cam_uv(engine, cfg);
    if (!init.pair_states_symmetric()) throw std::logic_error("cam_uv produced an inconsistent matrix");

    SearchState st(engine, cfg, std::move(init));

    // visibility refinement over the pairs left unresolved
    std::vector<std::pair<int, int>> unresolved;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (st.a.get(i, j) == Tri::Unknown && st.a.get(j, i) == Tri::Unknown) unresolved.push_back({i, j});
    for (const auto& [i, j] : unresolved) st.check_visible(i, j);
    if (!st.a.pair_states_symmetric()) throw std::logic_error("visibility phase broke pair symmetry");

    DiscoveryResult result(p);
    result.visibility = st.a;

    // helper-set scan over the determined pairs
    std::vector<std::pair<int, int>> determined;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (st.a.get(i, j) != Tri::Unknown && st.a.get(j, i) != Tri::Unknown) determined.push_back({i, j});
    for (const auto& [i, j] : determined) st.check_on_path(i, j);
    if (!st.a.pair_states_consistent()) throw std::logic_error("helper-set phase broke pair consistency");

    // conditional-independence phase over pairs still fully unknown, both orders
    std::vector<std::pair<int, int>> still_unknown;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j && st.a.get(i, j) == Tri::Unknown && st.a.get(j, i) == Tri::Unknown)
                still_unknown.push_back({i, j});
    st.check_ci_fixpoint(still_unknown);
    if (!st.a.pair_states_consistent()) throw std::logic_error("ci phase broke pair consistency");

    st.check_parent_invi();
    if (!st.a.pair_states_consistent()) throw std::logic_error("parent propagation broke pair consistency");

    result.adjacency = st.a;
    result.ancestors_found = st.anc_found;
    result.non_ancestors_found = st.nonanc_found;
    result.parent_of_pair = st.pair_claims;
    result.alpha = cfg.alpha;
    result.max_parents = cfg.max_parents;
    result.method = cfg.cold_start ? "cam_uvx_coldstart" : "cam_uvx";
    result.seed = cfg.seed;
    return result;
}

DiscoveryResult as_discovery_result(TriAdjacency a, const SearchConfig& cfg, const std::string& method) {
    DiscoveryResult r(a.size());
    r.visibility = a;
    r.adjacency = std::move(a);
    r.alpha = cfg.alpha;
    r.max_parents = cfg.max_parents;
    r.method = method;
    r.seed = cfg.seed;
    return r;
}

}  // namespace camuv
