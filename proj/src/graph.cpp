#include "camuv/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace camuv {

bool set_contains(const VertexSet& s, int v) {
    return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_sorted(VertexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

CausalGraph::CausalGraph(std::vector<Vertex> vertices, std::vector<std::pair<int, int>> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    const int n = static_cast<int>(vertices_.size());
    if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (const auto& v : vertices_) {
        if (v.id < 0 || v.id >= n) throw std::invalid_argument("vertex ids must be dense 0..n-1");
        if (seen[static_cast<size_t>(v.id)]) throw std::invalid_argument("duplicate vertex id");
        seen[static_cast<size_t>(v.id)] = true;
    }
    std::sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });

    parents_.assign(static_cast<size_t>(n), {});
    children_.assign(static_cast<size_t>(n), {});
    std::set<std::pair<int, int>> dedup;
    for (const auto& [p, c] : edges_) {
        if (p < 0 || p >= n || c < 0 || c >= n) throw std::invalid_argument("edge endpoint out of range");
        if (p == c) throw std::invalid_argument("self-loop");
        if (!dedup.insert({p, c}).second) throw std::invalid_argument("duplicate edge");
        parents_[static_cast<size_t>(c)].push_back(p);
        children_[static_cast<size_t>(p)].push_back(c);
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());
    std::sort(edges_.begin(), edges_.end());

    for (const auto& v : vertices_)
        if (v.observed) observed_.push_back(v.id);

    // Kahn's algorithm; doubles as the acyclicity check.
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v) indeg[static_cast<size_t>(v)] = static_cast<int>(parents_[static_cast<size_t>(v)].size());
    std::deque<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) q.push_back(v);
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        topo_order_.push_back(v);
        for (int c : children_[static_cast<size_t>(v)])
            if (--indeg[static_cast<size_t>(c)] == 0) q.push_back(c);
    }
    if (static_cast<int>(topo_order_.size()) != n) throw std::invalid_argument("edge relation has a cycle");
}

std::optional<int> CausalGraph::vertex_by_label(const std::string& label) const {
    for (const auto& v : vertices_)
        if (v.label == label) return v.id;
    return std::nullopt;
}

bool CausalGraph::has_edge(int parent, int child) const {
    const auto& ps = parents_.at(static_cast<size_t>(child));
    return std::binary_search(ps.begin(), ps.end(), parent);
}

int CausalGraph::column_of(int vertex_id) const {
    const auto it = std::lower_bound(observed_.begin(), observed_.end(), vertex_id);
    if (it == observed_.end() || *it != vertex_id) throw std::invalid_argument("vertex is not observed");
    return static_cast<int>(it - observed_.begin());
}

std::string CausalGraph::to_json_string() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : vertices_)
        j["vertices"].push_back({{"id", v.id}, {"label", v.label}, {"observed", v.observed}});
    j["edges"] = nlohmann::json::array();
    for (const auto& [p, c] : edges_) j["edges"].push_back({p, c});
    return j.dump(2);
}

CausalGraph CausalGraph::from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Vertex> vs;
    for (const auto& jv : j.at("vertices"))
        vs.push_back({jv.at("id").get<int>(), jv.at("label").get<std::string>(), jv.at("observed").get<bool>()});
    std::vector<std::pair<int, int>> es;
    for (const auto& je : j.at("edges")) es.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    return CausalGraph(std::move(vs), std::move(es));
}

CausalGraph CausalGraph::load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

void CausalGraph::save_json_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << to_json_string() << "\n";
}

bool CausalGraph::operator==(const CausalGraph& other) const {
    if (vertices_.size() != other.vertices_.size() || edges_ != other.edges_) return false;
    for (size_t i = 0; i < vertices_.size(); ++i) {
        const auto& a = vertices_[i];
        const auto& b = other.vertices_[i];
        if (a.id != b.id || a.label != b.label || a.observed != b.observed) return false;
    }
    return true;
}

std::string to_string(const PairClass& pc) {
    switch (pc.kind) {
        case PairKind::VisibleEdge:
            return "VisibleEdge(" + std::to_string(pc.parent) + "->" + std::to_string(pc.child) + ")";
        case PairKind::VisibleNonEdge:
            return "VisibleNonEdge";
        case PairKind::Invisible:
            return "Invisible";
    }
    return "?";
}

namespace {

void check_vertex(const CausalGraph& g, int v) {
    if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("unknown vertex id");
}

void directed_paths_dfs(const CausalGraph& g, int cur, int dst, std::vector<int>& path,
                        std::vector<bool>& on_path, std::vector<std::vector<int>>& out) {
    if (cur == dst) {
        out.push_back(path);
        return;
    }
    for (int c : g.children(cur)) {
        if (on_path[static_cast<size_t>(c)]) continue;
        on_path[static_cast<size_t>(c)] = true;
        path.push_back(c);
        directed_paths_dfs(g, c, dst, path, on_path, out);
        path.pop_back();
        on_path[static_cast<size_t>(c)] = false;
    }
}

// all simple undirected paths between a and b, as vertex sequences
void undirected_paths_dfs(const CausalGraph& g, int cur, int dst, std::vector<int>& path,
                          std::vector<bool>& on_path, std::vector<std::vector<int>>& out) {
    if (cur == dst) {
        out.push_back(path);
        return;
    }
    std::vector<int> nbrs = g.parents(cur);
    nbrs.insert(nbrs.end(), g.children(cur).begin(), g.children(cur).end());
    std::sort(nbrs.begin(), nbrs.end());
    for (int nb : nbrs) {
        if (on_path[static_cast<size_t>(nb)]) continue;
        on_path[static_cast<size_t>(nb)] = true;
        path.push_back(nb);
        undirected_paths_dfs(g, nb, dst, path, on_path, out);
        path.pop_back();
        on_path[static_cast<size_t>(nb)] = false;
    }
}

void check_pair_args(const CausalGraph& g, int xi, int xj, const VertexSet& xprime) {
    check_vertex(g, xi);
    check_vertex(g, xj);
    if (xi == xj) throw std::invalid_argument("pair endpoints must differ");
    for (int v : xprime) {
        check_vertex(g, v);
        if (!g.is_observed(v)) throw std::invalid_argument("xprime must contain observed vertices only");
    }
    if (!set_contains(xprime, xi) || !set_contains(xprime, xj))
        throw std::invalid_argument("pair endpoints must belong to xprime");
}

}  // namespace

std::vector<std::vector<int>> directed_paths(const CausalGraph& g, int src, int dst) {
    check_vertex(g, src);
    check_vertex(g, dst);
    if (src == dst) throw std::invalid_argument("src and dst must differ");
    std::vector<std::vector<int>> out;
    std::vector<int> path{src};
    std::vector<bool> on_path(static_cast<size_t>(g.vertex_count()), false);
    on_path[static_cast<size_t>(src)] = true;
    directed_paths_dfs(g, src, dst, path, on_path, out);
    return out;
}

std::set<int> ancestors(const CausalGraph& g, int v) {
    check_vertex(g, v);
    std::set<int> out;
    std::deque<int> q{v};
    while (!q.empty()) {
        const int cur = q.front();
        q.pop_front();
        for (int p : g.parents(cur))
            if (out.insert(p).second) q.push_back(p);
    }
    out.erase(v);
    return out;
}

std::set<int> descendants(const CausalGraph& g, int v) {
    check_vertex(g, v);
    std::set<int> out;
    std::deque<int> q{v};
    while (!q.empty()) {
        const int cur = q.front();
        q.pop_front();
        for (int c : g.children(cur))
            if (out.insert(c).second) q.push_back(c);
    }
    out.erase(v);
    return out;
}

bool has_ucp(const CausalGraph& g, int xi, int xj, const VertexSet& xprime) {
    check_pair_args(g, xi, xj, xprime);
    for (const auto& path : directed_paths(g, xi, xj)) {
        const int penultimate = path[path.size() - 2];
        if (!set_contains(xprime, penultimate)) return true;
    }
    return false;
}

bool has_ubp(const CausalGraph& g, int xi, int xj, const VertexSet& xprime) {
    check_pair_args(g, xi, xj, xprime);
    std::vector<std::vector<int>> paths;
    std::vector<int> path{xi};
    std::vector<bool> on_path(static_cast<size_t>(g.vertex_count()), false);
    on_path[static_cast<size_t>(xi)] = true;
    undirected_paths_dfs(g, xi, xj, path, on_path, paths);
    for (const auto& p : paths) {
        const size_t m = p.size();
        if (m < 3) continue;  // needs at least one vertex strictly between
        if (set_contains(xprime, p[1]) || set_contains(xprime, p[m - 2])) continue;
        // some apex position a with edges pointing away from p[a] toward both ends
        for (size_t a = 1; a + 1 < m; ++a) {
            bool ok = true;
            for (size_t t = 0; t < a && ok; ++t) ok = g.has_edge(p[t + 1], p[t]);
            for (size_t t = a; t + 1 < m && ok; ++t) ok = g.has_edge(p[t], p[t + 1]);
            if (ok) return true;
        }
    }
    return false;
}

bool d_separated(const CausalGraph& g, int a, int b, const VertexSet& z) {
    check_vertex(g, a);
    check_vertex(g, b);
    if (a == b) throw std::invalid_argument("endpoints must differ");
    for (int v : z) {
        check_vertex(g, v);
        if (v == a || v == b) throw std::invalid_argument("conditioning set must exclude the endpoints");
    }
    const size_t n = static_cast<size_t>(g.vertex_count());
    std::vector<bool> in_z(n, false);
    for (int v : z) in_z[static_cast<size_t>(v)] = true;

    // vertices that are in z or have a descendant in z (collider activation)
    std::vector<bool> anc_of_z(n, false);
    {
        std::deque<int> q;
        for (int v : z) {
            anc_of_z[static_cast<size_t>(v)] = true;
            q.push_back(v);
        }
        while (!q.empty()) {
            const int cur = q.front();
            q.pop_front();
            for (int p : g.parents(cur)) {
                if (!anc_of_z[static_cast<size_t>(p)]) {
                    anc_of_z[static_cast<size_t>(p)] = true;
                    q.push_back(p);
                }
            }
        }
    }

    // reachability over (vertex, arrival direction) states
    enum { kUp = 0, kDown = 1 };
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::deque<std::pair<int, int>> q{{a, kUp}};
    visited[static_cast<size_t>(a)][kUp] = true;
    while (!q.empty()) {
        const auto [v, dir] = q.front();
        q.pop_front();
        if (v == b) return false;
        const auto push = [&](int w, int d) {
            if (!visited[static_cast<size_t>(w)][d]) {
                visited[static_cast<size_t>(w)][d] = true;
                q.emplace_back(w, d);
            }
        };
        if (dir == kUp) {
            if (!in_z[static_cast<size_t>(v)]) {
                for (int p : g.parents(v)) push(p, kUp);
                for (int c : g.children(v)) push(c, kDown);
            }
        } else {
            if (!in_z[static_cast<size_t>(v)])
                for (int c : g.children(v)) push(c, kDown);
            if (anc_of_z[static_cast<size_t>(v)])
                for (int p : g.parents(v)) push(p, kUp);
        }
    }
    return true;
}

PairClass ground_truth_pair_class(const CausalGraph& g, int xi, int xj, const VertexSet& xprime) {
    check_pair_args(g, xi, xj, xprime);
    if (has_ubp(g, xi, xj, xprime) || has_ucp(g, xi, xj, xprime) || has_ucp(g, xj, xi, xprime))
        return PairClass::invisible();
    if (g.has_edge(xj, xi)) return PairClass::visible_edge(xj, xi);
    if (g.has_edge(xi, xj)) return PairClass::visible_edge(xi, xj);
    return PairClass::visible_non_edge();
}

}  // namespace camuv
