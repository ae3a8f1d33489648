#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace camuv {

struct Vertex {
    int id = 0;
    std::string label;
    bool observed = true;
};

// variables named by vertex id; sorted ascending, no duplicates
using VertexSet = std::vector<int>;

bool set_contains(const VertexSet& s, int v);
VertexSet set_sorted(VertexSet s);

// Immutable DAG over observed + hidden vertices. Vertex ids are dense
// integers 0..n-1; observed vertices map to dataset columns in id order.
class CausalGraph {
public:
    CausalGraph(std::vector<Vertex> vertices, std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const Vertex& vertex(int id) const { return vertices_.at(static_cast<size_t>(id)); }
    bool is_observed(int id) const { return vertex(id).observed; }
    const std::string& label(int id) const { return vertex(id).label; }
    std::optional<int> vertex_by_label(const std::string& label) const;

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& parents(int id) const { return parents_.at(static_cast<size_t>(id)); }
    const std::vector<int>& children(int id) const { return children_.at(static_cast<size_t>(id)); }
    bool has_edge(int parent, int child) const;

    // observed vertex ids ascending; position in this list == dataset column
    const std::vector<int>& observed_vertices() const { return observed_; }
    int observed_count() const { return static_cast<int>(observed_.size()); }
    int column_of(int vertex_id) const;
    int vertex_of_column(int column) const { return observed_.at(static_cast<size_t>(column)); }

    const std::vector<int>& topological_order() const { return topo_order_; }

    std::string to_json_string() const;
    static CausalGraph from_json_string(const std::string& text);
    static CausalGraph load_json_file(const std::string& path);
    void save_json_file(const std::string& path) const;

    bool operator==(const CausalGraph& other) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<int> observed_;
    std::vector<int> topo_order_;
};

enum class PairKind { VisibleEdge, VisibleNonEdge, Invisible };

// VisibleEdge carries the oriented relation parent -> child; the other two
// variants are symmetric in the pair.
struct PairClass {
    PairKind kind = PairKind::Invisible;
    int parent = -1;
    int child = -1;

    static PairClass visible_edge(int parent, int child) { return {PairKind::VisibleEdge, parent, child}; }
    static PairClass visible_non_edge() { return {PairKind::VisibleNonEdge, -1, -1}; }
    static PairClass invisible() { return {PairKind::Invisible, -1, -1}; }

    bool operator==(const PairClass& o) const {
        return kind == o.kind && parent == o.parent && child == o.child;
    }
};

std::string to_string(const PairClass& pc);

// all simple directed paths src -> ... -> dst as vertex sequences, in
// lexicographic order of the sequence
std::vector<std::vector<int>> directed_paths(const CausalGraph& g, int src, int dst);

// ancestors of v (transitive parents, excluding v)
std::set<int> ancestors(const CausalGraph& g, int v);
std::set<int> descendants(const CausalGraph& g, int v);

// unobserved causal path xi -> ... -> v_k -> xj with v_k outside xprime
bool has_ucp(const CausalGraph& g, int xi, int xj, const VertexSet& xprime);
// unobserved backdoor path xi <- v_k <- ... <- v_c -> ... -> v_l -> xj with
// v_k and v_l outside xprime; the apex may be observed and may coincide with
// v_k and/or v_l
bool has_ubp(const CausalGraph& g, int xi, int xj, const VertexSet& xprime);

bool d_separated(const CausalGraph& g, int a, int b, const VertexSet& z);

PairClass ground_truth_pair_class(const CausalGraph& g, int xi, int xj, const VertexSet& xprime);

}  // namespace camuv
