#include "camuv/engine.hpp"

#include "camuv/oracle.hpp"

namespace camuv {

OracleEngine::OracleEngine(CausalGraph graph) : graph_(std::move(graph)) {}

VertexSet OracleEngine::to_vertices(const std::vector<int>& columns) const {
    VertexSet out;
    out.reserve(columns.size());
    for (int c : columns) out.push_back(graph_.vertex_of_column(c));
    return set_sorted(std::move(out));
}

double OracleEngine::residual_independence_pvalue(int xi, const std::vector<int>& m, int xj,
                                                  const std::vector<int>& n) {
    const bool indep = oracle_residual_independent(graph_, graph_.vertex_of_column(xi), to_vertices(m),
                                                   graph_.vertex_of_column(xj), to_vertices(n));
    return indep ? 1.0 : 0.0;
}

double OracleEngine::conditional_independence_pvalue(int x, int y, const std::vector<int>& z) {
    const bool indep = oracle_ci(graph_, graph_.vertex_of_column(x), graph_.vertex_of_column(y),
                                 to_vertices(z));
    return indep ? 1.0 : 0.0;
}

}  // namespace camuv
