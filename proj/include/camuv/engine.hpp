#pragma once

#include <memory>
#include <vector>

#include "camuv/graph.hpp"

namespace camuv {

// Answers the two kinds of statistical queries the search algorithms pose.
// Indices are dataset column indices 0..p-1. A returned value v is compared
// against the significance level as "v > alpha means independent".
class TestEngine {
public:
    virtual ~TestEngine() = default;

    virtual int variable_count() const = 0;

    // p-value for residual(x_i | m) independent of residual(x_j | n)
    virtual double residual_independence_pvalue(int xi, const std::vector<int>& m, int xj,
                                                const std::vector<int>& n) = 0;

    // p-value for x independent of y given z
    virtual double conditional_independence_pvalue(int x, int y, const std::vector<int>& z) = 0;
};

// Exact engine backed by the graph structure: residual queries through the
// noise-set calculus, conditional independence through d-separation. Returns
// 1.0 for independent and 0.0 for dependent so any alpha in (0,1) works.
class OracleEngine final : public TestEngine {
public:
    explicit OracleEngine(CausalGraph graph);

    int variable_count() const override { return graph_.observed_count(); }
    double residual_independence_pvalue(int xi, const std::vector<int>& m, int xj,
                                        const std::vector<int>& n) override;
    double conditional_independence_pvalue(int x, int y, const std::vector<int>& z) override;

    const CausalGraph& graph() const { return graph_; }

private:
    VertexSet to_vertices(const std::vector<int>& columns) const;

    CausalGraph graph_;
};

}  // namespace camuv
