#pragma once

#include <list>
#include <map>

#include "camuv/engine.hpp"
#include "camuv/gam.hpp"
#include "camuv/indep.hpp"
#include "camuv/synth.hpp"

namespace camuv {

// Finite-sample engine: residual queries via additive-model regression plus
// the gamma HSIC test, conditional independence via the kNN conditional
// mutual information permutation test. Residuals, kernels and p-values are
// cached; everything is deterministic given the dataset and seed.
class SampleEngine final : public TestEngine {
public:
    explicit SampleEngine(Dataset data, uint64_t seed = 0, GamConfig gam = {}, CmiConfig cmi = {});

    int variable_count() const override { return data_.p; }
    double residual_independence_pvalue(int xi, const std::vector<int>& m, int xj,
                                        const std::vector<int>& n) override;
    double conditional_independence_pvalue(int x, int y, const std::vector<int>& z) override;

    const Dataset& data() const { return data_; }
    const std::vector<double>& residual_for(int target, const std::vector<int>& predictors);

private:
    using Key = std::vector<int>;  // target followed by its sorted predictors

    static Key make_key(int target, const std::vector<int>& predictors);
    const CenteredKernel& kernel_for(const Key& key);

    Dataset data_;
    uint64_t seed_;
    GamConfig gam_cfg_;
    CmiConfig cmi_cfg_;

    std::map<Key, std::vector<double>> residuals_;
    std::map<Key, CenteredKernel> kernels_;
    std::list<Key> lru_;
    std::map<Key, std::list<Key>::iterator> lru_pos_;
    std::map<std::pair<Key, Key>, double> pvalues_;
    size_t kernel_capacity_ = 160;
};

}  // namespace camuv
