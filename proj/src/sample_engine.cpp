#include "camuv/sample_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "camuv/rng.hpp"

namespace camuv {

SampleEngine::SampleEngine(Dataset data, uint64_t seed, GamConfig gam, CmiConfig cmi)
    : data_(std::move(data)), seed_(seed), gam_cfg_(std::move(gam)), cmi_cfg_(cmi) {
    if (data_.p < 2) throw std::invalid_argument("need at least two columns");
    if (data_.n < 50) throw std::invalid_argument("need at least 50 samples");
}

SampleEngine::Key SampleEngine::make_key(int target, const std::vector<int>& predictors) {
    Key key;
    key.reserve(predictors.size() + 1);
    key.push_back(target);
    key.insert(key.end(), predictors.begin(), predictors.end());
    std::sort(key.begin() + 1, key.end());
    return key;
}

const std::vector<double>& SampleEngine::residual_for(int target, const std::vector<int>& predictors) {
    const Key key = make_key(target, predictors);
    const auto it = residuals_.find(key);
    if (it != residuals_.end()) return it->second;

    std::vector<const std::vector<double>*> cols;
    std::vector<int> ids;
    for (size_t q = 1; q < key.size(); ++q) {
        const int c = key[q];
        if (c == target) throw std::invalid_argument("regression set must not contain the target");
        cols.push_back(&data_.column(c));
        ids.push_back(c);
    }
    const auto& y = data_.column(target);
    const AdditiveFit fit = fit_additive(y, cols, gam_cfg_, ids);
    return residuals_.emplace(key, residual(fit, y, cols)).first->second;
}

const CenteredKernel& SampleEngine::kernel_for(const Key& key) {
    const auto it = kernels_.find(key);
    if (it != kernels_.end()) {
        lru_.erase(lru_pos_[key]);
        lru_pos_[key] = lru_.insert(lru_.end(), key);
        return it->second;
    }
    const auto& resid = residual_for(key[0], std::vector<int>(key.begin() + 1, key.end()));
    if (kernels_.size() >= kernel_capacity_) {
        const Key victim = lru_.front();
        lru_.pop_front();
        lru_pos_.erase(victim);
        kernels_.erase(victim);
    }
    lru_pos_[key] = lru_.insert(lru_.end(), key);
    return kernels_.emplace(key, CenteredKernel::from_column(resid)).first->second;
}

double SampleEngine::residual_independence_pvalue(int xi, const std::vector<int>& m, int xj,
                                                  const std::vector<int>& n) {
    Key a = make_key(xi, m);
    Key b = make_key(xj, n);
    if (a > b) std::swap(a, b);  // the test is symmetric
    const auto cached = pvalues_.find({a, b});
    if (cached != pvalues_.end()) return cached->second;

    const TestResult r = hsic_gamma_from_kernels(kernel_for(a), kernel_for(b));
    pvalues_.emplace(std::make_pair(a, b), r.p_value);
    return r.p_value;
}

double SampleEngine::conditional_independence_pvalue(int x, int y, const std::vector<int>& z) {
    std::vector<int> zs = z;
    std::sort(zs.begin(), zs.end());
    uint64_t query_seed = hash_mix(seed_, 0xc1ULL);
    query_seed = hash_mix(query_seed, static_cast<uint64_t>(x) + 1);
    query_seed = hash_mix(query_seed, static_cast<uint64_t>(y) + 1);
    for (int c : zs) query_seed = hash_mix(query_seed, static_cast<uint64_t>(c) + 101);

    std::vector<const std::vector<double>*> zcols;
    for (int c : zs) zcols.push_back(&data_.column(c));
    const TestResult r = cmi_knn_pvalue(data_.column(x), data_.column(y), zcols, query_seed, cmi_cfg_);
    return r.p_value;
}

}  // namespace camuv
