#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace camuv {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::string method;
    std::string parameters;
    uint64_t seed = 0;
};

// centered Gaussian kernel of one column, bandwidth from the median
// pairwise-distance heuristic
struct CenteredKernel {
    int n = 0;
    double offdiag_mean = 0.0;      // mean of the raw off-diagonal entries
    std::vector<double> centered;   // H K H, row-major n*n

    static CenteredKernel from_column(const std::vector<double>& x);
};

// gamma-approximated HSIC test evaluated on prebuilt kernels; statistic is
// the biased estimate trace(KHLH) / n^2
TestResult hsic_gamma_from_kernels(const CenteredKernel& kx, const CenteredKernel& ky);

TestResult hsic_pvalue(const std::vector<double>& u, const std::vector<double>& v);

struct CmiConfig {
    int k = 10;             // neighbors for the estimator
    int k_perm = 5;         // neighborhood size for local permutation
    int permutations = 500;
};

// k-nearest-neighbor conditional mutual information with a local-permutation
// null; with empty z this reduces to a permutation test of mutual
// information. Duplicate points are broken by a tiny seed-derived jitter.
TestResult cmi_knn_pvalue(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<const std::vector<double>*>& z, uint64_t seed,
                          const CmiConfig& cfg = {});

// regularized lower incomplete gamma P(a, x); exposed for the test suite
double gamma_cdf_regularized(double a, double x);

double digamma(double x);

}  // namespace camuv
