#pragma once

#include <vector>

namespace camuv {

struct GamConfig {
    int basis_size = 10;  // B-spline basis functions per predictor
    int degree = 3;       // cubic
    std::vector<double> lambda_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
};

// clamped B-spline basis with internal knots at equispaced quantiles
struct SplineBasis {
    int degree = 3;
    int n_basis = 10;
    std::vector<double> knots;  // length n_basis + degree + 1
    double lo = 0.0;
    double hi = 1.0;

    static SplineBasis from_column(const std::vector<double>& x, int n_basis, int degree);
    // basis function values at x (x clamped into [lo, hi])
    void eval(double x, std::vector<double>& out) const;
};

// intercept plus one penalized smooth per predictor; prediction is strictly
// additive across predictors
struct AdditiveFit {
    struct Component {
        int predictor_id = 0;
        SplineBasis basis;
        std::vector<double> column_means;  // centering applied to the basis columns
        std::vector<double> coef;
    };

    double intercept = 0.0;
    double lambda = 0.0;
    std::vector<Component> components;

    // the centered smooth of one predictor evaluated at x
    double component_value(int index, double x) const;
    // values[k] is the k-th predictor's value, parallel to components
    double predict_row(const std::vector<double>& values) const;
    std::vector<double> predict(const std::vector<const std::vector<double>*>& predictors) const;
};

// Penalized least squares with a second-order difference penalty, smoothing
// parameter chosen by GCV over the config grid. An empty predictor set gives
// the intercept-only fit.
AdditiveFit fit_additive(const std::vector<double>& y,
                         const std::vector<const std::vector<double>*>& predictors,
                         const GamConfig& cfg = {}, const std::vector<int>& predictor_ids = {});

std::vector<double> residual(const AdditiveFit& fit, const std::vector<double>& y,
                             const std::vector<const std::vector<double>*>& predictors);

}  // namespace camuv
