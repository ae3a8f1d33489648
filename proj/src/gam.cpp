#include "camuv/gam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace camuv {

namespace {

// dense symmetric solve via Cholesky with escalating ridge; sizes stay small
// (at most a few dozen basis columns) so no external solver is warranted
class SymmetricSolver {
public:
    // A row-major k x k
    SymmetricSolver(std::vector<double> a, int k) : k_(k), l_(std::move(a)) {
        double trace = 0.0;
        for (int i = 0; i < k_; ++i) trace += l_[idx(i, i)];
        const double base = std::max(trace / k_, 1e-12);
        const std::vector<double> original = l_;
        for (double ridge : {0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
            std::vector<double> work = original;
            if (ridge > 0.0)
                for (int i = 0; i < k_; ++i) work[idx(i, i)] += ridge * base;
            if (factorize(work)) {
                l_ = std::move(work);
                ok_ = true;
                return;
            }
        }
    }

    bool ok() const { return ok_; }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        std::vector<double> x = rhs;
        for (int i = 0; i < k_; ++i) {
            double s = x[static_cast<size_t>(i)];
            for (int j = 0; j < i; ++j) s -= l_[idx(i, j)] * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s / l_[idx(i, i)];
        }
        for (int i = k_ - 1; i >= 0; --i) {
            double s = x[static_cast<size_t>(i)];
            for (int j = i + 1; j < k_; ++j) s -= l_[idx(j, i)] * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s / l_[idx(i, i)];
        }
        return x;
    }

private:
    bool factorize(std::vector<double>& a) {
        for (int i = 0; i < k_; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = a[idx(i, j)];
                for (int q = 0; q < j; ++q) s -= a[idx(i, q)] * a[idx(j, q)];
                if (i == j) {
                    if (!(s > 0.0) || !std::isfinite(s)) return false;
                    a[idx(i, i)] = std::sqrt(s);
                } else {
                    a[idx(i, j)] = s / a[idx(j, j)];
                }
            }
        }
        return true;
    }

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * static_cast<size_t>(k_) + static_cast<size_t>(j); }

    int k_;
    std::vector<double> l_;
    bool ok_ = false;
};

}  // namespace

SplineBasis SplineBasis::from_column(const std::vector<double>& x, int n_basis, int degree) {
    SplineBasis b;
    b.degree = degree;
    b.n_basis = n_basis;
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    b.lo = sorted.front();
    b.hi = sorted.back();
    if (!(b.hi > b.lo)) b.hi = b.lo + 1.0;  // constant column; smooth collapses to a constant

    const int n_internal = n_basis - degree - 1;
    std::vector<double> internal;
    for (int i = 1; i <= n_internal; ++i) {
        const double q = static_cast<double>(i) / (n_internal + 1);
        const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
        const size_t left = static_cast<size_t>(pos);
        const double frac = pos - static_cast<double>(left);
        double v = sorted[left];
        if (left + 1 < sorted.size()) v += frac * (sorted[left + 1] - sorted[left]);
        internal.push_back(v);
    }
    // knots must increase strictly for a well-conditioned basis
    const double eps = 1e-9 * (b.hi - b.lo);
    for (size_t i = 0; i < internal.size(); ++i) {
        const double floor_v = (i == 0 ? b.lo : internal[i - 1]) + eps;
        internal[i] = std::min(std::max(internal[i], floor_v), b.hi - eps);
    }

    for (int i = 0; i <= degree; ++i) b.knots.push_back(b.lo);
    b.knots.insert(b.knots.end(), internal.begin(), internal.end());
    for (int i = 0; i <= degree; ++i) b.knots.push_back(b.hi);
    return b;
}

void SplineBasis::eval(double x, std::vector<double>& out) const {
    out.assign(static_cast<size_t>(n_basis), 0.0);
    x = std::min(std::max(x, lo), hi);

    // Cox-de Boor over the clamped knot vector
    const int m = static_cast<int>(knots.size());
    int span = -1;
    for (int i = degree; i < m - degree - 1; ++i) {
        if (x >= knots[static_cast<size_t>(i)] &&
            (x < knots[static_cast<size_t>(i + 1)] || i == m - degree - 2)) {
            span = i;
            break;
        }
    }
    if (span < 0) span = m - degree - 2;

    std::vector<double> left(static_cast<size_t>(degree + 1), 0.0);
    std::vector<double> right(static_cast<size_t>(degree + 1), 0.0);
    std::vector<double> ndu(static_cast<size_t>(degree + 1), 0.0);
    ndu[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[static_cast<size_t>(j)] = x - knots[static_cast<size_t>(span + 1 - j)];
        right[static_cast<size_t>(j)] = knots[static_cast<size_t>(span + j)] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double denom = right[static_cast<size_t>(r + 1)] + left[static_cast<size_t>(j - r)];
            const double temp = denom != 0.0 ? ndu[static_cast<size_t>(r)] / denom : 0.0;
            ndu[static_cast<size_t>(r)] = saved + right[static_cast<size_t>(r + 1)] * temp;
            saved = left[static_cast<size_t>(j - r)] * temp;
        }
        ndu[static_cast<size_t>(j)] = saved;
    }
    for (int j = 0; j <= degree; ++j) {
        const int idx = span - degree + j;
        if (idx >= 0 && idx < n_basis) out[static_cast<size_t>(idx)] = ndu[static_cast<size_t>(j)];
    }
}

double AdditiveFit::component_value(int index, double x) const {
    const auto& c = components.at(static_cast<size_t>(index));
    std::vector<double> basis;
    c.basis.eval(x, basis);
    double v = 0.0;
    for (size_t b = 0; b < basis.size(); ++b)
        v += (basis[b] - c.column_means[b]) * c.coef[b];
    return v;
}

double AdditiveFit::predict_row(const std::vector<double>& values) const {
    double v = intercept;
    for (size_t k = 0; k < components.size(); ++k) v += component_value(static_cast<int>(k), values[k]);
    return v;
}

std::vector<double> AdditiveFit::predict(const std::vector<const std::vector<double>*>& predictors) const {
    if (predictors.size() != components.size()) throw std::invalid_argument("predictor count mismatch");
    const size_t n = components.empty() ? 0 : predictors[0]->size();
    std::vector<double> out;
    if (components.empty()) return out;
    out.assign(n, intercept);
    std::vector<double> basis;
    for (size_t k = 0; k < components.size(); ++k) {
        const auto& col = *predictors[k];
        if (col.size() != n) throw std::invalid_argument("predictor length mismatch");
        const auto& c = components[k];
        for (size_t i = 0; i < n; ++i) {
            c.basis.eval(col[i], basis);
            double v = 0.0;
            for (size_t b = 0; b < basis.size(); ++b) v += (basis[b] - c.column_means[b]) * c.coef[b];
            out[i] += v;
        }
    }
    return out;
}

AdditiveFit fit_additive(const std::vector<double>& y,
                         const std::vector<const std::vector<double>*>& predictors, const GamConfig& cfg,
                         const std::vector<int>& predictor_ids) {
    const int n = static_cast<int>(y.size());
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite response value");
    for (const auto* col : predictors) {
        if (static_cast<int>(col->size()) != n) throw std::invalid_argument("column length mismatch");
        for (double v : *col)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite predictor value");
    }

    AdditiveFit fit;
    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= std::max(1, n);
    fit.intercept = mean_y;
    if (predictors.empty()) return fit;

    if (n < 20) throw std::invalid_argument("need at least 20 rows to fit smooth components");

    const int kper = cfg.basis_size;
    const int k = 1 + kper * static_cast<int>(predictors.size());

    // design matrix: intercept column plus centered basis blocks
    std::vector<double> design(static_cast<size_t>(n) * static_cast<size_t>(k), 0.0);
    std::vector<SplineBasis> bases;
    std::vector<std::vector<double>> col_means;
    {
        std::vector<double> basis;
        for (int i = 0; i < n; ++i) design[static_cast<size_t>(i) * static_cast<size_t>(k)] = 1.0;
        for (size_t pidx = 0; pidx < predictors.size(); ++pidx) {
            const auto& col = *predictors[pidx];
            SplineBasis b = SplineBasis::from_column(col, cfg.basis_size, cfg.degree);
            std::vector<double> means(static_cast<size_t>(kper), 0.0);
            for (int i = 0; i < n; ++i) {
                b.eval(col[static_cast<size_t>(i)], basis);
                for (int q = 0; q < kper; ++q) {
                    const size_t cidx = static_cast<size_t>(1 + static_cast<int>(pidx) * kper + q);
                    design[static_cast<size_t>(i) * static_cast<size_t>(k) + cidx] = basis[static_cast<size_t>(q)];
                    means[static_cast<size_t>(q)] += basis[static_cast<size_t>(q)];
                }
            }
            for (auto& m : means) m /= n;
            for (int i = 0; i < n; ++i)
                for (int q = 0; q < kper; ++q) {
                    const size_t cidx = static_cast<size_t>(1 + static_cast<int>(pidx) * kper + q);
                    design[static_cast<size_t>(i) * static_cast<size_t>(k) + cidx] -= means[static_cast<size_t>(q)];
                }
            bases.push_back(std::move(b));
            col_means.push_back(std::move(means));
        }
    }

    // gram matrix and response projection
    std::vector<double> xtx(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
    std::vector<double> xty(static_cast<size_t>(k), 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = &design[static_cast<size_t>(i) * static_cast<size_t>(k)];
        for (int a = 0; a < k; ++a) {
            xty[static_cast<size_t>(a)] += row[a] * y[static_cast<size_t>(i)];
            for (int b = a; b < k; ++b)
                xtx[static_cast<size_t>(a) * static_cast<size_t>(k) + static_cast<size_t>(b)] += row[a] * row[b];
        }
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < a; ++b)
            xtx[static_cast<size_t>(a) * static_cast<size_t>(k) + static_cast<size_t>(b)] =
                xtx[static_cast<size_t>(b) * static_cast<size_t>(k) + static_cast<size_t>(a)];

    // second-difference penalty block, shared across predictors
    std::vector<double> dtd(static_cast<size_t>(kper) * static_cast<size_t>(kper), 0.0);
    for (int r = 0; r + 2 < kper; ++r) {
        const int cols[3] = {r, r + 1, r + 2};
        const double w[3] = {1.0, -2.0, 1.0};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                dtd[static_cast<size_t>(cols[a]) * static_cast<size_t>(kper) + static_cast<size_t>(cols[b])] +=
                    w[a] * w[b];
    }

    double best_gcv = std::numeric_limits<double>::infinity();
    std::vector<double> best_beta;
    double best_lambda = cfg.lambda_grid.front();
    std::vector<double> fitted(static_cast<size_t>(n), 0.0);
    for (const double lambda : cfg.lambda_grid) {
        std::vector<double> g = xtx;
        for (size_t pidx = 0; pidx < predictors.size(); ++pidx) {
            const int off = 1 + static_cast<int>(pidx) * kper;
            for (int a = 0; a < kper; ++a)
                for (int b = 0; b < kper; ++b)
                    g[static_cast<size_t>(off + a) * static_cast<size_t>(k) + static_cast<size_t>(off + b)] +=
                        lambda * dtd[static_cast<size_t>(a) * static_cast<size_t>(kper) + static_cast<size_t>(b)];
        }
        SymmetricSolver solver(std::move(g), k);
        if (!solver.ok()) continue;
        const std::vector<double> beta = solver.solve(xty);

        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* row = &design[static_cast<size_t>(i) * static_cast<size_t>(k)];
            double f = 0.0;
            for (int a = 0; a < k; ++a) f += row[a] * beta[static_cast<size_t>(a)];
            fitted[static_cast<size_t>(i)] = f;
            const double r = y[static_cast<size_t>(i)] - f;
            rss += r * r;
        }
        double trace_h = 0.0;
        std::vector<double> col(static_cast<size_t>(k));
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b)
                col[static_cast<size_t>(b)] = xtx[static_cast<size_t>(b) * static_cast<size_t>(k) + static_cast<size_t>(a)];
            trace_h += solver.solve(col)[static_cast<size_t>(a)];
        }
        const double denom = n - trace_h;
        const double gcv = denom > 1.0 ? n * rss / (denom * denom) : std::numeric_limits<double>::infinity();
        if (gcv < best_gcv) {
            best_gcv = gcv;
            best_beta = beta;
            best_lambda = lambda;
        }
    }
    if (best_beta.empty()) throw std::runtime_error("additive fit failed for every smoothing value");

    fit.intercept = best_beta[0];
    fit.lambda = best_lambda;
    for (size_t pidx = 0; pidx < predictors.size(); ++pidx) {
        AdditiveFit::Component c;
        c.predictor_id = pidx < predictor_ids.size() ? predictor_ids[pidx] : static_cast<int>(pidx);
        c.basis = bases[pidx];
        c.column_means = col_means[pidx];
        c.coef.assign(best_beta.begin() + 1 + static_cast<long>(pidx) * kper,
                      best_beta.begin() + 1 + static_cast<long>(pidx + 1) * kper);
        fit.components.push_back(std::move(c));
    }
    return fit;
}

std::vector<double> residual(const AdditiveFit& fit, const std::vector<double>& y,
                             const std::vector<const std::vector<double>*>& predictors) {
    if (predictors.size() != fit.components.size()) throw std::invalid_argument("predictor count mismatch");
    std::vector<double> out(y.size());
    if (fit.components.empty()) {
        for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] - fit.intercept;
        return out;
    }
    const std::vector<double> pred = fit.predict(predictors);
    if (pred.size() != y.size()) throw std::invalid_argument("row count mismatch");
    for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] - pred[i];
    return out;
}

}  // namespace camuv
