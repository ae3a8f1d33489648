#include "camuv/indep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "camuv/rng.hpp"

namespace camuv {

namespace {

void check_column(const std::vector<double>& x, size_t min_n) {
    if (x.size() < min_n) throw std::invalid_argument("column too short for the test");
    double lo = x[0], hi = x[0];
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in test column");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw std::invalid_argument("zero-variance column");
}

double median_of(std::vector<double>& v) {
    const size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(m), v.end());
    double hi = v[m];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(m));
        return 0.5 * (lo + hi);
    }
    return hi;
}

}  // namespace

CenteredKernel CenteredKernel::from_column(const std::vector<double>& x) {
    check_column(x, 8);
    const int n = static_cast<int>(x.size());

    std::vector<double> sq_dists;
    sq_dists.reserve(static_cast<size_t>(n) * (static_cast<size_t>(n) - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            if (d != 0.0) sq_dists.push_back(d * d);
        }
    if (sq_dists.empty()) throw std::invalid_argument("zero-variance column");
    // sigma = median pairwise distance, so 2 sigma^2 = 2 * median of squares
    const double two_sigma_sq = 2.0 * median_of(sq_dists);

    CenteredKernel k;
    k.n = n;
    std::vector<double> raw(static_cast<size_t>(n) * static_cast<size_t>(n));
    double offdiag = 0.0;
    for (int i = 0; i < n; ++i) {
        raw[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double d = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            const double v = std::exp(-(d * d) / two_sigma_sq);
            raw[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] = v;
            raw[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)] = v;
            offdiag += 2.0 * v;
        }
    }
    k.offdiag_mean = offdiag / (static_cast<double>(n) * (n - 1));

    std::vector<double> row_mean(static_cast<size_t>(n), 0.0);
    double grand = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += raw[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
        row_mean[static_cast<size_t>(i)] = s / n;
        grand += s;
    }
    grand /= static_cast<double>(n) * n;

    k.centered.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k.centered[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] =
                raw[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] -
                row_mean[static_cast<size_t>(i)] - row_mean[static_cast<size_t>(j)] + grand;
    return k;
}

namespace {

// regularized lower incomplete gamma via series / continued fraction
double gammp_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gammq_cont_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_cdf_regularized(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (a <= 0.0) return 1.0;
    if (x < a + 1.0) return gammp_series(a, x);
    return 1.0 - gammq_cont_fraction(a, x);
}

TestResult hsic_gamma_from_kernels(const CenteredKernel& kx, const CenteredKernel& ky) {
    if (kx.n != ky.n) throw std::invalid_argument("kernel size mismatch");
    const int n = kx.n;
    const double m = n;

    double cross = 0.0;       // sum of Kc .* Lc over all entries
    double var_sum = 0.0;     // sum of (Kc.*Lc/6)^2 off the diagonal
    for (int i = 0; i < n; ++i) {
        const double* kr = &kx.centered[static_cast<size_t>(i) * static_cast<size_t>(n)];
        const double* lr = &ky.centered[static_cast<size_t>(i) * static_cast<size_t>(n)];
        double row_cross = 0.0;
        double row_var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double prod = kr[j] * lr[j];
            row_cross += prod;
            const double e = prod / 6.0;
            if (j != i) row_var += e * e;
        }
        cross += row_cross;
        var_sum += row_var;
    }

    const double stat_biased = cross / (m * m);  // trace(KHLH) / n^2
    const double test_stat = cross / m;

    double var_hsic = var_sum / (m * (m - 1.0));
    var_hsic *= 72.0 * (m - 4.0) * (m - 5.0) / (m * (m - 1.0) * (m - 2.0) * (m - 3.0));
    const double mu_x = kx.offdiag_mean;
    const double mu_y = ky.offdiag_mean;
    const double m_hsic = (1.0 + mu_x * mu_y - mu_x - mu_y) / m;

    TestResult r;
    r.method = "hsic_gamma";
    r.parameters = "kernel=gaussian;bandwidth=median";
    r.statistic = stat_biased;
    if (!(m_hsic > 0.0) || !(var_hsic > 0.0)) {
        r.p_value = test_stat > 0.0 ? 0.0 : 1.0;
        return r;
    }
    const double shape = m_hsic * m_hsic / var_hsic;
    const double scale = var_hsic * m / m_hsic;
    double p = 1.0 - gamma_cdf_regularized(shape, test_stat / scale);
    r.p_value = std::min(1.0, std::max(0.0, p));
    return r;
}

TestResult hsic_pvalue(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("column length mismatch");
    return hsic_gamma_from_kernels(CenteredKernel::from_column(u), CenteredKernel::from_column(v));
}

double digamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

namespace {

struct CmiWorkspace {
    int n = 0;
    int k = 0;
    bool has_z = false;
    std::vector<float> yd;   // |y_i - y_j|
    std::vector<float> zd;   // max-norm distance in z space (zero when no z)
    std::vector<float> eps_buffer;

    float& at(std::vector<float>& m, int i, int j) const {
        return m[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
    }
    float get(const std::vector<float>& m, int i, int j) const {
        return m[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
    }
};

double cmi_estimate(const CmiWorkspace& ws, const std::vector<double>& x) {
    const int n = ws.n;
    std::vector<float> joint(static_cast<size_t>(n));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const float* ydr = &ws.yd[static_cast<size_t>(i) * static_cast<size_t>(n)];
        const float* zdr = ws.has_z ? &ws.zd[static_cast<size_t>(i) * static_cast<size_t>(n)] : nullptr;
        for (int j = 0; j < n; ++j) {
            float xd = static_cast<float>(std::fabs(x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]));
            float d = std::max(xd, ydr[j]);
            if (zdr) d = std::max(d, zdr[j]);
            joint[static_cast<size_t>(j)] = d;
        }
        joint[static_cast<size_t>(i)] = std::numeric_limits<float>::infinity();
        std::vector<float> sel(joint);
        std::nth_element(sel.begin(), sel.begin() + (ws.k - 1), sel.end());
        const float eps = sel[static_cast<size_t>(ws.k - 1)];

        int n_xz = 0, n_yz = 0, n_z = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const float xd = static_cast<float>(std::fabs(x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]));
            const float zdv = zdr ? zdr[j] : 0.0f;
            if (std::max(xd, zdv) < eps) ++n_xz;
            if (std::max(ydr[j], zdv) < eps) ++n_yz;
            if (zdv < eps) ++n_z;
        }
        if (ws.has_z) {
            acc += digamma(n_z + 1) - digamma(n_xz + 1) - digamma(n_yz + 1);
        } else {
            acc += -digamma(n_xz + 1) - digamma(n_yz + 1);
        }
    }
    double value = digamma(ws.k) + acc / n;
    if (!ws.has_z) value += digamma(n);
    return value;
}

std::vector<double> standardized_with_jitter(const std::vector<double>& col, Rng& jitter_rng) {
    const int n = static_cast<int>(col.size());
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= std::max(1, n - 1);
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = (col[static_cast<size_t>(i)] - mean) / sd + 1e-10 * jitter_rng.uniform();
    return out;
}

}  // namespace

TestResult cmi_knn_pvalue(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<const std::vector<double>*>& z, uint64_t seed,
                          const CmiConfig& cfg) {
    const int n = static_cast<int>(x.size());
    if (y.size() != x.size()) throw std::invalid_argument("column length mismatch");
    for (const auto* col : z)
        if (col->size() != x.size()) throw std::invalid_argument("column length mismatch");
    if (n < 50) throw std::invalid_argument("need at least 50 rows for the cmi test");
    if (cfg.k < 2 || cfg.k >= n) throw std::invalid_argument("bad neighbor count");

    Rng jitter_rng(hash_mix(seed, 0x71d7e5ULL));
    const std::vector<double> xs = standardized_with_jitter(x, jitter_rng);
    const std::vector<double> ys = standardized_with_jitter(y, jitter_rng);
    std::vector<std::vector<double>> zs;
    for (const auto* col : z) zs.push_back(standardized_with_jitter(*col, jitter_rng));

    CmiWorkspace ws;
    ws.n = n;
    ws.k = cfg.k;
    ws.has_z = !zs.empty();
    ws.yd.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ws.at(ws.yd, i, j) = static_cast<float>(std::fabs(ys[static_cast<size_t>(i)] - ys[static_cast<size_t>(j)]));
    if (ws.has_z) {
        ws.zd.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0f);
        for (const auto& zc : zs)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    ws.at(ws.zd, i, j) = std::max(
                        ws.get(ws.zd, i, j),
                        static_cast<float>(std::fabs(zc[static_cast<size_t>(i)] - zc[static_cast<size_t>(j)])));
    }

    const double observed = cmi_estimate(ws, xs);

    // neighborhoods in z space for the local permutation scheme, ties by index
    std::vector<std::vector<int>> z_neighbors;
    if (ws.has_z) {
        z_neighbors.assign(static_cast<size_t>(n), {});
        std::vector<std::pair<float, int>> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) order[static_cast<size_t>(j)] = {ws.get(ws.zd, i, j), j};
            std::sort(order.begin(), order.end());
            auto& nb = z_neighbors[static_cast<size_t>(i)];
            for (int q = 0; q < std::min(cfg.k_perm, n); ++q) nb.push_back(order[static_cast<size_t>(q)].second);
        }
    }

    Rng perm_rng(hash_mix(seed, 0x9c3fb2ULL));
    std::vector<int> identity(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) identity[static_cast<size_t>(i)] = i;

    int count_ge = 0;
    std::vector<double> xperm(static_cast<size_t>(n));
    std::vector<int> visit_order(identity);
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<int> cand;
    for (int b = 0; b < cfg.permutations; ++b) {
        if (!ws.has_z) {
            std::vector<int> perm(identity);
            perm_rng.shuffle(perm);
            for (int i = 0; i < n; ++i) xperm[static_cast<size_t>(i)] = xs[static_cast<size_t>(perm[static_cast<size_t>(i)])];
        } else {
            visit_order = identity;
            perm_rng.shuffle(visit_order);
            std::fill(used.begin(), used.end(), 0);
            for (int i : visit_order) {
                cand = z_neighbors[static_cast<size_t>(i)];
                perm_rng.shuffle(cand);
                int chosen = cand[0];
                for (int c : cand) {
                    if (!used[static_cast<size_t>(c)]) {
                        chosen = c;
                        break;
                    }
                }
                used[static_cast<size_t>(chosen)] = 1;
                xperm[static_cast<size_t>(i)] = xs[static_cast<size_t>(chosen)];
            }
        }
        if (cmi_estimate(ws, xperm) >= observed) ++count_ge;
    }

    TestResult r;
    r.method = "cmi_knn";
    r.parameters = "k=" + std::to_string(cfg.k) + ";k_perm=" + std::to_string(cfg.k_perm) +
                   ";permutations=" + std::to_string(cfg.permutations);
    r.seed = seed;
    r.statistic = observed;
    r.p_value = static_cast<double>(count_ge) / cfg.permutations;
    return r;
}

}  // namespace camuv
