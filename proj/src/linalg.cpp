#include "bfbm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfbm {

bool cholesky(Matrix& a) {
    std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0)) return false;
        double lj = std::sqrt(d);
        a(j, j) = lj;
        double inv = 1.0 / lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            const double* ri = a.data() + i * n;
            const double* rj = a.data() + j * n;
            for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
            a(i, j) = s * inv;
        }
    }
    // zero strict upper triangle so the factor can be applied directly
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
    return true;
}

double cholesky_jitter(Matrix& a, double scale) {
    const double eps_ladder[] = {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
    Matrix saved = a;
    for (double eps : eps_ladder) {
        a = saved;
        if (eps > 0.0)
            for (std::size_t i = 0; i < a.size(); ++i) a(i, i) += eps * scale;
        if (cholesky(a)) return eps * scale;
    }
    throw std::runtime_error("cholesky_jitter: matrix not positive definite within jitter ladder");
}

std::vector<double> cholesky_solve(const Matrix& l, const std::vector<double>& b) {
    std::size_t n = l.size();
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

std::vector<double> lower_apply(const Matrix& l, const std::vector<double>& z) {
    std::size_t n = l.size();
    if (z.size() != n) throw std::invalid_argument("lower_apply: size mismatch");
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = l.data() + i * n;
        for (std::size_t k = 0; k <= i; ++k) s += row[k] * z[k];
        y[i] = s;
    }
    return y;
}

ConditionResult gaussian_condition(const Matrix& cov,
                                   const std::vector<std::size_t>& observed_idx,
                                   const std::vector<double>& values) {
    std::size_t n = cov.size();
    if (observed_idx.size() != values.size())
        throw std::invalid_argument("gaussian_condition: index/value size mismatch");
    std::vector<char> is_obs(n, 0);
    for (std::size_t idx : observed_idx) {
        if (idx >= n) throw std::invalid_argument("gaussian_condition: index out of range");
        is_obs[idx] = 1;
    }
    std::vector<std::size_t> un;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_obs[i]) un.push_back(i);
    std::size_t no = observed_idx.size();
    std::size_t nu = un.size();

    Matrix loo(no);
    for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) loo(i, j) = cov(observed_idx[i], observed_idx[j]);
    double scale = 0.0;
    for (std::size_t i = 0; i < no; ++i) scale = std::max(scale, loo(i, i));
    cholesky_jitter(loo, scale > 0.0 ? scale : 1.0);

    // columns of Sigma_ou solved once each: w_j = Sigma_oo^{-1} Sigma_o,un[j]
    std::vector<std::vector<double>> w(nu);
    for (std::size_t j = 0; j < nu; ++j) {
        std::vector<double> col(no);
        for (std::size_t i = 0; i < no; ++i) col[i] = cov(observed_idx[i], un[j]);
        w[j] = cholesky_solve(loo, col);
    }

    ConditionResult out;
    out.mean.assign(nu, 0.0);
    for (std::size_t j = 0; j < nu; ++j)
        for (std::size_t i = 0; i < no; ++i) out.mean[j] += w[j][i] * values[i];

    out.cov = Matrix(nu);
    for (std::size_t a = 0; a < nu; ++a)
        for (std::size_t b = 0; b < nu; ++b) {
            double s = cov(un[a], un[b]);
            for (std::size_t i = 0; i < no; ++i) s -= cov(observed_idx[i], un[a]) * w[b][i];
            out.cov(a, b) = s;
        }
    return out;
}

}  // namespace bfbm
