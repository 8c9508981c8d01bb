#pragma once

#include <cstddef>
#include <vector>

namespace bfbm {

// Dense row-major square matrix, just enough for covariance work.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// In-place lower Cholesky factor; returns false if the matrix is not
// numerically positive definite.
bool cholesky(Matrix& a);

// Cholesky with escalating diagonal jitter eps * scale for
// eps in {0, 1e-12, 1e-11, ..., 1e-8}; throws std::runtime_error if even the
// largest jitter fails. Returns the jitter actually applied.
double cholesky_jitter(Matrix& a, double scale);

// Solve L L^T x = b given the lower factor L.
std::vector<double> cholesky_solve(const Matrix& l, const std::vector<double>& b);

// y = L z for the lower factor (used to color i.i.d. normals).
std::vector<double> lower_apply(const Matrix& l, const std::vector<double>& z);

struct ConditionResult {
    std::vector<double> mean;  // conditional mean of the unobserved block
    Matrix cov;                // conditional covariance (Schur complement)
};

// Condition a centered Gaussian vector with covariance `cov` on the
// coordinates `observed_idx` taking the given values.
ConditionResult gaussian_condition(const Matrix& cov,
                                   const std::vector<std::size_t>& observed_idx,
                                   const std::vector<double>& values);

}  // namespace bfbm
