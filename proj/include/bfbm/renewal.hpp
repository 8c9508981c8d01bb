#pragma once

#include <cstdint>
#include <vector>

#include "bfbm/constants.hpp"

namespace bfbm {

// Offset distribution: P(R >= n) = n^{-alpha}, n = 1, 2, ...
double mu_tail(std::int64_t n, double alpha);
double mu_pmf(std::int64_t n, double alpha);

// Inversion sampler R = floor(u^{-1/alpha}) for u in (0,1]; a threshold
// table covers the common small offsets, pow() handles the heavy tail.
// Huge draws are capped far below the int64 range.
class OffsetSampler {
public:
    explicit OffsetSampler(double alpha);
    std::int64_t sample(double u) const;
    double alpha() const { return alpha_; }

private:
    double alpha_;
    double inv_alpha_;
    std::vector<double> thr_;  // thr_[n] = n^{-alpha}, n = 0 unused
};

// Renewal mass function q_n of the offset chain together with the derived
// constants; q decays like c_q n^(alpha-1).
struct RenewalTable {
    double alpha = 0.0;
    std::vector<double> q;  // q[0..n_max], q[0] = 1
    double q2_sum = 0.0;    // sum of q_l^2 over all l >= 0 (analytic tail added)
    double c_q = 0.0;
    double c1 = 0.0;        // pair-coalescence asymptotic constant
    double c2 = 0.0;        // 1 / q2_sum
    double c3 = 0.0;        // variance scaling constant, c(n)^2 = c3 n^{2 alpha + 1}
    std::int64_t max_index() const { return static_cast<std::int64_t>(q.size()) - 1; }
};

RenewalTable build_renewal_table(double alpha, std::int64_t n_max);

// P(chain through site i meets chain through site j), the two sites lying on
// two lines that share everything at indices <= 0; i = 0 covers the
// single-line case P(0 ~ j).
double coalescence_exact(const RenewalTable& tbl, std::int64_t i, std::int64_t j);

// Same split geometry with the shared prefix ending at s_index; i, j > s_index.
double branch_coalescence_exact(const RenewalTable& tbl, std::int64_t i,
                                std::int64_t j, std::int64_t s_index);

// Weight of ancestor -k < 0 in the best prediction of site n > 0:
// sum_{l=1}^{n} q_{n-l} mu_pmf(k + l).
double copy_weight(const RenewalTable& tbl, std::int64_t n, std::int64_t k);

}  // namespace bfbm
