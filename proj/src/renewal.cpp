#include "bfbm/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bfbm/gamma.hpp"
#include "bfbm/summation.hpp"

namespace bfbm {

namespace {

constexpr std::int64_t kThresholdTable = 1024;

double dot(const double* a, const double* b, std::int64_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw std::domain_error("renewal: alpha must lie in (0, 1/2)");
}

}  // namespace

double mu_tail(std::int64_t n, double alpha) {
    check_alpha(alpha);
    if (n < 1) throw std::invalid_argument("mu_tail: n >= 1 required");
    return std::pow(static_cast<double>(n), -alpha);
}

double mu_pmf(std::int64_t n, double alpha) {
    check_alpha(alpha);
    if (n < 1) throw std::invalid_argument("mu_pmf: n >= 1 required");
    // n^-a - (n+1)^-a evaluated as n^-a * (1 - (1+1/n)^-a) to keep full
    // relative precision for large n
    double nn = static_cast<double>(n);
    return std::pow(nn, -alpha) * (-std::expm1(-alpha * std::log1p(1.0 / nn)));
}

OffsetSampler::OffsetSampler(double alpha) : alpha_(alpha), inv_alpha_(1.0 / alpha) {
    check_alpha(alpha);
    thr_.resize(kThresholdTable + 2);
    thr_[0] = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= kThresholdTable + 1; ++n)
        thr_[n] = std::pow(static_cast<double>(n), -alpha_);
}

std::int64_t OffsetSampler::sample(double u) const {
    if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("OffsetSampler: u must lie in (0,1]");
    // R = n iff thr[n+1] < u <= thr[n]
    if (u > thr_[2]) return 1;
    if (u > thr_[kThresholdTable + 1]) {
        std::int64_t lo = 2, hi = kThresholdTable + 1;
        // invariant: u <= thr_[lo], u > thr_[hi]
        while (hi - lo > 1) {
            std::int64_t mid = (lo + hi) / 2;
            if (u > thr_[mid])
                hi = mid;
            else
                lo = mid;
        }
        return lo;
    }
    double v = std::pow(u, -inv_alpha_);
    if (!(v < 9.0e18)) return std::numeric_limits<std::int64_t>::max() / 4;
    return static_cast<std::int64_t>(v);
}

RenewalTable build_renewal_table(double alpha, std::int64_t n_max) {
    check_alpha(alpha);
    if (n_max < 1) throw std::invalid_argument("build_renewal_table: n_max >= 1 required");
    RenewalTable tbl;
    tbl.alpha = alpha;
    std::int64_t n = n_max;
    std::vector<double> murev(n + 1, 0.0);  // murev[N - k] = mu_pmf(k)
    for (std::int64_t k = 1; k <= n; ++k) murev[n - k] = mu_pmf(k, alpha);
    tbl.q.assign(n + 1, 0.0);
    tbl.q[0] = 1.0;
    for (std::int64_t m = 1; m <= n; ++m)
        tbl.q[m] = dot(murev.data() + (n - m), tbl.q.data(), m);

    HurstParams p = hurst_from_alpha(alpha);
    tbl.c_q = p.c_q;
    NeumaierSum s2;
    for (double v : tbl.q) s2.add(v * v);
    // tail sum_{l > N} q_l^2 ~ integral of c_q^2 l^{2a-2} from N
    double tail = tbl.c_q * tbl.c_q * std::pow(static_cast<double>(n), 2.0 * alpha - 1.0) /
                  (1.0 - 2.0 * alpha);
    tbl.q2_sum = s2.value() + tail;
    tbl.c2 = 1.0 / tbl.q2_sum;
    double ga = gamma_fn(alpha);
    double g1a = gamma_fn(1.0 - alpha);
    tbl.c1 = tbl.c2 * gamma_fn(1.0 - 2.0 * alpha) / (ga * g1a * g1a * g1a);
    tbl.c3 = tbl.c1 / (alpha * (2.0 * alpha + 1.0));
    return tbl;
}

double coalescence_exact(const RenewalTable& tbl, std::int64_t i, std::int64_t j) {
    if (i < 0 || j < 0) throw std::invalid_argument("coalescence_exact: indices >= 0 required");
    if (i > j) std::swap(i, j);
    std::int64_t n = tbl.max_index();
    if (j > n) throw std::invalid_argument("coalescence_exact: index beyond table");
    std::int64_t len = n - j + 1;  // r = 0 .. n-j
    double s = dot(tbl.q.data() + i, tbl.q.data() + j, len);
    // analytic tail over m = i + r > n - (j - i):
    // sum of c_q^2 m^{a-1}(m+d)^{a-1} with d = j - i, expanded to two orders
    double d = static_cast<double>(j - i);
    double m0 = static_cast<double>(n - (j - i) + 1);
    double a = tbl.alpha;
    double cq2 = tbl.c_q * tbl.c_q;
    double tail = cq2 * (std::pow(m0, 2.0 * a - 1.0) / (1.0 - 2.0 * a) +
                         (a - 1.0) * d * std::pow(m0, 2.0 * a - 2.0) / (2.0 - 2.0 * a));
    return tbl.c2 * (s + tail);
}

double branch_coalescence_exact(const RenewalTable& tbl, std::int64_t i, std::int64_t j,
                                std::int64_t s_index) {
    if (i <= s_index || j <= s_index)
        throw std::invalid_argument("branch_coalescence_exact: i, j must exceed s_index");
    return coalescence_exact(tbl, i - s_index, j - s_index);
}

double copy_weight(const RenewalTable& tbl, std::int64_t n, std::int64_t k) {
    if (n < 1 || k < 1) throw std::invalid_argument("copy_weight: n, k >= 1 required");
    if (n > tbl.max_index()) throw std::invalid_argument("copy_weight: n beyond table");
    NeumaierSum s;
    for (std::int64_t l = 1; l <= n; ++l) s.add(tbl.q[n - l] * mu_pmf(k + l, tbl.alpha));
    return s.value();
}

}  // namespace bfbm
