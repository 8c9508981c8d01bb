#pragma once

#include <cmath>

namespace bfbm {

// All model constants derived from the Hurst index H in (1/2, 1),
// alpha = H - 1/2 in (0, 1/2).
struct HurstParams {
    double H = 0.0;
    double alpha = 0.0;
    double c_H = 0.0;    // kernel normalizer, Var B(t) = t^{2H}
    double c_rho = 0.0;  // closed-form covariance coefficient, in (0, 1]
    double c_q = 0.0;    // renewal asymptotic constant sin(pi alpha)/pi
};

HurstParams make_hurst_params(double H);
HurstParams hurst_from_alpha(double alpha);

// Leading-order speed of the maximum over the tree's branches at time t.
double m_yule(double t, const HurstParams& p);
double m_binary(double t, const HurstParams& p);
// Maximum of e^t i.i.d. Gaussians of variance t^{2H}, for comparison.
double iid_benchmark(double t, const HurstParams& p);

// Fractional Brownian covariance (one path).
double fbm_cov(double t1, double t2, const HurstParams& p);

}  // namespace bfbm
