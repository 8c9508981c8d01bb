#include "bfbm/constants.hpp"

#include <stdexcept>
#include <string>

#include "bfbm/gamma.hpp"

namespace bfbm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
}  // namespace

HurstParams make_hurst_params(double H) {
    if (!(H > 0.5) || !(H < 1.0))
        throw std::domain_error("make_hurst_params: H must lie in (1/2, 1), got " +
                                std::to_string(H));
    HurstParams p;
    p.H = H;
    p.alpha = H - 0.5;
    // Gamma(-H) < 0 for H in (1/2, 1), so the radicand is positive.
    p.c_H = std::sqrt(-std::pow(2.0, -2.0 * H) * gamma_fn(-H) * gamma_fn(H + 0.5) / kSqrtPi);
    p.c_rho = kSqrtPi * std::pow(2.0, 2.0 * H - 1.0) / (gamma_fn(1.0 - H) * gamma_fn(H + 0.5));
    p.c_q = std::sin(kPi * p.alpha) / kPi;
    return p;
}

HurstParams hurst_from_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw std::domain_error("hurst_from_alpha: alpha must lie in (0, 1/2), got " +
                                std::to_string(alpha));
    return make_hurst_params(alpha + 0.5);
}

double m_yule(double t, const HurstParams& p) {
    return std::pow(t, p.H + 0.5) * std::sqrt(2.0) / (p.c_H * (p.H + 0.5));
}

double m_binary(double t, const HurstParams& p) {
    return m_yule(t, p) * std::sqrt(std::log(2.0));
}

double iid_benchmark(double t, const HurstParams& p) {
    return std::sqrt(2.0) * std::pow(t, p.H + 0.5);
}

double fbm_cov(double t1, double t2, const HurstParams& p) {
    double h2 = 2.0 * p.H;
    return 0.5 * (std::pow(std::abs(t1), h2) + std::pow(std::abs(t2), h2) -
                  std::pow(std::abs(t1 - t2), h2));
}

}  // namespace bfbm
