#include "bfbm/hyp2f1.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bfbm/gamma.hpp"

namespace bfbm {

namespace {

bool near_nonpositive_integer(double x) {
    return x <= 1e-12 && std::abs(x - std::round(x)) < 1e-12;
}

double series_2f1(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 100000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 0.5e-15 * std::abs(sum)) return sum;
        if (term == 0.0) return sum;  // terminating (polynomial) case
    }
    throw std::runtime_error("hyp2f1: series did not converge at z = " + std::to_string(z));
}

// connection formula in powers of 1 - z, for z close to 1 from below;
// requires c - a - b away from the integers
double connection_2f1(double a, double b, double c, double z) {
    double d = c - a - b;
    if (std::abs(d - std::round(d)) < 1e-9)
        throw std::domain_error("hyp2f1: connection formula degenerate (c-a-b near integer)");
    double w = 1.0 - z;
    double coef1 = gamma_fn(c) * gamma_fn(d) / (gamma_fn(c - a) * gamma_fn(c - b));
    double term1 = coef1 * series_2f1(a, b, a + b - c + 1.0, w);
    double coef2;
    if (near_nonpositive_integer(a) || near_nonpositive_integer(b))
        coef2 = 0.0;  // 1/Gamma at a pole
    else
        coef2 = gamma_fn(c) * gamma_fn(-d) / (gamma_fn(a) * gamma_fn(b));
    double term2 = coef2 == 0.0 ? 0.0 : coef2 * std::pow(w, d) * series_2f1(c - a, c - b, d + 1.0, w);
    return term1 + term2;
}

// dispatch for 0 <= z < 1
double eval_nonneg(double a, double b, double c, double z) {
    if (z <= 0.9) return series_2f1(a, b, c, z);
    return connection_2f1(a, b, c, z);
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
    if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(z))
        throw std::domain_error("hyp2f1: nan argument");
    if (near_nonpositive_integer(c)) throw std::domain_error("hyp2f1: c at a pole");
    if (z >= 1.0) throw std::domain_error("hyp2f1: argument z >= 1 outside supported region");
    if (z == 0.0) return 1.0;
    if (z > 0.0) return eval_nonneg(a, b, c, z);
    if (z >= -0.9) return series_2f1(a, b, c, z);
    // Pfaff: F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1)); the new argument
    // lies in (0,1) and may itself need the connection formula
    double w = z / (z - 1.0);
    return std::pow(1.0 - z, -b) * eval_nonneg(c - a, b, c, w);
}

}  // namespace bfbm
