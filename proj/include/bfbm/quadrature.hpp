#pragma once

#include <functional>

#include "bfbm/common.hpp"

namespace bfbm {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // error estimate actually achieved
    int panels = 0;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b]; splits the worst panel until the
// summed error estimate drops below abs_tol. Throws ToleranceError if the
// panel budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_panels = 4000);

// Integral over [x0, infinity) of an integrand decaying like x^(p-1) with
// p < 0 (here p = 2 alpha - 1). Substituting y = x^p makes the transformed
// integrand bounded at y = 0, so plain adaptive quadrature applies.
QuadratureResult integrate_power_tail(const std::function<double(double)>& f,
                                      double x0, double p, double abs_tol,
                                      int max_panels = 4000);

}  // namespace bfbm
