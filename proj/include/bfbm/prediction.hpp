#pragma once

#include <cstdint>
#include <vector>

#include "bfbm/constants.hpp"

namespace bfbm {

// Prediction kernel: weight density of the past increment at time s_neg < 0
// in the conditional mean of the value at time t > 0.
double g_kernel(double t, double s_neg, const HurstParams& p, double abs_tol = 1e-10);

// Cell-averaged weights for the G cells of the uniform past grid
// [-depth, 0]: the singular s^{-alpha} factor is averaged exactly over each
// cell, the smooth factor evaluated at the cell midpoint. Ordered from the
// cell at -depth up to the cell touching 0.
std::vector<double> g_cell_weights(double t, double depth, std::int64_t grid,
                                   const HurstParams& p);

struct BetaIdentity {
    double lhs = 0.0;  // quadrature of the desingularized integral
    double rhs = 0.0;  // closed form
};

// The substitution identity behind the weight asymptotics.
BetaIdentity beta_identity_check(double xi, double alpha, double abs_tol = 1e-10);

struct PredictionLevel {
    std::int64_t grid = 0;
    double mean_abs = 0.0;    // mean |conditioning oracle - weighted sum|
    double normalized = 0.0;  // mean_abs / t^H
};

// End-to-end check: sample fractional paths on the finest past grid, then on
// each coarser (nested, dyadic) grid compare the exact Gaussian-conditioning
// mean of B_t with the weighted increment sum. Common paths across levels.
// Returns one entry per level, coarsest first; `levels` grids double up to
// grid_finest.
std::vector<PredictionLevel> prediction_check(const HurstParams& p, double t, double depth,
                                              std::int64_t grid_finest, int levels,
                                              std::int64_t replicas, std::uint64_t seed);

}  // namespace bfbm
