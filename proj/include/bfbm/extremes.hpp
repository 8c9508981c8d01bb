#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bfbm/constants.hpp"
#include "bfbm/tree.hpp"

namespace bfbm {

struct MaxExperiment {
    TreeKind kind = TreeKind::yule;  // yule or binary
    std::vector<double> t_list;
    std::int64_t replicas = 0;
    std::string method = "grem";  // grem | cholesky
    std::int32_t k_levels = 0;    // 0 = default ceil(t)
    std::uint64_t seed = 0;
    double H = 0.0;
};

struct MaxResult {
    double t = 0.0;
    double speed = 0.0;  // kind-matched m(t)
    double mean_ratio = 0.0;
    double sd_ratio = 0.0;
    double se_ratio = 0.0;
    std::vector<double> quantiles;  // of the ratio, at {5, 25, 50, 75, 95}%
    std::vector<double> samples;    // raw per-replica maxima M(t)
};

// Monte Carlo of the leaf maximum over per-replica trees; refuses leaf
// populations beyond the memory/time budget instead of thrashing.
std::vector<MaxResult> estimate_max(const MaxExperiment& exp);

// Level ladder increment; i = 0 is the shared-past level.
double delta_f(std::int32_t i, std::int32_t k_levels, double t, const HurstParams& p);

// Leading-order speed functional for the binary tree, closed form; must
// coincide with m_binary(1).
double bk_leading_order(const HurstParams& p);
// The same functional by quadrature of the level-density integral.
double bk_quadrature(const HurstParams& p, double abs_tol = 1e-10);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
};

// Crude diagnostic bracket for the maximum: single-split coupling from
// below, independent-leaves benchmark from above.
Envelope slepian_envelope(double t, const HurstParams& p, TreeKind kind);

}  // namespace bfbm
