#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bfbm/constants.hpp"
#include "bfbm/linalg.hpp"
#include "bfbm/tree.hpp"

namespace bfbm {

// Driving kernel: weight of white noise at time s in the value at time t.
// Zero for s > t; for s <= 0 the past part of the noise is shared by every
// branch of the tree.
double kernel_K(double s, double t, const HurstParams& p);

// Covariance of two values at the same time t on branches splitting at s,
// in closed form: t^{2H} - c_rho (t - s)^{2H}.
double rho_closed(double t, double s, const HurstParams& p);

// Same covariance at distinct times from the kernel representation: the
// improper shared-past integral plus the integral over the shared interval
// (0, s], both by adaptive quadrature.
double rho_kernel_quadrature(double t1, double t2, double s, const HurstParams& p,
                             double abs_tol = 1e-8);

// Covariance from the urn scaling limit: closed boundary terms plus the
// normalized double-tail integral. Agrees with rho_kernel_quadrature.
double rho_hs_quadrature(double t1, double t2, double s, const HurstParams& p,
                         double abs_tol = 1e-8);

struct EndpointNode {
    std::int32_t branch = 0;
    double time = 0.0;
};

struct EndpointSample {
    std::vector<EndpointNode> nodes;
    std::vector<std::vector<double>> values;  // replicas x nodes
    std::string method;
};

// Covariance matrix of the node values: same-ancestral-line pairs use the
// one-path fractional covariance, split pairs use rho at the split time.
Matrix endpoint_covariance(const TreeTopology& tree, const std::vector<EndpointNode>& nodes,
                           const HurstParams& p);

// Exact joint sampler: factorizes endpoint_covariance and colors i.i.d.
// normals. Dense; meant for node counts up to a few thousand.
EndpointSample sample_cholesky(const TreeTopology& tree, const std::vector<EndpointNode>& nodes,
                               const HurstParams& p, std::uint64_t seed, std::int64_t replicas);

// White-noise sampler: one standard normal per dt-cell, cells on shared
// ancestry shared between branches, root line extended to -s_past. Each
// leaf value is the kernel-weighted sum over the cells of its line.
struct WhitenoiseSample {
    EndpointSample sample;          // one node per leaf, all at t_eval
    double variance_deficit = 0.0;  // truncated past variance, per endpoint
};
WhitenoiseSample sample_whitenoise_tree(const TreeTopology& tree, double dt, double t_eval,
                                        double s_past, const HurstParams& p, std::uint64_t seed,
                                        std::int64_t replicas);

// Exact covariance of the discretized white-noise construction for two
// leaves (sum over their shared cells); b1 == b2 gives the variance.
double whitenoise_cov_exact(const TreeTopology& tree, std::int32_t b1, std::int32_t b2, double dt,
                            double t_eval, double s_past, const HurstParams& p);

// Hierarchical level sampler on a discretized tree: level i in 1..K carries
// an independent increment of variance rho(t,t,i t/K) - rho(t,t,(i-1) t/K),
// shared along common ancestry; a level-0 increment of variance
// (1 - c_rho) t^{2H} is common to every leaf. Values are the leaf sums.
EndpointSample sample_grem_endpoint(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                                    const HurstParams& p, std::uint64_t seed,
                                    std::int64_t replicas);

// Exact pair covariance of the level construction: rho(t, t, delta * #shared
// levels), with delta = t / K.
double grem_cov_exact(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                      std::int32_t b1, std::int32_t b2, const HurstParams& p);

// Maximum of the level-sampler values over the leaves for one replica,
// without materializing per-leaf output (used by the max experiments).
double grem_leaf_max(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                     const HurstParams& p, std::uint64_t seed, std::uint64_t replica);

}  // namespace bfbm
