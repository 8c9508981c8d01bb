#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bfbm/tree.hpp"

namespace bfbm {

// Urn indexed by a branching tree: branch b carries sites on its own index
// range (floor(birth*n), floor(death*n)], earlier sites are read through the
// ancestral line, and the shared past window -W..0 hangs below the root.
struct TreeUrnConfig {
    double alpha = 0.0;
    std::int64_t steps_per_unit = 1;  // sites per unit of tree time
    std::int64_t window_past = 0;
    std::uint64_t seed = 0;
    std::int64_t forced_offset = 0;  // testing hook, as in UrnConfig
};

struct EdgeSegment {
    std::int64_t first = 1;   // first own site
    std::int64_t last = 0;    // last own site; empty when last < first
    std::int64_t base = 0;    // walk value at site first-1 on this line
    std::vector<std::int8_t> type;
    std::vector<std::int64_t> walk;  // absolute walk at own sites
    std::vector<std::int32_t> component;
};

struct TreeUrnRealization {
    TreeUrnConfig cfg;
    TreeTopology tree;
    std::vector<EdgeSegment> segments;        // by branch id
    std::vector<std::int32_t> past_component;  // sites -W..0 at slot site+W
    std::int64_t component_total = 0;

    std::int64_t last_site(std::int32_t branch) const { return segments[static_cast<std::size_t>(branch)].last; }
    std::int64_t walk_at(std::int32_t branch, std::int64_t k) const;
    std::int8_t type_at(std::int32_t branch, std::int64_t k) const;
    std::int32_t component_at(std::int32_t branch, std::int64_t k) const;
};

TreeUrnRealization simulate_tree_urn(const TreeTopology& tree, const TreeUrnConfig& cfg,
                                     std::uint64_t replica);

// Rescaled walk of one branch, read through its ancestral line and divided
// by c(n) = sqrt(c3 n^{2 alpha + 1}); linear interpolation between sites.
double branch_walk(const TreeUrnRealization& r, double c3, std::int32_t branch, double t);
std::vector<double> branch_walk(const TreeUrnRealization& r, double c3, std::int32_t branch,
                                const std::vector<double>& t_grid);

struct CovEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Empirical covariance of two branch walks across independent realizations.
CovEstimate empirical_cross_covariance(const std::vector<TreeUrnRealization>& reals, double c3,
                                       std::int32_t b1, std::int32_t b2, double t1, double t2);

// Sparse engine for the two-line split geometry: lines A and B share sites
// <= m and run to n; returns the endpoint sums (S_A(n), S_B(n)) per replica.
std::vector<std::pair<double, double>> split_pair_endpoint_sums(double alpha, std::int64_t n,
                                                                std::int64_t m,
                                                                std::int64_t window_past,
                                                                std::int64_t replicas,
                                                                std::uint64_t seed);

}  // namespace bfbm
