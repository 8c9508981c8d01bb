#pragma once

#include <cstdint>
#include <vector>

#include "bfbm/constants.hpp"
#include "bfbm/hashmap.hpp"
#include "bfbm/renewal.hpp"
#include "bfbm/rng.hpp"

namespace bfbm {

// One line of the urn: individuals at integer sites -window_past..n_total,
// each site i > -window_past copies from site i - R_i; sites whose ancestor
// falls below the window start fresh components with independent +-1 types.
struct UrnConfig {
    double alpha = 0.0;
    std::int64_t n_total = 0;
    std::int64_t window_past = 0;
    std::int64_t steps_per_unit = 1;
    std::uint64_t seed = 0;
    // testing hook: every offset takes this value when > 0, collapsing the
    // line into a single component
    std::int64_t forced_offset = 0;
};

struct LinearRealization {
    UrnConfig cfg;
    std::vector<std::int8_t> type;        // site i at slot i + window_past
    std::vector<std::int32_t> component;  // dense component ids, same layout
    std::vector<std::int64_t> walk;       // walk[k] = sum of types at 1..k, k <= n_total
    std::int64_t component_total = 0;

    std::int8_t type_at(std::int64_t site) const { return type[site + cfg.window_past]; }
    std::int32_t component_at(std::int64_t site) const { return component[site + cfg.window_past]; }
};

LinearRealization simulate_linear(const UrnConfig& cfg, std::uint64_t replica);

// c(n)^2 = c3 n^{2 alpha + 1}; the rescaled walk S^{(n)}(t) interpolates
// linearly between grid sites.
double scaling_c(double c3, std::int64_t steps_per_unit, double alpha);
double rescaled_path(const LinearRealization& r, double c3, double t);

// Sparse engine for huge past windows: resolves component roots on demand
// through the static ancestral map, drawing offsets from the same keyed
// streams as simulate_linear.
class LazyUrn {
public:
    LazyUrn(double alpha, std::int64_t window_past, std::uint64_t seed, std::uint64_t replica);

    int type_at(std::int64_t site);
    std::int64_t root_of(std::int64_t site);

private:
    OffsetSampler sampler_;
    std::int64_t window_;
    std::uint64_t seed_;
    std::uint64_t replica_;
    FlatMap64 root_;  // site -> component root (roots point to themselves)
    std::vector<std::int64_t> stack_;
};

// Endpoint sums S_n over independent replicas via the sparse engine.
std::vector<double> simulate_sn_endpoints(double alpha, std::int64_t n,
                                          std::int64_t window_past, std::int64_t replicas,
                                          std::uint64_t seed);

// Monte Carlo estimate of the probability that the ancestral chains of
// (line A, i) and (line B, j) meet, the two lines sharing sites <= s_index.
struct McProbability {
    double p = 0.0;
    double se = 0.0;
    std::int64_t trials = 0;
};
McProbability branch_coalescence_mc(double alpha, std::int64_t i, std::int64_t j,
                                    std::int64_t s_index, std::int64_t window_past,
                                    std::int64_t trials, std::uint64_t seed);

// P(0 ~ d) for d = 0..n from the renewal table (analytic tails included).
std::vector<double> coalescence_profile(const RenewalTable& tbl, std::int64_t n);

// Var[S_n] / (c3 n^{2 alpha + 1}) assembled exactly from pair probabilities.
double exact_var_ratio(const RenewalTable& tbl, std::int64_t n);

// Cov[S_A(n), S_B(n)] / (c3 n^{2 alpha + 1}) for two lines splitting at site
// m, assembled exactly; compare with rho(1, 1, m/n).
double exact_split_cov_ratio(const RenewalTable& tbl, std::int64_t n, std::int64_t m);

}  // namespace bfbm
