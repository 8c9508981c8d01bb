#include "bfbm/gaussian_bfbm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "bfbm/gamma.hpp"
#include "bfbm/parallel.hpp"
#include "bfbm/quadrature.hpp"
#include "bfbm/rng.hpp"

namespace bfbm {

double kernel_K(double s, double t, const HurstParams& p) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_K: t > 0 required");
    if (s > t) return 0.0;
    if (s > 0.0) return std::pow(t - s, p.alpha) / p.c_H;
    return (std::pow(t - s, p.alpha) - std::pow(-s, p.alpha)) / p.c_H;
}

double rho_closed(double t, double s, const HurstParams& p) {
    if (s < 0.0 || s > t) throw std::invalid_argument("rho_closed: 0 <= s <= t required");
    return std::pow(t, 2.0 * p.H) - p.c_rho * std::pow(t - s, 2.0 * p.H);
}

namespace {

// integral over (0, infinity) of ((y+a)^alpha - y^alpha)((y+b)^alpha - y^alpha);
// the integrand decays like alpha^2 a b y^{2 alpha - 2}, so the tail beyond a
// finite cut is handled by the power-law substitution.
double double_tail_integral(double a, double b, double alpha, double abs_tol) {
    if (a == 0.0 || b == 0.0) return 0.0;
    // (y+c)^alpha - y^alpha via expm1/log1p: the naive difference loses all
    // precision for y >> c, and the tail substitution amplifies that noise by
    // y^{1/(2 alpha - 1) - 1}, stalling the adaptive rule as alpha -> 1/2.
    auto diff_pow = [alpha](double y, double c) {
        if (y == 0.0) return std::pow(c, alpha);
        return std::pow(y, alpha) * std::expm1(alpha * std::log1p(c / y));
    };
    auto f = [&](double y) { return diff_pow(y, a) * diff_pow(y, b); };
    double x0 = 8.0 * std::max({a, b, 1.0});
    QuadratureResult head = integrate(f, 0.0, x0, 0.5 * abs_tol);
    QuadratureResult tail = integrate_power_tail(f, x0, 2.0 * alpha - 1.0, 0.5 * abs_tol);
    return head.value + tail.value;
}

}  // namespace

double rho_kernel_quadrature(double t1, double t2, double s, const HurstParams& p,
                             double abs_tol) {
    if (s < 0.0 || s > std::min(t1, t2))
        throw std::invalid_argument("rho_kernel_quadrature: 0 <= s <= min(t1, t2) required");
    double ch2 = p.c_H * p.c_H;
    double past = double_tail_integral(t1, t2, p.alpha, 0.5 * abs_tol * ch2);
    double recent = 0.0;
    if (s > 0.0) {
        auto f = [&](double xi) {
            return std::pow(t1 - xi, p.alpha) * std::pow(t2 - xi, p.alpha);
        };
        recent = integrate(f, 0.0, s, 0.5 * abs_tol * ch2).value;
    }
    return (past + recent) / ch2;
}

double rho_hs_quadrature(double t1, double t2, double s, const HurstParams& p, double abs_tol) {
    if (s < 0.0 || s > std::min(t1, t2))
        throw std::invalid_argument("rho_hs_quadrature: 0 <= s <= min(t1, t2) required");
    double a = p.alpha;
    double e = 2.0 * a + 1.0;
    double boundary = 0.5 * (std::pow(t1, e) - std::pow(t1 - s, e) + std::pow(t2, e) -
                             std::pow(t2 - s, e));
    double pref =
        a * (2.0 * a + 1.0) * gamma_fn(1.0 - a) / (gamma_fn(1.0 - 2.0 * a) * gamma_fn(a));
    // the double-tail factor absorbs 1/alpha^2 from the two inner integrals
    double tail = double_tail_integral(t1 - s, t2 - s, a, abs_tol * a * a / pref) / (a * a);
    return boundary + pref * tail;
}

Matrix endpoint_covariance(const TreeTopology& tree, const std::vector<EndpointNode>& nodes,
                           const HurstParams& p) {
    std::size_t n = nodes.size();
    Matrix cov(n);
    std::map<std::tuple<double, double, double>, double> cache;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double ti = nodes[i].time;
            double tj = nodes[j].time;
            double split = split_time(tree, nodes[i].branch, nodes[j].branch);
            double s = std::min({ti, tj, split});
            double v;
            if (s >= std::min(ti, tj)) {
                v = fbm_cov(ti, tj, p);  // overlap covers the shorter time: one path
            } else if (ti == tj) {
                v = rho_closed(ti, s, p);
            } else {
                double lo = std::min(ti, tj), hi = std::max(ti, tj);
                auto key = std::make_tuple(hi, lo, s);
                auto it = cache.find(key);
                if (it == cache.end())
                    it = cache.emplace(key, rho_kernel_quadrature(hi, lo, s, p)).first;
                v = it->second;
            }
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

EndpointSample sample_cholesky(const TreeTopology& tree, const std::vector<EndpointNode>& nodes,
                               const HurstParams& p, std::uint64_t seed, std::int64_t replicas) {
    if (nodes.empty()) throw std::invalid_argument("sample_cholesky: nodes required");
    Matrix l = endpoint_covariance(tree, nodes, p);
    double t_max = 0.0;
    for (const EndpointNode& nd : nodes) t_max = std::max(t_max, nd.time);
    cholesky_jitter(l, std::pow(std::max(t_max, 1e-12), 2.0 * p.H));

    EndpointSample out;
    out.nodes = nodes;
    out.method = "cholesky";
    out.values.resize(static_cast<std::size_t>(replicas));
    std::size_t n = nodes.size();
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        KeyedRng rng({seed, static_cast<std::uint64_t>(r), kKindNormal});
        std::vector<double> z(n);
        for (double& v : z) v = rng.next_normal();
        out.values[r] = lower_apply(l, z);
    });
    return out;
}

namespace {

// effective end of a branch when leaf lines continue past the horizon
double death_extended(const TreeTopology& tree, std::int32_t b, double t_eval) {
    double d = tree.death(b);
    if (tree.is_leaf(b)) return std::max(d, t_eval);
    return d;
}

}  // namespace

WhitenoiseSample sample_whitenoise_tree(const TreeTopology& tree, double dt, double t_eval,
                                        double s_past, const HurstParams& p, std::uint64_t seed,
                                        std::int64_t replicas) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_whitenoise_tree: dt > 0 required");
    if (s_past < 0.0) throw std::invalid_argument("sample_whitenoise_tree: s_past >= 0 required");
    if (!(t_eval > 0.0)) throw std::invalid_argument("sample_whitenoise_tree: t_eval > 0 required");

    std::vector<std::int32_t> leaf_ids = tree.leaves();
    std::size_t n_leaves = leaf_ids.size();
    double sq = std::sqrt(dt);
    std::int64_t cells_past = static_cast<std::int64_t>(std::ceil(s_past / dt - 1e-9));
    std::int64_t cells_fwd = static_cast<std::int64_t>(std::ceil(t_eval / dt - 1e-9));

    // per-edge owned cells: leftmost cell whose left endpoint is >= birth
    std::vector<std::pair<std::int64_t, std::int64_t>> owned(tree.branches.size());
    double covered = 0.0;
    for (const Branch& b : tree.branches) {
        double dy = death_extended(tree, b.id, t_eval);
        std::int64_t c0 = static_cast<std::int64_t>(std::ceil(b.birth / dt - 1e-9));
        std::int64_t c1 = std::min(cells_fwd, static_cast<std::int64_t>(std::ceil(dy / dt - 1e-9)));
        owned[static_cast<std::size_t>(b.id)] = {c0, c1};  // cells c0..c1-1
    }
    std::vector<double> weight(static_cast<std::size_t>(cells_past + cells_fwd));
    for (std::int64_t c = -cells_past; c < cells_fwd; ++c)
        weight[static_cast<std::size_t>(c + cells_past)] =
            kernel_K((static_cast<double>(c) + 0.5) * dt, t_eval, p) * sq;
    for (double wv : weight) covered += wv * wv;
    double deficit = std::pow(t_eval, 2.0 * p.H) - covered;

    WhitenoiseSample out;
    out.variance_deficit = deficit;
    out.sample.method = "whitenoise";
    out.sample.nodes.reserve(n_leaves);
    for (std::int32_t lf : leaf_ids) out.sample.nodes.push_back({lf, t_eval});
    out.sample.values.resize(static_cast<std::size_t>(replicas));

    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        std::uint64_t rep = static_cast<std::uint64_t>(r);
        double past_sum = 0.0;
        for (std::int64_t c = -cells_past; c < 0; ++c) {
            KeyedRng rng({seed, rep, kKindNoise, 0, static_cast<std::uint64_t>(c)});
            past_sum += weight[static_cast<std::size_t>(c + cells_past)] * rng.next_normal();
        }
        // accumulate down the tree; branches are stored parents-first
        std::vector<double> acc(tree.branches.size(), 0.0);
        std::vector<double> vals(n_leaves, 0.0);
        std::size_t leaf_slot = 0;
        for (const Branch& b : tree.branches) {
            double s = b.parent < 0 ? past_sum : acc[static_cast<std::size_t>(b.parent)];
            auto [c0, c1] = owned[static_cast<std::size_t>(b.id)];
            for (std::int64_t c = c0; c < c1; ++c) {
                KeyedRng rng({seed, rep, kKindNoise, b.path_code, static_cast<std::uint64_t>(c)});
                s += weight[static_cast<std::size_t>(c + cells_past)] * rng.next_normal();
            }
            acc[static_cast<std::size_t>(b.id)] = s;
        }
        for (std::int32_t lf : leaf_ids) vals[leaf_slot++] = acc[static_cast<std::size_t>(lf)];
        out.sample.values[r] = std::move(vals);
    });
    return out;
}

double whitenoise_cov_exact(const TreeTopology& tree, std::int32_t b1, std::int32_t b2, double dt,
                            double t_eval, double s_past, const HurstParams& p) {
    double split = split_time(tree, b1, b2);
    std::int64_t cells_past = static_cast<std::int64_t>(std::ceil(s_past / dt - 1e-9));
    std::int64_t cells_fwd = static_cast<std::int64_t>(std::ceil(t_eval / dt - 1e-9));
    double shared_until = std::min(split, t_eval);
    // a cell is shared while its owning edge lies on both ancestral lines,
    // i.e. while its left endpoint is below the split time
    std::int64_t cells_shared =
        std::min(cells_fwd, static_cast<std::int64_t>(std::ceil(shared_until / dt - 1e-9)));
    double sum = 0.0;
    for (std::int64_t c = -cells_past; c < cells_shared; ++c) {
        double w = kernel_K((static_cast<double>(c) + 0.5) * dt, t_eval, p);
        sum += w * w * dt;
    }
    return sum;
}

namespace {

struct GremPlan {
    std::vector<double> level_sd;  // level_sd[i], i = 0..K
    double delta = 0.0;
};

GremPlan grem_plan(std::int32_t k_levels, double t, const HurstParams& p) {
    if (k_levels < 1) throw std::invalid_argument("grem: k_levels >= 1 required");
    if (!(t > 0.0)) throw std::invalid_argument("grem: t > 0 required");
    GremPlan plan;
    plan.delta = t / static_cast<double>(k_levels);
    plan.level_sd.resize(static_cast<std::size_t>(k_levels) + 1);
    plan.level_sd[0] = std::sqrt(1.0 - p.c_rho) * std::pow(t, p.H);
    double prev = rho_closed(t, 0.0, p);
    for (std::int32_t i = 1; i <= k_levels; ++i) {
        double cur = rho_closed(t, std::min(static_cast<double>(i) * plan.delta, t), p);
        plan.level_sd[static_cast<std::size_t>(i)] = std::sqrt(std::max(cur - prev, 0.0));
        prev = cur;
    }
    return plan;
}

// one replica of the level construction; returns per-leaf values
std::vector<double> grem_replica(const TreeTopology& tree, const GremPlan& plan,
                                 std::int32_t k_levels, double t, std::uint64_t seed,
                                 std::uint64_t rep) {
    KeyedRng common({seed, rep, kKindLevel, 0, 0});
    double z0 = plan.level_sd[0] * common.next_normal();
    std::vector<double> acc(tree.branches.size(), 0.0);
    for (const Branch& b : tree.branches) {
        double s = b.parent < 0 ? z0 : acc[static_cast<std::size_t>(b.parent)];
        double dy = death_extended(tree, b.id, t);
        // level i belongs to the edge alive over ((i-1) delta, i delta]
        std::int32_t i0 = static_cast<std::int32_t>(std::floor(b.birth / plan.delta + 1e-9)) + 1;
        for (std::int32_t i = i0; i <= k_levels; ++i) {
            double tau = static_cast<double>(i) * plan.delta;
            if (tau > dy + 1e-9 * plan.delta) break;
            KeyedRng rng({seed, rep, kKindLevel, b.path_code, static_cast<std::uint64_t>(i)});
            s += plan.level_sd[static_cast<std::size_t>(i)] * rng.next_normal();
        }
        acc[static_cast<std::size_t>(b.id)] = s;
    }
    std::vector<double> vals;
    for (const Branch& b : tree.branches)
        if (b.child_first < 0) vals.push_back(acc[static_cast<std::size_t>(b.id)]);
    return vals;
}

}  // namespace

EndpointSample sample_grem_endpoint(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                                    const HurstParams& p, std::uint64_t seed,
                                    std::int64_t replicas) {
    if (tree_disc.kind != TreeKind::discretized)
        throw std::invalid_argument("sample_grem_endpoint: tree must be discretized");
    GremPlan plan = grem_plan(k_levels, t, p);
    EndpointSample out;
    out.method = "grem";
    for (std::int32_t lf : tree_disc.leaves()) out.nodes.push_back({lf, t});
    out.values.resize(static_cast<std::size_t>(replicas));
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        out.values[r] = grem_replica(tree_disc, plan, k_levels, t, seed, static_cast<std::uint64_t>(r));
    });
    return out;
}

double grem_cov_exact(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                      std::int32_t b1, std::int32_t b2, const HurstParams& p) {
    GremPlan plan = grem_plan(k_levels, t, p);
    double split = split_time(tree_disc, b1, b2);
    if (split >= t) return std::pow(t, 2.0 * p.H);
    // shared levels are those with i delta <= split
    std::int32_t shared = static_cast<std::int32_t>(std::floor(split / plan.delta + 1e-9));
    shared = std::min(shared, k_levels);
    return rho_closed(t, std::min(static_cast<double>(shared) * plan.delta, t), p);
}

double grem_leaf_max(const TreeTopology& tree_disc, std::int32_t k_levels, double t,
                     const HurstParams& p, std::uint64_t seed, std::uint64_t replica) {
    if (tree_disc.kind != TreeKind::discretized)
        throw std::invalid_argument("grem_leaf_max: tree must be discretized");
    GremPlan plan = grem_plan(k_levels, t, p);
    std::vector<double> vals = grem_replica(tree_disc, plan, k_levels, t, seed, replica);
    return *std::max_element(vals.begin(), vals.end());
}

}  // namespace bfbm
