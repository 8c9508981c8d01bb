#include "bfbm/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfbm/common.hpp"
#include "bfbm/gaussian_bfbm.hpp"
#include "bfbm/parallel.hpp"
#include "bfbm/quadrature.hpp"
#include "bfbm/rng.hpp"
#include "bfbm/stats.hpp"

namespace bfbm {

namespace {

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double cholesky_replica_max(const TreeTopology& disc, double t, const HurstParams& p,
                            std::uint64_t seed, std::uint64_t rep) {
    std::vector<EndpointNode> nodes;
    for (std::int32_t lf : disc.leaves()) nodes.push_back({lf, t});
    if (nodes.size() > (std::size_t{1} << 12))
        throw BudgetError("cholesky max: dense factorization beyond 2^12 leaves");
    EndpointSample s = sample_cholesky(disc, nodes, p, mix::combine(seed, rep), 1);
    return max_of(s.values[0]);
}

}  // namespace

std::vector<MaxResult> estimate_max(const MaxExperiment& exp) {
    if (exp.t_list.empty()) throw std::invalid_argument("estimate_max: t list empty");
    if (exp.replicas < 2) throw std::invalid_argument("estimate_max: replicas >= 2 required");
    if (exp.kind != TreeKind::yule && exp.kind != TreeKind::binary)
        throw std::invalid_argument("estimate_max: tree kind must be yule or binary");
    if (exp.method != "grem" && exp.method != "cholesky")
        throw std::invalid_argument("estimate_max: method must be grem or cholesky");
    HurstParams p = make_hurst_params(exp.H);

    for (double t : exp.t_list) {
        if (!(t > 0.0)) throw std::invalid_argument("estimate_max: t > 0 required");
        // expected leaf populations: e^t for Yule, 2^t for the binary tree
        if (exp.kind == TreeKind::yule && t > 12.0)
            throw BudgetError("estimate_max: Yule horizon beyond budget (e^t leaves, t <= 12); "
                              "estimated > 3e6 branches per replica");
        if (exp.kind == TreeKind::binary && t > 17.0)
            throw BudgetError("estimate_max: binary horizon beyond budget (2^t leaves, t <= 17)");
        if (exp.kind == TreeKind::binary && std::abs(t - std::round(t)) > 1e-9)
            throw std::invalid_argument("estimate_max: binary tree needs integer t");
    }

    std::vector<MaxResult> out;
    for (double t : exp.t_list) {
        std::int32_t k = exp.k_levels > 0 ? exp.k_levels
                                          : static_cast<std::int32_t>(std::ceil(t - 1e-9));
        MaxResult res;
        res.t = t;
        res.speed = exp.kind == TreeKind::yule ? m_yule(t, p) : m_binary(t, p);
        res.samples.resize(static_cast<std::size_t>(exp.replicas));
        parallel_for(static_cast<std::size_t>(exp.replicas), [&](std::size_t r) {
            std::uint64_t rep = static_cast<std::uint64_t>(r);
            TreeTopology tree = exp.kind == TreeKind::yule
                                    ? sample_yule(t, exp.seed, rep)
                                    : binary_tree(static_cast<std::int32_t>(std::llround(t)));
            TreeTopology disc = discretize(tree, k, t, true);
            double m = exp.method == "grem"
                           ? grem_leaf_max(disc, k, t, p, exp.seed, rep)
                           : cholesky_replica_max(disc, t, p, exp.seed, rep);
            res.samples[r] = m;
        });

        std::vector<double> ratios(res.samples.size());
        for (std::size_t i = 0; i < ratios.size(); ++i) ratios[i] = res.samples[i] / res.speed;
        MomentSummary ms = summarize(ratios);
        res.mean_ratio = ms.mean;
        res.sd_ratio = ms.sd;
        res.se_ratio = ms.sd / std::sqrt(static_cast<double>(ratios.size()));
        for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) res.quantiles.push_back(quantile(ratios, q));
        out.push_back(std::move(res));
    }
    return out;
}

double delta_f(std::int32_t i, std::int32_t k_levels, double t, const HurstParams& p) {
    if (k_levels < 1) throw std::invalid_argument("delta_f: k_levels >= 1 required");
    if (i < 0 || i > k_levels) throw std::invalid_argument("delta_f: level out of range");
    if (!(t > 0.0)) throw std::invalid_argument("delta_f: t > 0 required");
    if (i == 0) return std::sqrt(1.0 - p.c_rho) * std::pow(t, p.H);
    double step = t / static_cast<double>(k_levels);
    double hi = rho_closed(t, std::min(static_cast<double>(i) * step, t), p);
    double lo = rho_closed(t, static_cast<double>(i - 1) * step, p);
    return std::sqrt(2.0 * step) * std::sqrt(std::max(hi - lo, 0.0));
}

double bk_leading_order(const HurstParams& p) {
    double log2 = 0.69314718055994530942;
    return std::sqrt(2.0 * log2 * p.c_rho * 2.0 * p.H) / (p.H + 0.5);
}

double bk_quadrature(const HurstParams& p, double abs_tol) {
    double log2 = 0.69314718055994530942;
    double coef = std::sqrt(p.c_rho * 2.0 * p.H);
    auto f = [&](double x) { return coef * std::pow(1.0 - x, p.H - 0.5); };
    return std::sqrt(2.0 * log2) * integrate(f, 0.0, 1.0, abs_tol).value;
}

Envelope slepian_envelope(double t, const HurstParams& p, TreeKind kind) {
    if (!(t > 0.0)) throw std::invalid_argument("slepian_envelope: t > 0 required");
    // single split at x t: sqrt(2 x t) independent directions of spread
    // sqrt(c_rho) (1-x)^H t^H, maximized at x = 1/(1 + 2H)
    double x = 1.0 / (1.0 + 2.0 * p.H);
    double lower = std::sqrt(2.0 * p.c_rho * x) * std::pow(1.0 - x, p.H) *
                   std::pow(t, p.H + 0.5);
    double upper = iid_benchmark(t, p);
    if (kind == TreeKind::binary) {
        double sqlog2 = std::sqrt(0.69314718055994530942);
        lower *= sqlog2;
        upper *= sqlog2;
    }
    return {lower, upper};
}

}  // namespace bfbm
