#include "bfbm/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfbm/linalg.hpp"
#include "bfbm/parallel.hpp"
#include "bfbm/quadrature.hpp"
#include "bfbm/rng.hpp"

namespace bfbm {

namespace {

// the smooth factor of the kernel: integral over (0, t] of xi^alpha/(xi + s)
double g_smooth_integral(double t, double s, const HurstParams& p, double abs_tol) {
    auto f = [&](double xi) { return std::pow(xi, p.alpha) / (xi + s); };
    return integrate(f, 0.0, t, abs_tol).value;
}

}  // namespace

double g_kernel(double t, double s_neg, const HurstParams& p, double abs_tol) {
    if (!(t > 0.0)) throw std::invalid_argument("g_kernel: t > 0 required");
    if (!(s_neg < 0.0)) throw std::invalid_argument("g_kernel: s < 0 required");
    double s = -s_neg;
    return p.c_q * std::pow(s, -p.alpha) * g_smooth_integral(t, s, p, abs_tol);
}

std::vector<double> g_cell_weights(double t, double depth, std::int64_t grid,
                                   const HurstParams& p) {
    if (grid < 1) throw std::invalid_argument("g_cell_weights: grid >= 1 required");
    if (!(depth > 0.0)) throw std::invalid_argument("g_cell_weights: depth > 0 required");
    double h = depth / static_cast<double>(grid);
    std::vector<double> w(static_cast<std::size_t>(grid));
    double om = 1.0 - p.alpha;
    for (std::int64_t k = 0; k < grid; ++k) {
        // cell k covers times [-depth + k h, -depth + (k+1) h]; in distance
        // to the origin that is [lo, hi]. Boundaries as integer fractions of
        // depth so the last cell's lo is 0 exactly (h is not binary-exact in
        // general and depth - k h can round below 0, poisoning pow).
        double hi = depth * static_cast<double>(grid - k) / static_cast<double>(grid);
        double lo = depth * static_cast<double>(grid - k - 1) / static_cast<double>(grid);
        double avg_singular = (std::pow(hi, om) - std::pow(lo, om)) / (om * h);
        double mid = 0.5 * (lo + hi);
        w[static_cast<std::size_t>(k)] =
            p.c_q * avg_singular * g_smooth_integral(t, mid, p, 1e-10);
    }
    return w;
}

BetaIdentity beta_identity_check(double xi, double alpha, double abs_tol) {
    if (!(xi > 0.0)) throw std::invalid_argument("beta_identity_check: xi > 0 required");
    if (!(alpha > 0.0) || alpha > 0.5)
        throw std::invalid_argument("beta_identity_check: alpha in (0, 1/2] required");
    // substituting v = (1-x)^alpha makes the integrand bounded:
    // integral over (0,1) of (1-x)^{alpha-1} (xi+x)^{-alpha-1} dx
    auto f = [&](double v) {
        double x = 1.0 - std::pow(v, 1.0 / alpha);
        return std::pow(xi + x, -alpha - 1.0) / alpha;
    };
    BetaIdentity out;
    out.lhs = integrate(f, 0.0, 1.0, abs_tol).value;
    out.rhs = std::pow(xi, -alpha) / (alpha + alpha * xi);
    return out;
}

std::vector<PredictionLevel> prediction_check(const HurstParams& p, double t, double depth,
                                              std::int64_t grid_finest, int levels,
                                              std::int64_t replicas, std::uint64_t seed) {
    if (levels < 1) throw std::invalid_argument("prediction_check: levels >= 1 required");
    if (replicas < 2) throw std::invalid_argument("prediction_check: replicas >= 2 required");
    std::int64_t step = std::int64_t{1} << (levels - 1);
    if (grid_finest % step != 0)
        throw std::invalid_argument("prediction_check: grid_finest must allow dyadic coarsening");

    // finest past grid: times s_i = -depth + i h, i = 0..G-1 (the origin
    // value is identically zero and is not part of the observation vector)
    std::int64_t g_max = grid_finest;
    double h = depth / static_cast<double>(g_max);
    std::vector<double> times(static_cast<std::size_t>(g_max));
    for (std::int64_t i = 0; i < g_max; ++i)
        times[static_cast<std::size_t>(i)] = -depth + static_cast<double>(i) * h;

    Matrix l(static_cast<std::size_t>(g_max));
    for (std::int64_t i = 0; i < g_max; ++i)
        for (std::int64_t j = 0; j <= i; ++j) {
            double v = fbm_cov(-times[static_cast<std::size_t>(i)],
                               -times[static_cast<std::size_t>(j)], p) ;
            l(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
            l(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
        }
    cholesky_jitter(l, std::pow(depth, 2.0 * p.H));

    std::vector<std::vector<double>> paths(static_cast<std::size_t>(replicas));
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        KeyedRng rng({seed, static_cast<std::uint64_t>(r), kKindNormal});
        std::vector<double> z(static_cast<std::size_t>(g_max));
        for (double& v : z) v = rng.next_normal();
        paths[r] = lower_apply(l, z);
    });

    std::vector<PredictionLevel> out;
    for (int lev = 0; lev < levels; ++lev) {
        std::int64_t stride = std::int64_t{1} << (levels - 1 - lev);
        std::int64_t g = g_max / stride;

        // conditioning oracle weights on this level's grid
        Matrix sigma(static_cast<std::size_t>(g));
        std::vector<double> target(static_cast<std::size_t>(g));
        for (std::int64_t i = 0; i < g; ++i) {
            double ti = -times[static_cast<std::size_t>(i * stride)];
            target[static_cast<std::size_t>(i)] =
                0.5 * (std::pow(ti, 2.0 * p.H) + std::pow(t, 2.0 * p.H) -
                       std::pow(t + ti, 2.0 * p.H));
            for (std::int64_t j = 0; j <= i; ++j) {
                double v = fbm_cov(ti, -times[static_cast<std::size_t>(j * stride)], p);
                sigma(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
                sigma(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
            }
        }
        cholesky_jitter(sigma, std::pow(depth, 2.0 * p.H));
        std::vector<double> w_opt = cholesky_solve(sigma, target);

        std::vector<double> w_cells = g_cell_weights(t, depth, g, p);

        double acc = 0.0;
        for (std::int64_t r = 0; r < replicas; ++r) {
            const std::vector<double>& path = paths[static_cast<std::size_t>(r)];
            double oracle = 0.0;
            for (std::int64_t i = 0; i < g; ++i)
                oracle += w_opt[static_cast<std::size_t>(i)] *
                          path[static_cast<std::size_t>(i * stride)];
            // weighted increment sum; the final increment ends at B(0) = 0
            double riemann = 0.0;
            for (std::int64_t k = 0; k < g; ++k) {
                double b_lo = path[static_cast<std::size_t>(k * stride)];
                double b_hi = k + 1 < g ? path[static_cast<std::size_t>((k + 1) * stride)] : 0.0;
                riemann += w_cells[static_cast<std::size_t>(k)] * (b_hi - b_lo);
            }
            acc += std::abs(oracle - riemann);
        }
        PredictionLevel level;
        level.grid = g;
        level.mean_abs = acc / static_cast<double>(replicas);
        level.normalized = level.mean_abs / std::pow(t, p.H);
        out.push_back(level);
    }
    return out;
}

}  // namespace bfbm
