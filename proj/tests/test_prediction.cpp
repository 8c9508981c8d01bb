#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bfbm/constants.hpp"
#include "bfbm/prediction.hpp"
#include "doctest.h"

using namespace bfbm;

namespace {

const HurstParams& p85() {
    static HurstParams p = make_hurst_params(0.85);
    return p;
}

}  // namespace

TEST_CASE("prediction kernel reference values") {
    CHECK(g_kernel(1.0, -1.0, p85()) == doctest::Approx(0.13780353423520833).epsilon(1e-8));
    CHECK(g_kernel(1.0, -0.5, p85()) == doctest::Approx(0.26870034468358717).epsilon(1e-8));
    CHECK(g_kernel(1.0, -0.1, p85()) == doctest::Approx(0.9081653425736931).epsilon(1e-8));
    HurstParams p60 = make_hurst_params(0.6);
    CHECK(g_kernel(2.0, -1.0, p60) == doctest::Approx(0.10225817794116527).epsilon(1e-8));
}

TEST_CASE("prediction kernel positivity and decay in the past") {
    double prev = g_kernel(1.0, -0.05, p85());
    CHECK(prev > 0.0);
    for (double s : {-0.2, -0.5, -1.0, -2.0, -5.0, -20.0}) {
        double cur = g_kernel(1.0, s, p85());
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("prediction kernel is scale invariant") {
    // g(lambda t, lambda s) == g(t, s): substitute xi -> lambda xi
    CHECK(g_kernel(2.0, -1.0, p85()) ==
          doctest::Approx(g_kernel(1.0, -0.5, p85())).epsilon(2e-9));
    CHECK(g_kernel(3.0, -0.6, p85()) ==
          doctest::Approx(g_kernel(1.0, -0.2, p85())).epsilon(2e-9));
    HurstParams p60 = make_hurst_params(0.6);
    CHECK(g_kernel(4.0, -2.0, p60) == doctest::Approx(g_kernel(2.0, -1.0, p60)).epsilon(2e-9));
}

TEST_CASE("prediction kernel vanishes in the Brownian limit") {
    HurstParams p = make_hurst_params(0.5 + 1e-7);
    CHECK(g_kernel(1.0, -1.0, p) < 1e-5);
    CHECK(g_kernel(1.0, -1.0, p) > 0.0);
}

TEST_CASE("prediction kernel argument validation") {
    CHECK_THROWS_AS(g_kernel(0.0, -1.0, p85()), std::invalid_argument);
    CHECK_THROWS_AS(g_kernel(-1.0, -1.0, p85()), std::invalid_argument);
    CHECK_THROWS_AS(g_kernel(1.0, 0.0, p85()), std::invalid_argument);
    CHECK_THROWS_AS(g_kernel(1.0, 0.5, p85()), std::invalid_argument);
}

TEST_CASE("cell weights are positive and grow toward the origin") {
    std::vector<double> w = g_cell_weights(1.0, 1.0, 16, p85());
    REQUIRE(w.size() == 16);
    CHECK(w.front() > 0.0);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) CHECK(w[k + 1] > w[k]);
}

TEST_CASE("interior cell weight matches the kernel at the cell midpoint") {
    double depth = 1.0;
    std::int64_t grid = 16;
    double h = depth / static_cast<double>(grid);
    std::vector<double> w = g_cell_weights(1.0, depth, grid, p85());
    for (std::int64_t k : {std::int64_t{4}, std::int64_t{8}, std::int64_t{11}}) {
        double mid = -depth + (static_cast<double>(k) + 0.5) * h;
        double g = g_kernel(1.0, mid, p85());
        CHECK(w[static_cast<std::size_t>(k)] == doctest::Approx(g).epsilon(0.01));
    }
}

TEST_CASE("cell weight totals stabilize under grid refinement") {
    double depth = 2.0;
    auto total = [&](std::int64_t grid) {
        std::vector<double> w = g_cell_weights(1.3, depth, grid, p85());
        double h = depth / static_cast<double>(grid);
        double s = 0.0;
        for (double v : w) s += v * h;
        return s;
    };
    double coarse = total(64);
    double fine = total(512);
    CHECK(std::isfinite(fine));
    CHECK(fine > 0.0);
    CHECK(std::abs(fine - coarse) / fine < 0.01);
}

TEST_CASE("cell weight argument validation") {
    CHECK_THROWS_AS(g_cell_weights(1.0, 1.0, 0, p85()), std::invalid_argument);
    CHECK_THROWS_AS(g_cell_weights(1.0, 0.0, 8, p85()), std::invalid_argument);
    CHECK_THROWS_AS(g_cell_weights(1.0, -2.0, 8, p85()), std::invalid_argument);
}

TEST_CASE("desingularized beta integral matches its closed form") {
    for (double alpha : {0.2, 0.35}) {
        for (double xi : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            BetaIdentity b = beta_identity_check(xi, alpha);
            CHECK(std::abs(b.lhs - b.rhs) < 1e-7);
            CHECK(b.rhs == doctest::Approx(std::pow(xi, -alpha) / (alpha * (1.0 + xi)))
                               .epsilon(1e-12));
        }
    }
}

TEST_CASE("beta identity at the alpha = 1/2 endpoint") {
    BetaIdentity b = beta_identity_check(1.0, 0.5);
    CHECK(b.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.lhs - b.rhs) < 1e-7);
}

TEST_CASE("beta identity argument validation") {
    CHECK_THROWS_AS(beta_identity_check(0.0, 0.35), std::invalid_argument);
    CHECK_THROWS_AS(beta_identity_check(-1.0, 0.35), std::invalid_argument);
    CHECK_THROWS_AS(beta_identity_check(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(beta_identity_check(1.0, 0.6), std::invalid_argument);
}

TEST_CASE("weighted increment sums converge to the conditioning oracle") {
    std::vector<PredictionLevel> levels =
        prediction_check(p85(), 1.0, 5.0, 128, 3, 60, 20250601);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].grid == 32);
    CHECK(levels[1].grid == 64);
    CHECK(levels[2].grid == 128);
    for (const PredictionLevel& l : levels) {
        CHECK(std::isfinite(l.mean_abs));
        CHECK(l.mean_abs > 0.0);
        // t = 1 so the normalization is the identity
        CHECK(l.normalized == doctest::Approx(l.mean_abs).epsilon(1e-15));
    }
    CHECK(levels.back().normalized < levels.front().normalized);
    CHECK(levels.back().normalized < 0.5);
}

TEST_CASE("prediction check is deterministic in the seed") {
    std::vector<PredictionLevel> a = prediction_check(p85(), 1.0, 2.0, 32, 2, 12, 99);
    std::vector<PredictionLevel> b = prediction_check(p85(), 1.0, 2.0, 32, 2, 12, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].grid == b[i].grid);
        CHECK(a[i].mean_abs == b[i].mean_abs);
    }
    std::vector<PredictionLevel> c = prediction_check(p85(), 1.0, 2.0, 32, 2, 12, 100);
    CHECK(c.back().mean_abs != a.back().mean_abs);
}

TEST_CASE("prediction check argument validation") {
    CHECK_THROWS_AS(prediction_check(p85(), 1.0, 2.0, 98, 3, 12, 1), std::invalid_argument);
    CHECK_THROWS_AS(prediction_check(p85(), 1.0, 2.0, 32, 0, 12, 1), std::invalid_argument);
    CHECK_THROWS_AS(prediction_check(p85(), 1.0, 2.0, 32, 2, 1, 1), std::invalid_argument);
}
