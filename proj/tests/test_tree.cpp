#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfbm/stats.hpp"
#include "bfbm/tree.hpp"
#include "doctest.h"

using namespace bfbm;

TEST_CASE("deterministic binary tree structure") {
    TreeTopology t = binary_tree(3);
    REQUIRE(t.branches.size() == 15);
    CHECK(t.kind == TreeKind::binary);
    CHECK(t.horizon == doctest::Approx(3.0));
    CHECK(t.leaves().size() == 8);

    const Branch& root = t.branches[0];
    CHECK(root.parent == -1);
    CHECK(root.birth == doctest::Approx(0.0));
    CHECK(root.path_code == 1);
    REQUIRE(root.child_first >= 0);
    CHECK(t.branches[static_cast<std::size_t>(root.child_first)].path_code == 2);
    CHECK(t.branches[static_cast<std::size_t>(root.child_second)].path_code == 3);

    for (const Branch& b : t.branches) {
        if (t.is_leaf(b.id)) {
            CHECK(b.birth == doctest::Approx(3.0));
            CHECK(t.death(b.id) == doctest::Approx(3.0));
        } else {
            const Branch& c1 = t.branches[static_cast<std::size_t>(b.child_first)];
            const Branch& c2 = t.branches[static_cast<std::size_t>(b.child_second)];
            CHECK(c1.birth == doctest::Approx(b.birth + 1.0));
            CHECK(c2.birth == doctest::Approx(c1.birth));
            CHECK(c1.path_code == 2 * b.path_code);
            CHECK(c2.path_code == 2 * b.path_code + 1);
            CHECK(c1.parent == b.id);
            CHECK(c2.parent == b.id);
            CHECK(t.death(b.id) == doctest::Approx(c1.birth));
        }
    }
}

TEST_CASE("split times on the binary tree") {
    TreeTopology t = binary_tree(3);
    const double inf = std::numeric_limits<double>::infinity();
    std::int32_t a = t.branches[0].child_first;
    std::int32_t b = t.branches[0].child_second;
    CHECK(split_time(t, a, b) == doctest::Approx(1.0));
    CHECK(split_time(t, a, a) == inf);
    CHECK(split_time(t, 0, a) == inf);  // ancestor pair
    CHECK(split_time(t, a, 0) == inf);

    // cousins under the same grandparent split at the grandparent's split
    std::int32_t a1 = t.branches[static_cast<std::size_t>(a)].child_first;
    std::int32_t a2 = t.branches[static_cast<std::size_t>(a)].child_second;
    std::int32_t b1 = t.branches[static_cast<std::size_t>(b)].child_first;
    CHECK(split_time(t, a1, a2) == doctest::Approx(2.0));
    CHECK(split_time(t, a1, b1) == doctest::Approx(1.0));

    // deepest opposite-subtree leaves still split at the root
    std::vector<std::int32_t> lv = t.leaves();
    double lo = inf;
    for (std::int32_t x : lv)
        for (std::int32_t y : lv)
            if (x != y) lo = std::min(lo, split_time(t, x, y));
    CHECK(lo == doctest::Approx(1.0));
}

TEST_CASE("random trees are reproducible and nest across horizons") {
    TreeTopology t1 = sample_yule(3.0, 42, 0);
    TreeTopology t2 = sample_yule(3.0, 42, 0);
    REQUIRE(t1.branches.size() == t2.branches.size());
    for (std::size_t i = 0; i < t1.branches.size(); ++i) {
        CHECK(t1.branches[i].path_code == t2.branches[i].path_code);
        CHECK(t1.branches[i].birth == t2.branches[i].birth);
    }

    TreeTopology other = sample_yule(3.0, 42, 1);
    bool differs = other.branches.size() != t1.branches.size();
    if (!differs)
        for (std::size_t i = 0; i < t1.branches.size(); ++i)
            if (t1.branches[i].birth != other.branches[i].birth) differs = true;
    CHECK(differs);

    // the same lifetime streams drive every horizon, so shorter trees embed
    TreeTopology small = sample_yule(2.0, 42, 0);
    std::map<std::uint64_t, double> births;
    for (const Branch& b : t1.branches) births.emplace(b.path_code, b.birth);
    for (const Branch& b : small.branches) {
        auto it = births.find(b.path_code);
        REQUIRE(it != births.end());
        CHECK(b.birth == it->second);
    }
    CHECK(small.branches.size() <= t1.branches.size());
}

TEST_CASE("yule leaf counts have the right mean") {
    double acc = 0.0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r)
        acc += static_cast<double>(sample_yule(5.0, 7, static_cast<std::uint64_t>(r)).leaves().size());
    double mean = acc / reps;
    // E = e^5, sd ~ e^5, so 3 se ~ 4.5
    CHECK(std::abs(mean - std::exp(5.0)) < 4.5);
}

TEST_CASE("rescaled yule population is asymptotically exponential") {
    std::vector<double> x;
    const int reps = 2000;
    x.reserve(reps);
    for (int r = 0; r < reps; ++r)
        x.push_back(std::exp(-6.0) *
                    static_cast<double>(sample_yule(6.0, 19, static_cast<std::uint64_t>(r)).leaves().size()));
    KsResult ks = ks_test(x, [](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-v); });
    CHECK(ks.pvalue > 0.001);
}

TEST_CASE("split times are ultrametric") {
    TreeTopology t = sample_yule(4.0, 123, 5);
    std::vector<std::int32_t> lv = t.leaves();
    REQUIRE(lv.size() >= 3);
    std::size_t n = std::min<std::size_t>(lv.size(), 12);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                double ab = split_time(t, lv[i], lv[j]);
                double bc = split_time(t, lv[j], lv[k]);
                double ac = split_time(t, lv[i], lv[k]);
                // the two smallest of the three must coincide exactly
                double m1 = std::min({ab, bc, ac});
                int at_min = (ab == m1) + (bc == m1) + (ac == m1);
                CHECK(at_min >= 2);
                CHECK(ac >= std::min(ab, bc));
            }
}

TEST_CASE("discretization snaps split times onto the grid") {
    TreeTopology b = binary_tree(3);
    TreeTopology fixed = discretize(b, 3, 3.0, true);
    REQUIRE(fixed.branches.size() == b.branches.size());
    CHECK(fixed.kind == TreeKind::discretized);
    for (std::size_t i = 0; i < b.branches.size(); ++i)
        CHECK(fixed.branches[i].birth == b.branches[i].birth);

    TreeTopology y = sample_yule(2.0, 31, 2);
    TreeTopology left = discretize(y, 4, 2.0, true);
    TreeTopology right = discretize(y, 4, 2.0, false);
    const double step = 2.0 / 4.0;
    REQUIRE(left.branches.size() == y.branches.size());
    for (std::size_t i = 0; i < y.branches.size(); ++i) {
        CHECK(left.branches[i].id == y.branches[i].id);
        CHECK(left.branches[i].parent == y.branches[i].parent);
        CHECK(left.branches[i].path_code == y.branches[i].path_code);
        CHECK(left.branches[i].birth <= y.branches[i].birth + 1e-12);
        CHECK(right.branches[i].birth >= y.branches[i].birth - 1e-12);
        double g1 = left.branches[i].birth / step;
        double g2 = right.branches[i].birth / step;
        CHECK(std::abs(g1 - std::round(g1)) < 1e-9);
        CHECK(std::abs(g2 - std::round(g2)) < 1e-9);
        CHECK(right.branches[i].birth - left.branches[i].birth <= step + 1e-12);
    }
}

TEST_CASE("csv round trip preserves the tree exactly") {
    TreeTopology y = sample_yule(2.5, 99, 3);
    std::string text = tree_to_csv(y);
    TreeTopology back = tree_from_csv(text);
    REQUIRE(back.branches.size() == y.branches.size());
    CHECK(back.horizon == y.horizon);
    CHECK(back.kind == y.kind);
    for (std::size_t i = 0; i < y.branches.size(); ++i) {
        CHECK(back.branches[i].id == y.branches[i].id);
        CHECK(back.branches[i].parent == y.branches[i].parent);
        CHECK(back.branches[i].birth == y.branches[i].birth);
        CHECK(back.branches[i].path_code == y.branches[i].path_code);
        CHECK(back.branches[i].child_first == y.branches[i].child_first);
        CHECK(back.branches[i].child_second == y.branches[i].child_second);
    }

    CHECK_THROWS(tree_from_csv(""));
    CHECK_THROWS(tree_from_csv("branch_id,parent_id,birth_time\n0,,0.0\n"));
}
