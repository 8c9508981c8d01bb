#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bfbm {

enum class TreeKind { yule, binary, discretized };

// Edge-style branch record: a branch is born at its parent's split and runs
// until its own split (or the horizon). A split ends the parent edge and
// creates two children with equal birth times.
struct Branch {
    std::int32_t id = 0;
    std::int32_t parent = -1;  // -1 for the root
    double birth = 0.0;
    std::uint64_t path_code = 1;  // root 1, children 2b and 2b+1
    std::int32_t child_first = -1;
    std::int32_t child_second = -1;
};

struct TreeTopology {
    std::vector<Branch> branches;
    double horizon = 0.0;
    TreeKind kind = TreeKind::yule;

    bool is_leaf(std::int32_t b) const { return branches[static_cast<std::size_t>(b)].child_first < 0; }
    std::vector<std::int32_t> leaves() const;
    // end of the edge: birth of its children, or the horizon for leaves
    double death(std::int32_t b) const;
};

// Yule tree run to horizon T; per-branch Exp(1) lifetimes drawn from streams
// keyed by the branch path code, so trees nest across horizons.
TreeTopology sample_yule(double T, std::uint64_t seed, std::uint64_t replica);

// Deterministic binary tree splitting at integer times 1..T.
TreeTopology binary_tree(std::int32_t T);

// First time the ancestral paths of b1 and b2 diverge; +infinity when one
// branch lies on the other's ancestral path (including b1 == b2).
double split_time(const TreeTopology& tree, std::int32_t b1, std::int32_t b2);

// Snap split times onto the grid {0, t/K, 2t/K, ..}: direction left moves
// events down to the previous grid point, right moves them up. Grid-aligned
// trees are fixed points of either direction.
TreeTopology discretize(const TreeTopology& tree, std::int32_t K, double t, bool left);

std::string tree_to_csv(const TreeTopology& tree);
TreeTopology tree_from_csv(const std::string& text);

}  // namespace bfbm
