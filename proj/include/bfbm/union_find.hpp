#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace bfbm {

// Array union-find with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --components_removed_;
    }

    std::size_t component_count() const { return parent_.size() + components_removed_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::ptrdiff_t components_removed_ = 0;
};

}  // namespace bfbm
