#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bfbm/rng.hpp"

namespace bfbm {

// Open-addressing int64 -> int64 map with linear probing; the sparse
// ancestral forests only need find/insert and bulk speed.
class FlatMap64 {
public:
    explicit FlatMap64(std::size_t initial_pow2 = 12) {
        std::size_t cap = std::size_t{1} << initial_pow2;
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        limit_ = cap - cap / 4;
    }

    const std::int64_t* find(std::int64_t k) const {
        std::size_t s = slot(k);
        while (keys_[s] != kEmpty) {
            if (keys_[s] == k) return &vals_[s];
            s = (s + 1) & mask_;
        }
        return nullptr;
    }

    void insert(std::int64_t k, std::int64_t v) {
        if (k == kEmpty) throw std::invalid_argument("FlatMap64: reserved key");
        if (size_ >= limit_) grow();
        std::size_t s = slot(k);
        while (keys_[s] != kEmpty) {
            if (keys_[s] == k) {
                vals_[s] = v;
                return;
            }
            s = (s + 1) & mask_;
        }
        keys_[s] = k;
        vals_[s] = v;
        ++size_;
    }

    std::size_t size() const { return size_; }

private:
    static constexpr std::int64_t kEmpty = std::numeric_limits<std::int64_t>::min();

    std::size_t slot(std::int64_t k) const {
        return static_cast<std::size_t>(mix::scramble(static_cast<std::uint64_t>(k))) & mask_;
    }

    void grow() {
        std::vector<std::int64_t> ok = std::move(keys_);
        std::vector<std::int64_t> ov = std::move(vals_);
        std::size_t cap = (mask_ + 1) * 2;
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        limit_ = cap - cap / 4;
        size_ = 0;
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kEmpty) insert(ok[i], ov[i]);
    }

    std::vector<std::int64_t> keys_;
    std::vector<std::int64_t> vals_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    std::size_t limit_ = 0;
};

}  // namespace bfbm
