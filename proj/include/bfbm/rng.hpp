#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace bfbm {

// Counter-based generator: every stream is addressed by a key tuple
// (seed, replica, entity kind, entity id, ...), so draws are reproducible
// regardless of thread count or evaluation order.
namespace mix {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t scramble(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return scramble(h + kGolden + v * 0x2545f4914f6cdd1dull);
}

inline std::uint64_t key_hash(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x6a09e667f3bcc909ull;
    for (std::uint64_t k : keys) h = combine(h, k);
    return h;
}

}  // namespace mix

// Entity kinds keep the streams of distinct model objects disjoint.
enum RngKind : std::uint64_t {
    kKindOffset = 1,   // renewal offsets R_i
    kKindType = 2,     // component founder types
    kKindLife = 3,     // Yule branch lifetimes
    kKindLevel = 4,    // hierarchical level increments
    kKindNormal = 5,   // generic Gaussian draws
    kKindNoise = 6,    // white-noise cells
    kKindTrunk = 7,    // shared-line offsets below a split
    kKindLineA = 8,
    kKindLineB = 9,
};

// Uniform on (0,1]: zero is excluded so log() is always finite.
inline double unit_from_bits(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

inline double unit_from_key(std::initializer_list<std::uint64_t> keys) {
    return unit_from_bits(mix::key_hash(keys));
}

class KeyedRng {
public:
    explicit KeyedRng(std::initializer_list<std::uint64_t> keys)
        : state_(mix::key_hash(keys)) {}

    std::uint64_t next_u64() { return mix::scramble(state_ + (++ctr_) * mix::kGolden); }

    double next_unit() { return unit_from_bits(next_u64()); }

    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.28318530717958647693 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double next_exponential() { return -std::log(next_unit()); }

private:
    std::uint64_t state_;
    std::uint64_t ctr_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace bfbm
