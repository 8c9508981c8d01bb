#pragma once

#include <cmath>
#include <cstddef>

namespace bfbm {

// Neumaier compensated accumulator: exact to one rounding of the true sum
// for the mildly ill-conditioned series used here (slowly decaying tails).
class NeumaierSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(const double* data, std::size_t n) {
    NeumaierSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(data[i]);
    return s.value();
}

}  // namespace bfbm
