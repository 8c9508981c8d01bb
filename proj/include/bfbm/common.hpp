#pragma once

#include <stdexcept>
#include <string>

namespace bfbm {

// Numerical routine could not reach the requested tolerance; `achieved`
// carries the best error estimate obtained.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// A request whose estimated memory or time cost exceeds the configured
// budget is refused up front instead of thrashing the machine.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bfbm
