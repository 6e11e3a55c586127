#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>

namespace bdpe {

/// Working type one level up for binary64, used where a dot-product style
/// accumulation has to come back correctly rounded: the compensation below
/// repairs the additions but not the rounding of the term products.
template <class Real>
using promoted_t = std::conditional_t<std::is_same_v<Real, double>, long double, Real>;

/// Neumaier-style compensated accumulator.  The error-free transformation
/// keeps the running sum accurate to ~1 ulp regardless of term ordering
/// or cancellation, which the tail tables and zeta summation rely on.
template <class Real>
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(Real init) : sum_(init) {}

    void add(Real x) {
        using std::abs;
        const Real t = sum_ + x;
        if (abs(sum_) >= abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(Real x) {
        add(x);
        return *this;
    }

    Real value() const { return sum_ + carry_; }

private:
    Real sum_{0};
    Real carry_{0};
};

template <class Real, class It>
Real compensated_total(It first, It last) {
    CompensatedSum<Real> acc;
    for (; first != last; ++first) acc.add(*first);
    return acc.value();
}

}  // namespace bdpe
