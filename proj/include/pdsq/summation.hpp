#pragma once

#include <cmath>

namespace pdsq {

/// Neumaier's variant of Kahan summation. Accumulates a running compensation term
/// so the error stays O(eps) independent of the number of terms.
template <typename Scalar>
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(Scalar init) : sum_(init) {}

  constexpr void add(Scalar value) {
    const Scalar t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(Scalar value) {
    add(value);
    return *this;
  }

  constexpr CompensatedSum& operator+=(const CompensatedSum& other) {
    add(other.sum_);
    add(other.compensation_);
    return *this;
  }

  constexpr Scalar value() const { return sum_ + compensation_; }

 private:
  Scalar sum_{0};
  Scalar compensation_{0};
};

}  // namespace pdsq
