#pragma once

#include <cmath>
#include <limits>

namespace rsquad {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// base^exponent for base >= 0 with 0^e = 0 (e > 0) and x^0 = 1.
inline double nonneg_pow(double base, double exponent) noexcept {
  if (exponent == 0.0) return 1.0;
  if (base <= 0.0) return 0.0;
  return std::pow(base, exponent);
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace rsquad
