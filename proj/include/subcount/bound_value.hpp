#pragma once

#include <cmath>
#include <compare>

#include "subcount/errors.hpp"

namespace subcount {

/// A positive real quantity carried on the natural-log scale together
/// with an absolute tolerance on that scale.  Quantities of interest
/// (n^{log_2(n)/4} and friends) overflow double range near n ~ 1e9,
/// so they are never materialized.
class BoundValue {
 public:
  BoundValue() = default;
  BoundValue(double log_value, double tolerance = 0.0)
      : log_value_(log_value), tolerance_(tolerance) {}

  static BoundValue from_value(double v, double tolerance = 0.0) {
    return BoundValue(std::log(v), tolerance);
  }

  double log_value() const { return log_value_; }
  double tolerance() const { return tolerance_; }
  double value() const { return std::exp(log_value_); }

  BoundValue operator*(const BoundValue& o) const {
    return BoundValue(log_value_ + o.log_value_, tolerance_ + o.tolerance_);
  }
  BoundValue operator/(const BoundValue& o) const {
    return BoundValue(log_value_ - o.log_value_, tolerance_ + o.tolerance_);
  }

  /// Certified comparison.  Throws BoundaryComparison when the log
  /// difference lies inside the combined tolerance band.
  std::strong_ordering compare(const BoundValue& o) const {
    const double diff = log_value_ - o.log_value_;
    const double band = tolerance_ + o.tolerance_;
    if (std::abs(diff) <= band)
      throw BoundaryComparison("log difference inside tolerance band");
    return diff < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  bool certainly_less(const BoundValue& o) const {
    return compare(o) == std::strong_ordering::less;
  }

 private:
  double log_value_ = 0.0;
  double tolerance_ = 0.0;
};

}  // namespace subcount
