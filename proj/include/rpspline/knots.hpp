#pragma once

#include <span>
#include <vector>

namespace rpspline {

/// Augmented knot sequence for the spline space of order `p` on [a, b] with
/// interior knots t_1 < ... < t_K. The boundary knots are repeated p times,
/// so the augmented sequence has K + 2p entries and the basis has K + p
/// functions.
class KnotVector {
 public:
  /// Throws Error(DegenerateDesign) unless a < t_1 < ... < t_K < b, and
  /// Error(Order) unless p >= 1.
  KnotVector(std::vector<double> interior, double lo, double hi, int order);

  const std::vector<double>& interior() const noexcept { return interior_; }
  const std::vector<double>& augmented() const noexcept { return augmented_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int order() const noexcept { return order_; }
  int num_interior() const noexcept { return static_cast<int>(interior_.size()); }
  int dim() const noexcept { return num_interior() + order_; }

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  /// Index s into augmented() with t_s <= x < t_{s+1} and
  /// order-1 <= s <= dim()-1; x == hi maps to the last non-empty interval.
  /// The basis functions that are nonzero at x are s-order+1 .. s.
  int span(double x) const;

 private:
  std::vector<double> interior_;
  std::vector<double> augmented_;
  double lo_;
  double hi_;
  int order_;
};

/// Knot placement rule: K = min(floor(U / 4), k_max) interior knots for U
/// unique design points, knot k at the (k+1)/(K+2) sample quantile of the
/// unique values, boundaries at the data range.
KnotVector make_knots(std::span<const double> xs, int order, int k_max);

}  // namespace rpspline
