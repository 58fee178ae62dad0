#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rpspline/knots.hpp"

namespace rpspline {

/// Nonzero basis values at a point: functions first .. first+values.size()-1.
struct LocalBasis {
  int first = 0;
  std::vector<double> values;
};

/// B-spline values (derivative order m) of the basis functions that can be
/// nonzero at x, via the triangular Cox-de Boor recursion.
LocalBasis eval_basis_local(const KnotVector& knots, double x, int m = 0);

/// All K+p basis function values at x. Throws Error(Domain) outside [a, b].
std::vector<double> eval_basis(const KnotVector& knots, double x);

/// m-th derivatives of all K+p basis functions at x, 0 <= m <= p-1.
/// Derivatives at an interior knot are taken from the right (at b from the
/// left). Throws Error(Order) for m >= p or m < 0.
std::vector<double> eval_basis_deriv(const KnotVector& knots, double x, int m);

/// Banded n x (K+p) design matrix. Row i holds `order` consecutive entries
/// starting at column first(i).
class DesignMatrix {
 public:
  DesignMatrix(std::size_t cols, int order);

  std::size_t rows() const noexcept { return first_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  int order() const noexcept { return order_; }

  int first(std::size_t row) const { return first_[row]; }
  std::span<const double> row_values(std::size_t row) const {
    return {values_.data() + row * static_cast<std::size_t>(order_),
            static_cast<std::size_t>(order_)};
  }

  double operator()(std::size_t row, std::size_t col) const;

  void append_row(const LocalBasis& local);

  /// B * beta
  std::vector<double> multiply(std::span<const double> beta) const;

  /// Row-major dense copy; for tests and diagnostics.
  std::vector<double> to_dense() const;

 private:
  std::size_t cols_;
  int order_;
  std::vector<int> first_;
  std::vector<double> values_;
};

/// Row i = eval_basis(knots, xs[i]). Domain errors name the offending row.
DesignMatrix design_matrix(const KnotVector& knots, std::span<const double> xs);

}  // namespace rpspline
