#pragma once

#include <span>
#include <vector>

#include "rpspline/banded.hpp"
#include "rpspline/knots.hpp"

namespace rpspline {

/// D_ij = integral over [a, b] of B_i^(q) B_j^(q), banded with bandwidth p-1.
/// Also keeps the factored form D = Delta^T G Delta, where Delta maps spline
/// coefficients to those of the q-th derivative and G is the Gram matrix of
/// the order p-q basis; roughness() goes through it.
class PenaltyMatrix {
 public:
  PenaltyMatrix(BandedSPD entries, int derivative_order, std::vector<double> augmented,
                BandedSPD gram)
      : entries_(std::move(entries)),
        q_(derivative_order),
        augmented_(std::move(augmented)),
        gram_(std::move(gram)) {}

  const BandedSPD& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return entries_.dim(); }
  int derivative_order() const noexcept { return q_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  /// Coefficients of the q-th derivative in the order p-q basis.
  std::vector<double> derivative_coefficients(std::span<const double> beta) const;
  const BandedSPD& gram() const noexcept { return gram_; }

 private:
  BandedSPD entries_;
  int q_;
  std::vector<double> augmented_;
  BandedSPD gram_;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Exact per-interval Gauss-Legendre assembly (p - q nodes per interval).
/// Throws Error(Order) unless 1 <= q <= p - 1.
PenaltyMatrix penalty_matrix(const KnotVector& knots, int q);

/// beta^T D beta, evaluated as c^T G c with c the derivative coefficients
double roughness(const PenaltyMatrix& pen, std::span<const double> beta);

}  // namespace rpspline
