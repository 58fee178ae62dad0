#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rpspline {

class DesignMatrix;

/// Symmetric matrix in packed lower-band storage: entry (i, j) with
/// 0 <= i - j <= bandwidth is stored at band(i - j, j). Entries further
/// from the diagonal are zero.
class BandedSPD {
 public:
  BandedSPD() = default;
  BandedSPD(std::size_t dim, std::size_t bandwidth);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  /// Symmetric access; zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;
  /// Mutable access to a stored entry; requires |i - j| <= bandwidth.
  double& at(std::size_t i, std::size_t j);

  /// x^T A x
  double quadratic_form(std::span<const double> x) const;
  /// A x
  std::vector<double> multiply(std::span<const double> x) const;

  /// this += scale * other (same dim; other's bandwidth must not exceed ours)
  void add_scaled(const BandedSPD& other, double scale);

  std::vector<double> to_dense() const;

 private:
  std::size_t dim_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> band_;  // (bw_ + 1) * dim_, diagonal offset major
};

/// Lower-triangular banded Cholesky factor L with A = L L^T.
class BandCholesky {
 public:
  std::size_t dim() const noexcept { return lower_.dim(); }
  std::size_t bandwidth() const noexcept { return lower_.bandwidth(); }
  /// L(i, j) for i >= j.
  double lower(std::size_t i, std::size_t j) const;

 private:
  friend BandCholesky band_cholesky(const BandedSPD& m);
  explicit BandCholesky(BandedSPD lower) : lower_(std::move(lower)) {}
  BandedSPD lower_;  // only the lower triangle is meaningful
};

/// Throws FactorizationError on a pivot that is not positive beyond
/// rounding of the original diagonal.
BandCholesky band_cholesky(const BandedSPD& m);

/// Solves A x = rhs given the factor of A. Throws Error(Dimension).
std::vector<double> band_solve(const BandCholesky& factor, std::span<const double> rhs);

/// B^T W B in band storage (bandwidth order-1).
BandedSPD weighted_gram(const DesignMatrix& basis, std::span<const double> weights);

/// B^T W y
std::vector<double> weighted_cross(const DesignMatrix& basis, std::span<const double> weights,
                                   std::span<const double> ys);

/// Tr[B M^{-1} B^T W] = Tr[M^{-1} (B^T W B)], where `factor` factors M.
/// Evaluated exactly with one banded solve per basis column.
double smoother_trace(const DesignMatrix& basis, std::span<const double> weights,
                      const BandCholesky& factor);

}  // namespace rpspline
