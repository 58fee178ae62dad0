#include "rpspline/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpspline/basis.hpp"
#include "rpspline/error.hpp"

namespace rpspline {

BandedSPD::BandedSPD(std::size_t dim, std::size_t bandwidth)
    : dim_(dim), bw_(std::min(bandwidth, dim == 0 ? 0 : dim - 1)), band_((bw_ + 1) * dim, 0.0) {}

double BandedSPD::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > bw_) return 0.0;
  return band_[d * dim_ + j];
}

double& BandedSPD::at(std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > bw_ || i >= dim_) throw Error(ErrorKind::Dimension, "band entry outside storage");
  return band_[d * dim_ + j];
}

std::vector<double> BandedSPD::multiply(std::span<const double> x) const {
  if (x.size() != dim_) throw Error(ErrorKind::Dimension, "band multiply: size mismatch");
  std::vector<double> y(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    y[j] += band_[j] * x[j];
    for (std::size_t d = 1; d <= bw_ && j + d < dim_; ++d) {
      const double a = band_[d * dim_ + j];
      y[j + d] += a * x[j];
      y[j] += a * x[j + d];
    }
  }
  return y;
}

double BandedSPD::quadratic_form(std::span<const double> x) const {
  const auto y = multiply(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += x[i] * y[i];
  return acc;
}

void BandedSPD::add_scaled(const BandedSPD& other, double scale) {
  if (other.dim_ != dim_ || other.bw_ > bw_) {
    throw Error(ErrorKind::Dimension, "band add: incompatible shapes");
  }
  for (std::size_t d = 0; d <= other.bw_; ++d) {
    for (std::size_t j = 0; j + d < dim_; ++j) {
      band_[d * dim_ + j] += scale * other.band_[d * dim_ + j];
    }
  }
}

std::vector<double> BandedSPD::to_dense() const {
  std::vector<double> dense(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) dense[i * dim_ + j] = (*this)(i, j);
  }
  return dense;
}

double BandCholesky::lower(std::size_t i, std::size_t j) const {
  if (i < j) return 0.0;
  return lower_(i, j);
}

BandCholesky band_cholesky(const BandedSPD& m) {
  const std::size_t n = m.dim();
  const std::size_t b = m.bandwidth();
  BandedSPD l(n, b);
  constexpr double kPivotTol = 64.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k0 = j > b ? j - b : 0;
    double d = m(j, j);
    for (std::size_t k = k0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > kPivotTol * std::abs(m(j, j))) || !std::isfinite(d)) throw FactorizationError(j, d);
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n && i <= j + b; ++i) {
      const std::size_t ki = i > b ? i - b : 0;
      double s = m(i, j);
      for (std::size_t k = std::max(ki, k0); k < j; ++k) s -= l(i, k) * l(j, k);
      l.at(i, j) = s / ljj;
    }
  }
  return BandCholesky(std::move(l));
}

std::vector<double> band_solve(const BandCholesky& factor, std::span<const double> rhs) {
  const std::size_t n = factor.dim();
  const std::size_t b = factor.bandwidth();
  if (rhs.size() != n) throw Error(ErrorKind::Dimension, "band_solve: rhs size mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  // L z = rhs
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k0 = i > b ? i - b : 0;
    double s = x[i];
    for (std::size_t k = k0; k < i; ++k) s -= factor.lower(i, k) * x[k];
    x[i] = s / factor.lower(i, i);
  }
  // L^T x = z
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n && k <= ii + b; ++k) s -= factor.lower(k, ii) * x[k];
    x[ii] = s / factor.lower(ii, ii);
  }
  return x;
}

BandedSPD weighted_gram(const DesignMatrix& basis, std::span<const double> weights) {
  if (weights.size() != basis.rows()) throw Error(ErrorKind::Dimension, "weights length mismatch");
  const int p = basis.order();
  BandedSPD g(basis.cols(), static_cast<std::size_t>(p - 1));
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    const auto row = basis.row_values(i);
    const auto f = static_cast<std::size_t>(basis.first(i));
    const double w = weights[i];
    for (int a = 0; a < p; ++a) {
      const double wa = w * row[a];
      for (int c = 0; c <= a; ++c) g.at(f + a, f + c) += wa * row[c];
    }
  }
  return g;
}

std::vector<double> weighted_cross(const DesignMatrix& basis, std::span<const double> weights,
                                   std::span<const double> ys) {
  if (weights.size() != basis.rows() || ys.size() != basis.rows()) {
    throw Error(ErrorKind::Dimension, "weighted_cross: length mismatch");
  }
  std::vector<double> out(basis.cols(), 0.0);
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    const auto row = basis.row_values(i);
    const double wy = weights[i] * ys[i];
    for (int a = 0; a < basis.order(); ++a) out[basis.first(i) + a] += wy * row[a];
  }
  return out;
}

double smoother_trace(const DesignMatrix& basis, std::span<const double> weights,
                      const BandCholesky& factor) {
  if (factor.dim() != basis.cols()) throw Error(ErrorKind::Dimension, "smoother_trace: dim mismatch");
  const BandedSPD gram = weighted_gram(basis, weights);
  const std::size_t m = gram.dim();
  const std::size_t b = gram.bandwidth();
  std::vector<double> col(m, 0.0);
  double trace = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    std::fill(col.begin(), col.end(), 0.0);
    const std::size_t lo = k > b ? k - b : 0;
    for (std::size_t i = lo; i < m && i <= k + b; ++i) col[i] = gram(i, k);
    trace += band_solve(factor, col)[k];
  }
  return trace;
}

}  // namespace rpspline
