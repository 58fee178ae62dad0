#include "rpspline/basis.hpp"

#include <string>

#include "rpspline/error.hpp"

namespace rpspline {

namespace {

// Order-k B-splines nonzero on span s: functions s-k+1 .. s (Cox-de Boor,
// triangular scheme; every denominator is at least t[s+1] - t[s] > 0).
std::vector<double> cox_de_boor(const std::vector<double>& t, int s, int k, double x) {
  std::vector<double> n(static_cast<std::size_t>(k), 0.0);
  std::vector<double> left(static_cast<std::size_t>(k), 0.0);
  std::vector<double> right(static_cast<std::size_t>(k), 0.0);
  n[0] = 1.0;
  for (int j = 1; j < k; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  return n;
}

}  // namespace

LocalBasis eval_basis_local(const KnotVector& knots, double x, int m) {
  const int p = knots.order();
  if (m < 0 || m >= p) {
    throw Error(ErrorKind::Order, "derivative order " + std::to_string(m) +
                                      " must lie in [0, " + std::to_string(p - 1) + "]");
  }
  const int s = knots.span(x);
  const auto& t = knots.augmented();

  // Start from the order p-m values and raise the order m times using
  // d/dx B_{j,k} = (k-1) [B_{j,k-1} / (t_{j+k-1} - t_j) - B_{j+1,k-1} / (t_{j+k} - t_{j+1})].
  int k = p - m;
  std::vector<double> vals = cox_de_boor(t, s, k, x);
  while (k < p) {
    const int lo_old = s - k + 1;
    const int k_old = k;
    auto scaled = [&](int j) {
      if (j < lo_old || j > s) return 0.0;
      const double gap = t[j + k_old] - t[j];
      return gap > 0.0 ? vals[static_cast<std::size_t>(j - lo_old)] / gap : 0.0;
    };
    ++k;
    std::vector<double> next(static_cast<std::size_t>(k));
    const int lo_new = s - k + 1;
    for (int l = 0; l < k; ++l) {
      const int j = lo_new + l;
      next[static_cast<std::size_t>(l)] = (k - 1) * (scaled(j) - scaled(j + 1));
    }
    vals = std::move(next);
  }
  return LocalBasis{s - p + 1, std::move(vals)};
}

std::vector<double> eval_basis(const KnotVector& knots, double x) {
  return eval_basis_deriv(knots, x, 0);
}

std::vector<double> eval_basis_deriv(const KnotVector& knots, double x, int m) {
  const LocalBasis local = eval_basis_local(knots, x, m);
  std::vector<double> out(static_cast<std::size_t>(knots.dim()), 0.0);
  for (std::size_t l = 0; l < local.values.size(); ++l) {
    out[static_cast<std::size_t>(local.first) + l] = local.values[l];
  }
  return out;
}

DesignMatrix::DesignMatrix(std::size_t cols, int order) : cols_(cols), order_(order) {}

double DesignMatrix::operator()(std::size_t row, std::size_t col) const {
  const int f = first_[row];
  const auto c = static_cast<int>(col);
  if (c < f || c >= f + order_) return 0.0;
  return values_[row * static_cast<std::size_t>(order_) + static_cast<std::size_t>(c - f)];
}

void DesignMatrix::append_row(const LocalBasis& local) {
  if (local.values.size() != static_cast<std::size_t>(order_)) {
    throw Error(ErrorKind::Dimension, "design row width does not match the spline order");
  }
  first_.push_back(local.first);
  values_.insert(values_.end(), local.values.begin(), local.values.end());
}

std::vector<double> DesignMatrix::multiply(std::span<const double> beta) const {
  if (beta.size() != cols_) throw Error(ErrorKind::Dimension, "coefficient length mismatch");
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    const auto row = row_values(i);
    double acc = 0.0;
    for (int l = 0; l < order_; ++l) acc += row[l] * beta[first_[i] + l];
    out[i] = acc;
  }
  return out;
}

std::vector<double> DesignMatrix::to_dense() const {
  std::vector<double> dense(rows() * cols_, 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    const auto row = row_values(i);
    for (int l = 0; l < order_; ++l) dense[i * cols_ + first_[i] + l] = row[l];
  }
  return dense;
}

DesignMatrix design_matrix(const KnotVector& knots, std::span<const double> xs) {
  DesignMatrix out(static_cast<std::size_t>(knots.dim()), knots.order());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      out.append_row(eval_basis_local(knots, xs[i], 0));
    } catch (const Error& e) {
      throw Error(e.kind(), "design_matrix row " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rpspline
