#include "rpspline/penalty.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rpspline/basis.hpp"
#include "rpspline/error.hpp"

namespace rpspline {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::Order, "Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

PenaltyMatrix penalty_matrix(const KnotVector& knots, int q) {
  const int p = knots.order();
  if (q < 1 || q >= p) {
    throw Error(ErrorKind::Order, "penalty order q = " + std::to_string(q) + " must satisfy 1 <= q <= " +
                                      std::to_string(p - 1));
  }
  // The integrand B_i^(q) B_j^(q) has degree 2(p-1-q) on each interval;
  // p - q nodes integrate it exactly.
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(p - q, nodes, weights);

  BandedSPD d(static_cast<std::size_t>(knots.dim()), static_cast<std::size_t>(p - 1));
  const auto& t = knots.augmented();
  for (int s = p - 1; s < knots.dim(); ++s) {
    const double lo = t[s];
    const double hi = t[s + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t g = 0; g < nodes.size(); ++g) {
      const LocalBasis local = eval_basis_local(knots, mid + half * nodes[g], q);
      const double w = half * weights[g];
      const auto first = static_cast<std::size_t>(local.first);
      for (int a = 0; a < p; ++a) {
        const double wa = w * local.values[a];
        for (int c = 0; c <= a; ++c) d.at(first + a, first + c) += wa * local.values[c];
      }
    }
  }

  // Gram matrix of the order p-q basis on the same breakpoints. Its
  // functions are B_{j,p-q} on the order-p knot vector for j >= q.
  const KnotVector low(knots.interior(), knots.lo(), knots.hi(), p - q);
  const int k = p - q;
  BandedSPD gram(static_cast<std::size_t>(low.dim()), static_cast<std::size_t>(k - 1));
  for (int s = k - 1; s < low.dim(); ++s) {
    const auto& tl = low.augmented();
    const double lo = tl[s];
    const double hi = tl[s + 1];
    if (!(hi > lo)) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t g = 0; g < nodes.size(); ++g) {
      const LocalBasis local = eval_basis_local(low, mid + half * nodes[g], 0);
      const double w = half * weights[g];
      const auto first = static_cast<std::size_t>(local.first);
      for (int a = 0; a < k; ++a) {
        const double wa = w * local.values[a];
        for (int c = 0; c <= a; ++c) gram.at(first + a, first + c) += wa * local.values[c];
      }
    }
  }
  return PenaltyMatrix(std::move(d), q, t, std::move(gram));
}

std::vector<double> PenaltyMatrix::derivative_coefficients(std::span<const double> beta) const {
  if (beta.size() != dim()) throw Error(ErrorKind::Dimension, "roughness: coefficient length mismatch");
  const int m = static_cast<int>(dim());
  const int p = static_cast<int>(augmented_.size()) - m;
  const auto& t = augmented_;
  // c[j - r] holds the coefficient of B_{j, p-r} after r differencing rounds
  std::vector<double> c(beta.begin(), beta.end());
  for (int r = 0; r < q_; ++r) {
    const int k = p - r;
    std::vector<double> next(c.size() - 1);
    for (int j = r + 1; j < m; ++j) {
      const double gap = t[j + k - 1] - t[j];
      next[j - r - 1] = (k - 1) * (c[j - r] - c[j - r - 1]) / gap;
    }
    c = std::move(next);
  }
  return c;
}

double roughness(const PenaltyMatrix& pen, std::span<const double> beta) {
  const std::vector<double> c = pen.derivative_coefficients(beta);
  return pen.gram().quadratic_form(c);
}

}  // namespace rpspline
