#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rpspline/knots.hpp"

namespace oracle {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// q-th x-derivative of B_j (0-based, augmented knots t) of order p at x,
/// straight from the divided-difference definition
///   B_j(x) = (t_{j+p} - t_j) [t_j, ..., t_{j+p}] (. - x)_+^{p-1}
/// with confluent differences at repeated knots. `from_left` selects the
/// one-sided limit x -> x0^- (otherwise x -> x0^+).
inline double bspline_divdiff(const std::vector<double>& t, int p, int j, double x, int q = 0,
                              bool from_left = false) {
  const int e = p - 1 - q;
  // r-th t-derivative of g(t) = (t - x)_+^e
  auto g_deriv = [&](double tt, int r) {
    const bool active = tt > x || (tt == x && from_left);
    if (!active || r > e) return 0.0;
    const double base = tt - x;
    return factorial(e) / factorial(e - r) * (e - r == 0 ? 1.0 : std::pow(base, e - r));
  };
  // dd[i][k] = [t_{j+i}, ..., t_{j+i+k}] g
  std::vector<std::vector<double>> dd(static_cast<std::size_t>(p + 1),
                                      std::vector<double>(static_cast<std::size_t>(p + 1), 0.0));
  for (int i = 0; i <= p; ++i) dd[i][0] = g_deriv(t[j + i], 0);
  for (int k = 1; k <= p; ++k) {
    for (int i = 0; i + k <= p; ++i) {
      const double lo = t[j + i];
      const double hi = t[j + i + k];
      if (hi == lo) {
        dd[i][k] = g_deriv(lo, k) / factorial(k);
      } else {
        dd[i][k] = (dd[i + 1][k - 1] - dd[i][k - 1]) / (hi - lo);
      }
    }
  }
  const double sign = q % 2 == 0 ? 1.0 : -1.0;
  return (t[j + p] - t[j]) * sign * factorial(p - 1) / factorial(e) * dd[0][p];
}

inline std::vector<double> basis_divdiff(const rpspline::KnotVector& k, double x, int q = 0,
                                         bool from_left = false) {
  std::vector<double> out(static_cast<std::size_t>(k.dim()));
  for (int j = 0; j < k.dim(); ++j) {
    out[static_cast<std::size_t>(j)] = bspline_divdiff(k.augmented(), k.order(), j, x, q, from_left);
  }
  return out;
}

/// Dense penalty matrix by composite Simpson quadrature of the divided-
/// difference derivatives, `total_panels` panels split across the knot
/// intervals (each interval gets an even count, at least 2).
inline Eigen::MatrixXd penalty_by_quadrature(const rpspline::KnotVector& k, int q,
                                             int total_panels = 10000) {
  const int m = k.dim();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> breaks{k.lo()};
  for (double t : k.interior()) breaks.push_back(t);
  breaks.push_back(k.hi());
  const double width = k.hi() - k.lo();
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s];
    const double hi = breaks[s + 1];
    int panels = static_cast<int>(std::ceil(total_panels * (hi - lo) / width));
    panels = std::max(2, panels + (panels % 2));
    const double h = (hi - lo) / panels;
    for (int i = 0; i <= panels; ++i) {
      const double x = lo + i * h;
      const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const bool left_limit = i == panels;  // stay inside [lo, hi]
      const auto v = basis_divdiff(k, i == panels ? hi : x, q, left_limit);
      Eigen::Map<const Eigen::VectorXd> vv(v.data(), m);
      d += (w * h / 3.0) * vv * vv.transpose();
    }
  }
  return d;
}

/// Random knot configuration on a random interval: K interior knots with
/// gaps at least 2% of the range.
inline rpspline::KnotVector random_knots(std::mt19937_64& rng, int order, int k_interior) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = -2.0 + 4.0 * unit(rng);
  const double width = 0.5 + 3.0 * unit(rng);
  std::vector<double> interior;
  while (true) {
    interior.clear();
    for (int i = 0; i < k_interior; ++i) interior.push_back(unit(rng));
    std::sort(interior.begin(), interior.end());
    double prev = 0.0;
    bool ok = true;
    for (double t : interior) {
      ok = ok && t - prev >= 0.02;
      prev = t;
    }
    if (ok && 1.0 - prev >= 0.02) break;
  }
  for (double& t : interior) t = lo + width * t;
  return rpspline::KnotVector(interior, lo, lo + width, order);
}

}  // namespace oracle
