#include "rpspline/scale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpspline/error.hpp"
#include "rpspline/stats.hpp"

namespace rpspline {

std::vector<double> PseudoResiduals::standardized() const {
  std::vector<double> out(eps_hat.size());
  for (std::size_t i = 0; i < eps_hat.size(); ++i) out[i] = eps_hat[i] / std_factor[i];
  return out;
}

PseudoResiduals pseudo_residuals(std::span<const double> xs, std::span<const double> ys,
                                 TiePolicy ties) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw Error(ErrorKind::Dimension, "pseudo_residuals: xs and ys differ in length");
  if (n < 3) throw Error(ErrorKind::InsufficientData, "pseudo-residuals need n >= 3");
  for (std::size_t i = 1; i < n; ++i) {
    const bool ok = ties == TiePolicy::Reject ? xs[i] > xs[i - 1] : xs[i] >= xs[i - 1];
    if (!ok) {
      throw Error(ErrorKind::DegenerateDesign,
                  std::string("pseudo_residuals: xs must be strictly increasing") +
                      " (violated at index " + std::to_string(i) + ")");
    }
  }
  PseudoResiduals pr;
  pr.eps_hat.reserve(n - 2);
  pr.w.reserve(n - 2);
  pr.s.reserve(n - 2);
  pr.std_factor.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double gap = xs[i + 1] - xs[i - 1];
    double w = 0.5;
    double s = 0.5;
    if (gap > 0.0) {
      w = (xs[i + 1] - xs[i]) / gap;
      s = (xs[i] - xs[i - 1]) / gap;
    }
    pr.w.push_back(w);
    pr.s.push_back(s);
    pr.eps_hat.push_back(w * ys[i - 1] + s * ys[i + 1] - ys[i]);
    pr.std_factor.push_back(std::sqrt(w * w + s * s + 1.0));
  }
  return pr;
}

double gasser_variance(const PseudoResiduals& pr) {
  if (pr.size() == 0) throw Error(ErrorKind::InsufficientData, "gasser_variance: no pseudo-residuals");
  double acc = 0.0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double z = pr.eps_hat[i] / pr.std_factor[i];
    acc += z * z;
  }
  return acc / static_cast<double>(pr.size());
}

double robust_scale(const PseudoResiduals& pr, RobustScaleMethod method) {
  if (pr.size() < 3) throw Error(ErrorKind::InsufficientData, "robust_scale needs n >= 5 observations");
  const std::vector<double> z = pr.standardized();
  if (method == RobustScaleMethod::Iqr) {
    std::vector<double> sorted = z;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25);
    return iqr / kIqrConsistency;
  }
  const double med = stats::median(z);
  std::vector<double> dev(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) dev[i] = std::abs(z[i] - med);
  return stats::median(dev) / kMadConsistency;
}

double diff_median_scale(std::span<const double> ys) {
  if (ys.size() < 2) throw Error(ErrorKind::InsufficientData, "diff_median_scale needs n >= 2");
  std::vector<double> d(ys.size() - 1);
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) d[i] = std::abs(ys[i + 1] - ys[i]);
  return stats::median(d) / (std::sqrt(2.0) * kMadConsistency);
}

}  // namespace rpspline
