#include "rpspline/knots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpspline/error.hpp"
#include "rpspline/stats.hpp"

namespace rpspline {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateDesign: return "degenerate-design";
    case ErrorKind::Order: return "order";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Factorization: return "factorization";
    case ErrorKind::SingularFit: return "singular-fit";
    case ErrorKind::DegenerateGcv: return "degenerate-gcv";
    case ErrorKind::Selection: return "selection";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

KnotVector::KnotVector(std::vector<double> interior, double lo, double hi, int order)
    : interior_(std::move(interior)), lo_(lo), hi_(hi), order_(order) {
  if (order_ < 1) throw Error(ErrorKind::Order, "spline order must be >= 1");
  if (!(std::isfinite(lo_) && std::isfinite(hi_) && lo_ < hi_))
    throw Error(ErrorKind::DegenerateDesign, "knot boundaries must satisfy a < b");
  double prev = lo_;
  for (double t : interior_) {
    if (!(t > prev)) throw Error(ErrorKind::DegenerateDesign, "interior knots not strictly increasing");
    prev = t;
  }
  if (!(hi_ > prev)) throw Error(ErrorKind::DegenerateDesign, "last interior knot must be < b");

  augmented_.reserve(interior_.size() + 2 * static_cast<std::size_t>(order_));
  augmented_.insert(augmented_.end(), static_cast<std::size_t>(order_), lo_);
  augmented_.insert(augmented_.end(), interior_.begin(), interior_.end());
  augmented_.insert(augmented_.end(), static_cast<std::size_t>(order_), hi_);
}

int KnotVector::span(double x) const {
  if (!contains(x)) {
    throw Error(ErrorKind::Domain, "x = " + std::to_string(x) + " outside [" +
                                       std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  const int last = dim() - 1;
  if (x >= hi_) return last;
  // first knot strictly greater than x among t_p .. t_{K+p}
  const auto begin = augmented_.begin() + order_;
  const auto end = augmented_.begin() + dim();
  const auto it = std::upper_bound(begin, end, x);
  return static_cast<int>(it - augmented_.begin()) - 1;
}

KnotVector make_knots(std::span<const double> xs, int order, int k_max) {
  if (order < 1) throw Error(ErrorKind::Order, "spline order must be >= 1");
  if (k_max < 1) throw Error(ErrorKind::Config, "k_max must be >= 1");
  if (xs.empty()) throw Error(ErrorKind::DegenerateDesign, "no design points");
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorKind::DegenerateDesign, "non-finite design point");
  }
  const std::vector<double> uniq = stats::unique_sorted(xs);
  if (uniq.size() < static_cast<std::size_t>(order) + 1) {
    throw Error(ErrorKind::DegenerateDesign,
                "need at least " + std::to_string(order + 1) + " unique design points, got " +
                    std::to_string(uniq.size()));
  }
  const int k = std::min(static_cast<int>(uniq.size() / 4), k_max);
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    const double prob = static_cast<double>(i + 1) / static_cast<double>(k + 2);
    interior.push_back(stats::quantile_sorted(uniq, prob));
  }
  return KnotVector(std::move(interior), uniq.front(), uniq.back(), order);
}

}  // namespace rpspline
