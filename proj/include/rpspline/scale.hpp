#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rpspline {

/// eps_hat_i = w_i Y_{i-1} + s_i Y_{i+1} - Y_i for the interior points of an
/// ordered design: the residual of the chord through the two neighbours.
struct PseudoResiduals {
  std::vector<double> eps_hat;
  std::vector<double> w;
  std::vector<double> s;
  std::vector<double> std_factor;  // sqrt(w^2 + s^2 + 1)

  std::size_t size() const noexcept { return eps_hat.size(); }
  /// eps_hat_i / std_factor_i
  std::vector<double> standardized() const;
};

enum class TiePolicy {
  Reject,    // duplicate xs are a design error
  Midpoint,  // w = s = 1/2 when both neighbours share x_i
};

/// Requires n >= 3 and xs strictly increasing (non-decreasing with
/// TiePolicy::Midpoint, as long as x_{i-1} < x_{i+1} or all three tie).
PseudoResiduals pseudo_residuals(std::span<const double> xs, std::span<const double> ys,
                                 TiePolicy ties = TiePolicy::Reject);

/// (1/(n-2)) sum eps_hat_i^2 / (w_i^2 + s_i^2 + 1), an estimate of sigma^2.
double gasser_variance(const PseudoResiduals& pr);

enum class RobustScaleMethod { Iqr, Mad };

inline constexpr double kIqrConsistency = 1.349;
inline constexpr double kMadConsistency = 0.6745;

/// IQR / 1.349 or MAD / 0.6745 of the standardized pseudo-residuals.
/// Requires at least 5 observations (3 pseudo-residuals).
double robust_scale(const PseudoResiduals& pr, RobustScaleMethod method);

/// (sqrt(2) 0.6745)^{-1} median |Y_{i+1} - Y_i| for ys ordered by x.
double diff_median_scale(std::span<const double> ys);

}  // namespace rpspline
