#pragma once

#include <string>
#include <string_view>

namespace rpspline {

enum class LossFamily { Quadratic, Huber, SmoothedHuber, Tukey };

inline constexpr double kHuberDefaultC = 1.345;
inline constexpr double kTukeyDefaultC = 4.685;

/// rho-function family and tuning constant c (ignored for Quadratic).
struct LossSpec {
  LossFamily family = LossFamily::Huber;
  double c = kHuberDefaultC;

  static LossSpec quadratic() { return {LossFamily::Quadratic, 1.0}; }
  static LossSpec huber(double c = kHuberDefaultC) { return {LossFamily::Huber, c}; }
  static LossSpec smoothed_huber(double c = kHuberDefaultC) {
    return {LossFamily::SmoothedHuber, c};
  }
  static LossSpec tukey(double c = kTukeyDefaultC) { return {LossFamily::Tukey, c}; }

  /// Half-width of the smoothed Huber blend window around |r| = c.
  double blend_halfwidth() const { return c / 10.0; }

  bool convex() const { return family != LossFamily::Tukey; }
  /// Weights are identically 1, so one weighted solve is the fixed point.
  bool constant_weight() const { return family == LossFamily::Quadratic; }
};

double rho(const LossSpec& spec, double r);
double psi(const LossSpec& spec, double r);
/// psi(r) / r, with the limit psi'(0) = 1 at r = 0.
double weight(const LossSpec& spec, double r);

std::string to_string(LossFamily family);
/// Accepts quadratic, huber, smoothed-huber (or smoothed_huber), tukey.
LossFamily parse_loss_family(std::string_view name);

}  // namespace rpspline
