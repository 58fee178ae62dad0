#include "rpspline/loss.hpp"

#include <cmath>

#include "rpspline/error.hpp"

namespace rpspline {

namespace {

// Smoothed Huber: on |r| in [c - d, c + d], psi' follows the smoothstep
// g(v) = 1/2 - 3v/4 + v^3/4 of v = (|r| - c) / d, so psi is C^2 and equals
// the Huber psi outside the window. rho beyond c + d sits 0.1 d^2 below
// the Huber rho (the area lost by smoothing the corner of psi).
constexpr double kSmoothRhoOffset = 0.1;

double smooth_g_integral(double v) {  // G(v) - G(-1), G(v) = v/2 - 3v^2/8 + v^4/16
  const double g = v / 2.0 - 3.0 * v * v / 8.0 + v * v * v * v / 16.0;
  return g + 13.0 / 16.0;
}

double smooth_h(double v) { return v * v / 4.0 - v * v * v / 8.0 + v * v * v * v * v / 80.0; }

double smoothed_huber_rho(double c, double a) {
  const double d = c / 10.0;
  if (a <= c - d) return 0.5 * a * a;
  if (a >= c + d) return c * a - 0.5 * c * c - kSmoothRhoOffset * d * d;
  const double v = (a - c) / d;
  const double base = c - d;
  const double inner = smooth_h(v) - smooth_h(-1.0) + (13.0 / 16.0) * (v + 1.0);
  return 0.5 * base * base + d * (base * (v + 1.0) + d * inner);
}

double smoothed_huber_psi_abs(double c, double a) {
  const double d = c / 10.0;
  if (a <= c - d) return a;
  if (a >= c + d) return c;
  const double v = (a - c) / d;
  return (c - d) + d * smooth_g_integral(v);
}

}  // namespace

double rho(const LossSpec& spec, double r) {
  const double a = std::abs(r);
  const double c = spec.c;
  switch (spec.family) {
    case LossFamily::Quadratic:
      return 0.5 * r * r;
    case LossFamily::Huber:
      return a <= c ? 0.5 * r * r : c * a - 0.5 * c * c;
    case LossFamily::SmoothedHuber:
      return smoothed_huber_rho(c, a);
    case LossFamily::Tukey: {
      const double plateau = c * c / 6.0;
      if (a >= c) return plateau;
      const double u = 1.0 - (r / c) * (r / c);
      return plateau * (1.0 - u * u * u);
    }
  }
  return 0.0;
}

double psi(const LossSpec& spec, double r) {
  const double a = std::abs(r);
  const double sign = r < 0.0 ? -1.0 : 1.0;
  const double c = spec.c;
  switch (spec.family) {
    case LossFamily::Quadratic:
      return r;
    case LossFamily::Huber:
      return a <= c ? r : sign * c;
    case LossFamily::SmoothedHuber:
      return sign * smoothed_huber_psi_abs(c, a);
    case LossFamily::Tukey: {
      if (a >= c) return 0.0;
      const double u = 1.0 - (r / c) * (r / c);
      return r * u * u;
    }
  }
  return 0.0;
}

double weight(const LossSpec& spec, double r) {
  const double a = std::abs(r);
  const double c = spec.c;
  switch (spec.family) {
    case LossFamily::Quadratic:
      return 1.0;
    case LossFamily::Huber:
      return a <= c ? 1.0 : c / a;
    case LossFamily::SmoothedHuber:
      return a <= c - c / 10.0 ? 1.0 : smoothed_huber_psi_abs(c, a) / a;
    case LossFamily::Tukey: {
      if (a >= c) return 0.0;
      const double u = 1.0 - (r / c) * (r / c);
      return u * u;
    }
  }
  return 1.0;
}

std::string to_string(LossFamily family) {
  switch (family) {
    case LossFamily::Quadratic: return "quadratic";
    case LossFamily::Huber: return "huber";
    case LossFamily::SmoothedHuber: return "smoothed-huber";
    case LossFamily::Tukey: return "tukey";
  }
  return "unknown";
}

LossFamily parse_loss_family(std::string_view name) {
  if (name == "quadratic") return LossFamily::Quadratic;
  if (name == "huber") return LossFamily::Huber;
  if (name == "smoothed-huber" || name == "smoothed_huber") return LossFamily::SmoothedHuber;
  if (name == "tukey") return LossFamily::Tukey;
  throw Error(ErrorKind::Config, "unknown loss family '" + std::string(name) + "'");
}

}  // namespace rpspline
