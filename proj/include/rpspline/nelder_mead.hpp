#pragma once

#include <functional>

namespace rpspline {

struct NelderMeadOptions {
  double start = 0.0;
  double step = 1.0;
  double lower = -10.0;
  double upper = 10.0;
  double x_tol = 1e-3;
  int max_iter = 200;
};

struct NelderMeadResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

/// One-dimensional Nelder-Mead (two-vertex simplex) on [lower, upper].
/// Trial points are clamped to the box. Non-finite objective values are
/// treated as +infinity.
NelderMeadResult nelder_mead_1d(const std::function<double(double)>& f,
                                const NelderMeadOptions& opts);

}  // namespace rpspline
