#include "rpspline/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace rpspline {

NelderMeadResult nelder_mead_1d(const std::function<double(double)>& f,
                                const NelderMeadOptions& opts) {
  NelderMeadResult res;
  auto eval = [&](double x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  auto clamp = [&](double x) { return std::clamp(x, opts.lower, opts.upper); };

  // Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
  double xb = clamp(opts.start);
  double xw = clamp(opts.start + opts.step);
  if (xw == xb) xw = clamp(opts.start - opts.step);
  double fb = eval(xb);
  double fw = eval(xw);

  for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
    if (fw < fb) {
      std::swap(xb, xw);
      std::swap(fb, fw);
    }
    if (std::abs(xw - xb) <= opts.x_tol) break;

    // The centroid of the simplex without the worst vertex is the best vertex.
    const double xr = clamp(xb + (xb - xw));
    const double fr = eval(xr);
    if (fr < fb) {
      const double xe = clamp(xb + 2.0 * (xb - xw));
      const double fe = eval(xe);
      if (fe < fr) {
        xw = xe;
        fw = fe;
      } else {
        xw = xr;
        fw = fr;
      }
      continue;
    }
    // fr >= fb: with one remaining vertex, fr is never better than the
    // second-worst point, so contract.
    if (fr < fw) {
      const double xc = clamp(xb + 0.5 * (xr - xb));
      const double fc = eval(xc);
      if (fc <= fr) {
        xw = xc;
        fw = fc;
        continue;
      }
    } else {
      // inside contraction; in one dimension a shrink lands on the same point
      xw = xb + 0.5 * (xw - xb);
      fw = eval(xw);
      continue;
    }
    // shrink toward the best vertex
    xw = xb + 0.5 * (xw - xb);
    fw = eval(xw);
  }
  if (fw < fb) {
    std::swap(xb, xw);
    std::swap(fb, fw);
  }
  res.x = xb;
  res.value = fb;
  return res;
}

}  // namespace rpspline
