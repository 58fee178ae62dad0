#include "rpspline/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rpspline/error.hpp"
#include "rpspline/nelder_mead.hpp"
#include "rpspline/scale.hpp"

namespace rpspline {

namespace {

constexpr double kWeightFloor = 1e-12;

std::vector<double> residuals(const DesignMatrix& basis, std::span<const double> ys,
                              std::span<const double> beta) {
  std::vector<double> r = basis.multiply(beta);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = ys[i] - r[i];
  return r;
}

std::vector<double> weights_for(const LossSpec& loss, std::span<const double> r, double sigma) {
  std::vector<double> w(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) w[i] = weight(loss, r[i] / sigma);
  return w;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_shapes(const DesignMatrix& basis, const PenaltyMatrix& pen, std::span<const double> ys) {
  if (basis.cols() != pen.dim()) throw Error(ErrorKind::Dimension, "design and penalty dimensions differ");
  if (basis.rows() != ys.size()) throw Error(ErrorKind::Dimension, "design rows and response length differ");
}

// Rethrows an error with a pipeline stage prefix.
template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FactorizationError& e) {
    throw Error(ErrorKind::SingularFit, std::string(stage) + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace

ScaleMethod parse_scale_method(std::string_view name) {
  if (name == "iqr") return ScaleMethod::Iqr;
  if (name == "mad") return ScaleMethod::Mad;
  if (name == "diff" || name == "diff_median" || name == "diff-median") return ScaleMethod::DiffMedian;
  if (name == "gasser") return ScaleMethod::Gasser;
  if (name == "fixed") return ScaleMethod::Fixed;
  throw Error(ErrorKind::Config, "unknown scale method '" + std::string(name) + "'");
}

std::string to_string(ScaleMethod method) {
  switch (method) {
    case ScaleMethod::Iqr: return "iqr";
    case ScaleMethod::Mad: return "mad";
    case ScaleMethod::DiffMedian: return "diff";
    case ScaleMethod::Gasser: return "gasser";
    case ScaleMethod::Fixed: return "fixed";
  }
  return "unknown";
}

void FitConfig::validate() const {
  if (order < 1) throw Error(ErrorKind::Order, "spline order p must be >= 1");
  if (penalty_order < 1 || penalty_order >= order) {
    throw Error(ErrorKind::Order, "penalty order q must satisfy 1 <= q < p");
  }
  if (k_max < 1) throw Error(ErrorKind::Config, "k_max must be >= 1");
  if (!(irwls_tol > 0.0) || irwls_max_iter < 1 || nm_max_iter < 1) {
    throw Error(ErrorKind::Config, "tolerances and iteration caps must be positive");
  }
  if (loss.family != LossFamily::Quadratic && !(loss.c > 0.0)) {
    throw Error(ErrorKind::Config, "tuning constant c must be > 0");
  }
  if (scale_method == ScaleMethod::Fixed && !(fixed_sigma > 0.0)) {
    throw Error(ErrorKind::Config, "fixed sigma must be > 0");
  }
  if (lambda && !(*lambda >= 0.0 && std::isfinite(*lambda))) {
    throw Error(ErrorKind::Config, "lambda must be finite and >= 0");
  }
}

double penalized_objective(const DesignMatrix& basis, const PenaltyMatrix& pen,
                           std::span<const double> ys, const LossSpec& loss, double sigma,
                           double lambda, std::span<const double> beta) {
  check_shapes(basis, pen, ys);
  const auto r = residuals(basis, ys, beta);
  double acc = 0.0;
  for (double ri : r) acc += rho(loss, ri / sigma);
  return acc / static_cast<double>(r.size()) + lambda * roughness(pen, beta);
}

std::vector<double> estimating_equation(const DesignMatrix& basis, const PenaltyMatrix& pen,
                                        std::span<const double> ys, const LossSpec& loss,
                                        double sigma, double lambda,
                                        std::span<const double> beta) {
  check_shapes(basis, pen, ys);
  const auto r = residuals(basis, ys, beta);
  std::vector<double> g = pen.entries().multiply(beta);
  for (double& gi : g) gi *= 2.0 * lambda;
  const double scale = 1.0 / (static_cast<double>(r.size()) * sigma);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ps = psi(loss, r[i] / sigma) * scale;
    const auto row = basis.row_values(i);
    for (int a = 0; a < basis.order(); ++a) g[basis.first(i) + a] -= ps * row[a];
  }
  return g;
}

BandedSPD normal_matrix(const DesignMatrix& basis, const PenaltyMatrix& pen,
                        std::span<const double> weights, double sigma, double lambda) {
  BandedSPD m = weighted_gram(basis, weights);
  const double n = static_cast<double>(basis.rows());
  if (lambda > 0.0) m.add_scaled(pen.entries(), 2.0 * n * lambda * sigma * sigma);
  return m;
}

double penalty_unit(const DesignMatrix& basis, const PenaltyMatrix& pen, double sigma) {
  const std::vector<double> ones(basis.rows(), 1.0);
  const BandedSPD gram = weighted_gram(basis, ones);
  double tr_gram = 0.0;
  double tr_pen = 0.0;
  for (std::size_t j = 0; j < gram.dim(); ++j) {
    tr_gram += gram(j, j);
    tr_pen += pen(j, j);
  }
  const double n = static_cast<double>(basis.rows());
  if (!(tr_pen > 0.0)) return 1.0;
  return tr_gram / (2.0 * n * sigma * sigma * tr_pen);
}

IrwlsResult irwls(const DesignMatrix& basis, const PenaltyMatrix& pen,
                  std::span<const double> ys, const LossSpec& loss, double sigma, double lambda,
                  std::span<const double> beta0, const IrwlsOptions& opts) {
  check_shapes(basis, pen, ys);
  if (!(sigma > 0.0)) throw Error(ErrorKind::Config, "irwls: sigma must be > 0");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Config, "irwls: lambda must be >= 0");
  if (beta0.size() != basis.cols()) throw Error(ErrorKind::Dimension, "irwls: start vector length mismatch");

  IrwlsResult res;
  res.beta.assign(beta0.begin(), beta0.end());
  std::vector<double> r = residuals(basis, ys, res.beta);
  auto objective = [&](std::span<const double> beta) {
    return penalized_objective(basis, pen, ys, loss, sigma, lambda, beta);
  };
  res.objective_trace.push_back(objective(res.beta));

  for (int it = 1; it <= opts.max_iter; ++it) {
    const std::vector<double> w = weights_for(loss, r, sigma);
    if (max_abs(w) < kWeightFloor) {
      res.weights = w;
      res.converged = false;
      return res;
    }
    const BandedSPD m = normal_matrix(basis, pen, w, sigma, lambda);
    BandCholesky factor = [&] {
      try {
        return band_cholesky(m);
      } catch (const FactorizationError& e) {
        throw Error(ErrorKind::SingularFit, std::string("irwls: weighted system is singular (") +
                                                e.what() + ")");
      }
    }();
    std::vector<double> next = band_solve(factor, weighted_cross(basis, w, ys));

    double diff = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) diff = std::max(diff, std::abs(next[j] - res.beta[j]));
    const double change = diff / (1.0 + max_abs(res.beta));

    res.beta = std::move(next);
    r = residuals(basis, ys, res.beta);
    res.iterations = it;
    const double obj = objective(res.beta);
    const double prev = res.objective_trace.back();
    if (obj > prev + 1e-12 * (1.0 + std::abs(prev))) ++res.descent_violations;
    res.objective_trace.push_back(obj);

    // With constant weights the first solve is the fixed point.
    if (loss.constant_weight() || change <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.weights = weights_for(loss, r, sigma);
  return res;
}

IrwlsResult fit_at_lambda(const DesignMatrix& basis, const PenaltyMatrix& pen,
                          std::span<const double> ys, const LossSpec& loss, double sigma,
                          double lambda, std::span<const double> warm, const IrwlsOptions& opts) {
  std::vector<double> start;
  if (!warm.empty()) {
    start.assign(warm.begin(), warm.end());
  } else {
    const std::vector<double> zeros(basis.cols(), 0.0);
    start = irwls(basis, pen, ys, LossSpec::quadratic(), sigma, lambda, zeros, opts).beta;
  }
  if (loss.constant_weight()) {
    return irwls(basis, pen, ys, loss, sigma, lambda, start, opts);
  }
  if (!loss.convex()) {
    const IrwlsResult monotone = irwls(basis, pen, ys, LossSpec::huber(), sigma, lambda, start, opts);
    return irwls(basis, pen, ys, loss, sigma, lambda, monotone.beta, opts);
  }
  return irwls(basis, pen, ys, loss, sigma, lambda, start, opts);
}

GcvEvaluation gcv_score(const DesignMatrix& basis, const PenaltyMatrix& pen,
                        std::span<const double> ys, const LossSpec& loss, double sigma,
                        double lambda, std::span<const double> beta_warm,
                        const IrwlsOptions& opts) {
  GcvEvaluation ev;
  ev.fit = fit_at_lambda(basis, pen, ys, loss, sigma, lambda, beta_warm, opts);
  const double n = static_cast<double>(ys.size());
  const auto r = residuals(basis, ys, ev.fit.beta);
  double rss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) rss += ev.fit.weights[i] * r[i] * r[i];
  ev.rss_weighted = rss / n;

  const BandedSPD m = normal_matrix(basis, pen, ev.fit.weights, sigma, lambda);
  BandCholesky factor = [&] {
    try {
      return band_cholesky(m);
    } catch (const FactorizationError& e) {
      throw Error(ErrorKind::SingularFit, std::string("gcv_score: hat matrix system is singular (") +
                                              e.what() + ")");
    }
  }();
  ev.edf = smoother_trace(basis, ev.fit.weights, factor);
  const double denom = 1.0 - ev.edf / n;
  if (!(denom > 1e-10)) {
    throw Error(ErrorKind::DegenerateGcv,
                "gcv_score: Tr H = " + std::to_string(ev.edf) + " >= n = " + std::to_string(ys.size()));
  }
  ev.gcv = ev.rss_weighted / (denom * denom);
  return ev;
}

LambdaSelection select_lambda(const DesignMatrix& basis, const PenaltyMatrix& pen,
                              std::span<const double> ys, const LossSpec& loss, double sigma,
                              const FitConfig& config) {
  const double unit = penalty_unit(basis, pen, sigma);
  const IrwlsOptions opts{config.irwls_tol, config.irwls_max_iter};
  LambdaSelection sel;
  std::vector<double> warm;
  auto objective = [&](double u) {
    try {
      GcvEvaluation ev = gcv_score(basis, pen, ys, loss, sigma, unit * std::pow(10.0, u), warm, opts);
      warm = ev.fit.beta;
      sel.trace.emplace_back(u, ev.gcv);
      return ev.gcv;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  NelderMeadOptions nm;
  nm.start = config.nm_start;
  nm.max_iter = config.nm_max_iter;
  const NelderMeadResult best = nelder_mead_1d(objective, nm);
  sel.evaluations = best.evaluations;
  if (!std::isfinite(best.value)) {
    throw Error(ErrorKind::Selection,
                "select_lambda: every GCV evaluation was degenerate; try a fixed lambda");
  }
  sel.log10_normalized = best.x;
  sel.lambda = unit * std::pow(10.0, best.x);
  sel.gcv = best.value;
  return sel;
}

double preliminary_scale(std::span<const double> xs_sorted, std::span<const double> ys_sorted,
                         const FitConfig& config) {
  const std::size_t n = ys_sorted.size();
  switch (config.scale_method) {
    case ScaleMethod::Fixed:
      return config.fixed_sigma;
    case ScaleMethod::DiffMedian:
      return diff_median_scale(ys_sorted);
    case ScaleMethod::Gasser:
      return std::sqrt(gasser_variance(pseudo_residuals(xs_sorted, ys_sorted, TiePolicy::Midpoint)));
    case ScaleMethod::Iqr:
    case ScaleMethod::Mad: {
      const PseudoResiduals pr = pseudo_residuals(xs_sorted, ys_sorted, TiePolicy::Midpoint);
      // Quartiles of fewer than three pseudo-residuals carry no information.
      if (n < 5) return std::sqrt(gasser_variance(pr));
      return robust_scale(pr, config.scale_method == ScaleMethod::Iqr ? RobustScaleMethod::Iqr
                                                                      : RobustScaleMethod::Mad);
    }
  }
  return 1.0;
}

FitResult fit(std::span<const double> xs, std::span<const double> ys, const FitConfig& config) {
  config.validate();
  const std::size_t n = xs.size();
  if (ys.size() != n) throw Error(ErrorKind::Dimension, "fit: xs and ys differ in length");
  if (n < std::max<std::size_t>(3, static_cast<std::size_t>(config.order) + 1)) {
    throw Error(ErrorKind::InsufficientData,
                "fit: need at least max(p + 1, 3) observations, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw Error(ErrorKind::Domain, "fit: non-finite value at row " + std::to_string(i));
    }
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> xs_s(n);
  std::vector<double> ys_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs_s[i] = xs[perm[i]];
    ys_s[i] = ys[perm[i]];
  }

  KnotVector knots = staged("knots", [&] { return make_knots(xs_s, config.order, config.k_max); });
  const DesignMatrix basis = staged("design", [&] { return design_matrix(knots, xs_s); });
  const PenaltyMatrix pen = staged("penalty", [&] { return penalty_matrix(knots, config.penalty_order); });

  double sigma = staged("scale", [&] { return preliminary_scale(xs_s, ys_s, config); });
  {
    // A zero scale (exact or noise-free data) is floored relative to the
    // response spread so that standardized residuals stay defined.
    const auto [ymin, ymax] = std::minmax_element(ys_s.begin(), ys_s.end());
    const double spread = *ymax - *ymin > 0.0 ? *ymax - *ymin : 1.0;
    sigma = std::max(sigma, 1e-8 * spread);
  }

  const IrwlsOptions opts{config.irwls_tol, config.irwls_max_iter};
  double lambda = 0.0;
  if (config.lambda) {
    lambda = *config.lambda;
  } else {
    lambda = staged("select_lambda",
                    [&] { return select_lambda(basis, pen, ys_s, config.loss, sigma, config).lambda; });
  }

  const IrwlsResult final_fit =
      staged("irwls", [&] { return fit_at_lambda(basis, pen, ys_s, config.loss, sigma, lambda, {}, opts); });

  FitResult res{knots, final_fit.beta, sigma, lambda, {}, {}, 0.0, 0.0,
                final_fit.iterations, final_fit.converged, config.penalty_order, config.loss};

  const std::vector<double> fitted_s = basis.multiply(final_fit.beta);
  res.weights.resize(n);
  res.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.weights[perm[i]] = final_fit.weights[i];
    res.fitted[perm[i]] = fitted_s[i];
  }

  staged("gcv", [&] {
    const BandCholesky factor = band_cholesky(normal_matrix(basis, pen, final_fit.weights, sigma, lambda));
    res.edf = smoother_trace(basis, final_fit.weights, factor);
    const double denom = 1.0 - res.edf / static_cast<double>(n);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys_s[i] - fitted_s[i];
      rss += final_fit.weights[i] * r * r;
    }
    res.gcv = denom > 1e-10 ? rss / static_cast<double>(n) / (denom * denom)
                            : std::numeric_limits<double>::infinity();
    return 0;
  });
  return res;
}

std::vector<double> predict(const FitResult& result, std::span<const double> xs) {
  return design_matrix(result.knots, xs).multiply(result.beta);
}

}  // namespace rpspline
