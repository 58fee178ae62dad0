#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rpspline/basis.hpp"
#include "rpspline/knots.hpp"
#include "rpspline/loss.hpp"
#include "rpspline/penalty.hpp"

namespace rpspline {

enum class ScaleMethod { Iqr, Mad, DiffMedian, Gasser, Fixed };

ScaleMethod parse_scale_method(std::string_view name);
std::string to_string(ScaleMethod method);

struct FitConfig {
  LossSpec loss = LossSpec::huber();
  int order = 4;             // p
  int penalty_order = 2;     // q
  int k_max = 40;
  ScaleMethod scale_method = ScaleMethod::Iqr;
  double fixed_sigma = 1.0;  // used with ScaleMethod::Fixed
  /// Fixed lambda in data units; nullopt selects lambda by GCV.
  std::optional<double> lambda;
  double irwls_tol = 1e-8;
  int irwls_max_iter = 100;
  /// Nelder-Mead start in log10 of the normalized penalty (see penalty_unit).
  double nm_start = 0.0;
  int nm_max_iter = 200;

  /// Throws Error(Config) / Error(Order) on invalid settings.
  void validate() const;
};

struct IrwlsResult {
  std::vector<double> beta;
  std::vector<double> weights;
  int iterations = 0;
  bool converged = false;
  /// Penalized objective before the first update and after every update.
  std::vector<double> objective_trace;
  /// Iterations whose objective rose above the previous one (beyond
  /// rounding); zero for convex losses.
  int descent_violations = 0;
};

/// Penalized objective (1/n) sum rho(r_i / sigma) + lambda beta^T D beta.
double penalized_objective(const DesignMatrix& basis, const PenaltyMatrix& pen,
                           std::span<const double> ys, const LossSpec& loss, double sigma,
                           double lambda, std::span<const double> beta);

/// Estimating function (gradient of penalized_objective):
/// -(1/n) sum psi(r_i / sigma) B(x_i) / sigma + 2 lambda D beta.
std::vector<double> estimating_equation(const DesignMatrix& basis, const PenaltyMatrix& pen,
                                        std::span<const double> ys, const LossSpec& loss,
                                        double sigma, double lambda,
                                        std::span<const double> beta);

/// Weighted normal-equation matrix B^T W B + 2 n lambda sigma^2 D.
BandedSPD normal_matrix(const DesignMatrix& basis, const PenaltyMatrix& pen,
                        std::span<const double> weights, double sigma, double lambda);

/// lambda value whose penalty 2 n lambda sigma^2 D has the same trace as
/// B^T B; the selector searches log10(lambda / penalty_unit).
double penalty_unit(const DesignMatrix& basis, const PenaltyMatrix& pen, double sigma);

struct IrwlsOptions {
  double tol = 1e-8;
  int max_iter = 100;
};

/// Iteratively reweighted penalized least squares from beta0.
/// Throws Error(SingularFit) when a weighted system cannot be factored.
IrwlsResult irwls(const DesignMatrix& basis, const PenaltyMatrix& pen,
                  std::span<const double> ys, const LossSpec& loss, double sigma, double lambda,
                  std::span<const double> beta0, const IrwlsOptions& opts = {});

/// Robust fit at fixed lambda including the starting-point policy:
/// quadratic start, and for redescending losses a Huber stage in between.
/// `warm` (if non-empty) replaces the quadratic start.
IrwlsResult fit_at_lambda(const DesignMatrix& basis, const PenaltyMatrix& pen,
                          std::span<const double> ys, const LossSpec& loss, double sigma,
                          double lambda, std::span<const double> warm = {},
                          const IrwlsOptions& opts = {});

struct GcvEvaluation {
  double gcv = 0.0;
  double rss_weighted = 0.0;  // (1/n) sum W_i r_i^2
  double edf = 0.0;           // Tr H(lambda)
  IrwlsResult fit;
};

/// Runs the robust fit at lambda and scores it by GCV. Throws
/// Error(DegenerateGcv) when Tr H >= n.
GcvEvaluation gcv_score(const DesignMatrix& basis, const PenaltyMatrix& pen,
                        std::span<const double> ys, const LossSpec& loss, double sigma,
                        double lambda, std::span<const double> beta_warm = {},
                        const IrwlsOptions& opts = {});

struct LambdaSelection {
  double lambda = 0.0;
  double log10_normalized = 0.0;  // log10(lambda / penalty_unit)
  double gcv = 0.0;
  int evaluations = 0;
  /// (log10_normalized, gcv) of every finite evaluation, in order.
  std::vector<std::pair<double, double>> trace;
};

/// Nelder-Mead over u = log10(lambda / penalty_unit) in [-10, 10].
/// Throws Error(Selection) when no evaluation is usable.
LambdaSelection select_lambda(const DesignMatrix& basis, const PenaltyMatrix& pen,
                              std::span<const double> ys, const LossSpec& loss, double sigma,
                              const FitConfig& config);

struct FitResult {
  KnotVector knots;
  std::vector<double> beta;
  double sigma_hat = 0.0;
  double lambda_hat = 0.0;
  std::vector<double> weights;  // input order
  std::vector<double> fitted;   // input order
  double edf = 0.0;
  double gcv = 0.0;
  int iterations = 0;
  bool converged = false;
  int penalty_order = 2;
  LossSpec loss;
};

/// Full estimator: sort, knots, design, penalty, preliminary scale, lambda
/// (fixed or GCV), final IRWLS. Errors carry a stage label in their message.
FitResult fit(std::span<const double> xs, std::span<const double> ys, const FitConfig& config);

/// design_matrix(result.knots, xs) * beta. Throws Error(Domain) outside [a, b].
std::vector<double> predict(const FitResult& result, std::span<const double> xs);

/// Preliminary scale of (xs, ys) sorted by xs, per `config.scale_method`.
double preliminary_scale(std::span<const double> xs_sorted, std::span<const double> ys_sorted,
                         const FitConfig& config);

}  // namespace rpspline
