#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rpspline {

enum class TestFunction { F1, F2, F3 };
/// `Zero` draws no noise; it exists for deterministic harness checks.
enum class ErrorLaw { Gaussian, T3, Mixture, Slash, Zero };
enum class Estimator { HuberPspline, LsPspline };

std::string to_string(TestFunction f);
std::string to_string(ErrorLaw law);
std::string to_string(Estimator e);
TestFunction parse_test_function(std::string_view name);
ErrorLaw parse_error_law(std::string_view name);
Estimator parse_estimator(std::string_view name);

/// f1(t) = sin(2 pi t) + exp(-3 (t - 0.5)^2) + 0.4
/// f2(t) = 1 / (0.1 + t) + 8 exp(-400 (t - 0.5)^2)
/// f3(t) = phi((t - 0.5) / 0.15) - phi((t - 0.8) / 0.04), phi the N(0,1) density
/// Throws Error(Domain) for t outside [0, 1].
double test_function(TestFunction f, double t);

/// Per-stream generator; streams are keyed by a counter, not by thread.
using SimRng = std::mt19937_64;

/// Independent generator for (seed, key...) via SplitMix64 mixing.
SimRng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0);

std::vector<double> sample_errors(ErrorLaw law, std::size_t n, SimRng& rng);

struct SimConfig {
  int n = 100;
  int reps = 200;
  std::vector<TestFunction> functions{TestFunction::F1, TestFunction::F2, TestFunction::F3};
  std::vector<ErrorLaw> error_laws{ErrorLaw::Gaussian, ErrorLaw::T3, ErrorLaw::Mixture,
                                   ErrorLaw::Slash};
  std::vector<Estimator> estimators{Estimator::HuberPspline, Estimator::LsPspline};
  std::uint64_t seed = 1;
  int parallel_workers = 1;

  /// Throws Error(Config): n >= 20, reps >= 1, workers >= 1.
  void validate() const;
};

struct SimCell {
  TestFunction function;
  ErrorLaw law;
  Estimator estimator;
  double mean_mse = 0.0;
  double median_mse = 0.0;
  int failures = 0;
  std::vector<double> mses;  // successful replications, by replication index
};

struct SimReport {
  SimConfig config;
  std::vector<SimCell> cells;  // function-major, then law, then estimator

  const SimCell* find(TestFunction f, ErrorLaw law, Estimator e) const;
};

/// Monte-Carlo study: t_i = i/n, Y_i = f(t_i) + eps_i, both estimators fitted
/// to the same draws. Results do not depend on parallel_workers.
SimReport run_monte_carlo(const SimConfig& config);

enum class TableFormat { Tsv, Markdown, Json };
TableFormat parse_table_format(std::string_view name);

/// Rows function x law, columns estimator x {mean, median}, 3 significant digits.
std::string report_table(const SimReport& report, TableFormat format);

}  // namespace rpspline
