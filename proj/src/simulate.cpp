#include "rpspline/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <thread>

#include "rpspline/error.hpp"
#include "rpspline/fitter.hpp"
#include "rpspline/io.hpp"
#include "rpspline/stats.hpp"

namespace rpspline {

std::string to_string(TestFunction f) {
  switch (f) {
    case TestFunction::F1: return "f1";
    case TestFunction::F2: return "f2";
    case TestFunction::F3: return "f3";
  }
  return "unknown";
}

std::string to_string(ErrorLaw law) {
  switch (law) {
    case ErrorLaw::Gaussian: return "gaussian";
    case ErrorLaw::T3: return "t3";
    case ErrorLaw::Mixture: return "mixture";
    case ErrorLaw::Slash: return "slash";
    case ErrorLaw::Zero: return "zero";
  }
  return "unknown";
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::HuberPspline: return "huber_pspline";
    case Estimator::LsPspline: return "ls_pspline";
  }
  return "unknown";
}

TestFunction parse_test_function(std::string_view name) {
  if (name == "f1") return TestFunction::F1;
  if (name == "f2") return TestFunction::F2;
  if (name == "f3") return TestFunction::F3;
  throw Error(ErrorKind::Config, "unknown test function '" + std::string(name) + "'");
}

ErrorLaw parse_error_law(std::string_view name) {
  if (name == "gaussian") return ErrorLaw::Gaussian;
  if (name == "t3") return ErrorLaw::T3;
  if (name == "mixture") return ErrorLaw::Mixture;
  if (name == "slash") return ErrorLaw::Slash;
  if (name == "zero") return ErrorLaw::Zero;
  throw Error(ErrorKind::Config, "unknown error law '" + std::string(name) + "'");
}

Estimator parse_estimator(std::string_view name) {
  if (name == "huber_pspline" || name == "huber") return Estimator::HuberPspline;
  if (name == "ls_pspline" || name == "ls") return Estimator::LsPspline;
  throw Error(ErrorKind::Config, "unknown estimator '" + std::string(name) + "'");
}

TableFormat parse_table_format(std::string_view name) {
  if (name == "tsv") return TableFormat::Tsv;
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  if (name == "json") return TableFormat::Json;
  throw Error(ErrorKind::Config, "unknown table format '" + std::string(name) + "'");
}

double test_function(TestFunction f, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::Domain, "test functions are defined on [0, 1]");
  constexpr double pi = std::numbers::pi;
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi); };
  switch (f) {
    case TestFunction::F1:
      return std::sin(2.0 * pi * t) + std::exp(-3.0 * (t - 0.5) * (t - 0.5)) + 0.4;
    case TestFunction::F2:
      return 1.0 / (0.1 + t) + 8.0 * std::exp(-400.0 * (t - 0.5) * (t - 0.5));
    case TestFunction::F3:
      return phi((t - 0.5) / 0.15) - phi((t - 0.8) / 0.04);
  }
  throw Error(ErrorKind::Config, "unknown test function");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SimRng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return SimRng(h);
}

std::vector<double> sample_errors(ErrorLaw law, std::size_t n, SimRng& rng) {
  std::vector<double> e(n, 0.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (law) {
    case ErrorLaw::Gaussian:
      for (double& x : e) x = normal(rng);
      break;
    case ErrorLaw::T3: {
      std::student_t_distribution<double> t3(3.0);
      for (double& x : e) x = t3(rng);
      break;
    }
    case ErrorLaw::Mixture: {
      std::bernoulli_distribution wide(0.15);
      for (double& x : e) {
        const double sd = wide(rng) ? 9.0 : 1.0;
        x = sd * normal(rng);
      }
      break;
    }
    case ErrorLaw::Slash: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (double& x : e) {
        const double z = normal(rng);
        const double u = 1.0 - unif(rng);  // (0, 1]
        x = z / u;
      }
      break;
    }
    case ErrorLaw::Zero:
      break;
  }
  return e;
}

void SimConfig::validate() const {
  if (n < 20) throw Error(ErrorKind::Config, "simulation sample size n must be >= 20");
  if (reps < 1) throw Error(ErrorKind::Config, "replication count must be >= 1");
  if (parallel_workers < 1) throw Error(ErrorKind::Config, "worker count must be >= 1");
}

const SimCell* SimReport::find(TestFunction f, ErrorLaw law, Estimator e) const {
  for (const auto& c : cells) {
    if (c.function == f && c.law == law && c.estimator == e) return &c;
  }
  return nullptr;
}

namespace {

FitConfig estimator_config(Estimator e) {
  FitConfig cfg;
  cfg.scale_method = ScaleMethod::Iqr;
  cfg.loss = e == Estimator::HuberPspline ? LossSpec::huber(kHuberDefaultC) : LossSpec::quadratic();
  return cfg;
}

}  // namespace

SimReport run_monte_carlo(const SimConfig& config) {
  config.validate();
  const std::size_t n_fun = config.functions.size();
  const std::size_t n_law = config.error_laws.size();
  const std::size_t n_est = config.estimators.size();
  const auto reps = static_cast<std::size_t>(config.reps);
  const auto n = static_cast<std::size_t>(config.n);

  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i + 1) / static_cast<double>(n);

  // One slot per (function, law, estimator, replication); NaN marks a failed fit.
  const std::size_t n_tasks = n_fun * n_law * reps;
  std::vector<double> mse(n_tasks * n_est, std::numeric_limits<double>::quiet_NaN());

  auto run_task = [&](std::size_t task) {
    const std::size_t rep = task % reps;
    const std::size_t law_idx = (task / reps) % n_law;
    const std::size_t fun_idx = task / (reps * n_law);
    const TestFunction f = config.functions[fun_idx];
    const ErrorLaw law = config.error_laws[law_idx];

    SimRng rng = make_stream(config.seed, static_cast<std::uint64_t>(f),
                             static_cast<std::uint64_t>(law), rep);
    const std::vector<double> eps = sample_errors(law, n, rng);
    std::vector<double> truth(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = test_function(f, t[i]);
      ys[i] = truth[i] + eps[i];
    }
    for (std::size_t e = 0; e < n_est; ++e) {
      try {
        const FitResult res = fit(t, ys, estimator_config(config.estimators[e]));
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += (res.fitted[i] - truth[i]) * (res.fitted[i] - truth[i]);
        mse[task * n_est + e] = acc / static_cast<double>(n);
      } catch (const Error&) {
        // recorded as a failure below
      }
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.parallel_workers),
                                             std::max<std::size_t>(n_tasks, 1));
  if (workers <= 1) {
    for (std::size_t task = 0; task < n_tasks; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t task = next++; task < n_tasks; task = next++) run_task(task);
      });
    }
    for (auto& th : pool) th.join();
  }

  SimReport report;
  report.config = config;
  for (std::size_t fi = 0; fi < n_fun; ++fi) {
    for (std::size_t li = 0; li < n_law; ++li) {
      for (std::size_t e = 0; e < n_est; ++e) {
        SimCell cell{config.functions[fi], config.error_laws[li], config.estimators[e], 0.0, 0.0, 0, {}};
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const double v = mse[((fi * n_law + li) * reps + rep) * n_est + e];
          if (std::isnan(v)) {
            ++cell.failures;
          } else {
            cell.mses.push_back(v);
          }
        }
        if (!cell.mses.empty()) {
          cell.mean_mse = stats::mean(cell.mses);
          cell.median_mse = stats::median(cell.mses);
        } else {
          cell.mean_mse = cell.median_mse = std::numeric_limits<double>::quiet_NaN();
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

namespace {

std::string sig3(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string report_table(const SimReport& report, TableFormat format) {
  if (format == TableFormat::Json) return io::to_json(report).dump(2) + "\n";

  const auto& ests = report.config.estimators;
  std::vector<std::string> header{"function", "law"};
  for (Estimator e : ests) {
    header.push_back(to_string(e) + "_mean");
    header.push_back(to_string(e) + "_median");
  }
  std::vector<std::vector<std::string>> rows;
  for (TestFunction f : report.config.functions) {
    for (ErrorLaw law : report.config.error_laws) {
      std::vector<std::string> row{to_string(f), to_string(law)};
      bool any = false;
      for (Estimator e : ests) {
        const SimCell* c = report.find(f, law, e);
        any = any || c != nullptr;
        row.push_back(c ? sig3(c->mean_mse) : "NA");
        row.push_back(c ? sig3(c->median_mse) : "NA");
      }
      if (any) rows.push_back(std::move(row));
    }
  }

  std::ostringstream out;
  if (format == TableFormat::Tsv) {
    auto emit = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << r[i];
      out << '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
  } else {
    auto emit = [&](const std::vector<std::string>& r) {
      out << '|';
      for (const auto& cell : r) out << ' ' << cell << " |";
      out << '\n';
    };
    emit(header);
    out << '|';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i < 2 ? " --- |" : " ---: |");
    out << '\n';
    for (const auto& r : rows) emit(r);
  }
  return out.str();
}

}  // namespace rpspline
