#include "rpspline/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rpspline/error.hpp"
#include "rpspline/fitter.hpp"
#include "rpspline/io.hpp"
#include "rpspline/simulate.hpp"

namespace rpspline::cli {

namespace {

struct FitArgs {
  std::string input;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string loss = "huber";
  std::optional<double> c;
  int p = 4;
  int q = 2;
  int kmax = 40;
  std::string scale = "iqr";
  std::string lambda = "auto";
  std::string out = "fit.json";
  std::string plot;
};

struct PredictArgs {
  std::string model;
  std::string input;
  std::string x_col = "x";
  std::string out;
};

struct SimulateArgs {
  std::vector<std::string> functions{"f1", "f2", "f3"};
  std::vector<std::string> laws{"gaussian", "t3", "mixture", "slash"};
  std::vector<std::string> estimators{"huber_pspline", "ls_pspline"};
  int n = 100;
  int reps = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string format = "tsv";
  std::string out = "simulation.json";
  std::string table;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string default_plot_path(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + "_plot.csv";
  }
  return out + ".plot.csv";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  FitConfig cfg;
  const LossFamily family = parse_loss_family(a.loss);
  const double default_c = family == LossFamily::Tukey ? kTukeyDefaultC : kHuberDefaultC;
  cfg.loss = LossSpec{family, a.c.value_or(default_c)};
  cfg.order = a.p;
  cfg.penalty_order = a.q;
  cfg.k_max = a.kmax;
  cfg.scale_method = parse_scale_method(a.scale);
  if (cfg.scale_method == ScaleMethod::Fixed) {
    throw Error(ErrorKind::Config, "--scale accepts iqr, mad, diff or gasser");
  }
  if (a.lambda != "auto") {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(a.lambda, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != a.lambda.size()) throw Error(ErrorKind::Config, "--lambda must be 'auto' or a number");
    cfg.lambda = v;
  }
  cfg.validate();

  const io::XyData data = io::read_xy_csv(a.input, a.x_col, a.y_col);
  if (data.skipped > 0) {
    err << "warning: " << data.skipped << (data.skipped == 1 ? " row" : " rows") << " skipped\n";
  }
  const std::size_t need = std::max<std::size_t>(3, static_cast<std::size_t>(cfg.order) + 1);
  if (data.xs.size() < need) {
    throw Error(ErrorKind::InsufficientData, "need at least " + std::to_string(need) +
                                                 " valid rows, got " + std::to_string(data.xs.size()));
  }

  const FitResult res = fit(data.xs, data.ys, cfg);
  write_file(a.out, io::to_json(res).dump(2) + "\n");

  std::ostringstream plot;
  plot << "x,y,fitted,residual,weight,weight_bucket\n";
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    plot << fmt17(data.xs[i]) << ',' << fmt17(data.ys[i]) << ',' << fmt17(res.fitted[i]) << ','
         << fmt17(data.ys[i] - res.fitted[i]) << ',' << fmt17(res.weights[i]) << ','
         << io::weight_bucket(res.weights[i]) << '\n';
  }
  const std::string plot_path = a.plot.empty() ? default_plot_path(a.out) : a.plot;
  write_file(plot_path, plot.str());

  out << "sigma_hat\t" << res.sigma_hat << '\n'
      << "lambda_hat\t" << res.lambda_hat << '\n'
      << "edf\t" << res.edf << '\n'
      << "iterations\t" << res.iterations << '\n'
      << "converged\t" << (res.converged ? "true" : "false") << '\n';
  if (!res.converged) err << "warning: IRWLS did not converge\n";
  return kExitOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  std::ifstream f(a.model);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + a.model + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("cannot parse model JSON: ") + e.what());
  }
  const FitResult model = io::fit_result_from_json(j);
  const std::vector<double> xs = io::read_column_csv(a.input, a.x_col);
  const std::vector<double> fitted = predict(model, xs);

  std::ostringstream csv;
  csv << "x,fitted\n";
  for (std::size_t i = 0; i < xs.size(); ++i) csv << fmt17(xs[i]) << ',' << fmt17(fitted[i]) << '\n';
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_file(a.out, csv.str());
  }
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig cfg;
  cfg.functions.clear();
  cfg.error_laws.clear();
  cfg.estimators.clear();
  for (const auto& s : a.functions) cfg.functions.push_back(parse_test_function(s));
  for (const auto& s : a.laws) cfg.error_laws.push_back(parse_error_law(s));
  for (const auto& s : a.estimators) cfg.estimators.push_back(parse_estimator(s));
  cfg.n = a.n;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.parallel_workers = a.workers;
  const TableFormat format = parse_table_format(a.format);
  cfg.validate();

  out << "seed\t" << cfg.seed << '\n';
  const SimReport report = run_monte_carlo(cfg);
  write_file(a.out, io::to_json(report).dump(2) + "\n");
  const std::string table = report_table(report, format);
  if (a.table.empty()) {
    out << table;
  } else {
    write_file(a.table, table);
  }
  return kExitOk;
}

int default_workers() {
  if (const char* env = std::getenv("ROBUST_PSPLINE_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust (M-type) penalized spline regression"};
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a robust penalized spline to CSV data");
  fit_cmd->add_option("--input", fa.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--x", fa.x_col, "Predictor column name");
  fit_cmd->add_option("--y", fa.y_col, "Response column name");
  fit_cmd->add_option("--loss", fa.loss, "huber | quadratic | tukey | smoothed-huber");
  fit_cmd->add_option("--c", fa.c, "Tuning constant (default 1.345, tukey 4.685)");
  fit_cmd->add_option("--p", fa.p, "Spline order");
  fit_cmd->add_option("--q", fa.q, "Penalty derivative order");
  fit_cmd->add_option("--kmax", fa.kmax, "Cap on the number of interior knots");
  fit_cmd->add_option("--scale", fa.scale, "iqr | mad | diff | gasser");
  fit_cmd->add_option("--lambda", fa.lambda, "auto (GCV) or a fixed value");
  fit_cmd->add_option("--out", fa.out, "Fit result JSON path");
  fit_cmd->add_option("--plot", fa.plot, "Plot-data CSV path (default derived from --out)");

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "Evaluate a saved fit at new x values");
  predict_cmd->add_option("--model", pa.model, "Fit result JSON")->required();
  predict_cmd->add_option("--input", pa.input, "CSV with the x column")->required();
  predict_cmd->add_option("--x", pa.x_col, "Predictor column name");
  predict_cmd->add_option("--out", pa.out, "Output CSV (default stdout)");

  SimulateArgs sa;
  sa.workers = default_workers();
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo comparison of Huber and LS P-splines");
  sim_cmd->add_option("--functions", sa.functions, "f1,f2,f3")->delimiter(',');
  sim_cmd->add_option("--laws", sa.laws, "gaussian,t3,mixture,slash")->delimiter(',');
  sim_cmd->add_option("--estimators", sa.estimators, "huber_pspline,ls_pspline")->delimiter(',');
  sim_cmd->add_option("--n", sa.n, "Sample size per replication");
  sim_cmd->add_option("--reps", sa.reps, "Replications per cell");
  sim_cmd->add_option("--seed", sa.seed, "Base RNG seed");
  sim_cmd->add_option("--workers", sa.workers, "Worker threads (env ROBUST_PSPLINE_WORKERS)");
  sim_cmd->add_option("--format", sa.format, "tsv | markdown | json");
  sim_cmd->add_option("--out", sa.out, "Report JSON path");
  sim_cmd->add_option("--table", sa.table, "Table output path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fa, out, err);
    if (predict_cmd->parsed()) return cmd_predict(pa, out);
    if (sim_cmd->parsed()) return cmd_simulate(sa, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace rpspline::cli
