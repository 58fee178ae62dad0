#include "rpspline/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>

#include "rpspline/error.hpp"

namespace rpspline::io {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_finite(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::Io, "column '" + name + "' not found in CSV header");
}

}  // namespace

json to_json(const KnotVector& knots) {
  return json{{"interior", knots.interior()},
              {"lo", knots.lo()},
              {"hi", knots.hi()},
              {"order", knots.order()}};
}

KnotVector knots_from_json(const json& j) {
  return KnotVector(j.at("interior").get<std::vector<double>>(), j.at("lo").get<double>(),
                    j.at("hi").get<double>(), j.at("order").get<int>());
}

json to_json(const FitResult& r) {
  return json{{"knots", to_json(r.knots)},
              {"beta", r.beta},
              {"sigma_hat", r.sigma_hat},
              {"lambda_hat", r.lambda_hat},
              {"weights", r.weights},
              {"fitted", r.fitted},
              {"edf", r.edf},
              {"gcv", number_or_null(r.gcv)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"penalty_order", r.penalty_order},
              {"loss", {{"family", to_string(r.loss.family)}, {"c", r.loss.c}}}};
}

FitResult fit_result_from_json(const json& j) {
  try {
    const json& loss = j.at("loss");
    return FitResult{knots_from_json(j.at("knots")),
                     j.at("beta").get<std::vector<double>>(),
                     j.at("sigma_hat").get<double>(),
                     j.at("lambda_hat").get<double>(),
                     j.at("weights").get<std::vector<double>>(),
                     j.at("fitted").get<std::vector<double>>(),
                     j.at("edf").get<double>(),
                     number_from(j.at("gcv")),
                     j.at("iterations").get<int>(),
                     j.at("converged").get<bool>(),
                     j.at("penalty_order").get<int>(),
                     LossSpec{parse_loss_family(loss.at("family").get<std::string>()),
                              loss.at("c").get<double>()}};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed fit result JSON: ") + e.what());
  }
}

json to_json(const SimConfig& c) {
  json funs = json::array();
  for (auto f : c.functions) funs.push_back(to_string(f));
  json laws = json::array();
  for (auto l : c.error_laws) laws.push_back(to_string(l));
  json ests = json::array();
  for (auto e : c.estimators) ests.push_back(to_string(e));
  // Worker count is deliberately absent: results do not depend on it.
  return json{{"n", c.n},       {"reps", c.reps},         {"functions", funs},
              {"error_laws", laws}, {"estimators", ests}, {"seed", c.seed}};
}

json to_json(const SimReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back(json{{"function", to_string(c.function)},
                         {"law", to_string(c.law)},
                         {"estimator", to_string(c.estimator)},
                         {"mean_mse", number_or_null(c.mean_mse)},
                         {"median_mse", number_or_null(c.median_mse)},
                         {"failures", c.failures},
                         {"mses", c.mses}});
  }
  return json{{"config", to_json(report.config)}, {"cells", cells}};
}

XyData read_xy_csv(std::istream& in, const std::string& x_col, const std::string& y_col) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "CSV input is empty (header row required)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  const std::size_t xi = column_index(header, x_col);
  const std::size_t yi = column_index(header, y_col);

  XyData data;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    const auto x = xi < cells.size() ? parse_finite(cells[xi]) : std::nullopt;
    const auto y = yi < cells.size() ? parse_finite(cells[yi]) : std::nullopt;
    if (!x || !y) {
      ++data.skipped;
      continue;
    }
    data.xs.push_back(*x);
    data.ys.push_back(*y);
  }
  return data;
}

XyData read_xy_csv(const std::string& path, const std::string& x_col, const std::string& y_col) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return read_xy_csv(in, x_col, y_col);
}

std::vector<double> read_column_csv(const std::string& path, const std::string& col) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  XyData d = read_xy_csv(in, col, col);
  return std::move(d.xs);
}

const char* weight_bucket(double w) {
  if (w > 0.66) return "high";
  if (w > 0.33) return "mid";
  return "low";
}

}  // namespace rpspline::io
