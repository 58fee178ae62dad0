#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpspline/fitter.hpp"
#include "rpspline/simulate.hpp"

namespace rpspline::io {

nlohmann::json to_json(const KnotVector& knots);
KnotVector knots_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitResult& result);
FitResult fit_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const SimReport& report);

struct XyData {
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t skipped = 0;  // rows with a missing or non-numeric cell
};

/// Comma-separated, header row required. Rows whose x or y cell does not
/// parse as a finite number are skipped and counted. Throws Error(Io) on a
/// missing file or column.
XyData read_xy_csv(const std::string& path, const std::string& x_col, const std::string& y_col);
XyData read_xy_csv(std::istream& in, const std::string& x_col, const std::string& y_col);

/// Reads a single numeric column (used by `predict`).
std::vector<double> read_column_csv(const std::string& path, const std::string& col);

/// (0, 0.33] -> low, (0.33, 0.66] -> mid, (0.66, 1] -> high; 0 is low.
const char* weight_bucket(double w);

}  // namespace rpspline::io
