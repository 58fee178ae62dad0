#pragma once

#include <span>
#include <vector>

namespace rpspline::stats {

/// Linear-interpolation sample quantile of already sorted data
/// (h = (n-1) prob, interpolate between order statistics floor(h), ceil(h)).
double quantile_sorted(std::span<const double> sorted, double prob);

/// Same as quantile_sorted, copying and sorting first.
double quantile(std::span<const double> values, double prob);

double median(std::span<const double> values);

/// Sorted copy with duplicates removed.
std::vector<double> unique_sorted(std::span<const double> values);

double mean(std::span<const double> values);

}  // namespace rpspline::stats
