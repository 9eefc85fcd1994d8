#pragma once

/**
 * @file feature_select.hpp
 * @brief Statistical feature pruning: low-variance columns first, then
 *        redundant columns by Spearman rank correlation.
 */

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plcprep/dataset.hpp"

namespace plcprep {

struct PruneThresholds {
  double variance = 0.001;     ///< columns with variance strictly below are dropped
  double correlation = 0.95;   ///< pairs with |R| strictly above lose their later column
};

struct VarianceDrop {
  std::string name;
  double variance;
};

struct CorrelationDrop {
  std::string name;
  std::string partner;  ///< the earlier column that was kept
  double coefficient;
};

struct PruneReport {
  std::vector<std::string> kept;
  std::vector<VarianceDrop> dropped_variance;
  std::vector<CorrelationDrop> dropped_correlated;
  PruneThresholds thresholds;
};

/// Symmetric matrix of pairwise Spearman coefficients, row-major.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const noexcept { return names.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * names.size() + col]; }
};

/// Population variance (divides by n). Throws invalid_argument on empty input.
double column_variance(std::span<const double> values);
inline double column_variance(const FeatureColumn& column) { return column_variance(column.values); }

/// 0-based ranks; tied values share the mean of the ranks they span.
std::vector<double> rank_transform(std::span<const double> values);
inline std::vector<double> rank_transform(const FeatureColumn& column) {
  return rank_transform(column.values);
}

/// Spearman rank correlation. Throws ErrorKind::degenerate when either
/// column is constant and invalid_argument on length mismatch or n < 2.
double spearman(const FeatureColumn& a, const FeatureColumn& b);

/// Pearson coefficient of two rank vectors that are already known to be
/// non-degenerate. Exposed so callers can reuse cached ranks.
double rank_correlation(std::span<const double> ranks_a, std::span<const double> ranks_b);

CorrelationMatrix correlation_matrix(std::span<const FeatureColumn> columns);
inline CorrelationMatrix correlation_matrix(const EventSeries& series) {
  return correlation_matrix(series.columns());
}
inline CorrelationMatrix correlation_matrix(const UniformSeries& series) {
  return correlation_matrix(series.columns());
}

/// Writes the matrix with names as header row and first column.
void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path);

template <typename Series>
struct PruneResult {
  Series series;
  PruneReport report;
  /// Spearman matrix of the columns that survived the variance stage.
  CorrelationMatrix correlation;
};

PruneResult<EventSeries> prune(const EventSeries& series, const PruneThresholds& thresholds);
PruneResult<UniformSeries> prune(const UniformSeries& series, const PruneThresholds& thresholds);

}  // namespace plcprep
