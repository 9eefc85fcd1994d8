#include "plcprep/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "plcprep/error.hpp"

namespace plcprep {

namespace {

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

bool is_constant(std::span<const double> values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>{}) == values.end();
}

void require_thresholds(const PruneThresholds& t) {
  if (!(t.variance >= 0.0) || !std::isfinite(t.variance)) {
    throw Error(ErrorKind::invalid_argument, "variance threshold must be finite and >= 0");
  }
  if (!(t.correlation >= 0.0 && t.correlation <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "correlation threshold must lie in [0, 1]");
  }
}

// Builds the full matrix from precomputed ranks; callers guarantee no
// constant columns are present.
CorrelationMatrix matrix_from_ranks(std::vector<std::string> names,
                                    const std::vector<std::vector<double>>& ranks) {
  const std::size_t d = names.size();
  CorrelationMatrix matrix{std::move(names), std::vector<double>(d * d, 0.0)};
  for (std::size_t k = 0; k < d; ++k) {
    matrix.values[k * d + k] = 1.0;
    for (std::size_t m = k + 1; m < d; ++m) {
      const double r = rank_correlation(ranks[k], ranks[m]);
      matrix.values[k * d + m] = r;
      matrix.values[m * d + k] = r;
    }
  }
  return matrix;
}

struct PruneSelection {
  std::vector<std::size_t> kept;  // indices into the input columns
  PruneReport report;
  CorrelationMatrix correlation;
};

PruneSelection select_columns(std::span<const FeatureColumn> columns, const PruneThresholds& thresholds) {
  require_thresholds(thresholds);

  PruneSelection sel;
  sel.report.thresholds = thresholds;

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const double var = column_variance(columns[i]);
    if (var < thresholds.variance) {
      sel.report.dropped_variance.push_back({columns[i].name, var});
    } else {
      survivors.push_back(i);
    }
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> ranks;
  for (std::size_t idx : survivors) {
    if (is_constant(columns[idx].values)) {
      throw Error(ErrorKind::degenerate,
                  "degenerate column '" + columns[idx].name +
                      "': constant values survive the variance stage (use a variance threshold > 0)");
    }
    names.push_back(columns[idx].name);
    ranks.push_back(rank_transform(columns[idx]));
  }
  sel.correlation = matrix_from_ranks(std::move(names), ranks);

  // Scan pairs k < m in original order; the earlier column of a correlated
  // pair is kept. Columns that were already dropped do not knock out others.
  std::vector<bool> dropped(survivors.size(), false);
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    if (dropped[k]) continue;
    for (std::size_t m = k + 1; m < survivors.size(); ++m) {
      if (dropped[m]) continue;
      const double r = sel.correlation.at(k, m);
      if (std::abs(r) > thresholds.correlation) {
        dropped[m] = true;
        sel.report.dropped_correlated.push_back(
            {columns[survivors[m]].name, columns[survivors[k]].name, r});
      }
    }
  }

  for (std::size_t k = 0; k < survivors.size(); ++k) {
    if (!dropped[k]) {
      sel.kept.push_back(survivors[k]);
      sel.report.kept.push_back(columns[survivors[k]].name);
    }
  }
  if (sel.kept.empty()) {
    throw Error(ErrorKind::degenerate, "no features remain");
  }
  return sel;
}

std::vector<FeatureColumn> pick(std::span<const FeatureColumn> columns, const std::vector<std::size_t>& idx) {
  std::vector<FeatureColumn> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(columns[i]);
  return out;
}

}  // namespace

double column_variance(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::invalid_argument, "variance of an empty column");
  }
  const double mu = mean_of(values);
  double acc = 0.0;
  for (double a : values) {
    const double dev = a - mu;
    acc += dev * dev;
  }
  return acc / static_cast<double>(values.size());
}

std::vector<double> rank_transform(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorKind::invalid_argument, "rank transform of an empty column");
  }
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j are tied; each gets the mean of ranks i..j
    const double shared = 0.5 * static_cast<double>(i + j);
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = shared;
    i = j + 1;
  }
  return ranks;
}

double rank_correlation(std::span<const double> ranks_a, std::span<const double> ranks_b) {
  if (ranks_a.size() != ranks_b.size()) {
    throw Error(ErrorKind::invalid_argument, "rank vectors differ in length");
  }
  if (ranks_a.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "correlation needs at least two samples");
  }
  const double mean_a = mean_of(ranks_a);
  const double mean_b = mean_of(ranks_b);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < ranks_a.size(); ++i) {
    const double da = ranks_a[i] - mean_a;
    const double db = ranks_b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw Error(ErrorKind::degenerate, "degenerate column: zero rank variance");
  }
  // The 1/n factors cancel; sqrt(v*v) == v exactly, so identical inputs give exactly 1.
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double spearman(const FeatureColumn& a, const FeatureColumn& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(ErrorKind::invalid_argument,
                "columns '" + a.name + "' and '" + b.name + "' differ in length");
  }
  if (a.values.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "correlation needs at least two samples");
  }
  for (const auto* c : {&a, &b}) {
    if (is_constant(c->values)) {
      throw Error(ErrorKind::degenerate, "degenerate column '" + c->name + "': constant values");
    }
  }
  return rank_correlation(rank_transform(a), rank_transform(b));
}

CorrelationMatrix correlation_matrix(std::span<const FeatureColumn> columns) {
  if (columns.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "correlation matrix needs at least two columns");
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> ranks;
  for (const auto& column : columns) {
    if (is_constant(column.values)) {
      throw Error(ErrorKind::degenerate, "degenerate column '" + column.name + "': constant values");
    }
    names.push_back(column.name);
    ranks.push_back(rank_transform(column));
  }
  return matrix_from_ranks(std::move(names), ranks);
}

void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  }
  out << "feature";
  for (const auto& name : matrix.names) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out << matrix.names[r];
    for (std::size_t c = 0; c < matrix.size(); ++c) out << ',' << format_number(matrix.at(r, c));
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

PruneResult<EventSeries> prune(const EventSeries& series, const PruneThresholds& thresholds) {
  auto sel = select_columns(series.columns(), thresholds);
  return {series.with_columns(pick(series.columns(), sel.kept)), std::move(sel.report),
          std::move(sel.correlation)};
}

PruneResult<UniformSeries> prune(const UniformSeries& series, const PruneThresholds& thresholds) {
  auto sel = select_columns(series.columns(), thresholds);
  return {series.with_columns(pick(series.columns(), sel.kept)), std::move(sel.report),
          std::move(sel.correlation)};
}

}  // namespace plcprep
