#include "plcprep/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "plcprep/error.hpp"

namespace plcprep {

const char* to_string(PartitionMethod method) noexcept {
  switch (method) {
    case PartitionMethod::rising_edges: return "rising_edges";
    case PartitionMethod::fixed_window: return "fixed_window";
  }
  return "unknown";
}

Partition partition_cycles(const UniformSeries& series, const std::string& signal, double cycle_time_s) {
  if (!(cycle_time_s > 0.0) || !std::isfinite(cycle_time_s)) {
    throw Error(ErrorKind::invalid_argument, "cycle time must be positive");
  }
  const std::size_t col = series.find_column(signal);
  if (col == UniformSeries::npos) {
    throw Error(ErrorKind::invalid_argument, "partition signal '" + signal + "' is not in the series");
  }
  const auto& values = series.columns()[col].values;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    throw Error(ErrorKind::degenerate, "unpartitionable signal '" + signal + "': constant values");
  }
  const double threshold = (*lo + *hi) / 2.0;

  std::vector<std::size_t> edges;
  bool prev_high = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool high = values[i] >= threshold;
    if (high && !prev_high) edges.push_back(i);
    prev_high = high;
  }

  Partition part;
  part.signal = signal;
  part.cycle_time_s = cycle_time_s;
  const double step_s = static_cast<double>(series.step_ms()) / 1000.0;

  if (edges.size() >= 2) {
    part.method = PartitionMethod::rising_edges;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double duration = static_cast<double>(edges[i + 1] - edges[i]) * step_s;
      const bool normal = duration >= 0.5 * cycle_time_s && duration <= 1.5 * cycle_time_s;
      part.segments.push_back({edges[i], edges[i + 1], duration, !normal});
    }
    return part;
  }

  part.method = PartitionMethod::fixed_window;
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cycle_time_s / step_s)));
  const std::size_t rows = series.rows();
  if (rows <= window) {
    part.segments.push_back({0, rows, static_cast<double>(rows) * step_s, false});
    return part;
  }
  for (std::size_t start = 0; start + window <= rows; start += window) {
    part.segments.push_back({start, start + window, static_cast<double>(window) * step_s, false});
  }
  return part;
}

Partition partition_cycles(const UniformSeries& series, const CycleDetection& detection) {
  if (detection.ranked_signals.empty()) {
    throw Error(ErrorKind::invalid_argument, "detection has no ranked signals");
  }
  return partition_cycles(series, detection.strongest().name, detection.cycle_time_s);
}

PartitionSummary summarize(const Partition& partition) {
  PartitionSummary s;
  s.n_cycles = partition.segments.size();
  if (s.n_cycles == 0) return s;
  double total = 0.0;
  s.min_duration_s = partition.segments.front().duration_s;
  s.max_duration_s = s.min_duration_s;
  for (const auto& seg : partition.segments) {
    total += seg.duration_s;
    s.min_duration_s = std::min(s.min_duration_s, seg.duration_s);
    s.max_duration_s = std::max(s.max_duration_s, seg.duration_s);
    if (seg.anomalous) ++s.n_anomalous;
  }
  s.mean_duration_s = total / static_cast<double>(s.n_cycles);
  return s;
}

void write_partition_csv(const Partition& partition, const UniformSeries& series, std::ostream& out) {
  out << "segment_index,start_ms,end_ms,duration_s,anomalous\n";
  for (std::size_t i = 0; i < partition.segments.size(); ++i) {
    const auto& seg = partition.segments[i];
    out << i << ',' << series.timestamp_at(seg.start_index) << ',' << series.timestamp_at(seg.end_index) << ','
        << format_number(seg.duration_s) << ',' << (seg.anomalous ? 1 : 0) << '\n';
  }
}

void write_partition_csv(const Partition& partition, const UniformSeries& series,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  }
  write_partition_csv(partition, series, out);
  if (!out) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

}  // namespace plcprep
