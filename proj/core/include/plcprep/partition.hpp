#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "plcprep/dataset.hpp"
#include "plcprep/periodicity.hpp"

namespace plcprep {

struct CycleSegment {
  std::size_t start_index = 0;  ///< row in the UniformSeries
  std::size_t end_index = 0;    ///< exclusive
  double duration_s = 0.0;
  bool anomalous = false;

  bool operator==(const CycleSegment&) const = default;
};

enum class PartitionMethod { rising_edges, fixed_window };

const char* to_string(PartitionMethod method) noexcept;

struct Partition {
  std::string signal;
  double cycle_time_s = 0.0;
  PartitionMethod method = PartitionMethod::rising_edges;
  std::vector<CycleSegment> segments;
};

struct PartitionSummary {
  std::size_t n_cycles = 0;
  std::size_t n_anomalous = 0;
  double mean_duration_s = 0.0;
  double min_duration_s = 0.0;
  double max_duration_s = 0.0;
};

/// Splits `series` into production cycles along the rising edges of one
/// signal. The signal is binarised at its midrange; a rising edge is a row
/// at or above the threshold whose predecessor is below it. The first row
/// counts as an edge when it is already at or above the threshold. Spans
/// between consecutive edges become segments; a segment is anomalous when
/// its duration lies outside [0.5, 1.5] * cycle_time_s. With fewer than two
/// edges the series is cut into fixed windows of one cycle time instead.
///
/// Throws ErrorKind::degenerate if the signal is constant.
Partition partition_cycles(const UniformSeries& series, const std::string& signal, double cycle_time_s);

/// Uses the strongest cyclic signal and cycle time from a detection.
Partition partition_cycles(const UniformSeries& series, const CycleDetection& detection);

PartitionSummary summarize(const Partition& partition);

/// segment_index,start_ms,end_ms,duration_s,anomalous (0/1)
void write_partition_csv(const Partition& partition, const UniformSeries& series,
                         const std::filesystem::path& path);
void write_partition_csv(const Partition& partition, const UniformSeries& series, std::ostream& out);

}  // namespace plcprep
