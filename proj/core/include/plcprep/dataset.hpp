#pragma once

/**
 * @file dataset.hpp
 * @brief Event-based and uniform multivariate PLC time series, CSV I/O.
 *
 * CSV layout: UTF-8, comma separated, `.` decimal separator, one header
 * line whose first field is `timestamp_ms`, integer millisecond timestamps
 * in the first column, one real-valued column per signal. Boolean signals
 * are stored as 0/1.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plcprep {

using TimestampMs = std::int64_t;

struct FeatureColumn {
  std::string name;
  std::vector<double> values;

  bool operator==(const FeatureColumn&) const = default;
};

/// Non-uniform series as logged by an event-based PLC: one row per change.
/// Invariants (checked on construction): strictly increasing timestamps,
/// every column has one finite value per timestamp, unique column names.
class EventSeries {
 public:
  EventSeries(std::vector<TimestampMs> timestamps_ms, std::vector<FeatureColumn> columns,
              std::string name = {});

  const std::vector<TimestampMs>& timestamps_ms() const noexcept { return timestamps_; }
  const std::vector<FeatureColumn>& columns() const noexcept { return columns_; }
  const std::string& name() const noexcept { return name_; }

  std::size_t rows() const noexcept { return timestamps_.size(); }
  std::size_t dims() const noexcept { return columns_.size(); }

  /// Same timestamps, different column subset. Used by pruning.
  EventSeries with_columns(std::vector<FeatureColumn> columns) const;

  bool operator==(const EventSeries&) const = default;

 private:
  std::vector<TimestampMs> timestamps_;
  std::vector<FeatureColumn> columns_;
  std::string name_;
};

/// Equidistant series: row i sits at start_ms + i * step_ms.
class UniformSeries {
 public:
  UniformSeries(TimestampMs start_ms, TimestampMs step_ms, std::size_t rows,
                std::vector<FeatureColumn> columns);

  TimestampMs start_ms() const noexcept { return start_ms_; }
  TimestampMs step_ms() const noexcept { return step_ms_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t dims() const noexcept { return columns_.size(); }
  const std::vector<FeatureColumn>& columns() const noexcept { return columns_; }

  TimestampMs timestamp_at(std::size_t row) const noexcept {
    return start_ms_ + static_cast<TimestampMs>(row) * step_ms_;
  }
  /// Sampling frequency in Hz.
  double sampling_frequency_hz() const;

  UniformSeries with_columns(std::vector<FeatureColumn> columns) const;

  /// Index of the column called `name`, or npos.
  std::size_t find_column(const std::string& name) const noexcept;

  bool operator==(const UniformSeries&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  TimestampMs start_ms_;
  TimestampMs step_ms_;
  std::size_t rows_;
  std::vector<FeatureColumn> columns_;
};

EventSeries parse_event_csv(const std::filesystem::path& path);
EventSeries parse_event_csv_text(std::string_view text, std::string name = {});

/// Interprets an already equidistant event series as a UniformSeries.
/// Throws ErrorKind::invalid_argument if the timestamps are not an
/// arithmetic progression (or there is a single row, which has no step).
UniformSeries as_uniform(const EventSeries& series);

void write_uniform_csv(const UniformSeries& series, const std::filesystem::path& path);
void write_event_csv(const EventSeries& series, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace plcprep
