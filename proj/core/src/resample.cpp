#include "plcprep/resample.hpp"

#include "plcprep/error.hpp"

namespace plcprep {

double sampling_frequency(TimestampMs step_ms) {
  if (step_ms <= 0) {
    throw Error(ErrorKind::invalid_argument, "step_ms must be positive");
  }
  return 1000.0 / static_cast<double>(step_ms);
}

UniformSeries resample_forward_fill(const EventSeries& events, TimestampMs step_ms) {
  if (step_ms <= 0) {
    throw Error(ErrorKind::invalid_argument, "step_ms must be positive");
  }
  const auto& ts = events.timestamps_ms();
  const TimestampMs start = ts.front();
  const auto rows = static_cast<std::size_t>((ts.back() - start) / step_ms) + 1;

  // source[i] = index of the event that is in force at grid row i
  std::vector<std::size_t> source(rows);
  std::size_t ev = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const TimestampMs g = start + static_cast<TimestampMs>(i) * step_ms;
    while (ev + 1 < ts.size() && ts[ev + 1] <= g) ++ev;
    source[i] = ev;
  }

  std::vector<FeatureColumn> columns;
  columns.reserve(events.dims());
  for (const auto& column : events.columns()) {
    FeatureColumn out{column.name, std::vector<double>(rows)};
    for (std::size_t i = 0; i < rows; ++i) out.values[i] = column.values[source[i]];
    columns.push_back(std::move(out));
  }
  return UniformSeries(start, step_ms, rows, std::move(columns));
}

}  // namespace plcprep
