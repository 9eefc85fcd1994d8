#pragma once

#include "plcprep/dataset.hpp"

namespace plcprep {

/// Rows per second of a uniform series with the given step: 1000 / step_ms.
double sampling_frequency(TimestampMs step_ms);

/// Sample-and-hold upscaling of an event log onto a uniform grid.
///
/// The grid starts at the first event and stops at the last grid point not
/// after the final event, so it has floor((t_last - t_first) / step) + 1
/// rows. Each row carries the values of the latest event at or before its
/// grid time; an event between two grid points shows up at the next one.
UniformSeries resample_forward_fill(const EventSeries& events, TimestampMs step_ms);

}  // namespace plcprep
