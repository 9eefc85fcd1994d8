#pragma once

/**
 * @file synth.hpp
 * @brief Seeded generator for event-based PLC logs with known ground truth.
 *
 * A state machine walks through `n_states` states per production cycle.
 * Every state fixes a value for every feature, and a row is logged whenever
 * the values change. The feature layout is fixed:
 *
 *   index 0                 cycle anchor: rises when state 0 starts and stays
 *                           high for the first half of the states
 *   1                       exactly constant
 *   2 .. n_low_variance     near-constant levels (variance < 1e-4)
 *   next, if anchor_twin    copy of the anchor shifted by a quarter cycle
 *   ...                     informative features: one contiguous block of
 *                           1-4 high states each
 *   last                    exact copy of the first informative feature
 *
 * Dwell times are split evenly across states in units of `plc_step_ms`, and
 * the remainder goes one unit at a time to the first states. With
 * probability `noise_fraction` a cycle is noisy: every dwell time in it is
 * scaled by an independent factor in [0.9, 1.1], and one random feature
 * toggles at a random PLC step inside one state until the next state change.
 *
 * Randomness comes from std::mt19937_64, which is fully specified by the
 * standard. The mapping to uniform reals and integers is done here, not
 * through std::*_distribution, so a seed gives the same data on every
 * platform.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plcprep/dataset.hpp"

namespace plcprep {

struct SynthConfig {
  int n_features = 35;
  int n_states = 17;
  double cycle_time_s = 90.0;
  double noise_fraction = 0.10;
  double duration_s = 7.0 * 24.0 * 3600.0;
  std::uint64_t seed = 42;
  TimestampMs plc_step_ms = 20;
  /// Low-variance features; the first is exactly constant, the rest are
  /// near-constant levels.
  int n_low_variance = 1;
  /// Adds a phase-shifted copy of the anchor with the same spectrum.
  bool anchor_twin = false;
};

struct Glitch {
  std::size_t cycle = 0;
  TimestampMs time_ms = 0;
  std::size_t feature = 0;
};

struct GroundTruth {
  SynthConfig config;
  std::size_t anchor_index = 0;
  std::size_t constant_index = 1;
  std::vector<std::size_t> near_constant_indices;
  std::optional<std::size_t> twin_index;
  std::size_t duplicate_source = 0;
  std::size_t duplicate_copy = 0;
  /// Start of every cycle plus the end of the last one.
  std::vector<TimestampMs> cycle_boundaries_ms;
  std::vector<std::size_t> noisy_cycles;
  std::vector<Glitch> glitches;

  std::size_t n_cycles() const noexcept {
    return cycle_boundaries_ms.empty() ? 0 : cycle_boundaries_ms.size() - 1;
  }
};

struct SynthDataset {
  EventSeries events;
  GroundTruth truth;
};

/// Throws ErrorKind::invalid_argument for an invalid configuration,
/// including dwell times that cannot be laid out on the PLC step grid.
SynthDataset generate(const SynthConfig& config);

std::string ground_truth_json(const GroundTruth& truth);
void write_ground_truth_json(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace plcprep
