#pragma once

/**
 * @file pipeline.hpp
 * @brief prune -> resample -> detect -> partition, plus the JSON report.
 *
 * Output directory layout written by run_pipeline():
 *
 *   report.json        AnalysisReport
 *   resampled.csv      pruned and resampled uniform series
 *   correlation.csv    Spearman matrix after the variance stage
 *   spectra/NN_<name>.csv   one amplitude spectrum per kept column
 *   partition.csv      cycle segments
 */

#include <filesystem>
#include <string>

#include "plcprep/dataset.hpp"
#include "plcprep/feature_select.hpp"
#include "plcprep/partition.hpp"
#include "plcprep/periodicity.hpp"

namespace plcprep {

const char* tool_version() noexcept;

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  PruneThresholds thresholds;
  TimestampMs step_ms = 0;  ///< required: the PLC cycle time
  DetectOptions detect;
};

struct ResampleSummary {
  TimestampMs step_ms = 0;
  double sampling_frequency_hz = 0.0;
  std::size_t rows = 0;
};

struct Provenance {
  std::string input_sha256;
  std::string tool_version;
};

struct AnalysisReport {
  PipelineConfig config;
  PruneReport prune;
  ResampleSummary resample;
  CycleDetection detection;
  std::string partition_signal;
  PartitionMethod partition_method = PartitionMethod::rising_edges;
  PartitionSummary partition;
  Provenance provenance;
};

/// Runs every stage and writes the output directory. Stage failures are
/// rethrown as StageError carrying the original ErrorKind.
AnalysisReport run_pipeline(const PipelineConfig& config);

std::string to_json(const AnalysisReport& report);
std::string to_json(const PruneReport& report);
std::string to_json(const CycleDetection& detection);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// File name used for a column's spectrum CSV inside spectra/.
std::string spectrum_file_name(std::size_t index, const std::string& column_name);

}  // namespace plcprep
