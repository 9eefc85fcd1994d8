#pragma once

/**
 * @file periodicity.hpp
 * @brief Per-column amplitude spectra and production cycle time detection.
 *
 * Each uniform column is mean-centred and transformed with a real-input
 * DFT. Bins 1..floor(n/2) are kept (no DC) with one-sided amplitude
 * 2|X_k|/n at frequency k * fs / n. Cycle detection then, per column:
 *   1. drops bins whose period exceeds `max_period_s` (setup, maintenance,
 *      holiday stretches show up there),
 *   2. keeps the strongest `top_fraction` of the remaining bins,
 *   3. takes the local maxima of what is left.
 * The cycle time is the inverse frequency of the strongest peak over all
 * columns, and the column that owns it is the strongest cyclic signal.
 */

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "plcprep/dataset.hpp"

namespace plcprep {

struct Spectrum {
  std::string column_name;
  double bin_width_hz = 0.0;           ///< fs / n
  std::vector<std::size_t> bins;       ///< original DFT bin index k (>= 1)
  std::vector<double> frequencies_hz;  ///< k * bin_width_hz
  std::vector<double> amplitudes;

  std::size_t size() const noexcept { return bins.size(); }
  bool empty() const noexcept { return bins.empty(); }
};

struct SpectralPeak {
  std::string column_name;
  std::size_t bin = 0;
  double frequency_hz = 0.0;
  double amplitude = 0.0;
  double period_s = 0.0;
};

struct SpectralFilter {
  double top_fraction = 0.30;
  double max_period_s = 3600.0;
};

struct DetectOptions {
  SpectralFilter filter;
  /// Columns whose best peak is within this relative distance of the
  /// strongest one are flagged as co-candidates.
  double co_candidate_band = 0.01;
  /// Strongest peaks retained per column in CycleDetection::peaks.
  std::size_t peaks_per_column = 10;
};

struct RankedSignal {
  std::string name;
  double amplitude = 0.0;
  double frequency_hz = 0.0;
  bool co_candidate = false;
};

struct CycleDetection {
  double cycle_time_s = 0.0;
  double bin_width_hz = 0.0;
  std::vector<RankedSignal> ranked_signals;  ///< amplitude descending
  std::vector<SpectralPeak> peaks;

  const RankedSignal& strongest() const { return ranked_signals.front(); }
};

inline constexpr std::size_t kMinSpectrumLength = 8;

/// Amplitudes at or below this fraction of a spectrum's maximum are
/// transform round-off and never count as peaks.
inline constexpr double kPeakNoiseFloor = 1e-9;

/// Amplitude spectrum of one uniformly sampled column. A constant column
/// yields all-zero amplitudes. Throws invalid_argument for fewer than 8 samples.
Spectrum spectrum(const FeatureColumn& column, double sampling_frequency_hz);

std::vector<Spectrum> compute_spectra(const UniformSeries& series);

/// Low-frequency cut followed by the top-fraction rule. The result keeps
/// every bin whose amplitude is at least that of the ceil(top_fraction * m)-th
/// strongest of the m bins that survive the cut. An empty spectrum means
/// nothing survived.
Spectrum filter_spectrum(const Spectrum& spec, double top_fraction,
                         double max_period_s = std::numeric_limits<double>::infinity());

/// Bins strictly above their neighbours inside each run of consecutive
/// bin indices; run ends compare against their single neighbour. Bins at
/// the noise floor never qualify. Sorted by amplitude, strongest first.
std::vector<SpectralPeak> local_maxima(const Spectrum& spec);

CycleDetection detect_cycle(std::span<const Spectrum> spectra, const DetectOptions& options = {});
CycleDetection detect_cycle(const UniformSeries& series, const DetectOptions& options = {});

/// Two columns: frequency_hz, amplitude.
void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path);

}  // namespace plcprep
