#include "plcprep/periodicity.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numeric>

#include "plcprep/error.hpp"

namespace plcprep {

namespace {

// FFTW planner calls are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

class RealDft {
 public:
  explicit RealDft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!in_ || !out_) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), reinterpret_cast<fftw_complex*>(out_.get()),
                                 FFTW_ESTIMATE);
    if (!plan_) throw Error(ErrorKind::invalid_argument, "FFTW could not plan a transform of this size");
  }

  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  ~RealDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::span<double> input() noexcept { return {in_.get(), n_}; }

  std::span<const std::complex<double>> execute() {
    fftw_execute(plan_);
    return {reinterpret_cast<const std::complex<double>*>(out_.get()), n_ / 2 + 1};
  }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

void require_filter_args(double top_fraction, double max_period_s) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "top_fraction must lie in (0, 1]");
  }
  if (!(max_period_s > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "max_period_s must be positive");
  }
}

Spectrum subset(const Spectrum& spec, const std::vector<std::size_t>& keep) {
  Spectrum out;
  out.column_name = spec.column_name;
  out.bin_width_hz = spec.bin_width_hz;
  out.bins.reserve(keep.size());
  out.frequencies_hz.reserve(keep.size());
  out.amplitudes.reserve(keep.size());
  for (std::size_t i : keep) {
    out.bins.push_back(spec.bins[i]);
    out.frequencies_hz.push_back(spec.frequencies_hz[i]);
    out.amplitudes.push_back(spec.amplitudes[i]);
  }
  return out;
}

void require_spectrum_args(const FeatureColumn& column, double sampling_frequency_hz) {
  const std::size_t n = column.values.size();
  if (n < kMinSpectrumLength) {
    throw Error(ErrorKind::invalid_argument, "column '" + column.name + "' is too short for a spectrum (" +
                                                 std::to_string(n) + " < " +
                                                 std::to_string(kMinSpectrumLength) + " samples)");
  }
  if (!(sampling_frequency_hz > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "sampling frequency must be positive");
  }
}

// `dft` must have been planned for the column's length.
Spectrum spectrum_with(const FeatureColumn& column, double sampling_frequency_hz, RealDft& dft) {
  const std::size_t n = column.values.size();
  const std::size_t half = n / 2;
  const double dn = static_cast<double>(n);
  Spectrum spec;
  spec.column_name = column.name;
  spec.bin_width_hz = sampling_frequency_hz / dn;
  spec.bins.resize(half);
  spec.frequencies_hz.resize(half);
  spec.amplitudes.assign(half, 0.0);
  for (std::size_t k = 1; k <= half; ++k) {
    spec.bins[k - 1] = k;
    spec.frequencies_hz[k - 1] = static_cast<double>(k) * sampling_frequency_hz / dn;
  }

  const auto& values = column.values;
  if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>{}) == values.end()) {
    return spec;
  }

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dn;
  auto in = dft.input();
  for (std::size_t i = 0; i < n; ++i) in[i] = values[i] - mean;
  const auto coeffs = dft.execute();
  for (std::size_t k = 1; k <= half; ++k) {
    spec.amplitudes[k - 1] = 2.0 * std::abs(coeffs[k]) / dn;
  }
  return spec;
}

}  // namespace

Spectrum spectrum(const FeatureColumn& column, double sampling_frequency_hz) {
  require_spectrum_args(column, sampling_frequency_hz);
  RealDft dft(column.values.size());
  return spectrum_with(column, sampling_frequency_hz, dft);
}

std::vector<Spectrum> compute_spectra(const UniformSeries& series) {
  std::vector<Spectrum> spectra;
  spectra.reserve(series.dims());
  if (series.dims() == 0) return spectra;
  const double fs = series.sampling_frequency_hz();
  for (const auto& column : series.columns()) require_spectrum_args(column, fs);
  // one plan serves every column; planning dominates for awkward lengths
  RealDft dft(series.rows());
  for (const auto& column : series.columns()) spectra.push_back(spectrum_with(column, fs, dft));
  return spectra;
}

Spectrum filter_spectrum(const Spectrum& spec, double top_fraction, double max_period_s) {
  require_filter_args(top_fraction, max_period_s);

  const double min_frequency = 1.0 / max_period_s;
  std::vector<std::size_t> keep;
  keep.reserve(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.frequencies_hz[i] >= min_frequency) keep.push_back(i);
  }
  if (keep.empty()) return subset(spec, keep);

  std::vector<double> amps;
  amps.reserve(keep.size());
  for (std::size_t i : keep) amps.push_back(spec.amplitudes[i]);
  const auto m = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(amps.size()) - 1e-9));
  const std::size_t rank = std::clamp<std::size_t>(m, 1, amps.size());
  std::nth_element(amps.begin(), amps.begin() + static_cast<std::ptrdiff_t>(rank - 1), amps.end(),
                   std::greater<>{});
  const double threshold = amps[rank - 1];

  std::erase_if(keep, [&](std::size_t i) { return spec.amplitudes[i] < threshold; });
  return subset(spec, keep);
}

std::vector<SpectralPeak> local_maxima(const Spectrum& spec) {
  std::vector<SpectralPeak> peaks;
  const std::size_t n = spec.size();
  if (n == 0) return peaks;
  const double floor =
      kPeakNoiseFloor * *std::max_element(spec.amplitudes.begin(), spec.amplitudes.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = spec.amplitudes[i];
    if (!(a > 0.0) || a <= floor) continue;
    const bool has_prev = i > 0 && spec.bins[i - 1] + 1 == spec.bins[i];
    const bool has_next = i + 1 < n && spec.bins[i] + 1 == spec.bins[i + 1];
    if (has_prev && !(a > spec.amplitudes[i - 1])) continue;
    if (has_next && !(a > spec.amplitudes[i + 1])) continue;
    peaks.push_back({spec.column_name, spec.bins[i], spec.frequencies_hz[i], a, 1.0 / spec.frequencies_hz[i]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const SpectralPeak& x, const SpectralPeak& y) { return x.amplitude > y.amplitude; });
  return peaks;
}

CycleDetection detect_cycle(std::span<const Spectrum> spectra, const DetectOptions& options) {
  if (spectra.empty()) {
    throw Error(ErrorKind::invalid_argument, "cycle detection needs at least one column");
  }
  if (!(options.co_candidate_band >= 0.0 && options.co_candidate_band < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "co_candidate_band must lie in [0, 1)");
  }

  CycleDetection det;
  det.bin_width_hz = spectra.front().bin_width_hz;
  for (const auto& spec : spectra) {
    const auto peaks = local_maxima(filter_spectrum(spec, options.filter.top_fraction, options.filter.max_period_s));
    if (peaks.empty()) continue;
    det.ranked_signals.push_back({spec.column_name, peaks.front().amplitude, peaks.front().frequency_hz, false});
    const auto keep = std::min(peaks.size(), options.peaks_per_column);
    det.peaks.insert(det.peaks.end(), peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  if (det.ranked_signals.empty()) {
    throw Error(ErrorKind::no_periodicity, "no periodicity detected");
  }

  std::stable_sort(det.ranked_signals.begin(), det.ranked_signals.end(),
                   [](const RankedSignal& x, const RankedSignal& y) { return x.amplitude > y.amplitude; });
  const double top = det.ranked_signals.front().amplitude;
  for (auto& s : det.ranked_signals) {
    s.co_candidate = s.amplitude >= (1.0 - options.co_candidate_band) * top;
  }
  det.cycle_time_s = 1.0 / det.ranked_signals.front().frequency_hz;
  return det;
}

CycleDetection detect_cycle(const UniformSeries& series, const DetectOptions& options) {
  if (series.dims() == 0) {
    throw Error(ErrorKind::invalid_argument, "cycle detection needs at least one column");
  }
  const auto spectra = compute_spectra(series);
  return detect_cycle(spectra, options);
}

void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path) {
  std::string text = "frequency_hz,amplitude\n";
  text.reserve(text.size() + spec.size() * 40);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    text += format_number(spec.frequencies_hz[i]);
    text += ',';
    text += format_number(spec.amplitudes[i]);
    text += '\n';
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  }
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

}  // namespace plcprep
