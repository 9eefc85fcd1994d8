#include "plcprep/pipeline.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plcprep/error.hpp"
#include "plcprep/resample.hpp"

#ifndef PLCPREP_VERSION
#define PLCPREP_VERSION "0.0.0"
#endif

namespace plcprep {

using nlohmann::ordered_json;

namespace {

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

void create_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create directory '" + dir.string() + "': " + ec.message());
  }
}

void validate(const PipelineConfig& c) {
  if (c.input.empty()) throw Error(ErrorKind::invalid_argument, "no input file given");
  if (c.output_dir.empty()) throw Error(ErrorKind::invalid_argument, "no output directory given");
  if (c.step_ms <= 0) throw Error(ErrorKind::invalid_argument, "step_ms must be positive");
}

ordered_json prune_json(const PruneReport& r) {
  ordered_json j;
  j["thresholds"] = {{"thr_var", r.thresholds.variance}, {"thr_corr", r.thresholds.correlation}};
  j["kept"] = r.kept;
  auto var = ordered_json::array();
  for (const auto& d : r.dropped_variance) var.push_back({{"name", d.name}, {"variance", d.variance}});
  j["dropped_variance"] = std::move(var);
  auto corr = ordered_json::array();
  for (const auto& d : r.dropped_correlated) {
    corr.push_back({{"name", d.name}, {"partner", d.partner}, {"coefficient", d.coefficient}});
  }
  j["dropped_correlated"] = std::move(corr);
  return j;
}

ordered_json detection_json(const CycleDetection& d) {
  ordered_json j;
  j["cycle_time_s"] = d.cycle_time_s;
  j["bin_width_hz"] = d.bin_width_hz;
  j["strongest_signal"] = d.ranked_signals.empty() ? ordered_json(nullptr) : ordered_json(d.strongest().name);
  auto co = ordered_json::array();
  auto ranked = ordered_json::array();
  for (const auto& s : d.ranked_signals) {
    if (s.co_candidate) co.push_back(s.name);
    ranked.push_back({{"name", s.name},
                      {"amplitude", s.amplitude},
                      {"frequency_hz", s.frequency_hz},
                      {"period_s", 1.0 / s.frequency_hz},
                      {"co_candidate", s.co_candidate}});
  }
  j["co_candidates"] = std::move(co);
  j["ranked_signals"] = std::move(ranked);
  auto peaks = ordered_json::array();
  for (const auto& p : d.peaks) {
    peaks.push_back({{"column", p.column_name},
                     {"bin", p.bin},
                     {"frequency_hz", p.frequency_hz},
                     {"period_s", p.period_s},
                     {"amplitude", p.amplitude}});
  }
  j["peaks"] = std::move(peaks);
  return j;
}

}  // namespace

const char* tool_version() noexcept { return PLCPREP_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string spectrum_file_name(std::size_t index, const std::string& column_name) {
  std::string safe;
  for (unsigned char ch : column_name) {
    safe += (std::isalnum(ch) || ch == '-' || ch == '_') ? static_cast<char>(ch) : '_';
  }
  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "%02zu_", index);
  return prefix + safe + ".csv";
}

AnalysisReport run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] {
    validate(config);
    return 0;
  });

  AnalysisReport report;
  report.config = config;
  report.provenance.tool_version = tool_version();

  const std::string bytes = run_stage("parse", [&] { return read_bytes(config.input); });
  report.provenance.input_sha256 = sha256_hex(bytes);
  const EventSeries events =
      run_stage("parse", [&] { return parse_event_csv_text(bytes, config.input.filename().string()); });

  auto pruned = run_stage("prune", [&] { return prune(events, config.thresholds); });
  report.prune = pruned.report;

  const UniformSeries uniform =
      run_stage("resample", [&] { return resample_forward_fill(pruned.series, config.step_ms); });
  report.resample = {uniform.step_ms(), uniform.sampling_frequency_hz(), uniform.rows()};

  const auto spectra = run_stage("detect", [&] { return compute_spectra(uniform); });
  report.detection = run_stage("detect", [&] { return detect_cycle(spectra, config.detect); });

  const Partition part = run_stage("partition", [&] { return partition_cycles(uniform, report.detection); });
  report.partition_signal = part.signal;
  report.partition_method = part.method;
  report.partition = summarize(part);

  run_stage("write", [&] {
    const auto spectra_dir = config.output_dir / "spectra";
    create_dirs(spectra_dir);
    write_uniform_csv(uniform, config.output_dir / "resampled.csv");
    if (pruned.correlation.size() > 0) {
      write_correlation_csv(pruned.correlation, config.output_dir / "correlation.csv");
    }
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      write_spectrum_csv(spectra[i], spectra_dir / spectrum_file_name(i, spectra[i].column_name));
    }
    write_partition_csv(part, uniform, config.output_dir / "partition.csv");
    write_text(config.output_dir / "report.json", to_json(report));
    return 0;
  });
  return report;
}

std::string to_json(const PruneReport& report) { return prune_json(report).dump(2) + "\n"; }

std::string to_json(const CycleDetection& detection) { return detection_json(detection).dump(2) + "\n"; }

std::string to_json(const AnalysisReport& r) {
  ordered_json j;
  j["prune"] = prune_json(r.prune);
  j["resample"] = {{"step_ms", r.resample.step_ms},
                   {"sampling_frequency_hz", r.resample.sampling_frequency_hz},
                   {"rows", r.resample.rows}};
  j["detection"] = detection_json(r.detection);
  j["partition"] = {{"signal", r.partition_signal},
                    {"method", to_string(r.partition_method)},
                    {"n_cycles", r.partition.n_cycles},
                    {"n_anomalous", r.partition.n_anomalous},
                    {"mean_duration_s", r.partition.mean_duration_s},
                    {"min_duration_s", r.partition.min_duration_s},
                    {"max_duration_s", r.partition.max_duration_s}};
  const auto& c = r.config;
  j["provenance"] = {{"input_sha256", r.provenance.input_sha256},
                     {"tool_version", r.provenance.tool_version},
                     {"config",
                      {{"input", c.input.string()},
                       {"thr_var", c.thresholds.variance},
                       {"thr_corr", c.thresholds.correlation},
                       {"step_ms", c.step_ms},
                       {"top_fraction", c.detect.filter.top_fraction},
                       {"max_period_s", c.detect.filter.max_period_s},
                       {"co_candidate_band", c.detect.co_candidate_band},
                       {"peaks_per_column", c.detect.peaks_per_column}}}};
  return j.dump(2) + "\n";
}

}  // namespace plcprep
