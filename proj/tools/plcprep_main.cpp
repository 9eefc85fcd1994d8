// plcprep: command line front end for the PLC preprocessing library.
//
// Exit codes: 0 ok, 1 invalid arguments, 2 parse error, 3 degenerate data,
// 4 no periodicity detected, 5 I/O failure. CLI11 usage errors keep CLI11's
// own codes.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "CLI11.hpp"
#include "plcprep/dataset.hpp"
#include "plcprep/error.hpp"
#include "plcprep/feature_select.hpp"
#include "plcprep/partition.hpp"
#include "plcprep/periodicity.hpp"
#include "plcprep/pipeline.hpp"
#include "plcprep/resample.hpp"
#include "plcprep/synth.hpp"

namespace fs = std::filesystem;
using namespace plcprep;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::degenerate: return 3;
    case ErrorKind::no_periodicity: return 4;
    case ErrorKind::io: return 5;
  }
  return 1;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

void add_prune_options(CLI::App* cmd, PruneThresholds& t) {
  cmd->add_option("--thr-var", t.variance, "Drop columns with population variance below this")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--thr-corr", t.correlation, "Drop the later column of pairs with |Spearman| above this")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

void add_detect_options(CLI::App* cmd, DetectOptions& d) {
  cmd->add_option("--top-fraction", d.filter.top_fraction, "Fraction of strongest bins kept per column")
      ->capture_default_str()
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  cmd->add_option("--max-period-s", d.filter.max_period_s, "Discard periods longer than this (seconds)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--co-candidate-band", d.co_candidate_band,
                  "Relative amplitude band for co-candidate signals")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999));
  cmd->add_option("--peaks-per-column", d.peaks_per_column, "Peaks per column kept in the report")
      ->capture_default_str();
}

UniformSeries read_uniform(const std::string& path) { return as_uniform(parse_event_csv(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-based preprocessing of event-based PLC time series"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.set_config("--config", "", "Configuration file (key = value); command line flags take precedence");
  app.require_subcommand(1);

  // analyze
  PipelineConfig pipeline;
  std::string analyze_input, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Run prune, resample, detect and partition");
  analyze->add_option("-i,--input", analyze_input, "Event-based dataset CSV")->required();
  analyze->add_option("-o,--output-dir", analyze_out, "Directory for report and CSV outputs")->required();
  analyze->add_option("--step-ms", pipeline.step_ms, "Uniform step in ms (the PLC cycle time)")
      ->required()
      ->check(CLI::PositiveNumber);
  add_prune_options(analyze, pipeline.thresholds);
  add_detect_options(analyze, pipeline.detect);

  // prune
  PruneThresholds prune_thr;
  std::string prune_input, prune_output, prune_report, prune_corr;
  auto* prune_cmd = app.add_subcommand("prune", "Variance and correlation feature pruning");
  prune_cmd->add_option("-i,--input", prune_input, "Dataset CSV")->required();
  prune_cmd->add_option("-o,--output", prune_output, "Pruned dataset CSV")->required();
  prune_cmd->add_option("--report", prune_report, "Prune report JSON (default: stdout)");
  prune_cmd->add_option("--correlation-csv", prune_corr, "Correlation matrix after variance pruning");
  add_prune_options(prune_cmd, prune_thr);

  // resample
  TimestampMs resample_step = 0;
  std::string resample_input, resample_output;
  auto* resample_cmd = app.add_subcommand("resample", "Forward-fill an event log onto a uniform grid");
  resample_cmd->add_option("-i,--input", resample_input, "Event-based dataset CSV")->required();
  resample_cmd->add_option("-o,--output", resample_output, "Uniform dataset CSV")->required();
  resample_cmd->add_option("--step-ms", resample_step, "Uniform step in ms")->required()->check(CLI::PositiveNumber);

  // detect
  DetectOptions detect_opts;
  std::string detect_input, detect_report, detect_spectra;
  auto* detect_cmd = app.add_subcommand("detect", "Detect the production cycle time of a uniform dataset");
  detect_cmd->add_option("-i,--input", detect_input, "Uniform dataset CSV")->required();
  detect_cmd->add_option("--report", detect_report, "Detection JSON (default: stdout)");
  detect_cmd->add_option("--spectra-dir", detect_spectra, "Write one spectrum CSV per column here");
  add_detect_options(detect_cmd, detect_opts);

  // partition
  DetectOptions part_opts;
  std::string part_input, part_output, part_signal;
  std::optional<double> part_cycle;
  auto* part_cmd = app.add_subcommand("partition", "Split a uniform dataset into production cycles");
  part_cmd->add_option("-i,--input", part_input, "Uniform dataset CSV")->required();
  part_cmd->add_option("-o,--output", part_output, "Segment CSV (default: stdout)");
  auto* sig_opt = part_cmd->add_option("--signal", part_signal, "Partitioning signal (default: detected)");
  part_cmd->add_option("--cycle-time-s", part_cycle, "Cycle time in seconds (default: detected)")
      ->check(CLI::PositiveNumber)
      ->needs(sig_opt);
  sig_opt->needs("--cycle-time-s");
  add_detect_options(part_cmd, part_opts);

  // synth
  SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic event-based PLC dataset");
  synth_cmd->add_option("-o,--output-dir", synth_out, "Writes dataset.csv and ground_truth.json here")->required();
  synth_cmd->add_option("--features", synth_cfg.n_features, "Number of features")->capture_default_str();
  synth_cmd->add_option("--states", synth_cfg.n_states, "States per cycle")->capture_default_str();
  synth_cmd->add_option("--cycle-time-s", synth_cfg.cycle_time_s, "Cycle time (s)")->capture_default_str();
  synth_cmd->add_option("--noise", synth_cfg.noise_fraction, "Fraction of noisy cycles")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--duration-s", synth_cfg.duration_s, "Logged duration (s)")->capture_default_str();
  synth_cmd->add_option("--seed", synth_cfg.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--plc-step-ms", synth_cfg.plc_step_ms, "PLC step (ms)")->capture_default_str();
  synth_cmd->add_option("--low-variance", synth_cfg.n_low_variance, "Low-variance features")->capture_default_str();
  synth_cmd->add_flag("--anchor-twin", synth_cfg.anchor_twin, "Add a phase-shifted copy of the anchor");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      pipeline.input = analyze_input;
      pipeline.output_dir = analyze_out;
      const auto report = run_pipeline(pipeline);
      std::cout << "kept " << report.prune.kept.size() << " of "
                << report.prune.kept.size() + report.prune.dropped_variance.size() +
                       report.prune.dropped_correlated.size()
                << " features, cycle time " << report.detection.cycle_time_s << " s (signal "
                << report.detection.strongest().name << "), " << report.partition.n_cycles << " cycles, "
                << report.partition.n_anomalous << " anomalous\n"
                << "report: " << (pipeline.output_dir / "report.json").string() << "\n";
    } else if (*prune_cmd) {
      const auto result = prune(parse_event_csv(prune_input), prune_thr);
      write_event_csv(result.series, prune_output);
      if (!prune_corr.empty() && result.correlation.size() > 0) {
        write_correlation_csv(result.correlation, prune_corr);
      }
      emit(to_json(result.report), prune_report);
    } else if (*resample_cmd) {
      write_uniform_csv(resample_forward_fill(parse_event_csv(resample_input), resample_step), resample_output);
    } else if (*detect_cmd) {
      const auto series = read_uniform(detect_input);
      const auto spectra = compute_spectra(series);
      if (!detect_spectra.empty()) {
        ensure_dir(detect_spectra);
        for (std::size_t i = 0; i < spectra.size(); ++i) {
          write_spectrum_csv(spectra[i], fs::path(detect_spectra) / spectrum_file_name(i, spectra[i].column_name));
        }
      }
      emit(to_json(detect_cycle(spectra, detect_opts)), detect_report);
    } else if (*part_cmd) {
      const auto series = read_uniform(part_input);
      const auto part = part_cycle ? partition_cycles(series, part_signal, *part_cycle)
                                   : partition_cycles(series, detect_cycle(series, part_opts));
      if (part_output.empty() || part_output == "-") {
        write_partition_csv(part, series, std::cout);
      } else {
        write_partition_csv(part, series, part_output);
      }
    } else if (*synth_cmd) {
      const auto data = generate(synth_cfg);
      ensure_dir(synth_out);
      write_event_csv(data.events, fs::path(synth_out) / "dataset.csv");
      write_ground_truth_json(data.truth, fs::path(synth_out) / "ground_truth.json");
      std::cout << data.events.rows() << " rows, " << data.events.dims() << " features, "
                << data.truth.n_cycles() << " cycles\n";
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}
