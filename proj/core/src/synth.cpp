#include "plcprep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"
#include "plcprep/error.hpp"

namespace plcprep {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

struct Levels {
  double low = 0.0;
  double high = 1.0;
};

struct Layout {
  std::vector<std::vector<double>> pattern;  // [state][feature]
  std::vector<Levels> levels;
  std::vector<bool> toggleable;
  GroundTruth truth;
};

constexpr double kNearConstantBase = 5.0;
constexpr double kNearConstantBump = 0.01;
constexpr double kJitter = 0.10;

void validate(const SynthConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_argument, msg); };
  if (c.n_states < 2) fail("n_states must be at least 2");
  if (c.n_low_variance < 1) fail("n_low_variance must be at least 1");
  const int required = 2 + c.n_low_variance + (c.anchor_twin ? 1 : 0);
  if (c.n_features < required) {
    fail("n_features must be at least " + std::to_string(required) +
         " (anchor, low-variance features, twin and duplicate)");
  }
  if (!(c.noise_fraction >= 0.0 && c.noise_fraction <= 1.0)) fail("noise_fraction must lie in [0, 1]");
  if (!(c.duration_s > 0.0) || !std::isfinite(c.duration_s)) fail("duration_s must be positive");
  if (c.plc_step_ms <= 0) fail("plc_step_ms must be positive");
  if (!(c.cycle_time_s > 0.0) || !std::isfinite(c.cycle_time_s)) fail("cycle_time_s must be positive");
}

// Cycle length in PLC steps, split over the states.
std::vector<TimestampMs> dwell_units(const SynthConfig& c) {
  const double cycle_ms = c.cycle_time_s * 1000.0;
  const auto cycle_ms_int = std::llround(cycle_ms);
  if (std::abs(cycle_ms - static_cast<double>(cycle_ms_int)) > 1e-6 || cycle_ms_int % c.plc_step_ms != 0) {
    throw Error(ErrorKind::invalid_argument,
                "infeasible dwell allocation: cycle time is not a multiple of the PLC step");
  }
  const TimestampMs units = cycle_ms_int / c.plc_step_ms;
  if (units < c.n_states) {
    throw Error(ErrorKind::invalid_argument,
                "infeasible dwell allocation: cycle time shorter than one PLC step per state");
  }
  const TimestampMs base = units / c.n_states;
  const TimestampMs rem = units % c.n_states;
  std::vector<TimestampMs> out(static_cast<std::size_t>(c.n_states), base);
  for (TimestampMs s = 0; s < rem; ++s) out[static_cast<std::size_t>(s)] += 1;
  return out;
}

Layout make_layout(const SynthConfig& c) {
  const auto S = static_cast<std::size_t>(c.n_states);
  const auto F = static_cast<std::size_t>(c.n_features);
  Layout lay;
  lay.pattern.assign(S, std::vector<double>(F, 0.0));
  lay.levels.assign(F, Levels{});
  lay.toggleable.assign(F, true);
  auto& truth = lay.truth;
  truth.config = c;

  auto set_block = [&](std::size_t f, std::size_t start, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) lay.pattern[(start + i) % S][f] = lay.levels[f].high;
  };

  const std::size_t half = (S + 1) / 2;
  std::size_t f = 0;
  truth.anchor_index = f;
  set_block(f++, 0, half);

  truth.constant_index = f;
  lay.levels[f] = {1.0, 1.0};
  lay.toggleable[f] = false;
  for (auto& row : lay.pattern) row[f] = 1.0;
  ++f;

  for (int i = 1; i < c.n_low_variance; ++i, ++f) {
    truth.near_constant_indices.push_back(f);
    lay.levels[f] = {kNearConstantBase, kNearConstantBase + kNearConstantBump};
    for (auto& row : lay.pattern) row[f] = kNearConstantBase;
    lay.pattern[f % S][f] = lay.levels[f].high;
  }

  if (c.anchor_twin) {
    truth.twin_index = f;
    set_block(f++, std::max<std::size_t>(1, S / 4), half);
  }

  const std::size_t copy = F - 1;
  const std::size_t max_block = std::clamp<std::size_t>((S - 1) / 4, 1, 4);
  truth.duplicate_source = f < copy ? f : truth.anchor_index;
  for (std::size_t q = 0; f < copy; ++f, ++q) {
    set_block(f, q % S, 1 + (q / S) % max_block);
  }

  truth.duplicate_copy = copy;
  lay.toggleable[copy] = false;
  for (auto& row : lay.pattern) row[copy] = row[truth.duplicate_source];
  return lay;
}

std::string feature_name(std::size_t index, std::size_t count) {
  const int width = count > 100 ? 3 : 2;
  char buf[32];
  std::snprintf(buf, sizeof buf, "signal_%0*zu", width, index);
  return buf;
}

}  // namespace

SynthDataset generate(const SynthConfig& config) {
  validate(config);
  const auto base_units = dwell_units(config);
  Layout lay = make_layout(config);
  GroundTruth& truth = lay.truth;

  const auto S = static_cast<std::size_t>(config.n_states);
  const auto F = static_cast<std::size_t>(config.n_features);
  const auto duration_ms = static_cast<TimestampMs>(std::llround(config.duration_s * 1000.0));

  std::vector<std::size_t> glitch_candidates;
  for (std::size_t i = 0; i < F; ++i) {
    if (lay.toggleable[i]) glitch_candidates.push_back(i);
  }

  Rng rng(config.seed);
  std::vector<TimestampMs> timestamps;
  std::vector<std::vector<double>> rows;
  auto emit = [&](TimestampMs t, const std::vector<double>& row) {
    if (!rows.empty() && rows.back() == row) return;
    timestamps.push_back(t);
    rows.push_back(row);
  };

  TimestampMs t = 0;
  emit(t, lay.pattern[0]);
  std::vector<TimestampMs> dwell(S);  // in PLC steps
  for (std::size_t cycle = 0; t < duration_ms; ++cycle) {
    truth.cycle_boundaries_ms.push_back(t);
    const bool noisy = config.noise_fraction > 0.0 && rng.unit() < config.noise_fraction;
    for (std::size_t s = 0; s < S; ++s) {
      dwell[s] = base_units[s];
      if (noisy) {
        const double factor = 1.0 + kJitter * (2.0 * rng.unit() - 1.0);
        dwell[s] = std::max<TimestampMs>(1, std::llround(static_cast<double>(dwell[s]) * factor));
      }
    }

    std::size_t glitch_state = S;
    if (noisy) {
      truth.noisy_cycles.push_back(cycle);
      glitch_state = static_cast<std::size_t>(rng.below(S));
    }

    for (std::size_t s = 0; s < S; ++s) {
      if (s > 0) emit(t, lay.pattern[s]);
      if (s == glitch_state && dwell[s] >= 2 && !glitch_candidates.empty()) {
        const auto feature = glitch_candidates[rng.below(glitch_candidates.size())];
        const auto steps = 1 + static_cast<TimestampMs>(rng.below(static_cast<std::uint64_t>(dwell[s] - 1)));
        const TimestampMs offset = steps * config.plc_step_ms;
        auto row = lay.pattern[s];
        const auto& lv = lay.levels[feature];
        row[feature] = row[feature] == lv.high ? lv.low : lv.high;
        if (feature == truth.duplicate_source) row[truth.duplicate_copy] = row[feature];
        emit(t + offset, row);
        truth.glitches.push_back({cycle, t + offset, feature});
      }
      t += dwell[s] * config.plc_step_ms;
    }
    emit(t, lay.pattern[0]);
  }
  truth.cycle_boundaries_ms.push_back(t);

  std::vector<FeatureColumn> columns(F);
  for (std::size_t i = 0; i < F; ++i) {
    columns[i].name = feature_name(i, F);
    columns[i].values.reserve(rows.size());
    for (const auto& row : rows) columns[i].values.push_back(row[i]);
  }
  return {EventSeries(std::move(timestamps), std::move(columns), "synthetic"), std::move(truth)};
}

std::string ground_truth_json(const GroundTruth& truth) {
  using nlohmann::ordered_json;
  const auto& c = truth.config;
  const auto F = static_cast<std::size_t>(c.n_features);
  ordered_json j;
  j["config"] = {
      {"n_features", c.n_features},         {"n_states", c.n_states},
      {"cycle_time_s", c.cycle_time_s},     {"noise_fraction", c.noise_fraction},
      {"duration_s", c.duration_s},         {"seed", c.seed},
      {"plc_step_ms", c.plc_step_ms},       {"n_low_variance", c.n_low_variance},
      {"anchor_twin", c.anchor_twin},
  };
  j["anchor_index"] = truth.anchor_index;
  j["anchor_name"] = feature_name(truth.anchor_index, F);
  j["constant_index"] = truth.constant_index;
  j["near_constant_indices"] = truth.near_constant_indices;
  j["twin_index"] = truth.twin_index ? ordered_json(*truth.twin_index) : ordered_json(nullptr);
  j["duplicate"] = {{"source", truth.duplicate_source}, {"copy", truth.duplicate_copy}};
  j["n_cycles"] = truth.n_cycles();
  j["cycle_boundaries_ms"] = truth.cycle_boundaries_ms;
  j["noisy_cycles"] = truth.noisy_cycles;
  auto glitches = ordered_json::array();
  for (const auto& g : truth.glitches) {
    glitches.push_back({{"cycle", g.cycle}, {"time_ms", g.time_ms}, {"feature", g.feature}});
  }
  j["glitches"] = std::move(glitches);
  return j.dump(2) + "\n";
}

void write_ground_truth_json(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  }
  out << ground_truth_json(truth);
  if (!out) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

}  // namespace plcprep
