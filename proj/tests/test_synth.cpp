#include <gtest/gtest.h>

#include <algorithm>

#include "json.hpp"
#include "plcprep/error.hpp"
#include "plcprep/feature_select.hpp"
#include "plcprep/partition.hpp"
#include "plcprep/periodicity.hpp"
#include "plcprep/resample.hpp"
#include "plcprep/synth.hpp"
#include "test_support.hpp"

using namespace plcprep;

namespace {

SynthConfig short_config(double duration_s = 7200.0) {
  SynthConfig c;
  c.duration_s = duration_s;
  return c;
}

}  // namespace

TEST(Generate, SameSeedSameBytes) {
  testutil::TempDir dir("synth");
  const auto a = generate(short_config());
  const auto b = generate(short_config());
  EXPECT_EQ(a.events, b.events);
  write_event_csv(a.events, dir / "a.csv");
  write_event_csv(b.events, dir / "b.csv");
  EXPECT_EQ(testutil::slurp(dir / "a.csv"), testutil::slurp(dir / "b.csv"));
  EXPECT_EQ(ground_truth_json(a.truth), ground_truth_json(b.truth));

  auto other = short_config();
  other.seed = 43;
  EXPECT_NE(generate(other).truth.noisy_cycles, a.truth.noisy_cycles);
}

TEST(Generate, NoiselessCyclesAreExact) {
  auto c = short_config();
  c.noise_fraction = 0.0;
  const auto data = generate(c);
  const auto& b = data.truth.cycle_boundaries_ms;
  ASSERT_EQ(data.truth.n_cycles(), 80u);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) EXPECT_EQ(b[i + 1] - b[i], 90000);
  EXPECT_EQ(data.events.rows(), static_cast<std::size_t>(c.n_states) * data.truth.n_cycles() + 1);
  EXPECT_TRUE(data.truth.noisy_cycles.empty());
  EXPECT_TRUE(data.truth.glitches.empty());
  EXPECT_EQ(data.events.timestamps_ms().back(), b.back());
}

TEST(Generate, WeekLongDefaultHasExpectedCycleCount) {
  auto c = SynthConfig{};
  c.noise_fraction = 0.0;
  EXPECT_EQ(generate(c).truth.n_cycles(), 6720u);
  const auto noisy = generate(SynthConfig{});
  EXPECT_NEAR(static_cast<double>(noisy.truth.n_cycles()), 6720.0, 10.0);
  const double share = static_cast<double>(noisy.truth.noisy_cycles.size()) / static_cast<double>(noisy.truth.n_cycles());
  EXPECT_NEAR(share, 0.10, 0.02);
}

TEST(Generate, EventLogInvariants) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto c = short_config(3600.0);
    c.seed = seed;
    c.noise_fraction = 0.5;
    const auto data = generate(c);
    const auto& ev = data.events;
    const auto& ts = ev.timestamps_ms();
    for (std::size_t r = 1; r < ev.rows(); ++r) {
      ASSERT_LT(ts[r - 1], ts[r]);
      bool differs = false;
      for (const auto& col : ev.columns()) differs = differs || col.values[r] != col.values[r - 1];
      ASSERT_TRUE(differs) << "row " << r;
      ASSERT_EQ(ts[r] % c.plc_step_ms, 0);
    }
    const auto& t = data.truth;
    EXPECT_EQ(column_variance(ev.columns()[t.constant_index]), 0.0);
    EXPECT_EQ(ev.columns()[t.duplicate_source], FeatureColumn(ev.columns()[t.duplicate_source].name,
                                                              ev.columns()[t.duplicate_copy].values));
    EXPECT_EQ(spearman(ev.columns()[t.duplicate_source], ev.columns()[t.duplicate_copy]), 1.0);
    EXPECT_EQ(t.glitches.size(), t.noisy_cycles.size());
  }
}

TEST(Generate, LowVarianceFeaturesAndTwin) {
  SynthConfig c;
  c.duration_s = 1860.0;
  c.n_features = 25;
  c.n_states = 14;
  c.cycle_time_s = 93.0;
  c.plc_step_ms = 10;
  c.n_low_variance = 12;
  c.anchor_twin = true;
  const auto data = generate(c);
  const auto& t = data.truth;
  ASSERT_EQ(t.near_constant_indices.size(), 11u);
  for (std::size_t i : t.near_constant_indices) {
    const double var = column_variance(data.events.columns()[i]);
    EXPECT_GT(var, 0.0);
    EXPECT_LT(var, 1e-4);
  }
  ASSERT_TRUE(t.twin_index.has_value());
  EXPECT_EQ(*t.twin_index, 13u);
  EXPECT_EQ(t.duplicate_copy, 24u);
  EXPECT_EQ(t.duplicate_source, 14u);
}

TEST(Generate, RejectsInvalidConfigs) {
  const auto kind = [](SynthConfig c) {
    try {
      generate(c);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  auto c = short_config();
  c.n_states = 1;
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
  c = short_config();
  c.n_features = 2;
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
  c = short_config();
  c.cycle_time_s = 0.3;  // 15 steps for 17 states
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
  c = short_config();
  c.cycle_time_s = 90.01;  // not on the 20 ms grid
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
  c = short_config();
  c.noise_fraction = 1.5;
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
  c = short_config();
  c.duration_s = 0.0;
  EXPECT_EQ(kind(c), ErrorKind::invalid_argument);
}

TEST(Generate, MinimalCycleIsFeasible) {
  auto c = short_config(10.0);
  c.cycle_time_s = 0.34;  // exactly one step per state
  c.noise_fraction = 0.0;
  const auto data = generate(c);
  EXPECT_EQ(data.truth.n_cycles(), 30u);
}

TEST(Generate, NoiselessRunRecoversTruth) {
  auto c = short_config();
  c.noise_fraction = 0.0;
  const auto data = generate(c);
  const auto uniform = resample_forward_fill(data.events, c.plc_step_ms);
  const auto pruned = prune(uniform, {});
  const auto det = detect_cycle(pruned.series);
  EXPECT_LE(std::abs(1.0 / det.cycle_time_s - 1.0 / 90.0), det.bin_width_hz);
  EXPECT_EQ(det.strongest().name, data.events.columns()[data.truth.anchor_index].name);

  const auto part = partition_cycles(pruned.series, det);
  const auto& b = data.truth.cycle_boundaries_ms;
  ASSERT_EQ(part.segments.size(), data.truth.n_cycles());
  for (std::size_t i = 0; i < part.segments.size(); ++i) {
    EXPECT_EQ(pruned.series.timestamp_at(part.segments[i].start_index), b[i]);
    EXPECT_EQ(pruned.series.timestamp_at(part.segments[i].end_index), b[i + 1]);
  }
}

TEST(GroundTruthJson, CarriesConfigAndIndices) {
  const auto data = generate(short_config(900.0));
  const auto j = nlohmann::json::parse(ground_truth_json(data.truth));
  EXPECT_EQ(j["config"]["n_features"], 35);
  EXPECT_EQ(j["anchor_name"], "signal_00");
  EXPECT_EQ(j["constant_index"], 1);
  EXPECT_TRUE(j["twin_index"].is_null());
  EXPECT_EQ(j["duplicate"]["copy"], 34);
  EXPECT_EQ(j["n_cycles"], data.truth.n_cycles());
  EXPECT_EQ(j["cycle_boundaries_ms"].size(), data.truth.n_cycles() + 1);
}
