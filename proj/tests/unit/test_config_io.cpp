#include <gtest/gtest.h>

#include <filesystem>

#include "pinchloc/config_io.hpp"
#include "pinchloc/csv_io.hpp"

using namespace pinchloc;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(PINCHLOC_SOURCE_DIR) / "configs";

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ConfigIo, BaselineConfigParses) {
  const auto cfg = parse_config(kConfigs / "baseline.cfg", false);
  EXPECT_NEAR(cfg.wavelength_m(), 0.1070687, 1e-7);
  EXPECT_EQ(cfg.antenna_count(), 8u);
  EXPECT_EQ(cfg.area().x_max, 6.0);
  EXPECT_EQ(cfg.area().y_max, 10.0);
}

TEST(ConfigIo, LosslessGuideHasZeroAlpha) {
  const auto file = parse_config_text("loss_tangent = 0\nnoise_dbm = -40\n", "t");
  EXPECT_EQ(resolve_config(file, std::nullopt, std::nullopt, true).alpha_np_per_m(), 0.0);
}

TEST(ConfigIo, AntennaOutsideGuideNamesAntennaAndLine) {
  const std::string text = "noise_dbm = -40\n# antennas\nantenna_positions_m = 1, 5, 12\n";
  const std::string msg = message_of([&] { resolve_config(parse_config_text(text, "bad.cfg"), {}, {}, true); });
  EXPECT_NE(msg.find("bad.cfg:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("antenna_positions_m"), std::string::npos) << msg;
  EXPECT_NE(msg.find("antenna 3"), std::string::npos) << msg;
}

TEST(ConfigIo, NoiseMustBeGivenOnce) {
  EXPECT_THROW(parse_config_text("noise_dbm = -40\nnoise_variance_w = 1e-7\n", "t"), ConfigError);
  const auto file = parse_config_text("noise_variance_w = 1e-7\n", "t");
  EXPECT_THROW(resolve_config(file, std::nullopt, -40.0, true), ConfigError);
  EXPECT_EQ(resolve_config(file, std::nullopt, std::nullopt, true).noise_variance_w(), 1e-7);
  const auto dbm = parse_config_text("noise_dbm = -40\n", "t");
  EXPECT_DOUBLE_EQ(resolve_config(dbm, std::nullopt, -70.0, true).noise_variance_w(), 1e-10);
  EXPECT_THROW(resolve_config(parse_config_text("", "t"), std::nullopt, std::nullopt, true), ConfigError);
}

TEST(ConfigIo, SyntaxErrors) {
  EXPECT_THROW(parse_config_text("bogus_key = 1\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("area_x_m = 6\narea_x_m = 7\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("area_x_m 6\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("area_x_m =\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("area_x_m = six\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("num_antennas = 4\nantenna_positions_m = 1,2\n", "t"), ConfigError);
  EXPECT_THROW(parse_config_text("grid_spacing_m = 0.1\ngrid_spacing_wavelengths = 0.25\n", "t"), ConfigError);
}

TEST(ConfigIo, OverridesAndSearchSettings) {
  const auto file = parse_config_text("num_antennas = 4\ngrid_spacing_wavelengths = 0.5\nnum_candidates = 7\n", "t");
  const auto cfg = resolve_config(file, std::nullopt, -40.0, true);
  EXPECT_EQ(cfg.antenna_count(), 4u);
  EXPECT_EQ(resolve_config(file, 16, -40.0, true).antenna_count(), 16u);
  EXPECT_DOUBLE_EQ(file.grid.resolved_spacing(cfg), cfg.wavelength_m() / 2.0);
  EXPECT_EQ(file.grid.num_candidates, 7u);
}

TEST(ConfigIo, HashIsStableAndSensitive) {
  const auto a = SystemConfig::default_deployment(8, -40.0);
  const auto b = SystemConfig::default_deployment(8, -40.0);
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), sha256_hex(canonical_config_text(a)));
  EXPECT_NE(config_hash(a), config_hash(a.with_noise_dbm(-41.0)));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ConfigIo, SpecFilesParse) {
  const auto sweep = parse_sweep_spec(kConfigs / "noise_sweep.spec");
  EXPECT_EQ(sweep.spec.noise_dbm_list.size(), 7u);
  EXPECT_EQ(sweep.spec.pa_counts, (std::vector<std::size_t>{4, 8, 16}));
  EXPECT_EQ(sweep.spec.trials, 1000u);
  EXPECT_FALSE(sweep.spec.truth.fixed);
  ASSERT_TRUE(sweep.config);
  EXPECT_TRUE(std::filesystem::exists(*sweep.config));
  EXPECT_EQ(sweep.search.num_candidates, std::optional<std::size_t>(50));

  const auto map = parse_map_spec(kConfigs / "error_map.spec");
  EXPECT_EQ(map.spec.grid_spacing_m, 0.25);
  EXPECT_EQ(map.spec.trials_per_point, 100u);
  EXPECT_EQ(map.spec.n_pas, 8u);
  EXPECT_FALSE(map.search.num_candidates);
}

TEST(CsvIo, DoublesRoundTrip) {
  for (double x : {0.1, -1e-300, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isinf(parse_double("inf")));
  EXPECT_THROW(parse_double("1.0x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
  EXPECT_THROW(parse_double("1e999"), std::invalid_argument);
}

TEST(CsvIo, ObservationRoundTrip) {
  const SignalVector r{{1e-4, -2e-5}, {0.0, 3.5e-4}, {-1.0 / 3.0, 2.0 / 7.0}};
  const std::string csv = observation_csv(r);
  EXPECT_EQ(csv.substr(0, 7), "n,re,im");
  EXPECT_EQ(parse_observation_csv(csv), r);
  EXPECT_EQ(parse_observation_csv("# comment\n" + csv), r);
  EXPECT_THROW(parse_observation_csv("n,re,im\n2,0,0\n"), std::invalid_argument);
  EXPECT_THROW(parse_observation_csv("n,re,im\n"), std::invalid_argument);
}
