#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pinchloc/channel.hpp"

using namespace pinchloc;

namespace {

// Reference values computed with 40-digit arithmetic by tests/oracles/oracle_values.py.
constexpr double kLambda = 0.107068735;
constexpr double kAlpha = 0.016926955790242935352;
constexpr double kBeta = 84.634778951214676759;

constexpr double kSignalAt24[8][2] = {
    {-5.1829258853101532804e-4, 1.5091553782697939683e-4},  {-3.5034271058356163159e-4, -5.1597180257202091563e-4},
    {-1.5390639130286342472e-5, 6.8861048929800544224e-4}, {1.6405892904702514587e-4, 6.7043135868751568667e-4},
    {-1.6820994522315536835e-4, 5.9612759423389394093e-4}, {-2.31148628298158075e-4, 4.6589471325691944782e-4},
    {-3.2400274264196788332e-4, 2.8056780599077914537e-4}, {-4.1018917654792957102e-5, 3.5282618565117125809e-4},
};

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

Position random_position(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(0.0, 6.0), y(0.0, 10.0);
  return {x(rng), y(rng)};
}

}  // namespace

TEST(SystemConfig, DerivedConstantsMatchOracle) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  EXPECT_NEAR(cfg.wavelength_m(), kLambda, 1e-17);
  EXPECT_NEAR(cfg.alpha_np_per_m(), kAlpha, 1e-15 * kAlpha);
  EXPECT_NEAR(cfg.beta_rad_per_m(), kBeta, 1e-15 * kBeta);
  EXPECT_EQ(cfg.wavelength_m(), kSpeedOfLight / 2.8e9);
}

TEST(SystemConfig, UniformAntennaPlacement) {
  const auto v = uniform_antenna_positions(4, 10.0);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_DOUBLE_EQ(v[0], 1.25);
  EXPECT_DOUBLE_EQ(v[3], 8.75);
}

TEST(SystemConfig, RejectsInvalidParameters) {
  SystemParams p;
  p.antenna_positions_m = {1.0, 12.0};
  EXPECT_THROW(SystemConfig::create(p), ConfigError);
  p.antenna_positions_m = {2.0, 2.0};
  EXPECT_THROW(SystemConfig::create(p), ConfigError);
  p.antenna_positions_m = {1.0, 2.0};
  p.waveguide_length_m = 11.0;
  EXPECT_THROW(SystemConfig::create(p), ConfigError);
  p.waveguide_length_m = 10.0;
  p.noise_variance_w = 0.0;
  EXPECT_THROW(SystemConfig::create(p), ConfigError);
  p.noise_variance_w = 1e-7;
  p.loss_tangent = -1e-4;
  EXPECT_THROW(SystemConfig::create(p), ConfigError);
  p.loss_tangent = 0.0;
  EXPECT_EQ(SystemConfig::create(p).alpha_np_per_m(), 0.0);
}

TEST(SystemConfig, DbmConversion) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(-40.0), 1e-7);
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(watts_to_dbm(1e-9), -60.0, 1e-12);
}

TEST(Channel, DistanceMatchesOracle) {
  const auto cfg = SystemConfig::default_deployment(4, -40.0);
  EXPECT_NEAR(distance(cfg, {2.5, 7.1}, 0), 7.0336690283236955846, 1e-14);
  EXPECT_DOUBLE_EQ(distance(cfg, {0.0, 1.25}, 0), 3.0);
  EXPECT_THROW(distance(cfg, {0.0, 0.0}, 4), std::out_of_range);
}

TEST(Channel, WaveguideCoefficientMatchesOracle) {
  SystemParams p;
  p.antenna_positions_m = {5.0};
  const auto cfg = SystemConfig::create(p);
  const Complex w = waveguide_coefficient(cfg, 0);
  EXPECT_NEAR(w.real(), -0.5410988701619405615, 1e-12);
  EXPECT_NEAR(w.imag(), -0.74262595074895917779, 1e-12);
}

TEST(Channel, ModelSignalMatchesOracle) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  const auto s = model_signal(cfg, {2.0, 4.0});
  ASSERT_EQ(s.size(), 8u);
  for (std::size_t n = 0; n < 8; ++n) {
    const double scale = std::abs(Complex(kSignalAt24[n][0], kSignalAt24[n][1]));
    EXPECT_NEAR(s[n].real(), kSignalAt24[n][0], 1e-10 * scale) << "antenna " << n;
    EXPECT_NEAR(s[n].imag(), kSignalAt24[n][1], 1e-10 * scale) << "antenna " << n;
  }
}

TEST(Channel, MagnitudeLaw) {
  std::mt19937_64 rng(11);
  const auto cfg = SystemConfig::default_deployment(16, -40.0);
  const double expected = cfg.wavelength_m() * std::sqrt(cfg.params().transmit_power_w) / (4.0 * std::numbers::pi);
  for (int draw = 0; draw < 50; ++draw) {
    const Position u = random_position(rng);
    for (std::size_t n = 0; n < cfg.antenna_count(); ++n) {
      const double v = cfg.antenna_positions_m()[n];
      const double scaled = std::abs(model_sample(cfg, u, n)) * distance(cfg, u, n) * std::exp(cfg.alpha_np_per_m() * v);
      EXPECT_NEAR(scaled, expected, 1e-12 * expected);
    }
  }
}

TEST(Channel, PhaseLaw) {
  std::mt19937_64 rng(12);
  for (double pilot : {0.0, 0.7, -2.9}) {
    const auto cfg = SystemConfig::default_deployment(8, -40.0).with_pilot_phase(pilot);
    for (int draw = 0; draw < 50; ++draw) {
      const Position u = random_position(rng);
      for (std::size_t n = 0; n < cfg.antenna_count(); ++n) {
        const double v = cfg.antenna_positions_m()[n];
        const double expected =
            pilot - cfg.beta_rad_per_m() * v - 2.0 * std::numbers::pi * distance(cfg, u, n) / cfg.wavelength_m();
        EXPECT_NEAR(wrap(std::arg(model_sample(cfg, u, n)) - expected), 0.0, 1e-9);
      }
    }
  }
}

TEST(Channel, MirrorSymmetryIsExact) {
  std::mt19937_64 rng(13);
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  for (int draw = 0; draw < 100; ++draw) {
    const Position u = random_position(rng);
    const auto a = model_signal(cfg, u);
    const auto b = model_signal(cfg, {-u.x, u.y});
    for (std::size_t n = 0; n < a.size(); ++n) {
      EXPECT_EQ(a[n], b[n]);
    }
  }
}

TEST(Channel, ResidualEdgeCases) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  const Position u{1.7, 3.3};
  const auto s = model_signal(cfg, u);
  EXPECT_EQ(residual(cfg, s, u), 0.0);

  const SignalVector zero(8);
  double energy = 0.0;
  for (const auto& x : s) energy += std::norm(x);
  EXPECT_NEAR(residual(cfg, zero, u), energy, 1e-15 * energy);

  const SignalVector short_r(7);
  EXPECT_THROW(residual(cfg, short_r, u), std::invalid_argument);
}

TEST(Channel, ResidualIsNonNegativeAndPositiveOffTruth) {
  std::mt19937_64 rng(14);
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  for (int draw = 0; draw < 50; ++draw) {
    const Position u = random_position(rng);
    const auto r = synthesize_observation(cfg, u, draw);
    EXPECT_GE(residual(cfg, r, random_position(rng)), 0.0);
    EXPECT_GT(residual(cfg, model_signal(cfg, u), {u.x + 0.01, u.y}), 0.0);
  }
}

TEST(Channel, ObservationIsReproducible) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  const auto a = synthesize_observation(cfg, {2.0, 4.0}, 42);
  const auto b = synthesize_observation(cfg, {2.0, 4.0}, 42);
  const auto c = synthesize_observation(cfg, {2.0, 4.0}, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Channel, NoiseIsCircularWithTotalVarianceSigma2) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  const double sigma2 = cfg.noise_variance_w();
  const Position u{2.0, 4.0};
  const auto s = model_signal(cfg, u);

  const std::size_t seeds = 125000;  // 10^6 complex samples
  double sum_re = 0, sum_im = 0, sum_re2 = 0, sum_im2 = 0, sum_reim = 0;
  for (std::size_t k = 0; k < seeds; ++k) {
    const auto r = synthesize_observation(cfg, u, k);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const Complex w = r[n] - s[n];
      sum_re += w.real();
      sum_im += w.imag();
      sum_re2 += w.real() * w.real();
      sum_im2 += w.imag() * w.imag();
      sum_reim += w.real() * w.imag();
    }
  }
  const double count = static_cast<double>(seeds * s.size());
  const double sd = std::sqrt(sigma2 / 2.0);
  // Tolerances are about five standard errors of each estimator.
  EXPECT_NEAR(sum_re / count, 0.0, 5.0 * sd / std::sqrt(count));
  EXPECT_NEAR(sum_im / count, 0.0, 5.0 * sd / std::sqrt(count));
  EXPECT_NEAR(sum_re2 / count, sigma2 / 2.0, 5.0 * sigma2 / 2.0 * std::sqrt(2.0 / count));
  EXPECT_NEAR(sum_im2 / count, sigma2 / 2.0, 5.0 * sigma2 / 2.0 * std::sqrt(2.0 / count));
  EXPECT_NEAR((sum_re2 + sum_im2) / count, sigma2, 5.0 * sigma2 * std::sqrt(1.0 / count));
  EXPECT_NEAR(sum_reim / count, 0.0, 5.0 * sigma2 / 2.0 / std::sqrt(count));
}
