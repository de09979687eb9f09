#include <gtest/gtest.h>

#include <random>

#include "pinchloc/channel.hpp"
#include "pinchloc/estimator.hpp"
#include "pinchloc/model_table.hpp"

using namespace pinchloc;

TEST(Wls, NoiseFreeRecovery) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> x(0.5, 6.0), y(0.0, 10.0);
  for (int draw = 0; draw < 200; ++draw) {
    const Position u{x(rng), y(rng)};
    const auto est = wls_amplitude_baseline(cfg, model_signal(cfg, u));
    EXPECT_LT(distance_between(est.position, u), 1e-8) << u.x << "," << u.y;
    EXPECT_FALSE(est.clipped);
    EXPECT_EQ(est.residual, residual(cfg, model_signal(cfg, u), est.position));
  }
}

TEST(Wls, UserOnTheWaveguideAxisGivesZeroCrossTrack) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  for (double y : {0.0, 2.5, 5.0, 9.3}) {
    const auto est = wls_amplitude_baseline(cfg, model_signal(cfg, {0.0, y}));
    EXPECT_EQ(est.position.x, 0.0);
    EXPECT_NEAR(est.position.y, y, 1e-8);
  }
}

TEST(Wls, ClipsWhenRangesAreTooShort) {
  const auto cfg = SystemConfig::default_deployment(8, -40.0);
  auto r = model_signal(cfg, {0.2, 5.0});
  for (auto& s : r) s *= 1.5;  // every range shrinks by a third
  const auto est = wls_amplitude_baseline(cfg, r);
  EXPECT_EQ(est.position.x, 0.0);
  EXPECT_TRUE(est.clipped);
  EXPECT_EQ(est.flags(), std::vector<std::string>{"clipped"});
}

TEST(Wls, RejectsTooFewAntennasAndBadInput) {
  const auto cfg2 = SystemConfig::default_deployment(2, -40.0);
  EXPECT_THROW(wls_amplitude_baseline(cfg2, model_signal(cfg2, {1.0, 1.0})), std::invalid_argument);
  const auto cfg8 = SystemConfig::default_deployment(8, -40.0);
  EXPECT_THROW(wls_amplitude_baseline(cfg8, SignalVector(7)), std::invalid_argument);
  EXPECT_THROW(wls_amplitude_baseline(cfg8, SignalVector(8)), std::domain_error);
}

TEST(Wls, IsWorseThanMlAtModerateNoise) {
  const auto cfg = SystemConfig::default_deployment(8, -60.0);
  const ModelTable table(cfg, GridSearchConfig{}.grid(cfg));
  double ml = 0.0, wls = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Position u{2.0, 4.0};
    const auto r = synthesize_observation(cfg, u, seed);
    ml += distance_between(ml_estimate(cfg, table, r, GridSearchConfig{}, LmConfig{}).position, u);
    wls += distance_between(wls_amplitude_baseline(cfg, r).position, u);
  }
  EXPECT_LT(ml, wls);
}
