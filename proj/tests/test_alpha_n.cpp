#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ionbound/alpha_n.hpp"
#include "oracles.hpp"

namespace ionbound {
namespace {

double radial_total(const ParticleConfiguration& c) {
  double s = 0.0;
  for (const auto& p : c.points()) s += p.norm();
  return s;
}

std::vector<Vec3> tetrahedron() {
  return {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
}

std::vector<Vec3> octahedron() {
  return {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
}

std::vector<Vec3> icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-phi, phi}) {
      v.emplace_back(0, a, b);
      v.emplace_back(a, b, 0);
      v.emplace_back(b, 0, a);
    }
  }
  return v;
}

OptimizerSettings settings_with(int restarts, std::uint64_t seed = 7) {
  OptimizerSettings s;
  s.restarts = restarts;
  s.seed = seed;
  return s;
}

TEST(NormalizeConfig, Examples) {
  const ParticleConfiguration c({Vec3(2, 0, 0), Vec3(-2, 0, 0)});
  const auto n = normalize_config(c);
  EXPECT_EQ(n, ParticleConfiguration({Vec3(1, 0, 0), Vec3(-1, 0, 0)}));
  EXPECT_EQ(normalize_config(n), n);
}

TEST(NormalizeConfig, SeededConfigurations) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> len(0.1, 5.0);
  for (std::size_t n = 2; n <= 10; ++n) {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(len(rng) * oracle::unit_sample(rng));
    const ParticleConfiguration c(pts);
    const auto m = normalize_config(c);
    EXPECT_NEAR(radial_total(m), static_cast<double>(n), 1e-12);
    EXPECT_NEAR(ratio_value(m).ratio, ratio_value(c).ratio, 1e-12 * ratio_value(c).ratio);
  }
}

TEST(OptimizerSettings, Validation) {
  OptimizerSettings s;
  EXPECT_NO_THROW(s.validate());
  s.shrink = 1.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.init_radius_low = 2.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.ratio_tolerance = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.restarts = 0;
  EXPECT_THROW(s.validate(), Error);
}

TEST(LocalMinimize, AntipodalPairIsFixed) {
  const auto r = local_minimize(ParticleConfiguration({Vec3(1, 0, 0), Vec3(-1, 0, 0)}), {});
  EXPECT_NEAR(r.value.ratio, 0.5, 1e-15);
  EXPECT_TRUE(r.converged);
}

TEST(LocalMinimize, EquilateralDoesNotIncrease) {
  const double h = std::sqrt(3.0) / 2.0;
  const auto r = local_minimize(ParticleConfiguration({Vec3(1, 0, 0), Vec3(-0.5, h, 0), Vec3(-0.5, -h, 0)}), {});
  EXPECT_LE(r.value.ratio, 1.0 / std::sqrt(3.0));
}

TEST(LocalMinimize, TraceIsMonotoneAndNormalized) {
  const OptimizerSettings s;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto start = random_start(4, s, i);
    const auto r = local_minimize(start, s);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_EQ(r.trace.front(), ratio_value(normalize_config(start)).ratio);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
    EXPECT_LE(r.value.ratio, ratio_value(start).ratio);
    EXPECT_NEAR(radial_total(r.config), 4.0, 1e-12);
    EXPECT_FALSE(configuration_defect(r.config.points()).has_value());
  }
}

TEST(LocalMinimize, RejectsOriginStart) {
  EXPECT_THROW(local_minimize(ParticleConfiguration({Vec3::Zero(), Vec3(1, 0, 0)}), {}), Error);
}

TEST(RandomStart, DeterministicAndNormalized) {
  const OptimizerSettings s;
  EXPECT_EQ(random_start(6, s, 3), random_start(6, s, 3));
  EXPECT_NE(random_start(6, s, 3), random_start(6, s, 4));
  EXPECT_NEAR(radial_total(random_start(6, s, 3)), 6.0, 1e-12);
}

TEST(EstimateAlpha, TwoParticles) {
  const auto a = estimate_alpha(2, settings_with(8));
  EXPECT_NEAR(a.value, 0.5, 1e-4);
  const auto b = estimate_alpha(2, settings_with(8, 12345));
  EXPECT_NEAR(a.value, b.value, 1e-6);
}

TEST(EstimateAlpha, ThreeParticlesBracket) {
  const auto a = estimate_alpha(3, settings_with(32));
  EXPECT_GE(a.value, std::sqrt(5.0) / 4.0);
  EXPECT_LE(a.value, 1.0 / std::sqrt(3.0) + 1e-6);
}

TEST(EstimateAlpha, NotWorseThanSymmetricTrialConfigurations) {
  const std::vector<std::pair<std::size_t, std::vector<Vec3>>> trials = {
      {4, tetrahedron()}, {6, octahedron()}, {12, icosahedron()}};
  for (const auto& [n, pts] : trials) {
    const auto a = estimate_alpha(n, settings_with(16));
    EXPECT_LE(a.value, oracle::direct_ratio(pts) + 1e-9) << "N=" << n;
  }
}

TEST(EstimateAlpha, DeterministicAcrossThreadCounts) {
  auto s = settings_with(24);
  s.threads = 1;
  const auto one = estimate_alpha(5, s);
  s.threads = 4;
  const auto four = estimate_alpha(5, s);
  const auto again = estimate_alpha(5, s);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(four.value, again.value);
  EXPECT_EQ(one.best_restart, four.best_restart);
  EXPECT_EQ(one.best_config, four.best_config);
}

TEST(EstimateAlpha, MonotoneAndSandwichedUpToTwelve) {
  const auto s = settings_with(64);
  double previous = 0.0;
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto a = estimate_alpha(n, s);
    EXPECT_NEAR(radial_total(a.best_config), static_cast<double>(n), 1e-12);
    EXPECT_EQ(a.restarts_used, 64);
    EXPECT_LE(a.lower_bound, a.value) << "N=" << n;
    EXPECT_LE(a.value, kBetaUpper + 1e-6) << "N=" << n;
    if (n > 2) {
      EXPECT_GE(a.value, previous - 2e-3) << "N=" << n;
    }
    previous = a.value;
  }
}

TEST(EstimateAlpha, RejectsSingleParticle) { EXPECT_THROW(estimate_alpha(1, {}), Error); }

TEST(AlphaSandwich, TwoParticleValue) {
  const double beta = 0.8218;
  const double expected = 2.0 * (beta - 3.0 * std::cbrt(beta / 6.0) * std::pow(2.0, -2.0 / 3.0));
  const auto b = alpha_sandwich(2, beta);
  EXPECT_NEAR(b.lower, expected, 1e-15);
  EXPECT_LT(b.lower, 0.0);
  EXPECT_FALSE(b.lower_at_r.has_value());
}

TEST(AlphaSandwich, LargeNLimit) { EXPECT_NEAR(alpha_sandwich(1'000'000, 0.8218).lower, 0.8218, 1e-3); }

TEST(AlphaSandwich, OptimalShellFractionMaximizesFamily) {
  const std::size_t n = 100;
  const double beta = 0.8218;
  const double r_star = optimal_shell_fraction(n, beta);
  EXPECT_NEAR(r_star, std::pow(4.0 * beta * n / 3.0, -1.0 / 3.0), 1e-15);
  const double best = *alpha_sandwich(n, beta, r_star).lower_at_r;
  for (int k = 1; k <= 100; ++k) {
    const double r = k / 100.0;
    const double expected = (100.0 / 99.0) * (beta - (2.0 * r * r / 3.0) * beta - 1.0 / (r * n));
    const double v = *alpha_sandwich(n, beta, r).lower_at_r;
    EXPECT_NEAR(v, expected, 1e-13);
    EXPECT_GE(best, v);
  }
}

TEST(AlphaSandwich, DomainErrors) {
  EXPECT_THROW(alpha_sandwich(5, 0.0), Error);
  EXPECT_THROW(alpha_sandwich(5, 1.0), Error);
  EXPECT_THROW(alpha_sandwich(5, 0.8, 0.0), Error);
  EXPECT_THROW(alpha_sandwich(5, 0.8, 1.5), Error);
}

}  // namespace
}  // namespace ionbound
