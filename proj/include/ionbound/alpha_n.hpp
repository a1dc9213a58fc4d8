#pragma once

// Multi-start estimation of the N-particle constant alpha_N, the infimum of
// the kernel-energy ratio over N-point configurations, and the two-sided
// relation it satisfies with the statistical constant beta.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ionbound/kernels.hpp"

namespace ionbound {

/// Best known lower bound on beta, used as the default sandwich input.
inline constexpr double kBetaLower = 0.8218;
/// Upper bound on beta from the radial trial measure.
inline constexpr double kBetaUpper = 0.8705;

struct OptimizerSettings {
  int restarts = 64;
  int max_iterations = 5000;
  double ratio_tolerance = 1e-10;
  double initial_step = 0.1;
  double shrink = 0.5;
  std::uint64_t seed = 7;
  double init_radius_low = 0.5;
  double init_radius_high = 1.5;
  /// Worker threads for independent restarts; 0 picks the hardware count.
  /// The result does not depend on this value.
  unsigned threads = 0;

  /// Throws kDomain when a field is out of range.
  void validate() const;
};

struct LocalResult {
  ParticleConfiguration config;
  RatioValue value;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // ratio after each accepted step, starting value first
};

struct AlphaEstimate {
  std::size_t n = 0;
  double value = 0.0;        // best ratio found; an upper estimate of alpha_N
  double lower_bound = 0.0;  // sandwich lower bound at beta = kBetaLower
  ParticleConfiguration best_config;
  int restarts_used = 0;
  int converged_restarts = 0;
  int best_restart = 0;
};

struct SandwichBound {
  double lower = 0.0;
  std::optional<double> lower_at_r;
};

/// Rescales so that sum_i |x_i| = N.
ParticleConfiguration normalize_config(const ParticleConfiguration& config);

/// Backtracking gradient descent on the ratio, staying on sum_i |x_i| = N.
LocalResult local_minimize(const ParticleConfiguration& start, const OptimizerSettings& settings);

/// Random start for restart `index`, drawn from a generator keyed on
/// (settings.seed, index).
ParticleConfiguration random_start(std::size_t n, const OptimizerSettings& settings, std::uint64_t index);

AlphaEstimate estimate_alpha(std::size_t n, const OptimizerSettings& settings);

/// N/(N-1) [beta - 3 (beta/6)^{1/3} N^{-2/3}], plus the one-parameter family
/// N/(N-1) [beta - (2 r^2/3) beta - 1/(rN)] when r is given.
SandwichBound alpha_sandwich(std::size_t n, double beta_lower, std::optional<double> r = std::nullopt);

/// The shell radius fraction maximizing the one-parameter family.
double optimal_shell_fraction(std::size_t n, double beta_lower);

}  // namespace ionbound
