#include "ionbound/alpha_n.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace ionbound {

namespace {

// Points closer than this to the origin make |x| non-smooth for the descent.
constexpr double kOriginExclusion = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 80;
// Accepted steps whose combined improvement must fall below the tolerance.
constexpr std::size_t kStallWindow = 25;

double radial_sum(std::span<const Vec3> pts) {
  double s = 0.0;
  for (const auto& p : pts) s += p.norm();
  return s;
}

bool near_origin(std::span<const Vec3> pts) {
  return std::any_of(pts.begin(), pts.end(), [](const Vec3& p) { return p.norm() < kOriginExclusion; });
}

}  // namespace

void OptimizerSettings::validate() const {
  if (restarts < 1) throw Error(ErrorKind::kDomain, "restarts must be >= 1");
  if (max_iterations < 0) throw Error(ErrorKind::kDomain, "max_iterations must be >= 0");
  if (!(ratio_tolerance > 0.0)) throw Error(ErrorKind::kDomain, "ratio_tolerance must be > 0");
  if (!(initial_step > 0.0)) throw Error(ErrorKind::kDomain, "initial_step must be > 0");
  if (!(shrink > 0.0 && shrink < 1.0)) throw Error(ErrorKind::kDomain, "shrink factor must lie in (0,1)");
  if (!(init_radius_low > 0.0 && init_radius_low < init_radius_high)) {
    throw Error(ErrorKind::kDomain, "initial radial band must satisfy 0 < low < high");
  }
}

ParticleConfiguration normalize_config(const ParticleConfiguration& config) {
  const double total = radial_sum(config.points());
  if (!(total > 0.0)) throw Error(ErrorKind::kDegenerateNormalizer, "all points at the origin");
  const double target = static_cast<double>(config.size());
  if (total == target) return config;
  return config.scaled(target / total);
}

LocalResult local_minimize(const ParticleConfiguration& start, const OptimizerSettings& settings) {
  settings.validate();
  if (near_origin(start.points())) throw Error(ErrorKind::kOriginPoint, "descent start has a point at the origin");

  ParticleConfiguration x = normalize_config(start);
  RatioValue value = ratio_value(x);
  LocalResult out{x, value, 0, false, {value.ratio}};

  const std::size_t n = x.size();
  double step = settings.initial_step;
  std::vector<Vec3> trial(n);

  for (int it = 0; it < settings.max_iterations; ++it) {
    const auto grad = ratio_gradient(x);
    double gnorm2 = 0.0;
    for (const auto& g : grad) gnorm2 += g.squaredNorm();
    if (gnorm2 == 0.0) {
      out.converged = true;
      break;
    }

    bool accepted = false;
    std::optional<ParticleConfiguration> next;
    RatioValue next_value;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, step *= settings.shrink) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * grad[i];
      if (near_origin(trial) || configuration_defect(trial)) continue;
      const double scale = static_cast<double>(n) / radial_sum(trial);
      for (auto& p : trial) p *= scale;
      // Renormalization can in principle push a pair under the threshold.
      if (near_origin(trial) || configuration_defect(trial)) continue;
      ParticleConfiguration candidate(trial);
      const RatioValue cv = ratio_value(candidate);
      if (cv.ratio <= value.ratio - kArmijo * step * gnorm2) {
        next.emplace(std::move(candidate));
        next_value = cv;
        accepted = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!accepted) {
      // No descent left at working precision.
      out.converged = true;
      break;
    }

    x = std::move(*next);
    value = next_value;
    out.trace.push_back(value.ratio);
    const auto& tr = out.trace;
    if (tr.size() > kStallWindow && tr[tr.size() - 1 - kStallWindow] - value.ratio < settings.ratio_tolerance) {
      out.converged = true;
      break;
    }
    step /= settings.shrink;
  }

  out.config = std::move(x);
  out.value = value;
  return out;
}

ParticleConfiguration random_start(std::size_t n, const OptimizerSettings& settings, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(settings.seed), static_cast<std::uint32_t>(settings.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(n)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(settings.init_radius_low, settings.init_radius_high);

  std::vector<Vec3> pts(n);
  do {
    for (auto& p : pts) {
      Vec3 dir;
      do {
        dir = Vec3(gauss(rng), gauss(rng), gauss(rng));
      } while (dir.norm() == 0.0);
      p = radius(rng) * dir.normalized();
    }
  } while (configuration_defect(pts));
  return normalize_config(ParticleConfiguration(std::move(pts)));
}

AlphaEstimate estimate_alpha(std::size_t n, const OptimizerSettings& settings) {
  if (n < 2) throw Error(ErrorKind::kDomain, "estimate_alpha needs N >= 2");
  settings.validate();

  const auto restarts = static_cast<std::size_t>(settings.restarts);
  std::vector<std::optional<LocalResult>> results(restarts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < restarts; i = next++) {
      results[i] = local_minimize(random_start(n, settings, i), settings);
    }
  };

  unsigned threads = settings.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : settings.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, restarts));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Sequential reduction: lowest restart index wins ties.
  std::size_t best = 0;
  int converged = 0;
  for (std::size_t i = 0; i < restarts; ++i) {
    if (results[i]->converged) ++converged;
    if (results[i]->value.ratio < results[best]->value.ratio - 1e-15) best = i;
  }

  return AlphaEstimate{n,
                       results[best]->value.ratio,
                       alpha_sandwich(n, kBetaLower).lower,
                       normalize_config(results[best]->config),
                       settings.restarts,
                       converged,
                       static_cast<int>(best)};
}

double optimal_shell_fraction(std::size_t n, double beta_lower) {
  return std::cbrt(3.0 / (4.0 * beta_lower * static_cast<double>(n)));
}

SandwichBound alpha_sandwich(std::size_t n, double beta_lower, std::optional<double> r) {
  if (n < 2) throw Error(ErrorKind::kDomain, "sandwich bound needs N >= 2");
  if (!(beta_lower > 0.0 && beta_lower < 1.0)) throw Error(ErrorKind::kDomain, "beta_lower must lie in (0,1)");
  if (r && !(*r > 0.0 && *r <= 1.0)) throw Error(ErrorKind::kDomain, "shell fraction r must lie in (0,1]");

  const double nn = static_cast<double>(n);
  const double factor = nn / (nn - 1.0);
  SandwichBound out;
  out.lower = factor * (beta_lower - 3.0 * std::cbrt(beta_lower / 6.0) * std::pow(nn, -2.0 / 3.0));
  if (r) {
    const double rr = *r;
    out.lower_at_r = factor * (beta_lower - (2.0 * rr * rr / 3.0) * beta_lower - 1.0 / (rr * nn));
  }
  return out;
}

}  // namespace ionbound
