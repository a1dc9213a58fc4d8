#pragma once

// Pair kernels of the classical ionization functional, their spherical
// averages, and the discrete inequality probes built on them.

#include <Eigen/Core>

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ionbound/error.hpp"

namespace ionbound {

using Vec3 = Eigen::Vector3d;

/// Pairs closer than this fraction of the configuration diameter are
/// treated as coincident.
inline constexpr double kCoincidenceFraction = 1e-12;

/// Returns the defect that makes `points` an invalid configuration, if any.
std::optional<ErrorKind> configuration_defect(std::span<const Vec3> points);

/// N >= 2 labeled points in R^3 with distinct positions, finite coordinates
/// and at most one point at the origin. Validated on construction.
class ParticleConfiguration {
 public:
  explicit ParticleConfiguration(std::vector<Vec3> points);

  std::span<const Vec3> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vec3& operator[](std::size_t i) const { return points_[i]; }

  /// Maximum pairwise distance.
  double diameter() const;
  /// Returns a copy with every point multiplied by `factor` (> 0).
  ParticleConfiguration scaled(double factor) const;

  bool operator==(const ParticleConfiguration& other) const = default;

 private:
  std::vector<Vec3> points_;
};

struct RatioValue {
  double energy = 0.0;      // sum_{i<j} (|x_i|^2 + |x_j|^2) / |x_i - x_j|
  double normalizer = 0.0;  // (N - 1) * sum_i |x_i|
  double ratio = 0.0;       // energy / normalizer
};

enum class ProbeKind { kLsst, kDomination };

std::string_view to_string(ProbeKind kind);

struct ProbeReport {
  ProbeKind kind = ProbeKind::kLsst;
  std::size_t n = 0;
  double epsilon = 0.0;
  double margin = 0.0;  // left minus right side of the probed inequality
  ParticleConfiguration witness;
};

struct KernelTriple {
  double full = 0.0;
  double kernel1 = 0.0;
  double kernel2 = 0.0;
};

/// (|x|^2 + |y|^2) / |x - y|.
double pair_energy(const Vec3& x, const Vec3& y);

RatioValue ratio_value(const ParticleConfiguration& config);

/// Analytic gradient of ratio_value(config).ratio with respect to each point.
/// Requires every point to be off the origin.
std::vector<Vec3> ratio_gradient(const ParticleConfiguration& config);

/// Mean of 1/|a + s w| over the unit sphere (Newton's theorem).
double sphere_average_inverse_distance(const Vec3& a, double s);

/// Mean of w/|a + s w| over the unit sphere.
Vec3 sphere_average_dipole(const Vec3& a, double s);

/// W_lambda written in the reduced variables a = max(|x|,|y|),
/// b = min(|x|,|y|), c = |x - y|. With `check_triangle` the triple must be
/// realizable by actual points.
double w_lambda_reduced(double lambda, double a, double b, double c, bool check_triangle = true);

/// Shell-shell averages of the three kernels compared in the radial
/// domination inequality, for concentric shells of radii r and s.
KernelTriple radial_kernel_triple(double r, double s);

/// Mean distance between points drawn uniformly on concentric shells.
double shell_mean_distance(double r, double s);

ProbeReport inequality_probe(ProbeKind kind, const ParticleConfiguration& config, double epsilon);

}  // namespace ionbound
