#include "ionbound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ionbound {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCoincidentPoints: return "coincident-points";
    case ErrorKind::kDegenerateNormalizer: return "degenerate-normalizer";
    case ErrorKind::kOriginPoint: return "origin-point";
    case ErrorKind::kZeroCenter: return "zero-center";
    case ErrorKind::kNonRealizableGeometry: return "non-realizable-geometry";
    case ErrorKind::kInvalidConfiguration: return "invalid-configuration";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kNegativeRadicand: return "negative-radicand";
    case ErrorKind::kDegenerateGrid: return "degenerate-grid";
    case ErrorKind::kIterationLimit: return "iteration-limit";
    case ErrorKind::kInconsistentBracket: return "inconsistent-bracket";
    case ErrorKind::kRootBracket: return "root-bracket";
    case ErrorKind::kMissingEnergyGap: return "missing-energy-gap";
    case ErrorKind::kKappaDomain: return "kappa-domain";
    case ErrorKind::kEmptyGrid: return "empty-grid";
    case ErrorKind::kNoCrossover: return "no-crossover";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

std::string_view to_string(ProbeKind kind) {
  return kind == ProbeKind::kLsst ? "lsst" : "domination";
}

namespace {

double diameter_of(std::span<const Vec3> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      d = std::max(d, (points[i] - points[j]).norm());
    }
  }
  return d;
}

// Unchecked summand; callers have validated the configuration.
double pair_energy_raw(const Vec3& x, const Vec3& y) {
  return (x.squaredNorm() + y.squaredNorm()) / (x - y).norm();
}

bool has_origin_point(const ParticleConfiguration& config) {
  return std::any_of(config.points().begin(), config.points().end(),
                     [](const Vec3& p) { return p.squaredNorm() == 0.0; });
}

}  // namespace

std::optional<ErrorKind> configuration_defect(std::span<const Vec3> points) {
  if (points.size() < 2) return ErrorKind::kInvalidConfiguration;
  for (const auto& p : points) {
    if (!p.allFinite()) return ErrorKind::kInvalidConfiguration;
  }
  const double threshold = kCoincidenceFraction * diameter_of(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      // Also catches two points at the origin.
      if ((points[i] - points[j]).norm() <= threshold) return ErrorKind::kCoincidentPoints;
    }
  }
  return std::nullopt;
}

ParticleConfiguration::ParticleConfiguration(std::vector<Vec3> points) : points_(std::move(points)) {
  if (auto defect = configuration_defect(points_)) {
    throw Error(*defect, "invalid particle configuration with " + std::to_string(points_.size()) + " points");
  }
}

double ParticleConfiguration::diameter() const { return diameter_of(points_); }

ParticleConfiguration ParticleConfiguration::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::kDomain, "scale factor must be positive");
  std::vector<Vec3> out(points_);
  for (auto& p : out) p *= factor;
  return ParticleConfiguration(std::move(out));
}

double pair_energy(const Vec3& x, const Vec3& y) {
  const double d = (x - y).norm();
  if (d == 0.0 || d <= kCoincidenceFraction * std::max(x.norm(), y.norm())) {
    throw Error(ErrorKind::kCoincidentPoints, "pair_energy of coincident points");
  }
  return (x.squaredNorm() + y.squaredNorm()) / d;
}

RatioValue ratio_value(const ParticleConfiguration& config) {
  // Summing in lexicographic point order makes the result independent of labeling.
  std::vector<Vec3> pts(config.points().begin(), config.points().end());
  std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });
  const std::size_t n = pts.size();
  RatioValue out;
  double radial_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radial_sum += pts[i].norm();
    for (std::size_t j = i + 1; j < n; ++j) out.energy += pair_energy_raw(pts[i], pts[j]);
  }
  out.normalizer = static_cast<double>(n - 1) * radial_sum;
  if (!(out.normalizer > 0.0)) throw Error(ErrorKind::kDegenerateNormalizer, "all points at the origin");
  out.ratio = out.energy / out.normalizer;
  return out;
}

std::vector<Vec3> ratio_gradient(const ParticleConfiguration& config) {
  if (has_origin_point(config)) throw Error(ErrorKind::kOriginPoint, "ratio gradient undefined at the origin");
  const auto pts = config.points();
  const std::size_t n = pts.size();
  const RatioValue value = ratio_value(config);

  std::vector<Vec3> grad(n, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 diff = pts[i] - pts[j];
      const double d = diff.norm();
      const double e = (pts[i].squaredNorm() + pts[j].squaredNorm()) / d;
      // d/dx_i of (|x_i|^2+|x_j|^2)/|x_i-x_j|
      const Vec3 common = (e / (d * d)) * diff;
      grad[i] += (2.0 / d) * pts[i] - common;
      grad[j] += (2.0 / d) * pts[j] + common;
    }
  }
  const double nm1 = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 dnorm = nm1 * pts[i] / pts[i].norm();
    grad[i] = (grad[i] - value.ratio * dnorm) / value.normalizer;
  }
  return grad;
}

double sphere_average_inverse_distance(const Vec3& a, double s) {
  const double r = a.norm();
  if (!(s >= 0.0) || !std::isfinite(s) || !a.allFinite()) throw Error(ErrorKind::kDomain, "invalid shell");
  if (r == 0.0 && s == 0.0) throw Error(ErrorKind::kDomain, "zero center and zero radius");
  return 1.0 / std::max(r, s);
}

Vec3 sphere_average_dipole(const Vec3& a, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::kDomain, "shell radius must be positive");
  const double r = a.norm();
  if (r == 0.0) throw Error(ErrorKind::kZeroCenter, "dipole average needs a nonzero center");
  const double hi = std::max(r, s);
  return (-std::min(r, s) / (3.0 * r * hi * hi)) * a;
}

double w_lambda_reduced(double lambda, double a, double b, double c, bool check_triangle) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::kDomain, "lambda outside [0,1]");
  if (!(a > 0.0) || !(b >= 0.0 && b <= a) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(c)) {
    throw Error(ErrorKind::kDomain, "need a > 0, 0 <= b <= a, c > 0");
  }
  if (check_triangle) {
    const double slack = 1e-12 * (a + b);
    if (c < (a - b) - slack || c > (a + b) + slack) {
      throw Error(ErrorKind::kNonRealizableGeometry, "c is not a distance between points of norms a and b");
    }
  }
  const double b2 = b * b;
  return lambda * (a + b2 / c) + (1.0 - lambda) * (c + (2.0 / 3.0) * b2 / a);
}

double shell_mean_distance(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw Error(ErrorKind::kDomain, "shell radii must be positive");
  const double hi = std::max(r, s);
  const double lo = std::min(r, s);
  return hi + lo * lo / (3.0 * hi);
}

KernelTriple radial_kernel_triple(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw Error(ErrorKind::kDomain, "shell radii must be positive");
  const double hi = std::max(r, s);
  const double lo = std::min(r, s);
  KernelTriple out;
  out.full = (r * r + s * s) / hi;
  out.kernel1 = hi + lo * lo / hi;
  out.kernel2 = shell_mean_distance(r, s) + (2.0 / 3.0) * lo * lo / hi;
  return out;
}

ProbeReport inequality_probe(ProbeKind kind, const ParticleConfiguration& config, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorKind::kDomain, "epsilon outside [0,1]");
  const auto pts = config.points();
  const std::size_t n = pts.size();
  const double keep = 1.0 - epsilon;
  double margin = 0.0;

  if (kind == ProbeKind::kLsst) {
    if (has_origin_point(config)) throw Error(ErrorKind::kOriginPoint, "lsst probe needs all points off the origin");
    margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != j) s += 1.0 / (pts[i] - pts[j]).norm();
      }
      margin = std::max(margin, s - static_cast<double>(n) * keep / pts[j].norm());
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double ri = pts[i].norm();
        const double rj = pts[j].norm();
        const double d = (pts[i] - pts[j]).norm();
        const double lo = std::min(ri, rj);
        margin += pair_energy_raw(pts[i], pts[j]) - keep * (std::max(ri, rj) + lo * lo / d);
      }
    }
  }
  return ProbeReport{kind, n, epsilon, margin, config};
}

}  // namespace ionbound
