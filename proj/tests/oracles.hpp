#pragma once

// Reference computations that share no code with the library: Monte Carlo
// sphere averages, direct double sums, central differences and brute-force
// scans. Tests compare the library against these.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ionbound::oracle {

using Vec3 = Eigen::Vector3d;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;

  bool within(double expected, double sigmas = 3.0) const { return std::abs(mean - expected) <= sigmas * std_error; }
};

class Accumulator {
 public:
  void add(double v) {
    ++n_;
    const double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
  }
  McEstimate estimate() const {
    const double var = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    return {mean_, std::sqrt(var / static_cast<double>(n_))};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Uniform direction from a normalized isotropic Gaussian vector.
inline Vec3 unit_sample(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    Vec3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

/// Mean of 1/|a + s w| over uniform w.
inline McEstimate mc_inverse_distance(const Vec3& a, double s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Accumulator acc;
  for (int i = 0; i < samples; ++i) acc.add(1.0 / (a + s * unit_sample(rng)).norm());
  return acc.estimate();
}

/// Componentwise mean of w/|a + s w| over uniform w.
inline std::array<McEstimate, 3> mc_dipole(const Vec3& a, double s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<Accumulator, 3> acc;
  for (int i = 0; i < samples; ++i) {
    const Vec3 w = unit_sample(rng);
    const Vec3 v = w / (a + s * w).norm();
    for (int k = 0; k < 3; ++k) acc[k].add(v[k]);
  }
  return {acc[0].estimate(), acc[1].estimate(), acc[2].estimate()};
}

/// Shell-shell means of the three radial kernels with x on radius r and y on radius s:
/// (|x|^2+|y|^2)/|x-y|, max + min^2/|x-y|, and |x-y| + (2/3) min^2/max.
inline std::array<McEstimate, 3> mc_shell_kernels(double r, double s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<Accumulator, 3> acc;
  const double hi = std::max(r, s);
  const double lo = std::min(r, s);
  for (int i = 0; i < samples; ++i) {
    const Vec3 x = r * unit_sample(rng);
    const Vec3 y = s * unit_sample(rng);
    const double d = (x - y).norm();
    acc[0].add((r * r + s * s) / d);
    acc[1].add(hi + lo * lo / d);
    acc[2].add(d + (2.0 / 3.0) * lo * lo / hi);
  }
  return {acc[0].estimate(), acc[1].estimate(), acc[2].estimate()};
}

/// Direct evaluation of sum_{i<j} (|xi|^2+|xj|^2)/|xi-xj| / ((N-1) sum |xi|).
inline double direct_ratio(const std::vector<Vec3>& pts) {
  double energy = 0.0;
  double norms = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    norms += pts[i].norm();
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      energy += (pts[i].squaredNorm() + pts[j].squaredNorm()) / (pts[i] - pts[j]).norm();
    }
  }
  return energy / (static_cast<double>(pts.size() - 1) * norms);
}

/// Central differences of direct_ratio with step h.
inline std::vector<Vec3> fd_gradient(std::vector<Vec3> pts, double h) {
  std::vector<Vec3> grad(pts.size(), Vec3::Zero());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const double keep = pts[i][k];
      pts[i][k] = keep + h;
      const double up = direct_ratio(pts);
      pts[i][k] = keep - h;
      const double down = direct_ratio(pts);
      pts[i][k] = keep;
      grad[i][k] = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

/// Bisection root of f on [lo, hi] where f changes sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// lambda' from its defining relation
/// (l - l') - 2 sqrt((2/3) l' (1 - l)) - 2 sqrt(l (1 - l)) = 0, solved by bisection.
inline double lambda_prime_by_bisection(double l) {
  auto residual = [l](double lp) {
    return (l - lp) - 2.0 * std::sqrt((2.0 / 3.0) * lp * (1.0 - l)) - 2.0 * std::sqrt(l * (1.0 - l));
  };
  if (residual(0.0) <= 0.0) return 0.0;
  return bisect(residual, 0.0, l);
}

/// Ratio of a radial measure by direct double sum of r_j^2 / max(r_j, r_k).
inline double direct_radial_ratio(const std::vector<double>& r, const std::vector<double>& w) {
  double q = 0.0;
  double l = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    l += w[j] * r[j];
    for (std::size_t k = 0; k < r.size(); ++k) q += w[j] * w[k] * r[j] * r[j] / std::max(r[j], r[k]);
  }
  return q / l;
}

/// First N on a grid of step `step` above the numerator zero where
/// N (beta - 3 (beta/6)^{1/3} N^{-2/3}) / (1 + 0.68 N^{-2/3}) reaches z.
inline double implicit_n_by_scan(double z, double beta, double step) {
  const double b1 = 3.0 * std::cbrt(beta / 6.0);
  const double n0 = std::pow(b1 / beta, 1.5);
  auto f = [&](double n) {
    const double s = std::pow(n, -2.0 / 3.0);
    return n * (beta - b1 * s) / (1.0 + 0.68 * s);
  };
  for (long i = 1;; ++i) {
    const double n = n0 + static_cast<double>(i) * step;
    if (f(n) >= z) return n;
  }
}

}  // namespace ionbound::oracle
