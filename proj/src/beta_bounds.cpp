#include "ionbound/beta_bounds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "ionbound/kernels.hpp"

namespace ionbound {

namespace {

constexpr double kLambdaLow = 0.8;
constexpr double kLambdaHigh = 1.0;
constexpr double kMinGap = 1e-9;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

// Golden-section maximization of a unimodal function on [lo, hi].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, f(mid)};
}

Eigen::MatrixXd radial_kernel_matrix(std::span<const double> r) {
  const auto m = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double ri = r[static_cast<std::size_t>(i)];
      const double rj = r[static_cast<std::size_t>(j)];
      k(i, j) = (ri * ri + rj * rj) / (2.0 * std::max(ri, rj));
    }
  }
  return k;
}

void check_nodes(std::span<const double> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::kDomain, "radial measure needs at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > 0.0) || !std::isfinite(nodes[i])) throw Error(ErrorKind::kDomain, "radial nodes must be positive");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw Error(ErrorKind::kDomain, "radial nodes must be strictly increasing");
  }
}

// Composite Simpson rule with `intervals` (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double trial_density(double r) { return 0.75 * std::pow(r, -1.5); }

}  // namespace

std::string_view to_string(LowerSource s) { return s == LowerSource::kGMax ? "g_max" : "maximin-grid"; }
std::string_view to_string(UpperSource s) {
  return s == UpperSource::kTrialMeasure ? "trial-measure" : "optimized-measure";
}

RadialMeasure::RadialMeasure(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  check_nodes(nodes_);
  if (weights_.size() != nodes_.size()) throw Error(ErrorKind::kDomain, "node and weight counts differ");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::kDomain, "weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::kDomain, "weights must sum to one");
}

double lambda_prime_residual(double lambda, double lambda_prime) {
  return (lambda - lambda_prime) - 2.0 * std::sqrt((2.0 / 3.0) * lambda_prime * (1.0 - lambda)) -
         2.0 * std::sqrt(lambda * (1.0 - lambda));
}

LambdaPoint g_of_lambda(double lambda) {
  if (!(lambda >= kLambdaLow && lambda <= kLambdaHigh)) throw Error(ErrorKind::kDomain, "lambda outside [0.8, 1]");
  const double radicand = (lambda + 2.0) / 3.0 - 2.0 * std::sqrt(lambda * (1.0 - lambda));
  if (radicand < 0.0) throw Error(ErrorKind::kNegativeRadicand, "negative radicand in lambda' at lambda = " + std::to_string(lambda));
  const double root = std::sqrt(radicand) - std::sqrt((2.0 / 3.0) * (1.0 - lambda));
  const double lambda_prime = root * root;
  return {lambda, lambda_prime, lambda - lambda_prime};
}

GMaximum maximize_g(double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::kDomain, "tolerance must be positive");
  const auto [x, fx] = golden_max([](double l) { return g_of_lambda(l).g; }, kLambdaLow, kLambdaHigh, tolerance);
  return {x, fx};
}

double w_grid_row_min(double lambda, int b_grid, int c_grid) {
  if (b_grid < 2 || c_grid < 2) throw Error(ErrorKind::kDegenerateGrid, "grid counts must be >= 2");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < b_grid; ++i) {
    const double b = static_cast<double>(i) / (b_grid - 1);
    const double lo = std::max(1.0 - b, kMinGap);
    const double hi = 1.0 + b;
    for (int k = 0; k < c_grid; ++k) {
      const double c = lo + (hi - lo) * static_cast<double>(k) / (c_grid - 1);
      best = std::min(best, w_lambda_reduced(lambda, 1.0, b, c, false) / (1.0 + b));
    }
  }
  return best;
}

double w_row_infimum(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::kDomain, "lambda outside [0,1]");
  // For fixed b the c-dependence lambda b^2/c + (1-lambda) c is convex.
  auto profile = [lambda](double b) {
    const double lo = std::max(1.0 - b, kMinGap);
    const double hi = 1.0 + b;
    const double c_star = lambda < 1.0 ? b * std::sqrt(lambda / (1.0 - lambda)) : hi;
    const double c = std::clamp(c_star, lo, hi);
    return w_lambda_reduced(lambda, 1.0, b, c, false) / (1.0 + b);
  };
  constexpr int kScan = 2000;
  int best_i = 0;
  double best = profile(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double v = profile(static_cast<double>(i) / kScan);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0, best_i - 1) / static_cast<double>(kScan);
  const double hi = std::min(kScan, best_i + 1) / static_cast<double>(kScan);
  const auto [b, neg] = golden_max([&](double t) { return -profile(t); }, lo, hi, 1e-13);
  (void)b;
  return std::min(best, -neg);
}

MaximinResult w_maximin(int lambda_grid, int b_grid, int c_grid) {
  if (lambda_grid < 2 || b_grid < 2 || c_grid < 2) throw Error(ErrorKind::kDegenerateGrid, "grid counts must be >= 2");
  MaximinResult out;
  out.value = -std::numeric_limits<double>::infinity();
  double refined = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < lambda_grid; ++i) {
    const double lambda = kLambdaLow + (kLambdaHigh - kLambdaLow) * static_cast<double>(i) / (lambda_grid - 1);
    const double row = w_grid_row_min(lambda, b_grid, c_grid);
    if (row > out.value) {
      out.value = row;
      out.best_lambda = lambda;
    }
    refined = std::max(refined, std::min(row, w_row_infimum(lambda)));
  }
  out.grid_error = out.value - refined;
  return out;
}

double radial_ratio(const RadialMeasure& measure) {
  const auto r = measure.nodes();
  const auto w = measure.weights();
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    lin += w[j] * r[j];
    for (std::size_t k = 0; k < r.size(); ++k) {
      quad += w[j] * w[k] * (r[j] * r[j] + r[k] * r[k]) / (2.0 * std::max(r[j], r[k]));
    }
  }
  return quad / lin;
}

TrialValue trial_measure_value(int quadrature_points) {
  if (quadrature_points < 16) throw Error(ErrorKind::kDomain, "need at least 16 quadrature points");
  const int n = quadrature_points + (quadrature_points % 2);
  TrialValue out;
  out.analytic = 115.0 / 81.0 - 0.5 * std::log(3.0);
  out.normalization = simpson(trial_density, 1.0, 9.0, n);

  // Ordered form: 2 * int_{r<s} f(r) f(s) (r^2+s^2)/(2s).
  auto inner = [n](double s) {
    if (s == 1.0) return 0.0;
    return simpson([s](double r) { return trial_density(r) * (r * r + s * s); }, 1.0, s, n);
  };
  const double quad = simpson([&](double s) { return trial_density(s) * inner(s) / s; }, 1.0, 9.0, n);
  const double lin = simpson([](double r) { return trial_density(r) * r; }, 1.0, 9.0, n);
  out.quadrature = quad / lin;
  return out;
}

RadialMeasure discretize_trial_measure(std::span<const double> nodes) {
  check_nodes(nodes);
  // Mass of the trial density on [a, b] intersected with [1, 9].
  auto mass = [](double a, double b) {
    a = std::max(a, 1.0);
    b = std::min(b, 9.0);
    return a < b ? 1.5 * (1.0 / std::sqrt(a) - 1.0 / std::sqrt(b)) : 0.0;
  };
  const std::size_t m = nodes.size();
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = j == 0 ? 0.0 : std::sqrt(nodes[j - 1] * nodes[j]);
    const double b = j + 1 == m ? std::numeric_limits<double>::infinity() : std::sqrt(nodes[j] * nodes[j + 1]);
    w[j] = mass(a, b);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::kDomain, "nodes do not resolve the trial support [1, 9]");
  for (auto& x : w) x /= total;
  return RadialMeasure(std::vector<double>(nodes.begin(), nodes.end()), std::move(w));
}

std::vector<double> log_spaced_nodes(int count, double low, double high) {
  if (count < 2) throw Error(ErrorKind::kDegenerateGrid, "need at least two nodes");
  if (!(low > 0.0 && low < high)) throw Error(ErrorKind::kDomain, "need 0 < low < high");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = std::log(high / low) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = low * std::exp(step * i);
  out.back() = high;
  return out;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorKind::kDomain, "cannot project an empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) shift = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - shift, 0.0);
  return out;
}

RadialOptimum minimize_radial_ratio(std::span<const double> nodes, const DinkelbachSettings& settings) {
  check_nodes(nodes);
  const auto m = static_cast<Eigen::Index>(nodes.size());
  const Eigen::MatrixXd k = radial_kernel_matrix(nodes);
  const Eigen::Map<const Eigen::VectorXd> r(nodes.data(), m);
  // The quadratic form is indefinite; 1/L with L = 2 ||K||_2 keeps each
  // projected step a descent step.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * eig.eigenvalues().cwiseAbs().maxCoeff();
  const double step = 1.0 / lipschitz;

  auto to_measure = [&](const Eigen::VectorXd& w) {
    std::vector<double> weights(w.data(), w.data() + m);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& x : weights) x /= total;
    return RadialMeasure(std::vector<double>(nodes.begin(), nodes.end()), std::move(weights));
  };
  auto ratio_of = [&](const Eigen::VectorXd& w, const Eigen::VectorXd& kw) { return w.dot(kw) / r.dot(w); };

  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd kw = k * w;
  double theta = ratio_of(w, kw);
  RadialOptimum out{to_measure(w), theta, {theta}, 0};

  std::vector<double> buffer(static_cast<std::size_t>(m));
  for (int outer = 0; outer < settings.max_outer; ++outer) {
    // Accelerated projected gradient on F(w) = w'Kw - theta r'w, started at
    // the current w (where F = 0), with restart whenever F would increase.
    auto objective = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& kx) { return x.dot(kx) - theta * r.dot(x); };
    Eigen::VectorXd cur = w;
    Eigen::VectorXd kcur = kw;
    double fcur = objective(cur, kcur);
    Eigen::VectorXd y = cur;
    Eigen::VectorXd ky = kcur;
    double t = 1.0;
    for (int inner = 0; inner < settings.max_inner; ++inner) {
      const Eigen::VectorXd grad = 2.0 * ky - theta * r;
      for (Eigen::Index i = 0; i < m; ++i) buffer[static_cast<std::size_t>(i)] = y(i) - step * grad(i);
      const auto projected = project_to_simplex(buffer);
      Eigen::VectorXd next = Eigen::Map<const Eigen::VectorXd>(projected.data(), m);
      Eigen::VectorXd knext = k * next;
      const double fnext = objective(next, knext);
      if (fnext > fcur) {
        if (t == 1.0) break;  // plain projected step failed to descend: stationary
        t = 1.0;
        y = cur;
        ky = kcur;
        continue;
      }
      const double moved = (next - cur).norm();
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_next;
      y = next + momentum * (next - cur);
      ky = knext + momentum * (knext - kcur);
      cur = std::move(next);
      kcur = std::move(knext);
      fcur = fnext;
      t = t_next;
      if (moved < settings.inner_tolerance) break;
    }

    const double next_theta = ratio_of(cur, kcur);
    out.outer_iterations = outer + 1;
    if (next_theta > theta) return out;  // subproblem found no improvement
    w = cur;
    kw = kcur;
    const double change = theta - next_theta;
    theta = next_theta;
    out.theta_trace.push_back(theta);
    out.measure = to_measure(w);
    out.value = theta;
    if (change < settings.theta_tolerance) return out;
  }
  throw RadialIterationLimit(out, "Dinkelbach iteration did not converge in " + std::to_string(settings.max_outer) +
                                      " outer steps");
}

BetaBracket beta_bracket(const BetaSettings& settings) {
  BetaBracket out;
  out.g = maximize_g(settings.g_tolerance);
  out.maximin = w_maximin(settings.lambda_grid, settings.b_grid, settings.c_grid);
  out.trial = trial_measure_value(settings.quadrature_points);

  const auto nodes = log_spaced_nodes(settings.nodes, settings.node_low, settings.node_high);
  std::optional<RadialOptimum> optimum;
  try {
    optimum = minimize_radial_ratio(nodes, settings.dinkelbach);
  } catch (const RadialIterationLimit& limit) {
    optimum = limit.best();
  }
  out.optimized_upper = optimum->value;

  const double grid_lower = out.maximin.value - out.maximin.grid_error;
  out.lower = std::max(out.g.g_max, grid_lower);
  out.lower_source = out.g.g_max >= grid_lower ? LowerSource::kGMax : LowerSource::kMaximinGrid;
  if (optimum->value < out.trial.analytic) {
    out.upper = optimum->value;
    out.upper_source = UpperSource::kOptimizedMeasure;
    out.certificate_measure = optimum->measure;
  } else {
    out.upper = out.trial.analytic;
    out.upper_source = UpperSource::kTrialMeasure;
  }
  if (out.lower > out.upper) throw Error(ErrorKind::kInconsistentBracket, "beta lower bound exceeds upper bound");
  return out;
}

}  // namespace ionbound
