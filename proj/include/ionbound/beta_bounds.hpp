#pragma once

// Two-sided numerical bracket on the statistical constant beta:
// a lower bound from the lambda-blended kernel W_lambda, and an upper bound
// from radially symmetric probability measures.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ionbound/error.hpp"

namespace ionbound {

/// Discrete probability measure on (0, inf).
class RadialMeasure {
 public:
  /// Nodes must be strictly increasing and positive; weights non-negative
  /// and summing to one within 1e-12.
  RadialMeasure(std::vector<double> nodes, std::vector<double> weights);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct LambdaPoint {
  double lambda = 0.0;
  double lambda_prime = 0.0;
  double g = 0.0;
};

struct GMaximum {
  double lambda0 = 0.0;
  double g_max = 0.0;
};

struct MaximinResult {
  double value = 0.0;       // max over lambda rows of the grid inner minimum
  double grid_error = 0.0;  // value minus the same quantity with each row's inner min refined
  double best_lambda = 0.0;
};

struct TrialValue {
  double analytic = 0.0;
  double quadrature = 0.0;
  double normalization = 0.0;  // quadrature of the density itself
};

struct DinkelbachSettings {
  int max_outer = 200;
  int max_inner = 20000;
  double theta_tolerance = 1e-10;
  double inner_tolerance = 1e-14;
};

struct RadialOptimum {
  RadialMeasure measure;
  double value = 0.0;
  std::vector<double> theta_trace;
  int outer_iterations = 0;
};

/// Thrown when the Dinkelbach loop exhausts its budget; carries the best
/// measure found so far.
class RadialIterationLimit : public Error {
 public:
  RadialIterationLimit(RadialOptimum best, const std::string& what)
      : Error(ErrorKind::kIterationLimit, what), best_(std::move(best)) {}
  const RadialOptimum& best() const { return best_; }

 private:
  RadialOptimum best_;
};

enum class LowerSource { kGMax, kMaximinGrid };
enum class UpperSource { kTrialMeasure, kOptimizedMeasure };

std::string_view to_string(LowerSource s);
std::string_view to_string(UpperSource s);

struct BetaBracket {
  double lower = 0.0;
  LowerSource lower_source = LowerSource::kGMax;
  double upper = 0.0;
  UpperSource upper_source = UpperSource::kTrialMeasure;
  std::optional<RadialMeasure> certificate_measure;

  // Components, kept for reporting.
  GMaximum g;
  MaximinResult maximin;
  TrialValue trial;
  double optimized_upper = 0.0;
};

struct BetaSettings {
  double g_tolerance = 1e-10;
  int lambda_grid = 51;
  int b_grid = 101;
  int c_grid = 101;
  int nodes = 200;
  double node_low = 0.05;
  double node_high = 20.0;
  int quadrature_points = 2048;
  DinkelbachSettings dinkelbach;
};

/// Residual of lambda - lambda' = 2 sqrt(2/3 lambda'(1-lambda)) + 2 sqrt(lambda(1-lambda)).
double lambda_prime_residual(double lambda, double lambda_prime);

LambdaPoint g_of_lambda(double lambda);

/// Golden-section search of g over [0.8, 1] down to bracket width `tolerance`.
GMaximum maximize_g(double tolerance);

/// Grid maximin of W_lambda(x,y)/(|x|+|y|) in reduced variables a = 1,
/// b in [0,1], c in [max(1-b, 1e-9), 1+b].
MaximinResult w_maximin(int lambda_grid, int b_grid, int c_grid);

/// Inner minimum over the b/c grid for a single lambda.
double w_grid_row_min(double lambda, int b_grid, int c_grid);

/// Inner infimum for a single lambda, with the c-minimization done in closed
/// form and the b-minimization refined by golden section.
double w_row_infimum(double lambda);

double radial_ratio(const RadialMeasure& measure);

TrialValue trial_measure_value(int quadrature_points);

/// The trial density 3/4 r^{-3/2} on [1,9] binned onto `nodes` (cell
/// boundaries at geometric midpoints), renormalized.
RadialMeasure discretize_trial_measure(std::span<const double> nodes);

std::vector<double> log_spaced_nodes(int count, double low, double high);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

/// Minimizes radial_ratio over the weight simplex at fixed nodes by
/// Dinkelbach iteration, starting from uniform weights.
RadialOptimum minimize_radial_ratio(std::span<const double> nodes, const DinkelbachSettings& settings);

BetaBracket beta_bracket(const BetaSettings& settings);

}  // namespace ionbound
