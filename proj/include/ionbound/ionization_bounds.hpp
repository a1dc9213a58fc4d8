#pragma once

// Closed-form maximum-ionization bounds N_c(Z) for several atom models,
// the constant chain behind the kinetic correction term, and grid
// verifiers for the elementary lemmas that turn the implicit bound into a
// closed form.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ionbound/error.hpp"

namespace ionbound {

struct PhysicalConstants {
  double L = 0.0;
  double A = 0.0;
  double K = 0.0;
  double C1 = 0.0;
  double c_radius = 0.0;   // exact coefficient rounded down to 0.553
  double c_kinetic = 0.0;  // exact coefficient rounded up to 0.68
};

/// Rounded coefficients used throughout the bounds.
inline constexpr double kRadiusCoefficient = 0.553;
inline constexpr double kKineticCoefficient = 0.68;

enum class AtomModel { kNonrel, kMagneticGeneral, kMagneticHomogeneous, kRelativistic, kBosonicMagnetic };

std::string_view to_string(AtomModel model);

struct BoundInputs {
  double z = 1.0;
  AtomModel model = AtomModel::kNonrel;
  double b_field = 0.0;      // homogeneous field strength B
  double k = 2.0;            // comparison charge ratio, general magnetic model
  double beta_lower = 0.8218;
  double coeff = 1.22;       // must satisfy coeff * beta_lower >= 1
  // Constants the bounds leave unspecified; placeholders, not known values.
  double c_universal = 1.0;
  double c_kappa = 1.0;
  double c_2 = 1.0;
  double kappa = 0.5;        // relativistic coupling bound, Z * alpha <= kappa < 2/pi
  std::optional<double> fine_structure;

  void validate() const;
};

/// E(N_c, Z, B) - E(N_c, kZ, B) together with N_c; the library cannot compute
/// quantum energies, so these are caller inputs.
struct EnergyGap {
  double gap = 0.0;
  double n_c = 0.0;
};

struct NonrelRow {
  double lieb = 0.0;
  double main = 0.0;
  double implicit_n = 0.0;
};

enum class LemmaId { kLemma3, kLemma4, kCubicSigns };

/// Lemma-4 hypothesis N >= Z/beta + 3 Z^e with e = -2/3 (kInverseTwoThirds)
/// or e = 1/3 (kCubeRoot, the shape of the closed-form bound). Only the
/// cube-root form makes the failure case force N/Z > 4.
enum class Lemma4Threshold { kInverseTwoThirds, kCubeRoot };

std::string_view to_string(LemmaId id);

struct LemmaGrid {
  double z_low = 0.5;
  double z_high = 120.0;
  int z_points = 100;
  double ratio_low = 0.1;   // N/Z range for lemma3
  double ratio_high = 2.33;
  int ratio_points = 100;
  std::vector<double> betas = {0.8218};
  int n_extra = 40;         // lemma4: integers N from the hypothesis threshold upward
  bool allow_real_n = false;  // lemma4: also probe non-integer N (outside the hypothesis)
  int real_n_per_unit = 10;
  Lemma4Threshold lemma4_threshold = Lemma4Threshold::kInverseTwoThirds;

  std::string describe(LemmaId id) const;
};

struct LemmaReport {
  LemmaId id = LemmaId::kLemma3;
  std::string grid_spec;
  double min_margin = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> witness;
  std::size_t points = 0;
  /// lemma4 only: failures at non-integer N, which the lemma does not cover.
  std::size_t out_of_hypothesis_failures = 0;
};

PhysicalConstants derived_constants();

/// 0.553 Z^{-1} N^{2/3}.
double mean_radius_lower(double n, double z);

/// N (beta - 3 (beta/6)^{1/3} N^{-2/3}) / (1 + 0.68 N^{-2/3}).
double implicit_charge(double n, double beta);

/// Largest zero of the numerator factor of implicit_charge.
double implicit_threshold(double beta);

NonrelRow bound_row(const BoundInputs& inputs);

/// Z (1 + 0.68 N^{-2/3}) - alpha (N - 1).
double ionization_lemma_margin(double n, double z, double alpha_value);

double magnetic_bound(const BoundInputs& inputs, std::optional<EnergyGap> gap = std::nullopt);

double relativistic_or_bosonic_bound(const BoundInputs& inputs);

/// The bound for inputs.model; nonrel returns the closed-form main bound.
double model_bound(const BoundInputs& inputs, std::optional<EnergyGap> gap = std::nullopt);

/// 0.68 - 3 beta x^2 + 3 (beta/6)^{1/3} x^3.
double cubic_h(double x, double beta);

LemmaReport verify_lemma(LemmaId id, const LemmaGrid& grid);

/// Smallest positive integer Z with coeff Z + 3 Z^{1/3} < 2Z + 1.
long crossover_z(double coeff, long cap = 1'000'000);

}  // namespace ionbound
