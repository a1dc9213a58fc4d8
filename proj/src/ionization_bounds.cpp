#include "ionbound/ionization_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ionbound {

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(lo <= hi)) throw Error(ErrorKind::kEmptyGrid, "invalid log grid");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

double beta_one(double beta) { return 3.0 * std::cbrt(beta / 6.0); }

double closed_form_main(double z, double coeff) { return coeff * z + 3.0 * std::cbrt(z); }

void require_positive_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw Error(ErrorKind::kDomain, "Z must be positive");
}

// Tracks the minimum margin and its witness in evaluation order, so the
// reported witness is the first point attaining the minimum.
struct MinTracker {
  double margin = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, double>> witness;
  std::size_t points = 0;

  void offer(double m, std::vector<std::pair<std::string, double>> w) {
    ++points;
    if (m < margin) {
      margin = m;
      witness = std::move(w);
    }
  }
};

}  // namespace

std::string_view to_string(AtomModel model) {
  switch (model) {
    case AtomModel::kNonrel: return "nonrel";
    case AtomModel::kMagneticGeneral: return "magnetic-general";
    case AtomModel::kMagneticHomogeneous: return "magnetic-homogeneous";
    case AtomModel::kRelativistic: return "relativistic";
    case AtomModel::kBosonicMagnetic: return "bosonic-magnetic";
  }
  return "unknown";
}

std::string_view to_string(LemmaId id) {
  switch (id) {
    case LemmaId::kLemma3: return "lemma3";
    case LemmaId::kLemma4: return "lemma4";
    case LemmaId::kCubicSigns: return "cubic-signs";
  }
  return "unknown";
}

void BoundInputs::validate() const {
  require_positive_z(z);
  if (!(b_field >= 0.0) || !std::isfinite(b_field)) throw Error(ErrorKind::kDomain, "B must be non-negative");
  if (!(k > 1.0)) throw Error(ErrorKind::kDomain, "k must exceed 1");
  if (!(beta_lower > 0.0 && beta_lower < 1.0)) throw Error(ErrorKind::kDomain, "beta_lower must lie in (0,1)");
  if (!(coeff * beta_lower >= 1.0 - 1e-12)) throw Error(ErrorKind::kDomain, "coeff must be at least 1/beta_lower");
  if (!(c_universal > 0.0) || !(c_kappa > 0.0) || !(c_2 > 0.0)) {
    throw Error(ErrorKind::kDomain, "unspecified constants must be positive");
  }
}

std::string LemmaGrid::describe(LemmaId id) const {
  std::ostringstream os;
  if (id != LemmaId::kCubicSigns) os << "Z:log[" << z_low << "," << z_high << "]x" << z_points << ";";
  if (id == LemmaId::kLemma3) os << "N/Z:log[" << ratio_low << "," << ratio_high << "]x" << ratio_points << ";";
  if (id == LemmaId::kLemma4) {
    os << "N:integer[threshold,threshold+" << n_extra << "];threshold:"
       << (lemma4_threshold == Lemma4Threshold::kInverseTwoThirds ? "Z/beta+3Z^(-2/3)" : "Z/beta+3Z^(1/3)") << ";";
    if (allow_real_n) os << "real-N-step:1/" << real_n_per_unit << ";";
  }
  os << "beta:{";
  for (std::size_t i = 0; i < betas.size(); ++i) os << (i ? "," : "") << betas[i];
  os << "}";
  return os.str();
}

PhysicalConstants derived_constants() {
  using std::numbers::pi;
  PhysicalConstants c;
  c.L = 1.0 / (pi * std::pow(3.0, 1.5) * 5.0);
  c.A = (std::cbrt(3.0) / 2.0) * std::pow(2.0, 2.0 / 3.0);
  c.K = std::pow(2.0, -2.0 / 3.0) * (3.0 / 10.0) * std::pow(2.0 / (5.0 * c.L), 2.0 / 3.0);
  c.C1 = std::pow(pi, -1.0 / 3.0) * 0.5 * std::pow(3.0, 5.0 / 3.0) * std::pow(5.0, 5.0 / 6.0) * std::cbrt(7.0) *
         std::pow(11.0, -1.5);
  c.c_radius = c.C1 * std::sqrt(c.K / c.A);
  c.c_kinetic = (3.0 / 8.0) / c.c_radius;
  return c;
}

double mean_radius_lower(double n, double z) {
  if (!(n >= 1.0)) throw Error(ErrorKind::kDomain, "N must be >= 1");
  require_positive_z(z);
  return kRadiusCoefficient * std::pow(n, 2.0 / 3.0) / z;
}

double implicit_charge(double n, double beta) {
  const double s = std::pow(n, -2.0 / 3.0);
  return n * (beta - beta_one(beta) * s) / (1.0 + kKineticCoefficient * s);
}

double implicit_threshold(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::kRootBracket, "beta must be positive");
  return std::pow(beta_one(beta) / beta, 1.5);
}

NonrelRow bound_row(const BoundInputs& inputs) {
  inputs.validate();
  const double z = inputs.z;
  const double beta = inputs.beta_lower;
  NonrelRow row;
  row.lieb = 2.0 * z + 1.0;
  row.main = closed_form_main(z, inputs.coeff);

  // implicit_charge is increasing past its numerator zero and unbounded.
  double lo = implicit_threshold(beta);
  double hi = std::max({2.0, z / beta, 2.0 * lo});
  while (implicit_charge(hi, beta) <= z) {
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) throw Error(ErrorKind::kRootBracket, "cannot bracket the implicit bound");
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (implicit_charge(mid, beta) < z ? lo : hi) = mid;
  }
  row.implicit_n = 0.5 * (lo + hi);
  return row;
}

double ionization_lemma_margin(double n, double z, double alpha_value) {
  if (!(n >= 2.0)) throw Error(ErrorKind::kDomain, "N must be >= 2");
  require_positive_z(z);
  if (!(alpha_value > 0.0 && alpha_value < 1.0)) throw Error(ErrorKind::kDomain, "alpha must lie in (0,1)");
  return z * (1.0 + kKineticCoefficient * std::pow(n, -2.0 / 3.0)) - alpha_value * (n - 1.0);
}

double magnetic_bound(const BoundInputs& inputs, std::optional<EnergyGap> gap) {
  inputs.validate();
  const double z = inputs.z;
  const double base = closed_form_main(z, inputs.coeff);
  if (inputs.model == AtomModel::kMagneticGeneral) {
    if (!gap) throw Error(ErrorKind::kMissingEnergyGap, "general magnetic bound needs E(N_c,Z,B) - E(N_c,kZ,B) and N_c");
    if (!(gap->n_c > 0.0) || !std::isfinite(gap->gap)) throw Error(ErrorKind::kDomain, "invalid energy gap input");
    return base * (1.0 + gap->gap / (gap->n_c * z * z * (inputs.k - 1.0)));
  }
  if (inputs.model != AtomModel::kMagneticHomogeneous) throw Error(ErrorKind::kDomain, "not a magnetic model");

  double field_term = 0.0;
  if (inputs.b_field > 0.0) {
    const double t = inputs.b_field / (z * z * z);
    const double log_t = std::log(t);
    field_term = std::min(0.42 * std::pow(t, 0.4), inputs.c_universal * (1.0 + log_t * log_t));
  }
  return base * (1.0 + 11.8 * std::pow(z, -2.0 / 3.0) + field_term);
}

double relativistic_or_bosonic_bound(const BoundInputs& inputs) {
  inputs.validate();
  const double z = inputs.z;
  if (inputs.model == AtomModel::kRelativistic) {
    if (!(inputs.kappa > 0.0 && inputs.kappa < 2.0 / std::numbers::pi)) {
      throw Error(ErrorKind::kKappaDomain, "kappa must lie in (0, 2/pi)");
    }
    if (inputs.fine_structure && z * *inputs.fine_structure > inputs.kappa) {
      throw Error(ErrorKind::kKappaDomain, "Z * alpha exceeds kappa");
    }
    return inputs.coeff * z + inputs.c_kappa * std::cbrt(z);
  }
  if (inputs.model != AtomModel::kBosonicMagnetic) throw Error(ErrorKind::kDomain, "not a relativistic or bosonic model");

  const double t = inputs.b_field / (z * z);
  double field_term = 1.0 + 4.0 * t;
  if (t > 0.0) {
    const double log_t = std::log(t);
    field_term = std::min(field_term, inputs.c_2 * log_t * log_t);
  }
  return (z / inputs.beta_lower + 3.0 * std::cbrt(z)) * (1.0 + field_term);
}

double model_bound(const BoundInputs& inputs, std::optional<EnergyGap> gap) {
  switch (inputs.model) {
    case AtomModel::kNonrel: return bound_row(inputs).main;
    case AtomModel::kMagneticGeneral:
    case AtomModel::kMagneticHomogeneous: return magnetic_bound(inputs, gap);
    case AtomModel::kRelativistic:
    case AtomModel::kBosonicMagnetic: return relativistic_or_bosonic_bound(inputs);
  }
  throw Error(ErrorKind::kDomain, "unknown model");
}

double cubic_h(double x, double beta) {
  return kKineticCoefficient - 3.0 * beta * x * x + beta_one(beta) * x * x * x;
}

LemmaReport verify_lemma(LemmaId id, const LemmaGrid& grid) {
  if (grid.betas.empty()) throw Error(ErrorKind::kEmptyGrid, "beta grid is empty");
  for (double beta : grid.betas) {
    if (!(beta >= 0.8218 && beta < 1.0)) throw Error(ErrorKind::kDomain, "beta grid values must lie in [0.8218, 1)");
  }

  LemmaReport report;
  report.id = id;
  report.grid_spec = grid.describe(id);
  MinTracker tracker;

  if (id == LemmaId::kCubicSigns) {
    for (double beta : grid.betas) {
      const double m = std::min({cubic_h(0.0, beta), -cubic_h(std::pow(beta, -1.0 / 3.0), beta),
                                 -cubic_h(std::cbrt(7.0 / 3.0), beta)});
      tracker.offer(m, {{"beta", beta}});
    }
  } else {
    if (grid.z_points < 1) throw Error(ErrorKind::kEmptyGrid, "Z grid is empty");
    const auto zs = log_grid(grid.z_low, grid.z_high, grid.z_points);
    for (double beta : grid.betas) {
      const double b1 = beta_one(beta);
      for (double z : zs) {
        if (id == LemmaId::kLemma3) {
          if (grid.ratio_points < 1) throw Error(ErrorKind::kEmptyGrid, "N/Z grid is empty");
          if (!(grid.ratio_high < 7.0 / 3.0)) throw Error(ErrorKind::kDomain, "lemma3 needs N/Z < 7/3");
          for (double ratio : log_grid(grid.ratio_low, grid.ratio_high, grid.ratio_points)) {
            const double n = ratio * z;
            const double s = std::pow(n, -2.0 / 3.0);
            double rhs = n;
            const double denom = beta - b1 * s;
            if (denom > 0.0) rhs = std::min(rhs, z * (1.0 + kKineticCoefficient * s) / denom);
            tracker.offer(z / beta + 3.0 * std::cbrt(z) - rhs, {{"Z", z}, {"N", n}, {"beta", beta}});
          }
        } else {
          const double threshold = z / beta + 3.0 * (grid.lemma4_threshold == Lemma4Threshold::kInverseTwoThirds
                                                          ? std::pow(z, -2.0 / 3.0)
                                                          : std::cbrt(z));
          auto margin_at = [&](double n) {
            return (beta - b1 * std::pow(n, -2.0 / 3.0)) * (1.0 / beta + 3.0 * std::pow(z, -2.0 / 3.0)) - 1.0;
          };
          const double first = std::max(1.0, std::ceil(threshold));
          for (int j = 0; j <= grid.n_extra; ++j) {
            const double n = first + j;
            tracker.offer(margin_at(n), {{"Z", z}, {"N", n}, {"beta", beta}});
          }
          if (grid.allow_real_n) {
            const int steps = grid.n_extra * grid.real_n_per_unit;
            for (int j = 0; j <= steps; ++j) {
              const double n = threshold + static_cast<double>(j) / grid.real_n_per_unit;
              if (n == std::floor(n)) continue;
              if (margin_at(n) <= 0.0) ++report.out_of_hypothesis_failures;
            }
          }
        }
      }
    }
  }

  if (tracker.points == 0) throw Error(ErrorKind::kEmptyGrid, "no grid points evaluated");
  report.min_margin = tracker.margin;
  report.witness = std::move(tracker.witness);
  report.points = tracker.points;
  report.pass = report.min_margin > 0.0;
  return report;
}

long crossover_z(double coeff, long cap) {
  if (!(coeff > 0.0)) throw Error(ErrorKind::kDomain, "coefficient must be positive");
  for (long z = 1; z <= cap; ++z) {
    const double zd = static_cast<double>(z);
    if (closed_form_main(zd, coeff) < 2.0 * zd + 1.0) return z;
  }
  throw Error(ErrorKind::kNoCrossover, "no crossover with Lieb's bound below Z = " + std::to_string(cap));
}

}  // namespace ionbound
