#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ionbound/ionization_bounds.hpp"
#include "oracles.hpp"

namespace ionbound {
namespace {

BoundInputs nonrel(double z) {
  BoundInputs in;
  in.z = z;
  return in;
}

BoundInputs homogeneous(double z, double b) {
  BoundInputs in;
  in.z = z;
  in.model = AtomModel::kMagneticHomogeneous;
  in.b_field = b;
  return in;
}

TEST(DerivedConstants, ChainValues) {
  const auto c = derived_constants();
  EXPECT_NEAR(c.L, 0.01225, 1e-5);
  EXPECT_NEAR(c.L, 1.0 / (std::numbers::pi * std::pow(3.0, 1.5) * 5.0), 1e-17);
  EXPECT_NEAR(c.C1, 0.4271, 1e-4);
  EXPECT_GT(c.c_radius, kRadiusCoefficient);
  EXPECT_LT(c.c_kinetic, kKineticCoefficient);
  EXPECT_NEAR(c.c_kinetic * c.c_radius, 3.0 / 8.0, 1e-15);
}

TEST(MeanRadiusLower, Examples) {
  EXPECT_NEAR(mean_radius_lower(1, 1), 0.553, 1e-15);
  EXPECT_NEAR(mean_radius_lower(8, 2), 1.106, 1e-14);
  EXPECT_NEAR(mean_radius_lower(1000, 10), 5.53, 1e-13);
  EXPECT_THROW(mean_radius_lower(0.5, 1), Error);
  EXPECT_THROW(mean_radius_lower(2, 0), Error);
}

TEST(BoundRow, Examples) {
  const auto six = bound_row(nonrel(6));
  EXPECT_EQ(six.lieb, 13.0);
  EXPECT_NEAR(six.main, 1.22 * 6 + 3 * std::cbrt(6.0), 1e-13);
  EXPECT_NEAR(six.main, 12.771, 1e-3);
  EXPECT_LT(six.main, six.lieb);
  const auto one = bound_row(nonrel(1));
  EXPECT_NEAR(one.main, 4.22, 1e-14);
  EXPECT_GT(one.main, one.lieb);
}

TEST(BoundRow, ImplicitChargeMatchesGridScan) {
  const auto row = bound_row(nonrel(10));
  const double scanned = oracle::implicit_n_by_scan(10.0, 0.8218, 1e-4);
  EXPECT_LE(std::abs(row.implicit_n - scanned), 1e-4);
  EXPECT_NEAR(implicit_charge(row.implicit_n, 0.8218), 10.0, 1e-8);
  EXPECT_GT(row.implicit_n, implicit_threshold(0.8218));
}

TEST(BoundRow, ImplicitChargeIsInverseOfChargeFunction) {
  for (double z : {0.5, 2.0, 17.0, 92.0, 1e4}) {
    const auto row = bound_row(nonrel(z));
    EXPECT_NEAR(implicit_charge(row.implicit_n, 0.8218), z, 1e-9 * z) << z;
  }
}

// The closed form dominates the implicit bound from Z = 4 on; Z = 1..3 lie
// outside the N/Z < 7/3 regime, where the classical 2Z+1 bound takes over.
TEST(BoundRow, ClosedFormDominatesImplicitBound) {
  for (int z = 4; z <= 120; ++z) {
    const auto row = bound_row(nonrel(z));
    EXPECT_GE(row.main, row.implicit_n - 1e-6) << "Z=" << z;
  }
  for (int z = 1; z <= 120; ++z) {
    const auto row = bound_row(nonrel(z));
    EXPECT_GE(row.main, std::min(row.implicit_n, row.lieb) - 1e-6) << "Z=" << z;
  }
}

TEST(BoundRow, SmallChargesBelowClosedForm) {
  for (int z = 1; z <= 3; ++z) {
    const auto row = bound_row(nonrel(z));
    EXPECT_GT(row.implicit_n / z, 7.0 / 3.0) << "Z=" << z;
  }
}

TEST(BoundRow, MonotoneAndAsymptotic) {
  double previous = 0.0;
  for (int z = 1; z <= 200; ++z) {
    const double main = bound_row(nonrel(z)).main;
    EXPECT_GT(main, previous);
    previous = main;
  }
  EXPECT_NEAR(bound_row(nonrel(1e8)).main / 1e8, 1.22, 1e-3);
}

TEST(BoundInputs, Validation) {
  auto in = nonrel(5);
  in.coeff = 1.1;
  EXPECT_THROW(bound_row(in), Error);
  in = nonrel(-1);
  EXPECT_THROW(bound_row(in), Error);
  in = homogeneous(5, -1);
  EXPECT_THROW(magnetic_bound(in), Error);
  in = nonrel(5);
  in.k = 1.0;
  EXPECT_THROW(in.validate(), Error);
}

TEST(IonizationLemmaMargin, Examples) {
  EXPECT_NEAR(ionization_lemma_margin(2, 1, 0.5), 1.0 + 0.68 * std::pow(2.0, -2.0 / 3.0) - 0.5, 1e-15);
  EXPECT_NEAR(ionization_lemma_margin(2, 1, 0.5), 0.9284, 1e-4);
  EXPECT_LT(ionization_lemma_margin(2, 0.1, 0.5), 0.0);
  const double a = ionization_lemma_margin(7, 1, 0.7);
  const double b = ionization_lemma_margin(7, 2, 0.7);
  const double c = ionization_lemma_margin(7, 3, 0.7);
  EXPECT_GT(b, a);
  EXPECT_NEAR(c - b, b - a, 1e-14);
  EXPECT_THROW(ionization_lemma_margin(2, 1, 1.5), Error);
}

TEST(MagneticBound, HomogeneousExamples) {
  const double z = 7.0;
  const double base = 1.22 * z + 3 * std::cbrt(z);
  EXPECT_NEAR(magnetic_bound(homogeneous(z, z * z * z)), base * (1 + 11.8 * std::pow(z, -2.0 / 3.0) + 0.42), 1e-12);
  const double base100 = 1.22 * 100 + 3 * std::cbrt(100.0);
  EXPECT_NEAR(magnetic_bound(homogeneous(100, 0)), base100 * (1 + 11.8 * std::pow(100.0, -2.0 / 3.0)), 1e-12);
}

TEST(MagneticBound, NonDecreasingInField) {
  for (double z : {1.0, 10.0, 80.0}) {
    double previous = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double b = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 0.04 * i) * z * z * z;
      const double v = magnetic_bound(homogeneous(z, b));
      EXPECT_GE(v, previous) << "Z=" << z << " B=" << b;
      previous = v;
    }
  }
}

TEST(MagneticBound, WeakFieldRatioApproachesCoefficient) {
  double previous = std::numeric_limits<double>::infinity();
  for (int e = 2; e <= 8; ++e) {
    const double z = std::pow(10.0, e);
    const double ratio = magnetic_bound(homogeneous(z, std::pow(z, 2.5))) / z;
    EXPECT_LT(ratio, previous) << "Z=" << z;
    previous = ratio;
  }
  EXPECT_NEAR(previous, 1.22, 0.02);
}

TEST(MagneticBound, GeneralNeedsEnergyGap) {
  BoundInputs in = nonrel(10);
  in.model = AtomModel::kMagneticGeneral;
  try {
    magnetic_bound(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingEnergyGap);
  }
  const double base = 1.22 * 10 + 3 * std::cbrt(10.0);
  EXPECT_NEAR(magnetic_bound(in, EnergyGap{50.0, 12.0}), base * (1 + 50.0 / (12.0 * 100.0 * 1.0)), 1e-12);
}

TEST(RelativisticBound, Examples) {
  BoundInputs in = nonrel(50);
  in.model = AtomModel::kRelativistic;
  in.c_kappa = 3.0;
  EXPECT_NEAR(relativistic_or_bosonic_bound(in), 1.22 * 50 + 3 * std::cbrt(50.0), 1e-12);
  EXPECT_NEAR(relativistic_or_bosonic_bound(in), 72.05, 1e-2);
  in.kappa = 0.7;
  try {
    relativistic_or_bosonic_bound(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kKappaDomain);
  }
  in.kappa = 0.5;
  in.fine_structure = 1.0 / 137.036;
  in.z = 80;
  EXPECT_THROW(relativistic_or_bosonic_bound(in), Error);
}

TEST(BosonicBound, WeakFieldLimit) {
  BoundInputs in = nonrel(1);
  in.model = AtomModel::kBosonicMagnetic;
  for (double z : {1e2, 1e4, 1e6, 1e8}) {
    in.z = z;
    in.b_field = 1e-6 * z * z;
    const double ratio = relativistic_or_bosonic_bound(in) / z;
    EXPECT_NEAR(ratio, (1 / 0.8218 + 3 * std::pow(z, -2.0 / 3.0)) * (2 + 4e-6), 1e-12 * ratio);
  }
  EXPECT_NEAR(relativistic_or_bosonic_bound(in) / in.z, 2.0 / 0.8218, 1e-3);
  EXPECT_LE(2.0 / 0.8218, 2.44);
}

TEST(ModelBound, DispatchesOnModel) {
  EXPECT_EQ(model_bound(nonrel(9)), bound_row(nonrel(9)).main);
  EXPECT_EQ(model_bound(homogeneous(9, 3)), magnetic_bound(homogeneous(9, 3)));
}

TEST(CubicH, SignPattern) {
  const double beta = 0.8218;
  EXPECT_NEAR(cubic_h(0.0, beta), 0.68, 1e-15);
  EXPECT_LT(cubic_h(std::pow(beta, -1.0 / 3.0), beta), 0.0);
  EXPECT_LT(cubic_h(std::cbrt(7.0 / 3.0), beta), 0.0);
}

TEST(VerifyLemma, Lemma3Passes) {
  const auto r = verify_lemma(LemmaId::kLemma3, LemmaGrid{});
  EXPECT_GE(r.points, 10000u);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.min_margin, 0.0);
  EXPECT_EQ(r.pass, r.min_margin > 0.0);
  EXPECT_FALSE(r.witness.empty());
  EXPECT_FALSE(r.grid_spec.empty());
}

TEST(VerifyLemma, Lemma3MarginMatchesDirectFormula) {
  LemmaGrid g;
  g.z_points = 7;
  g.ratio_points = 9;
  const auto r = verify_lemma(LemmaId::kLemma3, g);
  double z = 0.0;
  double n = 0.0;
  for (const auto& [k, v] : r.witness) {
    if (k == "Z") z = v;
    if (k == "N") n = v;
  }
  const double beta = 0.8218;
  const double b1 = 3.0 * std::cbrt(beta / 6.0);
  const double s = std::pow(n, -2.0 / 3.0);
  double rhs = n;
  if (beta - b1 * s > 0.0) rhs = std::min(rhs, z * (1 + 0.68 * s) / (beta - b1 * s));
  EXPECT_NEAR(r.min_margin, z / beta + 3 * std::cbrt(z) - rhs, 1e-12);
  EXPECT_EQ(r.points, 63u);
}

TEST(VerifyLemma, CubicSignsPassAcrossBetaRange) {
  LemmaGrid g;
  g.betas.clear();
  for (int i = 0; i < 10000; ++i) g.betas.push_back(0.8218 + (0.8705 - 0.8218) * i / 9999.0);
  const auto r = verify_lemma(LemmaId::kCubicSigns, g);
  EXPECT_EQ(r.points, 10000u);
  EXPECT_TRUE(r.pass);
}

// As stated with the Z^{-2/3} threshold the inequality fails at small Z; the
// verifier must report that rather than hide it.
TEST(VerifyLemma, Lemma4ReportsPrintedThresholdFailure) {
  const auto r = verify_lemma(LemmaId::kLemma4, LemmaGrid{});
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.min_margin, 0.0);
  double z = 0.0;
  double n = 0.0;
  for (const auto& [k, v] : r.witness) {
    if (k == "Z") z = v;
    if (k == "N") n = v;
  }
  EXPECT_EQ(n, std::floor(n));
  const double beta = 0.8218;
  const double direct =
      (beta - 3 * std::cbrt(beta / 6) * std::pow(n, -2.0 / 3.0)) * (1 / beta + 3 * std::pow(z, -2.0 / 3.0)) - 1;
  EXPECT_NEAR(r.min_margin, direct, 1e-12);
  EXPECT_GE(n, z / beta + 3 * std::pow(z, -2.0 / 3.0));
}

TEST(VerifyLemma, Lemma4CubeRootThresholdHoldsForLargerCharges) {
  LemmaGrid g;
  g.z_low = 1.0;
  g.lemma4_threshold = Lemma4Threshold::kCubeRoot;
  EXPECT_TRUE(verify_lemma(LemmaId::kLemma4, g).pass);
}

TEST(VerifyLemma, RealNFailuresAreOutOfHypothesis) {
  LemmaGrid g;
  g.allow_real_n = true;
  const auto with_real = verify_lemma(LemmaId::kLemma4, g);
  const auto integer_only = verify_lemma(LemmaId::kLemma4, LemmaGrid{});
  EXPECT_EQ(with_real.min_margin, integer_only.min_margin);
  EXPECT_GT(with_real.out_of_hypothesis_failures, 0u);
  EXPECT_EQ(integer_only.out_of_hypothesis_failures, 0u);
}

TEST(VerifyLemma, EmptyGrid) {
  LemmaGrid g;
  g.z_points = 0;
  EXPECT_THROW(verify_lemma(LemmaId::kLemma3, g), Error);
  g = {};
  g.betas.clear();
  EXPECT_THROW(verify_lemma(LemmaId::kCubicSigns, g), Error);
}

TEST(CrossoverZ, Examples) {
  EXPECT_EQ(crossover_z(1.22), 6);
  EXPECT_GT(1.22 * 5 + 3 * std::cbrt(5.0), 11.0);
  EXPECT_LE(crossover_z(1.0 / 0.8218), 6);
  EXPECT_THROW(crossover_z(2.5, 1000), Error);
}

}  // namespace
}  // namespace ionbound
