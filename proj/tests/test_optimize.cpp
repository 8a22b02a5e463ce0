#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "willmore/functional.hpp"
#include "willmore/optimize.hpp"

using namespace willmore;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(SphereVolume, KnownValues) {
  EXPECT_EQ(sphere_volume(0), 2.0);
  EXPECT_EQ(sphere_volume(1), 2.0 * kPi);
  EXPECT_NEAR(sphere_volume(2), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_volume(3), 2.0 * kPi * kPi, 1e-14);
  EXPECT_NEAR(sphere_volume(4), 8.0 * kPi * kPi / 3.0, 1e-13);
  // Vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  for (std::size_t k = 0; k <= 10; ++k) {
    const double h = 0.5 * static_cast<double>(k + 1);
    EXPECT_NEAR(sphere_volume(k), 2.0 * std::pow(kPi, h) / std::tgamma(h), 1e-12) << k;
  }
}

TEST(FamilyEnergy, ClosedFormExamples) {
  EXPECT_NEAR(family_energy(TorusFamily(1, 2), std::sqrt(0.5)), 4.0 * kPi * kPi, 1e-12);
  EXPECT_NEAR(family_energy(TorusFamily(1, 3), std::sqrt(2.0 / 3.0)), 8.0 * std::sqrt(2.0) * kPi * kPi,
              1e-11);
  // balanced symmetric point: H = 0, rho^2 = n
  const TorusFamily f(2, 4);
  EXPECT_NEAR(family_rho_sq(f, std::sqrt(0.5)), 4.0, 1e-14);
  EXPECT_NEAR(family_energy(f, std::sqrt(0.5)),
              16.0 * sphere_volume(2) * 0.5 * sphere_volume(2) * 0.5, 1e-10);
}

TEST(FamilyEnergy, MatchesSpecRhoSquared) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const TorusFamily f(m, n);
      for (double r : {0.2, 0.45, 0.7, 0.9})
        EXPECT_NEAR(family_spec(f, r).rho_sq(), family_rho_sq(f, r), 1e-10 * family_rho_sq(f, r));
    }
}

TEST(FamilyEnergy, Preconditions) {
  const TorusFamily f(1, 3);
  EXPECT_THROW(family_energy(f, 0.01), DomainError);
  EXPECT_THROW(family_energy(f, 0.97), DomainError);
  EXPECT_THROW(TorusFamily(0, 3), DomainError);
  EXPECT_THROW(TorusFamily(1, 3, 0.5, 0.4), DomainError);
  EXPECT_THROW(TorusFamily(1, 3, 0.0, 0.5), DomainError);
}

TEST(CriticalRadius, ReproducesWillmoreTori) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const TorusFamily f(m, n);
      const CriticalRadius c = find_critical_radius(f, 1e-10);
      EXPECT_NEAR(c.radius, f.willmore_radius(), 1e-6) << m << "," << n;
      EXPECT_EQ(c.sign_changes, 1u) << m << "," << n;
      EXPECT_LE(std::abs(c.slope), 1e-3 * family_energy(f, c.radius));
      const ELResidual el = el_residual_isoparametric(family_spec(f, c.radius));
      EXPECT_LE(el.norm, 1e-6) << m << "," << n;
    }
}

TEST(CriticalRadius, ListedPairs) {
  EXPECT_NEAR(find_critical_radius(TorusFamily(1, 2)).radius, 0.707107, 1e-6);
  EXPECT_NEAR(find_critical_radius(TorusFamily(1, 3)).radius, 0.816497, 1e-6);
  EXPECT_NEAR(find_critical_radius(TorusFamily(2, 3)).radius, 0.577350, 1e-6);
}

TEST(CriticalRadius, FactorSwapSymmetry) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const double a = find_critical_radius(TorusFamily(m, n), 1e-12).radius;
      const double b = find_critical_radius(TorusFamily(n - m, n), 1e-12).radius;
      EXPECT_NEAR(a * a + b * b, 1.0, 1e-10) << m << "," << n;
    }
}

TEST(CriticalRadius, SingleSignChangeOnDenseSample) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const TorusFamily f(m, n);
      std::size_t changes = 0;
      double prev = family_slope(f, 0.05 + 1e-5);
      for (int i = 1; i <= 1000; ++i) {
        const double r = 0.05 + 1e-5 + (0.9 - 2e-5) * i / 1000.0;
        const double d = family_slope(f, r);
        if ((d < 0) != (prev < 0)) ++changes;
        prev = d;
      }
      EXPECT_EQ(changes, 1u) << m << "," << n;
    }
}

TEST(CriticalRadius, NoSignChangeReportsSigns) {
  // (1,2) has its critical radius at 0.707, outside (0.05, 0.5)
  try {
    find_critical_radius(TorusFamily(1, 2, 0.05, 0.5));
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("sampled signs -"), std::string::npos) << e.what();
  }
  EXPECT_THROW(find_critical_radius(TorusFamily(1, 2), 1e-13), DomainError);
  EXPECT_THROW(find_critical_radius(TorusFamily(1, 2), 1e-2), DomainError);
}

TEST(FamilyProfile, RowsAreConsistent) {
  const TorusFamily f(1, 3);
  const auto rows = family_profile(f, 50);
  ASSERT_EQ(rows.size(), 50u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].r, rows[i - 1].r);
  for (const auto& row : rows) {
    EXPECT_TRUE(f.admits(row.r));
    EXPECT_EQ(row.energy, family_energy(f, row.r));
  }
  EXPECT_THROW(family_profile(f, 1), DomainError);
}
