#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "willmore/catalog.hpp"
#include "willmore/functional.hpp"
#include "willmore/mobius.hpp"
#include "willmore/random.hpp"

using namespace willmore;

namespace {

constexpr double kPi = std::numbers::pi;

double energy(const CatalogEntry& e, std::size_t res) {
  return willmore_energy(e.patch, QuadratureGrid(e.patch.domain, res));
}

IsoparametricSpec hypersurface(const Vector& k) {
  return IsoparametricSpec{"synthetic", ShapeFamily({SymmetricMatrix::diagonal(k)})};
}

}  // namespace

TEST(WillmoreEnergy, CliffordTorusIsFourPiSquared) {
  EXPECT_NEAR(energy(willmore_torus(1, 2), 128), 4.0 * kPi * kPi, 1e-6);
}

TEST(WillmoreEnergy, WillmoreTorusOneTwo) {
  // rho^3 = 3 sqrt 3, volume 2 pi sqrt(2/3) * 4 pi / 3
  const double closed = 3.0 * std::sqrt(3.0) * (8.0 * kPi * kPi / 3.0) * std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(closed, 8.0 * std::sqrt(2.0) * kPi * kPi, 1e-12);
  EXPECT_NEAR(energy(willmore_torus(1, 3), 32), closed, 1e-6);
}

TEST(WillmoreEnergy, VeroneseAndSpheres) {
  // area of S^2(sqrt 3) is 12 pi, halved by the double cover; rho^2 = 4/3
  EXPECT_NEAR(energy(veronese(), 64), 4.0 / 3.0 * 6.0 * kPi, 1e-9);
  EXPECT_NEAR(energy(round_sphere(2, 1, 0.3), 32), 0.0, 1e-12);
  EXPECT_NEAR(energy(round_sphere(3, 2, 0.7), 16), 0.0, 1e-12);
}

TEST(WillmoreEnergy, VolumesMatchClosedForm) {
  const CatalogEntry t = sphere_product(1, 3, 0.6);
  EXPECT_NEAR(volume(t.patch, QuadratureGrid(t.patch.domain, 16)),
              2.0 * kPi * 0.6 * 4.0 * kPi * 0.64, 1e-10);
  const CatalogEntry v = veronese();
  EXPECT_NEAR(volume(v.patch, QuadratureGrid(v.patch.domain, 32)), 6.0 * kPi, 1e-10);
}

TEST(WillmoreEnergy, DoublyPeriodicChartIsSecondOrder) {
  // the density |sin theta| has kinks on the full-period polar axis
  const CatalogEntry s = round_sphere(2, 1, 0.5);
  const double exact = 4.0 * kPi * 0.25;
  double err[3];
  for (int i = 0; i < 3; ++i)
    err[i] = volume(s.patch, QuadratureGrid(s.patch.domain, 32u << i)) - exact;
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.5);
  EXPECT_LE(std::abs(err[2]), 1e-3 * exact);
}

TEST(WillmoreEnergy, QuadratureConverges) {
  for (const CatalogEntry& e : {willmore_torus(1, 2), veronese(), product_spheres({1, 1}),
                                round_sphere(2, 1, 0.4), sphere_product(1, 2, 0.6)}) {
    const double w1 = energy(e, 64), w2 = energy(e, 128);
    EXPECT_LE(std::abs(w1 - w2), 1e-6 * std::max(w2, 1.0)) << e.patch.name;
  }
}

TEST(WillmoreEnergy, GridMismatchThrows) {
  const CatalogEntry t = willmore_torus(1, 2);
  const QuadratureGrid wrong(veronese().patch.domain, 8);
  EXPECT_THROW(willmore_energy(t.patch, wrong), DomainError);
}

TEST(WillmoreEnergy, ConformallyInvariant) {
  Rng rng(31);
  for (const CatalogEntry& e : {willmore_torus(1, 2), veronese()}) {
    const QuadratureGrid g(e.patch.domain, 96);
    const double w = willmore_energy(e.patch, g);
    for (int t = 0; t < 3; ++t) {
      const auto [map, image] = random_mobius_image(rng, e.patch);
      EXPECT_LE(std::abs(willmore_energy(image, g) - w), 1e-3 * w) << e.patch.name;
    }
  }
}

TEST(ELResidual, WillmoreToriVanish) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const ELResidual r = el_residual_isoparametric(*willmore_torus(m, n).spec);
      EXPECT_LE(r.norm, 1e-12) << m << "," << n;
      EXPECT_EQ(r.values.size(), 1u);
      EXPECT_NEAR(r.scale, -std::pow(static_cast<double>(n), 0.5 * (static_cast<double>(n) - 2.0)),
                  1e-12);
    }
}

TEST(ELResidual, UnbalancedCliffordToriDoNot) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const ELResidual r = el_residual_isoparametric(*clifford_torus(m, n).spec);
      if (n == 2 * m)
        EXPECT_LE(r.norm, 1e-12);
      else
        EXPECT_GE(r.norm, 0.05) << m << "," << n;
    }
}

TEST(ELResidual, CliffordOneThreeValue) {
  // minimal, so the residual is -sum k^3 = -(2 sqrt 2 - 2 / (2 sqrt 2))
  const ELResidual r = el_residual_isoparametric(*clifford_torus(1, 3).spec);
  const double k1 = std::sqrt(2.0), k2 = -std::sqrt(0.5);
  EXPECT_NEAR(r.values[0], -(k1 * k1 * k1 + 2.0 * k2 * k2 * k2), 1e-12);
  EXPECT_NEAR(r.values[0], -2.1213203435596424, 1e-12);
}

TEST(ELResidual, NormIsEuclidean) {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    std::vector<SymmetricMatrix> hs;
    for (int a = 0; a < 3; ++a) hs.push_back(random_symmetric(rng, 4));
    const ELResidual r = el_residual_isoparametric({"random", ShapeFamily(hs)});
    double s = 0.0;
    for (double v : r.values) s += v * v;
    EXPECT_NEAR(r.norm, std::sqrt(s), 1e-14);
  }
}

TEST(ELResidual, MatchesHypersurfaceFormula) {
  // p = 1: bracket = 2 S H - sum k^3 - n H^3
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    const Vector k = random_vector(rng, 5, -2.0, 2.0);
    double s = 0.0, h = 0.0, k3 = 0.0;
    for (double v : k) {
      s += v * v;
      h += v / 5.0;
      k3 += v * v * v;
    }
    EXPECT_NEAR(el_residual_isoparametric(hypersurface(k)).values[0], 2 * s * h - k3 - 5 * h * h * h,
                1e-12);
  }
}

TEST(ELResidual, UmbilicGuardForOddDimension) {
  EXPECT_THROW(el_residual_isoparametric(*round_sphere(3, 1, 0.5).spec), UmbilicPointError);
  EXPECT_THROW(el_residual_isoparametric(*round_sphere(1, 2, 0.5).spec), UmbilicPointError);
  EXPECT_LE(el_residual_isoparametric(*round_sphere(2, 1, 0.5).spec).norm, 1e-12);
  EXPECT_LE(el_residual_isoparametric(*round_sphere(4, 2, 0.3).spec).norm, 1e-11);
}

TEST(SurfaceResidual, WillmoreExamplesVanish) {
  for (const CatalogEntry& e : {willmore_torus(1, 2), round_sphere(2, 1, 0.8), round_sphere(2, 1, 0.5)}) {
    const SurfaceResidual r = el_residual_surface(e.patch, QuadratureGrid(e.patch.domain, 64));
    EXPECT_LE(r.max_abs, 1e-6) << e.patch.name;
  }
}

TEST(SurfaceResidual, NonWillmoreTorus) {
  const double r = 0.6, s = 0.8;
  const double k1 = s / r, k2 = -r / s, h = 0.5 * (k1 + k2);
  const double rho_sq = k1 * k1 + k2 * k2 - 2.0 * h * h;
  const CatalogEntry e = sphere_product(1, 2, r);
  const SurfaceResidual res = el_residual_surface(e.patch, QuadratureGrid(e.patch.domain, 64));
  EXPECT_NEAR(res.max_abs, std::abs(h) * rho_sq, 1e-4);
  EXPECT_GT(res.max_abs, 0.1);
  for (double v : res.mean_curvature.values) EXPECT_NEAR(v, h, 1e-12);
}

TEST(SurfaceResidual, Preconditions) {
  const CatalogEntry v = veronese();
  EXPECT_THROW(el_residual_surface(v.patch, QuadratureGrid(v.patch.domain, 16)), DomainError);
  const CatalogEntry w = willmore_torus(1, 3);
  EXPECT_THROW(el_residual_surface(w.patch, QuadratureGrid(w.patch.domain, 16)), DomainError);
}

TEST(Pinching, Constants) {
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(pinching_constant(n, 1, PinchingMode::simons), static_cast<double>(n));
    EXPECT_EQ(pinching_constant(n, 4, PinchingMode::li), 2.0 * static_cast<double>(n) / 3.0);
  }
  EXPECT_NEAR(pinching_constant(2, 2, PinchingMode::simons), 4.0 / 3.0, 1e-15);
  EXPECT_THROW(pinching_constant(0, 1, PinchingMode::simons), DomainError);
}

TEST(Pinching, ThresholdConsistency) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const double c = pinching_constant(n, 1, PinchingMode::simons);
      EXPECT_NEAR(willmore_torus(m, n).spec->rho_sq(), c, 1e-12);
      EXPECT_NEAR(clifford_torus(m, n).spec->rho_sq(), c, 1e-12);
    }
}

TEST(Pinching, IntegralsAtAndAboveThreshold) {
  for (const CatalogEntry& e : {willmore_torus(1, 2), willmore_torus(1, 3), willmore_torus(2, 3), veronese()}) {
    const double v = pinching_integral(e.patch, QuadratureGrid(e.patch.domain, 24), PinchingMode::simons);
    EXPECT_NEAR(v, 0.0, 1e-8) << e.patch.name;
  }
  const CatalogEntry p = product_spheres({1, 1, 1});
  const double vol = std::pow(2.0 * kPi / std::sqrt(3.0), 3.0);
  const double expected = std::pow(6.0, 1.5) * (2.0 - 6.0) * vol;
  const double got = pinching_integral(p.patch, QuadratureGrid(p.patch.domain, 16), PinchingMode::simons);
  EXPECT_NEAR(got, expected, 1e-9 * std::abs(expected));
  EXPECT_LT(got, 0.0);
  // li constant 2n/3 = 2 is also exceeded
  EXPECT_LT(pinching_integral(p.patch, QuadratureGrid(p.patch.domain, 16), PinchingMode::li), 0.0);
}

TEST(Classifier, Archetypes) {
  EXPECT_EQ(classify_willmore(*round_sphere(2, 1, 0.5).spec, 0.0).kind, WillmoreClass::TotallyUmbilic);
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t m = 1; m < n; ++m) {
      const IsoparametricSpec s = *willmore_torus(m, n).spec;
      const Classification c = classify_willmore(s, s.rho_sq());
      EXPECT_EQ(c.kind, WillmoreClass::WillmoreTorus);
      EXPECT_EQ(c.m, m);
      EXPECT_EQ(c.mirror, n - m);
    }
  const IsoparametricSpec v = *veronese().spec;
  const Classification cv = classify_willmore(v, 4.0 / 3.0);
  EXPECT_EQ(cv.kind, WillmoreClass::Veronese);
  EXPECT_NEAR(cv.threshold, 4.0 / 3.0, 1e-15);
}

TEST(Classifier, FlippedCoNormal) {
  const IsoparametricSpec s = *willmore_torus(1, 3).spec;
  const IsoparametricSpec flipped{"flipped", ShapeFamily({-1.0 * s.shape[0]})};
  const Classification c = classify_willmore(flipped, 3.0);
  EXPECT_EQ(c.kind, WillmoreClass::WillmoreTorus);
  EXPECT_EQ(c.m, 2u);
  EXPECT_EQ(c.mirror, 1u);
}

TEST(Classifier, VeroneseInAnyFrame) {
  Rng rng(34);
  const IsoparametricSpec v = *veronese().spec;
  for (int t = 0; t < 20; ++t) {
    const Matrix q = random_orthogonal(rng, 2), r = random_orthogonal(rng, 2);
    std::vector<SymmetricMatrix> hs(2, SymmetricMatrix(2));
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) hs[a] += r(a, b) * conjugate(v.shape[b], q);
    const IsoparametricSpec rotated{"rotated", ShapeFamily(hs)};
    EXPECT_EQ(classify_willmore(rotated, rotated.rho_sq()).kind, WillmoreClass::Veronese);
  }
}

TEST(Classifier, OtherOutcomes) {
  // rho^2 = n/2 for p = 1: k = (1, -1, 0, 0) gives S = 2, H = 0
  const IsoparametricSpec inside = hypersurface({1.0, -1.0, 0.0, 0.0});
  EXPECT_EQ(classify_willmore(inside, inside.rho_sq()).kind, WillmoreClass::OutsidePinchingRange);
  const IsoparametricSpec c13 = *clifford_torus(1, 3).spec;
  EXPECT_EQ(classify_willmore(c13, c13.rho_sq()).kind, WillmoreClass::AtThresholdUnrecognized);
  const IsoparametricSpec p111 = *product_spheres({1, 1, 1}).spec;
  EXPECT_EQ(classify_willmore(p111, p111.rho_sq()).kind, WillmoreClass::AboveThreshold);
  // unequal Veronese-like scales sit at the threshold but are not Veronese
  const double a = 1.0 / std::sqrt(3.0);
  const IsoparametricSpec skew{"skew", ShapeFamily({std::sqrt(1.5) * a * canonical_a(2),
                                                    std::sqrt(0.5) * a * canonical_b(2)})};
  EXPECT_NEAR(skew.rho_sq(), 4.0 / 3.0, 1e-14);
  EXPECT_EQ(classify_willmore(skew, skew.rho_sq()).kind, WillmoreClass::AtThresholdUnrecognized);
  EXPECT_THROW(classify_willmore(c13, 3.0, 0.0), DomainError);
  EXPECT_THROW(classify_willmore(c13, -1.0), DomainError);
}

TEST(Classifier, FiniteDifferenceTolerance) {
  const CatalogEntry e = willmore_torus(2, 4);
  const ShapeData sd = shape_data(e.patch, Vector{0.7, 1.3, 2.9, 0.4}, 1e-4, Derivatives::finite_difference);
  const IsoparametricSpec measured{"fd", sd.second_fundamental};
  const Classification c = classify_willmore(measured, sd.rho_sq, kFdClassTol);
  EXPECT_EQ(c.kind, WillmoreClass::WillmoreTorus);
  EXPECT_EQ(c.m + c.mirror, 4u);
}
