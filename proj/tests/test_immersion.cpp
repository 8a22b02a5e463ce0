#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "willmore/catalog.hpp"
#include "willmore/immersion.hpp"
#include "willmore/mobius.hpp"
#include "willmore/random.hpp"

using namespace willmore;

namespace {

constexpr double kPi = std::numbers::pi;

Vector random_point(Rng& rng, const ImmersionPatch& patch, double margin = 0.2) {
  Vector u;
  for (const Axis& ax : patch.domain) {
    const double pad = ax.periodic ? 0.0 : margin;
    u.push_back(rng.uniform(ax.lo + pad, ax.hi - pad));
  }
  return u;
}

void expect_invariants(const ShapeData& sd) {
  EXPECT_GE(sd.rho_sq, -1e-10);
  EXPECT_NEAR(sd.mean_norm, norm(sd.mean_vector), 1e-13);
  for (std::size_t i = 0; i < sd.tangent_frame.size(); ++i) {
    EXPECT_LE(std::abs(dot(sd.tangent_frame[i], sd.position)), 1e-9);
    for (std::size_t a = 0; a < sd.normal_frame.size(); ++a)
      EXPECT_LE(std::abs(dot(sd.tangent_frame[i], sd.normal_frame[a])), 1e-9);
  }
  for (std::size_t a = 0; a < sd.normal_frame.size(); ++a)
    EXPECT_LE(std::abs(dot(sd.normal_frame[a], sd.position)), 1e-9);
}

// Frame-invariant summary: H, S, rho^2 and the spectrum of sum_a (h^a)^2.
Vector invariants(const ShapeData& sd) {
  Vector v{sd.mean_norm, sd.S, sd.rho_sq};
  SymmetricMatrix q(sd.n);
  for (const auto& h : sd.second_fundamental.matrices()) q += SymmetricMatrix::symmetric_part(h * h);
  for (double ev : jacobi_eigen(q).values) v.push_back(ev);
  return v;
}

std::vector<CatalogEntry> sample_catalog() {
  return {willmore_torus(1, 2),      willmore_torus(1, 3),    willmore_torus(2, 4),
          clifford_torus(1, 3),      veronese(),              product_spheres({1, 1, 1}),
          product_spheres({1, 2, 2}), round_sphere(2, 1, 0.5), round_sphere(3, 2, 0.7)};
}

}  // namespace

TEST(ShapeData, CliffordTorus) {
  const CatalogEntry e = willmore_torus(1, 2);
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vector u = random_point(rng, e.patch);
    for (Derivatives d : {Derivatives::exact, Derivatives::finite_difference}) {
      const ShapeData sd = shape_data(e.patch, u, kDefaultStep, d);
      expect_invariants(sd);
      EXPECT_NEAR(sd.mean_norm, 0.0, 1e-7);
      EXPECT_NEAR(sd.S, 2.0, 5e-5);
      EXPECT_NEAR(sd.rho_sq, 2.0, 5e-5);
    }
  }
}

TEST(ShapeData, GreatSphereIsTotallyGeodesic) {
  const CatalogEntry e = round_sphere(2, 1, 1.0);
  const ShapeData sd = shape_data(e.patch, Vector{0.9, 2.1});
  expect_invariants(sd);
  EXPECT_LE(frob_norm_sq(sd.second_fundamental[0]), 1e-24);
  EXPECT_NEAR(sd.rho_sq, 0.0, 1e-12);
  EXPECT_NEAR(scalar_curvature(sd), 1.0, 1e-12);
}

TEST(ShapeData, VeroneseByFiniteDifferences) {
  const CatalogEntry e = veronese();
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const ShapeData sd =
        shape_data(e.patch, random_point(rng, e.patch), kDefaultStep, Derivatives::finite_difference);
    expect_invariants(sd);
    EXPECT_LE(sd.mean_norm, 1e-6);
    EXPECT_NEAR(sd.rho_sq, 4.0 / 3.0, 1e-6);
    EXPECT_NEAR(scalar_curvature(sd), 1.0 / 3.0, 1e-6);
  }
}

TEST(ShapeData, SmallSphereCurvature) {
  // S^2(1/2) in S^3: umbilic with H = sqrt(1 - r^2)/r
  const CatalogEntry e = round_sphere(2, 1, 0.5);
  const ShapeData sd = shape_data(e.patch, Vector{1.1, 4.0});
  EXPECT_NEAR(sd.mean_norm, std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(sd.rho_sq, 0.0, 1e-12);
}

TEST(ScalarCurvature, Examples) {
  EXPECT_NEAR(scalar_curvature(shape_data(willmore_torus(1, 2).patch, Vector{0.3, 1.2})), 0.0, 1e-12);
  EXPECT_NEAR(scalar_curvature(shape_data(veronese().patch, Vector{0.8, 5.0})), 1.0 / 3.0, 1e-12);
  const ShapeData circle = shape_data(round_sphere(1, 1, 0.5).patch, Vector{0.2});
  EXPECT_THROW(scalar_curvature(circle), DomainError);
}

TEST(ShapeData, FiniteDifferencesMatchExact) {
  Rng rng(3);
  for (const CatalogEntry& e : sample_catalog()) {
    for (int i = 0; i < 5; ++i) {
      const Vector u = random_point(rng, e.patch);
      const Vector a = invariants(shape_data(e.patch, u, 1e-4, Derivatives::exact));
      const Vector b = invariants(shape_data(e.patch, u, 1e-4, Derivatives::finite_difference));
      for (std::size_t k = 0; k < a.size(); ++k)
        EXPECT_NEAR(a[k], b[k], 5e-5) << e.patch.name << " invariant " << k;
    }
  }
}

TEST(ShapeData, AffineReparametrizationInvariance) {
  Rng rng(4);
  for (const CatalogEntry& e : sample_catalog()) {
    const std::size_t n = e.patch.n;
    // unit-determinant shear composed with a rotation
    Matrix m = Matrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = rng.uniform(-0.5, 0.5);
    m = random_orthogonal(rng, n) * m;
    const Vector u0 = random_point(rng, e.patch, 0.5);
    std::vector<Axis> box(n, Axis{-0.1, 0.1, false});
    const ImmersionPatch re = affine_reparametrize(e.patch, m, u0, box);
    const Vector w = random_vector(rng, n, -0.05, 0.05);
    Vector v = m * w;
    for (std::size_t a = 0; a < n; ++a) v[a] += u0[a];
    const double original = shape_data(e.patch, v).rho_sq;
    EXPECT_NEAR(shape_data(re, w).rho_sq, original, 1e-8) << e.patch.name;
    EXPECT_NEAR(shape_data(re, w, 1e-4, Derivatives::finite_difference).rho_sq, original, 5e-5);
  }
}

TEST(ShapeData, RichardsonOrderTwo) {
  for (const CatalogEntry& e : {willmore_torus(1, 2), veronese(), product_spheres({1, 1, 1})}) {
    Vector u;
    for (const Axis& ax : e.patch.domain) u.push_back(ax.lo + 0.41 * ax.length());
    const double h = 1e-2;
    double r[3];
    for (int k = 0; k < 3; ++k)
      r[k] = shape_data(e.patch, u, h / std::pow(2.0, k), Derivatives::finite_difference).rho_sq;
    const double ratio = (r[0] - r[1]) / (r[1] - r[2]);
    EXPECT_GE(ratio, 3.5) << e.patch.name;
    EXPECT_LE(ratio, 4.5) << e.patch.name;
  }
}

TEST(ShapeData, Preconditions) {
  const ImmersionPatch p = veronese().patch;
  EXPECT_THROW(shape_data(p, Vector{1.0, 1.0}, 1e-8), DomainError);
  EXPECT_THROW(shape_data(p, Vector{1.0, 1.0}, 2e-2), DomainError);
  EXPECT_THROW(shape_data(p, Vector{-0.1, 1.0}), DomainError);
  EXPECT_THROW(shape_data(p, Vector{1.0}), DimensionError);
  // periodic axes accept any value
  EXPECT_NO_THROW(shape_data(p, Vector{1.0, 9.0}));
}

TEST(ShapeData, RankDeficiencyThrows) {
  ImmersionPatch p = willmore_torus(1, 2).patch;
  p.exact_jet = nullptr;
  const PointMap inner = p.evaluator;
  p.evaluator = [inner](std::span<const double> u) { return inner(Vector{u[0], 0.3}); };
  try {
    shape_data(p, Vector{0.5, 0.5});
    FAIL() << "expected RankError";
  } catch (const RankError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(ShapeData, OffSphereThrows) {
  ImmersionPatch p = willmore_torus(1, 2).patch;
  p.exact_jet = nullptr;
  const PointMap inner = p.evaluator;
  p.evaluator = [inner](std::span<const double> u) {
    Vector x = inner(u);
    for (double& v : x) v *= 1.01;
    return x;
  };
  EXPECT_THROW(shape_data(p, Vector{0.5, 0.5}), DomainError);
}

TEST(LaplaceBeltrami, ConstantsAreHarmonic) {
  const CatalogEntry e = round_sphere(2, 1, 0.8);
  const QuadratureGrid g(e.patch.domain, 32);
  const GridFunction f = sample(g, [](const Vector&) { return 3.25; });
  for (double v : laplace_beltrami(e.patch, f, g).values) EXPECT_LE(std::abs(v), 1e-12);
}

TEST(LaplaceBeltrami, FlatTorusEigenfunction) {
  // circumferences 2 pi/sqrt 2: cos(u1) has wavenumber k = sqrt 2
  const CatalogEntry e = willmore_torus(1, 2);
  const QuadratureGrid g(e.patch.domain, 128);
  for (auto fn : {+[](const Vector& u) { return std::cos(u[0]); },
                  +[](const Vector& u) { return std::cos(u[1]); }}) {
    const GridFunction f = sample(g, fn);
    const GridFunction lf = laplace_beltrami(e.patch, f, g);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      err = std::max(err, std::abs(lf.values[k] + 2.0 * f.values[k]));
      scale = std::max(scale, std::abs(2.0 * f.values[k]));
    }
    EXPECT_LE(err / scale, 1e-3);
  }
}

TEST(LaplaceBeltrami, IntegrationByParts) {
  Rng rng(5);
  for (const CatalogEntry& e : {willmore_torus(1, 2), round_sphere(2, 1, 0.6)}) {
    const QuadratureGrid g(e.patch.domain, 48);
    const MetricField mf = metric_field(e.patch, g);
    for (int trial = 0; trial < 5; ++trial) {
      auto trig = [&rng]() {
        Vector c = random_vector(rng, 6);
        return [c](const Vector& u) {
          return c[0] * std::cos(u[0]) + c[1] * std::sin(2 * u[1]) + c[2] * std::cos(u[0] + u[1]) +
                 c[3] * std::sin(u[0] - 2 * u[1]) + c[4] * std::cos(3 * u[1]) + c[5];
        };
      };
      const GridFunction f = sample(g, trig());
      const GridFunction h = sample(g, trig());
      const GridFunction lf = laplace_beltrami(e.patch, f, g, mf);
      Vector prod(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) prod[k] = h.values[k] * lf.values[k];
      const double lhs = chart_integral(g, mf, prod);
      const double rhs = dirichlet_form(e.patch, g, mf, f.values, h.values);
      EXPECT_LE(std::abs(lhs + rhs), 1e-6 * (1.0 + std::abs(rhs))) << e.patch.name;
    }
  }
}

TEST(LaplaceBeltrami, Preconditions) {
  const CatalogEntry v = veronese();
  const QuadratureGrid gv(v.patch.domain, 16);
  EXPECT_THROW(laplace_beltrami(v.patch, sample(gv, [](const Vector&) { return 1.0; }), gv),
               DomainError);
  const CatalogEntry t = willmore_torus(1, 2);
  const QuadratureGrid small(t.patch.domain, 4);
  EXPECT_THROW(laplace_beltrami(t.patch, sample(small, [](const Vector&) { return 1.0; }), small),
               DomainError);
}

TEST(Mobius, IdentityMapIsIdentity) {
  const CatalogEntry e = veronese();
  const ImmersionPatch image = mobius_apply(MobiusMap::identity(5), e.patch);
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const Vector u = random_point(rng, e.patch);
    const Vector a = e.patch(u), b = image(u);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-15);
  }
}

TEST(Mobius, RotationIsAnIsometry) {
  const CatalogEntry e = product_spheres({1, 1, 1});
  Rng rng(7);
  const MobiusMap rot(random_orthogonal(rng, 6), 1.0, Vector(6, 0.0), Vector{0, 0, 0, 0, 0, 1});
  const ImmersionPatch image = mobius_apply(rot, e.patch);
  for (int i = 0; i < 10; ++i) {
    const Vector u = random_point(rng, e.patch);
    const ShapeData a = shape_data(e.patch, u), b = shape_data(image, u);
    EXPECT_NEAR(a.rho_sq, b.rho_sq, 1e-10);
    EXPECT_NEAR(a.mean_norm, b.mean_norm, 1e-10);
    for (std::size_t i2 = 0; i2 < 3; ++i2)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.metric(i2, j), b.metric(i2, j), 1e-12);
  }
}

TEST(Mobius, ImageStaysOnSphereAndConformal) {
  Rng rng(8);
  for (const CatalogEntry& e : {willmore_torus(1, 2), veronese(), willmore_torus(1, 3)}) {
    for (int t = 0; t < 5; ++t) {
      const auto [map, image] = random_mobius_image(rng, e.patch);
      for (int i = 0; i < 10; ++i) {
        const Vector u = random_point(rng, e.patch);
        EXPECT_NEAR(norm(image(u)), 1.0, 1e-10);
        const ShapeData a = shape_data(e.patch, u), b = shape_data(image, u);
        EXPECT_LE(conformal_defect(a.metric, b.metric), 1e-6);
        // rho^2 dv is pointwise invariant: rho'^2 = rho^2 / c
        const double c = b.metric.trace() / a.metric.trace();
        EXPECT_NEAR(b.rho_sq * c, a.rho_sq, 1e-9 * (1.0 + a.rho_sq));
      }
    }
  }
}

TEST(Mobius, PoleTooCloseThrows) {
  const CatalogEntry e = willmore_torus(1, 2);
  const Vector on_image = e.patch(Vector{0.0, 0.0});
  const MobiusMap map(Matrix::identity(4), 1.3, Vector(4, 0.0), on_image);
  EXPECT_THROW(mobius_apply(map, e.patch), DomainError);
  EXPECT_THROW(mobius_apply(MobiusMap::identity(5), e.patch), DimensionError);
}

TEST(Mobius, ValidatesParameters) {
  EXPECT_THROW(MobiusMap(Matrix::identity(3), 0.0, Vector(3, 0.0), Vector{0, 0, 1}), DomainError);
  Matrix bad = Matrix::identity(3);
  bad(0, 1) = 1e-6;
  EXPECT_THROW(MobiusMap(bad, 1.0, Vector(3, 0.0), Vector{0, 0, 1}), DomainError);
}
