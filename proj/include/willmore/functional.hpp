#pragma once

// Willmore energy W = ∫ rho^n dv, Euler-Lagrange residuals (constant shape
// operators in any codimension; surfaces in S^3 on a grid), the pinching
// integrals ∫ rho^n (C - rho^2) dv and the classification at the threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "willmore/catalog.hpp"
#include "willmore/error.hpp"
#include "willmore/immersion.hpp"
#include "willmore/linalg.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/tensor.hpp"

namespace willmore {

inline constexpr double kUmbilicFloor = 1e-10;

namespace detail {

inline void check_integrable(const ImmersionPatch& patch, const QuadratureGrid& grid) {
  if (!grid.matches(patch.domain))
    throw DomainError("grid does not match the domain of patch '" + patch.name + "'");
}

inline double rho_power(double rho_sq, std::size_t n) {
  return std::pow(std::max(rho_sq, 0.0), 0.5 * static_cast<double>(n));
}

}  // namespace detail

/// (1/cover) sum_nodes w sqrt(det g) f(shape data).
template <class F>
double integrate_shape(const ImmersionPatch& patch, const QuadratureGrid& grid, F&& f,
                       double step = kDefaultStep, Derivatives mode = Derivatives::automatic) {
  detail::check_integrable(patch, grid);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vector u = grid.node(k);
    const ShapeData sd = shape_data(patch, u, step, mode);
    sum += grid.weight(k) * std::sqrt(determinant(sd.metric.to_matrix())) * f(sd);
  }
  return sum / static_cast<double>(patch.cover_multiplicity);
}

inline double volume(const ImmersionPatch& patch, const QuadratureGrid& grid,
                     double step = kDefaultStep, Derivatives mode = Derivatives::automatic) {
  return integrate_shape(patch, grid, [](const ShapeData&) { return 1.0; }, step, mode);
}

/// W = ∫ rho^n dv over the image (chart integral divided by the cover multiplicity).
inline double willmore_energy(const ImmersionPatch& patch, const QuadratureGrid& grid,
                              double step = kDefaultStep,
                              Derivatives mode = Derivatives::automatic) {
  return integrate_shape(
      patch, grid, [](const ShapeData& sd) { return detail::rho_power(sd.rho_sq, sd.n); }, step,
      mode);
}

struct ELResidual {
  Vector values;       // one per normal direction
  double norm = 0.0;
  double scale = 0.0;  // the prefactor -rho^{n-2} of the full equation
};

/// Euler-Lagrange bracket for constant shape operators:
/// S H^a + sum_b H^b tr(h^b h^a) - sum_b tr(h^a h^b h^b) - n |H|^2 H^a.
inline ELResidual el_residual_isoparametric(const IsoparametricSpec& spec) {
  const ShapeFamily& fam = spec.shape;
  const std::size_t n = fam.n(), p = fam.p();
  const double rho_sq = spec.rho_sq();
  if (n % 2 == 1 && rho_sq < kUmbilicFloor)
    throw UmbilicPointError("el_residual_isoparametric: rho^2 = " + std::to_string(rho_sq) +
                            " at an umbilic configuration with odd n; the equation assumes "
                            "rho > 0 there");
  const double S = fam.norm_sq(), h2 = fam.mean_norm_sq();
  const Vector& mean = fam.mean();
  ELResidual out;
  out.values.assign(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    double r = S * mean[a] - static_cast<double>(n) * h2 * mean[a];
    for (std::size_t b = 0; b < p; ++b) {
      r += mean[b] * frob_inner(fam[b], fam[a]);
      const Matrix hbb = fam[b] * fam[b];
      const Matrix ha = fam[a].to_matrix();
      double tr = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr += ha(i, j) * hbb(j, i);
      r -= tr;
    }
    out.values[a] = r;
  }
  out.norm = norm(out.values);
  out.scale = -std::pow(std::max(rho_sq, 0.0), 0.5 * (static_cast<double>(n) - 2.0));
  return out;
}

struct SurfaceResidual {
  GridFunction values;  // Delta H + H (S - 2H^2) at the nodes
  GridFunction mean_curvature;
  double max_abs = 0.0;
};

/// Willmore surface equation for n = 2, p = 1 on a periodic grid, with the
/// signed mean curvature of the oriented unit normal.
inline SurfaceResidual el_residual_surface(const ImmersionPatch& patch, const QuadratureGrid& grid,
                                           double step = kDefaultStep,
                                           Derivatives mode = Derivatives::automatic) {
  if (patch.n != 2) throw DomainError("el_residual_surface: needs a surface (n = 2)");
  if (patch.codim() != 1)
    throw DomainError("el_residual_surface: needs codimension 1 (normal transport not modelled)");
  detail::check_periodic_grid(patch, grid);
  GridFunction h{grid.shape(), Vector(grid.size())};
  Vector lower(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ShapeData sd = shape_data(patch, grid.node(k), step, mode);
    const double hk = sd.mean_vector[0];
    h.values[k] = hk;
    lower[k] = hk * (sd.S - 2.0 * hk * hk);
  }
  SurfaceResidual out{laplace_beltrami(patch, h, grid, metric_field(patch, grid, step, mode)), h,
                      0.0};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.values.values[k] += lower[k];
    out.max_abs = std::max(out.max_abs, std::abs(out.values.values[k]));
  }
  return out;
}

enum class PinchingMode { simons, li };

inline std::string to_string(PinchingMode m) { return m == PinchingMode::simons ? "simons" : "li"; }

/// C = n/(2 - 1/p) (simons) or 2n/3 (li).
inline double pinching_constant(std::size_t n, std::size_t p, PinchingMode mode) {
  if (n < 1 || p < 1) throw DomainError("pinching_constant: need n, p >= 1");
  const double nd = static_cast<double>(n);
  return mode == PinchingMode::simons ? nd / (2.0 - 1.0 / static_cast<double>(p)) : 2.0 * nd / 3.0;
}

/// ∫ rho^n (C - rho^2) dv.
inline double pinching_integral(const ImmersionPatch& patch, const QuadratureGrid& grid,
                                PinchingMode mode, double step = kDefaultStep,
                                Derivatives deriv = Derivatives::automatic) {
  const double c = pinching_constant(patch.n, patch.codim(), mode);
  return integrate_shape(
      patch, grid,
      [c](const ShapeData& sd) { return detail::rho_power(sd.rho_sq, sd.n) * (c - sd.rho_sq); },
      step, deriv);
}

enum class WillmoreClass {
  TotallyUmbilic,
  WillmoreTorus,
  Veronese,
  AtThresholdUnrecognized,
  OutsidePinchingRange,
  AboveThreshold,
};

inline std::string to_string(WillmoreClass c) {
  switch (c) {
    case WillmoreClass::TotallyUmbilic: return "TotallyUmbilic";
    case WillmoreClass::WillmoreTorus: return "WillmoreTorus";
    case WillmoreClass::Veronese: return "Veronese";
    case WillmoreClass::AtThresholdUnrecognized: return "AtThresholdUnrecognized";
    case WillmoreClass::OutsidePinchingRange: return "OutsidePinchingRange";
    case WillmoreClass::AboveThreshold: return "AboveThreshold";
  }
  return "?";
}

struct Classification {
  WillmoreClass kind;
  double threshold = 0.0;  // n/(2 - 1/p)
  std::size_t m = 0;       // WillmoreTorus: S^m factor; mirror = n - m
  std::size_t mirror = 0;
};

inline constexpr double kExactClassTol = 1e-8;
inline constexpr double kFdClassTol = 1e-4;

namespace detail {

// Principal curvatures of W_{m,n-m}, descending.
inline Vector willmore_torus_pattern(std::size_t m, std::size_t n) {
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  Vector k(m, std::sqrt(md / (nd - md)));
  k.insert(k.end(), n - m, -std::sqrt((nd - md) / md));
  return k;
}

inline bool matches_pattern(const Vector& values, const Vector& pattern, double tol) {
  if (values.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i] - pattern[i]) > tol) return false;
  return true;
}

inline bool is_veronese_family(const ShapeFamily& fam, double tol) {
  if (fam.n() != 2 || fam.p() != 2) return false;
  if (std::sqrt(fam.mean_norm_sq()) > tol) return false;
  const TracelessSplit split = traceless_part(fam);
  // normal frame diagonalizing sigma~
  const EigenDecomposition eig = jacobi_eigen(split.sigma.sigma);
  SymmetricMatrix a(2), b(2);
  for (std::size_t beta = 0; beta < 2; ++beta) {
    a += eig.vectors(beta, 0) * split.trace_free[beta];
    b += eig.vectors(beta, 1) * split.trace_free[beta];
  }
  if (frob_norm_sq(a) <= tol * tol || frob_norm_sq(b) <= tol * tol) return false;
  const auto witness = equality_witness(a, b, tol);
  if (!witness) return false;
  const double l2 = witness->lambda * witness->lambda, m2 = witness->mu * witness->mu;
  return std::abs(l2 - m2) <= tol * std::max(1.0, l2 + m2);
}

}  // namespace detail

/// Equality-case classification of a constant-rho^2 Willmore candidate
/// against the threshold n/(2 - 1/p).
inline Classification classify_willmore(const IsoparametricSpec& spec, double rho_sq,
                                        double tol = kExactClassTol) {
  if (!(tol > 0.0)) throw DomainError("classify_willmore: tolerance must be positive");
  if (rho_sq < -tol) throw DomainError("classify_willmore: rho^2 must be nonnegative");
  const std::size_t n = spec.n(), p = spec.p();
  Classification out{WillmoreClass::AtThresholdUnrecognized,
                     pinching_constant(n, p, PinchingMode::simons)};
  if (rho_sq <= tol) {
    out.kind = WillmoreClass::TotallyUmbilic;
    return out;
  }
  if (rho_sq < out.threshold - tol) {
    out.kind = WillmoreClass::OutsidePinchingRange;
    return out;
  }
  if (rho_sq > out.threshold + tol) {
    out.kind = WillmoreClass::AboveThreshold;
    return out;
  }
  if (p == 1 && n >= 2) {
    // a co-normal flip maps the pattern of m onto that of n - m, so the
    // descending comparison covers both orientations
    const Vector k = jacobi_eigen(spec.shape[0]).values;
    for (std::size_t m = 1; m < n; ++m)
      if (detail::matches_pattern(k, detail::willmore_torus_pattern(m, n), tol)) {
        out = {WillmoreClass::WillmoreTorus, out.threshold, m, n - m};
        return out;
      }
  }
  if (detail::is_veronese_family(spec.shape, tol)) out.kind = WillmoreClass::Veronese;
  return out;
}

}  // namespace willmore
