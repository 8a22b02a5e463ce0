#pragma once

// One-parameter family S^m(r) x S^{n-m}(sqrt(1 - r^2)) ⊂ S^{n+1}: closed-form
// energy and location of its critical radius by bisection on the sign of a
// centered difference of W(r).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "willmore/catalog.hpp"
#include "willmore/error.hpp"

namespace willmore {

struct TorusFamily {
  std::size_t m = 1;
  std::size_t n = 2;
  double r_min = 0.05;
  double r_max = 0.95;

  TorusFamily(std::size_t m_, std::size_t n_, double lo = 0.05, double hi = 0.95)
      : m(m_), n(n_), r_min(lo), r_max(hi) {
    if (!(m >= 1 && m + 1 <= n)) throw DomainError("TorusFamily: need 1 <= m <= n-1");
    if (!(0.0 < r_min && r_min < r_max && r_max < 1.0))
      throw DomainError("TorusFamily: need 0 < r_min < r_max < 1");
  }

  bool admits(double r) const { return r > r_min && r < r_max; }
  /// Radius of W_{m,n-m}.
  double willmore_radius() const {
    return std::sqrt(static_cast<double>(n - m) / static_cast<double>(n));
  }
};

/// Vol(S^k) from Vol(S^0) = 2, Vol(S^1) = 2 pi, Vol(S^k) = 2 pi/(k-1) Vol(S^{k-2}).
inline double sphere_volume(std::size_t k) {
  double v = (k % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
  for (std::size_t j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2)
    v *= 2.0 * std::numbers::pi / static_cast<double>(j - 1);
  return v;
}

/// rho^2 of the family member: m(n-m)/(n r^2 s^2), s = sqrt(1 - r^2).
inline double family_rho_sq(const TorusFamily& fam, double r) {
  const double s2 = 1.0 - r * r;
  const double md = static_cast<double>(fam.m), nd = static_cast<double>(fam.n);
  return md * (nd - md) / (nd * r * r * s2);
}

inline double family_energy(const TorusFamily& fam, double r) {
  if (!fam.admits(r)) throw DomainError("family_energy: r outside the admissible interval");
  const double s = std::sqrt(1.0 - r * r);
  const double vol = sphere_volume(fam.m) * std::pow(r, static_cast<double>(fam.m)) *
                     sphere_volume(fam.n - fam.m) * std::pow(s, static_cast<double>(fam.n - fam.m));
  return std::pow(family_rho_sq(fam, r), 0.5 * static_cast<double>(fam.n)) * vol;
}

inline constexpr double kSlopeStep = 1e-6;

/// Centered difference of W at r with step 1e-6.
inline double family_slope(const TorusFamily& fam, double r, double step = kSlopeStep) {
  return (family_energy(fam, r + step) - family_energy(fam, r - step)) / (2.0 * step);
}

inline IsoparametricSpec family_spec(const TorusFamily& fam, double r) {
  return *sphere_product(fam.m, fam.n, r).spec;
}

struct CriticalRadius {
  double radius = 0.0;
  double slope = 0.0;              // dW/dr at the radius
  double second_difference = 0.0; // W'' estimate; its sign is reported, not asserted
  std::size_t sign_changes = 0;    // in the coarse scan
  std::size_t iterations = 0;
};

/// Brackets a sign change of dW/dr on a uniform scan of the admissible
/// interval and bisects it to width tol.
inline CriticalRadius find_critical_radius(const TorusFamily& fam, double tol = 1e-10,
                                           std::size_t scan = 1000) {
  if (!(tol >= 1e-12 && tol <= 1e-3)) throw DomainError("find_critical_radius: tol must lie in [1e-12, 1e-3]");
  const double margin = 2.0 * kSlopeStep;
  const double lo = fam.r_min + margin, hi = fam.r_max - margin;
  CriticalRadius out;
  double a = 0.0, b = 0.0, prev_r = lo, prev = family_slope(fam, lo);
  bool found = false;
  std::string signs;
  signs += prev < 0 ? '-' : '+';
  for (std::size_t i = 1; i <= scan; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(scan);
    const double d = family_slope(fam, r);
    if ((d < 0) != (prev < 0)) {
      ++out.sign_changes;
      if (!found) {
        a = prev_r;
        b = r;
        found = true;
      }
    }
    if (i % (scan / 10 == 0 ? 1 : scan / 10) == 0) signs += d < 0 ? '-' : '+';
    prev = d;
    prev_r = r;
  }
  if (!found)
    throw ConvergenceError("find_critical_radius: dW/dr keeps one sign on (" +
                           std::to_string(fam.r_min) + ", " + std::to_string(fam.r_max) +
                           "); sampled signs " + signs);
  const bool rising = family_slope(fam, a) < 0;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double d = family_slope(fam, mid);
    if ((d < 0) == rising)
      a = mid;
    else
      b = mid;
    ++out.iterations;
  }
  out.radius = 0.5 * (a + b);
  out.slope = family_slope(fam, out.radius);
  const double h = 1e-4;
  out.second_difference = (family_energy(fam, out.radius + h) - 2.0 * family_energy(fam, out.radius) +
                           family_energy(fam, out.radius - h)) /
                          (h * h);
  return out;
}

struct ProfileRow {
  double r, energy, slope;
};

/// (r, W(r), dW/dr) at `samples` evenly spaced interior radii.
inline std::vector<ProfileRow> family_profile(const TorusFamily& fam, std::size_t samples) {
  if (samples < 2) throw DomainError("family_profile: need at least two samples");
  std::vector<ProfileRow> rows;
  const double lo = fam.r_min + 2.0 * kSlopeStep, hi = fam.r_max - 2.0 * kSlopeStep;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    rows.push_back({r, family_energy(fam, r), family_slope(fam, r)});
  }
  return rows;
}

}  // namespace willmore
