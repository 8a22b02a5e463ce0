#pragma once

// Tensor-product quadrature over a parameter box. Periodic axes use the
// trapezoidal rule on nodes shifted by half a cell (spectrally accurate for
// smooth periodic integrands, and never lands on a chart's polar seam).
// Non-periodic axes use Gauss-Legendre nodes, which stay off the endpoints.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "willmore/error.hpp"
#include "willmore/linalg.hpp"

namespace willmore {

/// Closed parameter interval, optionally periodic (hi identified with lo).
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  double length() const { return hi - lo; }
  friend bool operator==(const Axis&, const Axis&) = default;
};

struct GaussRule {
  Vector nodes;  // on [-1, 1], ascending
  Vector weights;
};

/// Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  GaussRule rule{Vector(n), Vector(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct GridAxis {
  Axis axis;
  Vector nodes;
  Vector weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double spacing() const { return axis.length() / static_cast<double>(nodes.size()); }
};

/// Tensor-product grid; node multi-indices are flattened row-major (last
/// axis fastest).
class QuadratureGrid {
 public:
  QuadratureGrid(const std::vector<Axis>& axes, const std::vector<std::size_t>& counts) {
    if (axes.size() != counts.size()) throw DimensionError("QuadratureGrid: axes/counts mismatch");
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const Axis& ax = axes[d];
      const std::size_t m = counts[d];
      if (m == 0) throw DomainError("QuadratureGrid: zero nodes on axis " + std::to_string(d));
      if (!(ax.hi > ax.lo)) throw DomainError("QuadratureGrid: empty interval");
      GridAxis g{ax, Vector(m), Vector(m)};
      if (ax.periodic) {
        const double h = ax.length() / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k) {
          g.nodes[k] = ax.lo + (static_cast<double>(k) + 0.5) * h;
          g.weights[k] = h;
        }
      } else {
        const GaussRule rule = gauss_legendre(m);
        const double half = 0.5 * ax.length(), mid = 0.5 * (ax.lo + ax.hi);
        for (std::size_t k = 0; k < m; ++k) {
          g.nodes[k] = mid + half * rule.nodes[k];
          g.weights[k] = half * rule.weights[k];
        }
      }
      axes_.push_back(std::move(g));
    }
  }

  /// Same node count on every axis.
  QuadratureGrid(const std::vector<Axis>& axes, std::size_t count)
      : QuadratureGrid(axes, std::vector<std::size_t>(axes.size(), count)) {}

  std::size_t dim() const noexcept { return axes_.size(); }
  const GridAxis& axis(std::size_t d) const { return axes_[d]; }
  const std::vector<GridAxis>& axes() const noexcept { return axes_; }

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes_) s.push_back(a.size());
    return s;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes_) s *= a.size();
    return s;
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t d = axes_.size(); d-- > 0;) {
      idx[d] = flat % axes_[d].size();
      flat /= axes_[d].size();
    }
    return idx;
  }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes_.size(); ++d) flat = flat * axes_[d].size() + idx[d];
    return flat;
  }

  /// Flat index of the neighbour `offset` steps along periodic axis d.
  std::size_t shifted(std::size_t flat, std::size_t d, long offset) const {
    auto idx = multi_index(flat);
    const long m = static_cast<long>(axes_[d].size());
    idx[d] = static_cast<std::size_t>(((static_cast<long>(idx[d]) + offset) % m + m) % m);
    return flat_index(idx);
  }

  Vector node(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Vector u(axes_.size());
    for (std::size_t d = 0; d < axes_.size(); ++d) u[d] = axes_[d].nodes[idx[d]];
    return u;
  }

  double weight(std::size_t flat) const {
    const auto idx = multi_index(flat);
    double w = 1.0;
    for (std::size_t d = 0; d < axes_.size(); ++d) w *= axes_[d].weights[idx[d]];
    return w;
  }

  double volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.axis.length();
    return v;
  }

  bool matches(const std::vector<Axis>& domain) const {
    if (domain.size() != axes_.size()) return false;
    for (std::size_t d = 0; d < domain.size(); ++d)
      if (!(domain[d] == axes_[d].axis)) return false;
    return true;
  }

  bool all_periodic() const {
    for (const auto& a : axes_)
      if (!a.axis.periodic) return false;
    return true;
  }

 private:
  std::vector<GridAxis> axes_;
};

/// Values of a scalar function at the nodes of a grid, row-major.
struct GridFunction {
  std::vector<std::size_t> shape;
  Vector values;
};

}  // namespace willmore
