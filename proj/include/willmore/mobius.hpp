#pragma once

// Conformal transformations of S^N ⊂ R^{N+1}: a rotation followed by a
// dilation/translation conjugated through stereographic projection from a
// pole. Rotations and these conjugates generate the full Möbius group.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "willmore/error.hpp"
#include "willmore/immersion.hpp"
#include "willmore/jet.hpp"
#include "willmore/linalg.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/random.hpp"

namespace willmore {

class MobiusMap {
 public:
  /// `translation` is projected onto the hyperplane orthogonal to `pole`.
  MobiusMap(Matrix rotation, double dilation, Vector translation, Vector pole)
      : rotation_(std::move(rotation)),
        dilation_(dilation),
        translation_(std::move(translation)),
        pole_(std::move(pole)) {
    const std::size_t dim = rotation_.rows();
    if (rotation_.cols() != dim || translation_.size() != dim || pole_.size() != dim)
      throw DimensionError("MobiusMap: size mismatch");
    if (!(dilation_ > 0.0)) throw DomainError("MobiusMap: dilation must be positive");
    const Matrix defect = rotation_.transpose() * rotation_ - Matrix::identity(dim);
    if (std::sqrt(frob_norm_sq(defect)) > 1e-12)
      throw DomainError("MobiusMap: rotation is not orthogonal");
    const double pn = norm(pole_);
    if (pn == 0.0) throw DomainError("MobiusMap: zero pole");
    for (double& v : pole_) v /= pn;
    const double c = dot(translation_, pole_);
    for (std::size_t k = 0; k < dim; ++k) translation_[k] -= c * pole_[k];
  }

  static MobiusMap identity(std::size_t dim) {
    Vector pole(dim, 0.0);
    pole[dim - 1] = 1.0;
    return MobiusMap(Matrix::identity(dim), 1.0, Vector(dim, 0.0), pole);
  }

  std::size_t dim() const noexcept { return pole_.size(); }
  const Matrix& rotation() const noexcept { return rotation_; }
  double dilation() const noexcept { return dilation_; }
  const Vector& translation() const noexcept { return translation_; }
  const Vector& pole() const noexcept { return pole_; }

  /// Image of a point of the unit sphere; T is double or Jet.
  template <class T>
  std::vector<T> apply(std::span<const T> x) const {
    const std::size_t dim = pole_.size();
    if (x.size() != dim) throw DimensionError("MobiusMap: point has wrong dimension");
    std::vector<T> y(dim, T(0.0));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) y[i] += rotation_(i, j) * x[j];
    T height(0.0);
    for (std::size_t i = 0; i < dim; ++i) height += pole_[i] * y[i];
    const T inv = T(1.0) / (T(1.0) - height);
    // stereographic coordinates, dilated and translated in the plane
    std::vector<T> s(dim);
    T sq(0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = dilation_ * ((y[i] - height * pole_[i]) * inv) + translation_[i];
      sq += s[i] * s[i];
    }
    const T denom = T(1.0) / (sq + 1.0);
    std::vector<T> out(dim);
    for (std::size_t i = 0; i < dim; ++i)
      out[i] = (2.0 * s[i] + (sq - 1.0) * pole_[i]) * denom;
    return out;
  }

  Vector operator()(std::span<const double> x) const { return apply<double>(x); }

  /// Spherical distance from R x to the pole.
  double pole_distance(std::span<const double> x) const {
    const Vector y = rotation_ * x;
    const double c = std::clamp(dot(y, pole_) / norm(y), -1.0, 1.0);
    return std::acos(c);
  }

 private:
  Matrix rotation_;
  double dilation_;
  Vector translation_;
  Vector pole_;
};

inline constexpr double kMinPoleDistance = 0.1;

/// The patch composed with a Möbius map. The pole clearance is checked on a
/// sample grid of the domain; exact derivatives are carried through when the
/// patch has them.
inline ImmersionPatch mobius_apply(const MobiusMap& map, const ImmersionPatch& patch,
                                   std::size_t samples_per_axis = 64) {
  if (map.dim() != patch.ambient_dim) throw DimensionError("mobius_apply: dimension mismatch");
  std::size_t per_axis = samples_per_axis;
  while (per_axis > 4 && std::pow(static_cast<double>(per_axis), static_cast<double>(patch.n)) > 4e4)
    --per_axis;
  const QuadratureGrid probe(patch.domain, per_axis);
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double dist = map.pole_distance(patch.evaluator(probe.node(k)));
    if (dist < kMinPoleDistance)
      throw DomainError("mobius_apply: image of '" + patch.name +
                        "' comes within " + std::to_string(dist) + " of the pole");
  }
  ImmersionPatch out = patch;
  out.name = patch.name + "/mobius";
  out.normal_hint = nullptr;
  PointMap eval = patch.evaluator;
  out.evaluator = [map, eval](std::span<const double> u) {
    const Vector x = eval(u);
    return map.apply<double>(x);
  };
  if (patch.has_exact()) {
    JetMap jet = patch.exact_jet;
    out.exact_jet = [map, jet](std::span<const double> u) {
      const std::vector<Jet> x = jet(u);
      return map.apply<Jet>(x);
    };
  }
  return out;
}

/// Random rotation, dilation in [0.5, 2] and translation with |b| <= max_shift
/// (pole fixed at the last axis).
inline MobiusMap random_mobius(Rng& rng, std::size_t dim, double max_shift = 0.5) {
  const Matrix rot = random_orthogonal(rng, dim);
  const double lambda = rng.uniform(0.5, 2.0);
  Vector pole(dim, 0.0);
  pole[dim - 1] = 1.0;
  Vector b(dim, 0.0);
  for (std::size_t k = 0; k + 1 < dim; ++k) b[k] = rng.normal();
  const double bn = norm(b);
  const double radius = max_shift * rng.uniform();
  if (bn > 0.0)
    for (double& v : b) v *= radius / bn;
  return MobiusMap(rot, lambda, b, pole);
}

/// Draws random maps until one keeps the patch clear of the pole.
inline std::pair<MobiusMap, ImmersionPatch> random_mobius_image(Rng& rng,
                                                                const ImmersionPatch& patch,
                                                                double max_shift = 0.5,
                                                                int max_attempts = 1000) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    MobiusMap map = random_mobius(rng, patch.ambient_dim, max_shift);
    try {
      ImmersionPatch image = mobius_apply(map, patch);
      return {std::move(map), std::move(image)};
    } catch (const DomainError&) {
    }
  }
  throw ConvergenceError("random_mobius_image: no admissible map found for '" + patch.name + "'");
}

/// Off-scalar part of g' g^{-1}: ||M - (tr M / n) I||_F / (tr M / n).
inline double conformal_defect(const SymmetricMatrix& original, const SymmetricMatrix& image) {
  if (original.dim() != image.dim()) throw DimensionError("conformal_defect: size mismatch");
  const Matrix m = image.to_matrix() * inverse_spd(original).to_matrix();
  const std::size_t n = original.dim();
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
  const double c = tr / static_cast<double>(n);
  const Matrix off = m - c * Matrix::identity(n);
  return std::sqrt(frob_norm_sq(off)) / c;
}

}  // namespace willmore
