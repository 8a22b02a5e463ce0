#pragma once

// Second-order forward-mode jets: value, gradient and Hessian with respect
// to up to kMaxJetDim parameters. Catalog evaluators are written as
// templates over the scalar type so the same code yields positions (double)
// and exact first/second derivatives (Jet).

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "willmore/error.hpp"

namespace willmore {

inline constexpr std::size_t kMaxJetDim = 8;

class Jet {
 public:
  Jet() = default;
  Jet(double value) : value_(value) {}  // NOLINT: constants promote implicitly

  /// Independent variable number `index` out of `dim`.
  static Jet variable(double value, std::size_t dim, std::size_t index) {
    if (dim > kMaxJetDim || index >= dim) throw DimensionError("Jet::variable: bad dimension");
    Jet j(value);
    j.dim_ = dim;
    j.grad_[index] = 1.0;
    return j;
  }

  double value() const noexcept { return value_; }
  std::size_t dim() const noexcept { return dim_; }
  double d(std::size_t a) const { return grad_[a]; }
  double dd(std::size_t a, std::size_t b) const { return hess_[a * kMaxJetDim + b]; }

  Jet operator-() const {
    Jet r = *this;
    r.value_ = -r.value_;
    for (std::size_t a = 0; a < dim_; ++a) r.grad_[a] = -r.grad_[a];
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b) r.h(a, b) = -r.h(a, b);
    return r;
  }

  Jet& operator+=(const Jet& o) {
    widen(o.dim_);
    value_ += o.value_;
    for (std::size_t a = 0; a < o.dim_; ++a) grad_[a] += o.grad_[a];
    for (std::size_t a = 0; a < o.dim_; ++a)
      for (std::size_t b = 0; b < o.dim_; ++b) h(a, b) += o.dd(a, b);
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }

  Jet& operator*=(const Jet& o) {
    widen(o.dim_);
    const std::size_t n = dim_;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        h(a, b) = value_ * o.dd(a, b) + o.value_ * h(a, b) + grad_[a] * o.grad_[b] +
                  o.grad_[a] * grad_[b];
    for (std::size_t a = 0; a < n; ++a) grad_[a] = value_ * o.grad_[a] + o.value_ * grad_[a];
    value_ *= o.value_;
    return *this;
  }
  Jet& operator/=(const Jet& o) { return *this *= o.reciprocal(); }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

  /// f(x) given f(v), f'(v), f''(v).
  Jet chain(double f, double f1, double f2) const {
    Jet r;
    r.dim_ = dim_;
    r.value_ = f;
    for (std::size_t a = 0; a < dim_; ++a) r.grad_[a] = f1 * grad_[a];
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b)
        r.h(a, b) = f2 * grad_[a] * grad_[b] + f1 * dd(a, b);
    return r;
  }

  Jet reciprocal() const {
    const double inv = 1.0 / value_;
    return chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

 private:
  double& h(std::size_t a, std::size_t b) { return hess_[a * kMaxJetDim + b]; }
  void widen(std::size_t other) {
    if (other > dim_) dim_ = other;
  }

  double value_ = 0.0;
  std::size_t dim_ = 0;
  std::array<double, kMaxJetDim> grad_{};
  std::array<double, kMaxJetDim * kMaxJetDim> hess_{};
};

inline Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(s, c, -s);
}

inline Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(c, -s, -c);
}

inline Jet sqrt(const Jet& x) {
  const double r = std::sqrt(x.value());
  return x.chain(r, 0.5 / r, -0.25 / (r * x.value()));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

/// Seeds one independent variable per parameter coordinate.
inline std::vector<Jet> seed_variables(std::span<const double> u) {
  std::vector<Jet> vars;
  vars.reserve(u.size());
  for (std::size_t a = 0; a < u.size(); ++a) vars.push_back(Jet::variable(u[a], u.size(), a));
  return vars;
}

}  // namespace willmore
