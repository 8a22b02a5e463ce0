#pragma once

// Closed-form examples: products of round spheres (Willmore and Clifford
// tori, the general products with radii a_i = sqrt((n - m_i)/(n p))), small
// round spheres, and the Veronese surface. Every patch carries exact
// derivatives; the constant shape operators come with an IsoparametricSpec.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "willmore/error.hpp"
#include "willmore/immersion.hpp"
#include "willmore/jet.hpp"
#include "willmore/linalg.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/tensor.hpp"

namespace willmore {

/// Submanifold with constant shape operators h^alpha in a fixed frame.
struct IsoparametricSpec {
  std::string name;
  ShapeFamily shape;

  std::size_t n() const { return shape.n(); }
  std::size_t p() const { return shape.p(); }
  double mean_norm() const { return std::sqrt(shape.mean_norm_sq()); }
  double S() const { return shape.norm_sq(); }
  double rho_sq() const { return S() - static_cast<double>(n()) * shape.mean_norm_sq(); }

  /// p = 1 only: distinct principal curvatures (descending) with multiplicities.
  std::vector<std::pair<double, std::size_t>> principal_curvatures(double tol = 1e-12) const {
    if (p() != 1) throw DomainError("principal_curvatures: defined for hypersurfaces only");
    std::vector<std::pair<double, std::size_t>> out;
    for (double k : jacobi_eigen(shape[0]).values) {
      if (!out.empty() && std::abs(out.back().first - k) <= tol)
        ++out.back().second;
      else
        out.emplace_back(k, 1);
    }
    return out;
  }
};

struct CatalogEntry {
  ImmersionPatch patch;
  std::optional<IsoparametricSpec> spec;
};

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit S^k from k angles. k = 1: (cos phi, sin phi). k >= 2: hyperspherical
// coordinates theta_1..theta_{k-1}, phi.
template <class T>
void sphere_coords(std::span<const T> ang, std::size_t k, std::vector<T>& out) {
  using std::cos;
  using std::sin;
  T prod(1.0);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    out.push_back(prod * cos(ang[j]));
    prod = prod * sin(ang[j]);
  }
  out.push_back(prod * cos(ang[k - 1]));
  out.push_back(prod * sin(ang[k - 1]));
}

// Chart domain of a unit S^k factor. With `doubly_periodic`, the polar
// angles also run over a full period; the chart then covers S^k 2^{k-1} times.
inline void sphere_domain(std::size_t k, bool doubly_periodic, std::vector<Axis>& out) {
  for (std::size_t j = 0; j + 1 < k; ++j)
    out.push_back(doubly_periodic ? Axis{0.0, kTwoPi, true} : Axis{0.0, std::numbers::pi, false});
  out.push_back(Axis{0.0, kTwoPi, true});
}

template <class Fn>
ImmersionPatch make_patch(std::string name, std::size_t n, std::size_t ambient,
                          std::vector<Axis> domain, int cover, Fn fn) {
  ImmersionPatch patch;
  patch.name = std::move(name);
  patch.n = n;
  patch.ambient_dim = ambient;
  patch.domain = std::move(domain);
  patch.cover_multiplicity = cover;
  patch.evaluator = [fn](std::span<const double> u) { return fn(u); };
  patch.exact_jet = [fn](std::span<const double> u) {
    const std::vector<Jet> vars = seed_variables(u);
    return fn(std::span<const Jet>(vars));
  };
  return patch;
}

struct SphereFactor {
  std::size_t dim;
  double radius;
};

// x = (a_1 y_1, ..., a_q y_q) with y_i on the unit S^{m_i}.
inline ImmersionPatch product_patch(std::string name, const std::vector<SphereFactor>& factors) {
  std::size_t n = 0;
  std::vector<Axis> domain;
  for (const auto& f : factors) {
    n += f.dim;
    sphere_domain(f.dim, false, domain);
  }
  const std::size_t ambient = n + factors.size();
  return make_patch(std::move(name), n, ambient, std::move(domain), 1,
                    [factors]<class T>(std::span<const T> u) {
                      std::vector<T> x;
                      std::size_t offset = 0;
                      for (const auto& f : factors) {
                        const std::size_t start = x.size();
                        sphere_coords(u.subspan(offset, f.dim), f.dim, x);
                        for (std::size_t k = start; k < x.size(); ++k) x[k] = f.radius * x[k];
                        offset += f.dim;
                      }
                      return x;
                    });
}

// Unit normal (c_1 y_1, ..., c_q y_q) of a hypersurface product, c ⟂ a.
inline PointMap product_normal(const std::vector<SphereFactor>& factors, const Vector& c) {
  return [factors, c](std::span<const double> u) {
    Vector nu;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::size_t start = nu.size();
      sphere_coords(u.subspan(offset, factors[i].dim), factors[i].dim, nu);
      for (std::size_t k = start; k < nu.size(); ++k) nu[k] *= c[i];
      offset += factors[i].dim;
    }
    return nu;
  };
}

// Product with radii a and unit normals c^alpha orthogonal to a in R^q:
// h^alpha = diag(-c^alpha_i / a_i, repeated m_i times).
inline IsoparametricSpec product_spec(std::string name, const std::vector<SphereFactor>& factors,
                                      const std::vector<Vector>& normals) {
  std::vector<SymmetricMatrix> hs;
  for (const Vector& c : normals) {
    Vector diag;
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t r = 0; r < factors[i].dim; ++r) diag.push_back(-c[i] / factors[i].radius);
    hs.push_back(SymmetricMatrix::diagonal(diag));
  }
  return IsoparametricSpec{std::move(name), ShapeFamily(std::move(hs))};
}

inline void check_split(std::size_t m, std::size_t n, const char* what) {
  if (!(m >= 1 && m + 1 <= n))
    throw DomainError(std::string(what) + ": need 1 <= m <= n-1");
}

}  // namespace detail

/// S^m(r) x S^{n-m}(sqrt(1 - r^2)) in S^{n+1}, oriented so that the
/// principal curvatures are sqrt(1-r^2)/r (m times) and -r/sqrt(1-r^2).
inline CatalogEntry sphere_product(std::size_t m, std::size_t n, double r, std::string name = "") {
  detail::check_split(m, n, "sphere_product");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("sphere_product: need 0 < r < 1");
  const double s = std::sqrt(1.0 - r * r);
  if (name.empty()) name = "torus:" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(r);
  const std::vector<detail::SphereFactor> factors{{m, r}, {n - m, s}};
  ImmersionPatch patch = detail::product_patch(name, factors);
  patch.normal_hint = detail::product_normal(factors, {-s, r});
  return {std::move(patch), detail::product_spec(name, factors, {Vector{-s, r}})};
}

/// W_{m,n-m}: S^m(sqrt((n-m)/n)) x S^{n-m}(sqrt(m/n)).
inline CatalogEntry willmore_torus(std::size_t m, std::size_t n) {
  detail::check_split(m, n, "willmore_torus");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return sphere_product(m, n, std::sqrt((nd - md) / nd),
                        "willmore-torus:" + std::to_string(m) + "," + std::to_string(n));
}

/// C_{m,n-m}: S^m(sqrt(m/n)) x S^{n-m}(sqrt((n-m)/n)), minimal.
inline CatalogEntry clifford_torus(std::size_t m, std::size_t n) {
  detail::check_split(m, n, "clifford_torus");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return sphere_product(m, n, std::sqrt(md / nd),
                        "clifford-torus:" + std::to_string(m) + "," + std::to_string(n));
}

/// Product of p+1 spheres S^{m_i}(a_i), a_i = sqrt((n - m_i)/(n p)), in S^{n+p}.
inline CatalogEntry product_spheres(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw DomainError("product_spheres: need at least two factors");
  std::size_t n = 0;
  std::string name = "product-spheres:";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw DomainError("product_spheres: factor dimensions must be >= 1");
    n += dims[i];
    name += (i ? "," : "") + std::to_string(dims[i]);
  }
  const std::size_t q = dims.size(), p = q - 1;
  const double nd = static_cast<double>(n), pd = static_cast<double>(p);
  std::vector<detail::SphereFactor> factors;
  Vector a(q);
  for (std::size_t i = 0; i < q; ++i) {
    a[i] = std::sqrt((nd - static_cast<double>(dims[i])) / (nd * pd));
    factors.push_back({dims[i], a[i]});
  }
  std::vector<Vector> normals;
  if (p == 1)
    normals.push_back({-a[1], a[0]});
  else
    normals = detail::complete_frame({a}, q, p);
  ImmersionPatch patch = detail::product_patch(name, factors);
  if (p == 1) patch.normal_hint = detail::product_normal(factors, normals.front());
  return {std::move(patch), detail::product_spec(name, factors, normals)};
}

/// Small sphere S^n(r) in a great S^{n+1} ⊂ S^{n+p}. Every angle is periodic,
/// so the chart covers the sphere 2^{n-1} times.
inline CatalogEntry round_sphere(std::size_t n, std::size_t p, double r) {
  if (n < 1 || p < 1) throw DomainError("round_sphere: need n >= 1 and p >= 1");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("round_sphere: need 0 < r <= 1");
  const double s = std::sqrt(1.0 - r * r);
  const std::string name = "round-sphere:" + std::to_string(n) + "," + std::to_string(p) + "," +
                           std::to_string(r);
  std::vector<Axis> domain;
  detail::sphere_domain(n, true, domain);
  const std::size_t ambient = n + p + 1;
  ImmersionPatch patch = detail::make_patch(
      name, n, ambient, std::move(domain), 1 << (n - 1),
      [n, r, s, ambient]<class T>(std::span<const T> u) {
        std::vector<T> x;
        detail::sphere_coords(u, n, x);
        for (T& v : x) v = r * v;
        x.push_back(T(s));
        x.resize(ambient, T(0.0));
        return x;
      });
  // unit normal inside the great S^{n+1}: (-s y, r), so that h = (s/r) g
  patch.normal_hint = [n, r, s, ambient](std::span<const double> u) {
    Vector y;
    detail::sphere_coords(u, n, y);
    for (double& v : y) v *= -s;
    y.push_back(r);
    y.resize(ambient, 0.0);
    return y;
  };
  std::vector<SymmetricMatrix> hs(p, SymmetricMatrix(n));
  hs[0] = SymmetricMatrix::scaled_identity(n, s / r);
  return {std::move(patch), IsoparametricSpec{name, ShapeFamily(std::move(hs))}};
}

/// Veronese surface S^2(sqrt 3) -> S^4, (x,y,z) |-> (yz, xz, xy, (x^2-y^2)/2,
/// (x^2+y^2-2z^2)/(2 sqrt 3)) / sqrt 3.
template <class T>
std::vector<T> veronese_map(const T& x, const T& y, const T& z) {
  const double r3 = std::sqrt(3.0);
  return {y * z / r3, x * z / r3, x * y / r3, (x * x - y * y) / (2.0 * r3),
          (x * x + y * y - 2.0 * z * z) / 6.0};
}

/// Veronese surface on the chart (theta, phi) of S^2(sqrt 3); antipodal points
/// share an image, so the cover multiplicity is 2.
inline CatalogEntry veronese() {
  std::vector<Axis> domain{{0.0, std::numbers::pi, false}, {0.0, detail::kTwoPi, true}};
  ImmersionPatch patch =
      detail::make_patch("veronese", 2, 5, std::move(domain), 2, []<class T>(std::span<const T> u) {
        using std::cos;
        using std::sin;
        const double r3 = std::sqrt(3.0);
        const T st = sin(u[0]);
        const T x = r3 * st * cos(u[1]);
        const T y = r3 * st * sin(u[1]);
        const T z = r3 * cos(u[0]);
        return veronese_map(x, y, z);
      });
  const double c = 1.0 / std::sqrt(3.0);
  return {std::move(patch),
          IsoparametricSpec{"veronese", ShapeFamily({c * canonical_a(2), c * canonical_b(2)})}};
}

/// ID patterns accepted by catalog_entry.
inline std::vector<std::string> catalog_ids() {
  return {"willmore-torus:m,n", "clifford-torus:m,n", "veronese", "product-spheres:m1,m2,...",
          "round-sphere:n,p,r", "torus:m,n,r"};
}

namespace detail {

inline std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::size_t parse_count(const std::string& id, const std::string& s) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s.front() == '-')
    throw UnknownIdError("malformed integer '" + s + "' in catalog ID '" + id + "'");
  return static_cast<std::size_t>(v);
}

inline double parse_real(const std::string& id, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw UnknownIdError("malformed number '" + s + "' in catalog ID '" + id + "'");
  return v;
}

}  // namespace detail

/// Looks up a catalog ID such as "willmore-torus:1,3" or "veronese".
inline CatalogEntry catalog_entry(const std::string& id) {
  const std::size_t colon = id.find(':');
  const std::string kind = id.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : detail::split_args(id.substr(colon + 1));
  auto expect = [&](std::size_t count) {
    if (args.size() != count)
      throw UnknownIdError("catalog ID '" + id + "' expects " + std::to_string(count) +
                           " arguments");
  };
  if (kind == "veronese") {
    expect(0);
    return veronese();
  }
  if (kind == "willmore-torus" || kind == "clifford-torus") {
    expect(2);
    const std::size_t m = detail::parse_count(id, args[0]), n = detail::parse_count(id, args[1]);
    return kind == "willmore-torus" ? willmore_torus(m, n) : clifford_torus(m, n);
  }
  if (kind == "torus") {
    expect(3);
    return sphere_product(detail::parse_count(id, args[0]), detail::parse_count(id, args[1]),
                          detail::parse_real(id, args[2]), id);
  }
  if (kind == "product-spheres") {
    if (args.empty()) throw UnknownIdError("catalog ID '" + id + "' needs factor dimensions");
    std::vector<std::size_t> dims;
    for (const auto& a : args) dims.push_back(detail::parse_count(id, a));
    return product_spheres(dims);
  }
  if (kind == "round-sphere") {
    expect(3);
    return round_sphere(detail::parse_count(id, args[0]), detail::parse_count(id, args[1]),
                        detail::parse_real(id, args[2]));
  }
  throw UnknownIdError("unknown catalog ID '" + id + "'");
}

}  // namespace willmore
