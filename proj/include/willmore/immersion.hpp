#pragma once

// Extrinsic geometry of a parametric chart x: U -> S^{n+p} ⊂ R^{n+p+1}.
//
// Derivatives come either from an exact jet evaluator (catalog charts and
// their Möbius images) or from second-order central differences. The
// tangent frame is Gram-Schmidt of the coordinate derivatives, the normal
// frame an orthonormal completion of {tangent frame, x}, and h^alpha_ij is
// the normal component of the second derivatives expressed in the
// orthonormal tangent frame.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "willmore/error.hpp"
#include "willmore/jet.hpp"
#include "willmore/linalg.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/tensor.hpp"

namespace willmore {

using PointMap = std::function<Vector(std::span<const double>)>;
using JetMap = std::function<std::vector<Jet>(std::span<const double>)>;

inline constexpr double kDefaultStep = 1e-4;

struct ImmersionPatch {
  std::string name;
  std::size_t n = 0;            // intrinsic dimension
  std::size_t ambient_dim = 0;  // n + p + 1
  std::vector<Axis> domain;
  PointMap evaluator;
  JetMap exact_jet;             // optional: exact first and second derivatives
  int cover_multiplicity = 1;   // how many times the chart covers its image
  PointMap normal_hint;         // optional, p = 1: the unit normal is turned towards it

  std::size_t codim() const { return ambient_dim - n - 1; }
  bool has_exact() const { return static_cast<bool>(exact_jet); }
  Vector operator()(std::span<const double> u) const { return evaluator(u); }
};

enum class Derivatives { automatic, exact, finite_difference };

/// Position with first and second parameter derivatives.
struct ChartJet {
  Vector x;
  std::vector<Vector> first;                // first[a]
  std::vector<std::vector<Vector>> second;  // second[a][b]
};

struct ShapeData {
  std::size_t n = 0;
  std::size_t p = 0;
  Vector position;
  SymmetricMatrix metric;  // g_ab = x_a . x_b
  OrthogonalFrame tangent_frame;
  OrthogonalFrame normal_frame;
  ShapeFamily second_fundamental;
  Vector mean_vector;  // H^alpha
  double mean_norm = 0.0;  // H
  double S = 0.0;
  double rho_sq = 0.0;
};

namespace detail {

inline void check_point(const ImmersionPatch& patch, std::span<const double> u) {
  if (u.size() != patch.n)
    throw DimensionError("patch '" + patch.name + "': expected " + std::to_string(patch.n) +
                         " parameters, got " + std::to_string(u.size()));
  for (std::size_t a = 0; a < patch.n; ++a) {
    const Axis& ax = patch.domain[a];
    if (!ax.periodic && !(u[a] > ax.lo && u[a] < ax.hi))
      throw DomainError("patch '" + patch.name + "': parameter " + std::to_string(a) +
                        " must lie strictly inside its interval");
  }
}

inline void check_step(double step) {
  if (!(step >= 1e-7 && step <= 1e-2))
    throw DomainError("finite-difference step must lie in [1e-7, 1e-2]");
}

inline bool use_exact(const ImmersionPatch& patch, Derivatives mode) {
  if (mode == Derivatives::exact && !patch.has_exact())
    throw DomainError("patch '" + patch.name + "' has no exact derivative evaluator");
  return mode == Derivatives::exact || (mode == Derivatives::automatic && patch.has_exact());
}

inline ChartJet exact_chart_jet(const ImmersionPatch& patch, std::span<const double> u,
                                bool with_second) {
  const std::vector<Jet> xs = patch.exact_jet(u);
  const std::size_t n = patch.n, m = xs.size();
  ChartJet j{Vector(m), std::vector<Vector>(n, Vector(m)), {}};
  if (with_second) j.second.assign(n, std::vector<Vector>(n, Vector(m)));
  for (std::size_t k = 0; k < m; ++k) {
    j.x[k] = xs[k].value();
    for (std::size_t a = 0; a < n; ++a) {
      j.first[a][k] = xs[k].d(a);
      if (with_second)
        for (std::size_t b = 0; b < n; ++b) j.second[a][b][k] = xs[k].dd(a, b);
    }
  }
  return j;
}

inline ChartJet fd_chart_jet(const ImmersionPatch& patch, std::span<const double> u, double h,
                             bool with_second) {
  const std::size_t n = patch.n;
  Vector w(u.begin(), u.end());
  auto eval_at = [&](std::initializer_list<std::pair<std::size_t, double>> shifts) {
    Vector v = w;
    for (auto [a, s] : shifts) v[a] += s;
    return patch.evaluator(v);
  };
  ChartJet j{patch.evaluator(w), std::vector<Vector>(n), {}};
  const std::size_t m = j.x.size();
  std::vector<Vector> plus(n), minus(n);
  for (std::size_t a = 0; a < n; ++a) {
    plus[a] = eval_at({{a, h}});
    minus[a] = eval_at({{a, -h}});
    j.first[a].resize(m);
    for (std::size_t k = 0; k < m; ++k) j.first[a][k] = (plus[a][k] - minus[a][k]) / (2.0 * h);
  }
  if (!with_second) return j;
  j.second.assign(n, std::vector<Vector>(n, Vector(m)));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < m; ++k)
      j.second[a][a][k] = (plus[a][k] - 2.0 * j.x[k] + minus[a][k]) / (h * h);
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vector pp = eval_at({{a, h}, {b, h}});
      const Vector pm = eval_at({{a, h}, {b, -h}});
      const Vector mp = eval_at({{a, -h}, {b, h}});
      const Vector mm = eval_at({{a, -h}, {b, -h}});
      for (std::size_t k = 0; k < m; ++k) {
        const double v = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
        j.second[a][b][k] = v;
        j.second[b][a][k] = v;
      }
    }
  }
  return j;
}

// Coordinate tangent vectors with the (rounding / truncation) component
// along the position vector removed.
inline std::vector<Vector> sphere_tangents(const ChartJet& j) {
  std::vector<Vector> t = j.first;
  const double xx = dot(j.x, j.x);
  for (auto& v : t) {
    const double c = dot(v, j.x) / xx;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * j.x[k];
  }
  return t;
}

inline SymmetricMatrix gram(const std::vector<Vector>& t) {
  SymmetricMatrix g(t.size());
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a; b < t.size(); ++b) g.set(a, b, dot(t[a], t[b]));
  return g;
}

inline void check_rank(const SymmetricMatrix& g, const std::string& name) {
  const EigenDecomposition eig = jacobi_eigen(g);
  const double smallest = eig.values.back();
  if (!(smallest >= 1e-12)) {  // singular value >= 1e-6
    std::size_t worst = 0;
    const std::size_t last = g.dim() - 1;
    for (std::size_t a = 1; a < g.dim(); ++a)
      if (std::abs(eig.vectors(a, last)) > std::abs(eig.vectors(worst, last))) worst = a;
    throw RankError("patch '" + name + "': Jacobian is rank deficient (direction " +
                        std::to_string(worst) + ")",
                    worst);
  }
}

/// Orthonormal completion of `basis` in R^dim by `count` vectors, drawing
/// from standard basis vectors with the largest residual.
inline std::vector<Vector> complete_frame(std::vector<Vector> basis, std::size_t dim,
                                          std::size_t count) {
  std::vector<Vector> added;
  for (std::size_t slot = 0; slot < count; ++slot) {
    Vector best;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      Vector e(dim, 0.0);
      e[k] = 1.0;
      project_out(e, basis);
      const double r = norm(e);
      if (r > best_norm) {
        best_norm = r;
        best = std::move(e);
      }
    }
    for (double& v : best) v /= best_norm;
    project_out(best, basis);
    const double r = norm(best);
    for (double& v : best) v /= r;
    basis.push_back(best);
    added.push_back(std::move(best));
  }
  return added;
}

}  // namespace detail

inline ChartJet chart_jet(const ImmersionPatch& patch, std::span<const double> u,
                          double step = kDefaultStep, Derivatives mode = Derivatives::automatic,
                          bool with_second = true) {
  detail::check_step(step);
  detail::check_point(patch, u);
  return detail::use_exact(patch, mode) ? detail::exact_chart_jet(patch, u, with_second)
                                        : detail::fd_chart_jet(patch, u, step, with_second);
}

/// Pointwise extrinsic invariants from a chart jet.
inline ShapeData shape_data_from_jet(const ChartJet& j, std::size_t n,
                                     const std::string& name = "patch",
                                     const Vector* orientation = nullptr) {
  const std::size_t dim = j.x.size();
  if (dim < n + 2) throw DimensionError("shape_data: ambient dimension too small");
  const std::size_t p = dim - n - 1;
  if (std::abs(norm(j.x) - 1.0) > 1e-10)
    throw DomainError("patch '" + name + "': image point is not on the unit sphere");

  const std::vector<Vector> t = detail::sphere_tangents(j);
  SymmetricMatrix g = detail::gram(t);
  detail::check_rank(g, name);
  OrthogonalFrame tangent = gram_schmidt(t);

  std::vector<Vector> basis = tangent.vectors();
  Vector x = j.x;
  const double xn = norm(x);
  for (double& v : x) v /= xn;
  basis.push_back(x);
  std::vector<Vector> normals = detail::complete_frame(basis, dim, p);

  if (p == 1 && orientation) {
    if (dot(normals[0], *orientation) < 0.0)
      for (double& v : normals[0]) v = -v;
  } else if (p == 1) {
    // orient against the coordinate frame: det[x, x_1..x_n, nu] > 0
    std::vector<Vector> cols{x};
    cols.insert(cols.end(), t.begin(), t.end());
    cols.push_back(normals[0]);
    if (determinant(Matrix::from_columns(cols)) < 0.0)
      for (double& v : normals[0]) v = -v;
  }

  // e_i = sum_a C_ia x_a with C = E g^{-1}, E_ib = e_i . x_b
  const SymmetricMatrix ginv = inverse_spd(g);
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b) s += dot(tangent[i], t[b]) * ginv(b, a);
      c(i, a) = s;
    }

  std::vector<SymmetricMatrix> hs;
  hs.reserve(p);
  for (std::size_t al = 0; al < p; ++al) {
    SymmetricMatrix coord(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) coord.set(a, b, dot(j.second[a][b], normals[al]));
    SymmetricMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) s += c(i, a) * c(k, b) * coord(a, b);
        h.set(i, k, s);
      }
    hs.push_back(std::move(h));
  }

  ShapeFamily fam(std::move(hs));
  ShapeData sd{n,
               p,
               j.x,
               std::move(g),
               std::move(tangent),
               OrthogonalFrame(dim, std::move(normals)),
               fam,
               fam.mean(),
               std::sqrt(fam.mean_norm_sq()),
               fam.norm_sq(),
               0.0};
  sd.rho_sq = sd.S - static_cast<double>(n) * fam.mean_norm_sq();
  return sd;
}

/// Shape data at parameter point u. Uses the patch's exact derivatives when
/// present (mode automatic) and central differences with `step` otherwise.
inline ShapeData shape_data(const ImmersionPatch& patch, std::span<const double> u,
                            double step = kDefaultStep, Derivatives mode = Derivatives::automatic) {
  const ChartJet j = chart_jet(patch, u, step, mode);
  if (patch.normal_hint) {
    const Vector hint = patch.normal_hint(u);
    return shape_data_from_jet(j, patch.n, patch.name, &hint);
  }
  return shape_data_from_jet(j, patch.n, patch.name);
}

/// Normalized scalar curvature from the contracted Gauss equation,
/// n(n-1)R = n(n-1) + n^2 H^2 - S.
inline double scalar_curvature(const ShapeData& sd) {
  if (sd.n < 2) throw DomainError("scalar_curvature: needs n >= 2");
  const double n = static_cast<double>(sd.n);
  return 1.0 + (n * n * sd.mean_norm * sd.mean_norm - sd.S) / (n * (n - 1.0));
}

/// Induced metric g_ab at u (first derivatives only).
inline SymmetricMatrix metric_at(const ImmersionPatch& patch, std::span<const double> u,
                                 double step = kDefaultStep,
                                 Derivatives mode = Derivatives::automatic) {
  return detail::gram(detail::sphere_tangents(chart_jet(patch, u, step, mode, false)));
}

/// Inverse metric and volume density at every node of a grid.
struct MetricField {
  std::vector<SymmetricMatrix> inverse;
  Vector sqrt_det;
};

inline MetricField metric_field(const ImmersionPatch& patch, const QuadratureGrid& grid,
                                double step = kDefaultStep,
                                Derivatives mode = Derivatives::automatic) {
  if (!grid.matches(patch.domain))
    throw DomainError("grid does not match the domain of patch '" + patch.name + "'");
  MetricField mf;
  mf.inverse.reserve(grid.size());
  mf.sqrt_det.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SymmetricMatrix g = metric_at(patch, grid.node(k), step, mode);
    mf.inverse.push_back(inverse_spd(g));
    mf.sqrt_det.push_back(std::sqrt(determinant(g.to_matrix())));
  }
  return mf;
}

namespace detail {

inline void check_periodic_grid(const ImmersionPatch& patch, const QuadratureGrid& grid) {
  if (!grid.matches(patch.domain))
    throw DomainError("grid does not match the domain of patch '" + patch.name + "'");
  for (std::size_t d = 0; d < grid.dim(); ++d) {
    if (!grid.axis(d).axis.periodic)
      throw DomainError("Laplace-Beltrami needs periodic axes (axis " + std::to_string(d) +
                        " is not)");
    if (grid.axis(d).size() < 8)
      throw DomainError("Laplace-Beltrami needs at least 8 nodes per axis");
  }
}

// Centered difference along periodic axis d.
inline double centered(const QuadratureGrid& grid, std::span<const double> f, std::size_t k,
                       std::size_t d) {
  const double h = grid.axis(d).spacing();
  return (f[grid.shifted(k, d, 1)] - f[grid.shifted(k, d, -1)]) / (2.0 * h);
}

inline std::vector<Vector> gradient(const QuadratureGrid& grid, std::span<const double> f) {
  std::vector<Vector> df(grid.dim(), Vector(grid.size()));
  for (std::size_t d = 0; d < grid.dim(); ++d)
    for (std::size_t k = 0; k < grid.size(); ++k) df[d][k] = centered(grid, f, k, d);
  return df;
}

}  // namespace detail

/// Discrete Laplace-Beltrami (1/sqrt g) d_i (sqrt g g^ij d_j f) with centered
/// differences on a fully periodic grid.
inline GridFunction laplace_beltrami(const ImmersionPatch& patch, const GridFunction& f,
                                     const QuadratureGrid& grid, const MetricField& mf) {
  detail::check_periodic_grid(patch, grid);
  if (f.values.size() != grid.size()) throw DimensionError("grid function size mismatch");
  const std::size_t dim = grid.dim(), size = grid.size();
  const std::vector<Vector> df = detail::gradient(grid, f.values);
  std::vector<Vector> flux(dim, Vector(size, 0.0));
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += mf.inverse[k](i, j) * df[j][k];
      flux[i][k] = mf.sqrt_det[k] * s;
    }
  GridFunction out{grid.shape(), Vector(size, 0.0)};
  for (std::size_t k = 0; k < size; ++k) {
    double div = 0.0;
    for (std::size_t i = 0; i < dim; ++i) div += detail::centered(grid, flux[i], k, i);
    out.values[k] = div / mf.sqrt_det[k];
  }
  return out;
}

inline GridFunction laplace_beltrami(const ImmersionPatch& patch, const GridFunction& f,
                                     const QuadratureGrid& grid, double step = kDefaultStep) {
  detail::check_periodic_grid(patch, grid);
  return laplace_beltrami(patch, f, grid, metric_field(patch, grid, step));
}

/// sum_nodes w sqrt(g) f: the chart integral of f dv (no cover correction).
inline double chart_integral(const QuadratureGrid& grid, const MetricField& mf,
                             std::span<const double> f) {
  if (f.size() != grid.size()) throw DimensionError("grid function size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) s += grid.weight(k) * mf.sqrt_det[k] * f[k];
  return s;
}

/// Discrete Dirichlet pairing sum_nodes w sqrt(g) g^ij D_i f D_j g, built
/// from the same centered differences as laplace_beltrami.
inline double dirichlet_form(const ImmersionPatch& patch, const QuadratureGrid& grid,
                             const MetricField& mf, std::span<const double> f,
                             std::span<const double> g) {
  detail::check_periodic_grid(patch, grid);
  if (f.size() != grid.size() || g.size() != grid.size())
    throw DimensionError("grid function size mismatch");
  const auto df = detail::gradient(grid, f);
  const auto dg = detail::gradient(grid, g);
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < grid.dim(); ++i)
      for (std::size_t j = 0; j < grid.dim(); ++j) q += mf.inverse[k](i, j) * df[i][k] * dg[j][k];
    s += grid.weight(k) * mf.sqrt_det[k] * q;
  }
  return s;
}

/// Samples a grid function from a callable of the parameter point.
template <class F>
GridFunction sample(const QuadratureGrid& grid, F&& f) {
  GridFunction out{grid.shape(), Vector(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] = f(grid.node(k));
  return out;
}

/// The chart u -> x(M u + c) on `domain`. Exact derivatives are carried over
/// by the chain rule.
inline ImmersionPatch affine_reparametrize(const ImmersionPatch& patch, const Matrix& m,
                                           const Vector& shift, std::vector<Axis> domain) {
  if (m.rows() != patch.n || m.cols() != patch.n || shift.size() != patch.n ||
      domain.size() != patch.n)
    throw DimensionError("affine_reparametrize: size mismatch");
  ImmersionPatch out = patch;
  out.name = patch.name + "/affine";
  out.domain = std::move(domain);
  auto inner_point = [m, shift](std::span<const double> u) {
    Vector v = m * u;
    for (std::size_t a = 0; a < v.size(); ++a) v[a] += shift[a];
    return v;
  };
  PointMap inner = patch.evaluator;
  out.evaluator = [inner, inner_point](std::span<const double> u) { return inner(inner_point(u)); };
  if (patch.normal_hint) {
    PointMap hint = patch.normal_hint;
    out.normal_hint = [hint, inner_point](std::span<const double> u) { return hint(inner_point(u)); };
  }
  if (patch.has_exact()) {
    JetMap jet = patch.exact_jet;
    out.exact_jet = [jet, inner_point, m](std::span<const double> u) {
      const Vector v = inner_point(u);
      const std::vector<Jet> xs = jet(v);
      // second-order Taylor expansion in dv = M (u - u0), exact to second order
      const std::vector<Jet> vars = seed_variables(u);
      const std::size_t n = u.size();
      std::vector<Jet> dv(n, Jet(0.0));
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a) dv[b] += m(b, a) * (vars[a] - u[a]);
      std::vector<Jet> out_x;
      out_x.reserve(xs.size());
      for (const Jet& x : xs) {
        Jet r(x.value());
        for (std::size_t b = 0; b < n; ++b) {
          r += x.d(b) * dv[b];
          for (std::size_t d = 0; d < n; ++d) r += 0.5 * x.dd(b, d) * (dv[b] * dv[d]);
        }
        out_x.push_back(r);
      }
      return out_x;
    };
  }
  return out;
}

}  // namespace willmore
