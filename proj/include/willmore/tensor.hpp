#pragma once

// Pointwise algebra of the second fundamental form: trace-free
// decomposition, the commutator inequalities for families of symmetric
// matrices together with their equality configurations, and the
// decomposition of a symmetric 3-tensor into trace-free and pure-trace parts.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "willmore/error.hpp"
#include "willmore/linalg.hpp"

namespace willmore {

/// The 2x2 block [[0,1],[1,0]] padded with zeros to n x n.
inline SymmetricMatrix canonical_a(std::size_t n) {
  if (n < 2) throw DimensionError("canonical_a: n must be >= 2");
  SymmetricMatrix m(n);
  m.set(0, 1, 1.0);
  return m;
}

/// The 2x2 block diag(1,-1) padded with zeros to n x n.
inline SymmetricMatrix canonical_b(std::size_t n) {
  if (n < 2) throw DimensionError("canonical_b: n must be >= 2");
  SymmetricMatrix m(n);
  m.set(0, 0, 1.0);
  m.set(1, 1, -1.0);
  return m;
}

/// Second fundamental form at a point: p symmetric n x n matrices h^alpha
/// in an orthonormal tangent frame, and their mean curvatures
/// H^alpha = trace(h^alpha)/n.
class ShapeFamily {
 public:
  explicit ShapeFamily(std::vector<SymmetricMatrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw DimensionError("ShapeFamily: need at least one normal direction");
    n_ = matrices_.front().dim();
    mean_.reserve(matrices_.size());
    for (const auto& h : matrices_) {
      if (h.dim() != n_) throw DimensionError("ShapeFamily: matrices must share one dimension");
      mean_.push_back(h.trace() / static_cast<double>(n_));
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return matrices_.size(); }
  const std::vector<SymmetricMatrix>& matrices() const noexcept { return matrices_; }
  const SymmetricMatrix& operator[](std::size_t alpha) const { return matrices_[alpha]; }
  const Vector& mean() const noexcept { return mean_; }

  /// |H|^2 = sum_alpha (H^alpha)^2.
  double mean_norm_sq() const { return dot(mean_, mean_); }

  /// S = sum_alpha N(h^alpha).
  double norm_sq() const {
    double s = 0.0;
    for (const auto& h : matrices_) s += frob_norm_sq(h);
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<SymmetricMatrix> matrices_;
  Vector mean_;
};

/// Family of trace-free symmetric matrices A_alpha.
class TraceFreeFamily {
 public:
  explicit TraceFreeFamily(std::vector<SymmetricMatrix> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw DimensionError("TraceFreeFamily: empty family");
    const std::size_t n = matrices_.front().dim();
    for (std::size_t a = 0; a < matrices_.size(); ++a) {
      const auto& m = matrices_[a];
      if (m.dim() != n) throw DimensionError("TraceFreeFamily: matrices must share one dimension");
      if (std::abs(m.trace()) > 1e-13 * (1.0 + std::sqrt(frob_norm_sq(m))))
        throw DomainError("TraceFreeFamily: matrix " + std::to_string(a) + " has nonzero trace");
    }
  }

  std::size_t n() const { return matrices_.front().dim(); }
  std::size_t p() const noexcept { return matrices_.size(); }
  const std::vector<SymmetricMatrix>& matrices() const noexcept { return matrices_; }
  const SymmetricMatrix& operator[](std::size_t alpha) const { return matrices_[alpha]; }

 private:
  std::vector<SymmetricMatrix> matrices_;
};

/// Gram matrix sigma~_{alpha beta} = trace(A_alpha A_beta) of a trace-free
/// family, and its trace rho^2.
struct SigmaMatrix {
  SymmetricMatrix sigma;
  double rho_sq = 0.0;

  explicit SigmaMatrix(SymmetricMatrix s) : sigma(std::move(s)), rho_sq(sigma.trace()) {
    const double floor = -1e-12 * std::max(1.0, rho_sq);
    for (double ev : jacobi_eigen(sigma).values)
      if (ev < floor) throw DomainError("SigmaMatrix: Gram matrix is not positive semidefinite");
  }
};

inline SigmaMatrix sigma_matrix(const TraceFreeFamily& fam) {
  SymmetricMatrix s(fam.p());
  for (std::size_t a = 0; a < fam.p(); ++a)
    for (std::size_t b = a; b < fam.p(); ++b) s.set(a, b, frob_inner(fam[a], fam[b]));
  return SigmaMatrix(std::move(s));
}

struct TracelessSplit {
  TraceFreeFamily trace_free;
  SigmaMatrix sigma;
};

/// A_alpha = h^alpha - H^alpha I and the Gram matrix of the A_alpha.
inline TracelessSplit traceless_part(const ShapeFamily& fam) {
  std::vector<SymmetricMatrix> out;
  out.reserve(fam.p());
  for (std::size_t a = 0; a < fam.p(); ++a) {
    SymmetricMatrix m = fam[a];
    for (std::size_t i = 0; i < fam.n(); ++i) m.set(i, i, m(i, i) - fam.mean()[a]);
    out.push_back(std::move(m));
  }
  TraceFreeFamily tf(std::move(out));
  SigmaMatrix sigma = sigma_matrix(tf);
  return {std::move(tf), std::move(sigma)};
}

/// 2 N(A) N(B) - N(AB - BA). Never negative beyond rounding.
inline double check_chern_inequality(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  const Matrix c = commutator(a, b);  // throws on dimension mismatch
  return 2.0 * frob_norm_sq(a) * frob_norm_sq(b) - frob_norm_sq(c);
}

struct EqualityWitness {
  Matrix transform;  // orthogonal T
  double lambda = 0.0;
  double mu = 0.0;
  double residual_a = 0.0;  // ||T^T A T - lambda A~||_F
  double residual_b = 0.0;  // ||T^T B T - mu B~||_F
};

/// For a pair attaining equality in check_chern_inequality, finds an
/// orthogonal T with T^T A T = lambda A~ and T^T B T = mu B~.
///
/// In the equality configuration B has spectrum {mu, -mu, 0, ...}; the
/// eigenvectors of mu and -mu span the plane in which A acts as a multiple
/// of A~. Returns nullopt when the pair is not at equality (relative slack
/// above tol) or when either residual exceeds tol.
inline std::optional<EqualityWitness> equality_witness(const SymmetricMatrix& a,
                                                       const SymmetricMatrix& b,
                                                       double tol = 1e-9) {
  if (a.dim() != b.dim()) throw DimensionError("equality_witness: dimension mismatch");
  if (a.dim() < 2) return std::nullopt;
  const double na = frob_norm_sq(a), nb = frob_norm_sq(b);
  if (na == 0.0 || nb == 0.0)
    throw DomainError("equality_witness: the equality case needs nonzero matrices");
  const double slack = check_chern_inequality(a, b);
  if (std::abs(slack) > tol * std::max(1.0, 2.0 * na * nb)) return std::nullopt;

  const std::size_t n = a.dim();
  const EigenDecomposition eig = jacobi_eigen(b);
  std::vector<Vector> cols;
  cols.push_back(eig.vectors.column(0));
  cols.push_back(eig.vectors.column(n - 1));
  for (std::size_t k = 1; k + 1 < n; ++k) cols.push_back(eig.vectors.column(k));

  EqualityWitness w;
  w.transform = Matrix::from_columns(cols);
  w.mu = eig.values[0];
  const SymmetricMatrix ta = conjugate(a, w.transform);
  w.lambda = ta(0, 1);
  w.residual_a = std::sqrt(frob_norm_sq(ta - w.lambda * canonical_a(n)));
  w.residual_b = std::sqrt(frob_norm_sq(conjugate(b, w.transform) - w.mu * canonical_b(n)));
  if (w.residual_a > tol || w.residual_b > tol) return std::nullopt;
  return w;
}

/// The two sides of the commutator/Gram inequality for a trace-free family,
/// with sums over ordered pairs (alpha, beta).
struct LiTerms {
  double commutator_sum = 0.0;  // sum N([A_a, A_b])
  double sigma_sq_sum = 0.0;    // sum sigma~_ab^2
  double rho_sq = 0.0;

  double bound() const { return 1.5 * rho_sq * rho_sq; }
  double slack() const { return bound() - (commutator_sum + sigma_sq_sum); }
};

inline LiTerms li_terms(const TraceFreeFamily& fam) {
  LiTerms t;
  for (std::size_t a = 0; a < fam.p(); ++a) {
    t.rho_sq += frob_norm_sq(fam[a]);
    for (std::size_t b = 0; b < fam.p(); ++b) {
      if (a != b) t.commutator_sum += frob_norm_sq(commutator(fam[a], fam[b]));
      const double s = frob_inner(fam[a], fam[b]);
      t.sigma_sq_sum += s * s;
    }
  }
  return t;
}

/// (3/2) rho^4 - [sum N([A_a,A_b]) + sum sigma~_ab^2].
inline double check_li_inequality(const TraceFreeFamily& fam) { return li_terms(fam).slack(); }

/// sum_{alpha,beta} H^alpha H^beta sigma~_{alpha beta}; bounded by H^2 rho^2.
inline double mean_sigma_pairing(const ShapeFamily& fam) {
  const TracelessSplit split = traceless_part(fam);
  double s = 0.0;
  for (std::size_t a = 0; a < fam.p(); ++a)
    for (std::size_t b = 0; b < fam.p(); ++b)
      s += fam.mean()[a] * fam.mean()[b] * split.sigma.sigma(a, b);
  return s;
}

/// p fully symmetric 3-tensors t^alpha_{ijk} on R^n. Only sorted index
/// triples are stored, so symmetry holds by construction.
class SymTensor3 {
 public:
  SymTensor3(std::size_t n, std::size_t p) : n_(n), p_(p), data_(p * n * n * n, 0.0) {
    if (n == 0 || p == 0) throw DimensionError("SymTensor3: n and p must be positive");
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }

  double operator()(std::size_t alpha, std::size_t i, std::size_t j, std::size_t k) const {
    return data_[index(alpha, i, j, k)];
  }
  void set(std::size_t alpha, std::size_t i, std::size_t j, std::size_t k, double v) {
    data_[index(alpha, i, j, k)] = v;
  }

  /// Sum over all ordered index triples.
  double norm_sq() const {
    double s = 0.0;
    for (std::size_t a = 0; a < p_; ++a)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          for (std::size_t k = 0; k < n_; ++k) {
            const double v = (*this)(a, i, j, k);
            s += v * v;
          }
    return s;
  }

  /// v^alpha_i = sum_k t^alpha_{kki}.
  std::vector<Vector> contraction() const {
    std::vector<Vector> c(p_, Vector(n_, 0.0));
    for (std::size_t a = 0; a < p_; ++a)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) c[a][i] += (*this)(a, k, k, i);
    return c;
  }

 private:
  std::size_t index(std::size_t alpha, std::size_t i, std::size_t j, std::size_t k) const {
    if (alpha >= p_ || i >= n_ || j >= n_ || k >= n_)
      throw DimensionError("SymTensor3: index out of range");
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    return ((alpha * n_ + i) * n_ + j) * n_ + k;
  }

  std::size_t n_, p_;
  std::vector<double> data_;
};

struct FTensorSplit {
  SymTensor3 f;                 // trace-free part
  std::vector<Vector> mean;     // H^alpha_i = (1/n) sum_k t^alpha_{kki}
  double t_norm_sq = 0.0;       // |t|^2
  double f_norm_sq = 0.0;       // |F|^2
  double mean_norm_sq = 0.0;    // sum (H^alpha_i)^2
  double identity_residual = 0.0;
};

/// F^a_ijk = t^a_ijk - n/(n+2) (H^a_i d_jk + H^a_j d_ik + H^a_k d_ij), and the
/// residual of |F|^2 = |t|^2 - 3n^2/(n+2) sum (H^a_i)^2.
inline FTensorSplit f_tensor_decompose(const SymTensor3& t) {
  const std::size_t n = t.n(), p = t.p();
  const double nd = static_cast<double>(n);
  const double c = nd / (nd + 2.0);
  FTensorSplit out{SymTensor3(n, p), t.contraction()};
  for (auto& v : out.mean)
    for (double& x : v) x /= nd;

  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
          const auto& h = out.mean[a];
          const double trace_part = (j == k ? h[i] : 0.0) + (i == k ? h[j] : 0.0) +
                                    (i == j ? h[k] : 0.0);
          out.f.set(a, i, j, k, t(a, i, j, k) - c * trace_part);
        }

  out.t_norm_sq = t.norm_sq();
  out.f_norm_sq = out.f.norm_sq();
  for (const auto& v : out.mean) out.mean_norm_sq += dot(v, v);
  const double predicted = out.t_norm_sq - 3.0 * nd * nd / (nd + 2.0) * out.mean_norm_sq;
  out.identity_residual = std::abs(out.f_norm_sq - predicted);
  return out;
}

}  // namespace willmore
