#pragma once

// Dense kernels for the small matrices that show up as shape operators,
// Gram matrices and frames. Dimensions are tiny (<= ~10), so everything is
// plain row-major storage and O(n^3) loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "willmore/error.hpp"

namespace willmore {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// General dense matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vector>& cols) {
    if (cols.empty()) return {};
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_) throw DimensionError("from_columns: ragged input");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols_ != x.size()) throw DimensionError("matrix-vector product: size mismatch");
    Vector y(a.rows_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  std::span<const double> data() const noexcept { return data_; }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric n x n matrix stored as its packed upper triangle, so symmetry
/// holds by construction.
class SymmetricMatrix {
 public:
  SymmetricMatrix() : SymmetricMatrix(1) {}
  explicit SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {
    if (dim == 0) throw DimensionError("SymmetricMatrix: dim must be >= 1");
  }

  static SymmetricMatrix identity(std::size_t n) { return scaled_identity(n, 1.0); }

  static SymmetricMatrix scaled_identity(std::size_t n, double c) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, c);
    return m;
  }

  static SymmetricMatrix diagonal(std::span<const double> d) {
    SymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
  }

  /// Symmetric part (A + A^T)/2 of a square matrix.
  static SymmetricMatrix symmetric_part(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("symmetric_part: matrix not square");
    SymmetricMatrix m(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = i; j < a.cols(); ++j) m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    return m;
  }

  /// Row-major nested initializer, e.g. {{0,1},{1,0}}. Only the upper
  /// triangle is read; the caller is responsible for passing symmetric data.
  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SymmetricMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw DimensionError("from_rows: matrix not square");
      for (std::size_t j = i; j < rows.size(); ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix to_matrix() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  SymmetricMatrix& operator+=(const SymmetricMatrix& o) {
    check_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  SymmetricMatrix& operator-=(const SymmetricMatrix& o) {
    check_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  SymmetricMatrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(SymmetricMatrix a, double s) { return a *= s; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw DimensionError("SymmetricMatrix: index out of range");
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i - 1) / 2 + (j - i);
  }
  void check_dim(const SymmetricMatrix& o) const {
    if (dim_ != o.dim_) throw DimensionError("SymmetricMatrix: dimension mismatch");
  }

  std::size_t dim_;
  std::vector<double> data_;
};

inline Matrix operator*(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return a.to_matrix() * b.to_matrix();
}

/// N(A) = trace(A A^T), the squared Frobenius norm.
inline double frob_norm_sq(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return s;
}

inline double frob_norm_sq(const SymmetricMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += a(i, i) * a(i, i);
    for (std::size_t j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * a(i, j);
  }
  return s;
}

/// Frobenius inner product trace(A B).
inline double frob_inner(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("frob_inner: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += a(i, i) * b(i, i);
    for (std::size_t j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * b(i, j);
  }
  return s;
}

/// AB - BA. Antisymmetric for symmetric inputs.
inline Matrix commutator(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim())
    throw DimensionError("commutator: dimensions " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()) + " differ");
  const std::size_t n = a.dim();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j) - b(i, k) * a(k, j);
      c(i, j) = s;
    }
  return c;
}

/// Q^T A Q for a square Q of matching size.
inline SymmetricMatrix conjugate(const SymmetricMatrix& a, const Matrix& q) {
  if (q.rows() != a.dim()) throw DimensionError("conjugate: size mismatch");
  const Matrix full = q.transpose() * a.to_matrix() * q;
  return SymmetricMatrix::symmetric_part(full);
}

/// Unit, mutually orthogonal ambient vectors.
class OrthogonalFrame {
 public:
  static constexpr double kTolerance = 1e-12;

  OrthogonalFrame() = default;

  OrthogonalFrame(std::size_t ambient_dim, std::vector<Vector> vectors)
      : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
      if (vectors_[i].size() != ambient_dim_)
        throw DimensionError("OrthogonalFrame: vector " + std::to_string(i) + " has wrong length");
      if (std::abs(norm(vectors_[i]) - 1.0) > kTolerance)
        throw DomainError("OrthogonalFrame: vector " + std::to_string(i) + " is not unit");
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(dot(vectors_[i], vectors_[j])) > kTolerance)
          throw DomainError("OrthogonalFrame: vectors " + std::to_string(j) + " and " +
                            std::to_string(i) + " are not orthogonal");
    }
  }

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Vector> vectors_;
};

namespace detail {

// Removes the components of v along the (orthonormal) basis; two passes of
// modified Gram-Schmidt keep the result orthogonal to rounding level.
inline void project_out(Vector& v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
}

}  // namespace detail

/// Orthonormalizes the vectors in order. The Gram determinant of the
/// normalized inputs must stay above 1e-10; otherwise a RankError carries the
/// index of the first vector that makes the set (nearly) dependent.
inline OrthogonalFrame gram_schmidt(const std::vector<Vector>& vectors) {
  constexpr double kMinGramDet = 1e-10;
  if (vectors.empty()) return {};
  const std::size_t dim = vectors.front().size();
  std::vector<Vector> out;
  out.reserve(vectors.size());
  double gram_det = 1.0;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim) throw DimensionError("gram_schmidt: ragged input");
    Vector v = vectors[k];
    const double len = norm(v);
    if (len == 0.0) throw RankError("gram_schmidt: vector " + std::to_string(k) + " is zero", k);
    for (double& x : v) x /= len;
    detail::project_out(v, out);
    const double r = norm(v);
    gram_det *= r * r;
    if (!(gram_det > kMinGramDet))
      throw RankError("gram_schmidt: vector " + std::to_string(k) +
                          " is nearly dependent on its predecessors",
                      k);
    for (double& x : v) x /= r;
    out.push_back(std::move(v));
  }
  return OrthogonalFrame(dim, std::move(out));
}

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column k belongs to values[k]
};

/// Cyclic Jacobi eigensolver (row-cyclic sweeps). Eigenvalues are sorted
/// descending; exact ties keep the original pivot order.
inline EigenDecomposition jacobi_eigen(const SymmetricMatrix& a, int max_sweeps = 100) {
  const std::size_t n = a.dim();
  Matrix m = a.to_matrix();
  Matrix v = Matrix::identity(n);
  const double threshold = 1e-14 * (1.0 + frob_norm_sq(a));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep++ >= max_sweeps)
      throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) > m(j, j); });
  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
inline SymmetricMatrix inverse_spd(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw RankError("inverse_spd: matrix is not positive definite", j);
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  // inv(L), lower triangular
  Matrix li(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    li(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * li(k, j);
      li(i, j) = s / l(i, i);
    }
  }
  SymmetricMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < n; ++k) s += li(k, i) * li(k, j);
      inv.set(i, j, s);
    }
  return inv;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: matrix not square");
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

}  // namespace willmore
