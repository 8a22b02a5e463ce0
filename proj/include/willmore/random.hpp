#pragma once

// Seedable, splittable random streams. Every trial of a property suite owns
// a stream derived from (seed, trial index), so results do not depend on the
// order in which trials run. Doubles are produced from raw 64-bit output
// (not std::uniform_real_distribution) to stay bit-identical across
// standard library implementations.

#include <cstdint>
#include <random>

#include "willmore/linalg.hpp"

namespace willmore {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for (seed, index).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
  }

  Rng split() { return Rng(engine_()); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// Entries i.i.d. uniform on [-1, 1], then symmetrized.
inline SymmetricMatrix random_symmetric(Rng& rng, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  return SymmetricMatrix::symmetric_part(a);
}

/// random_symmetric projected onto the trace-free subspace.
inline SymmetricMatrix random_trace_free(Rng& rng, std::size_t n) {
  SymmetricMatrix a = random_symmetric(rng, n);
  const double shift = a.trace() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, a(i, i) - shift);
  return a;
}

/// Orthogonal matrix from the eigenvectors of a random symmetric matrix.
inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
  return jacobi_eigen(random_symmetric(rng, n)).vectors;
}

inline Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace willmore
