#pragma once

// Randomized property suites for the pointwise inequalities. Trial k draws
// from Rng::stream(seed, k), so a suite is reproducible from its seed.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "willmore/random.hpp"
#include "willmore/tensor.hpp"

namespace willmore {

struct SuiteReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double max_residual = 0.0;  // used by suites that check an identity

  void record_slack(double slack, double floor) {
    min_slack = std::min(min_slack, slack);
    if (slack < floor) ++violations;
    ++trials;
  }
};

inline constexpr double kInequalityFloor = -1e-10;

/// Random symmetric pairs, dims 2..6.
inline SuiteReport chern_suite(std::uint64_t seed, std::uint64_t trials) {
  SuiteReport r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const SymmetricMatrix a = random_symmetric(rng, n);
    const SymmetricMatrix b = random_symmetric(rng, n);
    r.record_slack(check_chern_inequality(a, b), kInequalityFloor);
  }
  return r;
}

/// Random trace-free families, n in 2..5, p in 1..4.
inline SuiteReport li_suite(std::uint64_t seed, std::uint64_t trials) {
  SuiteReport r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 5));
    const auto p = static_cast<std::size_t>(rng.uniform_int(1, 4));
    std::vector<SymmetricMatrix> ms;
    for (std::size_t a = 0; a < p; ++a) ms.push_back(random_trace_free(rng, n));
    r.record_slack(check_li_inequality(TraceFreeFamily(std::move(ms))), kInequalityFloor);
  }
  return r;
}

inline SymTensor3 random_sym_tensor(Rng& rng, std::size_t n, std::size_t p) {
  SymTensor3 t(n, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) t.set(a, i, j, k, rng.uniform(-1.0, 1.0));
  return t;
}

/// Random fully symmetric tensors, n in 1..5, p in 1..3. The slack is
/// |t|^2 - 3n^2/(n+2) |H|^2 (= |F|^2 >= 0); max_residual tracks the
/// relative norm-identity residual.
inline SuiteReport f_tensor_suite(std::uint64_t seed, std::uint64_t trials) {
  SuiteReport r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const auto p = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const FTensorSplit s = f_tensor_decompose(random_sym_tensor(rng, n, p));
    const double nd = static_cast<double>(n);
    const double slack = s.t_norm_sq - 3.0 * nd * nd / (nd + 2.0) * s.mean_norm_sq;
    r.record_slack(slack, kInequalityFloor);
    r.max_residual = std::max(r.max_residual, s.identity_residual / (1.0 + s.t_norm_sq));
  }
  return r;
}

// |x| in [0.5, 2] with a random sign; draws are sequenced explicitly.
inline double signed_magnitude(Rng& rng) {
  const double mag = rng.uniform(0.5, 2.0);
  return rng.uniform() < 0.5 ? -mag : mag;
}

/// Canonical pairs (lambda A~, mu B~) conjugated by a random orthogonal
/// matrix; counts how often equality_witness fails to recover a transform
/// with both residuals <= tol (reported as violations). min_slack is unused.
inline SuiteReport witness_suite(std::uint64_t seed, std::uint64_t trials, double tol = 1e-10) {
  SuiteReport r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    const Matrix q = random_orthogonal(rng, n);
    const double lambda = signed_magnitude(rng);
    const double mu = signed_magnitude(rng);
    const SymmetricMatrix a = conjugate(lambda * canonical_a(n), q);
    const SymmetricMatrix b = conjugate(mu * canonical_b(n), q);
    const auto w = equality_witness(a, b, tol);
    ++r.trials;
    if (!w) {
      ++r.violations;
      continue;
    }
    r.max_residual = std::max({r.max_residual, w->residual_a, w->residual_b});
  }
  return r;
}

/// Searches for three nonzero matrices attaining pairwise equality in the
/// commutator bound. Each trial starts from a conjugated canonical pair
/// (which is at equality) and adds a third matrix drawn from the span of the
/// pair plus a random perturbation of random weight. violations counts
/// triples found at pairwise equality (relative slack <= 1e-9); min_slack is
/// the smallest per-trial largest relative slack.
inline SuiteReport triple_equality_suite(std::uint64_t seed, std::uint64_t trials) {
  SuiteReport r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 5));
    const Matrix q = random_orthogonal(rng, n);
    const SymmetricMatrix base_a = rng.uniform(0.5, 2.0) * canonical_a(n);
    const SymmetricMatrix base_b = rng.uniform(0.5, 2.0) * canonical_b(n);
    const double ca = rng.uniform(-1.0, 1.0);
    const double cb = rng.uniform(-1.0, 1.0);
    SymmetricMatrix third = ca * canonical_a(n) + cb * canonical_b(n);
    const double weight = (k % 4 == 0) ? 0.0 : rng.uniform(0.0, 1.0);
    third += weight * random_symmetric(rng, n);
    if (frob_norm_sq(third) < 1e-6) third += canonical_a(n);
    const SymmetricMatrix m[3] = {conjugate(base_a, q), conjugate(base_b, q), conjugate(third, q)};

    // distance from pairwise equality: the largest relative slack of the three pairs
    double largest = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double scale = 2.0 * frob_norm_sq(m[i]) * frob_norm_sq(m[j]);
        largest = std::max(largest, check_chern_inequality(m[i], m[j]) / scale);
      }
    ++r.trials;
    r.min_slack = std::min(r.min_slack, largest);
    if (largest <= 1e-9) ++r.violations;
  }
  return r;
}

}  // namespace willmore
