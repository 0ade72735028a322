#pragma once

// Seeded sampling primitives. Every sampler takes an explicit seed; independent
// trials derive their own seed from a master seed and a counter.

#include <cstdint>
#include <random>

#include "grassorth/matrix.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t counter) {
  return splitmix64(master ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
inline Complex complex_normal(Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

inline double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  return ud(rng);
}

/// a/b with a uniform in [-bound, bound], b uniform in [1, bound].
inline mpq_class random_rational(Rng& rng, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<long> den(1, bound);
  const long a = num(rng);
  const long b = den(rng);
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

inline GaussRational random_gauss_rational(Rng& rng, long bound) {
  mpq_class re = random_rational(rng, bound);
  mpq_class im = random_rational(rng, bound);
  return {re, im};
}

/// Random scalar of either backend: complex Gaussian, or a Gaussian rational with small height.
template <Scalar T>
T random_scalar(Rng& rng) {
  if constexpr (is_exact_v<T>) {
    return random_gauss_rational(rng, 16);
  } else {
    return complex_normal(rng);
  }
}

template <Scalar T>
Matrix<T> random_matrix(size_t rows, size_t cols, Rng& rng) {
  Matrix<T> m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) m(i, j) = random_scalar<T>(rng);
  return m;
}

/// Modified Gram-Schmidt on the rows of a float matrix with one re-orthogonalization
/// pass; returns false if a row collapses (relative norm below 1e-10).
inline bool orthonormalize_rows(Matrix<Complex>& m) {
  for (size_t i = 0; i < m.rows(); ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t k = 0; k < i; ++k) {
        Complex dot = 0.0;
        for (size_t j = 0; j < m.cols(); ++j) dot += m(i, j) * std::conj(m(k, j));
        for (size_t j = 0; j < m.cols(); ++j) m(i, j) -= dot * m(k, j);
      }
    }
    double norm2 = 0.0;
    for (size_t j = 0; j < m.cols(); ++j) norm2 += std::norm(m(i, j));
    const double norm = std::sqrt(norm2);
    if (!(norm > 1e-10)) return false;
    for (size_t j = 0; j < m.cols(); ++j) m(i, j) /= norm;
  }
  return true;
}

/// Haar-like random unitary of size n from orthonormalized Gaussian rows.
inline Matrix<Complex> random_unitary(size_t n, Rng& rng) {
  for (;;) {
    Matrix<Complex> m = random_matrix<Complex>(n, n, rng);
    if (orthonormalize_rows(m)) return m;
  }
}

}  // namespace grassorth
