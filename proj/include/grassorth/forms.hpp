#pragma once

// The indefinite Hermitian form of signature (r; s; t) on C^{r+s+t}:
//   <z, w> = sum_{i < r} z_i conj(w_i) - sum_{r <= i < r+s} z_i conj(w_i)
// The trailing t coordinates are kept explicitly and contribute nothing.

#include <cstddef>
#include <string>

#include "grassorth/errors.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

struct Signature {
  size_t r = 0;
  size_t s = 0;
  size_t t = 0;

  Signature() = default;
  Signature(size_t r_, size_t s_, size_t t_ = 0) : r(r_), s(s_), t(t_) {
    require(r + s + t >= 1, ErrorCode::InvalidArgument, "signature must have ambient dimension >= 1");
  }

  size_t dim() const { return r + s + t; }
  bool nondegenerate() const { return t == 0; }

  /// +1, -1 or 0 for coordinate i.
  int weight(size_t i) const { return i < r ? 1 : (i < r + s ? -1 : 0); }

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline std::string to_string(const Signature& sig) {
  return "(" + std::to_string(sig.r) + "," + std::to_string(sig.s) + "," + std::to_string(sig.t) + ")";
}

/// diag(+1 x r, -1 x s, 0 x t); I_{r,s} when t = 0.
template <Scalar T>
Matrix<T> form_matrix(const Signature& sig) {
  Matrix<T> j(sig.dim(), sig.dim());
  for (size_t i = 0; i < sig.dim(); ++i) j(i, i) = ScalarTraits<T>::from_int(sig.weight(i));
  return j;
}

template <Scalar T>
T inner_product(std::span<const T> z, std::span<const T> w, const Signature& sig) {
  require(z.size() == sig.dim() && w.size() == sig.dim(), ErrorCode::DimensionMismatch,
          "inner_product: vector length " + std::to_string(z.size()) + "/" + std::to_string(w.size()) +
              " vs signature dimension " + std::to_string(sig.dim()));
  using Tr = ScalarTraits<T>;
  T pos = Tr::zero();
  T neg = Tr::zero();
  for (size_t i = 0; i < sig.r; ++i) pos += z[i] * Tr::conj(w[i]);
  for (size_t i = sig.r; i < sig.r + sig.s; ++i) neg += z[i] * Tr::conj(w[i]);
  return pos - neg;
}

template <Scalar T>
T inner_product(const Vec<T>& z, const Vec<T>& w, const Signature& sig) {
  return inner_product(std::span<const T>(z), std::span<const T>(w), sig);
}

template <Scalar T>
T inner_product(std::span<T> z, std::span<T> w, const Signature& sig) {
  return inner_product(std::span<const T>(z), std::span<const T>(w), sig);
}

/// <z, z>; the imaginary part vanishes identically and is dropped.
template <Scalar T>
RealOf<T> norm_sq(std::span<const T> z, const Signature& sig) {
  require(z.size() == sig.dim(), ErrorCode::DimensionMismatch, "norm_sq: vector length vs signature");
  using Tr = ScalarTraits<T>;
  RealOf<T> acc = 0;
  for (size_t i = 0; i < sig.r + sig.s; ++i) {
    const RealOf<T> m = Tr::real(z[i] * Tr::conj(z[i]));
    if (sig.weight(i) > 0) {
      acc += m;
    } else {
      acc -= m;
    }
  }
  return acc;
}

template <Scalar T>
RealOf<T> norm_sq(const Vec<T>& z, const Signature& sig) {
  return norm_sq(std::span<const T>(z), sig);
}

template <Scalar T>
RealOf<T> norm_sq(std::span<T> z, const Signature& sig) {
  return norm_sq(std::span<const T>(z), sig);
}

enum class VectorKind { Positive, Negative, Null };

inline const char* to_string(VectorKind k) {
  switch (k) {
    case VectorKind::Positive: return "Positive";
    case VectorKind::Negative: return "Negative";
    case VectorKind::Null: return "Null";
  }
  return "?";
}

/// Null iff |<z,z>| <= tol. Exact mode requires tol == 0.
template <Scalar T>
VectorKind classify_vector(const Vec<T>& z, const Signature& sig, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  require(tol >= 0.0, ErrorCode::InvalidArgument, "classify_vector: negative tolerance");
  if constexpr (is_exact_v<T>) {
    require(tol == 0.0, ErrorCode::InvalidArgument, "classify_vector: exact mode requires tol = 0");
  }
  switch (ScalarTraits<T>::sign(norm_sq(z, sig), tol)) {
    case 1: return VectorKind::Positive;
    case -1: return VectorKind::Negative;
    default: return VectorKind::Null;
  }
}

}  // namespace grassorth
