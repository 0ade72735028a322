#pragma once

// Points of the Grassmannian G(r, r+s) with the orthogonal structure induced by
// <.,.>_{r,s}. A point is the row space of a full-rank r x (r+s) representative
// matrix; we store the reduced row-echelon representative so equal points compare
// equal. Chart coordinates are the r x s matrices Z of the points [I_r, Z].

#include <cstddef>
#include <cstdint>

#include "grassorth/errors.hpp"
#include "grassorth/forms.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/random.hpp"
#include "grassorth/subspaces.hpp"

namespace grassorth {

/// Chart coordinates Z (r x s) of the point [I_r, Z].
template <Scalar T>
using ChartMatrix = Matrix<T>;

template <Scalar T>
class GrassPoint {
 public:
  GrassPoint() = default;

  size_t r() const { return r_; }
  size_t s() const { return s_; }
  Signature signature() const { return {r_, s_, 0}; }
  /// Canonical (reduced row-echelon) representative.
  const Matrix<T>& rep() const { return a_; }
  Subspace<T> subspace(double tol = is_exact_v<T> ? 0.0 : kDefaultTol) const { return Subspace<T>::from_rows(a_, tol); }

  friend bool operator==(const GrassPoint&, const GrassPoint&) = default;

  /// Wraps a representative that is already in reduced row-echelon form.
  static GrassPoint from_canonical(Matrix<T> rep) {
    GrassPoint p;
    p.r_ = rep.rows();
    p.s_ = rep.cols() - rep.rows();
    p.a_ = std::move(rep);
    return p;
  }

 private:
  size_t r_ = 0;
  size_t s_ = 0;
  Matrix<T> a_;
};

/// Canonicalizes a representative matrix; RankDeficient if rank(A) < r.
template <Scalar T>
GrassPoint<T> point_from_matrix(const Matrix<T>& a, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  require(a.rows() >= 1 && a.cols() >= a.rows(), ErrorCode::DimensionMismatch,
          "point_from_matrix: representative must be r x (r+s) with r >= 1");
  auto red = rref(a, tol);
  require(red.rank() == a.rows(), ErrorCode::RankDeficient,
          "point_from_matrix: rank " + std::to_string(red.rank()) + " < " + std::to_string(a.rows()));
  return GrassPoint<T>::from_canonical(std::move(red.reduced));
}

/// The point [I_r, Z] (already in canonical form).
template <Scalar T>
GrassPoint<T> chart_point(const ChartMatrix<T>& z) {
  require(z.rows() >= 1, ErrorCode::DimensionMismatch, "chart_point: r >= 1 required");
  const size_t r = z.rows();
  Matrix<T> a(r, r + z.cols());
  for (size_t i = 0; i < r; ++i) {
    a(i, i) = ScalarTraits<T>::one();
    for (size_t j = 0; j < z.cols(); ++j) a(i, r + j) = z(i, j);
  }
  return GrassPoint<T>::from_canonical(std::move(a));
}

/// Inverse of chart_point; NotInChart when the leading r x r block is singular.
template <Scalar T>
ChartMatrix<T> to_chart(const GrassPoint<T>& p, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const Matrix<T> lead = p.rep().col_block(0, p.r());
  const bool identity_lead = is_exact_v<T> ? lead == Matrix<T>::identity(p.r())
                                           : max_abs_diff(lead, Matrix<T>::identity(p.r())) <= tol;
  require(identity_lead, ErrorCode::NotInChart, "to_chart: leading block of the representative is singular");
  return p.rep().col_block(p.r(), p.s());
}

/// A_p I_{r,s} A_q^H on the canonical representatives.
template <Scalar T>
Matrix<T> pairing(const GrassPoint<T>& p, const GrassPoint<T>& q) {
  require(p.r() == q.r() && p.s() == q.s(), ErrorCode::DimensionMismatch, "pairing: points of different shapes");
  return p.rep() * form_matrix<T>(p.signature()) * q.rep().adjoint();
}

template <Scalar T>
bool is_orthogonal(const GrassPoint<T>& p, const GrassPoint<T>& q, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const Matrix<T> m = pairing(p, q);
  if constexpr (is_exact_v<T>) return m == Matrix<T>(m.rows(), m.cols());
  return max_abs(m) <= tol;
}

enum class PointKind { Null, Positive, Indefinite, Degenerate };

inline const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::Null: return "Null";
    case PointKind::Positive: return "Positive";
    case PointKind::Indefinite: return "Indefinite";
    case PointKind::Degenerate: return "Degenerate";
  }
  return "?";
}

/// By inertia of pairing(p, p): (0,0,r) Null, (r,0,0) Positive, nondegenerate
/// otherwise Indefinite, and any other inertia with null directions Degenerate.
template <Scalar T>
PointKind classify_point(const GrassPoint<T>& p, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const SubSignature in = inertia(pairing(p, p), tol);
  if (in.c == p.r()) return PointKind::Null;
  if (in.a == p.r()) return PointKind::Positive;
  if (in.c == 0) return PointKind::Indefinite;
  return PointKind::Degenerate;
}

template <Scalar T>
Matrix<T> defect(const ChartMatrix<T>& z) {
  return Matrix<T>::identity(z.rows()) - z * z.adjoint();
}

/// I - Z Z^H positive definite (decided by inertia, not Cholesky).
template <Scalar T>
bool in_domain(const ChartMatrix<T>& z, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  return inertia(defect(z), tol).a == z.rows();
}

/// Z Z^H = I within tol.
template <Scalar T>
bool in_shilov(const ChartMatrix<T>& z, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const Matrix<T> d = defect(z);
  if constexpr (is_exact_v<T>) return d == Matrix<T>(d.rows(), d.cols());
  return max_abs(d) <= tol;
}

/// First r rows of a seeded random s x s unitary: Z Z^H = I.
inline ChartMatrix<Complex> sample_shilov(size_t r, size_t s, uint64_t seed) {
  require(r >= 1 && r <= s, ErrorCode::InvalidArgument, "sample_shilov: requires 1 <= r <= s");
  Rng rng(seed);
  return random_unitary(s, rng).row_block(0, r);
}

/// A generic chart point: Gaussian entries rescaled so the Frobenius norm is
/// uniform in [0.5, 1.5] (float), or small-height Gaussian rationals (exact).
template <Scalar T>
ChartMatrix<T> sample_open_point(size_t r, size_t s, uint64_t seed) {
  Rng rng(seed);
  if constexpr (is_exact_v<T>) {
    Matrix<T> z(r, s);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < s; ++j) z(i, j) = random_gauss_rational(rng, 4);
    return z;
  } else {
    Matrix<Complex> z = random_matrix<Complex>(r, s, rng);
    const double target = uniform(rng, 0.5, 1.5);
    double norm2 = 0.0;
    for (const auto& x : z.data()) norm2 += std::norm(x);
    if (norm2 == 0.0) {
      z(0, 0) = 1.0;
      norm2 = 1.0;
    }
    return Complex(target / std::sqrt(norm2), 0.0) * z;
  }
}

/// For r = 1: w with <(1, z), (1, w)>_{1,s} = 1 - sum_k z_k conj(w_k) = 0. All conj(w_k)
/// but the pivot coordinate are drawn freely; the pivot one solves the constraint.
/// Pivot: largest |z_k| (float), first nonzero (exact).
template <Scalar T>
ChartMatrix<T> sample_orthogonal_partner(const ChartMatrix<T>& z, uint64_t seed,
                                         double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  using Tr = ScalarTraits<T>;
  require(z.rows() == 1, ErrorCode::InvalidArgument, "sample_orthogonal_partner: source rank must be 1");
  const size_t s = z.cols();
  std::optional<size_t> piv;
  if constexpr (Tr::exact) {
    for (size_t k = 0; k < s && !piv; ++k)
      if (!z(0, k).is_zero()) piv = k;
  } else {
    double best = tol;
    for (size_t k = 0; k < s; ++k)
      if (Tr::magnitude(z(0, k)) > best) {
        best = Tr::magnitude(z(0, k));
        piv = k;
      }
  }
  require(piv.has_value(), ErrorCode::ZeroVector, "sample_orthogonal_partner: z = 0 has no partner in the chart");

  Rng rng(seed);
  Vec<T> wbar(s, Tr::zero());
  T acc = Tr::one();
  for (size_t k = 0; k < s; ++k) {
    if (k == *piv) continue;
    if constexpr (Tr::exact) {
      wbar[k] = random_gauss_rational(rng, 4);
    } else {
      wbar[k] = complex_normal(rng) / std::sqrt(static_cast<double>(s));
    }
    acc -= z(0, k) * wbar[k];
  }
  wbar[*piv] = acc / z(0, *piv);
  ChartMatrix<T> w(1, s);
  for (size_t k = 0; k < s; ++k) w(0, k) = Tr::conj(wbar[k]);
  return w;
}

}  // namespace grassorth
