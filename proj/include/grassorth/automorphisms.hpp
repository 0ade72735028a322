#pragma once

// The indefinite unitary group U(r,s) = {M : M I_{r,s} M^H = I_{r,s}} and its
// action on G(r, r+s). Row-vector convention: a representative A transforms as
// A -> A g^T, i.e. every basis row v becomes (g v^T)^T.

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "grassorth/errors.hpp"
#include "grassorth/forms.hpp"
#include "grassorth/grassmannian.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/random.hpp"
#include "grassorth/subspaces.hpp"

namespace grassorth {

template <Scalar T>
struct IndefUnitary {
  Matrix<T> m;
  Signature sig;

  size_t dim() const { return sig.dim(); }

  /// I_{r,s} M^H I_{r,s}.
  IndefUnitary inverse() const {
    const Matrix<T> j = form_matrix<T>(sig);
    return {j * m.adjoint() * j, sig};
  }

  friend IndefUnitary operator*(const IndefUnitary& a, const IndefUnitary& b) {
    require(a.sig == b.sig, ErrorCode::DimensionMismatch, "IndefUnitary product: signatures differ");
    return {a.m * b.m, a.sig};
  }

  static IndefUnitary identity(const Signature& sig) { return {Matrix<T>::identity(sig.dim()), sig}; }
};

/// ||M I_{r,s} M^H - I_{r,s}||_max <= tol.
template <Scalar T>
bool verify_indefinite_unitary(const Matrix<T>& m, const Signature& sig,
                               double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  require(sig.t == 0, ErrorCode::InvalidArgument, "verify_indefinite_unitary: requires t = 0");
  require(m.rows() == sig.dim() && m.cols() == sig.dim(), ErrorCode::DimensionMismatch,
          "verify_indefinite_unitary: matrix must be (r+s) x (r+s)");
  const Matrix<T> j = form_matrix<T>(sig);
  const Matrix<T> d = m * j * m.adjoint() - j;
  if constexpr (is_exact_v<T>) return d == Matrix<T>(d.rows(), d.cols());
  return max_abs(d) <= tol;
}

template <Scalar T>
double unitary_residual(const IndefUnitary<T>& g) {
  const Matrix<T> j = form_matrix<T>(g.sig);
  return max_abs(g.m * j * g.m.adjoint() - j);
}

namespace detail {
inline Matrix<Complex> block_unitary(const Signature& sig, Rng& rng) {
  Matrix<Complex> d(sig.dim(), sig.dim());
  if (sig.r > 0) {
    const auto u = random_unitary(sig.r, rng);
    for (size_t i = 0; i < sig.r; ++i)
      for (size_t j = 0; j < sig.r; ++j) d(i, j) = u(i, j);
  }
  if (sig.s > 0) {
    const auto u = random_unitary(sig.s, rng);
    for (size_t i = 0; i < sig.s; ++i)
      for (size_t j = 0; j < sig.s; ++j) d(sig.r + i, sig.r + j) = u(i, j);
  }
  return d;
}

/// [[cosh a, sinh a], [sinh a, cosh a]] on coordinates (i, j), i positive, j negative.
inline Matrix<Complex> boost(const Signature& sig, size_t i, size_t j, double a) {
  Matrix<Complex> b = Matrix<Complex>::identity(sig.dim());
  b(i, i) = std::cosh(a);
  b(j, j) = std::cosh(a);
  b(i, j) = std::sinh(a);
  b(j, i) = std::sinh(a);
  return b;
}
}  // namespace detail

/// Seeded product D_0 B_1 D_1 ... B_k D_k of block-diagonal unitaries diag(U_r, U_s)
/// and hyperbolic boosts with parameter uniform in [-1, 1]. `boosts` defaults to r + s.
inline IndefUnitary<Complex> random_automorphism(const Signature& sig, uint64_t seed, int boosts = -1) {
  require(sig.t == 0 && sig.dim() >= 1, ErrorCode::InvalidArgument, "random_automorphism: requires t = 0");
  Rng rng(seed);
  const size_t count = boosts < 0 ? sig.r + sig.s : static_cast<size_t>(boosts);
  Matrix<Complex> m = detail::block_unitary(sig, rng);
  if (sig.r == 0 || sig.s == 0) return {m, sig};
  std::uniform_int_distribution<size_t> pos(0, sig.r - 1);
  std::uniform_int_distribution<size_t> neg(sig.r, sig.r + sig.s - 1);
  for (size_t k = 0; k < count; ++k) {
    const size_t i = pos(rng);
    const size_t j = neg(rng);
    const double a = uniform(rng, -1.0, 1.0);
    m = m * detail::boost(sig, i, j, a) * detail::block_unitary(sig, rng);
  }
  return {m, sig};
}

template <Scalar T>
GrassPoint<T> act_on_point(const IndefUnitary<T>& g, const GrassPoint<T>& p,
                           double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  require(g.sig.r == p.r() && g.sig.s == p.s(), ErrorCode::DimensionMismatch, "act_on_point: shape mismatch");
  return point_from_matrix(p.rep() * g.m.transpose(), tol);
}

/// Fractional-linear chart form: with g^T = [[M11, M12], [M21, M22]],
/// Z' = (M11 + Z M21)^{-1} (M12 + Z M22).
template <Scalar T>
ChartMatrix<T> act_on_chart(const IndefUnitary<T>& g, const ChartMatrix<T>& z,
                            double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const size_t r = g.sig.r;
  const size_t s = g.sig.s;
  require(z.rows() == r && z.cols() == s, ErrorCode::DimensionMismatch, "act_on_chart: shape mismatch");
  const Matrix<T> gt = g.m.transpose();
  const Matrix<T> top = gt.row_block(0, r);
  const Matrix<T> bottom = gt.row_block(r, s);
  const Matrix<T> m11 = top.col_block(0, r);
  const Matrix<T> m12 = top.col_block(r, s);
  const Matrix<T> m21 = bottom.col_block(0, r);
  const Matrix<T> m22 = bottom.col_block(r, s);
  auto zp = solve(m11 + z * m21, m12 + z * m22, tol);
  require(zp.has_value(), ErrorCode::NotInChart, "act_on_chart: image leaves the chart");
  return *zp;
}

/// The base null point [I_r, I_r, 0], i.e. chart Z = [I_r | 0].
template <Scalar T>
GrassPoint<T> base_null_point(size_t r, size_t s) {
  require(r >= 1 && r <= s, ErrorCode::InvalidArgument, "base_null_point: requires 1 <= r <= s");
  ChartMatrix<T> z(r, s);
  for (size_t i = 0; i < r; ++i) z(i, i) = ScalarTraits<T>::one();
  return chart_point(z);
}

namespace detail {

/// Columns [u_1..u_r, v_1..v_r, c_1..c_{s-r}] with Q^H I_{r,s} Q = I_{r,s}, adapted to
/// the null plane spanned by the rows of `rep`: with n_i a Euclidean-orthonormal basis
/// of the plane, m_i = I_{r,s} n_i is a dual null frame (<n_i, m_j> = δ_ij,
/// <m_i, m_j> = <n_i, n_j> = 0), u_i = (n_i + m_i)/√2, v_i = (n_i - m_i)/√2, and the
/// c_k orthonormalize the negative-definite complement of span(n, m).
inline Matrix<Complex> witt_frame(const Matrix<Complex>& rep, const Signature& sig, Rng& rng, double tol) {
  const size_t r = sig.r;
  const size_t s = sig.s;
  const size_t n = sig.dim();
  Matrix<Complex> nulls = rep;
  require(orthonormalize_rows(nulls), ErrorCode::RankDeficient, "witt_frame: degenerate null frame");
  Matrix<Complex> duals = nulls;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j) duals(i, j) *= static_cast<double>(sig.weight(j));

  Matrix<Complex> q(n, n);
  const double h = 1.0 / std::sqrt(2.0);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j) {
      q(j, i) = h * (nulls(i, j) + duals(i, j));
      q(j, r + i) = h * (nulls(i, j) - duals(i, j));
    }

  if (s > r) {
    std::vector<Vec<Complex>> hyper;
    for (size_t i = 0; i < r; ++i) {
      hyper.push_back(nulls.row(i));
      hyper.push_back(duals.row(i));
    }
    const auto comp = orth_complement(span(hyper, n, tol), sig, tol);
    require(comp.dim() == s - r, ErrorCode::DegenerateComplement, "witt_frame: complement has wrong dimension");
    // Gram-Schmidt for the positive-definite form -<.,.> on the complement.
    Matrix<Complex> c = random_unitary(s - r, rng) * comp.basis();
    for (size_t i = 0; i < c.rows(); ++i) {
      for (int pass = 0; pass < 2; ++pass)
        for (size_t k = 0; k < i; ++k) {
          const Complex dot = -inner_product(c.row_span(i), c.row_span(k), sig);
          for (size_t j = 0; j < n; ++j) c(i, j) -= dot * c(k, j);
        }
      const double norm = std::sqrt(-norm_sq(c.row_span(i), sig));
      for (size_t j = 0; j < n; ++j) c(i, j) /= norm;
    }
    for (size_t i = 0; i < c.rows(); ++i)
      for (size_t j = 0; j < n; ++j) q(j, 2 * r + i) = c(i, j);
  }
  return q;
}

}  // namespace detail

/// g in U(r,s) with act_on_point(g, p) = base_null_point(r, s): g = Q_base · Q_p^{-1}
/// for Witt frames Q adapted to each null plane. The seed picks the rotation of the
/// definite complement (the stabilizer freedom).
inline IndefUnitary<Complex> move_null_to_base(const GrassPoint<Complex>& p, uint64_t seed, double tol = kDefaultTol) {
  require(p.r() <= p.s(), ErrorCode::InvalidArgument, "move_null_to_base: requires r <= s");
  require(classify_point(p, tol) == PointKind::Null, ErrorCode::NotNull, "move_null_to_base: point is not null");
  const Signature sig = p.signature();
  Rng rng(seed);
  const Matrix<Complex> qp = detail::witt_frame(p.rep(), sig, rng, tol);
  const Matrix<Complex> q0 = detail::witt_frame(base_null_point<Complex>(p.r(), p.s()).rep(), sig, rng, tol);
  const Matrix<Complex> j = form_matrix<Complex>(sig);
  return {q0 * (j * qp.adjoint() * j), sig};
}

}  // namespace grassorth
