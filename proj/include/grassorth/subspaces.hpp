#pragma once

// Linear subspaces of C^n held in canonical reduced row-echelon form, and the
// signature calculus of the indefinite form restricted to them.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "grassorth/errors.hpp"
#include "grassorth/forms.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

/// Counts (a, b, c) of positive, negative and null directions of a restricted form.
struct SubSignature {
  size_t a = 0;
  size_t b = 0;
  size_t c = 0;

  size_t dim() const { return a + b + c; }
  friend bool operator==(const SubSignature&, const SubSignature&) = default;
};

inline std::string to_string(const SubSignature& sig) {
  return "(" + std::to_string(sig.a) + "," + std::to_string(sig.b) + "," + std::to_string(sig.c) + ")";
}

template <Scalar T>
class Subspace {
 public:
  Subspace() = default;

  /// Row space of `rows`, canonicalized.
  static Subspace from_rows(const Matrix<T>& rows, double tol) {
    auto red = rref(rows, tol);
    Matrix<T> basis = red.reduced.row_block(0, red.rank());
    return Subspace(std::move(basis), std::move(red.pivots));
  }

  static Subspace zero(size_t ambient) { return Subspace(Matrix<T>(0, ambient), {}); }

  static Subspace full(size_t ambient) {
    std::vector<size_t> piv(ambient);
    for (size_t i = 0; i < ambient; ++i) piv[i] = i;
    return Subspace(Matrix<T>::identity(ambient), std::move(piv));
  }

  size_t ambient() const { return basis_.cols(); }
  size_t dim() const { return basis_.rows(); }
  const Matrix<T>& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }

  /// Max deviation of x from its reconstruction through the pivot coordinates; 0 iff x lies in the span.
  double residual(std::span<const T> x) const {
    require(x.size() == ambient(), ErrorCode::DimensionMismatch, "Subspace::residual ambient mismatch");
    Vec<T> d(x.begin(), x.end());
    for (size_t i = 0; i < dim(); ++i) {
      const T c = x[pivots_[i]];
      for (size_t j = 0; j < ambient(); ++j) d[j] -= c * basis_(i, j);
    }
    double worst = 0.0;
    for (const auto& v : d) worst = std::max(worst, ScalarTraits<T>::magnitude(v));
    return worst;
  }

  /// Largest residual over the rows of `other`'s basis: 0 iff other is contained in this subspace.
  double containment_residual(const Subspace& other) const {
    require(other.ambient() == ambient(), ErrorCode::DimensionMismatch, "containment ambient mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < other.dim(); ++i) worst = std::max(worst, residual(other.basis_.row_span(i)));
    return worst;
  }

  bool contains(const Subspace& other, double tol) const {
    const double r = containment_residual(other);
    if constexpr (is_exact_v<T>) return r == 0.0 && other.is_exactly_contained_in(*this);
    return r <= tol;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

 private:
  Subspace(Matrix<T> basis, std::vector<size_t> pivots) : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  bool is_exactly_contained_in(const Subspace& outer) const {
    for (size_t i = 0; i < dim(); ++i) {
      Vec<T> d = basis_.row(i);
      for (size_t k = 0; k < outer.dim(); ++k) {
        const T c = basis_(i, outer.pivots_[k]);
        for (size_t j = 0; j < ambient(); ++j) d[j] -= c * outer.basis_(k, j);
      }
      for (const auto& v : d)
        if (!ScalarTraits<T>::is_zero(v, 0.0)) return false;
    }
    return true;
  }

  Matrix<T> basis_;
  std::vector<size_t> pivots_;
};

/// Same subspace: identical canonical bases (exact) or bases within tol (float).
template <Scalar T>
bool approx_equal(const Subspace<T>& u, const Subspace<T>& v, double tol) {
  if (u.ambient() != v.ambient() || u.dim() != v.dim()) return false;
  if constexpr (is_exact_v<T>) return u == v;
  return u.dim() == 0 || max_abs_diff(u.basis(), v.basis()) <= tol;
}

template <Scalar T>
Subspace<T> span(const std::vector<Vec<T>>& vectors, size_t ambient, double tol) {
  for (const auto& v : vectors)
    require(v.size() == ambient, ErrorCode::DimensionMismatch, "span: vectors must share the ambient dimension");
  return Subspace<T>::from_rows(Matrix<T>::from_rows(vectors, ambient), tol);
}

namespace detail {
template <Scalar T>
Matrix<T> stack(const Matrix<T>& a, const Matrix<T>& b) {
  require(a.cols() == b.cols(), ErrorCode::DimensionMismatch, "subspace ambient mismatch");
  Matrix<T> s(a.rows() + b.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) s(a.rows() + i, j) = b(i, j);
  return s;
}
}  // namespace detail

template <Scalar T>
Subspace<T> sum(const Subspace<T>& u, const Subspace<T>& v, double tol) {
  return Subspace<T>::from_rows(detail::stack(u.basis(), v.basis()), tol);
}

/// U ∩ V from the left kernel of the stacked bases: coefficient vectors (x, y)
/// with x·B_U + y·B_V = 0 give the common vectors x·B_U. The rank decision is the
/// one `sum` makes on the same stacked matrix.
template <Scalar T>
Subspace<T> intersect(const Subspace<T>& u, const Subspace<T>& v, double tol) {
  const Matrix<T> stacked = detail::stack(u.basis(), v.basis());
  const auto red = rref(stacked, tol, /*track_transform=*/true);
  std::vector<Vec<T>> common;
  for (size_t i = red.rank(); i < stacked.rows(); ++i) {
    Vec<T> x(u.ambient(), ScalarTraits<T>::zero());
    for (size_t k = 0; k < u.dim(); ++k) {
      const T c = red.transform(i, k);
      for (size_t j = 0; j < u.ambient(); ++j) x[j] += c * u.basis()(k, j);
    }
    common.push_back(std::move(x));
  }
  return span(common, u.ambient(), tol);
}

/// {w : <v, w> = 0 for all v in V}, i.e. the kernel of the rows conj(v)∘weights.
template <Scalar T>
Subspace<T> orth_complement(const Subspace<T>& v, const Signature& sig, double tol) {
  require(v.ambient() == sig.dim(), ErrorCode::DimensionMismatch, "orth_complement: ambient vs signature");
  Matrix<T> eqs(v.dim(), v.ambient());
  for (size_t i = 0; i < v.dim(); ++i)
    for (size_t j = 0; j < v.ambient(); ++j)
      eqs(i, j) = ScalarTraits<T>::from_int(sig.weight(j)) * ScalarTraits<T>::conj(v.basis()(i, j));
  if (v.dim() == 0) return Subspace<T>::full(v.ambient());
  return Subspace<T>::from_rows(nullspace(eqs, tol), tol);
}

/// G[i][j] = <b_i, b_j> over the canonical basis.
template <Scalar T>
Matrix<T> gram(const Subspace<T>& v, const Signature& sig) {
  require(v.ambient() == sig.dim(), ErrorCode::DimensionMismatch, "gram: ambient vs signature");
  Matrix<T> g(v.dim(), v.dim());
  for (size_t i = 0; i < v.dim(); ++i)
    for (size_t j = 0; j < v.dim(); ++j) g(i, j) = inner_product(v.basis().row_span(i), v.basis().row_span(j), sig);
  return g;
}

template <Scalar T>
struct Congruence {
  std::vector<RealOf<T>> diagonal;  // D
  Matrix<T> transform;              // P with P·H·P^H = D
  SubSignature inertia;
};

/// Symmetric pivoting with rank-1 clearing. When every remaining diagonal entry
/// vanishes but an off-diagonal c does not, row j += α·row l (and the conjugate
/// column operation) turns the isotropic pair [[0, c̄], [c, 0]] into a pivot
/// 2 Re(α c) > 0; the partner direction then picks up the matching negative entry.
/// No square roots are taken, so exact mode stays exact.
template <Scalar T>
Congruence<T> congruence_diagonalize(const Matrix<T>& h, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  using Tr = ScalarTraits<T>;
  require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "congruence_diagonalize: square matrix required");
  const size_t n = h.rows();
  const double thr = pivot_threshold(max_abs(h), tol);
  if constexpr (Tr::exact) {
    require(h == h.adjoint(), ErrorCode::NonHermitian, "congruence_diagonalize: input is not Hermitian");
  } else {
    require(n == 0 || max_abs_diff(h, h.adjoint()) <= thr, ErrorCode::NonHermitian,
            "congruence_diagonalize: input is not Hermitian within tolerance");
  }

  Matrix<T> a = h;
  Matrix<T> p = Matrix<T>::identity(n);

  auto sym_swap = [&](size_t x, size_t y) {
    if (x == y) return;
    a.swap_rows(x, y);
    for (size_t r = 0; r < n; ++r) std::swap(a(r, x), a(r, y));
    p.swap_rows(x, y);
  };
  // row j += alpha * row l ; col j += conj(alpha) * col l
  auto add_multiple = [&](size_t j, size_t l, const T& alpha) {
    for (size_t c = 0; c < n; ++c) a(j, c) += alpha * a(l, c);
    const T ca = Tr::conj(alpha);
    for (size_t r = 0; r < n; ++r) a(r, j) += ca * a(r, l);
    for (size_t c = 0; c < n; ++c) p(j, c) += alpha * p(l, c);
  };

  size_t i = 0;
  for (; i < n; ++i) {
    std::optional<size_t> diag_piv;
    std::optional<std::pair<size_t, size_t>> off_piv;
    if constexpr (Tr::exact) {
      for (size_t j = i; j < n && !diag_piv; ++j)
        if (!a(j, j).is_zero()) diag_piv = j;
      if (!diag_piv) {
        for (size_t j = i; j < n && !off_piv; ++j)
          for (size_t l = j + 1; l < n && !off_piv; ++l)
            if (!a(l, j).is_zero()) off_piv = std::pair{j, l};
      }
    } else {
      double dmax = 0.0;
      double omax = 0.0;
      size_t jd = i;
      std::pair<size_t, size_t> jo{i, i};
      for (size_t j = i; j < n; ++j) {
        const double d = std::abs(Tr::real(a(j, j)));
        if (d > dmax) {
          dmax = d;
          jd = j;
        }
        for (size_t l = j + 1; l < n; ++l) {
          const double o = Tr::magnitude(a(l, j));
          if (o > omax) {
            omax = o;
            jo = {j, l};
          }
        }
      }
      if (dmax <= thr && omax <= thr) break;
      if (dmax > thr && dmax >= 0.5 * omax) {
        diag_piv = jd;
      } else {
        off_piv = jo;
      }
    }
    if (!diag_piv && !off_piv) break;

    if (off_piv) {
      const auto [j, l] = *off_piv;
      T alpha = Tr::conj(a(l, j));
      if constexpr (!Tr::exact) alpha = alpha / Tr::magnitude(alpha);
      add_multiple(j, l, alpha);
      diag_piv = j;
    }
    sym_swap(i, *diag_piv);

    const T d = Tr::from_parts(Tr::real(a(i, i)), 0);
    a(i, i) = d;
    for (size_t m = i + 1; m < n; ++m) {
      if (Tr::is_zero(a(m, i), 0.0)) continue;
      const T f = a(m, i) / d;
      const T cf = Tr::conj(f);
      for (size_t c = 0; c < n; ++c) a(m, c) -= f * a(i, c);
      for (size_t r = 0; r < n; ++r) a(r, m) -= cf * a(r, i);
      for (size_t c = 0; c < n; ++c) p(m, c) -= f * p(i, c);
      a(m, i) = Tr::zero();
      a(i, m) = Tr::zero();
    }
  }

  Congruence<T> out;
  out.transform = std::move(p);
  out.diagonal.assign(n, RealOf<T>(0));
  for (size_t k = 0; k < i; ++k) {
    out.diagonal[k] = Tr::real(a(k, k));
    switch (Tr::sign(out.diagonal[k], thr)) {
      case 1: ++out.inertia.a; break;
      case -1: ++out.inertia.b; break;
      default: ++out.inertia.c; out.diagonal[k] = 0; break;
    }
  }
  out.inertia.c += n - i;
  return out;
}

template <Scalar T>
SubSignature inertia(const Matrix<T>& h, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  return congruence_diagonalize(h, tol).inertia;
}

template <Scalar T>
SubSignature subspace_signature(const Subspace<T>& v, const Signature& sig,
                                double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  return inertia(gram(v, sig), tol);
}

/// Null of dimension min(r, s); requires a nondegenerate ambient form.
template <Scalar T>
bool is_maximal_null(const Subspace<T>& v, const Signature& sig, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  require(sig.t == 0, ErrorCode::InvalidArgument, "is_maximal_null: requires t = 0");
  const auto ss = subspace_signature(v, sig, tol);
  return ss.a == 0 && ss.b == 0 && ss.c == std::min(sig.r, sig.s);
}

}  // namespace grassorth
