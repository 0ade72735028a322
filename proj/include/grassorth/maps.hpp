#pragma once

// Chart-to-chart polynomial maps F: Z (r x s) -> F(Z) (r' x s'), standing for
// [I_r, Z] -> [I_{r'}, F(Z)], plus the two verification engines:
//   * sampling: null preservation on S(Ω) and orthogonality preservation on
//     sampled orthogonal pairs (float);
//   * polarized identity testing: the holomorphic extension
//       G_ij(Z, V) = sum_k f_ik(Z) f~_jk(V) - δ_ij
//     vanishes on the variety {sum_k z_k v_k = 1} (exact, Schwartz-Zippel).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grassorth/errors.hpp"
#include "grassorth/grassmannian.hpp"
#include "grassorth/json_codec.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/polynomial.hpp"
#include "grassorth/random.hpp"

namespace grassorth {

struct Shape {
  size_t r = 0;
  size_t s = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};

template <Scalar T>
class PolyMatrixMap {
 public:
  PolyMatrixMap() = default;
  PolyMatrixMap(Shape src, Shape tgt) : src_(src), tgt_(tgt), entries_(tgt.r * tgt.s, MultiPoly<T>(src.r * src.s)) {
    require(src.r >= 1 && src.s >= 1 && tgt.r >= 1 && tgt.s >= 1, ErrorCode::InvalidArgument,
            "PolyMatrixMap: shapes must be positive");
  }

  Shape src() const { return src_; }
  Shape tgt() const { return tgt_; }
  size_t nvars() const { return src_.r * src_.s; }

  MultiPoly<T>& entry(size_t i, size_t j) { return entries_.at(i * tgt_.s + j); }
  const MultiPoly<T>& entry(size_t i, size_t j) const { return entries_.at(i * tgt_.s + j); }

  void set_entry(size_t i, size_t j, MultiPoly<T> p) {
    require(p.nvars() == nvars(), ErrorCode::DimensionMismatch, "PolyMatrixMap entry has wrong variable count");
    entry(i, j) = std::move(p);
  }

  friend bool operator==(const PolyMatrixMap&, const PolyMatrixMap&) = default;

 private:
  Shape src_;
  Shape tgt_;
  std::vector<MultiPoly<T>> entries_;
};

/// Entrywise evaluation at the chart point Z (variables z_11, ..., z_rs row-major).
template <Scalar T>
ChartMatrix<T> evaluate(const PolyMatrixMap<T>& f, const ChartMatrix<T>& z) {
  require(z.rows() == f.src().r && z.cols() == f.src().s, ErrorCode::DimensionMismatch, "evaluate: source shape mismatch");
  ChartMatrix<T> out(f.tgt().r, f.tgt().s);
  for (size_t i = 0; i < f.tgt().r; ++i)
    for (size_t j = 0; j < f.tgt().s; ++j) out(i, j) = f.entry(i, j).evaluate(z.data());
  return out;
}

/// A chart map given only by evaluation. Sampling checks and the rigidity analyzer
/// consume this, so compositions with automorphisms can be applied pointwise.
template <Scalar T>
struct ChartFunction {
  Shape src;
  Shape tgt;
  std::function<ChartMatrix<T>(const ChartMatrix<T>&)> eval;

  ChartMatrix<T> operator()(const ChartMatrix<T>& z) const { return eval(z); }
};

template <Scalar T>
ChartFunction<T> as_function(const PolyMatrixMap<T>& f) {
  return {f.src(), f.tgt(), [f](const ChartMatrix<T>& z) { return evaluate(f, z); }};
}

template <Scalar To, Scalar From>
PolyMatrixMap<To> map_cast(const PolyMatrixMap<From>& f) {
  if constexpr (std::is_same_v<To, From>) {
    return f;
  } else {
    static_assert(std::is_same_v<To, Complex>, "map_cast only narrows to the float backend");
    PolyMatrixMap<To> out(f.src(), f.tgt());
    for (size_t i = 0; i < f.tgt().r; ++i)
      for (size_t j = 0; j < f.tgt().s; ++j) {
        MultiPoly<To> p(f.nvars());
        for (const auto& [e, c] : f.entry(i, j).terms()) p.add_term(e, to_complex(c));
        out.set_entry(i, j, std::move(p));
      }
    return out;
  }
}

// ---------------------------------------------------------------------------
// Built-in witnesses (source rank 1, variables z_1..z_s)

/// Row i < r'-1: e_i; row r'-1: [0_{r'-1} | z_1 .. z_s | 0].
template <Scalar T>
PolyMatrixMap<T> standard_embedding(size_t s, size_t rp, size_t sp) {
  require(s >= 1 && rp >= 2, ErrorCode::InvalidArgument, "standard_embedding: requires s >= 1, r' >= 2");
  require(sp >= s + rp - 1, ErrorCode::InvalidArgument,
          "standard_embedding: blocks do not fit (need s' >= s + r' - 1)");
  PolyMatrixMap<T> f({1, s}, {rp, sp});
  for (size_t i = 0; i + 1 < rp; ++i) f.set_entry(i, i, MultiPoly<T>::constant(s, ScalarTraits<T>::one()));
  for (size_t k = 0; k < s; ++k) f.set_entry(rp - 1, rp - 1 + k, MultiPoly<T>::variable(s, k));
  return f;
}

/// Row 0: [z_1 .. z_{s-1}, z_1 z_s, z_2 z_s, .., z_s^2, 0_{r'-1}];
/// rows 1..r'-1: [0 | I_{r'-1}] in the last block. Target r' x (2s + r' - 2).
template <Scalar T>
PolyMatrixMap<T> whitney_map(size_t s, size_t rp) {
  require(s >= 2 && rp >= 1, ErrorCode::InvalidArgument, "whitney_map: requires s >= 2, r' >= 1");
  const size_t sp = 2 * s + rp - 2;
  PolyMatrixMap<T> f({1, s}, {rp, sp});
  for (size_t k = 0; k + 1 < s; ++k) f.set_entry(0, k, MultiPoly<T>::variable(s, k));
  const auto zs = MultiPoly<T>::variable(s, s - 1);
  for (size_t k = 0; k < s; ++k) f.set_entry(0, s - 1 + k, MultiPoly<T>::variable(s, k) * zs);
  for (size_t i = 1; i < rp; ++i) f.set_entry(i, 2 * s - 2 + i, MultiPoly<T>::constant(s, ScalarTraits<T>::one()));
  return f;
}

/// F ≡ C for a fixed r' x s' matrix C.
template <Scalar T>
PolyMatrixMap<T> constant_map(size_t s, const Matrix<T>& c) {
  PolyMatrixMap<T> f({1, s}, {c.rows(), c.cols()});
  for (size_t i = 0; i < c.rows(); ++i)
    for (size_t j = 0; j < c.cols(); ++j)
      if (!ScalarTraits<T>::is_zero(c(i, j), 0.0)) f.set_entry(i, j, MultiPoly<T>::constant(s, c(i, j)));
  return f;
}

/// Constant map onto the Shilov point [I_{r'} | 0].
template <Scalar T>
PolyMatrixMap<T> constant_shilov_map(size_t s, size_t rp, size_t sp) {
  require(rp >= 1 && rp <= sp, ErrorCode::InvalidArgument, "constant_shilov_map: requires 1 <= r' <= s'");
  Matrix<T> c(rp, sp);
  for (size_t i = 0; i < rp; ++i) c(i, i) = ScalarTraits<T>::one();
  return constant_map(s, c);
}

/// F(Z) · U for a fixed s' x s' matrix U (a target automorphism when U is unitary).
template <Scalar T>
PolyMatrixMap<T> compose_target(const PolyMatrixMap<T>& f, const Matrix<T>& u) {
  require(u.rows() == f.tgt().s && u.cols() == f.tgt().s, ErrorCode::DimensionMismatch, "compose_target: shape");
  PolyMatrixMap<T> out(f.src(), f.tgt());
  for (size_t i = 0; i < f.tgt().r; ++i)
    for (size_t j = 0; j < f.tgt().s; ++j) {
      MultiPoly<T> acc(f.nvars());
      for (size_t k = 0; k < f.tgt().s; ++k)
        if (!ScalarTraits<T>::is_zero(u(k, j), 0.0)) acc = acc + u(k, j) * f.entry(i, k);
      out.set_entry(i, j, std::move(acc));
    }
  return out;
}

/// F(z V) for source rank 1 and a fixed s x s matrix V (substitution z_k -> sum_j z_j V_jk).
template <Scalar T>
PolyMatrixMap<T> compose_source(const PolyMatrixMap<T>& f, const Matrix<T>& v) {
  require(f.src().r == 1 && v.rows() == f.src().s && v.cols() == f.src().s, ErrorCode::DimensionMismatch,
          "compose_source: shape");
  const size_t s = f.src().s;
  std::vector<MultiPoly<T>> subst;
  for (size_t k = 0; k < s; ++k) {
    MultiPoly<T> lin(s);
    for (size_t j = 0; j < s; ++j)
      if (!ScalarTraits<T>::is_zero(v(j, k), 0.0)) lin = lin + MultiPoly<T>::variable(s, j, v(j, k));
    subst.push_back(std::move(lin));
  }
  PolyMatrixMap<T> out(f.src(), f.tgt());
  for (size_t i = 0; i < f.tgt().r; ++i)
    for (size_t j = 0; j < f.tgt().s; ++j) {
      MultiPoly<T> acc(s);
      for (const auto& [e, c] : f.entry(i, j).terms()) {
        MultiPoly<T> term = MultiPoly<T>::constant(s, c);
        for (size_t k = 0; k < s; ++k) term = term * pow(subst[k], e[k]);
        acc = acc + term;
      }
      out.set_entry(i, j, std::move(acc));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

enum class VerificationMode { Sampling, ExactPIT };

inline const char* to_string(VerificationMode m) { return m == VerificationMode::Sampling ? "Sampling" : "ExactPIT"; }

struct VerificationReport {
  std::string check;  // which property was verified
  VerificationMode mode = VerificationMode::Sampling;
  size_t trials = 0;
  double tolerance = 0.0;
  double max_residual = 0.0;  // Sampling
  bool all_zero = true;       // ExactPIT
  size_t failure_count = 0;
  std::vector<Json> failures;  // witness inputs, capped at kMaxWitnesses

  static constexpr size_t kMaxWitnesses = 8;

  bool passed() const { return failure_count == 0; }

  void record_failure(Json witness) {
    ++failure_count;
    if (failures.size() < kMaxWitnesses) failures.push_back(std::move(witness));
  }
};

inline Json to_json(const VerificationReport& rep) {
  Json j;
  j["check"] = rep.check;
  j["mode"] = to_string(rep.mode);
  j["trials"] = rep.trials;
  if (rep.mode == VerificationMode::Sampling) {
    j["tolerance"] = detail::format_double(rep.tolerance);
    j["max_residual"] = detail::format_double(rep.max_residual);
  } else {
    j["all_zero"] = rep.all_zero;
  }
  j["passed"] = rep.passed();
  j["failure_count"] = rep.failure_count;
  j["failures"] = rep.failures;
  return j;
}

/// Pairing defect I - F(z) F(w)^H of the image points [I, F(z)] and [I, F(w)].
inline double image_pairing_residual(const ChartMatrix<Complex>& fz, const ChartMatrix<Complex>& fw) {
  return max_abs(Matrix<Complex>::identity(fz.rows()) - fz * fw.adjoint());
}

/// Evaluates F on seeded samples of S(Ω_{r,s}) and records max ||I - F(Z) F(Z)^H||_max.
inline VerificationReport check_null_preservation(const ChartFunction<Complex>& f, size_t n_samples, double tol,
                                                  uint64_t seed) {
  VerificationReport rep;
  rep.check = "null_preservation";
  rep.mode = VerificationMode::Sampling;
  rep.tolerance = tol;
  for (size_t i = 0; i < n_samples; ++i) {
    const auto z = sample_shilov(f.src.r, f.src.s, derive_seed(seed, i));
    const auto fz = f(z);
    const double res = image_pairing_residual(fz, fz);
    rep.max_residual = std::max(rep.max_residual, res);
    ++rep.trials;
    if (!(res <= tol)) {
      rep.record_failure(Json{{"trial", i}, {"z", matrix_to_json(z)}, {"residual", detail::format_double(res)}});
    }
  }
  return rep;
}

/// Source rank 1: seeded pairs z ⊥ w (w from sample_orthogonal_partner), checks
/// ||I - F(z) F(w)^H||_max <= tol per pair.
inline VerificationReport check_orthogonality_preservation(const ChartFunction<Complex>& f, size_t n_pairs, double tol,
                                                           uint64_t seed) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "check_orthogonality_preservation: source rank must be 1");
  VerificationReport rep;
  rep.check = "orthogonality_preservation";
  rep.mode = VerificationMode::Sampling;
  rep.tolerance = tol;
  for (size_t i = 0; i < n_pairs; ++i) {
    const auto z = sample_open_point<Complex>(1, f.src.s, derive_seed(seed, 2 * i));
    const auto w = sample_orthogonal_partner(z, derive_seed(seed, 2 * i + 1));
    const double res = image_pairing_residual(f(z), f(w));
    rep.max_residual = std::max(rep.max_residual, res);
    ++rep.trials;
    if (!(res <= tol)) {
      rep.record_failure(Json{{"trial", i},
                              {"z", matrix_to_json(z)},
                              {"w", matrix_to_json(w)},
                              {"residual", detail::format_double(res)}});
    }
  }
  return rep;
}

inline VerificationReport check_null_preservation(const PolyMatrixMap<Complex>& f, size_t n, double tol, uint64_t seed) {
  return check_null_preservation(as_function(f), n, tol, seed);
}

inline VerificationReport check_orthogonality_preservation(const PolyMatrixMap<Complex>& f, size_t n, double tol,
                                                           uint64_t seed) {
  return check_orthogonality_preservation(as_function(f), n, tol, seed);
}

/// G(Z, V) = F(Z) F~(V)^T - I, where F~ has conjugated coefficients and V stands
/// for conj(W). On the diagonal V = conj(Z) this is F(Z) F(Z)^H - I.
template <Scalar T>
Matrix<T> polarized_gram(const PolyMatrixMap<T>& f, const ChartMatrix<T>& z, const ChartMatrix<T>& v) {
  require(v.rows() * v.cols() == f.nvars(), ErrorCode::DimensionMismatch, "polarized_gram: V must have r*s entries");
  const ChartMatrix<T> fz = evaluate(f, z);
  ChartMatrix<T> fv(f.tgt().r, f.tgt().s);
  for (size_t i = 0; i < f.tgt().r; ++i)
    for (size_t j = 0; j < f.tgt().s; ++j) fv(i, j) = f.entry(i, j).conjugate_coefficients().evaluate(v.data());
  return fz * fv.transpose() - Matrix<T>::identity(f.tgt().r);
}

/// Randomized identity test of G(Z, V) ≡ 0 on {sum_k z_k v_k = 1} (source rank 1,
/// exact mode). Each trial draws Gaussian-rational z and free v_k (k ≠ pivot), solves
/// v_pivot exactly, and evaluates G; one nonzero trial is a disproof certificate.
template <Scalar T>
VerificationReport pit_orthogonality(const PolyMatrixMap<T>& f, size_t trials, uint64_t seed) {
  if constexpr (!is_exact_v<T>) {
    throw Error(ErrorCode::NotExactMode, "pit_orthogonality requires the exact scalar backend");
  } else {
    require(f.src().r == 1, ErrorCode::InvalidArgument, "pit_orthogonality: source rank must be 1");
    constexpr long kHeight = 1000;
    const size_t s = f.src().s;
    VerificationReport rep;
    rep.check = "orthogonality_identity";
    rep.mode = VerificationMode::ExactPIT;
    for (size_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, t));
      ChartMatrix<T> z(1, s);
      std::optional<size_t> piv;
      while (!piv) {
        for (size_t k = 0; k < s; ++k) z(0, k) = random_gauss_rational(rng, kHeight);
        for (size_t k = 0; k < s && !piv; ++k)
          if (!z(0, k).is_zero()) piv = k;
      }
      ChartMatrix<T> v(1, s);
      T acc = ScalarTraits<T>::one();
      for (size_t k = 0; k < s; ++k) {
        if (k == *piv) continue;
        v(0, k) = random_gauss_rational(rng, kHeight);
        acc -= z(0, k) * v(0, k);
      }
      v(0, *piv) = acc / z(0, *piv);
      const Matrix<T> g = polarized_gram(f, z, v);
      ++rep.trials;
      if (!(g == Matrix<T>(g.rows(), g.cols()))) {
        rep.all_zero = false;
        rep.record_failure(
            Json{{"trial", t}, {"z", matrix_to_json(z)}, {"v", matrix_to_json(v)}, {"G", matrix_to_json(g)}});
      }
    }
    return rep;
  }
}

}  // namespace grassorth
