#pragma once

// Rank-1-source rigidity analyzer. For a chart map F from G(1,s) into G(r',s') it
// gathers the evidence the classification rests on:
//   * the regime table in (s, r', s');
//   * null slices N_p = V_{F(p)} ∩ V_{F(p^⊥)} and their common intersection N;
//   * the splitting V_{F(p)} = L_p ⊕ N with L_p inside a nondegenerate complement
//     K of N in N^⊥;
//   * a projective-linear fit of p -> L_p;
//   * the dimension sandwich (s+1)(r'-k)+k <= dim Σ V_{F(p_i)} <= r'+s'-k;
//   * the hyperplane span comparison that detects null maps.
// "Span of the image over an open set" is realized as a sample span grown until its
// dimension has been stable for 3(r'+s') consecutive additions.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grassorth/automorphisms.hpp"
#include "grassorth/errors.hpp"
#include "grassorth/forms.hpp"
#include "grassorth/grassmannian.hpp"
#include "grassorth/json_codec.hpp"
#include "grassorth/maps.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/random.hpp"
#include "grassorth/subspaces.hpp"

namespace grassorth {

// ---------------------------------------------------------------------------
// Regime table

enum class RegimeTag { Constant, LinearRigid, NoRigidity };

inline const char* to_string(RegimeTag t) {
  switch (t) {
    case RegimeTag::Constant: return "Constant";
    case RegimeTag::LinearRigid: return "LinearRigid";
    case RegimeTag::NoRigidity: return "NoRigidity";
  }
  return "?";
}

struct Regime {
  RegimeTag tag = RegimeTag::NoRigidity;
  long lower = 0;  // s - 1
  long upper = 0;  // 2s - 2
  long gap = 0;    // s' - r'
  bool hypothesis_violation = false;  // s < 2, r' < 2 or r' > s'
};

/// Constant iff s'-r' < s-1; LinearRigid iff s-1 <= s'-r' < 2s-2; NoRigidity otherwise.
inline Regime regime(long s, long rp, long sp) {
  Regime out;
  out.lower = s - 1;
  out.upper = 2 * s - 2;
  out.gap = sp - rp;
  out.hypothesis_violation = s < 2 || rp < 2 || rp > sp;
  if (out.gap < out.lower) {
    out.tag = RegimeTag::Constant;
  } else if (out.gap < out.upper) {
    out.tag = RegimeTag::LinearRigid;
  } else {
    out.tag = RegimeTag::NoRigidity;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling helpers

/// Stopping rule for image spans: stable dimension for this many consecutive additions.
inline size_t saturation_window(Shape tgt) { return 3 * (tgt.r + tgt.s); }

/// Homogeneous coordinates (1, z) of a rank-1 chart point.
template <Scalar T>
Vec<T> homogeneous(const ChartMatrix<T>& z) {
  Vec<T> x{ScalarTraits<T>::one()};
  for (size_t k = 0; k < z.cols(); ++k) x.push_back(z(0, k));
  return x;
}

/// Generic open point of G(1,s) kept off the null sphere |z| = 1.
template <Scalar T>
ChartMatrix<T> sample_non_null_point(size_t s, uint64_t seed) {
  for (uint64_t attempt = 0;; ++attempt) {
    auto z = sample_open_point<T>(1, s, derive_seed(seed, attempt));
    const auto defect = norm_sq(homogeneous(z), Signature(1, s));
    if constexpr (is_exact_v<T>) {
      if (sgn(defect) != 0) return z;
    } else {
      if (std::abs(defect) >= 0.05) return z;
    }
  }
}

/// Rows of [I_{r'} | F(z)]: the plane V_{F(p)} in C^{r',s'}.
template <Scalar T>
Subspace<T> image_plane(const ChartFunction<T>& f, const ChartMatrix<T>& z, double tol) {
  return Subspace<T>::from_rows(chart_point(f(z)).rep(), tol);
}

struct SaturationInfo {
  size_t samples = 0;
  bool saturated = false;
};

/// Span of the planes produced by `plane(i)`, i = 0, 1, ..., grown until the
/// dimension is stable for `window` additions, fills the ambient space, or `cap`
/// planes were added.
template <Scalar T, typename PlaneFn>
Subspace<T> saturated_span(size_t ambient, size_t window, size_t cap, double tol, PlaneFn&& plane,
                           SaturationInfo* info = nullptr) {
  Subspace<T> acc = Subspace<T>::zero(ambient);
  size_t stable = 0;
  size_t i = 0;
  bool saturated = false;
  while (i < cap) {
    Subspace<T> next = sum(acc, plane(i++), tol);
    stable = next.dim() > acc.dim() ? 0 : stable + 1;
    acc = std::move(next);
    if (stable >= window || acc.dim() == ambient) {
      saturated = true;
      break;
    }
  }
  if (info) *info = {i, saturated};
  return acc;
}

inline size_t default_partner_cap(Shape tgt) { return 4 * saturation_window(tgt); }

/// V_{F(p^⊥)} approximated by the saturated span of V_{F(q)} over sampled q ⊥ p.
template <Scalar T>
Subspace<T> orthogonal_image_span(const ChartFunction<T>& f, const ChartMatrix<T>& z, size_t n_partners, double tol,
                                  uint64_t seed, SaturationInfo* info = nullptr) {
  const Shape tgt = f.tgt;
  return saturated_span<T>(
      tgt.r + tgt.s, saturation_window(tgt), n_partners, tol,
      [&](size_t i) { return image_plane(f, sample_orthogonal_partner(z, derive_seed(seed, i)), tol); }, info);
}

/// N_p = V_{F(p)} ∩ V_{F(p^⊥)} for source rank 1.
template <Scalar T>
Subspace<T> null_slice(const ChartFunction<T>& f, const ChartMatrix<T>& z, size_t n_partners, double tol,
                       uint64_t seed) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "null_slice: source rank must be 1");
  if (n_partners == 0) n_partners = default_partner_cap(f.tgt);
  return intersect(image_plane(f, z, tol), orthogonal_image_span(f, z, n_partners, tol, seed), tol);
}

// ---------------------------------------------------------------------------
// Common null subspace

template <Scalar T>
struct CommonNull {
  Subspace<T> subspace;
  SubSignature signature;
  bool is_null = false;
  double containment_residual = 0.0;  // max over fresh samples of dist(N, V_{F(p)})
  size_t fresh_samples = 0;
};

/// ∩ of null slices over `n_points` generic base points, then checked to be null and
/// contained in V_{F(p)} at fresh samples. EmptyIntersection if the intersection is 0.
template <Scalar T>
CommonNull<T> common_null_subspace(const ChartFunction<T>& f, size_t n_points, size_t n_partners, double tol,
                                   uint64_t seed, size_t fresh_samples = 16) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "common_null_subspace: source rank must be 1");
  require(n_points >= 1, ErrorCode::InvalidArgument, "common_null_subspace: n_points >= 1");
  const size_t s = f.src.s;
  const Signature tsig(f.tgt.r, f.tgt.s);
  Subspace<T> acc;
  for (size_t i = 0; i < n_points; ++i) {
    const auto z = sample_non_null_point<T>(s, derive_seed(seed, 3 * i));
    auto slice = null_slice(f, z, n_partners, tol, derive_seed(seed, 3 * i + 1));
    acc = i == 0 ? std::move(slice) : intersect(acc, slice, tol);
    if (acc.dim() == 0) break;
  }
  require(acc.dim() > 0, ErrorCode::EmptyIntersection, "common_null_subspace: null slices have no common vector");

  CommonNull<T> out;
  out.signature = subspace_signature(acc, tsig, tol);
  out.is_null = out.signature.c == acc.dim();
  for (size_t i = 0; i < fresh_samples; ++i) {
    const auto z = sample_open_point<T>(1, s, derive_seed(seed, 3 * i + 2));
    out.containment_residual = std::max(out.containment_residual, image_plane(f, z, tol).containment_residual(acc));
  }
  out.fresh_samples = fresh_samples;
  out.subspace = std::move(acc);
  return out;
}

/// Max |<n, v>| over basis rows n of N and rows v of [I | F(z)]: 0 iff V_{F(p)} ⊂ N^⊥.
template <Scalar T>
double perp_residual(const Subspace<T>& n, const ChartMatrix<T>& fz) {
  const Signature sig(fz.rows(), fz.cols());
  const Matrix<T> rows = chart_point(fz).rep();
  double worst = 0.0;
  for (size_t i = 0; i < n.dim(); ++i)
    for (size_t j = 0; j < rows.rows(); ++j)
      worst = std::max(worst, ScalarTraits<T>::magnitude(inner_product(n.basis().row_span(i), rows.row_span(j), sig)));
  return worst;
}

struct SandwichResiduals {
  double inner = 0.0;  // N ⊂ V_{F(p)}
  double outer = 0.0;  // V_{F(p)} ⊂ N^⊥
  size_t samples = 0;
};

/// N ⊂ V_{F(p)} ⊂ N^⊥ on `n` fresh open samples.
template <Scalar T>
SandwichResiduals sandwich_residuals(const ChartFunction<T>& f, const Subspace<T>& n, size_t samples, double tol,
                                     uint64_t seed) {
  SandwichResiduals out;
  for (size_t i = 0; i < samples; ++i) {
    const auto z = sample_open_point<T>(1, f.src.s, derive_seed(seed, i));
    const auto fz = f(z);
    out.inner = std::max(out.inner, Subspace<T>::from_rows(chart_point(fz).rep(), tol).containment_residual(n));
    out.outer = std::max(out.outer, perp_residual(n, fz));
  }
  out.samples = samples;
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition F = F1 ⊕ F2

template <Scalar T>
struct LineSample {
  ChartMatrix<T> z;
  Subspace<T> line;  // L_p = V_{F(p)} ∩ K
};

template <Scalar T>
struct Decomposition {
  Subspace<T> n_perp;
  Subspace<T> k;
  SubSignature k_signature;
  std::vector<LineSample<T>> lines;
  Subspace<T> constant_part;  // F2 = N
  size_t shear_retries = 0;
};

/// K = N^⊥ ∩ {x : <x, n>_H = 0 for n in N} for the auxiliary positive-definite metric
/// H (first the Euclidean one, then random shears I + S S^H), accepted once the
/// restricted form on K has signature (1, s'-r'+1, 0). Then L_p = V_{F(p)} ∩ K.
template <Scalar T>
Decomposition<T> decompose(const ChartFunction<T>& f, const Subspace<T>& n, size_t n_points, double tol,
                           uint64_t seed) {
  using Tr = ScalarTraits<T>;
  const size_t rp = f.tgt.r;
  const size_t sp = f.tgt.s;
  const size_t dim = rp + sp;
  const Signature tsig(rp, sp);
  require(n.ambient() == dim, ErrorCode::DimensionMismatch, "decompose: N lives in the wrong ambient space");
  require(n.dim() + 1 == rp, ErrorCode::InvalidArgument,
          "decompose: requires dim N = r' - 1 (got " + std::to_string(n.dim()) + ")");

  Decomposition<T> out;
  out.n_perp = orth_complement(n, tsig, tol);
  out.constant_part = n;
  const SubSignature want{1, sp - rp + 1, 0};
  Rng rng(derive_seed(seed, 0xC0FFEE));
  bool found = false;
  for (size_t attempt = 0; attempt < 8 && !found; ++attempt) {
    Matrix<T> metric = Matrix<T>::identity(dim);
    if (attempt > 0) {
      const Matrix<T> shear = random_matrix<T>(dim, dim, rng);
      metric = metric + shear * shear.adjoint();
    }
    // <x, n_i>_H = x · (H conj(n_i)^T): one linear equation per basis row of N.
    const Matrix<T> eqs = (metric * n.basis().conjugate().transpose()).transpose();
    const auto aux_complement = Subspace<T>::from_rows(nullspace(eqs, tol), tol);
    auto k = intersect(out.n_perp, aux_complement, tol);
    const auto ksig = subspace_signature(k, tsig, tol);
    if (ksig == want) {
      out.k = std::move(k);
      out.k_signature = ksig;
      found = true;
    } else {
      ++out.shear_retries;
    }
  }
  require(found, ErrorCode::DegenerateComplement, "decompose: no nondegenerate complement of N in N^⊥");

  for (size_t i = 0; i < n_points; ++i) {
    auto z = sample_open_point<T>(1, f.src.s, derive_seed(seed, i + 1));
    auto line = intersect(image_plane(f, z, tol), out.k, tol);
    out.lines.push_back({std::move(z), std::move(line)});
  }
  (void)Tr::zero();
  return out;
}

// ---------------------------------------------------------------------------
// Projective-linear fit of p -> L_p

template <Scalar T>
struct LinearFit {
  std::optional<Matrix<T>> model;  // (s+1) x (r'+s'): L_p ∝ (1, z) · model
  double residual = 1.0;           // max sine of the angle between model and observed lines
  size_t pinned_coordinate = 0;
  size_t samples = 0;
};

namespace detail {

inline double line_angle_residual(std::span<const Complex> u, std::span<const Complex> v) {
  double nu = 0.0;
  double nv = 0.0;
  for (const auto& x : u) nu += std::norm(x);
  for (const auto& x : v) nv += std::norm(x);
  if (nu == 0.0 || nv == 0.0) return 1.0;
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  Complex dot = 0.0;
  for (size_t j = 0; j < u.size(); ++j) dot += std::conj(v[j]) * u[j];
  dot /= nu * nv;
  double acc = 0.0;
  for (size_t j = 0; j < u.size(); ++j) acc += std::norm(u[j] / nu - dot * v[j] / nv);
  return std::sqrt(acc);
}

inline LinearFit<Complex> fit_float(const std::vector<Vec<Complex>>& xs, std::vector<Vec<Complex>> vs, double tol) {
  LinearFit<Complex> fit;
  const size_t n = xs.size();
  const size_t h = xs.front().size();
  const size_t m = vs.front().size();
  fit.samples = n;
  for (auto& v : vs) {
    double norm = 0.0;
    for (const auto& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
  }
  std::vector<double> avg(m, 0.0);
  for (const auto& v : vs)
    for (size_t j = 0; j < m; ++j) avg[j] += std::abs(v[j]);
  const size_t c = static_cast<size_t>(std::max_element(avg.begin(), avg.end()) - avg.begin());
  fit.pinned_coordinate = c;
  for (auto& v : vs)
    if (std::abs(v[c]) > 0.0) {
      const Complex phase = std::conj(v[c]) / std::abs(v[c]);
      for (auto& x : v) x *= phase;
    }

  // Unknowns: model entries A[a][j] (h*m), then λ_1..λ_{n-1}; λ_0 = 1.
  const size_t unknowns = h * m + (n - 1);
  if (n * m < unknowns) return fit;
  Matrix<Complex> lhs(n * m, unknowns);
  Matrix<Complex> rhs(n * m, 1);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      const size_t row = i * m + j;
      for (size_t a = 0; a < h; ++a) lhs(row, a * m + j) = xs[i][a];
      if (i == 0) {
        rhs(row, 0) = vs[0][j];
      } else {
        lhs(row, h * m + i - 1) = -vs[i][j];
      }
    }
  const auto sol = least_squares(lhs, rhs, tol);
  if (!sol) return fit;
  Matrix<Complex> a(h, m);
  for (size_t r = 0; r < h; ++r)
    for (size_t j = 0; j < m; ++j) a(r, j) = (*sol)(r * m + j, 0);
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Matrix<Complex> u = Matrix<Complex>::from_rows({xs[i]}) * a;
    worst = std::max(worst, line_angle_residual(u.row_span(0), vs[i]));
  }
  fit.model = std::move(a);
  fit.residual = worst;
  return fit;
}

/// Exact route: interpolate through a projective frame x_0..x_s, x_{s+1}, then verify
/// every remaining sample lies on the model line.
inline LinearFit<GaussRational> fit_exact(const std::vector<Vec<GaussRational>>& xs,
                                          const std::vector<Vec<GaussRational>>& vs) {
  using T = GaussRational;
  LinearFit<T> fit;
  const size_t n = xs.size();
  const size_t h = xs.front().size();
  const size_t m = vs.front().size();
  fit.samples = n;
  if (n < h + 1) return fit;

  const Matrix<T> x = Matrix<T>::from_rows(std::vector<Vec<T>>(xs.begin(), xs.begin() + h));
  const auto xinv = inverse(x, 0.0);
  if (!xinv) return fit;
  const Matrix<T> mu = Matrix<T>::from_rows({xs[h]}) * *xinv;
  for (size_t j = 0; j < h; ++j)
    if (mu(0, j).is_zero()) return fit;

  // Σ_j μ_j λ_j v_j = v_{h}: m equations in h unknowns.
  Matrix<T> aug(m, h + 1);
  for (size_t r = 0; r < m; ++r) {
    for (size_t j = 0; j < h; ++j) aug(r, j) = mu(0, j) * vs[j][r];
    aug(r, h) = vs[h][r];
  }
  const auto red = rref(aug, 0.0);
  if (red.rank() != h || red.pivots.back() == h) return fit;
  Matrix<T> lam(h, h);
  for (size_t i = 0; i < h; ++i) lam(red.pivots[i], red.pivots[i]) = red.reduced(i, h);

  const Matrix<T> a = *xinv * lam * Matrix<T>::from_rows(std::vector<Vec<T>>(vs.begin(), vs.begin() + h));
  bool all_on_model = true;
  for (size_t i = 0; i < n && all_on_model; ++i) {
    const Matrix<T> u = Matrix<T>::from_rows({xs[i]}) * a;
    Matrix<T> pair(2, m);
    for (size_t j = 0; j < m; ++j) {
      pair(0, j) = u(0, j);
      pair(1, j) = vs[i][j];
    }
    all_on_model = !(u == Matrix<T>(1, m)) && rref(pair, 0.0).rank() == 1;
  }
  fit.model = a;
  fit.residual = all_on_model ? 0.0 : 1.0;
  return fit;
}

}  // namespace detail

/// Fits L_p ∝ (1, z) · A over the decomposition's line samples (least squares in
/// float with a pinned normalization coordinate; interpolation + verification exact).
template <Scalar T>
LinearFit<T> fit_linear_model(const std::vector<LineSample<T>>& lines, double tol) {
  std::vector<Vec<T>> xs;
  std::vector<Vec<T>> vs;
  for (const auto& ls : lines) {
    if (ls.line.dim() != 1) continue;
    xs.push_back(homogeneous(ls.z));
    vs.push_back(ls.line.basis().row(0));
  }
  if (xs.empty()) return {};
  if constexpr (is_exact_v<T>) {
    return detail::fit_exact(xs, vs);
  } else {
    return detail::fit_float(xs, vs, tol);
  }
}

// ---------------------------------------------------------------------------
// Classification

enum class MapClass { Constant, StandardLinear, NullMap, Other };

inline const char* to_string(MapClass c) {
  switch (c) {
    case MapClass::Constant: return "Constant";
    case MapClass::StandardLinear: return "StandardLinear";
    case MapClass::NullMap: return "NullMap";
    case MapClass::Other: return "Other";
  }
  return "?";
}

struct AnalyzerConfig {
  double tol = kDefaultTol;  // rank, containment and constancy decisions (ignored in exact mode)
  double fit_tol = 1e-8;     // linear-model residual for StandardLinear
  double orth_tol = 1e-8;    // orthogonality pre-check
  size_t n_points = 3;       // base points intersected for N
  size_t n_partners = 0;     // partner cap per slice; 0 = 4 * saturation window
  size_t n_samples = 24;     // constancy / null-map / orthogonality samples
  size_t n_fit = 0;          // line samples for the fit; 0 = 3 (s + 2)
  size_t n_check = 100;      // fresh samples for the sandwich check
  uint64_t seed = 0;
};

template <Scalar T>
struct RigidityReport {
  Regime regime;
  MapClass classification = MapClass::Other;
  std::optional<Subspace<T>> common_null;
  std::optional<SubSignature> common_null_signature;
  std::optional<Subspace<T>> complement_k;
  std::optional<Matrix<T>> linear_model;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, uint64_t>> seeds;
  std::vector<std::string> diagnostics;

  std::optional<double> residual(const std::string& stage) const {
    for (const auto& [k, v] : residuals)
      if (k == stage) return v;
    return std::nullopt;
  }
};

/// Max |I - F(z) F(w)^H| over sampled orthogonal pairs (exact mode: 0 or 1).
template <Scalar T>
double orthogonality_defect(const ChartFunction<T>& f, size_t n_pairs, uint64_t seed) {
  double worst = 0.0;
  for (size_t i = 0; i < n_pairs; ++i) {
    const auto z = sample_open_point<T>(1, f.src.s, derive_seed(seed, 2 * i));
    const auto w = sample_orthogonal_partner(z, derive_seed(seed, 2 * i + 1));
    const Matrix<T> d = Matrix<T>::identity(f.tgt.r) - f(z) * f(w).adjoint();
    if constexpr (is_exact_v<T>) {
      if (!(d == Matrix<T>(d.rows(), d.cols()))) return 1.0;
    } else {
      worst = std::max(worst, max_abs(d));
    }
  }
  return worst;
}

template <Scalar T>
bool within(double value, double tol) {
  if constexpr (is_exact_v<T>) return value == 0.0;
  return value <= tol;
}

/// Pipeline: regime -> constancy -> orthogonality pre-check -> null-map test ->
/// common null subspace -> decomposition -> linear fit. Any stage failure downgrades
/// the classification to Other with a diagnostic; the analysis itself always completes.
template <Scalar T>
RigidityReport<T> classify_map(const ChartFunction<T>& f, const AnalyzerConfig& cfg) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "classify_map: source rank must be 1");
  const size_t s = f.src.s;
  const size_t rp = f.tgt.r;
  const size_t sp = f.tgt.s;
  const double tol = is_exact_v<T> ? 0.0 : cfg.tol;
  RigidityReport<T> rep;
  rep.regime = regime(static_cast<long>(s), static_cast<long>(rp), static_cast<long>(sp));
  if (rep.regime.hypothesis_violation) rep.diagnostics.emplace_back("parameters outside s >= 2, 2 <= r' <= s'");

  const uint64_t seed_const = derive_seed(cfg.seed, 1);
  const uint64_t seed_orth = derive_seed(cfg.seed, 2);
  const uint64_t seed_null = derive_seed(cfg.seed, 3);
  const uint64_t seed_common = derive_seed(cfg.seed, 4);
  const uint64_t seed_decomp = derive_seed(cfg.seed, 5);
  const uint64_t seed_sandwich = derive_seed(cfg.seed, 6);
  rep.seeds = {{"master", cfg.seed},         {"constancy", seed_const},   {"orthogonality", seed_orth},
               {"null_map", seed_null},      {"common_null", seed_common}, {"decompose", seed_decomp},
               {"sandwich", seed_sandwich}};

  // Constancy.
  {
    const auto f0 = f(sample_open_point<T>(1, s, derive_seed(seed_const, 0)));
    double dev = 0.0;
    for (size_t i = 1; i < cfg.n_samples; ++i) {
      const auto fi = f(sample_open_point<T>(1, s, derive_seed(seed_const, i)));
      if constexpr (is_exact_v<T>) {
        if (!(fi == f0)) dev = 1.0;
      } else {
        dev = std::max(dev, max_abs_diff(fi, f0));
      }
    }
    rep.residuals.emplace_back("constancy", dev);
    if (within<T>(dev, tol)) {
      rep.classification = MapClass::Constant;
      return rep;
    }
  }

  // Orthogonality pre-check.
  {
    const double d = orthogonality_defect(f, cfg.n_samples, seed_orth);
    rep.residuals.emplace_back("orthogonality", d);
    if (!within<T>(d, cfg.orth_tol)) {
      rep.diagnostics.emplace_back("map does not preserve orthogonality on sampled pairs");
      return rep;
    }
  }

  // Null map: values at generic open points all on the Shilov boundary.
  {
    double worst = 0.0;
    for (size_t i = 0; i < cfg.n_samples; ++i) {
      const auto fz = f(sample_non_null_point<T>(s, derive_seed(seed_null, i)));
      const Matrix<T> d = defect(fz);
      if constexpr (is_exact_v<T>) {
        if (!(d == Matrix<T>(d.rows(), d.cols()))) worst = 1.0;
      } else {
        worst = std::max(worst, max_abs(d));
      }
    }
    rep.residuals.emplace_back("null_map", worst);
    if (within<T>(worst, tol)) {
      rep.classification = MapClass::NullMap;
      return rep;
    }
  }

  try {
    const auto cn = common_null_subspace(f, cfg.n_points, cfg.n_partners, tol, seed_common);
    rep.common_null = cn.subspace;
    rep.common_null_signature = cn.signature;
    rep.residuals.emplace_back("common_null_containment", cn.containment_residual);
    if (!cn.is_null) {
      rep.diagnostics.emplace_back("common subspace is not null");
      return rep;
    }
    if (cn.subspace.dim() + 1 != rp) {
      rep.diagnostics.emplace_back("common null subspace has dimension " + std::to_string(cn.subspace.dim()) +
                                   ", expected r' - 1 = " + std::to_string(rp - 1));
      return rep;
    }
    if (!within<T>(cn.containment_residual, tol)) {
      rep.diagnostics.emplace_back("common null subspace not contained in fresh image planes");
      return rep;
    }

    const auto sw = sandwich_residuals(f, cn.subspace, cfg.n_check, tol, seed_sandwich);
    rep.residuals.emplace_back("sandwich_inner", sw.inner);
    rep.residuals.emplace_back("sandwich_outer", sw.outer);

    const size_t n_fit = cfg.n_fit == 0 ? 3 * (s + 2) : cfg.n_fit;
    const auto dec = decompose(f, cn.subspace, n_fit, tol, seed_decomp);
    rep.complement_k = dec.k;
    size_t bad_lines = 0;
    for (const auto& ls : dec.lines) bad_lines += ls.line.dim() == 1 ? 0 : 1;
    rep.residuals.emplace_back("line_dimension_failures", static_cast<double>(bad_lines));
    if (bad_lines > 0) {
      rep.diagnostics.emplace_back("V_F(p) ∩ K is not a line at some samples");
      return rep;
    }

    const auto fit = fit_linear_model(dec.lines, tol);
    rep.linear_model = fit.model;
    rep.residuals.emplace_back("linear_model", fit.residual);
    if (fit.model && within<T>(fit.residual, cfg.fit_tol)) {
      rep.classification = MapClass::StandardLinear;
    } else {
      rep.diagnostics.emplace_back("lines L_p are not a projective-linear function of p");
    }
  } catch (const Error& e) {
    rep.diagnostics.emplace_back(e.what());
    rep.classification = MapClass::Other;
  }
  return rep;
}

template <Scalar T>
RigidityReport<T> classify_map(const PolyMatrixMap<T>& f, const AnalyzerConfig& cfg) {
  return classify_map(as_function(f), cfg);
}

/// Pointwise composition z -> act(g_tgt, F(act(g_src, z))).
inline ChartFunction<Complex> compose_with_automorphisms(const ChartFunction<Complex>& f,
                                                         const IndefUnitary<Complex>& g_src,
                                                         const IndefUnitary<Complex>& g_tgt, double tol = kDefaultTol) {
  require(g_src.sig.r == f.src.r && g_src.sig.s == f.src.s, ErrorCode::DimensionMismatch, "source automorphism shape");
  require(g_tgt.sig.r == f.tgt.r && g_tgt.sig.s == f.tgt.s, ErrorCode::DimensionMismatch, "target automorphism shape");
  return {f.src, f.tgt, [f, g_src, g_tgt, tol](const ChartMatrix<Complex>& z) {
            return act_on_chart(g_tgt, f(act_on_chart(g_src, z, tol)), tol);
          }};
}

// ---------------------------------------------------------------------------
// Dimension sandwich

template <Scalar T>
struct DimensionBoundReport {
  size_t k = 0;      // dim of the null slice at p_1
  size_t span_dim = 0;  // D = dim Σ V_{F(p_i)}
  long lower = 0;    // (s+1)(r'-k)+k
  long upper = 0;    // r'+s'-k
  bool holds = false;
  std::vector<ChartMatrix<T>> frame;
  size_t attempts = 0;
};

/// s+1 pairwise orthogonal non-null chart points of G(1,s): each new point is drawn
/// from the common orthogonal complement of the previous ones.
template <Scalar T>
std::vector<ChartMatrix<T>> sample_orthogonal_frame(size_t s, uint64_t seed, size_t* attempts_used = nullptr) {
  using Tr = ScalarTraits<T>;
  const Signature sig(1, s);
  constexpr size_t kAttempts = 32;
  for (size_t attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<Vec<T>> xs;
    bool ok = true;
    while (ok && xs.size() < s + 1) {
      Matrix<T> eqs(xs.size(), s + 1);
      for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j <= s; ++j) eqs(i, j) = Tr::from_int(sig.weight(j)) * Tr::conj(xs[i][j]);
      const Matrix<T> basis = xs.empty() ? Matrix<T>::identity(s + 1) : nullspace(eqs, kDefaultTol);
      bool placed = false;
      for (int tries = 0; tries < 8 && !placed; ++tries) {
        Vec<T> x(s + 1, Tr::zero());
        for (size_t b = 0; b < basis.rows(); ++b) {
          const T c = random_scalar<T>(rng);
          for (size_t j = 0; j <= s; ++j) x[j] += c * basis(b, j);
        }
        if constexpr (Tr::exact) {
          placed = sgn(norm_sq(x, sig)) != 0 && !x[0].is_zero();
        } else {
          double n2 = 0.0;
          for (const auto& v : x) n2 += std::norm(v);
          const double nrm = std::sqrt(n2);
          if (nrm == 0.0) continue;
          for (auto& v : x) v /= nrm;
          placed = std::abs(norm_sq(x, sig)) >= 0.05 && std::abs(x[0]) >= 0.05;
        }
        if (placed) xs.push_back(std::move(x));
      }
      ok = placed;
    }
    if (!ok) continue;
    if (attempts_used) *attempts_used = attempt + 1;
    std::vector<ChartMatrix<T>> frame;
    for (const auto& x : xs) {
      ChartMatrix<T> z(1, s);
      for (size_t k = 0; k < s; ++k) z(0, k) = x[k + 1] / x[0];
      frame.push_back(std::move(z));
    }
    return frame;
  }
  throw Error(ErrorCode::SamplerExhausted, "sample_orthogonal_frame: no non-null orthogonal frame found");
}

template <Scalar T>
DimensionBoundReport<T> dimension_bound_check(const ChartFunction<T>& f, double tol, uint64_t seed,
                                              size_t n_partners = 0) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "dimension_bound_check: source rank must be 1");
  const long s = static_cast<long>(f.src.s);
  const long rp = static_cast<long>(f.tgt.r);
  const long sp = static_cast<long>(f.tgt.s);
  DimensionBoundReport<T> rep;
  rep.frame = sample_orthogonal_frame<T>(f.src.s, derive_seed(seed, 0), &rep.attempts);
  rep.k = null_slice(f, rep.frame.front(), n_partners, tol, derive_seed(seed, 1)).dim();
  Subspace<T> acc = Subspace<T>::zero(f.tgt.r + f.tgt.s);
  for (const auto& z : rep.frame) acc = sum(acc, image_plane(f, z, tol), tol);
  rep.span_dim = acc.dim();
  const long k = static_cast<long>(rep.k);
  rep.lower = (s + 1) * (rp - k) + k;
  rep.upper = rp + sp - k;
  const long d = static_cast<long>(rep.span_dim);
  rep.holds = rep.lower <= d && d <= rep.upper;
  return rep;
}

// ---------------------------------------------------------------------------
// Hyperplane span test

struct HyperplaneReport {
  size_t dim_open = 0;                 // dim V_{F(U)}
  std::vector<size_t> dim_hyperplanes;  // dim V_{F(H ∩ U)} per sampled H = p^⊥
  bool null_expected = false;
  bool null_confirmed = false;
  double shilov_defect = 0.0;  // max ||I - F F^H|| over open samples
};

/// If every sampled hyperplane keeps the full image span, F should be null; the
/// expectation is cross-checked against the Shilov defect of open-set values.
template <Scalar T>
HyperplaneReport hyperplane_span_test(const ChartFunction<T>& f, size_t n_hyperplanes, double tol, uint64_t seed) {
  require(f.src.r == 1, ErrorCode::InvalidArgument, "hyperplane_span_test: source rank must be 1");
  const size_t s = f.src.s;
  const size_t ambient = f.tgt.r + f.tgt.s;
  const size_t window = saturation_window(f.tgt);
  const size_t cap = default_partner_cap(f.tgt);
  HyperplaneReport rep;
  const uint64_t open_seed = derive_seed(seed, 0);
  const auto open = saturated_span<T>(ambient, window, cap, tol, [&](size_t i) {
    const auto z = sample_open_point<T>(1, s, derive_seed(open_seed, i));
    const Matrix<T> d = defect(f(z));
    if constexpr (is_exact_v<T>) {
      if (!(d == Matrix<T>(d.rows(), d.cols()))) rep.shilov_defect = 1.0;
    } else {
      rep.shilov_defect = std::max(rep.shilov_defect, max_abs(d));
    }
    return image_plane(f, z, tol);
  });
  rep.dim_open = open.dim();
  for (size_t h = 0; h < n_hyperplanes; ++h) {
    const auto p = sample_non_null_point<T>(s, derive_seed(seed, 2 * h + 1));
    rep.dim_hyperplanes.push_back(orthogonal_image_span(f, p, cap, tol, derive_seed(seed, 2 * h + 2)).dim());
  }
  rep.null_expected = std::all_of(rep.dim_hyperplanes.begin(), rep.dim_hyperplanes.end(),
                                  [&](size_t d) { return d == rep.dim_open; });
  rep.null_confirmed = rep.null_expected && within<T>(rep.shilov_defect, tol);
  return rep;
}

}  // namespace grassorth
