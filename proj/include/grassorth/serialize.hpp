#pragma once

// JSON encodings of the library types. Scalars and matrices use json_codec.hpp.

#include <string>

#include "grassorth/automorphisms.hpp"
#include "grassorth/errors.hpp"
#include "grassorth/grassmannian.hpp"
#include "grassorth/json_codec.hpp"
#include "grassorth/maps.hpp"
#include "grassorth/rigidity.hpp"
#include "grassorth/subspaces.hpp"

namespace grassorth {

namespace detail {
inline size_t json_size(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<size_t>();
}

inline Shape json_shape(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer() ||
      v[0].get<long long>() < 1 || v[1].get<long long>() < 1)
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be [r, s] with r, s >= 1");
  return {v[0].get<size_t>(), v[1].get<size_t>()};
}

inline const Json& json_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}
}  // namespace detail

// -- Subspace ---------------------------------------------------------------

template <Scalar T>
Json to_json(const Subspace<T>& v) {
  return Json{{"ambient", v.ambient()}, {"basis", matrix_to_json(v.basis())}};
}

template <Scalar T>
Subspace<T> subspace_from_json(const Json& j, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const size_t n = detail::json_size(j, "ambient");
  const Matrix<T> b = matrix_from_json<T>(detail::json_field(j, "basis"), n);
  if (b.cols() != n) throw Error(ErrorCode::ParseError, "subspace basis rows must have length 'ambient'");
  return Subspace<T>::from_rows(b, tol);
}

// -- Grassmannian -----------------------------------------------------------

template <Scalar T>
Json to_json(const GrassPoint<T>& p) {
  return Json{{"r", p.r()}, {"s", p.s()}, {"A", matrix_to_json(p.rep())}};
}

template <Scalar T>
GrassPoint<T> point_from_json(const Json& j, double tol = is_exact_v<T> ? 0.0 : kDefaultTol) {
  const size_t r = detail::json_size(j, "r");
  const size_t s = detail::json_size(j, "s");
  const Matrix<T> a = matrix_from_json<T>(detail::json_field(j, "A"), r + s);
  if (a.rows() != r || a.cols() != r + s) throw Error(ErrorCode::ParseError, "'A' must be r x (r+s)");
  return point_from_matrix(a, tol);
}

template <Scalar T>
Json chart_to_json(const ChartMatrix<T>& z) {
  return Json{{"r", z.rows()}, {"s", z.cols()}, {"Z", matrix_to_json(z)}};
}

template <Scalar T>
ChartMatrix<T> chart_from_json(const Json& j) {
  const size_t r = detail::json_size(j, "r");
  const size_t s = detail::json_size(j, "s");
  ChartMatrix<T> z = matrix_from_json<T>(detail::json_field(j, "Z"), s);
  if (z.rows() != r || z.cols() != s) throw Error(ErrorCode::ParseError, "'Z' must be r x s");
  return z;
}

// -- Automorphisms ----------------------------------------------------------

template <Scalar T>
Json to_json(const IndefUnitary<T>& g) {
  return Json{{"sig", Json::array({g.sig.r, g.sig.s})}, {"M", matrix_to_json(g.m)}};
}

template <Scalar T>
IndefUnitary<T> unitary_from_json(const Json& j) {
  const Shape sh = detail::json_shape(j, "sig");
  const Signature sig(sh.r, sh.s);
  Matrix<T> m = matrix_from_json<T>(detail::json_field(j, "M"), sig.dim());
  if (m.rows() != sig.dim() || m.cols() != sig.dim()) throw Error(ErrorCode::ParseError, "'M' must be (r+s) x (r+s)");
  return {std::move(m), sig};
}

// -- Polynomial maps --------------------------------------------------------

template <Scalar T>
Json to_json(const PolyMatrixMap<T>& f) {
  Json entries = Json::array();
  for (size_t i = 0; i < f.tgt().r; ++i)
    for (size_t j = 0; j < f.tgt().s; ++j) {
      const auto& p = f.entry(i, j);
      if (p.is_zero()) continue;
      Json terms = Json::array();
      for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", e}, {"coef", scalar_to_json(c)}});
      entries.push_back(Json{{"row", i}, {"col", j}, {"terms", std::move(terms)}});
    }
  return Json{{"src", Json::array({f.src().r, f.src().s})},
              {"tgt", Json::array({f.tgt().r, f.tgt().s})},
              {"entries", std::move(entries)}};
}

/// Map file ingestion; every structural problem is a ParseError.
template <Scalar T>
PolyMatrixMap<T> map_from_json(const Json& j) {
  const Shape src = detail::json_shape(j, "src");
  const Shape tgt = detail::json_shape(j, "tgt");
  PolyMatrixMap<T> f(src, tgt);
  const Json& entries = detail::json_field(j, "entries");
  if (!entries.is_array()) throw Error(ErrorCode::ParseError, "'entries' must be an array");
  for (const auto& e : entries) {
    const size_t row = detail::json_size(e, "row");
    const size_t col = detail::json_size(e, "col");
    if (row >= tgt.r || col >= tgt.s)
      throw Error(ErrorCode::ParseError, "entry (" + std::to_string(row) + "," + std::to_string(col) + ") out of range");
    const Json& terms = detail::json_field(e, "terms");
    if (!terms.is_array()) throw Error(ErrorCode::ParseError, "'terms' must be an array");
    MultiPoly<T> p = f.entry(row, col);
    for (const auto& t : terms) {
      const Json& ej = detail::json_field(t, "exp");
      if (!ej.is_array() || ej.size() != f.nvars())
        throw Error(ErrorCode::ParseError, "'exp' must have r*s = " + std::to_string(f.nvars()) + " entries");
      Exponent ex;
      for (const auto& x : ej) {
        if (!x.is_number_integer() || x.get<long long>() < 0)
          throw Error(ErrorCode::ParseError, "exponents must be non-negative integers");
        ex.push_back(x.get<uint32_t>());
      }
      p.add_term(ex, scalar_from_json<T>(detail::json_field(t, "coef")));
    }
    f.set_entry(row, col, std::move(p));
  }
  return f;
}

// -- Rigidity ---------------------------------------------------------------

inline Json to_json(const Regime& r) {
  return Json{{"tag", to_string(r.tag)},
              {"lower", r.lower},
              {"upper", r.upper},
              {"gap", r.gap},
              {"hypothesis_violation", r.hypothesis_violation}};
}

inline Json to_json(const SubSignature& s) { return Json::array({s.a, s.b, s.c}); }

template <Scalar T>
Json to_json(const RigidityReport<T>& rep) {
  Json j;
  j["regime"] = to_json(rep.regime);
  j["classification"] = to_string(rep.classification);
  if (rep.common_null) {
    Json n = to_json(*rep.common_null);
    if (rep.common_null_signature) n["signature"] = to_json(*rep.common_null_signature);
    j["common_null"] = std::move(n);
  } else {
    j["common_null"] = nullptr;
  }
  j["K"] = rep.complement_k ? to_json(*rep.complement_k) : Json(nullptr);
  j["linear_model"] = rep.linear_model ? matrix_to_json(*rep.linear_model) : Json(nullptr);
  Json res = Json::object();
  for (const auto& [k, v] : rep.residuals) res[k] = detail::format_double(v);
  j["residuals"] = std::move(res);
  Json seeds = Json::object();
  for (const auto& [k, v] : rep.seeds) seeds[k] = v;
  j["seeds"] = std::move(seeds);
  j["diagnostics"] = rep.diagnostics;
  return j;
}

template <Scalar T>
Json to_json(const DimensionBoundReport<T>& rep) {
  Json frame = Json::array();
  for (const auto& z : rep.frame) frame.push_back(chart_to_json(z));
  return Json{{"k", rep.k},         {"span_dim", rep.span_dim}, {"lower", rep.lower}, {"upper", rep.upper},
              {"holds", rep.holds}, {"frame", std::move(frame)}};
}

inline Json to_json(const HyperplaneReport& rep) {
  return Json{{"dim_open", rep.dim_open},
              {"dim_hyperplanes", rep.dim_hyperplanes},
              {"null_expected", rep.null_expected},
              {"null_confirmed", rep.null_confirmed},
              {"shilov_defect", detail::format_double(rep.shilov_defect)}};
}

}  // namespace grassorth
