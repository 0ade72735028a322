#pragma once

// Scalar and matrix encodings shared by every serialized type:
//   scalar  {"re": "<decimal or p/q>", "im": "<decimal or p/q>"}
//   matrix  [[scalar, ...], ...]

#include <string>

#include "json.hpp"

#include "grassorth/errors.hpp"
#include "grassorth/matrix.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

using Json = nlohmann::ordered_json;

template <Scalar T>
Json scalar_to_json(const T& x) {
  auto [re, im] = ScalarTraits<T>::format(x);
  return Json{{"re", re}, {"im", im}};
}

namespace detail {
inline std::string scalar_part(const Json& j, const char* key) {
  if (!j.contains(key)) return "0";
  const Json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  throw Error(ErrorCode::ParseError, std::string("scalar part '") + key + "' must be a string or number");
}
}  // namespace detail

/// Accepts {"re":..,"im":..} objects (parts as strings or numbers, "im" optional) and bare numbers/strings.
template <Scalar T>
T scalar_from_json(const Json& j) {
  if (j.is_object()) {
    return ScalarTraits<T>::parse(detail::scalar_part(j, "re"), detail::scalar_part(j, "im"));
  }
  if (j.is_string()) return ScalarTraits<T>::parse(j.get<std::string>(), "0");
  if (j.is_number_integer()) return ScalarTraits<T>::parse(std::to_string(j.get<long long>()), "0");
  if (j.is_number()) return ScalarTraits<T>::parse(j.dump(), "0");
  throw Error(ErrorCode::ParseError, "scalar must be an object {re, im}, a string or a number");
}

template <Scalar T>
Json matrix_to_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar T>
Matrix<T> matrix_from_json(const Json& j, size_t cols_if_empty = 0) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "matrix must be an array of rows");
  std::vector<Vec<T>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "matrix row must be an array");
    Vec<T> r;
    for (const auto& x : row) r.push_back(scalar_from_json<T>(x));
    rows.push_back(std::move(r));
  }
  try {
    return Matrix<T>::from_rows(rows, cols_if_empty);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

template <Scalar T>
Json vector_to_json(std::span<const T> v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

}  // namespace grassorth
