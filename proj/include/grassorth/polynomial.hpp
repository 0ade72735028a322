#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "grassorth/errors.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

using Exponent = std::vector<uint32_t>;

/// Sparse multivariate polynomial: exponent multi-index -> coefficient, zero
/// coefficients pruned, one entry per multi-index.
template <Scalar T>
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(size_t nvars) : nvars_(nvars) {}

  static MultiPoly constant(size_t nvars, const T& c) {
    MultiPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static MultiPoly variable(size_t nvars, size_t k, const T& coef = ScalarTraits<T>::one()) {
    require(k < nvars, ErrorCode::InvalidArgument, "MultiPoly::variable index out of range");
    Exponent e(nvars, 0);
    e[k] = 1;
    MultiPoly p(nvars);
    p.add_term(e, coef);
    return p;
  }

  size_t nvars() const { return nvars_; }
  const std::map<Exponent, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  size_t degree() const {
    size_t d = 0;
    for (const auto& [e, c] : terms_) {
      size_t t = 0;
      for (auto x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ScalarTraits<T>::zero() : it->second;
  }

  /// Adds c to the coefficient of x^e.
  void add_term(const Exponent& e, const T& c) {
    require(e.size() == nvars_, ErrorCode::DimensionMismatch, "MultiPoly term has wrong number of exponents");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
    if (it->second == ScalarTraits<T>::zero()) terms_.erase(it);
  }

  T evaluate(std::span<const T> x) const {
    require(x.size() == nvars_, ErrorCode::DimensionMismatch, "MultiPoly::evaluate: wrong number of variables");
    T acc = ScalarTraits<T>::zero();
    for (const auto& [e, c] : terms_) {
      T term = c;
      for (size_t k = 0; k < nvars_; ++k)
        for (uint32_t p = 0; p < e[k]; ++p) term *= x[k];
      acc += term;
    }
    return acc;
  }

  /// The polynomial with conjugated coefficients and the same (free) variables.
  MultiPoly conjugate_coefficients() const {
    MultiPoly p(nvars_);
    for (const auto& [e, c] : terms_) p.terms_.emplace(e, ScalarTraits<T>::conj(c));
    return p;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) {
    require(a.nvars_ == b.nvars_, ErrorCode::DimensionMismatch, "MultiPoly sum: variable count");
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    require(a.nvars_ == b.nvars_, ErrorCode::DimensionMismatch, "MultiPoly product: variable count");
    MultiPoly out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.nvars_);
        for (size_t k = 0; k < a.nvars_; ++k) e[k] = ea[k] + eb[k];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  friend MultiPoly operator*(const T& s, const MultiPoly& a) {
    MultiPoly out(a.nvars_);
    for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
    return out;
  }

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  size_t nvars_ = 0;
  std::map<Exponent, T> terms_;
};

/// Integer power of a polynomial by repeated multiplication.
template <Scalar T>
MultiPoly<T> pow(const MultiPoly<T>& p, uint32_t k) {
  MultiPoly<T> out = MultiPoly<T>::constant(p.nvars(), ScalarTraits<T>::one());
  for (uint32_t i = 0; i < k; ++i) out = out * p;
  return out;
}

}  // namespace grassorth
