#pragma once

// Scalar backends. Every algorithm in the library is a template over a scalar
// type T with a ScalarTraits<T> specialization:
//   Complex      : std::complex<double>, decisions through an explicit tolerance
//   GaussRational: exact complex rationals over GMP, decisions are exact

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <complex>
#include <concepts>
#include <string>
#include <string_view>
#include <utility>

#include "grassorth/errors.hpp"

namespace grassorth {

using Complex = std::complex<double>;

/// Default Float tolerance; every API that takes a tolerance lets callers override it.
inline constexpr double kDefaultTol = 1e-9;

class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  GaussRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  mpq_class abs2() const { return re_ * re_ + im_ * im_; }
  GaussRational conj() const { return {re_, -im_}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    require(!o.is_zero(), ErrorCode::InvalidArgument, "division by exact zero");
    const mpq_class d = o.abs2();
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / d;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

namespace detail {

/// Nearest double to an exact rational (mpq_get_d truncates, so fix up).
inline double nearest_double(const mpq_class& q) {
  const double d = q.get_d();
  double best = d;
  mpq_class best_err = abs(q - mpq_class(d));
  for (double c : {std::nextafter(d, HUGE_VAL), std::nextafter(d, -HUGE_VAL)}) {
    if (!std::isfinite(c)) continue;
    mpq_class err = abs(q - mpq_class(c));
    if (err < best_err) {
      best_err = err;
      best = c;
    }
  }
  return best;
}

/// Parses "p/q", integers, and decimals with optional exponent into an exact rational.
inline mpq_class parse_rational(std::string_view text) {
  auto fail = [&]() -> Error {
    return Error(ErrorCode::ParseError, "bad scalar literal '" + std::string(text) + "'");
  };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (s.empty()) throw fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0) throw fail();
    if (den.set_str(s.substr(slash + 1), 10) != 0 || den == 0) throw fail();
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }

  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exp10;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail();
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw fail();
    ++i;
    long e = 0;
    const char* first = s.data() + i;
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) throw fail();
    exp10 += e;
  }
  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 < 0 ? mpq_class(mant, pow10) : mpq_class(mant * pow10);
  q.canonicalize();
  return q;
}

inline double parse_double(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return nearest_double(parse_rational(text));
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::ParseError, "bad scalar literal '" + s + "'");
  }
  return v;
}

inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  static constexpr bool exact = false;
  static constexpr const char* name = "float";

  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_parts(const Real& re, const Real& im) { return {re, im}; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static Real real(const Complex& x) { return x.real(); }
  static Real imag(const Complex& x) { return x.imag(); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static double to_double(const Real& x) { return x; }
  static Complex to_complex(const Complex& x) { return x; }
  static bool is_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }
  /// Sign of a real quantity: 0 when |x| <= tol.
  static int sign(const Real& x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }
  static Complex parse(std::string_view re, std::string_view im) {
    return {detail::parse_double(re), detail::parse_double(im)};
  }
  static std::pair<std::string, std::string> format(const Complex& x) {
    return {detail::format_double(x.real()), detail::format_double(x.imag())};
  }
};

template <>
struct ScalarTraits<GaussRational> {
  using Real = mpq_class;
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";

  static GaussRational zero() { return {}; }
  static GaussRational one() { return GaussRational(1L); }
  static GaussRational from_int(long v) { return GaussRational(v); }
  static GaussRational from_parts(const Real& re, const Real& im) { return {re, im}; }
  static GaussRational conj(const GaussRational& x) { return x.conj(); }
  static Real real(const GaussRational& x) { return x.re(); }
  static Real imag(const GaussRational& x) { return x.im(); }
  /// Only used for reporting; exact pivoting never compares magnitudes.
  static double magnitude(const GaussRational& x) { return std::sqrt(x.abs2().get_d()); }
  static double to_double(const Real& x) { return detail::nearest_double(x); }
  static Complex to_complex(const GaussRational& x) {
    return {detail::nearest_double(x.re()), detail::nearest_double(x.im())};
  }
  static bool is_zero(const GaussRational& x, double /*tol*/) { return x.is_zero(); }
  static int sign(const Real& x, double /*tol*/) { return sgn(x); }
  static GaussRational parse(std::string_view re, std::string_view im) {
    return {detail::parse_rational(re), detail::parse_rational(im)};
  }
  static std::pair<std::string, std::string> format(const GaussRational& x) {
    return {x.re().get_str(), x.im().get_str()};
  }
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <Scalar T>
using RealOf = typename ScalarTraits<T>::Real;

/// Converts an exact scalar to the Float backend (round-to-nearest per part).
template <Scalar T>
Complex to_complex(const T& x) {
  return ScalarTraits<T>::to_complex(x);
}

}  // namespace grassorth
