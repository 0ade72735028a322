#pragma once

// Dense row-major matrices over a library scalar, plus the elimination kernels
// every other module is built on. The kernels are structurally identical for
// both scalar backends: exact mode takes the first nonzero pivot, float mode the
// largest-magnitude pivot above tol * max(1, max |entry|).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "grassorth/errors.hpp"
#include "grassorth/scalar.hpp"

namespace grassorth {

template <Scalar T>
using Vec = std::vector<T>;

template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, ScalarTraits<T>::zero()) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
    return m;
  }

  static Matrix from_rows(const std::vector<Vec<T>>& rows, size_t cols_if_empty = 0) {
    const size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, ErrorCode::DimensionMismatch, "ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.row_span(i).begin());
    }
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row_span(size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row_span(size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec<T> row(size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }

  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix conjugate() const {
    Matrix c(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) c.data_[k] = ScalarTraits<T>::conj(data_[k]);
    return c;
  }

  Matrix adjoint() const { return transpose().conjugate(); }

  /// Rows [first, first + count).
  Matrix row_block(size_t first, size_t count) const {
    Matrix b(count, cols_);
    for (size_t i = 0; i < count; ++i)
      for (size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(first + i, j);
    return b;
  }

  /// Columns [first, first + count).
  Matrix col_block(size_t first, size_t count) const {
    Matrix b(rows_, count);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < count; ++j) b(i, j) = (*this)(i, first + j);
    return b;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == ScalarTraits<T>::zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorCode::DimensionMismatch, "matrix sum shape");
    for (size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorCode::DimensionMismatch, "matrix difference shape");
    for (size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }

  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.data_) x = s * x;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
double max_abs(const Matrix<T>& m) {
  double best = 0.0;
  for (const auto& x : m.data()) best = std::max(best, ScalarTraits<T>::magnitude(x));
  return best;
}

template <Scalar T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch, "max_abs_diff shape");
  return max_abs(a - b);
}

/// Entrywise conversion to the float backend.
template <Scalar T>
Matrix<Complex> to_complex(const Matrix<T>& m) {
  Matrix<Complex> c(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) c(i, j) = to_complex(m(i, j));
  return c;
}

/// Zero-decision threshold for elimination: tol * max(1, scale). Ignored in exact mode.
inline double pivot_threshold(double scale, double tol) { return tol * std::max(1.0, scale); }

template <Scalar T>
struct RrefResult {
  Matrix<T> reduced;            // same shape as the input; rows >= rank are zero
  std::vector<size_t> pivots;   // pivot column of each of the first rank rows
  Matrix<T> transform;          // transform * input == reduced (only when requested)
  size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan reduction to reduced row-echelon form with unit pivots.
template <Scalar T>
RrefResult<T> rref(const Matrix<T>& input, double tol, bool track_transform = false) {
  using Tr = ScalarTraits<T>;
  RrefResult<T> out;
  Matrix<T>& r = out.reduced;
  r = input;
  if (track_transform) out.transform = Matrix<T>::identity(input.rows());
  const double thr = pivot_threshold(max_abs(input), tol);

  size_t row = 0;
  for (size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
    std::optional<size_t> piv;
    if constexpr (Tr::exact) {
      for (size_t i = row; i < r.rows(); ++i)
        if (!r(i, col).is_zero()) {
          piv = i;
          break;
        }
    } else {
      double best = thr;
      for (size_t i = row; i < r.rows(); ++i) {
        const double m = Tr::magnitude(r(i, col));
        if (m > best) {
          best = m;
          piv = i;
        }
      }
      if (!piv) {
        for (size_t i = row; i < r.rows(); ++i) r(i, col) = Tr::zero();
      }
    }
    if (!piv) continue;

    r.swap_rows(*piv, row);
    if (track_transform) out.transform.swap_rows(*piv, row);

    const T inv = Tr::one() / r(row, col);
    for (auto& x : r.row_span(row)) x = inv * x;
    if (track_transform)
      for (auto& x : out.transform.row_span(row)) x = inv * x;
    r(row, col) = Tr::one();

    for (size_t i = 0; i < r.rows(); ++i) {
      if (i == row) continue;
      const T f = r(i, col);
      if (Tr::is_zero(f, 0.0)) continue;
      for (size_t j = 0; j < r.cols(); ++j) r(i, j) -= f * r(row, j);
      if (track_transform)
        for (size_t j = 0; j < out.transform.cols(); ++j)
          out.transform(i, j) -= f * out.transform(row, j);
      r(i, col) = Tr::zero();
    }
    out.pivots.push_back(col);
    ++row;
  }
  for (size_t i = row; i < r.rows(); ++i)
    for (auto& x : r.row_span(i)) x = Tr::zero();
  return out;
}

/// Basis (as rows) of {x : m * x = 0}.
template <Scalar T>
Matrix<T> nullspace(const Matrix<T>& m, double tol) {
  using Tr = ScalarTraits<T>;
  const auto red = rref(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : red.pivots) is_pivot[c] = true;
  std::vector<Vec<T>> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<T> x(m.cols(), Tr::zero());
    x[f] = Tr::one();
    for (size_t i = 0; i < red.rank(); ++i) x[red.pivots[i]] = -red.reduced(i, f);
    basis.push_back(std::move(x));
  }
  return Matrix<T>::from_rows(basis, m.cols());
}

/// Solves a * x = b for square a; nullopt when a is singular (within tol in float mode).
template <Scalar T>
std::optional<Matrix<T>> solve(const Matrix<T>& a, const Matrix<T>& b, double tol) {
  using Tr = ScalarTraits<T>;
  require(a.rows() == a.cols() && a.rows() == b.rows(), ErrorCode::DimensionMismatch, "solve shape");
  const size_t n = a.rows();
  Matrix<T> aug(n, n + b.cols());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
  }
  const double thr = pivot_threshold(max_abs(a), tol);
  for (size_t col = 0; col < n; ++col) {
    std::optional<size_t> piv;
    if constexpr (Tr::exact) {
      for (size_t i = col; i < n; ++i)
        if (!aug(i, col).is_zero()) {
          piv = i;
          break;
        }
    } else {
      double best = thr;
      for (size_t i = col; i < n; ++i)
        if (Tr::magnitude(aug(i, col)) > best) {
          best = Tr::magnitude(aug(i, col));
          piv = i;
        }
    }
    if (!piv) return std::nullopt;
    aug.swap_rows(*piv, col);
    const T inv = Tr::one() / aug(col, col);
    for (auto& x : aug.row_span(col)) x = inv * x;
    for (size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const T f = aug(i, col);
      if (Tr::is_zero(f, 0.0)) continue;
      for (size_t j = col; j < aug.cols(); ++j) aug(i, j) -= f * aug(col, j);
    }
  }
  return aug.col_block(n, b.cols());
}

template <Scalar T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a, double tol) {
  return solve(a, Matrix<T>::identity(a.rows()), tol);
}

/// Determinant by elimination (first-nonzero pivoting in exact mode, partial pivoting in float).
template <Scalar T>
T determinant(Matrix<T> a) {
  using Tr = ScalarTraits<T>;
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  T det = Tr::one();
  const size_t n = a.rows();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    double best = -1.0;
    for (size_t i = col; i < n; ++i) {
      if constexpr (Tr::exact) {
        if (!a(i, col).is_zero()) {
          piv = i;
          best = 1.0;
          break;
        }
      } else if (Tr::magnitude(a(i, col)) > best) {
        best = Tr::magnitude(a(i, col));
        piv = i;
      }
    }
    if (Tr::is_zero(a(piv, col), 0.0)) return Tr::zero();
    if (piv != col) {
      a.swap_rows(piv, col);
      det = -det;
    }
    det *= a(col, col);
    const T inv = Tr::one() / a(col, col);
    for (size_t i = col + 1; i < n; ++i) {
      const T f = a(i, col) * inv;
      if (Tr::is_zero(f, 0.0)) continue;
      for (size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

/// Least-squares solution of a * x ~ b by Householder QR (float backend; a must have full column rank).
inline std::optional<Matrix<Complex>> least_squares(Matrix<Complex> a, Matrix<Complex> b, double tol) {
  const size_t m = a.rows();
  const size_t n = a.cols();
  require(m >= n && b.rows() == m, ErrorCode::DimensionMismatch, "least_squares shape");
  const double thr = pivot_threshold(max_abs(a), tol);
  for (size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (size_t i = k; i < m; ++i) norm2 += std::norm(a(i, k));
    const double norm = std::sqrt(norm2);
    if (norm <= thr) return std::nullopt;
    const Complex akk = a(k, k);
    const Complex phase = std::abs(akk) > 0.0 ? akk / std::abs(akk) : Complex(1.0, 0.0);
    const Complex alpha = -phase * norm;
    std::vector<Complex> v(m - k);
    for (size_t i = k; i < m; ++i) v[i - k] = a(i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (const auto& x : v) vnorm2 += std::norm(x);
    if (vnorm2 == 0.0) continue;
    auto reflect = [&](Matrix<Complex>& target) {
      for (size_t j = 0; j < target.cols(); ++j) {
        Complex dot = 0.0;
        for (size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * target(i, j);
        const Complex f = 2.0 * dot / vnorm2;
        for (size_t i = k; i < m; ++i) target(i, j) -= f * v[i - k];
      }
    };
    reflect(a);
    reflect(b);
  }
  Matrix<Complex> x(n, b.cols());
  for (size_t j = 0; j < b.cols(); ++j)
    for (size_t ii = n; ii-- > 0;) {
      Complex acc = b(ii, j);
      for (size_t k = ii + 1; k < n; ++k) acc -= a(ii, k) * x(k, j);
      x(ii, j) = acc / a(ii, ii);
    }
  return x;
}

}  // namespace grassorth
