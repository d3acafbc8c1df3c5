// matrix.hpp: small dense row-major matrices over a complex scalar.
#pragma once

#include "dimer/numerics/scalar.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dimer::numerics {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& k) {
    for (auto& x : data_) x *= k;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const T& k, Matrix a) { return a *= k; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        const T* brow = b.data_.data() + k * b.cols_;
        T* crow = c.data_.data() + i * c.cols_;
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        using std::conj;
        t(j, i) = conj((*this)(i, j));
      }
    return t;
  }

  bool all_finite() const {
    using std::isfinite;
    return std::all_of(data_.begin(), data_.end(), [](const T& z) {
      return isfinite(z.real()) && isfinite(z.imag());
    });
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw std::invalid_argument("Matrix: dimension mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<std::complex<double>>;
using QuadMatrix = Matrix<cquad>;
using ComplexVector = std::vector<std::complex<double>>;

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<From, std::complex<double>>) {
        out(i, j) = ScalarTraits<To>::from(m(i, j));
      } else {
        out(i, j) = ScalarTraits<From>::to_double(m(i, j));
      }
    }
  return out;
}

template <class T>
std::vector<T> matvec(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc{};
    const auto r = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

/// Maximum absolute column sum.
template <class T>
real_t<T> norm1(const Matrix<T>& a) {
  using std::abs;
  real_t<T> best{0};
  for (std::size_t j = 0; j < a.cols(); ++j) {
    real_t<T> s{0};
    for (std::size_t i = 0; i < a.rows(); ++i) s += abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <class T>
real_t<T> norm_frobenius(const Matrix<T>& a) {
  using std::sqrt;
  real_t<T> s{0};
  for (const auto& z : a.data()) s += z.real() * z.real() + z.imag() * z.imag();
  return sqrt(s);
}

/// Solves A X = B by LU with partial pivoting. Throws NumericalError on an
/// exactly singular pivot.
ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b);

}  // namespace dimer::numerics
