#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qconf {

// Dense row-major matrix over any ring-like value type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<T>& data() { return a_; }
  const std::vector<T>& data() const { return a_; }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> r;
    r.rows_ = rows_;
    r.cols_ = cols_;
    r.a_.reserve(a_.size());
    for (const T& x : a_) r.a_.push_back(f(x));
    return r;
  }

  Matrix transposed() const {
    Matrix r;
    r.rows_ = cols_;
    r.cols_ = rows_;
    r.a_ = a_;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    check_same(x, y);
    Matrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    check_same(x, y);
    Matrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r;
    r.rows_ = x.rows_;
    r.cols_ = y.cols_;
    r.a_.reserve(r.rows_ * r.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < y.cols_; ++j) {
        T s = x(i, 0) * y(0, j);
        for (std::size_t k = 1; k < x.cols_; ++k) s = s + x(i, k) * y(k, j);
        r.a_.push_back(std::move(s));
      }
    return r;
  }

  // Kronecker product, (i1 i2, j1 j2) -> x(i1, j1) y(i2, j2).
  friend Matrix kronecker(const Matrix& x, const Matrix& y) {
    Matrix r;
    r.rows_ = x.rows_ * y.rows_;
    r.cols_ = x.cols_ * y.cols_;
    r.a_.reserve(r.rows_ * r.cols_);
    for (std::size_t i1 = 0; i1 < x.rows_; ++i1)
      for (std::size_t i2 = 0; i2 < y.rows_; ++i2)
        for (std::size_t j1 = 0; j1 < x.cols_; ++j1)
          for (std::size_t j2 = 0; j2 < y.cols_; ++j2) r.a_.push_back(x(i1, j1) * y(i2, j2));
    return r;
  }

 private:
  template <class U>
  friend class Matrix;

  static void check_same(const Matrix& x, const Matrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

}  // namespace qconf
