#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clifconf/scalar.hpp"

namespace clifconf {

// Dense row-major matrix over a scalar field. Products skip zero entries on
// both sides, which matters because Clifford multiplication matrices are
// signed permutations.
template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const S> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<S> column(std::size_t c) const {
    std::vector<S> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void set_column(std::size_t c, std::span<const S> v) {
    if (v.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const S& x) { return clifconf::is_zero(x); });
  }

  // Largest entry magnitude (as double); 0 exactly iff is_zero() in exact modes.
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

  std::size_t nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(data_.begin(), data_.end(), [](const S& x) { return !clifconf::is_zero(x); }));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = conj_of((*this)(r, c));
    return t;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block outside matrix");
    Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("set_block outside matrix");
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    if (clifconf::is_zero(s)) {
      std::fill(data_.begin(), data_.end(), S(0));
      return *this;
    }
    for (auto& x : data_)
      if (!clifconf::is_zero(x)) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= S(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                                  " times " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    // nonzero pattern of b, row by row
    std::vector<std::vector<std::size_t>> nz(b.rows_);
    for (std::size_t k = 0; k < b.rows_; ++k)
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!clifconf::is_zero(b(k, j))) nz[k].push_back(j);
    Matrix c(a.rows_, b.cols_);
    S tmp;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (nz[k].empty() || clifconf::is_zero(aik)) continue;
        for (std::size_t j : nz[k]) {
          tmp = aik * b(k, j);
          c(i, j) += tmp;
        }
      }
    }
    return c;
  }

  friend std::vector<S> operator*(const Matrix& a, std::span<const S> v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector product: size mismatch");
    std::vector<S> out(a.rows_, S(0));
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (clifconf::is_zero(v[k])) continue;
      for (std::size_t i = 0; i < a.rows_; ++i)
        if (!clifconf::is_zero(a(i, k))) out[i] += a(i, k) * v[k];
    }
    return out;
  }
  friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
    return a * std::span<const S>(v);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument(std::string("matrix ") + op + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

// Kronecker product; index (i, j) of a (x) b is i * dim(b) + j.
template <Scalar S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          if (!is_zero(b(p, q))) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

template <Scalar S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

// Hermitian Frobenius pairing sum a_ij * conj(b_ij).
template <Scalar S>
S frobenius_pair(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("frobenius_pair: shape mismatch");
  S acc(0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!is_zero(a(r, c)) && !is_zero(b(r, c))) acc += a(r, c) * conj_of(b(r, c));
  return acc;
}

template <Scalar S>
Matrix<S> hstack(const std::vector<Matrix<S>>& blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows()) throw std::invalid_argument("hstack: row mismatch");
    cols += b.cols();
  }
  Matrix<S> out(blocks.front().rows(), cols);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

template <Scalar S>
Matrix<S> vstack(const std::vector<Matrix<S>>& blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != blocks.front().cols()) throw std::invalid_argument("vstack: column mismatch");
    rows += b.rows();
  }
  Matrix<S> out(rows, blocks.front().cols());
  std::size_t r0 = 0;
  for (const auto& b : blocks) {
    out.set_block(r0, 0, b);
    r0 += b.rows();
  }
  return out;
}

// Entrywise conversion between scalar fields (e.g. Rational -> ExtQ).
template <Scalar T, Scalar S, class F>
Matrix<T> map_entries(const Matrix<S>& m, F&& f) {
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!is_zero(m(r, c))) out(r, c) = f(m(r, c));
  return out;
}

}  // namespace clifconf
