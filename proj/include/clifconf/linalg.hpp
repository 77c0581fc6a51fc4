#pragma once

// Gaussian elimination over any scalar field. Exact fields pivot on the first
// nonzero entry of a column, so kernel bases are reproducible bit for bit.
// Float fields use partial pivoting with a relative threshold.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "clifconf/matrix.hpp"

namespace clifconf {

template <Scalar S>
struct Rref {
  Matrix<S> reduced;
  std::vector<std::size_t> pivot_cols;  // pivot_cols[r] is the pivot column of row r
  std::vector<std::size_t> free_cols;
};

template <Scalar S>
Rref<S> rref(Matrix<S> a, double rel_tol = 1e-11) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const double scale = is_exact_v<S> ? 0.0 : std::max(1.0, a.max_abs());
  auto negligible = [&](const S& x) {
    if constexpr (is_exact_v<S>) {
      return is_zero(x);
    } else {
      return magnitude(x) <= rel_tol * scale;
    }
  };

  Rref<S> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t piv = rows;
    if constexpr (is_exact_v<S>) {
      for (std::size_t i = r; i < rows; ++i)
        if (!is_zero(a(i, c))) {
          piv = i;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t i = r; i < rows; ++i) {
        const double m = magnitude(a(i, c));
        if (m > best && !negligible(a(i, c))) {
          best = m;
          piv = i;
        }
      }
    }
    if (piv == rows) {
      out.free_cols.push_back(c);
      continue;
    }
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));

    const S inv = S(1) / a(r, c);
    for (std::size_t j = c; j < cols; ++j)
      if (!is_zero(a(r, j))) a(r, j) *= inv;
    a(r, c) = S(1);

    std::vector<std::size_t> nz;
    for (std::size_t j = c + 1; j < cols; ++j)
      if (!is_zero(a(r, j))) nz.push_back(j);

    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      const S f = a(i, c);
      for (std::size_t j : nz) a(i, j) -= f * a(r, j);
      a(i, c) = S(0);
      if constexpr (!is_exact_v<S>) {
        for (std::size_t j : nz)
          if (negligible(a(i, j))) a(i, j) = S(0);
      }
    }
    out.pivot_cols.push_back(c);
    ++r;
    if (r == rows) {
      for (std::size_t c2 = c + 1; c2 < cols; ++c2) out.free_cols.push_back(c2);
      break;
    }
  }
  out.reduced = std::move(a);
  return out;
}

template <Scalar S>
std::size_t rank(const Matrix<S>& a) {
  return rref(a).pivot_cols.size();
}

// Kernel basis as columns, one per free column of the reduced form. Row f of
// the basis (f a free column) is the unit vector, so selecting the free rows
// is a left inverse of the basis matrix.
template <Scalar S>
struct Kernel {
  Matrix<S> basis;                      // cols x dim
  std::vector<std::size_t> free_cols;   // coordinates that read off kernel coefficients
};

template <Scalar S>
Kernel<S> kernel(const Matrix<S>& a) {
  const Rref<S> red = rref(a);
  Kernel<S> k;
  k.free_cols = red.free_cols;
  k.basis = Matrix<S>(a.cols(), red.free_cols.size());
  for (std::size_t f = 0; f < red.free_cols.size(); ++f) {
    const std::size_t fc = red.free_cols[f];
    k.basis(fc, f) = S(1);
    for (std::size_t r = 0; r < red.pivot_cols.size(); ++r) {
      const S& v = red.reduced(r, fc);
      if (!is_zero(v)) k.basis(red.pivot_cols[r], f) = -v;
    }
  }
  return k;
}

// Selection matrix reading kernel coordinates off an ambient vector.
template <Scalar S>
Matrix<S> kernel_coordinates(const Kernel<S>& k) {
  Matrix<S> sel(k.free_cols.size(), k.basis.rows());
  for (std::size_t f = 0; f < k.free_cols.size(); ++f) sel(f, k.free_cols[f]) = S(1);
  return sel;
}

template <Scalar S>
Matrix<S> inverse(const Matrix<S>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = a.rows();
  const Rref<S> red = rref(hstack<S>({a, Matrix<S>::identity(n)}));
  if (red.pivot_cols.size() < n || (n > 0 && red.pivot_cols[n - 1] != n - 1))
    throw std::domain_error("inverse: matrix is singular");
  return red.reduced.block(0, n, n, n);
}

}  // namespace clifconf
