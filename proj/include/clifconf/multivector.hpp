#pragma once

// Exterior algebra of R^n (or C^n) in the blade basis, with wedge, interior
// product and the Clifford action v.e = v^e - v_|e.
//
// Blades are bitmasks: bit (i-1) set <=> e_i present. Coefficient index equals
// the mask, so blades of a fixed dimension are ordered by binary rank.
// Storage uses the unweighted wedge (e1^e2 has coefficient 1 on blade 0b11);
// with that choice u^(v_|w) + v_|(u^w) = <u,v> w holds without extra factors.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clifconf/linalg.hpp"
#include "clifconf/matrix.hpp"

namespace clifconf {

using Blade = std::uint32_t;

inline constexpr int kMaxDim = 12;

inline int grade_of(Blade b) { return std::popcount(b); }

// Sign picked up by sorting e_A ^ e_B into increasing order (A, B disjoint).
inline int reorder_sign(Blade a, Blade b) {
  a >>= 1;
  int swaps = 0;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

inline Blade blade_of(std::initializer_list<int> indices) {
  Blade b = 0;
  for (int i : indices) {
    if (i < 1 || i > kMaxDim) throw std::out_of_range("blade index out of range");
    b |= Blade{1} << (i - 1);
  }
  return b;
}

// 1-based indices of a blade, increasing.
inline std::vector<int> blade_indices(Blade b) {
  std::vector<int> out;
  for (int i = 0; b != 0; ++i, b >>= 1)
    if (b & 1) out.push_back(i + 1);
  return out;
}

inline void check_dim(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDim));
}

inline void check_same_dim(int a, int b, const char* where) {
  if (a != b)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
}

template <Scalar S>
class Metric {
 public:
  explicit Metric(Matrix<S> g) : g_(std::move(g)) {
    if (g_.rows() != g_.cols()) throw std::invalid_argument("metric must be square");
    check_dim(static_cast<int>(g_.rows()));
    if (!(g_ == g_.transpose())) throw std::invalid_argument("metric must be symmetric");
    if constexpr (is_exact_v<S>) {
      (void)inverse(g_);  // throws if degenerate
    } else if (rank(g_) < g_.rows()) {
      throw std::invalid_argument("metric must be invertible");
    }
  }

  static Metric euclidean(int n) {
    check_dim(n);
    return Metric(Matrix<S>::identity(static_cast<std::size_t>(n)));
  }

  int dim() const { return static_cast<int>(g_.rows()); }
  const Matrix<S>& matrix() const { return g_; }
  const S& operator()(int i, int j) const { return g_(i, j); }

 private:
  Matrix<S> g_;
};

template <Scalar S>
class Multivector {
 public:
  Multivector() = default;
  explicit Multivector(int n) : n_(n) {
    check_dim(n);
    coeffs_.assign(std::size_t{1} << n, S(0));
  }

  static Multivector scalar(int n, const S& s) {
    Multivector m(n);
    m.coeffs_[0] = s;
    return m;
  }

  static Multivector blade(int n, Blade b, const S& coeff = S(1)) {
    Multivector m(n);
    if (b >= m.coeffs_.size()) throw std::out_of_range("blade outside dimension");
    m.coeffs_[b] = coeff;
    return m;
  }

  // e_i, 1-based
  static Multivector basis_vector(int n, int i) {
    if (i < 1 || i > n) throw std::out_of_range("basis vector index out of range");
    return blade(n, Blade{1} << (i - 1));
  }

  int dim() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const S> coeffs() const { return coeffs_; }

  const S& operator[](Blade b) const { return coeffs_.at(b); }
  S& operator[](Blade b) { return coeffs_.at(b); }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!clifconf::is_zero(c)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) {
      const double m = magnitude(c);
      s += m * m;
    }
    return std::sqrt(s);
  }

  // Largest grade with a nonzero coefficient; -1 for zero.
  int top_grade() const {
    int g = -1;
    for (Blade b = 0; b < coeffs_.size(); ++b)
      if (!clifconf::is_zero(coeffs_[b])) g = std::max(g, grade_of(b));
    return g;
  }

  bool is_homogeneous(int k) const {
    for (Blade b = 0; b < coeffs_.size(); ++b)
      if (grade_of(b) != k && !clifconf::is_zero(coeffs_[b])) return false;
    return true;
  }

  Multivector& operator+=(const Multivector& o) {
    check_same_dim(n_, o.n_, "multivector +");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same_dim(n_, o.n_, "multivector -");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Multivector& operator*=(const S& s) {
    for (auto& c : coeffs_)
      if (!clifconf::is_zero(c)) c *= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= S(-1); }
  friend Multivector operator*(Multivector a, const S& s) { return a *= s; }
  friend Multivector operator*(const S& s, Multivector a) { return a *= s; }

  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int n_ = 0;
  std::vector<S> coeffs_;
};

// An element of W; kept as coordinates so grade-1 support is structural.
template <Scalar S>
class VectorElem {
 public:
  VectorElem() = default;
  explicit VectorElem(std::vector<S> coords) : x_(std::move(coords)) { check_dim(dim()); }

  static VectorElem zero(int n) { return VectorElem(std::vector<S>(static_cast<std::size_t>(n), S(0))); }
  static VectorElem basis(int n, int i) {
    if (i < 1 || i > n) throw std::out_of_range("basis vector index out of range");
    auto v = zero(n);
    v.x_[static_cast<std::size_t>(i - 1)] = S(1);
    return v;
  }

  static VectorElem from_multivector(const Multivector<S>& m) {
    if (!m.is_homogeneous(1)) throw std::invalid_argument("multivector is not a vector (grade-1)");
    std::vector<S> x(static_cast<std::size_t>(m.dim()));
    for (int i = 0; i < m.dim(); ++i) x[static_cast<std::size_t>(i)] = m[Blade{1} << i];
    return VectorElem(std::move(x));
  }

  int dim() const { return static_cast<int>(x_.size()); }
  const S& operator[](std::size_t i) const { return x_[i]; }
  S& operator[](std::size_t i) { return x_[i]; }
  std::span<const S> coords() const { return x_; }

  Multivector<S> to_multivector() const {
    Multivector<S> m(dim());
    for (int i = 0; i < dim(); ++i) m[Blade{1} << i] = x_[static_cast<std::size_t>(i)];
    return m;
  }

  bool is_zero() const {
    for (const auto& c : x_)
      if (!clifconf::is_zero(c)) return false;
    return true;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& c : x_) s += magnitude(c) * magnitude(c);
    return std::sqrt(s);
  }

  VectorElem& operator+=(const VectorElem& o) {
    check_same_dim(dim(), o.dim(), "vector +");
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += o.x_[i];
    return *this;
  }
  VectorElem& operator-=(const VectorElem& o) {
    check_same_dim(dim(), o.dim(), "vector -");
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] -= o.x_[i];
    return *this;
  }
  VectorElem& operator*=(const S& s) {
    for (auto& c : x_) c *= s;
    return *this;
  }
  friend VectorElem operator+(VectorElem a, const VectorElem& b) { return a += b; }
  friend VectorElem operator-(VectorElem a, const VectorElem& b) { return a -= b; }
  friend VectorElem operator*(VectorElem a, const S& s) { return a *= s; }
  friend VectorElem operator*(const S& s, VectorElem a) { return a *= s; }
  friend bool operator==(const VectorElem& a, const VectorElem& b) { return a.x_ == b.x_; }

 private:
  std::vector<S> x_;
};

// <u, v> = u^T g v (bilinear, also after complexification)
template <Scalar S>
S inner(const VectorElem<S>& u, const VectorElem<S>& v, const Metric<S>& g) {
  check_same_dim(u.dim(), v.dim(), "inner");
  check_same_dim(u.dim(), g.dim(), "inner");
  S acc(0);
  for (int i = 0; i < u.dim(); ++i) {
    if (is_zero(u[i])) continue;
    for (int j = 0; j < v.dim(); ++j)
      if (!is_zero(v[j]) && !is_zero(g(i, j))) acc += u[i] * g(i, j) * v[j];
  }
  return acc;
}

template <Scalar S>
S inner(const VectorElem<S>& u, const VectorElem<S>& v) {
  return inner(u, v, Metric<S>::euclidean(u.dim()));
}

template <Scalar S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  check_same_dim(a.dim(), b.dim(), "wedge");
  Multivector<S> out(a.dim());
  for (Blade x = 0; x < a.size(); ++x) {
    if (is_zero(a[x])) continue;
    for (Blade y = 0; y < b.size(); ++y) {
      if ((x & y) != 0 || is_zero(b[y])) continue;
      S term = a[x] * b[y];
      if (reorder_sign(x, y) < 0) out[x | y] -= term;
      else out[x | y] += term;
    }
  }
  return out;
}

template <Scalar S>
Multivector<S> wedge(const VectorElem<S>& v, const Multivector<S>& a) {
  return wedge(v.to_multivector(), a);
}

// Interior product v _| a: removes one factor, sign (-1)^(position of the factor).
template <Scalar S>
Multivector<S> contract(const VectorElem<S>& v, const Multivector<S>& a, const Metric<S>& g) {
  check_same_dim(v.dim(), a.dim(), "contract");
  check_same_dim(v.dim(), g.dim(), "contract");
  const int n = a.dim();
  // <v, e_k> for every k
  std::vector<S> vk(static_cast<std::size_t>(n), S(0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (!is_zero(v[i]) && !is_zero(g(i, k))) vk[static_cast<std::size_t>(k)] += v[i] * g(i, k);

  Multivector<S> out(n);
  for (Blade b = 0; b < a.size(); ++b) {
    if (is_zero(a[b])) continue;
    int pos = 0;
    for (int k = 0; k < n; ++k) {
      const Blade bit = Blade{1} << k;
      if ((b & bit) == 0) continue;
      if (!is_zero(vk[static_cast<std::size_t>(k)])) {
        S term = vk[static_cast<std::size_t>(k)] * a[b];
        if (pos & 1) out[b ^ bit] -= term;
        else out[b ^ bit] += term;
      }
      ++pos;
    }
  }
  return out;
}

template <Scalar S>
Multivector<S> contract(const VectorElem<S>& v, const Multivector<S>& a) {
  return contract(v, a, Metric<S>::euclidean(v.dim()));
}

// v.e = v^e - v_|e
template <Scalar S>
Multivector<S> clifford_mul_vec(const VectorElem<S>& v, const Multivector<S>& a, const Metric<S>& g) {
  check_same_dim(v.dim(), a.dim(), "clifford_mul_vec");
  return wedge(v, a) - contract(v, a, g);
}

template <Scalar S>
Multivector<S> clifford_mul_vec(const VectorElem<S>& v, const Multivector<S>& a) {
  return clifford_mul_vec(v, a, Metric<S>::euclidean(v.dim()));
}

// vs[0].(vs[1].( ... vs[k-1].a)); an empty word is the identity.
template <Scalar S>
Multivector<S> clifford_word(std::span<const VectorElem<S>> vs, const Multivector<S>& a, const Metric<S>& g) {
  Multivector<S> out = a;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) out = clifford_mul_vec(*it, out, g);
  return out;
}

template <Scalar S>
Multivector<S> clifford_word(const std::vector<VectorElem<S>>& vs, const Multivector<S>& a) {
  const Metric<S> g = Metric<S>::euclidean(a.dim());
  return clifford_word(std::span<const VectorElem<S>>(vs), a, g);
}

template <Scalar S>
Multivector<S> grade_project(const Multivector<S>& a, int k) {
  if (k < 0 || k > a.dim())
    throw std::out_of_range("grade_project: grade " + std::to_string(k) + " outside 0.." + std::to_string(a.dim()));
  Multivector<S> out(a.dim());
  for (Blade b = 0; b < a.size(); ++b)
    if (grade_of(b) == k) out[b] = a[b];
  return out;
}

// Column b holds the blade coefficients of f(e_b).
template <Scalar S, class F>
Matrix<S> matrix_of_linear_map(int n, F&& f) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix<S> m(dim, dim);
  for (Blade b = 0; b < dim; ++b) {
    const Multivector<S> img = f(Multivector<S>::blade(n, b));
    m.set_column(b, img.coeffs());
  }
  return m;
}

template <Scalar S>
Matrix<S> matrix_of_left_mul(const VectorElem<S>& v, const Metric<S>& g) {
  check_same_dim(v.dim(), g.dim(), "matrix_of_left_mul");
  return matrix_of_linear_map<S>(v.dim(), [&](const Multivector<S>& e) { return clifford_mul_vec(v, e, g); });
}

template <Scalar S>
Matrix<S> matrix_of_left_mul(const VectorElem<S>& v) {
  return matrix_of_left_mul(v, Metric<S>::euclidean(v.dim()));
}

template <Scalar S>
Multivector<S> apply(const Matrix<S>& m, const Multivector<S>& a) {
  if (m.cols() != a.size() || m.rows() != a.size()) throw std::invalid_argument("apply: matrix does not act on this algebra");
  const std::vector<S> img = m * a.coeffs();
  Multivector<S> out(a.dim());
  for (Blade b = 0; b < img.size(); ++b) out[b] = img[b];
  return out;
}

// Left-multiplication matrices L(e_1), ..., L(e_n) in the Euclidean metric.
template <Scalar S>
std::vector<Matrix<S>> left_mul_basis(int n) {
  check_dim(n);
  std::vector<Matrix<S>> out;
  const Metric<S> g = Metric<S>::euclidean(n);
  for (int a = 1; a <= n; ++a) out.push_back(matrix_of_left_mul(VectorElem<S>::basis(n, a), g));
  return out;
}

}  // namespace clifconf
