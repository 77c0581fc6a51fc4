#pragma once

// Complexified Clifford algebra, the null splitting CW = U + U*, the colon
// action on Lambda U (x) Lambda U*, and the isomorphism Phi between the two
// realizations of the algebra.
//
// Elements of Lambda U (x) Lambda U* are stored as coefficient vectors with
// u_I (x) u*_J at index I + 2^m J, I and J being bitmasks over 1..m.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "clifconf/linalg.hpp"
#include "clifconf/multivector.hpp"
#include "clifconf/represent.hpp"

namespace clifconf {

template <ComplexScalar S>
struct NullSplitting {
  int n = 0;
  std::vector<VectorElem<S>> u_basis;
  std::vector<VectorElem<S>> ustar_basis;

  int m() const { return n / 2; }

  // Coordinates (alpha, beta) of v = sum alpha_k u_k + beta_k u*_k.
  std::pair<std::vector<S>, std::vector<S>> decompose(const VectorElem<S>& v) const {
    check_same_dim(n, v.dim(), "NullSplitting::decompose");
    std::vector<S> alpha, beta;
    for (int k = 0; k < m(); ++k) {
      alpha.push_back(inner(v, ustar_basis[static_cast<std::size_t>(k)]));
      beta.push_back(inner(v, u_basis[static_cast<std::size_t>(k)]));
    }
    return {alpha, beta};
  }
};

inline void require_even(int n, const char* where) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument(std::string(where) + ": dimension must be even and positive");
}

template <ComplexScalar S>
NullSplitting<S> make_null_splitting(int n) {
  require_even(n, "make_null_splitting");
  check_dim(n);
  using T = scalar_traits<S>;
  const S r = S(1) / T::sqrt2();
  const S ir = T::imag_unit() * r;
  NullSplitting<S> split;
  split.n = n;
  for (int k = 0; k < n / 2; ++k) {
    auto u = VectorElem<S>::zero(n), us = VectorElem<S>::zero(n);
    u[static_cast<std::size_t>(2 * k)] = r;
    u[static_cast<std::size_t>(2 * k + 1)] = -ir;
    us[static_cast<std::size_t>(2 * k)] = r;
    us[static_cast<std::size_t>(2 * k + 1)] = ir;
    split.u_basis.push_back(u);
    split.ustar_basis.push_back(us);
  }
  return split;
}

template <ComplexScalar S>
struct SpinorSpace {
  int m = 0;
  std::size_t dim() const { return std::size_t{1} << m; }
};

// gamma(v) on Lambda U: sqrt2 (alpha ^ . - beta _| .).
template <ComplexScalar S>
Matrix<S> gamma_matrix(const VectorElem<S>& v, const NullSplitting<S>& split) {
  const auto [alpha, beta] = split.decompose(v);
  const int m = split.m();
  const VectorElem<S> a(alpha), b(beta);
  const S s2 = scalar_traits<S>::sqrt2();
  return matrix_of_linear_map<S>(m, [&](const Multivector<S>& x) { return (wedge(a, x) - contract(b, x)) * s2; });
}

template <ComplexScalar S>
std::vector<Matrix<S>> gamma_basis(const NullSplitting<S>& split) {
  std::vector<Matrix<S>> out;
  for (int i = 1; i <= split.n; ++i) out.push_back(gamma_matrix(VectorElem<S>::basis(split.n, i), split));
  return out;
}

// Colon action as a matrix on Lambda U (x) Lambda U*.
template <ComplexScalar S>
Matrix<S> colon_matrix(const VectorElem<S>& v, const NullSplitting<S>& split) {
  return kron(Matrix<S>::identity(std::size_t{1} << split.m()), gamma_matrix(v, split));
}

template <ComplexScalar S>
std::vector<S> colon_action(const VectorElem<S>& v, const std::vector<S>& omega, const NullSplitting<S>& split) {
  if (omega.size() != std::size_t{1} << split.n) throw std::invalid_argument("colon_action: element has wrong size");
  return colon_matrix(v, split) * omega;
}

inline std::size_t split_index(int m, Blade i, Blade j) { return static_cast<std::size_t>(i) + (static_cast<std::size_t>(j) << m); }

// Sum over I of u_I (x) u*_I: the identity endomorphism of Lambda U under the
// dual-blade pairing.
template <ComplexScalar S>
std::vector<S> phi_of_one(int n) {
  require_even(n, "phi_of_one");
  const int m = n / 2;
  std::vector<S> v(std::size_t{1} << n, S(0));
  for (Blade i = 0; i < (Blade{1} << m); ++i) v[split_index(m, i, i)] = S(1);
  return v;
}

enum class WordOrder { Lexicographic, Reversed };

class PhiConsistencyError : public std::logic_error {
 public:
  explicit PhiConsistencyError(const std::string& what) : std::logic_error(what) {}
};

template <ComplexScalar S>
struct PhiMap {
  int n = 0;
  NullSplitting<S> split;
  Matrix<S> matrix;   // columns: blades e_I of Lambda CW
  Matrix<S> inverse;
  WordOrder order = WordOrder::Lexicographic;
  int consistency_checks = 0;
};

namespace detail {

template <Scalar S>
bool all_negligible(const std::vector<S>& v, double tol) {
  for (const auto& x : v)
    if constexpr (is_exact_v<S>) {
      if (!scalar_traits<S>::is_zero(x)) return false;
    } else {
      if (scalar_traits<S>::magnitude(x) > tol) return false;
    }
  return true;
}

template <Scalar S>
std::vector<S> axpy(std::vector<S> y, const S& a, const std::vector<S>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

}  // namespace detail

// Phi(e_I) is the colon word of e_I applied to Phi(1). Before extending, the
// seed is checked against a:Phi(b) + b:Phi(a) = -2<a,b>Phi(1) for every pair of
// null basis vectors (which includes a:Phi(a) = 0).
template <ComplexScalar S>
PhiMap<S> build_phi(int n, WordOrder order = WordOrder::Lexicographic, double tol = 1e-9) {
  require_even(n, "build_phi");
  PhiMap<S> phi;
  phi.n = n;
  phi.order = order;
  phi.split = make_null_splitting<S>(n);
  const std::size_t dim = std::size_t{1} << n;
  const auto one = phi_of_one<S>(n);

  std::vector<Matrix<S>> colon;
  for (int i = 1; i <= n; ++i) colon.push_back(colon_matrix(VectorElem<S>::basis(n, i), phi.split));

  std::vector<VectorElem<S>> nulls = phi.split.u_basis;
  nulls.insert(nulls.end(), phi.split.ustar_basis.begin(), phi.split.ustar_basis.end());
  for (const auto& a : nulls)
    for (const auto& b : nulls) {
      const auto pa = colon_matrix(a, phi.split) * one;
      const auto pb = colon_matrix(b, phi.split) * one;
      auto lhs = colon_matrix(a, phi.split) * pb;
      lhs = detail::axpy(lhs, S(1), colon_matrix(b, phi.split) * pa);
      lhs = detail::axpy(lhs, S(2) * inner(a, b), one);
      if (!detail::all_negligible(lhs, tol)) throw PhiConsistencyError("build_phi: colon action violates the Clifford relation");
      ++phi.consistency_checks;
    }

  phi.matrix = Matrix<S>(dim, dim);
  for (Blade b = 0; b < dim; ++b) {
    auto idx = blade_indices(b);
    std::vector<S> col = one;
    S sign(1);
    if (order == WordOrder::Reversed) {
      std::reverse(idx.begin(), idx.end());
      const int k = static_cast<int>(idx.size());
      if ((k * (k - 1) / 2) % 2 != 0) sign = S(-1);
    }
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) col = colon[static_cast<std::size_t>(*it - 1)] * col;
    for (auto& x : col) x *= sign;
    phi.matrix.set_column(b, col);
  }
  try {
    phi.inverse = clifconf::inverse(phi.matrix);
  } catch (const std::domain_error&) {
    throw PhiConsistencyError("build_phi: result is singular");
  }
  return phi;
}

// The column of e_I under Phi viewed as an endomorphism of Lambda U.
template <Scalar S>
Matrix<S> as_endomorphism(int n, const std::vector<S>& elem) {
  const int m = n / 2;
  const std::size_t d = std::size_t{1} << m;
  Matrix<S> e(d, d);
  for (Blade i = 0; i < d; ++i)
    for (Blade j = 0; j < d; ++j) e(i, j) = elem[split_index(m, i, j)];
  return e;
}

template <Scalar S>
DefectReport matrix_defect(const Matrix<S>& a, const Matrix<S>& b) {
  DefectReport r;
  r.max_defect = (a - b).max_abs();
  r.exact_zero = a == b;
  r.checks = 1;
  return r;
}

inline void merge_defect(DefectReport& into, const DefectReport& r) {
  into.max_defect = std::max(into.max_defect, r.max_defect);
  into.exact_zero = into.exact_zero && r.exact_zero;
  into.checks += r.checks;
}

template <ComplexScalar S>
struct EvenDecomposition {
  int n = 0;
  std::size_t spinor_dim = 0;
  std::size_t multiplicity = 0;
  DefectReport intertwining;   // Phi L(v) = (v:) Phi
  DefectReport block;          // Phi L(v) Phi^-1 = Id (x) gamma(v)
  DefectReport spin_transport; // Phi sigma(X) Phi^-1 = Id (x) sigma_S(X)
  bool orders_agree = false;
};

template <ComplexScalar S>
std::vector<Matrix<S>> complex_left_mul_basis(int n) {
  std::vector<Matrix<S>> out;
  for (int i = 1; i <= n; ++i) out.push_back(matrix_of_left_mul(VectorElem<S>::basis(n, i)));
  return out;
}

template <ComplexScalar S>
EvenDecomposition<S> block_decompose_even(int n) {
  require_even(n, "block_decompose_even");
  EvenDecomposition<S> rep;
  rep.n = n;
  const auto phi = build_phi<S>(n);
  const auto phi_rev = build_phi<S>(n, WordOrder::Reversed);
  rep.orders_agree = is_exact_v<S> ? phi.matrix == phi_rev.matrix : (phi.matrix - phi_rev.matrix).max_abs() <= 1e-9;
  const int m = n / 2;
  rep.spinor_dim = std::size_t{1} << m;
  rep.multiplicity = (std::size_t{1} << n) / rep.spinor_dim;
  const auto id = Matrix<S>::identity(rep.spinor_dim);
  const auto ls = complex_left_mul_basis<S>(n);
  const auto gs = gamma_basis(phi.split);
  rep.intertwining.exact_zero = rep.block.exact_zero = rep.spin_transport.exact_zero = true;
  for (int i = 0; i < n; ++i) {
    const auto& l = ls[static_cast<std::size_t>(i)];
    const auto target = kron(id, gs[static_cast<std::size_t>(i)]);
    merge_defect(rep.intertwining, matrix_defect(phi.matrix * l, target * phi.matrix));
    merge_defect(rep.block, matrix_defect(phi.matrix * l * phi.inverse, target));
  }
  const S quarter = ratio<S>(-1, 4);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto sigma = commutator(ls[static_cast<std::size_t>(i)], ls[static_cast<std::size_t>(j)]) * quarter;
      const auto sigma_s = commutator(gs[static_cast<std::size_t>(i)], gs[static_cast<std::size_t>(j)]) * quarter;
      merge_defect(rep.spin_transport, matrix_defect(phi.matrix * sigma * phi.inverse, kron(id, sigma_s)));
    }
  return rep;
}

template <ComplexScalar S>
struct OddDecomposition {
  int n = 0;
  Matrix<S> volume;            // omega_C
  bool volume_squares_to_one = false;
  bool volume_central = false;
  std::size_t plus_dim = 0;
  std::size_t minus_dim = 0;
  std::size_t algebra_dim = 0;  // dimension of the algebra acting on one eigenspace
  std::size_t spinor_dim = 0;
  std::size_t multiplicity = 0;
};

inline std::size_t exact_sqrt(std::size_t x) {
  std::size_t r = 0;
  while ((r + 1) * (r + 1) <= x) ++r;
  if (r * r != x) throw std::logic_error("decompose_odd: algebra dimension is not a square");
  return r;
}

template <ComplexScalar S>
OddDecomposition<S> decompose_odd(int n) {
  if (n <= 0 || n % 2 == 0) throw std::invalid_argument("decompose_odd: dimension must be odd");
  check_dim(n);
  OddDecomposition<S> rep;
  rep.n = n;
  const std::size_t dim = std::size_t{1} << n;
  const auto ls = complex_left_mul_basis<S>(n);
  S phase(1);
  for (int k = 0; k < (n + 1) / 2; ++k) phase *= scalar_traits<S>::imag_unit();
  Matrix<S> w = Matrix<S>::identity(dim);
  for (const auto& l : ls) w = w * l;
  rep.volume = w * phase;
  const auto id = Matrix<S>::identity(dim);
  auto close = [](const Matrix<S>& a, const Matrix<S>& b) { return is_exact_v<S> ? a == b : (a - b).max_abs() <= 1e-9; };
  rep.volume_squares_to_one = close(rep.volume * rep.volume, id);
  rep.volume_central = true;
  for (const auto& l : ls) rep.volume_central = rep.volume_central && close(rep.volume * l, l * rep.volume);

  const S half = ratio<S>(1, 2);
  const auto plus = (id + rep.volume) * half;
  const auto minus = (id - rep.volume) * half;
  rep.plus_dim = rank(plus);
  rep.minus_dim = rank(minus);

  // span of L(e_I) P+ as vectors
  Matrix<S> words(dim, dim * dim);
  for (Blade b = 0; b < dim; ++b) {
    Matrix<S> word = plus;
    const auto idx = blade_indices(b);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) word = ls[static_cast<std::size_t>(*it - 1)] * word;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) words(b, r * dim + c) = word(r, c);
  }
  rep.algebra_dim = rank(words);
  rep.spinor_dim = exact_sqrt(rep.algebra_dim);
  rep.multiplicity = dim / rep.spinor_dim;
  return rep;
}

}  // namespace clifconf
