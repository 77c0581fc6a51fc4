#pragma once

// Twisted spinors: F = ker(eps : W (x) E -> E), the symbol theta : W (x) F -> F,
// and the generalization to symmetric powers F_j inside Sym^j W (x) E.
//
// W (x) E is indexed a * 2^n + alpha; W (x) W (x) E is (a * n + b) * 2^n + alpha.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "clifconf/linalg.hpp"
#include "clifconf/multivector.hpp"
#include "clifconf/represent.hpp"

namespace clifconf {

class ResourceLimit : public std::length_error {
 public:
  explicit ResourceLimit(const std::string& what) : std::length_error(what) {}
};

inline constexpr int kRaritaMaxDim = 6;
inline constexpr std::size_t kTwistedMaxAmbient = 4096;  // n * dim(W^j (x) E)

template <Scalar S>
struct TwistedSpace {
  int n = 0;
  int j = 1;
  std::size_t ambient_dim = 0;  // W^{(x) j} (x) E
  std::size_t sym_dim = 0;      // Sym^j W (x) E
  Matrix<S> basis;              // ambient x dim F
  Matrix<S> coords;             // left inverse of basis
  Matrix<S> proj;               // idempotent onto F, ambient x ambient
  RepAction<S> ambient_rep;     // combined action on W^{(x) j} (x) E
  RepAction<S> tau;             // restriction to F

  std::size_t dim() const { return basis.cols(); }
};

namespace detail {

inline void require_rarita_dim(int n, const char* where) {
  if (n < 2) throw std::invalid_argument(std::string(where) + ": need n >= 2");
  if (n > kRaritaMaxDim)
    throw ResourceLimit(std::string(where) + ": n = " + std::to_string(n) + " exceeds the limit " + std::to_string(kRaritaMaxDim));
}

template <Scalar S>
RepAction<S> power_rep_W(int n, int j) {
  RepAction<S> r = std_rep_W<S>(n);
  for (int k = 1; k < j; ++k) r = tensor_rep(r, std_rep_W<S>(n));
  return r;
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

}  // namespace detail

template <Scalar S>
Matrix<S> epsilon_matrix(int n) {
  return hstack(left_mul_basis<S>(n));
}

template <Scalar S>
Matrix<S> splitting_Pi(int n) {
  detail::require_rarita_dim(n, "splitting_Pi");
  const auto ls = left_mul_basis<S>(n);
  const std::size_t dim = static_cast<std::size_t>(n) << n;
  return Matrix<S>::identity(dim) + vstack(ls) * epsilon_matrix<S>(n) * ratio<S>(1, n);
}

template <Scalar S>
TwistedSpace<S> build_F(int n) {
  detail::require_rarita_dim(n, "build_F");
  TwistedSpace<S> f;
  f.n = n;
  f.j = 1;
  f.ambient_dim = f.sym_dim = static_cast<std::size_t>(n) << n;
  const auto k = kernel(epsilon_matrix<S>(n));
  f.basis = k.basis;
  f.coords = kernel_coordinates(k);
  f.proj = splitting_Pi<S>(n);
  f.ambient_rep = tensor_rep(std_rep_W<S>(n), spin_rep<S>(n));
  f.tau = restrict_rep(f.ambient_rep, f.basis, f.coords, "tau");
  return f;
}

// eps~(w (x) v (x) e) = v (x) w.e
template <Scalar S>
Matrix<S> eps_tilde(int n) {
  detail::require_rarita_dim(n, "eps_tilde");
  const std::size_t d = std::size_t{1} << n;
  const std::size_t nn = static_cast<std::size_t>(n);
  const auto ls = left_mul_basis<S>(n);
  Matrix<S> m(nn * d, nn * nn * d);
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t b = 0; b < nn; ++b) m.set_block(b * d, (a * nn + b) * d, ls[a]);
  return m;
}

// Moves the first W slot onto E by Clifford multiplication:
// w (x) t (x) e -> t (x) w.e on W (x) W^{(x) j} (x) E.
template <Scalar S>
Matrix<S> clifford_onto_last(int n, std::size_t middle) {
  const std::size_t d = std::size_t{1} << n;
  const std::size_t nn = static_cast<std::size_t>(n);
  const auto ls = left_mul_basis<S>(n);
  Matrix<S> m(middle * d, nn * middle * d);
  for (std::size_t a = 0; a < nn; ++a)
    for (std::size_t t = 0; t < middle; ++t) m.set_block(t * d, (a * middle + t) * d, ls[a]);
  return m;
}

// Elements of F as vectors of W (x) E; throws when eps(f) != 0.
template <Scalar S>
std::vector<S> tau_action(const BivectorElem<S>& x, const std::vector<S>& f) {
  const int n = x.dim();
  detail::require_rarita_dim(n, "tau_action");
  if (f.size() != (static_cast<std::size_t>(n) << n)) throw std::invalid_argument("tau_action: element has wrong size");
  for (const auto& c : epsilon_matrix<S>(n) * f)
    if (is_exact_v<S> ? !is_zero(c) : magnitude(c) > 1e-9) throw std::domain_error("tau_action: element is not in F");
  return tensor_rep(std_rep_W<S>(n), spin_rep<S>(n))(x) * f;
}

template <Scalar S>
SymbolMap<S> theta_symbol(const TwistedSpace<S>& f) {
  const std::size_t nn = static_cast<std::size_t>(f.n);
  Matrix<S> m = f.coords * (f.proj * (clifford_onto_last<S>(f.n, f.ambient_dim >> f.n) * kron(Matrix<S>::identity(nn), f.basis)));
  const std::string label = f.j == 1 ? "F" : "F" + std::to_string(f.j);
  return SymbolMap<S>{f.j == 1 ? "rarita" : "rarita-" + std::to_string(f.j), f.n, std::move(m), f.tau, f.tau, label, label};
}

template <Scalar S>
struct RaritaReport {
  int n = 0;
  std::size_t dim_F = 0;
  bool theta_vanishes = false;  // happens for n = 2, where any w satisfies M = w theta
  WeightReport<S> weight;
  DefectReport exactness;     // eps o incl = 0
  DefectReport splitting;     // Pi o incl = Id
  DefectReport part_one;      // Pi eps~ (one) (Id (x) incl) = 0
  DefectReport part_two;      // eps~ (two) + (n-1)/2 eps~ = 0
  DefectReport scalar_identity;  // M + (n-1)/2 theta = 0
};

namespace detail {

template <Scalar S>
DefectReport zero_defect(const Matrix<S>& m) {
  DefectReport r;
  r.max_defect = m.max_abs();
  r.exact_zero = m.is_zero();
  r.checks = 1;
  return r;
}

template <Scalar S>
RepAction<S> generators_of(int n, std::size_t dim, std::vector<Matrix<S>> gens, std::string name) {
  return RepAction<S>{n, dim, std::move(gens), std::move(name)};
}

}  // namespace detail

template <Scalar S>
RaritaReport<S> verify_rarita(int n) {
  const auto f = build_F<S>(n);
  RaritaReport<S> rep;
  rep.n = n;
  rep.dim_F = f.dim();
  rep.exactness = detail::zero_defect(epsilon_matrix<S>(n) * f.basis);
  rep.splitting = detail::zero_defect(f.proj * f.basis - f.basis);

  const auto theta = theta_symbol(f);
  rep.theta_vanishes = theta.matrix.is_zero();
  if (rep.theta_vanishes) {
    rep.weight.symbol = theta.name;
    rep.weight.n = n;
    rep.weight.e_label = rep.weight.f_label = "F";
  } else {
    rep.weight = conformal_weight(theta);
  }
  const S shift = ratio<S>(n - 1, 2);
  const Matrix<S> m = theta.matrix * connection_change_matrix(n, f.tau);
  rep.scalar_identity = detail::zero_defect(m + theta.matrix * shift);

  // the combined action splits as std (x) Id + Id (x) sigma on W (x) E
  const std::size_t d = std::size_t{1} << n;
  const std::size_t nn = static_cast<std::size_t>(n);
  const auto stdw = std_rep_W<S>(n);
  const auto sigma = spin_rep<S>(n);
  std::vector<Matrix<S>> g1, g2;
  for (std::size_t p = 0; p < stdw.generators.size(); ++p) {
    g1.push_back(kron(stdw.generators[p], Matrix<S>::identity(d)));
    g2.push_back(kron(Matrix<S>::identity(nn), sigma.generators[p]));
  }
  const auto one = connection_change_matrix(n, detail::generators_of<S>(n, nn * d, g1, "std(x)1"));
  const auto two = connection_change_matrix(n, detail::generators_of<S>(n, nn * d, g2, "1(x)sigma"));
  const auto et = eps_tilde<S>(n);
  rep.part_one = detail::zero_defect(f.proj * (et * (one * kron(Matrix<S>::identity(nn), f.basis))));
  rep.part_two = detail::zero_defect(et * two + et * shift);
  return rep;
}

// Monomial basis of Sym^j W (non-decreasing index tuples) embedded in W^{(x) j}
// by the averaging symmetrizer.
template <Scalar S>
Matrix<S> symmetrizer_embedding(int n, int j) {
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<std::vector<int>> tuples;
  std::vector<int> t(static_cast<std::size_t>(j), 0);
  while (true) {
    tuples.push_back(t);
    int k = j - 1;
    while (k >= 0 && t[static_cast<std::size_t>(k)] == n - 1) --k;
    if (k < 0) break;
    const int v = t[static_cast<std::size_t>(k)] + 1;
    for (int q = k; q < j; ++q) t[static_cast<std::size_t>(q)] = v;
  }
  long fact = 1;
  for (int q = 2; q <= j; ++q) fact *= q;
  const S w = ratio<S>(1, fact);
  Matrix<S> m(detail::ipow(nn, j), tuples.size());
  for (std::size_t c = 0; c < tuples.size(); ++c) {
    std::vector<int> perm(static_cast<std::size_t>(j));
    for (int q = 0; q < j; ++q) perm[static_cast<std::size_t>(q)] = q;
    do {
      std::size_t idx = 0;
      for (int q = 0; q < j; ++q) idx = idx * nn + static_cast<std::size_t>(tuples[c][static_cast<std::size_t>(perm[static_cast<std::size_t>(q)])]);
      m(idx, c) += w;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return m;
}

template <Scalar S>
struct FjReport {
  TwistedSpace<S> space;
  SymbolMap<S> theta;
  bool theta_vanishes = false;
  WeightReport<S> weight;
  DefectReport exactness;
};

// F_j = kernel of the last-slot contraction Sym^j W (x) E -> W^{(x) j-1} (x) E.
// The projection onto F_j is orthogonal; all actions here are by skew matrices,
// so it commutes with them.
template <Scalar S>
TwistedSpace<S> build_Fj_space(int n, int j) {
  detail::require_rarita_dim(n, "build_Fj");
  if (j < 1) throw std::invalid_argument("build_Fj: need j >= 1");
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t d = std::size_t{1} << n;
  const std::size_t ambient = detail::ipow(nn, j) * d;
  if (ambient * nn > kTwistedMaxAmbient)
    throw ResourceLimit("build_Fj: W (x) W^" + std::to_string(j) + " (x) E has dimension " + std::to_string(ambient * nn) +
                        ", limit " + std::to_string(kTwistedMaxAmbient));
  TwistedSpace<S> f;
  f.n = n;
  f.j = j;
  f.ambient_dim = ambient;
  const Matrix<S> sym = kron(symmetrizer_embedding<S>(n, j), Matrix<S>::identity(d));
  f.sym_dim = sym.cols();
  const Matrix<S> contraction = kron(Matrix<S>::identity(detail::ipow(nn, j - 1)), epsilon_matrix<S>(n));
  const auto k = kernel(contraction * sym);
  f.basis = sym * k.basis;
  const Matrix<S> bt = f.basis.transpose();
  f.coords = inverse(bt * f.basis) * bt;
  f.proj = f.basis * f.coords;
  f.ambient_rep = tensor_rep(detail::power_rep_W<S>(n, j), spin_rep<S>(n));
  f.tau = restrict_rep(f.ambient_rep, f.basis, f.coords, "tau" + std::to_string(j));
  return f;
}

template <Scalar S>
FjReport<S> build_Fj(int n, int j) {
  FjReport<S> r{build_Fj_space<S>(n, j), {}, false, {}, {}};
  const std::size_t nn = static_cast<std::size_t>(n);
  const Matrix<S> contraction = kron(Matrix<S>::identity(detail::ipow(nn, j - 1)), epsilon_matrix<S>(n));
  r.exactness = detail::zero_defect(contraction * r.space.basis);
  r.theta = theta_symbol(r.space);
  r.theta_vanishes = r.theta.matrix.is_zero();
  if (r.theta_vanishes) {
    r.weight.symbol = r.theta.name;
    r.weight.n = n;
    r.weight.e_label = r.weight.f_label = r.theta.e_label;
  } else {
    r.weight = conformal_weight(r.theta);
  }
  return r;
}

}  // namespace clifconf
