#pragma once

// so(n) = Lambda^2 W actions and the first-order conformal weight extractor.
//
// Bivectors are stored on blades e_i^e_j (i < j). A blade bivector acts on W by
// w -> e_i <e_j, w> - e_j <e_i, w>, and every RepAction stores one matrix per
// blade, so rho(X) = sum_{i<j} X_ij rho(e_i^e_j).
//
// The textbook formulas for the spin action and the bracket are written on
// decomposables normalized as half a blade; translated to blades:
//   sigma(e_i^e_j) = 2c (L_i L_j - L_j L_i),   c = -1/8
//   iota(w)_a      = -(e_a ^ w)

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clifconf/multivector.hpp"

namespace clifconf {

inline int bivector_count(int n) { return n * (n - 1) / 2; }

// Index of e_i^e_j (1 <= i < j <= n) in lexicographic pair order.
inline std::size_t pair_index(int n, int i, int j) {
  if (!(1 <= i && i < j && j <= n)) throw std::out_of_range("pair_index requires 1 <= i < j <= n");
  // pairs with first index < i, then offset within row i
  const int before = (i - 1) * n - (i - 1) * i / 2;
  return static_cast<std::size_t>(before + (j - i - 1));
}

inline std::pair<int, int> pair_of(int n, std::size_t idx) {
  std::size_t k = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j, ++k)
      if (k == idx) return {i, j};
  throw std::out_of_range("pair index out of range");
}

template <Scalar S>
class BivectorElem {
 public:
  BivectorElem() = default;
  explicit BivectorElem(int n) : n_(n), x_(static_cast<std::size_t>(bivector_count(n)), S(0)) { check_dim(n); }

  // e_i ^ e_j for any i, j (antisymmetric; zero when i == j)
  static BivectorElem basis(int n, int i, int j) {
    BivectorElem b(n);
    if (i == j) return b;
    if (i < j) b.x_[pair_index(n, i, j)] = S(1);
    else b.x_[pair_index(n, j, i)] = S(-1);
    return b;
  }

  static BivectorElem from_index(int n, std::size_t idx) {
    BivectorElem b(n);
    b.x_.at(idx) = S(1);
    return b;
  }

  // blade wedge u ^ v
  static BivectorElem wedge_of(const VectorElem<S>& u, const VectorElem<S>& v) {
    check_same_dim(u.dim(), v.dim(), "bivector wedge");
    const int n = u.dim();
    BivectorElem b(n);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        b.x_[pair_index(n, i, j)] = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1];
    return b;
  }

  static BivectorElem from_multivector(const Multivector<S>& m) {
    if (!m.is_homogeneous(2)) throw std::invalid_argument("multivector is not a bivector");
    BivectorElem b(m.dim());
    for (int i = 1; i <= m.dim(); ++i)
      for (int j = i + 1; j <= m.dim(); ++j) b.x_[pair_index(m.dim(), i, j)] = m[blade_of({i, j})];
    return b;
  }

  Multivector<S> to_multivector() const {
    Multivector<S> m(n_);
    for (int i = 1; i <= n_; ++i)
      for (int j = i + 1; j <= n_; ++j) m[blade_of({i, j})] = x_[pair_index(n_, i, j)];
    return m;
  }

  int dim() const { return n_; }
  std::size_t size() const { return x_.size(); }
  const S& operator[](std::size_t p) const { return x_[p]; }
  S& operator[](std::size_t p) { return x_[p]; }

  // coefficient of e_i^e_j with antisymmetric extension
  S component(int i, int j) const {
    if (i == j) return S(0);
    return i < j ? x_[pair_index(n_, i, j)] : S(-x_[pair_index(n_, j, i)]);
  }

  bool is_zero() const {
    for (const auto& c : x_)
      if (!clifconf::is_zero(c)) return false;
    return true;
  }

  BivectorElem& operator+=(const BivectorElem& o) {
    check_same_dim(n_, o.n_, "bivector +");
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += o.x_[i];
    return *this;
  }
  BivectorElem& operator-=(const BivectorElem& o) {
    check_same_dim(n_, o.n_, "bivector -");
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] -= o.x_[i];
    return *this;
  }
  BivectorElem& operator*=(const S& s) {
    for (auto& c : x_) c *= s;
    return *this;
  }
  friend BivectorElem operator+(BivectorElem a, const BivectorElem& b) { return a += b; }
  friend BivectorElem operator-(BivectorElem a, const BivectorElem& b) { return a -= b; }
  friend BivectorElem operator-(BivectorElem a) { return a *= S(-1); }
  friend BivectorElem operator*(BivectorElem a, const S& s) { return a *= s; }
  friend BivectorElem operator*(const S& s, BivectorElem a) { return a *= s; }
  friend bool operator==(const BivectorElem& a, const BivectorElem& b) { return a.n_ == b.n_ && a.x_ == b.x_; }

 private:
  int n_ = 0;
  std::vector<S> x_;
};

// [e_i^e_j, e_k^e_l] = d_jk e_i^e_l - d_jl e_i^e_k - d_ik e_j^e_l + d_il e_j^e_k
template <Scalar S>
BivectorElem<S> so_bracket(const BivectorElem<S>& x, const BivectorElem<S>& y) {
  check_same_dim(x.dim(), y.dim(), "so_bracket");
  const int n = x.dim();
  BivectorElem<S> out(n);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (is_zero(x[p])) continue;
    const auto [i, j] = pair_of(n, p);
    for (std::size_t q = 0; q < y.size(); ++q) {
      if (is_zero(y[q])) continue;
      const auto [k, l] = pair_of(n, q);
      const S c = x[p] * y[q];
      if (j == k) out += BivectorElem<S>::basis(n, i, l) * c;
      if (j == l) out -= BivectorElem<S>::basis(n, i, k) * c;
      if (i == k) out -= BivectorElem<S>::basis(n, j, l) * c;
      if (i == l) out += BivectorElem<S>::basis(n, j, k) * c;
    }
  }
  return out;
}

template <Scalar S>
VectorElem<S> std_action_W(const BivectorElem<S>& x, const VectorElem<S>& w) {
  check_same_dim(x.dim(), w.dim(), "std_action_W");
  const int n = w.dim();
  auto out = VectorElem<S>::zero(n);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (is_zero(x[p])) continue;
    const auto [i, j] = pair_of(n, p);
    out[i - 1] += x[p] * w[j - 1];
    out[j - 1] -= x[p] * w[i - 1];
  }
  return out;
}

template <Scalar S>
Matrix<S> std_action_W_matrix(const BivectorElem<S>& x) {
  const int n = x.dim();
  Matrix<S> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int c = 1; c <= n; ++c) {
    const auto img = std_action_W(x, VectorElem<S>::basis(n, c));
    for (int r = 0; r < n; ++r) m(r, c - 1) = img[r];
  }
  return m;
}

// Derivation extension of the W action to forms: each factor is rotated in turn.
template <Scalar S>
Multivector<S> std_action_forms(const BivectorElem<S>& x, const Multivector<S>& a) {
  check_same_dim(x.dim(), a.dim(), "std_action_forms");
  const int n = a.dim();
  Multivector<S> out(n);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (is_zero(x[p])) continue;
    const auto [i, j] = pair_of(n, p);
    // e_j -> e_i and e_i -> -e_j
    const std::pair<int, int> moves[2] = {{j, i}, {i, j}};
    for (Blade b = 0; b < a.size(); ++b) {
      if (is_zero(a[b])) continue;
      for (int m = 0; m < 2; ++m) {
        const auto [from, to] = moves[m];
        const Blade fbit = Blade{1} << (from - 1);
        const Blade tbit = Blade{1} << (to - 1);
        if ((b & fbit) == 0 || (b & tbit) != 0) continue;
        const Blade rest = b ^ fbit;
        const int pos = std::popcount(b & (fbit - 1));
        int sign = (pos & 1) ? -1 : 1;
        sign *= reorder_sign(tbit, rest);
        if (m == 1) sign = -sign;
        S term = x[p] * a[b];
        if (sign < 0) out[rest | tbit] -= term;
        else out[rest | tbit] += term;
      }
    }
  }
  return out;
}

inline constexpr long kSpinConstNum = -1;
inline constexpr long kSpinConstDen = 8;

// sigma(e_i^e_j) e = 2c (e_i.e_j.e - e_j.e_i.e); the representation constant is c = -1/8.
template <Scalar S>
Multivector<S> spin_action(const BivectorElem<S>& x, const Multivector<S>& e, const S& c = ratio<S>(kSpinConstNum, kSpinConstDen)) {
  check_same_dim(x.dim(), e.dim(), "spin_action");
  const int n = e.dim();
  const Metric<S> g = Metric<S>::euclidean(n);
  Multivector<S> out(n);
  const S two_c = c * S(2);
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (is_zero(x[p])) continue;
    const auto [i, j] = pair_of(n, p);
    const auto ei = VectorElem<S>::basis(n, i);
    const auto ej = VectorElem<S>::basis(n, j);
    Multivector<S> t = clifford_mul_vec(ei, clifford_mul_vec(ej, e, g), g) - clifford_mul_vec(ej, clifford_mul_vec(ei, e, g), g);
    out += t * (two_c * x[p]);
  }
  return out;
}

// An so(n) action: one space_dim x space_dim matrix per blade bivector.
template <Scalar S>
struct RepAction {
  int n = 0;
  std::size_t space_dim = 0;
  std::vector<Matrix<S>> generators;
  std::string name;

  Matrix<S> operator()(const BivectorElem<S>& x) const {
    check_same_dim(n, x.dim(), "RepAction");
    Matrix<S> m(space_dim, space_dim);
    for (std::size_t p = 0; p < generators.size(); ++p)
      if (!is_zero(x[p])) m += generators[p] * x[p];
    return m;
  }

  // rho(e_a ^ e_b) for any a, b (1-based)
  Matrix<S> basis_action(int a, int b) const {
    if (a == b) return Matrix<S>(space_dim, space_dim);
    if (a < b) return generators[pair_index(n, a, b)];
    return -generators[pair_index(n, b, a)];
  }
};

template <Scalar S>
RepAction<S> rep_from_map(int n, std::size_t dim, std::string name, auto&& gen_for_pair) {
  RepAction<S> r{n, dim, {}, std::move(name)};
  for (std::size_t p = 0; p < static_cast<std::size_t>(bivector_count(n)); ++p)
    r.generators.push_back(gen_for_pair(BivectorElem<S>::from_index(n, p)));
  return r;
}

template <Scalar S>
RepAction<S> std_rep_W(int n) {
  check_dim(n);
  return rep_from_map<S>(n, static_cast<std::size_t>(n), "std-W", [](const BivectorElem<S>& x) { return std_action_W_matrix(x); });
}

template <Scalar S>
RepAction<S> std_rep_forms(int n) {
  check_dim(n);
  return rep_from_map<S>(n, std::size_t{1} << n, "std-forms", [n](const BivectorElem<S>& x) {
    return matrix_of_linear_map<S>(n, [&](const Multivector<S>& e) { return std_action_forms(x, e); });
  });
}

// Built from left-multiplication matrices: sigma_ij = 2c (L_i L_j - L_j L_i).
template <Scalar S>
RepAction<S> spin_rep(int n, const S& c = ratio<S>(kSpinConstNum, kSpinConstDen)) {
  check_dim(n);
  const auto L = left_mul_basis<S>(n);
  const S two_c = c * S(2);
  return rep_from_map<S>(n, std::size_t{1} << n, "spin", [&](const BivectorElem<S>& x) {
    const std::size_t p = [&] {
      for (std::size_t q = 0; q < x.size(); ++q)
        if (!is_zero(x[q])) return q;
      return std::size_t{0};
    }();
    const auto [i, j] = pair_of(n, p);
    return commutator(L[i - 1], L[j - 1]) * two_c;
  });
}

// X acting on A (x) B as X (x) Id + Id (x) X.
template <Scalar S>
RepAction<S> tensor_rep(const RepAction<S>& a, const RepAction<S>& b) {
  check_same_dim(a.n, b.n, "tensor_rep");
  RepAction<S> r{a.n, a.space_dim * b.space_dim, {}, a.name + "(x)" + b.name};
  const auto ia = Matrix<S>::identity(a.space_dim);
  const auto ib = Matrix<S>::identity(b.space_dim);
  for (std::size_t p = 0; p < a.generators.size(); ++p)
    r.generators.push_back(kron(a.generators[p], ib) + kron(ia, b.generators[p]));
  return r;
}

// Restriction of an ambient action to a subspace: incl is ambient x k, coords is
// a left inverse (k x ambient). Throws if the subspace is not invariant.
template <Scalar S>
RepAction<S> restrict_rep(const RepAction<S>& ambient, const Matrix<S>& incl, const Matrix<S>& coords, std::string name) {
  RepAction<S> r{ambient.n, incl.cols(), {}, std::move(name)};
  for (const auto& g : ambient.generators) {
    const Matrix<S> img = g * incl;
    const Matrix<S> restricted = coords * img;
    const Matrix<S> back = incl * restricted - img;
    if constexpr (is_exact_v<S>) {
      if (!back.is_zero()) throw std::domain_error("restrict_rep: subspace is not invariant");
    } else {
      if (back.max_abs() > 1e-8) throw std::domain_error("restrict_rep: subspace is not invariant");
    }
    r.generators.push_back(restricted);
  }
  return r;
}

struct DefectReport {
  double max_defect = 0.0;
  bool exact_zero = true;  // every defect matrix vanished identically
  std::size_t checks = 0;

  bool passes(double tol) const { return exact_zero || max_defect <= tol; }
};

// max over basis pairs of |rho([X, Y]) - [rho(X), rho(Y)]|
template <Scalar S>
DefectReport check_representation(const RepAction<S>& rep) {
  DefectReport rpt;
  const std::size_t m = rep.generators.size();
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p + 1; q < m; ++q) {
      const auto br = so_bracket(BivectorElem<S>::from_index(rep.n, p), BivectorElem<S>::from_index(rep.n, q));
      const Matrix<S> d = rep(br) - commutator(rep.generators[p], rep.generators[q]);
      rpt.max_defect = std::max(rpt.max_defect, d.max_abs());
      rpt.exact_zero = rpt.exact_zero && d.is_zero();
      ++rpt.checks;
    }
  return rpt;
}

// pi : W (x) E -> F together with the actions on E and F. Index of e_a (x) f_alpha
// in W (x) E is a * dimE + alpha.
template <Scalar S>
struct SymbolMap {
  std::string name;
  int n = 0;
  Matrix<S> matrix;  // dimF x (n * dimE)
  RepAction<S> rep_e;
  RepAction<S> rep_f;
  std::string e_label = "E";
  std::string f_label = "F";

  std::size_t dim_e() const { return rep_e.space_dim; }
  std::size_t dim_f() const { return rep_f.space_dim; }
};

template <Scalar S>
void validate_symbol(const SymbolMap<S>& pi) {
  if (pi.rep_e.n != pi.n || pi.rep_f.n != pi.n) throw std::invalid_argument("symbol: representation dimension mismatch");
  if (pi.matrix.rows() != pi.dim_f() || pi.matrix.cols() != static_cast<std::size_t>(pi.n) * pi.dim_e())
    throw std::invalid_argument("symbol: matrix shape does not match W (x) E -> F");
}

template <Scalar S>
DefectReport check_equivariance(const SymbolMap<S>& pi) {
  validate_symbol(pi);
  const auto ambient = tensor_rep(std_rep_W<S>(pi.n), pi.rep_e);
  DefectReport rpt;
  for (std::size_t p = 0; p < ambient.generators.size(); ++p) {
    const Matrix<S> d = pi.matrix * ambient.generators[p] - pi.rep_f.generators[p] * pi.matrix;
    rpt.max_defect = std::max(rpt.max_defect, d.max_abs());
    rpt.exact_zero = rpt.exact_zero && d.is_zero();
    ++rpt.checks;
  }
  return rpt;
}

// iota(w)_a = -(e_a ^ w), a = 1..n
template <Scalar S>
std::vector<BivectorElem<S>> iota(const VectorElem<S>& w) {
  const int n = w.dim();
  std::vector<BivectorElem<S>> out;
  for (int a = 1; a <= n; ++a) out.push_back(-BivectorElem<S>::wedge_of(VectorElem<S>::basis(n, a), w));
  return out;
}

// (Id (x) rho) o (iota (x) Id) on W (x) E: block (a, b) is -rho(e_a ^ e_b).
template <Scalar S>
Matrix<S> connection_change_matrix(int n, const RepAction<S>& rep) {
  const std::size_t d = rep.space_dim;
  Matrix<S> m(static_cast<std::size_t>(n) * d, static_cast<std::size_t>(n) * d);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (a != b) m.set_block(static_cast<std::size_t>(a - 1) * d, static_cast<std::size_t>(b - 1) * d, -rep.basis_action(a, b));
  return m;
}

// Gamma(Upsilon) phi: slot a is rho(iota(Upsilon)_a) phi.
template <Scalar S>
std::vector<Multivector<S>> gamma_term(const VectorElem<S>& upsilon, const Multivector<S>& phi, const RepAction<S>& rep) {
  check_same_dim(upsilon.dim(), phi.dim(), "gamma_term");
  if (rep.space_dim != phi.size()) throw std::invalid_argument("gamma_term: representation does not act on forms");
  std::vector<Multivector<S>> out;
  for (const auto& x : iota(upsilon)) out.push_back(apply(rep(x), phi));
  return out;
}

// eps(sum_a e_a (x) t_a) = sum_a e_a . t_a
template <Scalar S>
Multivector<S> clifford_contract(const std::vector<Multivector<S>>& slots) {
  if (slots.empty()) throw std::invalid_argument("clifford_contract: empty tensor");
  const int n = slots.front().dim();
  if (static_cast<int>(slots.size()) != n) throw std::invalid_argument("clifford_contract: need one slot per basis vector");
  Multivector<S> out(n);
  for (int a = 1; a <= n; ++a) out += clifford_mul_vec(VectorElem<S>::basis(n, a), slots[static_cast<std::size_t>(a - 1)]);
  return out;
}

template <Scalar S>
SymbolMap<S> epsilon_symbol(int n, const RepAction<S>& rep_e, std::string name = "clifford") {
  check_dim(n);
  if (rep_e.space_dim != (std::size_t{1} << n)) throw std::invalid_argument("epsilon_symbol: action must be on forms");
  return SymbolMap<S>{std::move(name), n, hstack(left_mul_basis<S>(n)), rep_e, rep_e, "E", "E"};
}

template <Scalar S>
SymbolMap<S> epsilon_symbol(int n) {
  return epsilon_symbol<S>(n, spin_rep<S>(n));
}

namespace detail {
enum class WWPart { skew, sym0, trace };

template <Scalar S>
SymbolMap<S> ww_projection(int n, WWPart part) {
  if (n < 2) throw std::invalid_argument("W (x) W projections need n >= 2");
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  Matrix<S> p(nn, nn);
  const S half = ratio<S>(1, 2);
  const S inv_n = ratio<S>(1, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const long same = (a == c && b == d) ? 1 : 0;
          const long swap = (a == d && b == c) ? 1 : 0;
          const long tr = (a == b && c == d) ? 1 : 0;
          S v(0);
          switch (part) {
            case WWPart::skew: v = half * S(same - swap); break;
            case WWPart::sym0: v = half * S(same + swap) - inv_n * S(tr); break;
            case WWPart::trace: v = inv_n * S(tr); break;
          }
          p(static_cast<std::size_t>(a * n + b), static_cast<std::size_t>(c * n + d)) = v;
        }
  const auto w = std_rep_W<S>(n);
  static constexpr const char* names[] = {"skew", "sym0", "trace"};
  static constexpr const char* targets[] = {"L2W", "S2_0W", "R"};
  return SymbolMap<S>{names[static_cast<int>(part)], n, p, w, tensor_rep(w, w), "W", targets[static_cast<int>(part)]};
}
}  // namespace detail

// The three pieces of W (x) W = Lambda^2 W + S^2_0 W + R, each realized as a
// projection W (x) W -> W (x) W (target carries the tensor action).
template <Scalar S>
SymbolMap<S> symbol_skew(int n) {
  return detail::ww_projection<S>(n, detail::WWPart::skew);
}
template <Scalar S>
SymbolMap<S> symbol_sym0(int n) {
  return detail::ww_projection<S>(n, detail::WWPart::sym0);
}
template <Scalar S>
SymbolMap<S> symbol_trace(int n) {
  return detail::ww_projection<S>(n, detail::WWPart::trace);
}

class NotModuleMap : public std::domain_error {
 public:
  explicit NotModuleMap(const std::string& what) : std::domain_error(what) {}
};

template <Scalar S>
struct WeightReport {
  std::string symbol;
  int n = 0;
  std::optional<S> weight;
  S best_fit{};          // <M, pi> / <pi, pi>, reported even when M is not a multiple of pi
  S residual{};          // squared Frobenius norm of M - best_fit * pi
  double residual_value = 0.0;
  std::string e_label = "E";
  std::string f_label = "F";

  // "E[w] -> F[w-1]" with the weight filled in when it exists
  std::string operator_label() const {
    if (!weight) return e_label + "[w] -> " + f_label + "[w-1]";
    return e_label + "[" + to_string(*weight) + "] -> " + f_label + "[" + to_string(S(*weight - S(1))) + "]";
  }
};

// Finds w with pi o (Id (x) rho) o (iota (x) Id) = w pi, if it exists.
template <Scalar S>
WeightReport<S> conformal_weight(const SymbolMap<S>& pi, double tol = 1e-9) {
  validate_symbol(pi);
  const DefectReport eq = check_equivariance(pi);
  if (!(is_exact_v<S> ? eq.exact_zero : eq.max_defect <= tol))
    throw NotModuleMap("not a module map: equivariance defect " + std::to_string(eq.max_defect));
  if (pi.matrix.is_zero()) throw std::invalid_argument("conformal_weight: symbol is zero");

  const Matrix<S> m = pi.matrix * connection_change_matrix(pi.n, pi.rep_e);
  WeightReport<S> rpt;
  rpt.symbol = pi.name;
  rpt.n = pi.n;
  rpt.e_label = pi.e_label;
  rpt.f_label = pi.f_label;
  rpt.best_fit = frobenius_pair(m, pi.matrix) / frobenius_pair(pi.matrix, pi.matrix);
  const Matrix<S> r = m - pi.matrix * rpt.best_fit;
  rpt.residual = frobenius_pair(r, r);
  rpt.residual_value = scalar_traits<S>::real_part(rpt.residual);
  const bool fits = is_exact_v<S> ? r.is_zero() : r.max_abs() <= tol * std::max(1.0, pi.matrix.max_abs());
  if (fits) rpt.weight = rpt.best_fit;
  return rpt;
}

}  // namespace clifconf
