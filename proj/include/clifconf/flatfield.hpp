#pragma once

// Finite differences on flat R^n: the Dirac operator sum_i e_i.d_i, the
// algebraic connection-change term of a conformal rescaling, and monogenic
// samples (Cauchy kernel, Kelvin transform) for convergence checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clifconf/multivector.hpp"
#include "clifconf/represent.hpp"

namespace clifconf {

using Point = std::vector<double>;
using FieldFn = std::function<Multivector<double>(const Point&)>;

struct GridSpec {
  int n = 0;
  Point lo, hi;
  double h = 0.0;

  static GridSpec cube(int n, double lo, double hi, double h) {
    GridSpec g{n, Point(static_cast<std::size_t>(n), lo), Point(static_cast<std::size_t>(n), hi), h};
    g.validate();
    return g;
  }

  void validate() const {
    if (n < 2 || n > 4) throw std::invalid_argument("GridSpec: n must be in 2..4");
    if (!(h > 0.0)) throw std::invalid_argument("GridSpec: spacing must be positive");
    if (lo.size() != static_cast<std::size_t>(n) || hi.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("GridSpec: extents do not match n");
    for (int a = 0; a < n; ++a)
      if (points(a) < 5) throw std::invalid_argument("GridSpec: need at least 5 points per axis");
  }

  std::size_t points(int axis) const {
    const double span = hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)];
    if (span < 0) return 0;
    return static_cast<std::size_t>(std::floor(span / h + 1e-9)) + 1;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < n; ++a) s *= points(a);
    return s;
  }

  // axis 0 varies slowest
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = n - 1; a > axis; --a) s *= points(a);
    return s;
  }

  std::size_t coord(std::size_t idx, int axis) const { return (idx / stride(axis)) % points(axis); }

  Point point(std::size_t idx) const {
    Point x(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)] + h * static_cast<double>(coord(idx, a));
    return x;
  }
};

struct GridField {
  GridSpec grid;
  Rational weight{0};
  std::vector<Multivector<double>> values;
  std::vector<char> valid;

  std::size_t size() const { return values.size(); }
};

// Samples f; points where f throws std::domain_error are marked invalid.
inline GridField sample(const GridSpec& grid, const FieldFn& f, const Rational& weight = Rational(0)) {
  grid.validate();
  GridField out{grid, weight, {}, {}};
  out.values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      auto v = f(grid.point(i));
      check_same_dim(grid.n, v.dim(), "sample");
      out.values.push_back(std::move(v));
      out.valid.push_back(1);
    } catch (const std::domain_error&) {
      out.values.emplace_back(grid.n);
      out.valid.push_back(0);
    }
  }
  return out;
}

// Interior points whose 2n neighbours are valid.
inline std::vector<char> interior_mask(const GridField& f) {
  const auto& g = f.grid;
  std::vector<char> m(f.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.valid[i]) continue;
    bool ok = true;
    for (int a = 0; a < g.n && ok; ++a) {
      const std::size_t c = g.coord(i, a), s = g.stride(a);
      if (c == 0 || c + 1 >= g.points(a) || !f.valid[i - s] || !f.valid[i + s]) ok = false;
    }
    m[i] = ok ? 1 : 0;
  }
  return m;
}

// One field per axis, second-order central differences on interior points.
inline std::vector<GridField> fd_gradient(const GridField& f) {
  const auto& g = f.grid;
  const auto mask = interior_mask(f);
  if (std::none_of(mask.begin(), mask.end(), [](char c) { return c != 0; })) throw std::invalid_argument("fd_gradient: no interior points");
  std::vector<GridField> out;
  const double inv = 1.0 / (2.0 * g.h);
  for (int a = 0; a < g.n; ++a) {
    GridField d{g, f.weight, std::vector<Multivector<double>>(f.size(), Multivector<double>(g.n)), mask};
    const std::size_t s = g.stride(a);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (mask[i]) d.values[i] = (f.values[i + s] - f.values[i - s]) * inv;
    out.push_back(std::move(d));
  }
  return out;
}

inline GridField dirac_flat(const GridField& f) {
  const auto grad = fd_gradient(f);
  const auto ls = left_mul_basis<double>(f.grid.n);
  GridField out{f.grid, f.weight, std::vector<Multivector<double>>(f.size(), Multivector<double>(f.grid.n)), grad.front().valid};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!out.valid[i]) continue;
    for (int a = 0; a < f.grid.n; ++a) out.values[i] += apply(ls[static_cast<std::size_t>(a)], grad[static_cast<std::size_t>(a)].values[i]);
  }
  return out;
}

// Max coefficient-norm over valid points; with stride k only points on the
// k-times coarser lattice through lo are counted.
inline double max_norm(const GridField& f, std::size_t stride = 1) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.valid[i]) continue;
    bool on = true;
    for (int a = 0; a < f.grid.n && on; ++a) on = f.grid.coord(i, a) % stride == 0;
    if (on) m = std::max(m, f.values[i].norm());
  }
  return m;
}

struct ConformalFactor {
  std::string name;
  std::function<double(const Point&)> omega;
  std::function<VectorElem<double>(const Point&)> upsilon;  // grad(Omega) / Omega

  static ConformalFactor exponential(int n, double a = 0.3) {
    return {"exp", [a](const Point& x) { return std::exp(a * x[0]); },
            [n, a](const Point&) { return VectorElem<double>::basis(n, 1) * a; }};
  }

  // (1 + |x|^2)^-1, the round sphere
  static ConformalFactor sphere(int n) {
    auto r2 = [](const Point& x) {
      double s = 0;
      for (double c : x) s += c * c;
      return s;
    };
    return {"sphere", [r2](const Point& x) { return 1.0 / (1.0 + r2(x)); },
            [n, r2](const Point& x) {
              std::vector<double> u(static_cast<std::size_t>(n));
              const double k = -2.0 / (1.0 + r2(x));
              for (std::size_t i = 0; i < u.size(); ++i) u[i] = k * x[i];
              return VectorElem<double>(u);
            }};
  }

  static ConformalFactor by_name(const std::string& name, int n) {
    if (name == "exp") return exponential(n);
    if (name == "sphere") return sphere(n);
    throw std::invalid_argument("unknown conformal factor: " + name);
  }
};

// w Upsilon (x) phi - Gamma phi, one multivector per W slot.
inline std::vector<Multivector<double>> hatted_connection_term(const Multivector<double>& phi, double w, const VectorElem<double>& upsilon,
                                                               const RepAction<double>& rep) {
  auto out = gamma_term(upsilon, phi, rep);
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = phi * (w * upsilon[a]) - out[a];
  return out;
}

struct InvarianceReport {
  double w = 0.0;
  double residual = 0.0;            // max |eps(hatted term)|
  double max_upsilon_dot_phi = 0.0; // max |Upsilon.phi|
  double max_upsilon_phi = 0.0;     // max |Upsilon| |phi|
  std::size_t points = 0;
};

inline InvarianceReport dirac_invariance_residual(const GridField& phi, double w, const ConformalFactor& factor, const RepAction<double>& rep) {
  InvarianceReport r;
  r.w = w;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!phi.valid[i]) continue;
    const Point x = phi.grid.point(i);
    const auto up = factor.upsilon(x);
    const auto& v = phi.values[i];
    r.residual = std::max(r.residual, clifford_contract(hatted_connection_term(v, w, up, rep)).norm());
    r.max_upsilon_dot_phi = std::max(r.max_upsilon_dot_phi, clifford_mul_vec(up, v).norm());
    r.max_upsilon_phi = std::max(r.max_upsilon_phi, up.norm() * v.norm());
    ++r.points;
  }
  return r;
}

struct LeastSquaresWeight {
  double w = 0.0;
  double residual = 0.0;    // max over points at the fitted w
  double normalized = 0.0;  // residual / max |Upsilon| |phi|
};

// The contraction is affine in w: w A_p - B_p with A_p = Upsilon.phi and
// B_p = eps(Gamma phi). Fit w over all points.
inline LeastSquaresWeight fit_weight(const GridField& phi, const ConformalFactor& factor, const RepAction<double>& rep) {
  std::vector<Multivector<double>> as, bs;
  double num = 0.0, den = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!phi.valid[i]) continue;
    const auto up = factor.upsilon(phi.grid.point(i));
    const auto& v = phi.values[i];
    auto a = clifford_mul_vec(up, v);
    auto b = clifford_contract(gamma_term(up, v, rep));
    for (Blade k = 0; k < a.size(); ++k) {
      num += a[k] * b[k];
      den += a[k] * a[k];
    }
    scale = std::max(scale, up.norm() * v.norm());
    as.push_back(std::move(a));
    bs.push_back(std::move(b));
  }
  if (den == 0.0) throw std::invalid_argument("fit_weight: Upsilon.phi vanishes everywhere");
  LeastSquaresWeight r;
  r.w = num / den;
  for (std::size_t p = 0; p < as.size(); ++p) r.residual = std::max(r.residual, (as[p] * r.w - bs[p]).norm());
  r.normalized = r.residual / scale;
  return r;
}

inline double norm2(const Point& x) {
  double s = 0;
  for (double c : x) s += c * c;
  return s;
}

inline Multivector<double> cauchy_kernel(const Point& x) {
  const double r2 = norm2(x);
  if (r2 == 0.0) throw std::domain_error("cauchy_kernel: singular at the origin");
  const int n = static_cast<int>(x.size());
  const double k = std::pow(r2, -0.5 * n);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i] * k;
  return VectorElem<double>(v).to_multivector();
}

// Kf(x) = (x / |x|^n) . f(x / |x|^2)
inline FieldFn kelvin_transform(FieldFn f) {
  return [f = std::move(f)](const Point& x) {
    const double r2 = norm2(x);
    if (r2 == 0.0) throw std::domain_error("kelvin_transform: origin in domain");
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / r2;
    const auto kx = cauchy_kernel(x);
    return clifford_mul_vec(VectorElem<double>::from_multivector(kx), f(y));
  };
}

// Gradient of a harmonic polynomial: x1 x2 x3 for n >= 3, x1^2 - x2^2 for n = 2.
inline FieldFn harmonic_gradient(int n) {
  return [n](const Point& x) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    if (n == 2) {
      v[0] = 2 * x[0];
      v[1] = -2 * x[1];
    } else {
      v[0] = x[1] * x[2];
      v[1] = x[0] * x[2];
      v[2] = x[0] * x[1];
    }
    return VectorElem<double>(v).to_multivector();
  };
}

// 2 x1 e1 - 2 x2 e2 in any dimension
inline FieldFn linear_monogenic(int n) {
  return [n](const Point& x) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[0] = 2 * x[0];
    v[1] = -2 * x[1];
    return VectorElem<double>(v).to_multivector();
  };
}

inline FieldFn annulus(FieldFn f, double r_in, double r_out) {
  return [f = std::move(f), r_in, r_out](const Point& x) {
    const double r = std::sqrt(norm2(x));
    if (r < r_in || r > r_out) throw std::domain_error("outside annulus");
    return f(x);
  };
}

// A fixed mixed-grade field for the algebraic checks.
inline FieldFn mixed_sample(int n) {
  return [n](const Point& x) {
    Multivector<double> m(n);
    m[0] = 1.0 + 0.5 * x[0];
    m[blade_of({1})] = x[1];
    m[blade_of({1, 2})] = 0.25 - x[0] * x[1];
    if (n >= 3) m[blade_of({1, 2, 3})] = 0.5 + x[2];
    m[blade_of({2})] = 0.3 * x[0] * x[0];
    return m;
  };
}

inline constexpr double kRoundoffFloor = 1e-12;

enum class ConvergenceTest { Cauchy, Kelvin, Linear };

inline ConvergenceTest convergence_test_from_name(const std::string& s) {
  if (s == "cauchy") return ConvergenceTest::Cauchy;
  if (s == "kelvin") return ConvergenceTest::Kelvin;
  if (s == "linear") return ConvergenceTest::Linear;
  throw std::invalid_argument("unknown convergence test: " + s);
}

struct ConvergenceRow {
  double h = 0.0;
  double residual = 0.0;
  std::optional<double> order;  // log2-ratio against the previous row
};

inline FieldFn convergence_field(ConvergenceTest t, int n) {
  switch (t) {
    case ConvergenceTest::Cauchy:
      return annulus(cauchy_kernel, 0.5, 1.5);
    case ConvergenceTest::Kelvin:
      return annulus(kelvin_transform(harmonic_gradient(n)), 0.5, 1.5);
    case ConvergenceTest::Linear:
      return linear_monogenic(n);
  }
  throw std::logic_error("convergence_field");
}

// Residual max |D f| on [-1.5, 1.5]^n for each spacing. Every h is measured at
// the same points: nodes of the coarsest lattice that are interior on all grids.
inline std::vector<ConvergenceRow> convergence_study(ConvergenceTest test, int n, std::vector<double> hs) {
  if (hs.size() < 2) throw std::invalid_argument("convergence_study: need at least two spacings");
  std::sort(hs.begin(), hs.end(), std::greater<>());
  const auto f = convergence_field(test, n);
  const auto coarse = GridSpec::cube(n, -1.5, 1.5, hs.front());
  std::vector<std::size_t> strides;
  std::vector<GridField> fields;
  for (double h : hs) {
    const double ratio = hs.front() / h;
    const auto k = std::llround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9)
      throw std::invalid_argument("convergence_study: spacings must divide the coarsest one");
    strides.push_back(static_cast<std::size_t>(k));
    fields.push_back(dirac_flat(sample(GridSpec::cube(n, -1.5, 1.5, h), f)));
  }
  auto fine_index = [&](std::size_t ci, std::size_t g) {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) idx += coarse.coord(ci, a) * strides[g] * fields[g].grid.stride(a);
    return idx;
  };
  std::vector<double> res(hs.size(), 0.0);
  for (std::size_t ci = 0; ci < coarse.size(); ++ci) {
    bool common = true;
    for (std::size_t g = 0; g < fields.size() && common; ++g) common = fields[g].valid[fine_index(ci, g)] != 0;
    if (!common) continue;
    for (std::size_t g = 0; g < fields.size(); ++g) res[g] = std::max(res[g], fields[g].values[fine_index(ci, g)].norm());
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t g = 0; g < hs.size(); ++g) {
    ConvergenceRow row{hs[g], res[g], std::nullopt};
    if (!rows.empty() && row.residual > kRoundoffFloor && rows.back().residual > kRoundoffFloor)
      row.order = std::log(rows.back().residual / row.residual) / std::log(rows.back().h / row.h);
    rows.push_back(row);
  }
  return rows;
}

// Change of the connection on a weighted 1-form:
// (w - 1) U_a o_b - U_b o_a + (U.o) g_ab, as an n x n matrix indexed (a, b).
template <Scalar S>
Matrix<S> one_form_change(const VectorElem<S>& upsilon, const VectorElem<S>& omega, const S& w) {
  check_same_dim(upsilon.dim(), omega.dim(), "one_form_change");
  const int n = upsilon.dim();
  const S dot = inner(upsilon, omega);
  Matrix<S> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      m(a, b) = (w - S(1)) * upsilon[a] * omega[b] - upsilon[b] * omega[a];
      if (a == b) m(a, b) += dot;
    }
  return m;
}

template <Scalar S>
struct OneFormParts {
  Matrix<S> skew, sym0;
  S trace;
};

template <Scalar S>
OneFormParts<S> split_one_form(const Matrix<S>& m) {
  const std::size_t n = m.rows();
  OneFormParts<S> p{Matrix<S>(n, n), Matrix<S>(n, n), S(0)};
  for (std::size_t a = 0; a < n; ++a) p.trace += m(a, a);
  const S half = ratio<S>(1, 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      p.skew(a, b) = (m(a, b) - m(b, a)) * half;
      p.sym0(a, b) = (m(a, b) + m(b, a)) * half;
      if (a == b) p.sym0(a, b) -= p.trace * ratio<S>(1, static_cast<long>(n));
    }
  return p;
}

// d - d* from index-level stencils: E_i is e_i ^ . on blade coefficients and
// d* = sum_i E_i^T d_i, so that D = d - d*.
namespace detail {

inline Matrix<double> wedge_stencil(int n, int i) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix<double> e(dim, dim);
  const Blade bi = Blade{1} << (i - 1);
  for (Blade b = 0; b < dim; ++b) {
    if (b & bi) continue;
    int below = 0;
    for (int k = 1; k < i; ++k)
      if (b & (Blade{1} << (k - 1))) ++below;
    e(b | bi, b) = below % 2 == 0 ? 1.0 : -1.0;
  }
  return e;
}

}  // namespace detail

inline GridField d_minus_dstar(const GridField& f) {
  const auto grad = fd_gradient(f);
  const int n = f.grid.n;
  GridField out{f.grid, f.weight, std::vector<Multivector<double>>(f.size(), Multivector<double>(n)), grad.front().valid};
  for (int i = 1; i <= n; ++i) {
    const auto e = detail::wedge_stencil(n, i);
    const auto op = e - e.transpose();
    for (std::size_t p = 0; p < f.size(); ++p)
      if (out.valid[p]) out.values[p] += apply(op, grad[static_cast<std::size_t>(i - 1)].values[p]);
  }
  return out;
}

}  // namespace clifconf
