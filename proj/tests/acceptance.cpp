// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "clifconf/flatfield.hpp"
#include "clifconf/random.hpp"
#include "clifconf/rarita.hpp"
#include "clifconf/represent.hpp"
#include "clifconf/spinor.hpp"

using namespace clifconf;

namespace {

using Q = Rational;
using X = ExtQ;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

template <Scalar S>
Multivector<S> L(const VectorElem<S>& v, const Multivector<S>& e) {
  return clifford_mul_vec(v, e);
}

Outcome clifford_relation() {
  Outcome o;
  Rng rng(1);
  for (int n = 1; n <= 6; ++n)
    for (int t = 0; t < 100; ++t) {
      const auto u = random_vector<Q>(n, rng), v = random_vector<Q>(n, rng);
      const auto e = random_multivector<Q>(n, rng);
      o.require((L(u, L(v, e)) + L(v, L(u, e)) + e * (Q(2) * inner(u, v))).is_zero(), "nonzero defect at n=" + std::to_string(n));
    }
  o.detail = o.ok ? "600 random triples, defect exactly 0" : o.detail;
  return o;
}

Outcome four_term_and_trace() {
  Outcome o;
  Rng rng(2);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 25; ++t) {
      const auto u = random_vector<Q>(n, rng), v = random_vector<Q>(n, rng), w = random_vector<Q>(n, rng);
      const auto e = random_multivector<Q>(n, rng);
      const auto lhs = L(u, L(v, L(w, e))) - L(v, L(w, L(u, e))) - L(u, L(w, L(v, e))) + L(w, L(v, L(u, e)));
      const auto rhs = L(w, e) * (Q(-4) * inner(u, v)) + L(v, e) * (Q(4) * inner(u, w));
      o.require(lhs == rhs, "four-term identity fails at n=" + std::to_string(n));
    }
    const std::size_t d = std::size_t{1} << n;
    Matrix<Q> sum(d, d);
    for (const auto& l : left_mul_basis<Q>(n)) sum += l * l;
    o.require(sum == Matrix<Q>::identity(d) * Q(-n), "sum e_a.e_a.e != -n e at n=" + std::to_string(n));
  }
  const auto e1 = VectorElem<Q>::basis(2, 1), e2 = VectorElem<Q>::basis(2, 2);
  const auto one = Multivector<Q>::scalar(2, Q(1));
  const auto spot = L(e1, L(e1, L(e2, one))) - L(e1, L(e2, L(e1, one))) - L(e1, L(e2, L(e1, one))) + L(e2, L(e1, L(e1, one)));
  o.require(spot == e2.to_multivector() * Q(-4), "spot value u=v=e1, w=e2, e=1 is not -4 e2");
  if (o.ok) o.detail = "n = 1..6 exact, spot value -4 e2";
  return o;
}

Outcome spin_action_bracket() {
  Outcome o;
  for (int n = 2; n <= 6; ++n) {
    o.require(check_representation(spin_rep<Q>(n)).exact_zero, "bracket defect at n=" + std::to_string(n));
    o.require(check_equivariance(epsilon_symbol<Q>(n)).exact_zero, "equivariance defect at n=" + std::to_string(n));
  }
  if (o.ok) o.detail = "n = 2..6, all basis pairs, defects exactly 0";
  return o;
}

Outcome weight_table() {
  Outcome o;
  for (int n = 3; n <= 6; ++n) {
    const auto s = conformal_weight(symbol_skew<Q>(n));
    const auto p = conformal_weight(symbol_sym0<Q>(n));
    const auto t = conformal_weight(symbol_trace<Q>(n));
    o.require(s.weight && *s.weight == -1, "skew at n=" + std::to_string(n));
    o.require(p.weight && *p.weight == 1, "sym0 at n=" + std::to_string(n));
    o.require(t.weight && *t.weight == Q(1 - n), "trace at n=" + std::to_string(n));
  }
  if (o.ok) o.detail = "(-1, 1, -(n-1)) for n = 3..6";
  return o;
}

Outcome dirac_weight() {
  Outcome o;
  for (int n = 2; n <= 6; ++n) {
    const auto eps = epsilon_symbol<Q>(n);
    const auto w = conformal_weight(eps);
    const Q want = make_rational(1 - n, 2);
    o.require(w.weight && *w.weight == want, "weight at n=" + std::to_string(n));
    const auto m = eps.matrix * connection_change_matrix(n, eps.rep_e);
    o.require((m + eps.matrix * make_rational(n - 1, 2)).is_zero(), "M + (n-1)/2 eps != 0 at n=" + std::to_string(n));
    const auto ls = left_mul_basis<Q>(n);
    const std::size_t d = std::size_t{1} << n;
    for (const auto& lc : ls) {
      Matrix<Q> s(d, d);
      for (const auto& la : ls) s += la * lc * la;
      o.require(s == lc * Q(n - 2), "sandwich identity at n=" + std::to_string(n));
    }
  }
  if (o.ok) o.detail = "-(n-1)/2 for n = 2..6, entrywise identity and sandwich identity exact";
  return o;
}

Outcome hodge_negative() {
  Outcome o;
  std::string res;
  for (int n = 3; n <= 6; ++n) {
    const auto h = conformal_weight(epsilon_symbol<Q>(n, std_rep_forms<Q>(n), "hodge"));
    o.require(!h.weight, "weight found at n=" + std::to_string(n));
    o.require(h.residual > 0, "residual not positive at n=" + std::to_string(n));
    res += (res.empty() ? "" : ", ") + h.residual.get_str();
  }
  if (o.ok) o.detail = "no weight for n = 3..6, residuals " + res;
  return o;
}

Outcome phi_isomorphism() {
  Outcome o;
  for (int n : {2, 4, 6}) {
    const auto rep = block_decompose_even<X>(n);
    const auto phi = build_phi<X>(n);
    const std::size_t dim = std::size_t{1} << n;
    o.require(phi.matrix * phi.inverse == Matrix<X>::identity(dim), "Phi not invertible at n=" + std::to_string(n));
    o.require(rep.intertwining.exact_zero, "intertwining at n=" + std::to_string(n));
    o.require(rep.orders_agree, "word orders disagree at n=" + std::to_string(n));
    o.require(rep.block.exact_zero, "block decomposition at n=" + std::to_string(n));
    o.require(rep.multiplicity == (std::size_t{1} << (n / 2)), "multiplicity at n=" + std::to_string(n));
  }
  if (o.ok) o.detail = "n = 2, 4, 6 exact over Q(i, sqrt2), N = 2, 4, 8";
  return o;
}

Outcome odd_case() {
  Outcome o;
  for (int n : {3, 5}) {
    const auto rep = decompose_odd<X>(n);
    o.require(rep.volume_squares_to_one && rep.volume_central, "volume element at n=" + std::to_string(n));
    o.require(rep.multiplicity == (std::size_t{1} << ((n + 1) / 2)), "multiplicity at n=" + std::to_string(n));
    o.require(rep.spinor_dim == (std::size_t{1} << ((n - 1) / 2)), "spinor dim at n=" + std::to_string(n));
  }
  if (o.ok) o.detail = "n = 3: N = 4, dim S = 2; n = 5: N = 8, dim S = 4";
  return o;
}

Outcome rarita_weight() {
  Outcome o;
  std::string note;
  for (int n = 2; n <= 5; ++n) {
    const auto r = verify_rarita<Q>(n);
    const std::string at = " at n=" + std::to_string(n);
    o.require(r.dim_F == (static_cast<std::size_t>(n - 1) << n), "dim F" + at);
    o.require(r.exactness.exact_zero, "eps o incl != 0" + at);
    o.require(r.splitting.exact_zero, "Pi o incl != Id" + at);
    o.require(r.part_one.exact_zero, "first part not in ker Pi" + at);
    o.require(r.scalar_identity.exact_zero, "M + (n-1)/2 theta != 0" + at);
    if (r.theta_vanishes) {
      note = "; n = 2: theta = 0, identity holds vacuously";
    } else {
      o.require(r.weight.weight && *r.weight.weight == make_rational(1 - n, 2), "weight" + at);
    }
  }
  if (o.ok) o.detail = "-(n-1)/2 for n = 3..5, invariants exact for n = 2..5" + note;
  return o;
}

Outcome grid_suite() {
  Outcome o;
  const int n = 3;
  const auto phi = sample(GridSpec::cube(n, -1, 1, 0.1), mixed_sample(n));
  for (const auto& f : {ConformalFactor::exponential(n), ConformalFactor::sphere(n)}) {
    const auto at = dirac_invariance_residual(phi, -1.0, f, spin_rep<double>(n));
    o.require(at.residual <= 1e-12, "(a) residual at w=-1 for " + f.name);
    const auto off = dirac_invariance_residual(phi, 0.0, f, spin_rep<double>(n));
    o.require(std::abs(off.residual - (n - 1) / 2.0 * off.max_upsilon_dot_phi) <= 1e-10, "(b) residual at w=0 for " + f.name);
    const auto fit = fit_weight(phi, f, std_rep_forms<double>(n));
    o.require(fit.normalized > 0.01, "(e) Hodge residual for " + f.name);
  }
  const auto c = convergence_study(ConvergenceTest::Cauchy, n, {0.1, 0.05});
  const auto k = convergence_study(ConvergenceTest::Kelvin, n, {0.1, 0.05});
  const double oc = c.back().order.value_or(0.0), ok = k.back().order.value_or(0.0);
  o.require(oc >= 1.9, "(c) Cauchy order " + std::to_string(oc));
  o.require(ok >= 1.9, "(d) Kelvin order " + std::to_string(ok));
  if (o.ok) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "orders %.3f (Cauchy), %.3f (Kelvin)", oc, ok);
    o.detail = buf;
  }
  return o;
}

Outcome d_minus_dstar_oracle() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k < 20; ++k) {
      const auto g = GridSpec::cube(n, 0, 1, 0.1);
      const auto f = sample(g, [&](const Point&) {
        Multivector<double> m(n);
        for (Blade b = 0; b < m.size(); ++b) m[b] = u(rng);
        return m;
      });
      const auto a = dirac_flat(f), b = d_minus_dstar(f);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (a.valid[i]) worst = std::max(worst, (a.values[i] - b.values[i]).norm());
    }
  o.require(worst <= 1e-12, "max difference " + std::to_string(worst));
  if (o.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "40 random fields, max difference %.2e", worst);
    o.detail = buf;
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "Clifford relation u.v.e + v.u.e = -2<u,v>e", 10, clifford_relation},
      {2, "four-term identity and sum e_a.e_a.e = -n e", 0, four_term_and_trace},
      {3, "spin action: bracket and epsilon equivariance", 60, spin_action_bracket},
      {4, "W (x) W weight table", 0, weight_table},
      {5, "Dirac weight -(n-1)/2", 0, dirac_weight},
      {6, "Hodge-de Rham has no weight", 0, hodge_negative},
      {7, "Phi: intertwining, invertible, unique, block form", 300, phi_isomorphism},
      {8, "odd dimensions via the volume element", 0, odd_case},
      {9, "Rarita-Schwinger weight and splitting", 0, rarita_weight},
      {10, "flat grid suite, n = 3", 120, grid_suite},
      {11, "dirac_flat equals d - d*", 0, d_minus_dstar_oracle},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) o.require(false, "over runtime budget");
    if (!o.ok) ++failures;
    std::printf("%s  %2d  %-50s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
