#pragma once

// Batch driver behind the clifconf executable: one function per subcommand,
// each returning a Report that renders to JSON or CSV.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "clifconf/flatfield.hpp"
#include "clifconf/random.hpp"
#include "clifconf/rarita.hpp"
#include "clifconf/represent.hpp"
#include "clifconf/spinor.hpp"

namespace clifconf::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitNegative = 2;
inline constexpr int kExitUsage = 64;

inline constexpr int kExactMaxDim = 6;
inline constexpr int kFloatMaxDim = 8;

class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

struct RunConfig {
  std::string command;
  int n = 3;
  std::string mode = "exact";
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string perturb;
  std::string symbol;
  int j = 1;
  std::vector<double> hs;
  std::string test = "dirac-invariance";
  std::string omega = "exp";
  std::string w;

  bool exact() const { return mode == "exact"; }
  double tolerance() const { return tol.value_or(1e-9); }
};

struct Check {
  std::string name;
  bool passed = false;
  std::string value;
  std::string expected;
  std::string source;  // identity, closed-form, construction, negative-control, numerical, fault-injection
};

struct Report {
  std::string suite;
  json data = json::object();
  std::vector<Check> checks;
  bool expected_negative = false;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  int exit_status() const {
    if (!all_pass()) return kExitFail;
    return expected_negative ? kExitNegative : kExitPass;
  }
};

// ---- serialization --------------------------------------------------------

template <Scalar S>
json scalar_json(const S& x) {
  const auto p = scalar_traits<S>::parts(x);
  return json{{"re", p[0]}, {"im", p[2]}, {"s2re", p[1]}, {"s2im", p[3]}};
}

template <Scalar S>
json to_json(const Multivector<S>& m) {
  json coeffs = json::array();
  for (Blade b = 0; b < m.size(); ++b) {
    if (is_zero(m[b])) continue;
    json c = {{"blade", blade_indices(b)}};
    c.update(scalar_json(m[b]));
    coeffs.push_back(std::move(c));
  }
  return json{{"n", m.dim()}, {"coeffs", std::move(coeffs)}};
}

// sparse: nonzero entries only
template <Scalar S>
json to_json(const Matrix<S>& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (is_zero(m(r, c))) continue;
      json e = {{"row", r}, {"col", c}};
      e.update(scalar_json(m(r, c)));
      entries.push_back(std::move(e));
    }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline std::string fmt(double v) { return detail::format_double(v); }

template <Scalar S>
json weight_json(const WeightReport<S>& w) {
  json j;
  j["symbol"] = w.symbol;
  j["n"] = w.n;
  j["weight"] = w.weight ? json(to_string(*w.weight)) : json(nullptr);
  j["residual"] = to_string(w.residual);
  j["operator"] = w.operator_label();
  return j;
}

inline json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"status", c.passed ? "pass" : "fail"}, {"value", c.value}, {"expected", c.expected}, {"source", c.source}});
  return arr;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string render(const Report& r, const std::string& format) {
  if (format == "csv") {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
      os << "\n";
    };
    if (!r.csv_header.empty()) {
      line(r.csv_header);
      for (const auto& row : r.csv_rows) line(row);
    } else {
      line({"name", "status", "value", "expected", "source"});
      for (const auto& c : r.checks) line({c.name, c.passed ? "pass" : "fail", c.value, c.expected, c.source});
    }
    return os.str();
  }
  json j;
  j["suite"] = r.suite;
  for (const auto& [k, v] : r.data.items()) j[k] = v;
  j["checks"] = checks_json(r.checks);
  j["exit_status"] = r.exit_status();
  return j.dump(2) + "\n";
}

// ---- check helpers --------------------------------------------------------

template <Scalar S>
Check defect_check(std::string name, const DefectReport& d, double tol, std::string source = "identity") {
  Check c{std::move(name), is_exact_v<S> ? d.exact_zero : d.passes(tol), fmt(d.max_defect), "0", std::move(source)};
  return c;
}

inline Check bool_check(std::string name, bool ok, std::string value, std::string expected, std::string source) {
  return Check{std::move(name), ok, std::move(value), std::move(expected), std::move(source)};
}

template <Scalar S>
bool close(const S& a, const S& b, double tol) {
  if constexpr (is_exact_v<S>) return a == b;
  else return magnitude(S(a - b)) <= tol;
}

inline void require_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw UsageError(std::string(what) + ": n = " + std::to_string(n) + " outside supported range " + std::to_string(lo) + ".." + std::to_string(hi));
}

template <Scalar S>
S parse_scalar(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if constexpr (is_exact_v<S>) {
      if (s.find('.') != std::string::npos) throw UsageError("exact mode needs a rational, got " + s);
      const long p = std::stol(s.substr(0, slash));
      const long q = slash == std::string::npos ? 1 : std::stol(s.substr(slash + 1));
      return S(make_rational(p, q));
    } else {
      if (slash == std::string::npos) return S(std::stod(s));
      return S(std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1)));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const UsageError*>(&e)) throw;
    throw UsageError("cannot parse number: " + s);
  }
}

// ---- verify ---------------------------------------------------------------

namespace detail {

template <Scalar S>
void random_identities(int n, Rng& rng, int trials, double tol, std::vector<Check>& out) {
  DefectReport rel, four;
  for (int t = 0; t < trials; ++t) {
    const auto u = random_vector<S>(n, rng), v = random_vector<S>(n, rng), w = random_vector<S>(n, rng);
    const auto e = random_multivector<S>(n, rng);
    auto L = [](const VectorElem<S>& a, const Multivector<S>& x) { return clifford_mul_vec(a, x); };
    const auto d1 = L(u, L(v, e)) + L(v, L(u, e)) + e * (S(2) * inner(u, v));
    const auto d2 = L(u, L(v, L(w, e))) - L(v, L(w, L(u, e))) - L(u, L(w, L(v, e))) + L(w, L(v, L(u, e))) +
                    L(w, e) * (S(4) * inner(u, v)) - L(v, e) * (S(4) * inner(u, w));
    for (auto [rpt, d] : {std::pair{&rel, &d1}, std::pair{&four, &d2}}) {
      rpt->max_defect = std::max(rpt->max_defect, d->max_abs());
      rpt->exact_zero = rpt->exact_zero && d->is_zero();
      ++rpt->checks;
    }
  }
  out.push_back(defect_check<S>("clifford-relation", rel, tol));
  out.push_back(defect_check<S>("four-term-identity", four, tol));
}

template <Scalar S>
void basis_identities(int n, double tol, std::vector<Check>& out) {
  const auto ls = left_mul_basis<S>(n);
  const std::size_t d = std::size_t{1} << n;
  Matrix<S> sq(d, d);
  for (const auto& l : ls) sq += l * l;
  out.push_back(defect_check<S>("sum-e_a.e_a", matrix_defect(sq, Matrix<S>::identity(d) * ratio<S>(-n)), tol));
  DefectReport sandwich;
  for (const auto& lc : ls) {
    Matrix<S> s(d, d);
    for (const auto& la : ls) s += la * lc * la;
    merge_defect(sandwich, matrix_defect(s, lc * ratio<S>(n - 2)));
  }
  out.push_back(defect_check<S>("sum-e_a.e_c.e_a", sandwich, tol));
}

template <Scalar S>
Check weight_check(std::string name, const SymbolMap<S>& pi, const S& expected, double tol, json* dump) {
  Check c{std::move(name), false, "", to_string(expected), "closed-form"};
  try {
    const auto w = conformal_weight(pi, tol);
    if (dump) (*dump)[pi.name] = weight_json(w);
    c.value = w.weight ? to_string(*w.weight) : "none";
    c.passed = w.weight && close(*w.weight, expected, tol);
  } catch (const NotModuleMap&) {
    c.value = "not a module map";
  }
  return c;
}

template <Scalar S>
void symbol_checks(int n, const S& spin_c, double tol, std::vector<Check>& out, json& weights) {
  const auto sigma = spin_rep<S>(n, spin_c);
  out.push_back(defect_check<S>("spin-representation", check_representation(sigma), tol));
  const auto eps = epsilon_symbol<S>(n, sigma);
  out.push_back(defect_check<S>("epsilon-equivariance", check_equivariance(eps), tol));
  out.push_back(weight_check("clifford-weight", eps, ratio<S>(1 - n, 2), tol, &weights));
  if (n >= 2) {
    out.push_back(weight_check("skew-weight", symbol_skew<S>(n), ratio<S>(-1), tol, &weights));
    out.push_back(weight_check("sym0-weight", symbol_sym0<S>(n), ratio<S>(1), tol, &weights));
    out.push_back(weight_check("trace-weight", symbol_trace<S>(n), ratio<S>(1 - n), tol, &weights));
  }
  if (n >= 3) {
    const auto h = conformal_weight(epsilon_symbol<S>(n, std_rep_forms<S>(n), "hodge"), tol);
    weights["hodge"] = weight_json(h);
    out.push_back(bool_check("hodge-has-no-weight", !h.weight && h.residual_value > 0, h.weight ? to_string(*h.weight) : "none", "none",
                             "negative-control"));
  }
}

template <ComplexScalar C>
void spinor_checks(int n, double tol, std::vector<Check>& out, json& data) {
  if (n % 2 == 0) {
    const auto rep = block_decompose_even<C>(n);
    out.push_back(defect_check<C>("phi-intertwining", rep.intertwining, tol, "construction"));
    out.push_back(defect_check<C>("block-decomposition", rep.block, tol, "construction"));
    out.push_back(defect_check<C>("spin-transport", rep.spin_transport, tol, "construction"));
    out.push_back(bool_check("phi-word-orders-agree", rep.orders_agree, rep.orders_agree ? "true" : "false", "true", "construction"));
    data["spinor"] = {{"parity", "even"}, {"spinor_dim", rep.spinor_dim}, {"multiplicity", rep.multiplicity}};
    out.push_back(bool_check("multiplicity", rep.multiplicity == (std::size_t{1} << (n / 2)), std::to_string(rep.multiplicity),
                             std::to_string(std::size_t{1} << (n / 2)), "closed-form"));
  } else {
    const auto rep = decompose_odd<C>(n);
    out.push_back(bool_check("volume-squares-to-one", rep.volume_squares_to_one, rep.volume_squares_to_one ? "true" : "false", "true", "construction"));
    out.push_back(bool_check("volume-central", rep.volume_central, rep.volume_central ? "true" : "false", "true", "construction"));
    const std::size_t want_s = std::size_t{1} << ((n - 1) / 2), want_m = std::size_t{1} << ((n + 1) / 2);
    out.push_back(bool_check("odd-spinor-dim", rep.spinor_dim == want_s, std::to_string(rep.spinor_dim), std::to_string(want_s), "closed-form"));
    out.push_back(bool_check("odd-multiplicity", rep.multiplicity == want_m, std::to_string(rep.multiplicity), std::to_string(want_m), "closed-form"));
    data["spinor"] = {{"parity", "odd"},
                      {"route", "volume-element"},
                      {"plus_dim", rep.plus_dim},
                      {"minus_dim", rep.minus_dim},
                      {"spinor_dim", rep.spinor_dim},
                      {"multiplicity", rep.multiplicity}};
  }
}

template <Scalar S>
void rarita_checks(const RaritaReport<S>& r, double tol, std::vector<Check>& out) {
  const int n = r.n;
  const std::size_t want = static_cast<std::size_t>(n - 1) << n;
  out.push_back(bool_check("dim-F", r.dim_F == want, std::to_string(r.dim_F), std::to_string(want), "closed-form"));
  out.push_back(defect_check<S>("epsilon-kills-F", r.exactness, tol));
  out.push_back(defect_check<S>("Pi-fixes-F", r.splitting, tol));
  out.push_back(defect_check<S>("first-part-in-ker-Pi", r.part_one, tol));
  out.push_back(defect_check<S>("second-part-scalar", r.part_two, tol));
  out.push_back(defect_check<S>("theta-identity", r.scalar_identity, tol));
  if (r.theta_vanishes) {
    out.push_back(bool_check("rarita-weight", true, "theta = 0", to_string(ratio<S>(1 - n, 2)), "construction"));
  } else {
    const bool ok = r.weight.weight && close(*r.weight.weight, ratio<S>(1 - n, 2), tol);
    out.push_back(bool_check("rarita-weight", ok, r.weight.weight ? to_string(*r.weight.weight) : "none", to_string(ratio<S>(1 - n, 2)), "closed-form"));
  }
}

template <Scalar S, ComplexScalar C>
Report verify_impl(const RunConfig& cfg) {
  const int n = cfg.n;
  const double tol = cfg.tolerance();
  Report r;
  r.suite = "verify";
  r.data["n"] = n;
  r.data["mode"] = cfg.mode;
  r.data["seed"] = cfg.seed;
  S spin_c = ratio<S>(kSpinConstNum, kSpinConstDen);
  if (cfg.perturb == "sigma-const") {
    spin_c = ratio<S>(-1, 4);
    r.data["perturb"] = "sigma-const";
  } else if (!cfg.perturb.empty()) {
    throw UsageError("unknown perturbation: " + cfg.perturb);
  }

  Rng rng(cfg.seed);
  random_identities<S>(n, rng, 20, tol, r.checks);
  basis_identities<S>(n, tol, r.checks);
  if (n >= 2) {
    // u = v = e1, w = e2, e = 1: both sides equal -4 e2
    const auto e1 = VectorElem<S>::basis(n, 1), e2 = VectorElem<S>::basis(n, 2);
    const auto one = Multivector<S>::scalar(n, S(1));
    auto L = [](const VectorElem<S>& a, const Multivector<S>& x) { return clifford_mul_vec(a, x); };
    const auto lhs = L(e1, L(e1, L(e2, one))) - L(e1, L(e2, L(e1, one))) - L(e1, L(e2, L(e1, one))) + L(e2, L(e1, L(e1, one)));
    const auto want = e2.to_multivector() * ratio<S>(-4);
    r.data["four_term_spot"] = to_json(lhs);
    r.checks.push_back(bool_check("four-term-spot", lhs == want, to_string(lhs[Blade{2}]) + " e2", to_string(ratio<S>(-4)) + " e2", "identity"));
  }

  json weights = json::object();
  symbol_checks<S>(n, spin_c, tol, r.checks, weights);
  r.data["weights"] = std::move(weights);

  spinor_checks<C>(n, tol, r.checks, r.data);
  if (n >= 2 && n <= 5) {
    const auto p4 = verify_rarita<S>(n);
    rarita_checks(p4, tol, r.checks);
    r.data["rarita"] = {{"dim_F", p4.dim_F}, {"theta_vanishes", p4.theta_vanishes}, {"weight", weight_json(p4.weight)}};
  } else if (n > 5) {
    r.data["skipped"] = json::array({"rarita (run the rarita subcommand)"});
  }
  return r;
}

}  // namespace detail

inline Report cmd_verify(const RunConfig& cfg) {
  require_range(cfg.n, 1, cfg.exact() ? kExactMaxDim : kFloatMaxDim, "verify");
  if (cfg.exact()) return detail::verify_impl<Rational, ExtQ>(cfg);
  return detail::verify_impl<double, std::complex<double>>(cfg);
}

// ---- weight ---------------------------------------------------------------

namespace detail {

template <Scalar S>
Report weight_impl(const RunConfig& cfg) {
  const int n = cfg.n;
  const std::string& sym = cfg.symbol;
  Report r;
  r.suite = "weight";
  std::optional<SymbolMap<S>> pi;
  S expected = ratio<S>(1 - n, 2);
  bool has_weight = true;
  if (sym == "skew") {
    pi = symbol_skew<S>(n);
    expected = ratio<S>(-1);
  } else if (sym == "sym0") {
    pi = symbol_sym0<S>(n);
    expected = ratio<S>(1);
  } else if (sym == "trace") {
    pi = symbol_trace<S>(n);
    expected = ratio<S>(1 - n);
  } else if (sym == "clifford") {
    pi = epsilon_symbol<S>(n);
  } else if (sym == "hodge") {
    pi = epsilon_symbol<S>(n, std_rep_forms<S>(n), "hodge");
    has_weight = false;
  } else if (sym == "rarita") {
    pi = theta_symbol(build_F<S>(n));
  } else if (sym == "rarita-j") {
    pi = theta_symbol(build_Fj_space<S>(n, cfg.j));
  } else {
    throw UsageError("unknown symbol: " + sym);
  }

  if (pi->matrix.is_zero()) {
    r.data = {{"symbol", pi->name}, {"n", n}, {"weight", nullptr}, {"residual", "0"}, {"operator", pi->e_label + " -> " + pi->f_label},
              {"note", "symbol vanishes identically; every weight fits"}};
    r.expected_negative = true;
    return r;
  }
  const auto w = conformal_weight(*pi, cfg.tolerance());
  r.data = weight_json(w);
  r.data["mode"] = cfg.mode;
  if (sym == "rarita-j") r.data["j"] = cfg.j;
  if (has_weight) {
    const bool ok = w.weight && close(*w.weight, expected, cfg.tolerance());
    r.checks.push_back(bool_check("weight", ok, w.weight ? to_string(*w.weight) : "none", to_string(expected), "closed-form"));
  } else {
    r.data["note"] = w.weight ? "weight found" : "no conformal weight exists";
    r.checks.push_back(bool_check("residual-positive", !w.weight && w.residual_value > 0, to_string(w.residual), "> 0", "negative-control"));
    r.expected_negative = true;
  }
  r.csv_header = {"symbol", "n", "weight", "residual", "operator"};
  r.csv_rows.push_back({w.symbol, std::to_string(n), w.weight ? to_string(*w.weight) : "", to_string(w.residual), w.operator_label()});
  return r;
}

}  // namespace detail

inline Report cmd_weight(const RunConfig& cfg) {
  if (cfg.symbol.empty()) throw UsageError("weight: --symbol is required");
  require_range(cfg.n, cfg.symbol.rfind("rarita", 0) == 0 ? 2 : 1, cfg.exact() ? kExactMaxDim : kFloatMaxDim, "weight");
  if (cfg.exact()) return detail::weight_impl<Rational>(cfg);
  return detail::weight_impl<double>(cfg);
}

// ---- gamma ----------------------------------------------------------------

namespace detail {

template <ComplexScalar C>
void gamma_csv(Report& r, const std::string& name, const Matrix<C>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (is_zero(m(i, k))) continue;
      std::complex<double> z;
      if constexpr (std::same_as<C, ExtQ>) z = m(i, k).to_complex();
      else z = m(i, k);
      r.csv_rows.push_back({name, std::to_string(i), std::to_string(k), fmt(z.real()), fmt(z.imag())});
    }
}

template <ComplexScalar C>
Report gamma_impl(const RunConfig& cfg) {
  const int n = cfg.n;
  Report r;
  r.suite = "gamma";
  r.data["n"] = n;
  r.data["mode"] = cfg.mode;
  r.csv_header = {"matrix", "row", "col", "re", "im"};
  spinor_checks<C>(n, cfg.tolerance(), r.checks, r.data);
  if (n % 2 == 1) return r;
  const auto phi = build_phi<C>(n);
  json gs = json::array();
  int i = 1;
  for (const auto& g : gamma_basis(phi.split)) {
    gs.push_back(to_json(g));
    gamma_csv(r, "gamma" + std::to_string(i++), g);
  }
  r.data["gamma"] = std::move(gs);
  r.data["phi"] = to_json(phi.matrix);
  gamma_csv(r, "phi", phi.matrix);
  return r;
}

}  // namespace detail

inline Report cmd_gamma(const RunConfig& cfg) {
  require_range(cfg.n, 1, cfg.exact() ? kExactMaxDim : kFloatMaxDim, "gamma");
  if (cfg.exact()) return detail::gamma_impl<ExtQ>(cfg);
  return detail::gamma_impl<std::complex<double>>(cfg);
}

// ---- rarita ---------------------------------------------------------------

namespace detail {

template <Scalar S>
Report rarita_impl(const RunConfig& cfg) {
  const int n = cfg.n;
  const double tol = cfg.tolerance();
  Report r;
  r.suite = "rarita";
  r.data["n"] = n;
  r.data["j"] = cfg.j;
  r.data["mode"] = cfg.mode;
  if (cfg.j == 1) {
    const auto p = verify_rarita<S>(n);
    r.data["dims"] = {{"ambient", static_cast<std::size_t>(n) << n}, {"F", p.dim_F}};
    r.data["theta_vanishes"] = p.theta_vanishes;
    r.data["weight"] = p.weight.weight ? json(to_string(*p.weight.weight)) : json(nullptr);
    r.data["residual"] = to_string(p.weight.residual);
    rarita_checks(p, tol, r.checks);
  } else {
    const auto f = build_Fj<S>(n, cfg.j);
    r.data["dims"] = {{"ambient", f.space.ambient_dim}, {"symmetric", f.space.sym_dim}, {"F", f.space.dim()}};
    r.data["theta_vanishes"] = f.theta_vanishes;
    r.data["weight"] = f.weight.weight ? json(to_string(*f.weight.weight)) : json(nullptr);
    r.data["residual"] = to_string(f.weight.residual);
    r.checks.push_back(defect_check<S>("contraction-kills-Fj", f.exactness, tol));
    r.checks.push_back(defect_check<S>("tau-representation", check_representation(f.space.tau), tol));
    if (!f.theta_vanishes) {
      const bool ok = f.weight.weight && close(*f.weight.weight, ratio<S>(1 - n, 2), tol);
      r.checks.push_back(bool_check("weight", ok, f.weight.weight ? to_string(*f.weight.weight) : "none", to_string(ratio<S>(1 - n, 2)), "closed-form"));
    }
  }
  return r;
}

}  // namespace detail

inline Report cmd_rarita(const RunConfig& cfg) {
  require_range(cfg.n, 2, kRaritaMaxDim, "rarita");
  if (cfg.j < 1) throw UsageError("rarita: --j must be >= 1");
  if (cfg.exact()) return detail::rarita_impl<Rational>(cfg);
  return detail::rarita_impl<double>(cfg);
}

// ---- grid -----------------------------------------------------------------

namespace detail {

inline void convergence_rows(Report& r, const std::string& name, ConvergenceTest t, int n, const std::vector<double>& hs, bool check_order) {
  const auto rows = convergence_study(t, n, hs);
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"h", row.h}, {"residual", row.residual}, {"order", row.order ? json(*row.order) : json(nullptr)}});
    r.csv_rows.push_back({name, fmt(row.h), fmt(row.residual), row.order ? fmt(*row.order) : ""});
  }
  r.data["tables"][name] = std::move(arr);
  if (check_order) {
    const double order = rows.back().order.value_or(0.0);
    r.checks.push_back(bool_check(name + "-order", order >= 1.9, fmt(order), ">= 1.9", "numerical"));
  } else {
    const double worst = rows.back().residual;
    r.checks.push_back(bool_check(name + "-exact", worst <= 1e-12, fmt(worst), "<= 1e-12", "numerical"));
  }
}

}  // namespace detail

inline Report cmd_grid(const RunConfig& cfg) {
  const int n = cfg.n;
  require_range(n, 2, 4, "grid");
  Report r;
  r.suite = "grid";
  r.data["n"] = n;
  r.data["test"] = cfg.test;
  r.csv_header = {"test", "h", "residual", "order"};
  std::vector<double> hs = cfg.hs.empty() ? std::vector<double>{0.1, 0.05} : cfg.hs;
  for (double h : hs)
    if (!(h > 0)) throw UsageError("grid: spacings must be positive");

  if (cfg.test == "dirac-invariance" || cfg.test == "hodge-noninvariance") {
    const auto factor = ConformalFactor::by_name(cfg.omega, n);
    const auto phi = sample(GridSpec::cube(n, -1, 1, hs.front()), mixed_sample(n));
    r.data["omega"] = factor.name;
    r.data["h"] = hs.front();
    r.csv_header = {"test", "omega", "w", "residual", "reference"};
    if (cfg.test == "dirac-invariance") {
      const double w0 = -(n - 1) / 2.0;
      const double w = cfg.w.empty() ? w0 : parse_scalar<double>(cfg.w);
      const auto rep = dirac_invariance_residual(phi, w, factor, spin_rep<double>(n));
      const double want = std::abs(w - w0) * rep.max_upsilon_dot_phi;
      r.data["w"] = w;
      r.data["residual"] = rep.residual;
      r.data["max_upsilon_dot_phi"] = rep.max_upsilon_dot_phi;
      r.data["points"] = rep.points;
      r.checks.push_back(bool_check("residual", std::abs(rep.residual - want) <= 1e-10, fmt(rep.residual), fmt(want), "identity"));
      r.csv_rows.push_back({cfg.test, factor.name, fmt(w), fmt(rep.residual), fmt(want)});
    } else {
      const auto fit = fit_weight(phi, factor, std_rep_forms<double>(n));
      r.data["w_fit"] = fit.w;
      r.data["residual"] = fit.residual;
      r.data["normalized"] = fit.normalized;
      r.checks.push_back(bool_check("normalized-residual", fit.normalized > 0.01, fmt(fit.normalized), "> 0.01", "negative-control"));
      r.csv_rows.push_back({cfg.test, factor.name, fmt(fit.w), fmt(fit.normalized), "0.01"});
    }
    return r;
  }
  if (cfg.test == "cauchy" || cfg.test == "kelvin") {
    detail::convergence_rows(r, cfg.test, convergence_test_from_name(cfg.test), n, hs, true);
  } else if (cfg.test == "convergence") {
    detail::convergence_rows(r, "cauchy", ConvergenceTest::Cauchy, n, hs, true);
    detail::convergence_rows(r, "kelvin", ConvergenceTest::Kelvin, n, hs, true);
    detail::convergence_rows(r, "linear", ConvergenceTest::Linear, n, hs, false);
  } else {
    throw UsageError("unknown grid test: " + cfg.test);
  }
  return r;
}

// ---- dispatch -------------------------------------------------------------

inline void validate(const RunConfig& cfg) {
  if (cfg.mode != "exact" && cfg.mode != "float") throw UsageError("--mode must be exact or float");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  if (cfg.exact() && cfg.tol && cfg.command != "grid") throw UsageError("exact mode takes no tolerance");
  if (cfg.tol && !(*cfg.tol > 0)) throw UsageError("--tol must be positive");
}

inline Report run(const RunConfig& cfg) {
  validate(cfg);
  try {
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "weight") return cmd_weight(cfg);
    if (cfg.command == "gamma") return cmd_gamma(cfg);
    if (cfg.command == "rarita") return cmd_rarita(cfg);
    if (cfg.command == "grid") return cmd_grid(cfg);
  } catch (const ResourceLimit& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown subcommand: " + cfg.command);
}

// Fills fields from a JSON config object; keys listed in `given` are skipped.
inline void apply_config(RunConfig& cfg, const nlohmann::json& j, const std::vector<std::string>& given) {
  auto want = [&](const char* key) {
    return j.contains(key) && std::find(given.begin(), given.end(), key) == given.end();
  };
  try {
    if (want("n")) cfg.n = j.at("n").get<int>();
    if (want("mode")) cfg.mode = j.at("mode").get<std::string>();
    if (want("format")) cfg.format = j.at("format").get<std::string>();
    if (want("out")) cfg.out = j.at("out").get<std::string>();
    if (want("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (want("tol")) cfg.tol = j.at("tol").get<double>();
    if (want("perturb")) cfg.perturb = j.at("perturb").get<std::string>();
    if (want("symbol")) cfg.symbol = j.at("symbol").get<std::string>();
    if (want("j")) cfg.j = j.at("j").get<int>();
    if (want("h")) cfg.hs = j.at("h").get<std::vector<double>>();
    if (want("test")) cfg.test = j.at("test").get<std::string>();
    if (want("omega")) cfg.omega = j.at("omega").get<std::string>();
    if (want("w")) cfg.w = j.at("w").is_string() ? j.at("w").get<std::string>() : j.at("w").dump();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

}  // namespace clifconf::cli
