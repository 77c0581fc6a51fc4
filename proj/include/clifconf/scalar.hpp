#pragma once

// Scalar fields used throughout the library.
//
//   Rational             exact rationals (GMP)
//   ExtQ                 exact Q(i, sqrt 2): a + b*sqrt2 + (c + d*sqrt2)*i
//   double               Real64
//   std::complex<double> Complex64
//
// Every algorithm is written once against scalar_traits<S>.

#include <gmpxx.h>

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>

namespace clifconf {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

class ExtQ {
 public:
  ExtQ() = default;
  ExtQ(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  ExtQ(Rational re) : a_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  ExtQ(Rational re, Rational s2re, Rational im, Rational s2im)
      : a_(std::move(re)), b_(std::move(s2re)), c_(std::move(im)), d_(std::move(s2im)) {}

  static ExtQ sqrt2() { return {0, 1, 0, 0}; }
  static ExtQ imag_unit() { return {0, 0, 1, 0}; }

  const Rational& re() const { return a_; }
  const Rational& s2re() const { return b_; }
  const Rational& im() const { return c_; }
  const Rational& s2im() const { return d_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0 && sgn(c_) == 0 && sgn(d_) == 0; }

  ExtQ conj() const { return {a_, b_, -c_, -d_}; }

  ExtQ operator-() const { return {-a_, -b_, -c_, -d_}; }

  ExtQ& operator+=(const ExtQ& o) {
    a_ += o.a_;
    b_ += o.b_;
    c_ += o.c_;
    d_ += o.d_;
    return *this;
  }
  ExtQ& operator-=(const ExtQ& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    c_ -= o.c_;
    d_ -= o.d_;
    return *this;
  }
  ExtQ& operator*=(const ExtQ& o) {
    *this = *this * o;
    return *this;
  }
  ExtQ& operator/=(const ExtQ& o) {
    *this = *this / o;
    return *this;
  }

  friend ExtQ operator+(ExtQ x, const ExtQ& y) { return x += y; }
  friend ExtQ operator-(ExtQ x, const ExtQ& y) { return x -= y; }

  // (p1 + q1 i)(p2 + q2 i) with p, q in Q(sqrt2)
  friend ExtQ operator*(const ExtQ& x, const ExtQ& y) {
    Rational pa, pb, qa, qb;
    real_mul(x.a_, x.b_, y.a_, y.b_, pa, pb);
    Rational ta, tb;
    real_mul(x.c_, x.d_, y.c_, y.d_, ta, tb);
    pa -= ta;
    pb -= tb;
    real_mul(x.a_, x.b_, y.c_, y.d_, qa, qb);
    real_mul(x.c_, x.d_, y.a_, y.b_, ta, tb);
    qa += ta;
    qb += tb;
    return {std::move(pa), std::move(pb), std::move(qa), std::move(qb)};
  }

  friend ExtQ operator/(const ExtQ& x, const ExtQ& y) { return x * y.inverse(); }

  ExtQ inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(i, sqrt2)");
    // 1/(p + q i) = (p - q i) / (p^2 + q^2); p^2 + q^2 = A + B sqrt2 is real
    Rational A, B, ta, tb;
    real_mul(a_, b_, a_, b_, A, B);
    real_mul(c_, d_, c_, d_, ta, tb);
    A += ta;
    B += tb;
    Rational den = A * A - 2 * B * B;
    Rational ia = A / den;
    Rational ib = -B / den;
    ExtQ inv_norm(ia, ib, 0, 0);
    return conj() * inv_norm;
  }

  friend bool operator==(const ExtQ& x, const ExtQ& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }

  std::complex<double> to_complex() const {
    const double s = std::sqrt(2.0);
    return {a_.get_d() + s * b_.get_d(), c_.get_d() + s * d_.get_d()};
  }

 private:
  static void real_mul(const Rational& a1, const Rational& b1, const Rational& a2,
                       const Rational& b2, Rational& ra, Rational& rb) {
    ra = a1 * a2 + 2 * b1 * b2;
    rb = a1 * b2 + b1 * a2;
  }

  Rational a_, b_, c_, d_;
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool has_imag = false;
  static constexpr bool has_sqrt2 = false;
  static constexpr const char* name = "rational";
  static Rational from_ratio(long p, long q) { return make_rational(p, q); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  static Rational conj(const Rational& x) { return x; }
  static double real_part(const Rational& x) { return x.get_d(); }
  static std::array<std::string, 4> parts(const Rational& x) { return {x.get_str(), "0", "0", "0"}; }
};

template <>
struct scalar_traits<ExtQ> {
  static constexpr bool exact = true;
  static constexpr bool has_imag = true;
  static constexpr bool has_sqrt2 = true;
  static constexpr const char* name = "ext-i-sqrt2";
  static ExtQ from_ratio(long p, long q) { return ExtQ(make_rational(p, q)); }
  static bool is_zero(const ExtQ& x) { return x.is_zero(); }
  static double magnitude(const ExtQ& x) { return std::abs(x.to_complex()); }
  static ExtQ conj(const ExtQ& x) { return x.conj(); }
  static double real_part(const ExtQ& x) { return x.to_complex().real(); }
  static ExtQ sqrt2() { return ExtQ::sqrt2(); }
  static ExtQ imag_unit() { return ExtQ::imag_unit(); }
  static std::array<std::string, 4> parts(const ExtQ& x) {
    return {x.re().get_str(), x.s2re().get_str(), x.im().get_str(), x.s2im().get_str()};
  }
};

namespace detail {
// shortest string that reads back to the same double
inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace detail

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool has_imag = false;
  static constexpr bool has_sqrt2 = true;
  static constexpr const char* name = "real64";
  static double from_ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::abs(x); }
  static double conj(double x) { return x; }
  static double real_part(double x) { return x; }
  static double sqrt2() { return std::sqrt(2.0); }
  static std::array<std::string, 4> parts(double x) { return {detail::format_double(x), "0", "0", "0"}; }
};

template <>
struct scalar_traits<std::complex<double>> {
  using C = std::complex<double>;
  static constexpr bool exact = false;
  static constexpr bool has_imag = true;
  static constexpr bool has_sqrt2 = true;
  static constexpr const char* name = "complex64";
  static C from_ratio(long p, long q) { return {static_cast<double>(p) / static_cast<double>(q), 0.0}; }
  static bool is_zero(const C& x) { return x == C{}; }
  static double magnitude(const C& x) { return std::abs(x); }
  static C conj(const C& x) { return std::conj(x); }
  static double real_part(const C& x) { return x.real(); }
  static C sqrt2() { return {std::sqrt(2.0), 0.0}; }
  static C imag_unit() { return {0.0, 1.0}; }
  static std::array<std::string, 4> parts(const C& x) {
    return {detail::format_double(x.real()), "0", detail::format_double(x.imag()), "0"};
  }
};

template <class S>
concept Scalar = requires(const S& a, const S& b) {
  { scalar_traits<S>::exact } -> std::convertible_to<bool>;
  { a + b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
};

template <class S>
concept ComplexScalar = Scalar<S> && scalar_traits<S>::has_imag && scalar_traits<S>::has_sqrt2;

template <Scalar S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

template <Scalar S>
S ratio(long p, long q = 1) {
  return scalar_traits<S>::from_ratio(p, q);
}

template <Scalar S>
bool is_zero(const S& x) {
  return scalar_traits<S>::is_zero(x);
}

template <Scalar S>
double magnitude(const S& x) {
  return scalar_traits<S>::magnitude(x);
}

template <Scalar S>
S conj_of(const S& x) {
  return scalar_traits<S>::conj(x);
}

// Human-readable rendering: "p/q" for rationals, "a + b*s2 + (c + d*s2)i" style for ExtQ.
template <Scalar S>
std::string to_string(const S& x) {
  const auto p = scalar_traits<S>::parts(x);
  if constexpr (!scalar_traits<S>::has_imag && std::same_as<S, Rational>) {
    return p[0];
  } else if constexpr (std::same_as<S, double>) {
    return p[0];
  } else {
    std::string out;
    auto term = [&](const std::string& v, const char* unit) {
      if (v == "0") return;
      if (!out.empty()) out += " + ";
      out += v;
      out += unit;
    };
    term(p[0], "");
    term(p[1], "*sqrt2");
    term(p[2], "*i");
    term(p[3], "*i*sqrt2");
    return out.empty() ? "0" : out;
  }
}

}  // namespace clifconf
