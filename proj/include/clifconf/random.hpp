#pragma once

// Seeded random elements for property checks.

#include <random>

#include "clifconf/multivector.hpp"
#include "clifconf/represent.hpp"

namespace clifconf {

using Rng = std::mt19937_64;

template <Scalar S>
S random_scalar(Rng& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  if constexpr (std::same_as<S, Rational>) {
    return make_rational(num(rng), den(rng));
  } else if constexpr (std::same_as<S, ExtQ>) {
    return ExtQ(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng)),
                make_rational(num(rng), den(rng)));
  } else if constexpr (std::same_as<S, double>) {
    return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  } else {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    return S(re, u(rng));
  }
}

template <Scalar S>
VectorElem<S> random_vector(int n, Rng& rng) {
  std::vector<S> x;
  for (int i = 0; i < n; ++i) x.push_back(random_scalar<S>(rng));
  return VectorElem<S>(std::move(x));
}

// Random element with roughly half the blades populated.
template <Scalar S>
Multivector<S> random_multivector(int n, Rng& rng) {
  Multivector<S> m(n);
  std::bernoulli_distribution keep(0.5);
  for (Blade b = 0; b < m.size(); ++b)
    if (keep(rng)) m[b] = random_scalar<S>(rng);
  return m;
}

template <Scalar S>
BivectorElem<S> random_bivector(int n, Rng& rng) {
  BivectorElem<S> x(n);
  for (std::size_t p = 0; p < x.size(); ++p) x[p] = random_scalar<S>(rng);
  return x;
}

}  // namespace clifconf
