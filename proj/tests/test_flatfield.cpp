#include <gtest/gtest.h>

#include <random>

#include "clifconf/flatfield.hpp"
#include "clifconf/random.hpp"

using namespace clifconf;

namespace {

using MV = Multivector<double>;

MV scalar_field(int n, double v) { return MV::scalar(n, v); }

double max_valid(const GridField& f) { return max_norm(f); }

}  // namespace

TEST(Grid, Validation) {
  EXPECT_THROW(GridSpec::cube(1, 0, 1, 0.1), std::invalid_argument);
  EXPECT_THROW(GridSpec::cube(5, 0, 1, 0.1), std::invalid_argument);
  EXPECT_THROW(GridSpec::cube(2, 0, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(GridSpec::cube(2, 0, 0.3, 0.1), std::invalid_argument);
  const auto g = GridSpec::cube(3, -1, 1, 0.5);
  EXPECT_EQ(g.points(0), 5u);
  EXPECT_EQ(g.size(), 125u);
  EXPECT_EQ(g.point(g.stride(0))[0], -0.5);
}

TEST(Gradient, PolynomialExactness) {
  const auto g = GridSpec::cube(2, -1, 1, 0.1);
  for (const auto& d : fd_gradient(sample(g, [](const Point&) { return scalar_field(2, 3.0); }))) EXPECT_EQ(max_valid(d), 0.0);

  const auto lin = fd_gradient(sample(g, [](const Point& x) { return MV::basis_vector(2, 1) * x[0]; }));
  for (std::size_t i = 0; i < lin[0].size(); ++i) {
    if (!lin[0].valid[i]) continue;
    EXPECT_NEAR(lin[0].values[i][blade_of({1})], 1.0, 1e-13);
    EXPECT_NEAR(lin[1].values[i].norm(), 0.0, 1e-13);
  }
  const auto quad = fd_gradient(sample(g, [](const Point& x) { return scalar_field(2, x[0] * x[0]); }));
  for (std::size_t i = 0; i < quad[0].size(); ++i)
    if (quad[0].valid[i]) {
      EXPECT_NEAR(quad[0].values[i][0], 2 * g.point(i)[0], 1e-13);
    }
  // boundary ring excluded
  EXPECT_FALSE(quad[0].valid[0]);
}

TEST(Dirac, ConstantsAndLinearMonogenic) {
  for (int n = 2; n <= 3; ++n) {
    const auto g = GridSpec::cube(n, -1, 1, 0.1);
    EXPECT_EQ(max_valid(dirac_flat(sample(g, [n](const Point&) { return scalar_field(n, 1.0); }))), 0.0);
    EXPECT_LT(max_valid(dirac_flat(sample(g, linear_monogenic(n)))), 1e-12);
  }
  // a non-monogenic field is detected: D(x1 e0) = e1
  const auto g = GridSpec::cube(2, -1, 1, 0.1);
  EXPECT_NEAR(max_valid(dirac_flat(sample(g, [](const Point& x) { return scalar_field(2, x[0]); }))), 1.0, 1e-12);
}

TEST(CauchyKernel, ValuesAndSingularity) {
  EXPECT_EQ(cauchy_kernel({1.0, 0.0}), MV::basis_vector(2, 1));
  const auto k = cauchy_kernel({0.0, 2.0, 0.0});
  EXPECT_NEAR(k[blade_of({2})], 0.25, 1e-15);
  EXPECT_NEAR(k.norm(), 0.25, 1e-15);
  EXPECT_THROW(cauchy_kernel({0.0, 0.0, 0.0}), std::domain_error);
}

TEST(Kelvin, OnConstantsAndInvolution) {
  const auto k1 = kelvin_transform([](const Point& x) { return MV::scalar(static_cast<int>(x.size()), 1.0); });
  const Point x{0.3, -0.7, 0.4};
  EXPECT_LT((k1(x) - cauchy_kernel(x)).norm(), 1e-15);
  EXPECT_THROW(k1({0.0, 0.0, 0.0}), std::domain_error);
  // K o K = -Id
  const auto f = [](const Point& y) {
    MV m(3);
    m[0] = y[0] * y[1];
    m[blade_of({2, 3})] = 1.0 + y[2];
    m[blade_of({1})] = y[0] - y[1];
    return m;
  };
  const auto kk = kelvin_transform(kelvin_transform(f));
  for (const Point& p : {Point{0.3, -0.7, 0.4}, Point{1.2, 0.1, -0.5}}) EXPECT_LT((kk(p) + f(p)).norm(), 1e-13);
}

TEST(HattedTerm, AffineInWithRootAtDiracWeight) {
  Rng rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 2; n <= 4; ++n) {
    const auto sigma = spin_rep<double>(n);
    const auto zero = hatted_connection_term(random_multivector<double>(n, rng), 0.7, VectorElem<double>::zero(n), sigma);
    for (const auto& s : zero) EXPECT_EQ(s.norm(), 0.0);
    for (int t = 0; t < 5; ++t) {
      const auto up = random_vector<double>(n, rng);
      const auto phi = random_multivector<double>(n, rng);
      const auto ud = clifford_mul_vec(up, phi);
      auto contracted = [&](double w) { return clifford_contract(hatted_connection_term(phi, w, up, sigma)); };
      for (double w : {-2.0, 0.0, 1.5}) EXPECT_LT((contracted(w) - ud * (w + (n - 1) / 2.0)).norm(), 1e-12);
      // three-point linearity
      EXPECT_LT((contracted(0.0) + contracted(2.0) - contracted(1.0) * 2.0).norm(), 1e-12);
      EXPECT_LT(contracted(-(n - 1) / 2.0).norm(), 1e-12);
    }
  }
}

TEST(Invariance, DiracWeightBothFactors) {
  const int n = 3;
  const auto g = GridSpec::cube(n, -1, 1, 0.1);
  const auto phi = sample(g, mixed_sample(n));
  for (const auto& f : {ConformalFactor::exponential(n), ConformalFactor::sphere(n)}) {
    const auto at = dirac_invariance_residual(phi, -1.0, f, spin_rep<double>(n));
    EXPECT_LE(at.residual, 1e-12);
    const auto off = dirac_invariance_residual(phi, 0.0, f, spin_rep<double>(n));
    EXPECT_GT(off.residual, 0.1);
    EXPECT_NEAR(off.residual, (n - 1) / 2.0 * off.max_upsilon_dot_phi, 1e-10);
  }
}

TEST(Invariance, FactorsMatchLogGradient) {
  const int n = 3;
  for (const auto& f : {ConformalFactor::exponential(n), ConformalFactor::sphere(n)}) {
    const Point x{0.4, -0.2, 0.9};
    const double h = 1e-5;
    for (int a = 0; a < n; ++a) {
      Point xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double num = (std::log(f.omega(xp)) - std::log(f.omega(xm))) / (2 * h);
      EXPECT_NEAR(f.upsilon(x)[a], num, 1e-8);
    }
  }
}

TEST(Invariance, HodgeDeRhamHasNoWeight) {
  const int n = 3;
  const auto g = GridSpec::cube(n, -1, 1, 0.1);
  const auto phi = sample(g, mixed_sample(n));
  const auto fit = fit_weight(phi, ConformalFactor::exponential(n), std_rep_forms<double>(n));
  EXPECT_GT(fit.normalized, 0.01);
  EXPECT_NEAR(fit.normalized, 0.733927457202, 1e-9);
  EXPECT_NEAR(fit.w, -0.415053854284, 1e-9);
  const auto sph = fit_weight(phi, ConformalFactor::sphere(n), std_rep_forms<double>(n));
  EXPECT_GT(sph.normalized, 0.01);
  // the same fit recovers the spin weight exactly
  const auto spin = fit_weight(phi, ConformalFactor::exponential(n), spin_rep<double>(n));
  EXPECT_NEAR(spin.w, -1.0, 1e-12);
  EXPECT_LT(spin.normalized, 1e-12);
}

TEST(Convergence, SecondOrder) {
  const auto c = convergence_study(ConvergenceTest::Cauchy, 3, {0.1, 0.05});
  ASSERT_EQ(c.size(), 2u);
  ASSERT_TRUE(c[1].order.has_value());
  EXPECT_GE(*c[1].order, 1.9);
  const auto k = convergence_study(ConvergenceTest::Kelvin, 3, {0.05, 0.1});
  EXPECT_EQ(k[0].h, 0.1);
  ASSERT_TRUE(k[1].order.has_value());
  EXPECT_GE(*k[1].order, 1.9);
  for (const auto& row : convergence_study(ConvergenceTest::Linear, 3, {0.1, 0.05})) EXPECT_LT(row.residual, 1e-12);
  EXPECT_THROW(convergence_study(ConvergenceTest::Cauchy, 3, {0.1}), std::invalid_argument);
  EXPECT_THROW(convergence_study(ConvergenceTest::Cauchy, 3, {0.1, 0.07}), std::invalid_argument);
  EXPECT_THROW(convergence_test_from_name("nope"), std::invalid_argument);
}

TEST(Convergence, CauchyInTwoDimensions) {
  const auto c = convergence_study(ConvergenceTest::Cauchy, 2, {0.1, 0.05, 0.025});
  EXPECT_GE(*c[2].order, 1.9);
}

TEST(DMinusDStar, AgreesWithCliffordGradient) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 2; n <= 3; ++n)
    for (int k = 0; k < 20; ++k) {
      const auto g = GridSpec::cube(n, 0, 1, 0.1);
      const auto f = sample(g, [&](const Point&) {
        MV m(n);
        for (Blade b = 0; b < m.size(); ++b) m[b] = u(rng);
        return m;
      });
      const auto d1 = dirac_flat(f), d2 = d_minus_dstar(f);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (d1.valid[i]) {
          ASSERT_LT((d1.values[i] - d2.values[i]).norm(), 1e-12);
        }
    }
}

TEST(DMinusDStar, ExteriorDerivativeStencil) {
  // d(x1 e2) = e1 ^ e2, d*(x1 e1) = 1
  const auto g = GridSpec::cube(2, -1, 1, 0.25);
  const auto a = d_minus_dstar(sample(g, [](const Point& x) { return MV::basis_vector(2, 2) * x[0]; }));
  const auto b = d_minus_dstar(sample(g, [](const Point& x) { return MV::basis_vector(2, 1) * x[0]; }));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.valid[i]) continue;
    EXPECT_NEAR(a.values[i][blade_of({1, 2})], 1.0, 1e-14);
    EXPECT_NEAR(b.values[i][0], -1.0, 1e-14);
  }
}

TEST(OneForm, ThreeProjectionsVanishAtTheirWeights) {
  Rng rng(23);
  for (int n = 2; n <= 5; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto up = random_vector<Rational>(n, rng), om = random_vector<Rational>(n, rng);
      EXPECT_TRUE(split_one_form(one_form_change(up, om, Rational(0))).skew.is_zero());
      EXPECT_TRUE(split_one_form(one_form_change(up, om, Rational(2))).sym0.is_zero());
      EXPECT_EQ(split_one_form(one_form_change(up, om, Rational(2 - n))).trace, 0);
      // and not at a neighbouring weight, for generic data
      const auto off = split_one_form(one_form_change(up, om, Rational(1)));
      if (!(up.is_zero() || om.is_zero())) {
        EXPECT_FALSE(off.skew.is_zero() && off.sym0.is_zero() && off.trace == 0);
      }
    }
}

TEST(OneForm, WeightsSitOneAboveTheExtractor) {
  // the connection change above is written for lower-index forms; the symbol
  // extractor's weights are the same numbers shifted by one
  for (int n = 3; n <= 4; ++n) {
    EXPECT_EQ(*conformal_weight(symbol_skew<Rational>(n)).weight + 1, 0);
    EXPECT_EQ(*conformal_weight(symbol_sym0<Rational>(n)).weight + 1, 2);
    EXPECT_EQ(*conformal_weight(symbol_trace<Rational>(n)).weight + 1, 2 - n);
  }
}
