#include <gtest/gtest.h>

#include "clifconf/random.hpp"
#include "clifconf/rarita.hpp"

using namespace clifconf;

namespace {

using Q = Rational;

std::vector<Q> random_in_F(const TwistedSpace<Q>& f, Rng& rng) {
  std::vector<Q> c;
  for (std::size_t k = 0; k < f.dim(); ++k) c.push_back(random_scalar<Q>(rng));
  return f.basis * c;
}

}  // namespace

TEST(TwistedSpace, DimensionsAndSplitting) {
  for (int n = 2; n <= 4; ++n) {
    const auto f = build_F<Q>(n);
    const std::size_t d = std::size_t{1} << n;
    EXPECT_EQ(f.dim(), static_cast<std::size_t>(n - 1) * d);
    EXPECT_TRUE((epsilon_matrix<Q>(n) * f.basis).is_zero());
    EXPECT_EQ(rank(epsilon_matrix<Q>(n)), d);
    EXPECT_EQ(f.proj * f.basis, f.basis);
    EXPECT_EQ(f.proj * f.proj, f.proj);
    EXPECT_EQ(rank(f.proj), f.dim());
    EXPECT_EQ(f.coords * f.basis, Matrix<Q>::identity(f.dim()));
    // the lift e -> sum_a e_a (x) e_a.e spans the complement
    const Matrix<Q> lift = vstack(left_mul_basis<Q>(n));
    EXPECT_TRUE((f.proj * lift).is_zero());
  }
  EXPECT_THROW(build_F<Q>(1), std::invalid_argument);
  EXPECT_THROW(build_F<Q>(7), ResourceLimit);
}

TEST(EpsTilde, Examples) {
  const int n = 2;
  const auto et = eps_tilde<Q>(n);
  const std::size_t d = 4;
  std::vector<Q> x(n * n * d, Q(0));
  x[(0 * n + 1) * d + 0] = 1;  // e1 (x) e2 (x) 1
  std::vector<Q> want(n * d, Q(0));
  want[1 * d + blade_of({1})] = 1;  // e2 (x) e1
  EXPECT_EQ(et * x, want);

  std::vector<Q> y(n * n * d, Q(0));
  y[(0 * n + 0) * d + blade_of({1})] = 1;  // e1 (x) e1 (x) e1
  std::vector<Q> want_y(n * d, Q(0));
  want_y[0] = -1;  // -e1 (x) 1
  EXPECT_EQ(et * y, want_y);

  Rng rng(7);
  std::vector<Q> a, b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    a.push_back(random_scalar<Q>(rng));
    b.push_back(random_scalar<Q>(rng));
  }
  const Q s = make_rational(3, 7);
  std::vector<Q> comb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) comb[i] = a[i] + s * b[i];
  const auto ea = et * a, eb = et * b, ec = et * comb;
  for (std::size_t i = 0; i < ec.size(); ++i) EXPECT_EQ(ec[i], ea[i] + s * eb[i]);
}

TEST(Tau, RepresentationOnF) {
  Rng rng(13);
  for (int n = 2; n <= 4; ++n) {
    const auto f = build_F<Q>(n);
    EXPECT_TRUE(check_representation(f.tau).exact_zero);
    for (int t = 0; t < 3; ++t) {
      const auto x = random_bivector<Q>(n, rng);
      const auto v = random_in_F(f, rng);
      const auto img = tau_action(x, v);
      for (const auto& c : epsilon_matrix<Q>(n) * img) EXPECT_EQ(c, 0);
      EXPECT_EQ(f.basis * f.tau(x), f.ambient_rep(x) * f.basis);
    }
  }
  std::vector<Q> outside(2 * 4, Q(0));
  outside[blade_of({1})] = 1;  // e1 (x) e1, eps = -1
  EXPECT_THROW(tau_action(BivectorElem<Q>::basis(2, 1, 2), outside), std::domain_error);
}

TEST(Theta, EquivariantAndNonzeroFromThree) {
  for (int n = 3; n <= 4; ++n) {
    const auto theta = theta_symbol(build_F<Q>(n));
    EXPECT_TRUE(check_equivariance(theta).exact_zero);
    EXPECT_GT(rank(theta.matrix), 0u);
  }
}

TEST(Theta, VanishesInTwoDimensions) {
  const auto f = build_F<Q>(2);
  const auto theta = theta_symbol(f);
  EXPECT_EQ(theta.matrix, Matrix<Q>(4, 8));
  // so(2) weights: tau(e1^e2) has eigenvalues +-3i/2 on F, while on W (x) F
  // they are +-i/2 and +-5i/2, so no equivariant map W (x) F -> F survives.
  const auto x = BivectorElem<Q>::basis(2, 1, 2);
  const auto t = f.tau(x);
  EXPECT_EQ(t * t, Matrix<Q>::identity(4) * make_rational(-9, 4));
  const auto wt = tensor_rep(std_rep_W<Q>(2), f.tau)(x);
  const auto id = Matrix<Q>::identity(8);
  const auto q = (wt * wt + id * make_rational(1, 4)) * (wt * wt + id * make_rational(25, 4));
  EXPECT_TRUE(q.is_zero());
}

TEST(RaritaOperator, WeightAndSplitParts) {
  const auto r3 = verify_rarita<Q>(3);
  ASSERT_TRUE(r3.weight.weight.has_value());
  EXPECT_EQ(*r3.weight.weight, -1);
  EXPECT_EQ(r3.weight.residual, 0);
  const auto r4 = verify_rarita<Q>(4);
  ASSERT_TRUE(r4.weight.weight.has_value());
  EXPECT_EQ(*r4.weight.weight, make_rational(-3, 2));
  for (const auto* r : {&r3, &r4}) {
    EXPECT_FALSE(r->theta_vanishes);
    EXPECT_TRUE(r->exactness.exact_zero);
    EXPECT_TRUE(r->splitting.exact_zero);
    EXPECT_TRUE(r->part_one.exact_zero);
    EXPECT_TRUE(r->part_two.exact_zero);
    EXPECT_TRUE(r->scalar_identity.exact_zero);
  }
  const auto r2 = verify_rarita<Q>(2);
  EXPECT_TRUE(r2.theta_vanishes);
  EXPECT_FALSE(r2.weight.weight.has_value());
  EXPECT_TRUE(r2.scalar_identity.exact_zero);
  EXPECT_TRUE(r2.part_one.exact_zero);
  EXPECT_TRUE(r2.part_two.exact_zero);
}

TEST(RaritaOperator, PartOneIsNotZeroBeforeProjection) {
  // the first part is killed by Pi, not by eps~ alone
  const int n = 3;
  const auto f = build_F<Q>(n);
  const std::size_t d = 8;
  const auto stdw = std_rep_W<Q>(n);
  std::vector<Matrix<Q>> g;
  for (const auto& m : stdw.generators) g.push_back(kron(m, Matrix<Q>::identity(d)));
  const auto one = connection_change_matrix(n, RepAction<Q>{n, n * d, g, "std(x)1"});
  const auto partial = eps_tilde<Q>(n) * (one * kron(Matrix<Q>::identity(n), f.basis));
  EXPECT_FALSE(partial.is_zero());
  EXPECT_TRUE((f.proj * partial).is_zero());
}

TEST(SymmetricPowers, FirstPowerReproducesF) {
  for (int n = 2; n <= 4; ++n) {
    const auto f = build_F<Q>(n);
    const auto fj = build_Fj<Q>(n, 1);
    EXPECT_EQ(fj.space.basis, f.basis);
    EXPECT_EQ(fj.space.proj, f.proj);
    EXPECT_EQ(fj.theta.matrix, theta_symbol(f).matrix);
    for (std::size_t p = 0; p < f.tau.generators.size(); ++p) EXPECT_EQ(fj.space.tau.generators[p], f.tau.generators[p]);
  }
}

TEST(SymmetricPowers, SecondPowerInThreeDimensions) {
  const auto r = build_Fj<Q>(3, 2);
  EXPECT_EQ(r.space.sym_dim, 48u);
  EXPECT_EQ(r.space.dim(), 24u);
  EXPECT_TRUE(r.exactness.exact_zero);
  EXPECT_TRUE(check_representation(r.space.tau).exact_zero);
  EXPECT_TRUE(check_equivariance(r.theta).exact_zero);
  ASSERT_TRUE(r.weight.weight.has_value());
  EXPECT_EQ(*r.weight.weight, -1);
  EXPECT_EQ(r.weight.residual, 0);
  // columns are symmetric under swapping the two W slots
  const std::size_t d = 8;
  for (std::size_t c = 0; c < r.space.dim(); ++c)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t al = 0; al < d; ++al) EXPECT_EQ(r.space.basis((a * 3 + b) * d + al, c), r.space.basis((b * 3 + a) * d + al, c));
}

TEST(SymmetricPowers, Symmetrizer) {
  const auto s = symmetrizer_embedding<Q>(3, 2);
  EXPECT_EQ(s.cols(), 6u);
  EXPECT_EQ(s.rows(), 9u);
  // e1 e2 -> (e1 (x) e2 + e2 (x) e1) / 2
  EXPECT_EQ(s(1, 1), make_rational(1, 2));
  EXPECT_EQ(s(3, 1), make_rational(1, 2));
  EXPECT_EQ(s(0, 0), 1);
  EXPECT_EQ(symmetrizer_embedding<Q>(2, 3).cols(), 4u);
}

TEST(SymmetricPowers, Limits) {
  EXPECT_THROW(build_Fj<Q>(3, 0), std::invalid_argument);
  EXPECT_THROW(build_Fj<Q>(5, 3), ResourceLimit);
}

TEST(RaritaOperator, FloatModeAgrees) {
  const auto r = verify_rarita<double>(4);
  ASSERT_TRUE(r.weight.weight.has_value());
  EXPECT_NEAR(*r.weight.weight, -1.5, 1e-10);
  EXPECT_LT(r.scalar_identity.max_defect, 1e-10);
}
