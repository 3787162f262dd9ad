#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "mshj/legendre.hpp"

using namespace mshj;

namespace {

std::shared_ptr<const FieldTheory> minimal_surface() {
  return std::make_shared<FieldTheory>(Dimensions{2, 1}, "sqrt(1+v1_1^2+v1_2^2)");
}

RestrictedMomentumPoint momentum(Dimensions d, std::initializer_list<double> p) {
  RestrictedMomentumPoint mp = RestrictedMomentumPoint::zeros(d);
  auto it = p.begin();
  for (int a = 0; a < d.n; ++a)
    for (int i = 0; i < d.m; ++i) mp.p(a, i) = *it++;
  return mp;
}

}  // namespace

TEST(Legendre, RestrictedAndExtendedMinimalSurface) {
  auto th = minimal_surface();
  JetPoint pt = JetPoint::zeros({2, 1});
  pt.v << 1.0, 2.0;
  const double r = std::sqrt(6.0);
  ExtendedMomentumPoint e = extended_legendre(*th, pt);
  EXPECT_NEAR(e.restricted.p(0, 0), 1 / r, 1e-15);
  EXPECT_NEAR(e.restricted.p(0, 1), 2 / r, 1e-15);
  // p0 = L - v dL/dv = r - 5/r = 1/r
  EXPECT_NEAR(e.p0, 1 / r, 1e-15);
  ExplicitHamiltonian h({2, 1}, "-sqrt(1-p1_1^2-p1_2^2)");
  EXPECT_NEAR(e.p0 + hamiltonian(h, e.restricted), 0.0, 1e-15);
}

TEST(Legendre, RoundTripRandomJets) {
  auto th = std::make_shared<FieldTheory>(Dimensions{2, 2}, "sqrt(1+v1_1^2+v1_2^2) + 0.5*(v2_1^2+v2_2^2) + v1_1*v2_2*0.1 + x1*u2");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    JetPoint pt = JetPoint::zeros({2, 2});
    pt.x << unit(rng), unit(rng);
    pt.u << unit(rng), unit(rng);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 2; ++i) pt.v(a, i) = 1.5 * unit(rng);
    LegendreSolve s = solve_legendre(*th, restricted_legendre(*th, pt));
    EXPECT_LT((s.point.v - pt.v).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE(s.residual, 1e-12);
    EXPECT_EQ(s.point.x, pt.x);
  }
}

TEST(Legendre, ProvidedInitialGuessIsUsed) {
  auto th = minimal_surface();
  NewtonSettings s;
  s.initial = NewtonSettings::Initial::Provided;
  s.guess = Matrix(1, 2);
  s.guess << 0.1, 0.2;
  JetPoint pt = JetPoint::zeros({2, 1});
  pt.v << 0.1, 0.2;
  LegendreSolve r = solve_legendre(*th, restricted_legendre(*th, pt), s);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Legendre, Failures) {
  FieldTheory linear({1, 1}, "v1_1");
  EXPECT_THROW(inverse_legendre(linear, momentum({1, 1}, {0.5})), SingularJacobian);
  // |p| >= 1 has no preimage for the minimal surface.
  auto th = minimal_surface();
  EXPECT_THROW(inverse_legendre(*th, momentum({2, 1}, {0.8, 0.7})), OutOfDomain);
  NewtonSettings one;
  one.max_iter = 1;
  EXPECT_THROW(inverse_legendre(*th, momentum({2, 1}, {0.6, 0.3}), one), NonConvergence);
}

TEST(Hamiltonian, DerivedMatchesClosedFormWithDerivatives) {
  auto th = minimal_surface();
  DerivedHamiltonian dh(th);
  ExplicitHamiltonian eh({2, 1}, "-sqrt(1-p1_1^2-p1_2^2)");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-0.6, 0.6);
  for (int k = 0; k < 200; ++k) {
    RestrictedMomentumPoint mp = momentum({2, 1}, {unit(rng), unit(rng)});
    HamiltonianJet a = dh.jet(mp, 2), b = eh.jet(mp, 2);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    EXPECT_LT((a.dp - b.dp).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LT((a.pp - b.pp).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_EQ(a.px.norm(), 0.0);
  }
}

TEST(Hamiltonian, DerivedIdentitiesForCoordinateDependentL) {
  // L = 0.5 v^2 + x v u - u^2: v = p - x u, H = 0.5 (p - x u)^2 + u^2
  auto th = std::make_shared<FieldTheory>(Dimensions{1, 1}, "0.5*v^2 + t*v*q - q^2");
  DerivedHamiltonian dh(th);
  ExplicitHamiltonian eh({1, 1}, "0.5*(p1_1-x1*u1)^2 + u1^2");
  RestrictedMomentumPoint mp = momentum({1, 1}, {0.7});
  mp.x << 0.3;
  mp.u << -1.2;
  HamiltonianJet a = dh.jet(mp, 2), b = eh.jet(mp, 2);
  EXPECT_NEAR(a.value, b.value, 1e-13);
  EXPECT_NEAR(a.dx[0], b.dx[0], 1e-13);
  EXPECT_NEAR(a.du[0], b.du[0], 1e-13);
  EXPECT_NEAR(a.dp[0], b.dp[0], 1e-13);
  EXPECT_NEAR(a.px(0, 0), b.px(0, 0), 1e-13);
  EXPECT_NEAR(a.pu(0, 0), b.pu(0, 0), 1e-13);
}

TEST(Hamiltonian, GuardRejectsMomentaOutsideDomain) {
  ExplicitHamiltonian h({2, 1}, "-sqrt(1-p1_1^2-p1_2^2)");
  h.set_guard(Expr::parse("0.95-p1_1^2-p1_2^2"));
  EXPECT_NO_THROW(hamiltonian(h, momentum({2, 1}, {0.5, 0.5})));
  EXPECT_THROW(hamiltonian(h, momentum({2, 1}, {0.8, 0.6})), OutOfDomain);
  ExplicitHamiltonian raw({2, 1}, "-sqrt(1-p1_1^2-p1_2^2)");
  EXPECT_THROW(hamiltonian(raw, momentum({2, 1}, {0.8, 0.7})), DomainError);
}
