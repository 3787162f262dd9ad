#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "mshj/ham_residuals.hpp"

using namespace mshj;

namespace {

const Dimensions kSurf{2, 1};

std::shared_ptr<const ExplicitHamiltonian> surface_h() {
  return std::make_shared<ExplicitHamiltonian>(kSurf, "-sqrt(1-p1_1^2-p1_2^2)");
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

}  // namespace

TEST(GenHamHJ, InducedCoefficients) {
  // s = (u, 0): R_{j,k} = dH/dp_j ds^k/du, dH/dp = p / sqrt(1 - |p|^2).
  auto h = surface_h();
  FieldPtr s = make_expr_field(kSurf, std::vector<std::string>{"u1", "0"});
  Vector R = gen_ham_hj_residual(*h, *s, HamCoefficients::induced(kSurf), vec({0, 0}), vec({0.6}));
  ASSERT_EQ(R.size(), 4);
  EXPECT_NEAR(R[0], 0.6 / 0.8, 1e-15);
  EXPECT_EQ(R[1], 0.0);
  EXPECT_EQ(R[2], 0.0);
  EXPECT_EQ(R[3], 0.0);
}

TEST(GenHamHJ, ZeroCoefficientsKeepXDerivatives) {
  auto h = surface_h();
  FieldPtr s = make_expr_field(kSurf, std::vector<std::string>{"0.1*x2", "0.1*x1"});
  Vector R = gen_ham_hj_residual(*h, *s, HamCoefficients::zero(kSurf), vec({0.5, 0.5}), vec({0}));
  // flat (B m + j) m + k -> d s^k / dx^j
  EXPECT_EQ(R[0], 0.0);
  EXPECT_DOUBLE_EQ(R[1], 0.1);
  EXPECT_DOUBLE_EQ(R[2], 0.1);
  EXPECT_EQ(R[3], 0.0);
}

TEST(HDW, SolvedCoefficients) {
  ExplicitHamiltonian h({1, 1}, "0.5*p1_1^2 + 0.5*u1^2");
  RestrictedMomentumPoint mp = RestrictedMomentumPoint::zeros({1, 1});
  mp.u << 0.4;
  mp.p << 0.9;
  EXPECT_DOUBLE_EQ(hdw_residual(h, HamCoefficients::zero({1, 1}), mp)[0], 0.4);
  EXPECT_EQ(hdw_residual(h, HamCoefficients::solved({1, 1}), mp)[0], 0.0);
  EXPECT_THROW(HamCoefficients::solved(kSurf), InvalidParams);
}

TEST(Closedness, Families) {
  Dimensions d{1, 2};
  ExplicitHamiltonian h(d, "0.5*(p1_1^2 + p2_1^2)");
  FieldPtr rot = make_expr_field(d, std::vector<std::string>{"u2", "-u1"});
  HamClosedness c = ham_closedness_residual(h, *rot, vec({0}), vec({0.3, 0.5}));
  ASSERT_EQ(c.family2_antisymmetric.size(), 1);
  EXPECT_DOUBLE_EQ(c.family2_antisymmetric[0], 2.0);
  EXPECT_EQ(c.family2.size(), 4);
  // family1[A] = dH/du^A + p_B ds_B/du^A + ds_A/dx: A = 1 -> p2 * (-1) = 0.3.
  EXPECT_DOUBLE_EQ(c.family1[0], 0.3);
  EXPECT_DOUBLE_EQ(c.family1[1], 0.5);
}

TEST(Classic, HarmonicEquation) {
  // W = t u: W_t + H(W_u) = u + 0.5 t^2 + 0.5 u^2
  ExplicitHamiltonian h({1, 1}, "0.5*p1_1^2 + 0.5*u1^2");
  FieldPtr W = make_expr_field({1, 1}, std::vector<std::string>{"x1*u1"});
  EXPECT_DOUBLE_EQ(classic_hj_residual(h, *W, vec({0.4}), vec({0.2})), 0.2 + 0.08 + 0.02);
}

TEST(Classic, SurfaceConstantSolution) {
  auto h = surface_h();
  const double c1 = 0.3, c2 = -0.2, q = std::sqrt(1 - c1 * c1 - c2 * c2);
  FieldPtr W = make_expr_field(kSurf, {Expr::constant(c1) * Expr::variable("u1") + Expr::variable("x1") * Expr::constant(q),
                                       Expr::constant(c2) * Expr::variable("u1")});
  EXPECT_NEAR(classic_hj_residual(*h, *W, vec({0.1, 0.2}), vec({0.3})), 0.0, 1e-15);
}

TEST(Suites, FamilyNamesAndCounts) {
  auto h = surface_h();
  FieldPtr s = make_expr_field(kSurf, std::vector<std::string>{"0.3", "-0.2"});
  HamiltonianCandidate c{s, nullptr, HamCoefficients::induced(kSurf)};
  Vector x = vec({0, 0}), u = vec({0});
  auto gen = hamiltonian_suite(*h, c, Suite::Generalized, x, u);
  ASSERT_EQ(gen.size(), 1u);
  EXPECT_EQ(gen[0].name, "gen_hj");
  EXPECT_EQ(gen[0].values.size(), 4u);
  auto std_suite = hamiltonian_suite(*h, c, Suite::Standard, x, u);
  ASSERT_EQ(std_suite.size(), 3u);
  EXPECT_EQ(std_suite[1].name, "closedness_1");
  EXPECT_EQ(std_suite[2].name, "closedness_2");
  EXPECT_THROW(hamiltonian_suite(*h, c, Suite::Classic, x, u), ConfigError);
  auto co = hamiltonian_suite(*h, c, Suite::Coefficients, x, u);
  EXPECT_EQ(co[0].name, "hdw");
}

TEST(Suites, OneBaseDimensionEmitsNComponents) {
  for (int n = 1; n <= 4; ++n) {
    Dimensions d{1, n};
    std::string H = "0";
    std::vector<std::string> s;
    for (int a = 1; a <= n; ++a) {
      H += "+0.5*p" + std::to_string(a) + "_1^2";
      s.push_back("x1*u" + std::to_string(a));
    }
    auto h = std::make_shared<ExplicitHamiltonian>(d, H);
    HamiltonianCandidate c{make_expr_field(d, s), nullptr, HamCoefficients::solved(d)};
    auto r = hamiltonian_suite(*h, c, Suite::Generalized, Vector::Constant(1, 0.5), Vector::Constant(n, 0.1));
    std::size_t total = 0;
    for (const auto& f : r) total += f.values.size();
    EXPECT_EQ(total, static_cast<std::size_t>(n));
  }
}

TEST(Suites, DomainGuardFailsThePoint) {
  auto h = std::make_shared<ExplicitHamiltonian>(kSurf, "-sqrt(1-p1_1^2-p1_2^2)");
  h->set_guard(Expr::parse("0.95-p1_1^2-p1_2^2"));
  FieldPtr s = make_expr_field(kSurf, std::vector<std::string>{"0.8", "0.7"});
  GridSpec g;
  g.axes = {{"x1", 0, 1, 2}, {"x2", 0, 1, 2}, {"u1", 0, 1, 2}};
  PointEvaluator e = hamiltonian_evaluator(h, {s, nullptr, HamCoefficients::induced(kSurf)}, Suite::Generalized);
  try {
    grid_report(e, g, 1e-9);
    FAIL();
  } catch (const PointFailure& f) {
    EXPECT_FALSE(f.input_error());
    EXPECT_EQ(f.point().size(), 3u);
  }
  SweepOptions skip;
  skip.policy = ErrorPolicy::RecordAndSkip;
  ResidualReport r = grid_report(e, g, 1e-9, skip);
  EXPECT_EQ(r.skipped, 8u);
  EXPECT_FALSE(r.pass);
}
