#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "mshj/lag_residuals.hpp"

using namespace mshj;

namespace {

const Dimensions kSurf{2, 1};

std::shared_ptr<const FieldTheory> surface() {
  return std::make_shared<FieldTheory>(kSurf, "sqrt(1+v1_1^2+v1_2^2)");
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

std::vector<std::string> names(const PointResiduals& r) {
  std::vector<std::string> out;
  for (const auto& f : r) out.push_back(f.name);
  return out;
}

}  // namespace

TEST(GenLagHJ, InducedCoefficientsLeaveTransport) {
  // psi = (u, 0) with F = d psi/dx: R_{j,k} = psi_j d psi_k / du.
  auto th = surface();
  FieldPtr psi = make_expr_field(kSurf, std::vector<std::string>{"u1", "0"});
  Vector R = gen_lag_hj_residual(*th, *psi, LagCoefficients::induced(kSurf), vec({0.2, -0.5}), vec({0.7}));
  ASSERT_EQ(R.size(), 4);
  EXPECT_DOUBLE_EQ(R[0], 0.7);
  EXPECT_EQ(R[1], 0.0);
  EXPECT_EQ(R[2], 0.0);
  EXPECT_EQ(R[3], 0.0);
}

TEST(GenLagHJ, ZeroCoefficientsKeepXDerivatives) {
  // psi = (0.1 y, 0.1 x), F = 0: R_{j,k} = d psi_k / dx^j.
  auto th = surface();
  FieldPtr psi = make_expr_field(kSurf, std::vector<std::string>{"0.1*x2", "0.1*x1"});
  Vector R = gen_lag_hj_residual(*th, *psi, LagCoefficients::zero(kSurf), vec({0.3, 0.4}), vec({0.0}));
  EXPECT_EQ(R[0], 0.0);
  EXPECT_DOUBLE_EQ(R[1], 0.1);  // j = 1, k = 2
  EXPECT_DOUBLE_EQ(R[2], 0.1);  // j = 2, k = 1
  EXPECT_EQ(R[3], 0.0);
}

TEST(GenLagHJ, ExplicitCoefficientsAreEvaluatedOnTheImage) {
  // F_{j,k} = v1_k: equal to the psi itself, so R = -psi for a constant psi.
  auto th = surface();
  std::vector<Expr> F{Expr::parse("v1_1"), Expr::parse("v1_2"), Expr::parse("v1_1"), Expr::parse("v1_2")};
  FieldPtr psi = make_expr_field(kSurf, std::vector<std::string>{"0.3", "-0.2"});
  Vector R = gen_lag_hj_residual(*th, *psi, LagCoefficients::expressions(kSurf, F), vec({0, 0}), vec({0}));
  EXPECT_DOUBLE_EQ(R[0], -0.3);
  EXPECT_DOUBLE_EQ(R[1], 0.2);
}

TEST(ELCoefficients, SolvedCoefficientsSatisfyEL) {
  // Harmonic oscillator: L = v^2/2 - q^2/2, EL: -q - F = 0.
  FieldTheory th({1, 1}, "0.5*v1_1^2 - 0.5*u1^2");
  JetPoint pt = JetPoint::zeros({1, 1});
  pt.u << 0.8;
  pt.v << 0.3;
  EXPECT_DOUBLE_EQ(el_coefficient_residual(th, LagCoefficients::zero({1, 1}), pt)[0], -0.8);
  EXPECT_NEAR(el_coefficient_residual(th, LagCoefficients::solved({1, 1}), pt)[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(LagCoefficients::solved({1, 1}).values(th, pt, nullptr)[0], -0.8);
  EXPECT_THROW(LagCoefficients::solved(kSurf), InvalidParams);
}

TEST(ELCoefficients, IndexPlacementForTwoBaseDimensions) {
  // At v = 0 the minimal-surface Hessian is the identity: R = -(F_{1,1} + F_{2,2}).
  auto th = surface();
  std::vector<Expr> F{Expr::constant(2), Expr::constant(5), Expr::constant(7), Expr::constant(3)};
  JetPoint pt = JetPoint::zeros(kSurf);
  EXPECT_DOUBLE_EQ(el_coefficient_residual(*th, LagCoefficients::expressions(kSurf, F), pt)[0], -5.0);
}

TEST(Isotropy, HarmonicFlowPullbackVanishes) {
  FieldTheory th({1, 1}, "0.5*v1_1^2 - 0.5*u1^2");
  FieldPtr psi = make_expr_field({1, 1}, std::vector<std::string>{"sqrt(2-u1^2)"});
  LagIsotropy iso = lag_isotropy_residual(th, *psi, vec({0.4}), vec({0.6}));
  EXPECT_EQ(iso.a_antisymmetric.size(), 0);
  EXPECT_NEAR(iso.b_pullback[0], 0.0, 1e-15);
  // The combined form keeps -dL/du = q.
  EXPECT_NEAR(iso.b_combined[0], 0.6, 1e-15);
}

TEST(Isotropy, AntisymmetricFamilyDetectsCurl) {
  Dimensions d{1, 2};
  FieldTheory th(d, "0.5*(v1_1^2 + v2_1^2)");
  FieldPtr rot = make_expr_field(d, std::vector<std::string>{"u2", "-u1"});
  FieldPtr grad = make_expr_field(d, std::vector<std::string>{"u1", "u2"});
  LagIsotropy a = lag_isotropy_residual(th, *rot, vec({0}), vec({0.1, 0.2}));
  ASSERT_EQ(a.a_antisymmetric.size(), 1);
  EXPECT_DOUBLE_EQ(a.a_antisymmetric[0], 2.0);
  EXPECT_EQ(a.a_full.size(), 4);
  LagIsotropy b = lag_isotropy_residual(th, *grad, vec({0}), vec({0.1, 0.2}));
  EXPECT_EQ(b.a_antisymmetric[0], 0.0);
}

TEST(Generating, FreeParticle) {
  FieldTheory th({1, 1}, "0.5*v1_1^2");
  FieldPtr psi = make_expr_field({1, 1}, std::vector<std::string>{"1"});
  FieldPtr good = make_expr_field({1, 1}, std::vector<std::string>{"u1 - 0.5*x1"});
  FieldPtr bad = make_expr_field({1, 1}, std::vector<std::string>{"u1"});
  LagGenerating g = lag_generating_residual(th, *psi, *good, vec({0.3}), vec({0.2}));
  EXPECT_EQ(g.scalar, 0.0);
  EXPECT_EQ(g.momentum[0], 0.0);
  LagGenerating b = lag_generating_residual(th, *psi, *bad, vec({0.3}), vec({0.2}));
  EXPECT_DOUBLE_EQ(b.scalar, 0.5);
  EXPECT_EQ(b.momentum[0], 0.0);
}

TEST(Integrability, CountsAndAntisymmetry) {
  auto th = surface();
  std::vector<Expr> F{Expr::constant(0), Expr::parse("x2"), Expr::constant(0), Expr::constant(0)};
  JetPoint pt = JetPoint::zeros(kSurf);
  pt.x << 0.1, 0.25;
  LagIntegrability in = integrability_residual_lag(LagCoefficients::expressions(kSurf, F), *th, pt);
  ASSERT_EQ(in.antisymmetry.values.size(), 1);
  EXPECT_DOUBLE_EQ(in.antisymmetry.values[0], 0.25);
  EXPECT_EQ(in.bracket.values.size(), 2);
  EXPECT_EQ(in.antisymmetry.labels.size(), 1u);
  // m = 1 has nothing to integrate.
  FieldTheory mech({1, 1}, "0.5*v1_1^2");
  LagIntegrability none = integrability_residual_lag(LagCoefficients::zero({1, 1}), mech, JetPoint::zeros({1, 1}));
  EXPECT_EQ(none.antisymmetry.values.size(), 0);
  EXPECT_EQ(none.bracket.values.size(), 0);
}

TEST(Suites, FamilyNames) {
  auto th = surface();
  FieldPtr psi = make_expr_field(kSurf, std::vector<std::string>{"0.3", "-0.2"});
  FieldPtr W = make_expr_field(kSurf, std::vector<std::string>{"u1", "0"});
  LagrangianCandidate c{psi, W, LagCoefficients::induced(kSurf)};
  Vector x = vec({0, 0}), u = vec({0});
  EXPECT_EQ(names(lagrangian_suite(*th, c, Suite::Generalized, x, u)), (std::vector<std::string>{"gen_hj"}));
  EXPECT_EQ(names(lagrangian_suite(*th, c, Suite::Standard, x, u)),
            (std::vector<std::string>{"gen_hj", "isotropy_A", "isotropy_B"}));
  EXPECT_EQ(names(lagrangian_suite(*th, c, Suite::Classic, x, u)),
            (std::vector<std::string>{"hj_scalar", "momentum_match"}));
  EXPECT_EQ(names(lagrangian_suite(*th, c, Suite::Coefficients, x, u)),
            (std::vector<std::string>{"el", "integrability_antisym", "integrability_bracket"}));
  LagrangianCandidate no_w{psi, nullptr, LagCoefficients::induced(kSurf)};
  EXPECT_THROW(lagrangian_suite(*th, no_w, Suite::Classic, x, u), ConfigError);
}

TEST(Suites, WrongComponentCountIsAnInputError) {
  auto th = surface();
  FieldPtr psi = make_expr_field({1, 1}, std::vector<std::string>{"0.3"});
  EXPECT_THROW(gen_lag_hj_residual(*th, *psi, LagCoefficients::induced(kSurf), vec({0, 0}), vec({0})), InputError);
}

TEST(Suites, EvaluatorOnGrid) {
  auto th = surface();
  FieldPtr psi = make_expr_field(kSurf, std::vector<std::string>{"u1", "0"});
  GridSpec g;
  g.axes = {{"x1", -1, 1, 3}, {"x2", -1, 1, 3}, {"u1", -1, 1, 5}};
  ResidualReport r = grid_report(lagrangian_evaluator(th, {psi, nullptr, LagCoefficients::induced(kSurf)}, Suite::Generalized), g, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.max_abs(), 1.0);
  EXPECT_EQ(std::abs(r.families[0].argmax[2]), 1.0);
}
