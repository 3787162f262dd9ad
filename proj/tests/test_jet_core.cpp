#include <gtest/gtest.h>

#include <cmath>

#include "mshj/jet_core.hpp"

using namespace mshj;

TEST(Names, CoordinateNaming) {
  EXPECT_EQ(x_name(0), "x1");
  EXPECT_EQ(u_name(1), "u2");
  EXPECT_EQ(v_name(0, 1), "v1_2");
  EXPECT_EQ(p_name(1, 0), "p2_1");
  Dimensions d{2, 1};
  EXPECT_EQ(jet_slots(d), (std::vector<std::string>{"x1", "x2", "u1", "v1_1", "v1_2"}));
  EXPECT_EQ(momentum_slots(d), (std::vector<std::string>{"x1", "x2", "u1", "p1_1", "p1_2"}));
  EXPECT_EQ(d.flat(0, 1), 1);
}

TEST(Names, AliasesDependOnDimensions) {
  Dimensions mech{1, 1};
  auto slots = jet_slots(mech);
  EXPECT_EQ(parse_in("0.5*v^2 - q*t", mech, slots).str(), "0.5*v1_1^2-u1*x1");
  Dimensions surf{2, 1};
  auto base = base_slots(surf);
  EXPECT_EQ(parse_in("x*y + u", surf, base).str(), "x1*x2+u1");
  EXPECT_THROW(parse_in("t", surf, base), ConfigError);
  EXPECT_THROW(parse_in("v1_1", surf, base), ConfigError);
  Dimensions two{1, 2};
  EXPECT_THROW(parse_in("q", two, base_slots(two)), ConfigError);
}

TEST(FieldTheory, MinimalSurfaceJetMatchesClosedForm) {
  FieldTheory th({2, 1}, "sqrt(1+v1_1^2+v1_2^2)");
  JetPoint pt = JetPoint::zeros({2, 1});
  pt.v << 0.4, -0.3;
  const double a = 0.4, b = -0.3, r = std::sqrt(1 + a * a + b * b);
  LagrangianJet j = th.jet(pt, 2);
  EXPECT_NEAR(j.value, r, 1e-15);
  EXPECT_NEAR(j.dv[0], a / r, 1e-15);
  EXPECT_NEAR(j.dv[1], b / r, 1e-15);
  // d2L/dv dv = (I r^2 - v v^T) / r^3
  EXPECT_NEAR(j.vv(0, 0), (r * r - a * a) / (r * r * r), 1e-15);
  EXPECT_NEAR(j.vv(0, 1), -a * b / (r * r * r), 1e-15);
  EXPECT_EQ(j.vv(0, 1), j.vv(1, 0));
  EXPECT_EQ(j.vx.norm(), 0.0);
  EXPECT_EQ(j.vu.norm(), 0.0);
  EXPECT_EQ(hessian(th, pt), j.vv);
}

TEST(FieldTheory, MixedBlocksAlphaMajor) {
  // L = x1 v1_2 u2 + v2_1^2 x2: vx and vu blocks in alpha-major rows.
  Dimensions d{2, 2};
  FieldTheory th(d, "x1*v1_2*u2 + v2_1^2*x2");
  JetPoint pt = JetPoint::zeros(d);
  pt.x << 0.5, 2.0;
  pt.u << 0.0, 3.0;
  pt.v << 0.0, 0.0, 1.5, 0.0;
  LagrangianJet j = th.jet(pt, 2);
  EXPECT_DOUBLE_EQ(j.vx(1, 0), 3.0);  // d2/dv1_2 dx1 = u2
  EXPECT_DOUBLE_EQ(j.vu(1, 1), 0.5);  // d2/dv1_2 du2 = x1
  EXPECT_DOUBLE_EQ(j.vx(2, 1), 3.0);  // d2/dv2_1 dx2 = 2 v2_1
  EXPECT_DOUBLE_EQ(j.vv(2, 2), 4.0);
}

TEST(Grid, RowMajorEnumeration) {
  GridSpec g;
  g.axes = {{"x1", 0, 1, 3}, {"u1", -1, 1, 2}};
  EXPECT_EQ(g.size(), 6u);
  std::vector<double> p(2);
  g.point(0, p);
  EXPECT_EQ(p, (std::vector<double>{0, -1}));
  g.point(1, p);
  EXPECT_EQ(p, (std::vector<double>{0, 1}));
  g.point(5, p);
  EXPECT_EQ(p, (std::vector<double>{1, 1}));
  EXPECT_EQ(grid_points(g).size(), 6u);
  Axis single{"x", 2, 4, 1};
  EXPECT_EQ(single.at(0), 3.0);
}

TEST(Grid, CapAndValidation) {
  GridSpec g;
  g.axes = {{"a", 0, 1, 5000}, {"b", 0, 1, 5000}};
  EXPECT_THROW(g.size(), CapExceeded);
  g.cap = 30'000'000;
  EXPECT_EQ(g.size(), 25'000'000u);
  GridSpec bad;
  bad.axes = {{"a", 1, 0, 3}};
  EXPECT_THROW(bad.validate(), InvalidParams);
}

TEST(Grid, ScalingRefinesKeepingNodes) {
  GridSpec g;
  g.axes = {{"x1", 0, 1, 3}, {"u1", 0, 0, 1}};
  GridSpec s = g.scaled(2);
  EXPECT_EQ(s.axes[0].count, 5u);
  EXPECT_EQ(s.axes[1].count, 1u);
  EXPECT_EQ(s.axes[0].at(2), g.axes[0].at(1));
}

TEST(Regularity, DetectsDegenerateLagrangian) {
  GridSpec g;
  g.axes = {{"x1", 0, 1, 2}, {"u1", 0, 1, 2}, {"v1_1", -1, 1, 5}};
  RegularityReport bad = regularity_check(FieldTheory({1, 1}, "v1_1"), g, 1e-8);
  EXPECT_FALSE(bad.regular);
  EXPECT_EQ(bad.min_abs_det, 0.0);
  RegularityReport ok = regularity_check(FieldTheory({1, 1}, "0.5*v1_1^2 + x1*u1"), g, 1e-8);
  EXPECT_TRUE(ok.regular);
  EXPECT_DOUBLE_EQ(ok.min_abs_det, 1.0);
  EXPECT_EQ(ok.points, 20u);
}

TEST(Regularity, MinimalSurfaceDeterminant) {
  // det = (1 + |v|^2)^-2 for n = 1, m = 2; smallest at the grid corner.
  GridSpec g;
  g.axes = {{"x1", 0, 0, 1}, {"x2", 0, 0, 1}, {"u1", 0, 0, 1}, {"v1_1", -2, 2, 5}, {"v1_2", -2, 2, 5}};
  RegularityReport r = regularity_check(FieldTheory({2, 1}, "sqrt(1+v1_1^2+v1_2^2)"), g, 1e-8);
  EXPECT_TRUE(r.regular);
  EXPECT_NEAR(r.min_abs_det, 1.0 / 81.0, 1e-15);
  EXPECT_EQ(std::abs(r.argmin[3]), 2.0);
}
