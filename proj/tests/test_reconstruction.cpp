#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mshj/reconstruction.hpp"

using namespace mshj;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

GridSpec unit_box(int m, std::size_t steps) {
  std::vector<double> lo(m, 0.0), hi(m, 1.0);
  return make_box(lo, hi, steps);
}

}  // namespace

TEST(Integrate, ExponentialAlongOneAxis) {
  // psi = (u, 0): phi = u0 exp(x1 - x1_0), independent of x2.
  Dimensions d{2, 1};
  FieldPtr psi = make_expr_field(d, std::vector<std::string>{"u1", "0"});
  GridSpec box = unit_box(2, 20);
  std::vector<double> x0{0.0, 0.0};
  SectionTrace t = integrate_distribution(*psi, box, x0, vec({0.5}));
  EXPECT_EQ(t.nodes(), 21u * 21u);
  std::vector<double> x(2);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.nodes(); ++k) {
    box.point(k, x);
    worst = std::max(worst, std::abs(t.values(k, 0) - 0.5 * std::exp(x[0])));
  }
  EXPECT_LT(worst, 1e-7);
  PathIndependence p = path_independence_check(*psi, box, x0, vec({0.5}), 1e-6);
  EXPECT_TRUE(p.pass);
  EXPECT_LT(p.discrepancy, 1e-12);
  EXPECT_LT(holonomy_residual(t, *psi).max_abs, 1e-3);
}

TEST(Integrate, NonInvolutiveFieldDependsOnTheOrder) {
  // psi = (u, x1): d_2 psi_1 + psi_2 d_u psi_1 = x1 but d_1 psi_2 + psi_1 d_u psi_2 = 1.
  Dimensions d{2, 1};
  FieldPtr psi = make_expr_field(d, std::vector<std::string>{"u1", "x1"});
  GridSpec box = unit_box(2, 20);
  std::vector<double> x0{0.0, 0.0};
  PathIndependence p = path_independence_check(*psi, box, x0, vec({0.0}), 1e-6);
  EXPECT_FALSE(p.pass);
  // From u0 = 0: along x1 then x2 gives phi = x1 x2, along x2 then x1 keeps phi = 0.
  EXPECT_NEAR(p.discrepancy, 1.0, 1e-9);
  ASSERT_EQ(p.argmax.size(), 2u);
  EXPECT_DOUBLE_EQ(p.argmax[0], 1.0);
  EXPECT_DOUBLE_EQ(p.argmax[1], 1.0);
}

TEST(Integrate, RK4ConvergesAtFourthOrder) {
  // psi = (u2, -u1) with u0 = (0, 1): phi = (sin t, cos t).
  Dimensions d{1, 2};
  FieldPtr psi = make_expr_field(d, std::vector<std::string>{"u2", "-u1"});
  std::vector<double> x0{0.0};
  auto error = [&](std::size_t steps) {
    std::vector<double> lo{0.0}, hi{2.0};
    GridSpec box = make_box(lo, hi, steps);
    SectionTrace t = integrate_distribution(*psi, box, x0, vec({0.0, 1.0}));
    const auto end = static_cast<Eigen::Index>(steps);
    return std::hypot(t.values(end, 0) - std::sin(2.0), t.values(end, 1) - std::cos(2.0));
  };
  double coarse = error(20), fine = error(40);
  EXPECT_NEAR(coarse / fine, 16.0, 1.5);
}

TEST(Integrate, OrderAndStartValidation) {
  Dimensions d{2, 1};
  FieldPtr psi = make_expr_field(d, std::vector<std::string>{"u1", "0"});
  GridSpec box = unit_box(2, 4);
  std::vector<double> off{0.1, 0.0};
  EXPECT_THROW(integrate_distribution(*psi, box, off, vec({1.0})), InvalidParams);
  std::vector<double> x0{0.5, 0.5};
  EXPECT_THROW(integrate_distribution(*psi, box, x0, vec({1.0}), {0, 0}), InvalidParams);
  SectionTrace t = integrate_distribution(*psi, box, x0, vec({1.0}), {1, 0});
  EXPECT_EQ(t.order, (std::vector<int>{1, 0}));
  std::vector<double> x0_1d{0.0};
  FieldPtr line = make_expr_field({1, 1}, std::vector<std::string>{"u1"});
  std::vector<double> lo{0.0}, hi{1.0};
  EXPECT_THROW(path_independence_check(*line, make_box(lo, hi, 4), x0_1d, vec({1.0}), 1e-6), InvalidParams);
}

TEST(Integrate, BlowUpIsReported) {
  // u' = u^2, u(0) = 1 blows up at t = 1.
  FieldPtr psi = make_expr_field({1, 1}, std::vector<std::string>{"u1^2"});
  std::vector<double> lo{0.0}, hi{2.0}, x0{0.0};
  EXPECT_THROW(integrate_distribution(*psi, make_box(lo, hi, 200), x0, vec({1.0})), BlowUp);
}

TEST(Residuals, PlaneIsAMinimalSurface) {
  Dimensions d{2, 1};
  FieldTheory th(d, "sqrt(1+v1_1^2+v1_2^2)");
  GridSpec box = unit_box(2, 10);
  SectionTrace plane = sample_section(d, box, [](const Vector& x) { return vec({0.3 * x[0] - 0.7 * x[1] + 1}); });
  TraceResidual r = el_section_residual(th, plane);
  EXPECT_LT(r.max_abs, 1e-12);
  EXPECT_EQ(r.points, 9u * 9u);
  EXPECT_TRUE(std::isnan(r.pointwise[0]));
  // A paraboloid is not: EL = -Laplacian at the origin-ish, magnitude about 2.
  SectionTrace bowl = sample_section(d, box, [](const Vector& x) { return vec({x[0] * x[0] + x[1] * x[1]}); });
  EXPECT_GT(el_section_residual(th, bowl).max_abs, 0.1);
}

TEST(Residuals, HolonomyFlagsAWrongSection) {
  Dimensions d{1, 1};
  FieldPtr psi = make_expr_field(d, std::vector<std::string>{"1"});
  std::vector<double> lo{0.0}, hi{1.0};
  GridSpec box = make_box(lo, hi, 10);
  SectionTrace good = sample_section(d, box, [](const Vector& x) { return vec({x[0]}); });
  SectionTrace bad = sample_section(d, box, [](const Vector& x) { return vec({2 * x[0]}); });
  EXPECT_LT(holonomy_residual(good, *psi).max_abs, 1e-12);
  EXPECT_NEAR(holonomy_residual(bad, *psi).max_abs, 1.0, 1e-12);
}

TEST(Trace, CsvHasOneRowPerNode) {
  Dimensions d{2, 1};
  GridSpec box = unit_box(2, 2);
  SectionTrace t = sample_section(d, box, [](const Vector& x) { return vec({x[0] + x[1]}); });
  std::ostringstream os;
  t.write_csv(os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x1,x2,u1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
}
