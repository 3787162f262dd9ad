#include <gtest/gtest.h>

#include <sstream>

#include "mshj/config.hpp"

using namespace mshj;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return RunConfig::parse(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Ini, SectionsCommentsAndWhitespace) {
  std::istringstream in("; header\n[a]\n k = v w \n# note\n\n[b.c]\nx=1\n");
  auto s = parse_ini(in);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].name, "a");
  EXPECT_EQ(*s[0].get("k"), "v w");
  EXPECT_EQ(s[1].name, "b.c");
  EXPECT_EQ(s[1].line, 6);
  EXPECT_EQ(s[1].get("y"), nullptr);
}

TEST(Ini, MalformedInputNamesTheLine) {
  auto fails = [](const char* text, const char* what) {
    std::istringstream in(text);
    try {
      parse_ini(in);
    } catch (const ConfigError& e) {
      return std::string(e.what()).find(what) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails("[a]\nk = 1\nk = 2\n", "line 3"));
  EXPECT_TRUE(fails("[a]\n[a]\n", "duplicate section"));
  EXPECT_TRUE(fails("k = 1\n", "outside"));
  EXPECT_TRUE(fails("[a]\njust words\n", "line 2"));
  EXPECT_TRUE(fails("[a\n", "unterminated"));
}

TEST(RunConfig, FullFile) {
  RunConfig c = parse(R"([model]
builtin = quadratic
[model.params]
m = 2
[candidates.one]
kind = jetfield
psi1_1 = 0
[grid.x1]
lo = 0
hi = 1
count = 4
[run]
tolerance = 1e-6
jobs = 3
policy = skip
[reconstruct]
x0 = 0, 0
u0 = 1
lo = 0, 0
hi = 1, 2
steps = 10
order = 2, 1
[output]
csv = out.csv
)");
  EXPECT_EQ(c.builtin, "quadratic");
  EXPECT_EQ(c.params.at("m"), "2");
  ASSERT_EQ(c.candidates.size(), 1u);
  EXPECT_EQ(c.candidates[0].name, "one");
  EXPECT_EQ(c.candidates[0].kind, "jetfield");
  EXPECT_EQ(c.candidates[0].entries.at("psi1_1"), "0");
  ASSERT_EQ(c.grid.size(), 1u);
  EXPECT_EQ(c.grid[0].count, 4u);
  EXPECT_EQ(c.tolerance, 1e-6);
  EXPECT_EQ(c.jobs, 3u);
  EXPECT_EQ(c.policy, ErrorPolicy::RecordAndSkip);
  ASSERT_TRUE(c.reconstruct);
  EXPECT_EQ(c.reconstruct->hi, (std::vector<double>{1, 2}));
  EXPECT_EQ(c.reconstruct->order, (std::vector<int>{1, 0}));
  EXPECT_EQ(c.reconstruct->steps, 10u);
  EXPECT_EQ(c.csv, "out.csv");
}

TEST(RunConfig, Rejections) {
  EXPECT_NE(error_of("[run]\ntolerance = 1\n"), "");  // no model
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[run]\nspeed = 2\n").find("unknown key"), std::string::npos);
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[candidates.a]\nkind = guess\n").find("unknown kind"), std::string::npos);
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[grid.x1]\nlo = 2\nhi = 1\ncount = 3\n").find("lo > hi"),
            std::string::npos);
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[run]\njobs = 0\n"), "");
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[run]\ntolerance = tiny\n").find("not a number"), std::string::npos);
  EXPECT_NE(error_of("[model]\nlagrangian = v\n[model.params]\nm = 1\n"), "");
  EXPECT_NE(error_of("[model]\nbuiltin = x\n[weird]\n"), "");
  EXPECT_THROW(parse_number_list("1, two", "list"), ConfigError);
  EXPECT_EQ(parse_number_list(" 1, -2.5e1 ", "list"), (std::vector<double>{1, -25}));
}

TEST(ResolveModel, CustomTheoryWithAliasedGrid) {
  RunConfig c = parse(R"([model]
m = 1
n = 1
lagrangian = 0.5*v^2 - 0.5*q^2
[grid.t]
lo = 0
hi = 1
count = 4
[grid.q]
lo = -1
hi = 1
count = 5
)");
  ModelBundle b = resolve_model(c);
  ASSERT_TRUE(b.theory);
  EXPECT_FALSE(b.closed_form);
  EXPECT_EQ(b.grid.axes[0].name, "x1");
  EXPECT_EQ(b.grid.axes[1].name, "u1");
  EXPECT_EQ(b.grid.size(), 20u);
  EXPECT_EQ(b.F.kind(), CoefficientKind::Solved);
  EXPECT_EQ(b.jet_grid.axes.size(), 3u);
  EXPECT_EQ(b.jet_grid.axes[2].name, "v1_1");
}

TEST(ResolveModel, HamiltonianOnlyAndGridErrors) {
  RunConfig h = parse("[model]\nm = 2\nn = 1\nhamiltonian = -sqrt(1-p1_1^2-p1_2^2)\n"
                      "[grid.x1]\nlo=0\nhi=1\ncount=2\n[grid.x2]\nlo=0\nhi=1\ncount=2\n[grid.u1]\nlo=0\nhi=1\ncount=2\n");
  ModelBundle b = resolve_model(h);
  EXPECT_FALSE(b.theory);
  ASSERT_TRUE(b.hamiltonian);
  EXPECT_EQ(b.G.kind(), CoefficientKind::Induced);

  RunConfig missing = parse("[model]\nm = 1\nn = 1\nlagrangian = v^2\n[grid.t]\nlo=0\nhi=1\ncount=2\n");
  EXPECT_THROW(resolve_model(missing), ConfigError);
  RunConfig none = parse("[model]\nm = 1\nn = 1\nlagrangian = v^2\n");
  EXPECT_THROW(resolve_model(none), ConfigError);
  RunConfig builtin_grid = parse("[model]\nbuiltin = nonautonomous\n[grid.t]\nlo=0\nhi=2\ncount=3\n[grid.q]\nlo=0\nhi=1\ncount=2\n");
  EXPECT_EQ(resolve_model(builtin_grid).grid.size(), 6u);
}
