#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mshj/cli.hpp"

using namespace mshj;

namespace {

std::string data(const char* name) { return std::string(MSHJ_TEST_DATA) + "/" + name; }

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("mshj_") + name)).string();
}

}  // namespace

TEST(Cli, CheckTheoryOnARegularModel) {
  Outcome r = run({"check-theory", "--config", data("surface_flat.ini")});
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_TRUE(contains(r.out, "regularity: regular"));
  EXPECT_TRUE(contains(r.out, "legendre round trip"));
}

TEST(Cli, CheckTheoryRejectsADegenerateLagrangian) {
  Outcome r = run({"check-theory", "--config", data("linear_lagrangian.ini")});
  EXPECT_EQ(r.code, kResidualFailure);
  EXPECT_TRUE(contains(r.out, "NOT regular"));
}

TEST(Cli, VerifyPassingCandidate) {
  Outcome r = run({"verify", "--config", data("surface_flat.ini"), "--mode", "standard"});
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_TRUE(contains(r.out, "PASS"));
  EXPECT_TRUE(contains(r.out, "isotropy_B"));
}

TEST(Cli, VerifyFailingCandidateReportsTheArgmax) {
  Outcome r = run({"verify", "--config", data("surface_tilted.ini"), "--mode", "generalized"});
  EXPECT_EQ(r.code, kResidualFailure);
  EXPECT_TRUE(contains(r.out, "max 1.000e+00"));
  EXPECT_TRUE(contains(r.out, "u1=-1"));
  Outcome q = run({"verify", "--config", data("surface_tilted.ini"), "--mode", "generalized", "--quiet"});
  EXPECT_EQ(q.out, "FAIL 1.000e+00\n");
}

TEST(Cli, VerifyWritesPointwiseCsv) {
  const std::string csv = temp_path("pointwise.csv");
  std::remove(csv.c_str());
  Outcome r = run({"verify", "--config", data("surface_tilted.ini"), "--mode", "generalized", "--csv", csv});
  EXPECT_EQ(r.code, kResidualFailure);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x1,x2,u1,gen_hj");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 125);
}

TEST(Cli, GridScaleRefines) {
  Outcome r = run({"verify", "--config", data("surface_flat.ini"), "--grid-scale", "2", "--jobs", "2"});
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_TRUE(contains(r.out, "729 points"));
}

TEST(Cli, SectionOutsideTheDomainIsANumericalFailure) {
  Outcome r = run({"verify", "--config", data("surface_outside.ini"), "--side", "hamiltonian"});
  EXPECT_EQ(r.code, kNumericalFailure);
  EXPECT_TRUE(contains(r.err, "outside the Hamiltonian domain"));
}

TEST(Cli, InputErrors) {
  Outcome bad = run({"verify", "--config", data("bad_expression.ini")});
  EXPECT_EQ(bad.code, kInputError);
  EXPECT_TRUE(contains(bad.err, "byte 4"));
  EXPECT_EQ(run({"equivalence", "--config", data("section_only.ini")}).code, kInputError);
  EXPECT_EQ(run({"verify", "--config", data("does_not_exist.ini")}).code, kInputError);
  EXPECT_EQ(run({"verify"}).code, kInputError);
  EXPECT_EQ(run({"verify", "--config", data("surface_flat.ini"), "--mode", "loose"}).code, kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, kInputError);
  EXPECT_EQ(run({"verify", "--config", data("surface_flat.ini"), "--candidate", "nope"}).code, kInputError);
  EXPECT_EQ(run({"verify", "--config", data("surface_flat.ini"), "--tol", "-1"}).code, kInputError);
  // reconstruct without a [reconstruct] section
  EXPECT_EQ(run({"reconstruct", "--config", data("surface_flat.ini")}).code, kInputError);
}

TEST(Cli, HelpExitsCleanly) {
  Outcome r = run({"--help"});
  EXPECT_EQ(r.code, kPass);
  EXPECT_TRUE(contains(r.out, "check-theory"));
}

TEST(Cli, ClassicSuitesAndEquivalence) {
  EXPECT_EQ(run({"verify", "--config", data("free_particle.ini"), "--mode", "classic"}).code, kPass);
  EXPECT_EQ(run({"verify", "--config", data("free_particle.ini"), "--side", "hamiltonian", "--mode", "classic"}).code,
            kPass);
  Outcome e = run({"equivalence", "--config", data("free_particle.ini")});
  EXPECT_EQ(e.code, kPass) << e.err;
  EXPECT_TRUE(contains(e.out, "verdict: pass-pass"));
  // Without a generating function the classic suite is an input error.
  EXPECT_EQ(run({"verify", "--config", data("surface_flat.ini"), "--mode", "classic"}).code, kInputError);
}

TEST(Cli, EquivalenceOfAFailingField) {
  Outcome r = run({"equivalence", "--config", data("surface_tilted.ini"), "--quiet"});
  EXPECT_EQ(r.code, kResidualFailure);
  EXPECT_EQ(r.out, "verdict: fail-fail\n");
}

TEST(Cli, ReconstructWritesTheTrace) {
  const std::string csv = temp_path("trace.csv");
  std::remove(csv.c_str());
  Outcome r = run({"reconstruct", "--config", data("plane_reconstruct.ini"), "--csv", csv});
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_TRUE(contains(r.out, "441 nodes"));
  std::ifstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "x1,x2,u1");
  int rows = 1;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 441);
}

TEST(Cli, CompleteFamily) {
  Outcome r = run({"complete", "--config", data("oscillator_energy.ini")});
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_TRUE(contains(r.out, "slices: 7/7"));
  EXPECT_TRUE(contains(r.out, "coverage: 100/100"));
}
