#include "heavenly/cli.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <sstream>

using namespace heavenly;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST(Cli, VerifyCubicPpWave) {
  Outcome r = run({"verify", "--system", "ppwave", "--key", "(4*y-w^2)^(3/2)", "--json"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  Json j = r.json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "verify");
}

TEST(Cli, VerifyCatalogExample) {
  Outcome r = run({"verify", "--example", "iheav_exp", "--json"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("ihirota4"), std::string::npos);
}

TEST(Cli, VerifyNonSolutionFails) {
  Outcome r = run({"verify", "--system", "heav4", "--key", "x1*x2 + x3^2*x4^2", "--lambdas", "0,1,2,3", "--json"});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_NE(r.out.find("max_abs"), std::string::npos);
  // the product of all four coordinates is a genuine solution
  EXPECT_EQ(run({"verify", "--system", "heav4", "--key", "x1*x2*x3*x4", "--lambdas", "0,1,2,3"}).code, kExitOk);
}

TEST(Cli, InvariantsAtDisplayPoint) {
  Outcome r = run({"invariants", "--example", "ppwave_cubic", "--phi", "z", "--at", "Z=1,kappa=1,mu=0.3,x=0", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = r.json();
  std::string dump = j.dump();
  double I = 0, J = 0;
  std::function<void(const Json&)> scan = [&](const Json& n) {
    if (n.is_object()) {
      if (n.contains("I") && n["I"].is_number() && I == 0) I = n["I"].get<double>();
      if (n.contains("J") && n["J"].is_number() && J == 0) J = n["J"].get<double>();
      for (const auto& [k, v] : n.items()) scan(v);
    }
  };
  scan(j);
  EXPECT_NEAR(I, 0.2211840, 1e-6);
  EXPECT_NEAR(J, -0.0424673, 1e-6);
  EXPECT_NE(dump.find("special"), std::string::npos);
}

TEST(Cli, InvariantsQuadraticTwistVanish) {
  Outcome r = run({"invariants", "--example", "ppwave_cubic", "--phi", "z^2", "--points", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("I = J = 0"), std::string::npos) << r.out;
}

TEST(Cli, InvariantsFlatTwist) {
  Outcome r = run({"invariants", "--example", "flat_II", "--phi", "z^2", "--points", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("flat"), std::string::npos) << r.out;
}

TEST(Cli, ReportFilteredByFramework) {
  Outcome r = run({"report", "--framework", "II", "--points", "20", "--json"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  Json j = r.json();
  EXPECT_EQ(j["command"], "report");
  EXPECT_EQ(r.out.find("iheav_exp"), std::string::npos);
  EXPECT_NE(r.out.find("ppwave_cubic"), std::string::npos);
}

TEST(Cli, TightToleranceListsResiduals) {
  Outcome r = run({"report", "--framework", "I", "--points", "20", "--tol", "1e-30", "--json"});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_NE(r.out.find("residual"), std::string::npos);
}

TEST(Cli, Deterministic) {
  std::vector<std::string> args{"catalog", "--example", "twist_cubic_z", "--points", "10", "--json"};
  Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--system", "nope", "--key", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--system", "pleb2", "--key", "x +* y"}).code, kExitUsage);
  Outcome g = run({"invariants", "--example", "ppwave_cubic", "--at", "x=0,y=0.01,z=1,w=0.5"});
  EXPECT_EQ(g.code, kExitUsage);
  EXPECT_FALSE(g.err.empty());
}

TEST(Cli, TextRendering) {
  Outcome r = run({"verify", "--example", "flat_II", "--points", "10"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_FALSE(r.out.empty());
  EXPECT_EQ(r.out.front() == '{', false);
}
