#include "heavenly/holo.hpp"
#include "heavenly/catalog.hpp"
#include "heavenly/curvature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace heavenly;

namespace {

const Expr kCubic = parse("(4*y - w^2)^(3/2)");

std::vector<Point> pp_sample(std::size_t n, std::uint64_t seed) {
  Domain d({{"x", -0.5, 0.5}, {"y", 0.5, 1.5}, {"z", 0.5, 1.5}, {"w", -0.5, 0.5}},
           {Guard{parse("4*y - w^2"), 0.1, false, "4y-w^2"}});
  return sample_points(d, n, seed);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

WeylData weyl_of_display(const std::string& psi, double Z, double kappa, double mu = 0.3) {
  CurvatureEngine eng(holo_metric(parse(psi)));
  return selfdual_weyl(eng.at({{"x", 0.0}, {"Z", Z}, {"kappa", kappa}, {"mu", mu}}));
}

}  // namespace

TEST(Christoffel, FlatMetricVanishes) {
  for (const auto& g : christoffel(plebanski_II_metric(Expr(0)))) EXPECT_TRUE(g.is_zero());
  CurvatureAt c = CurvatureEngine(plebanski_II_metric(Expr(0))).at({{"x", 0.1}, {"y", 1}, {"z", 2}, {"w", 0.3}});
  EXPECT_EQ(c.riemann_norm(), 0.0);
}

TEST(Christoffel, PpWaveOnlyThroughTheProfile) {
  auto G = christoffel(plebanski_II_metric(kCubic));
  // every nonzero symbol involves derivatives of F_yy, so depends only on y, w
  int nonzero = 0;
  for (const auto& g : G) {
    if (g.is_zero()) continue;
    ++nonzero;
    for (const auto& x : free_variables(g)) EXPECT_TRUE(x == "y" || x == "w") << g.str();
  }
  EXPECT_GT(nonzero, 0);
}

TEST(Christoffel, FiniteDifferenceOracle) {
  MetricExpr g = plebanski_II_metric(build("iipl_rational").key);
  auto G = christoffel(g);
  BoundEntry b = build("iipl_rational");
  for (const auto& p : entry_sample(b, 5, 1)) {
    CurvatureAt fd = fd_curvature(g, p, {}, 1e-4);
    for (std::size_t i = 0; i < G.size(); ++i) {
      double s = eval(G[i], p);
      EXPECT_LE(std::abs(fd.gamma[i] - s) / (1.0 + std::abs(s)), 1e-5) << i;
    }
  }
}

TEST(Riemann, EngineAgreesWithFiniteDifferences) {
  BoundEntry b = build("iheav_exp");
  CurvatureEngine eng(*b.metric);
  for (const auto& p : entry_sample(b, 5, 2)) {
    CurvatureAt s = eng.at(p), fd = fd_curvature(*b.metric, p, {}, 2e-4);
    double scale = 1.0 + s.riemann_norm();
    for (std::size_t i = 0; i < s.riemann.size(); ++i) EXPECT_LE(std::abs(s.riemann[i] - fd.riemann[i]) / scale, 1e-5);
  }
}

TEST(Riemann, Symmetries) {
  for (const char* id : {"iheav_exp", "iipl_rational", "ppwave_cubic", "gh_nonflat", "twist_cubic_z"}) {
    BoundEntry b = build(id);
    CurvatureEngine eng(*b.metric, b.phi && b.phi->definition ? Bindings{{b.phi->name, *b.phi->definition}} : Bindings{});
    for (const auto& p : entry_sample(b, 5, 3)) EXPECT_LE(eng.at(p).symmetry_defect(), 1e-8) << id;
  }
}

TEST(Riemann, TwistByQuadraticOfFlatIsFlat) {
  TwistFunction phi{"phi", parse_unary_function("z^2")};
  CurvatureEngine eng(twisted_inverse_II(Expr(0), phi));
  for (const auto& p : pp_sample(10, 4)) EXPECT_LE(eng.at(p).riemann_norm(), 1e-10);
}

TEST(Riemann, CatalogMetricsAreVacuum) {
  for (const char* id : {"iheav_exp", "iipl_rational", "ppwave_cubic", "gh_nonflat", "cubic_eighth", "twist_cubic_exp"}) {
    BoundEntry b = build(id);
    CurvatureEngine eng(*b.metric, b.phi && b.phi->definition ? Bindings{{b.phi->name, *b.phi->definition}} : Bindings{});
    for (const auto& p : entry_sample(b, 10, 5)) {
      CurvatureAt c = eng.at(p);
      EXPECT_LE(c.ricci_norm(), 1e-7) << id;
      EXPECT_LE(std::abs(c.scalar), 1e-7) << id;
    }
  }
}

TEST(Weyl, FlatIsZero) {
  CurvatureAt c = CurvatureEngine(plebanski_II_metric(Expr(0))).at({{"x", 0.1}, {"y", 1}, {"z", 2}, {"w", 0.3}});
  WeylData w = selfdual_weyl(c);
  EXPECT_EQ(w.W.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(w.I, 0.0);
  EXPECT_EQ(w.J, 0.0);
}

TEST(Weyl, PpWaveIsNilpotent) {
  GindikinCandidate beta(plebanski_II_beta(kCubic));
  CurvatureEngine eng(plebanski_II_metric(kCubic));
  for (const auto& p : pp_sample(10, 6)) {
    WeylData w = selfdual_weyl(eng.at(p), &beta, p);
    EXPECT_GT(w.W.cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LE((w.W * w.W).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(std::abs(w.I), 1e-10);
    EXPECT_LE(std::abs(w.J), 1e-10);
    EXPECT_LE(std::abs(w.trace), 1e-8);
    EXPECT_LE(w.flat_half_residual, 1e-8);
  }
}

TEST(Weyl, CubicTwistedByIdentitySpotCheck) {
  WeylData w = weyl_of_display("1/Z", 1.0, 1.0);
  EXPECT_LE(rel(w.I, 3456.0 / 15625.0), 1e-6);
  EXPECT_LE(rel(w.J, -82944.0 / 1953125.0), 1e-6);
  EXPECT_NEAR(w.I, 0.2211840, 1e-7);
  EXPECT_NEAR(w.J, -0.04246733, 1e-8);
  EXPECT_LE(std::abs(w.S), 1e-6 * (1 + std::pow(std::abs(w.I), 3)));
}

TEST(Weyl, MatchesClosedFormsForAllFamilies) {
  Rng rng(7);
  for (const char* psi : {"1/Z", "2/sqrt(Z)", "3*Z^(-1/3)", "1", "Z", "sqrt(Z + 1)/Z"}) {
    Expr P = parse(psi);
    Expr I = holo_I(P), J = holo_J(P);
    CurvatureEngine eng(holo_metric(P));
    for (int i = 0; i < 5; ++i) {
      Point q{{"x", 0.0}, {"Z", rng.uniform(0.5, 1.5)}, {"kappa", rng.uniform(0.5, 1.5)}, {"mu", rng.uniform(-1, 1)}};
      WeylData w = selfdual_weyl(eng.at(q));
      double ci = eval(I, q), cj = eval(J, q);
      EXPECT_LE(std::abs(w.I - ci), 1e-6 * std::max(1e-3, std::abs(ci))) << psi;
      EXPECT_LE(std::abs(w.J - cj), 1e-6 * std::max(1e-3, std::abs(cj))) << psi;
    }
  }
}

TEST(Invariants, QuadraticTwistFamilyVanishes) {
  InvariantsReport r = invariants_report(weyl_of_display("2/sqrt(Z)", 1.3, 0.8));
  EXPECT_LE(std::abs(r.I), 1e-10);
  EXPECT_LE(std::abs(r.J), 1e-10);
  EXPECT_LE(std::abs(r.S), 1e-10);
}

TEST(Invariants, ExponentialTwistAtUnitPoint) {
  // Psi = 1 at Z = kappa = 1, any mu
  for (double mu : {-0.4, 0.3, 1.1}) {
    WeylData w = weyl_of_display("1", 1.0, 1.0, mu);
    InvariantsReport r = invariants_report(w);
    EXPECT_LE(rel(r.I, -2304.0 / std::pow(5.0, 6)), 1e-6);
    EXPECT_LE(rel(r.J, -41472.0 * 3 / std::pow(5.0, 9)), 1e-6);
    EXPECT_LE(rel(r.S, -382205952.0 * 11 / std::pow(5.0, 16)), 1e-6);
    EXPECT_FALSE(r.special);
  }
}

TEST(Invariants, SquareRootFamilyIsSpecial) {
  for (double kappa : {0.6, 1.0, 1.4}) {
    WeylData w = weyl_of_display("sqrt(Z + 1)/Z", 1.0, kappa);
    double d = 2 * kappa + 3 * std::sqrt(2.0);
    EXPECT_LE(rel(w.I, 3456.0 / std::pow(d, 6)), 1e-6);
    EXPECT_LE(rel(w.J, -82944.0 / std::pow(d, 9)), 1e-6);
    InvariantsReport r = invariants_report(w);
    EXPECT_TRUE(r.special);
    EXPECT_LE(std::abs(r.S), 1e-8 * (1 + std::pow(std::abs(r.I), 3) + r.J * r.J));
  }
}

TEST(Invariants, SpecialityFormula) {
  WeylData w;
  w.I = 2.0;
  w.J = 1.0;
  w.S = w.I * w.I * w.I - 6 * w.J * w.J;
  InvariantsReport r = invariants_report(w);
  EXPECT_DOUBLE_EQ(r.S, 2.0);
  EXPECT_FALSE(r.special);
}

TEST(Spinor, FlatAndPpWave) {
  for (const auto& c : plebanski_II_spinor(Expr(0))) EXPECT_TRUE(c.is_zero());
  auto C = plebanski_II_spinor(kCubic);
  EXPECT_FALSE(C[0].is_zero());
  for (int k = 1; k < 5; ++k) EXPECT_TRUE(C[k].is_zero()) << k;
  Point p{{"x", 0.0}, {"y", 1.0}, {"z", 0.0}, {"w", 0.0}};
  EXPECT_NEAR(eval(C[0], p), 144.0 / 32.0, 1e-12);  // F_yyyy = 144 (4y - w^2)^(-5/2)
}

TEST(Spinor, AgreesWithOperatorPath) {
  BoundEntry b = build("iipl_rational");
  CurvatureEngine eng(*b.metric);
  for (const auto& p : entry_sample(b, 10, 8)) {
    WeylData op = selfdual_weyl(eng.at(p), &*b.beta, p);
    WeylData sp = plebanski_II_weyl(b.key, p);
    EXPECT_LE(std::abs(op.I - sp.I), 1e-6 * (1e-6 + std::abs(op.I)));
    EXPECT_LE(std::abs(op.J - sp.J), 1e-6 * (1e-6 + std::abs(op.J)));
  }
}

TEST(Spinor, TwistedFlatSpinorFollowsThirdDerivative) {
  // theta = 0 twisted by phi: the only component is proportional to phi'''/phi^2,
  // so the curvature vanishes exactly when phi''' does
  for (const char* phi : {"z^3", "exp(z)", "z^2 + 3*z"}) {
    TwistFunction f{"phi", parse_unary_function(phi)};
    CurvatureEngine eng(twisted_inverse_II(Expr(0), f));
    double third = eval(diff(parse(phi), std::vector<std::string>{"z", "z", "z"}), {{"z", 1.0}});
    double r = 0.0;
    for (const auto& p : pp_sample(5, 9)) r = std::max(r, eng.at(p).riemann_norm());
    if (third == 0.0)
      EXPECT_LE(r, 1e-10) << phi;
    else
      EXPECT_GT(r, 1e-6) << phi;
  }
}
