#include "heavenly/catalog.hpp"
#include "heavenly/gindikin.hpp"

#include <gtest/gtest.h>

using namespace heavenly;

namespace {

Expr v(const char* name) { return Expr::variable(name); }
LambdaPoly lam() { return LambdaPoly::monomial(Expr(1), 1); }

LambdaPolyForm one_form(const Chart& c, const std::string& x, const LambdaPoly& p = LambdaPoly(Expr(1))) {
  return LambdaPolyForm::monomial(c, {x}, p);
}

std::vector<Point> box_sample(const Chart& c, std::size_t n, std::uint64_t seed, double lo = 0.5, double hi = 1.5) {
  std::vector<Interval> box;
  for (const auto& x : c.names()) box.push_back({x, lo, hi});
  return sample_points(Domain(box), n, seed);
}

LambdaVectorField field(const Chart& c, const std::map<std::string, Expr>& comps) {
  std::vector<LambdaPoly> p(c.dim());
  for (const auto& [x, e] : comps) p[c.index_of(x)] = LambdaPoly(e);
  return LambdaVectorField(c, p);
}

const Expr kCubic = parse("(4*y - w^2)^(3/2)");

std::vector<Point> pp_sample(std::size_t n, std::uint64_t seed) {
  Domain d({{"x", -0.5, 0.5}, {"y", 0.5, 1.5}, {"z", 0.5, 1.5}, {"w", -0.5, 0.5}},
           {Guard{parse("4*y - w^2"), 0.1, false, "4y-w^2"}});
  return sample_points(d, n, seed);
}

}  // namespace

TEST(Closed, ConstantCoefficientGeneralStructure) {
  GindikinCandidate g(general_heavenly_beta(chart_general(4), parse("x1*x2 + x3*x4"), {0, 1, 2, 3}));
  auto r = check_closed(g, box_sample(chart_general(4), 20, 1));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.max_abs(), 0.0);
}

TEST(Closed, FiveDimensionalSecondStructureForAnyKey) {
  Expr Theta = parse("exp(x*y - u) + z^2*w^3/(1 + u^2) + sqrt(1 + x^2*y^2)");
  GindikinCandidate g(plebanski_II_beta5(Theta));
  EXPECT_TRUE(check_closed(g, box_sample(chart_II5(), 30, 2)).pass());
}

TEST(Closed, SeparatedFirstStructure) {
  BoundEntry b = build("iheav_exp_lift");
  EXPECT_TRUE(check_closed(*b.beta, entry_sample(b, 30, 3)).pass());
}

TEST(Closed, FlatSecondStructure) {
  GindikinCandidate g(plebanski_II_beta(Expr(0)));
  EXPECT_TRUE(d_exterior(g.form).is_zero());
}

TEST(Closed, GeneralStructureOfNonSolutionIsClosedButNotSimple) {
  // the third-derivative terms cancel cyclically for every key; the heavenly
  // equation only enters through simplicity
  GindikinCandidate g(general_heavenly_beta(chart_general(4), parse("x1*x2 + x3^2*x4^2"), {0, 1, 2, 3}));
  auto sample = box_sample(chart_general(4), 20, 4);
  EXPECT_TRUE(check_closed(g, sample).pass());
  EXPECT_FALSE(check_simple(g, sample).pass());
}

TEST(Simple, FlatSecondStructureHasNonzeroTopPower) {
  GindikinCandidate g(plebanski_II_beta(Expr(0)));
  auto b0 = eval_at_lambda(g.form, Rational(0));
  auto b1 = eval_at_lambda(g.form, Rational(1));
  auto top = wedge(b0, b1);
  ASSERT_EQ(top.terms().size(), 1u);
  EXPECT_TRUE(top.terms().begin()->second.coeff(0).is_constant());
  EXPECT_FALSE(top.terms().begin()->second.coeff(0).is_zero());
  EXPECT_TRUE(check_simple(g, box_sample(chart_II4(), 10, 5)).pass());
}

TEST(Simple, SolutionsOfTheHirotaReduction) {
  // the 5D structure is simple exactly when the reduced key solves its system
  Expr Theta = build("ppwave_cubic_lift").key;
  GindikinCandidate g(plebanski_II_beta5(Theta));
  BoundEntry b = build("ppwave_cubic_lift");
  EXPECT_TRUE(check_simple(g, entry_sample(b, 30, 6)).pass());
  GindikinCandidate bad(plebanski_II_beta5(parse("u*x^2*y^2/u^2 + z*w")));
  EXPECT_FALSE(check_simple(bad, entry_sample(b, 30, 6)).pass());
}

TEST(Nondegenerate, CraftedDegenerateCase) {
  const Chart& c = chart_II4();
  // (dx + l dy) ^ (dz + l x dw): at x = 0 every value is a multiple of dz
  auto f = wedge(one_form(c, "x") + one_form(c, "y", lam()), one_form(c, "z") + one_form(c, "w", lam() * LambdaPoly(v("x"))));
  GindikinCandidate g(f);
  std::vector<Point> crafted{{{"x", 0.0}, {"y", 0.3}, {"z", 0.1}, {"w", 0.7}}, {{"x", 0.0}, {"y", 1.0}, {"z", 2.0}, {"w", 3.0}}};
  auto rep = check_nondegenerate(g, crafted);
  EXPECT_FALSE(rep.nondegenerate());
  EXPECT_LE(rep.min_abs, 1e-12);
  std::vector<Point> generic{{{"x", 0.5}, {"y", 0.3}, {"z", 0.1}, {"w", 0.7}}};
  EXPECT_TRUE(check_nondegenerate(g, generic).nondegenerate());
}

TEST(Nondegenerate, FirstFamilyCatalogSolution) {
  BoundEntry b = build("iheav_exp");
  auto rep = check_nondegenerate(*b.beta, entry_sample(b, 30, 7));
  EXPECT_TRUE(rep.nondegenerate()) << rep.min_abs;
  EXPECT_GT(rep.pairs, 0u);
}

TEST(Symmetry, TranslationOfSeparatedGeneralKey) {
  Chart c = chart_general(5);
  Expr f = parse("(x1*x2*x3*x4 + x1^2*x3)*exp(x5)");
  GindikinCandidate g(general_heavenly_beta(c, f, {0, 1, 2, 3, 4}));
  auto cert = check_symmetry(g, LambdaVectorField::coordinate(c, "x5"), Rational(1), box_sample(c, 20, 8));
  EXPECT_TRUE(cert.certified());
  EXPECT_EQ(cert.report.max_abs(), 0.0);
}

TEST(Symmetry, EulerFieldOnSeparatedFirstStructure) {
  BoundEntry b = build("iheav_exp_lift");
  const Chart& c = chart_I5();
  auto cert = check_symmetry(*b.beta, field(c, {{"s", v("s")}, {"w", v("w")}, {"u", v("u")}}), Rational(1),
                             entry_sample(b, 30, 9));
  EXPECT_TRUE(cert.certified()) << cert.report.max_normalized();
}

TEST(Symmetry, GenericFieldIsRejected) {
  BoundEntry b = build("iheav_exp_lift");
  auto cert = check_symmetry(*b.beta, LambdaVectorField::coordinate(chart_I5(), "r"), Rational(1),
                             entry_sample(b, 30, 10));
  EXPECT_FALSE(cert.certified());
  EXPECT_GT(cert.report.max_normalized(), 1e-3);
}

TEST(Potential, SecondFamilyRestrictsToHirotaVeronese) {
  BoundEntry b = build("ppwave_cubic_lift");
  const Chart& c = chart_II5();
  auto K = field(c, {{"y", v("y")}, {"w", v("w")}, {"u", v("u")}});
  auto alpha = restrict(potential(*b.beta, K, entry_sample(b, 20, 11)), "u", Rational(1));
  auto expected = plebanski_II_alpha(build("ppwave_cubic").key);
  auto pts = pp_sample(10, 12);
  for (const auto& x : chart_II4().names()) {
    LambdaPoly a = alpha.coefficient(std::vector<std::string>{x}), e = expected.coefficient(std::vector<std::string>{x});
    for (int k = 0; k <= std::max(a.degree(), e.degree()); ++k)
      for (const auto& p : pts) EXPECT_NEAR(eval(a.coeff(k), p), eval(e.coeff(k), p), 1e-10) << x << " " << k;
  }
}

TEST(Potential, FirstFamilyRestrictsToHirotaVeronese) {
  BoundEntry b = build("iheav_exp_lift");
  const Chart& c = chart_I5();
  auto K = field(c, {{"s", v("s")}, {"w", v("w")}, {"u", v("u")}});
  auto alpha = restrict(potential(*b.beta, K, entry_sample(b, 20, 13)), "u", Rational(1));
  BoundEntry b4 = build("iheav_exp");
  auto expected = plebanski_I_alpha(b4.key);
  auto pts = entry_sample(b4, 10, 14);
  for (const auto& x : chart_I4().names()) {
    LambdaPoly a = alpha.coefficient(std::vector<std::string>{x}), e = expected.coefficient(std::vector<std::string>{x});
    for (int k = 0; k <= std::max(a.degree(), e.degree()); ++k)
      for (const auto& p : pts) EXPECT_NEAR(eval(a.coeff(k), p), eval(e.coeff(k), p), 1e-10) << x << " " << k;
  }
}

TEST(Potential, DifferentialReturnsTheStructure) {
  Chart c = chart_general(5);
  Expr f = parse("x1*x2*x3*x4*exp(x5)");
  GindikinCandidate g(general_heavenly_beta(c, f, {0, 1, 2, 3, 4}));
  auto K = LambdaVectorField::coordinate(c, "x5");
  auto sample = box_sample(c, 20, 15);
  auto alpha = potential(g, K, sample);
  auto groups = identity_groups(d_exterior(alpha) - g.form, lambda_panel(5));
  EXPECT_TRUE(measure_residuals("potential", groups, sample, {}, 1e-10).pass());
}

TEST(Potential, RejectsWrongField) {
  Chart c = chart_general(5);
  GindikinCandidate g(general_heavenly_beta(c, parse("x1*x2*x3*x4*exp(x5)"), {0, 1, 2, 3, 4}));
  EXPECT_THROW(potential(g, LambdaVectorField::coordinate(c, "x1"), box_sample(c, 10, 16)), HypothesisFailure);
}

TEST(Twist, UnitFactorReturnsTheStructure) {
  TwistFunction one{"phi", parse_unary_function("1")};
  Expr theta = build("ppwave_cubic").key;
  auto t = twist(plebanski_II_alpha(theta), "z", one, Rational(0));
  auto beta = plebanski_II_beta(theta);
  auto pts = pp_sample(10, 17);
  auto diffs = identity_groups(t.form - beta, lambda_panel(4));
  EXPECT_TRUE(measure_residuals("twist", diffs, pts, {}, 1e-10).pass());

  Expr theta_I = build("iheav_exp").key;
  auto tI = twist(plebanski_I_alpha(theta_I), "z", one, Rational(0));
  BoundEntry b = build("iheav_exp");
  auto dI = identity_groups(tI.form - plebanski_I_beta(theta_I), lambda_panel(4));
  EXPECT_TRUE(measure_residuals("twist", dI, entry_sample(b, 10, 18), {}, 1e-10).pass());
}

TEST(Twist, OpaqueFactorStaysClosedAndSimple) {
  TwistFunction phi{"phi", std::nullopt};
  auto t = twist(plebanski_II_alpha(kCubic), "z", phi, Rational(0));
  EXPECT_EQ(function_symbols(t.form), std::set<std::string>{"phi"});
  Bindings b{{"phi", parse_unary_function("exp(t/2) + t^3")}};
  auto pts = pp_sample(20, 19);
  EXPECT_TRUE(check_closed(t, pts, b).pass());
  EXPECT_TRUE(check_simple(t, pts, b).pass());
}

TEST(Twist, RequiresProportionalityAtLambdaZero) {
  TwistFunction one{"phi", parse_unary_function("1")};
  EXPECT_THROW(twist(plebanski_II_alpha(kCubic), "x", one, Rational(0)), NonDivisible);
}
