#include "heavenly/catalog.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace heavenly;

namespace {

CheckOptions quick() {
  CheckOptions o;
  o.residual_points = 30;
  o.structure_points = 20;
  o.curvature_points = 10;
  o.invariant_points = 5;
  o.pipeline_points = 10;
  return o;
}

void expect_all_ok(const std::string& id, const CheckOptions& o = quick()) {
  for (const auto& r : check_entry(build(id), o))
    EXPECT_TRUE(r.ok()) << id << " " << r.expectation.kind << " " << r.expectation.target << " measured "
                        << r.measured << " tol " << r.tolerance;
}

const ExpectationResult* find(const std::vector<ExpectationResult>& rs, const std::string& kind,
                              const std::string& target = "") {
  for (const auto& r : rs)
    if (r.expectation.kind == kind && r.expectation.target == target) return &r;
  return nullptr;
}

}  // namespace

TEST(Catalog, IdsSortedAndUnique) {
  auto ids = catalog_ids();
  EXPECT_GE(ids.size(), 20u);
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
  EXPECT_THROW(catalog_entry("no_such_entry"), std::invalid_argument);
}

TEST(Catalog, EveryEntryBuilds) {
  for (const auto& id : catalog_ids()) {
    BoundEntry b = build(id);
    EXPECT_EQ(b.entry->id, id);
    EXPECT_FALSE(b.domain.box().empty()) << id;
    EXPECT_FALSE(b.entry->expects.empty()) << id;
    auto pts = entry_sample(b, 3, 1);
    EXPECT_EQ(pts.size(), 3u) << id;
  }
}

TEST(Catalog, FlatSecondFramework) {
  BoundEntry b = build("flat_II");
  EXPECT_TRUE(b.key.is_zero());
  auto rs = check_entry(b, quick());
  ASSERT_NE(find(rs, "residual", "pleb2"), nullptr);
  EXPECT_TRUE(find(rs, "residual", "pleb2")->ok());
  ASSERT_NE(find(rs, "flat"), nullptr);
  EXPECT_TRUE(find(rs, "flat")->ok());
  expect_all_ok("flat_II");
}

TEST(Catalog, CubicPpWave) {
  BoundEntry b = build("ppwave_cubic");
  EXPECT_EQ(b.key, parse("(4*y - w^2)^(3/2)"));
  auto rs = check_entry(b, quick());
  ASSERT_NE(find(rs, "residual", "ppwave"), nullptr);
  ASSERT_NE(find(rs, "invariants_zero"), nullptr);
  expect_all_ok("ppwave_cubic");
}

TEST(Catalog, ExponentialFirstFrameworkSolution) {
  BoundEntry b = build("iheav_exp", {{"c1", 1}, {"c2", 1}, {"c3", 1}});
  for (const auto& x : free_variables(b.key)) EXPECT_TRUE(chart_I4().contains(x)) << x;
  expect_all_ok("iheav_exp");
  // twisted by the identity: I, J and I^3 - 6 J^2 all nonzero
  auto rs = check_entry(build("iheav_exp_twist_z"), quick());
  const auto* ns = find(rs, "not_special");
  ASSERT_NE(ns, nullptr);
  EXPECT_TRUE(ns->ok());
  EXPECT_TRUE(find(rs, "weyl_nonzero")->ok());
}

TEST(Catalog, ParametersAreSubstituted) {
  BoundEntry a = build("iheav_exp");
  BoundEntry b = build("iheav_exp", {{"c1", 2}});
  EXPECT_NE(a.key, b.key);
  EXPECT_TRUE(residual("ihirota4", b.key, {}, entry_sample(b, 20, 2)).pass());
}

TEST(Catalog, TwistedBuild) {
  BoundEntry b = build_twisted("ppwave_cubic", build("ppwave_cubic").key, "z^3");
  ASSERT_TRUE(b.phi && b.phi->definition);
  ASSERT_TRUE(b.metric.has_value());
  EXPECT_THROW(build_twisted("twist_cubic_z", build("ppwave_cubic").key, "z"), std::invalid_argument);
}

TEST(Catalog, GuardsRejectInadmissiblePoints) {
  BoundEntry b = build("ppwave_cubic");
  EXPECT_FALSE(b.domain.violation({{"x", 0.0}, {"y", 0.01}, {"z", 1.0}, {"w", 0.5}}).empty());
  EXPECT_THROW(entry_invariants(b, {{"x", 0.0}, {"y", 0.01}, {"z", 1.0}, {"w", 0.5}}), GuardError);
}

TEST(CoordinateMap, PsiOfStandardTwists) {
  std::vector<double> zs{0.4, 0.7, 1.0, 1.3, 1.9};
  EXPECT_LE(psi_consistency(parse_unary_function("z"), parse("1/Z"), zs), 1e-12);
  EXPECT_LE(psi_consistency(parse_unary_function("z^2"), parse("2/sqrt(Z)"), zs), 1e-12);
  EXPECT_LE(psi_consistency(parse_unary_function("exp(z)"), parse("1"), zs), 1e-12);
  EXPECT_GT(psi_consistency(parse_unary_function("z^2"), parse("1/Z"), zs), 1e-3);
}

TEST(CoordinateMap, ForwardAndInverse) {
  auto phi = parse_unary_function("z^3");
  Point p{{"x", 0.1}, {"y", 1.2}, {"z", 0.8}, {"w", 0.4}};
  Point q = holo_coordinate_map(p, phi);
  EXPECT_NEAR(q.at("Z"), 0.512, 1e-14);
  EXPECT_NEAR(q.at("kappa"), std::sqrt(4.8 - 0.16), 1e-14);
  EXPECT_NEAR(q.at("mu"), 0.4, 1e-14);
  Point back = holo_inverse_map(q, phi, 0.1, 2.0);
  for (const char* x : {"x", "y", "z", "w"}) EXPECT_NEAR(back.at(x), p.at(x), 1e-10) << x;
  EXPECT_THROW(holo_coordinate_map({{"x", 0}, {"y", 0.01}, {"z", 1}, {"w", 1}}, phi), DomainError);
}

TEST(Holomorphic, CubicDatumGivesTheProfileExactly) {
  Expr F = holo_ppwave_key({0, 0, 0, Rational(1, 4)});
  Expr target = parse("(4*y - w^2)^(3/2)");
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    double w = rng.uniform(-0.5, 0.5);
    Point p{{"y", rng.uniform(0.5, 1.5)}, {"w", w}};
    EXPECT_NEAR(eval(F, p), eval(target, p), 1e-12);
  }
  auto exact = eval_exact(F, {{"y", Rational(1)}, {"w", Rational(0)}});
  ASSERT_TRUE(exact.has_value());
  EXPECT_EQ(*exact, Rational(8));
}

TEST(Holomorphic, OtherDataSolveTheReduction) {
  Domain d = default_domain("ppwave").with_guard(Guard{parse("4*y - w^2"), 0.1, false, "4y-w^2"});
  auto pts = sample_points(d, 50, 4);
  for (const auto& c : std::vector<std::vector<Rational>>{{0, 0, 1}, {0, 0, 0, 0, 1}, {1, 2, 3, 4, 5}})
    EXPECT_TRUE(residual("ppwave", holo_ppwave_key(c), {}, pts).pass());
  // quadratic datum is a real quadratic polynomial
  Expr q = holo_ppwave_key({0, 0, 1});
  EXPECT_TRUE(eval_exact(q, {{"y", Rational(1, 3)}, {"w", Rational(1, 5)}}).has_value()) << q.str();
}

TEST(Catalog, SpecialityLadder) {
  for (const char* id : {"ladder_z", "ladder_z2", "ladder_z3"}) expect_all_ok(id);
}

TEST(Catalog, Serialization) {
  Json j = to_json(catalog_entry("twist_cubic_z"));
  EXPECT_EQ(j["id"], "twist_cubic_z");
  EXPECT_EQ(j["phi"], "z");
  EXPECT_TRUE(j.contains("psi"));
  auto rs = check_entry(build("flat_II"), quick());
  Json r = to_json(rs.front());
  EXPECT_TRUE(r.contains("measured"));
}

TEST(Catalog, ToleranceOverrideExposesResiduals) {
  CheckOptions o = quick();
  o.tolerance = 1e-30;
  o.kinds = {"residual"};
  auto rs = check_entry(build("iheav_exp"), o);
  ASSERT_FALSE(rs.empty());
  bool any_failed = false;
  for (const auto& r : rs) any_failed |= !r.ok();
  EXPECT_TRUE(any_failed);
}
