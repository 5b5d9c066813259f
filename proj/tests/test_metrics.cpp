#include "heavenly/holo.hpp"
#include "heavenly/catalog.hpp"
#include "heavenly/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace heavenly;

namespace {

Expr v(const char* name) { return Expr::variable(name); }

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

const Expr kCubic = parse("(4*y - w^2)^(3/2)");

std::vector<Point> pp_sample(std::size_t n, std::uint64_t seed) {
  Domain d({{"x", -0.5, 0.5}, {"y", 0.5, 1.5}, {"z", 0.5, 1.5}, {"w", -0.5, 0.5}},
           {Guard{parse("4*y - w^2"), 0.1, false, "4y-w^2"}});
  return sample_points(d, n, seed);
}

LambdaPolyForm one_form(const Chart& c, const std::string& x) {
  return LambdaPolyForm::monomial(c, {x}, LambdaPoly(Expr(1)));
}

}  // namespace

TEST(GeneralHeavenly, JacobianAndZeroPropagation) {
  Expr f = parse("x1*x3 + x2*x4");
  EXPECT_EQ(general_heavenly_jacobian(f), Expr(-1));
  // every displayed entry carries a factor f12, f34 or f14 f23, all zero here
  MetricExpr g = general_heavenly_metric(f);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(g(i, j).is_zero()) << i << j;
}

TEST(GeneralHeavenly, SymmetricAndNullOnStructureKernels) {
  BoundEntry b = build("gh_nonflat");
  ASSERT_TRUE(b.metric && b.beta);
  for (const auto& p : entry_sample(b, 10, 1)) {
    Eigen::MatrixXd g = b.metric->at(p);
    EXPECT_LE(max_diff(g, g.transpose()), 0.0);
    EXPECT_LE(null_plane_defect(*b.metric, *b.beta, p), 1e-9);
  }
}

TEST(GeneralHeavenly, ReconstructionAgreesUpToOneConstant) {
  BoundEntry b = build("gh_nonflat");
  MetricExpr rec = gindikin_reconstruct(*b.beta, {1, 0}, {0, 1});
  double ratio = 0.0;
  for (const auto& p : entry_sample(b, 10, 2)) {
    Eigen::MatrixXd g = b.metric->at(p), r = rec.at(p);
    Eigen::Index i, j;
    g.cwiseAbs().maxCoeff(&i, &j);
    double c = r(i, j) / g(i, j);
    if (ratio == 0.0) ratio = c;
    EXPECT_NEAR(c, ratio, 1e-9 * std::abs(ratio));
    EXPECT_LE(max_diff(r, c * g), 1e-9 * (1.0 + r.cwiseAbs().maxCoeff()));
  }
  EXPECT_NE(ratio, 0.0);
}

TEST(FirstPlebanski, ConstantKeys) {
  Point p{{"r", 0.3}, {"s", 0.7}, {"z", 1.1}, {"w", -0.4}};
  Eigen::MatrixXd g = plebanski_I_metric(parse("r*z + s*w")).at(p);
  // -(dr dz + ds dw) with the half reading
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 2) = expected(2, 0) = -0.5;
  expected(1, 3) = expected(3, 1) = -0.5;
  EXPECT_LE(max_diff(g, expected), 0.0);
}

TEST(FirstPlebanski, UntwistedInverseMatchesUnitTwist) {
  BoundEntry b = build("iheav_exp");
  TwistFunction one{"phi", parse_unary_function("1")};
  MetricExpr ti = twisted_inverse_I(b.key, one);
  MetricExpr g = plebanski_I_metric(b.key);
  for (const auto& p : entry_sample(b, 10, 3)) {
    Eigen::MatrixXd gp = g.at(p);
    EXPECT_GT(std::abs(gp.determinant()), 1e-6);
    Eigen::MatrixXd prod = gp * ti.at(p);
    // the contravariant matrix is the inverse of the covariant one up to one constant
    double c = prod(0, 0);
    EXPECT_LE(max_diff(prod, c * Eigen::MatrixXd::Identity(4, 4)), 1e-9);
    EXPECT_NEAR(c, 0.5, 1e-12);
  }
}

TEST(FirstPlebanski, TwistedConformalFactorOfExponentialSolution) {
  BoundEntry b = build("iheav_exp");
  TwistFunction phi{"phi", parse_unary_function("z^2 + 1")};
  Expr got = twisted_conformal_factor_I(b.key, phi);
  for (const auto& p : entry_sample(b, 10, 4)) {
    double z = p.at("z"), E = std::exp(-p.at("r") - p.at("z") - p.at("w"));
    double f = z * z + 1, fp = 2 * z;
    EXPECT_NEAR(eval(got, p), f * (fp * (-E - p.at("w") + 1) + f), 1e-12);
  }
}

TEST(FirstPlebanski, TwistedInverseIsInvertible) {
  BoundEntry b = build("iheav_exp");
  TwistFunction phi{"phi", parse_unary_function("z")};
  MetricExpr ti = twisted_inverse_I(b.key, phi);
  MetricExpr g = invert_metric(ti);
  for (const auto& p : entry_sample(b, 10, 5)) {
    Eigen::MatrixXd prod = ti.at(p) * g.at(p);
    EXPECT_LE(max_diff(prod, Eigen::MatrixXd::Identity(4, 4)), 1e-9);
  }
}

TEST(SecondPlebanski, FlatAndPpWave) {
  Point p{{"x", 0.2}, {"y", 1.2}, {"z", 0.9}, {"w", 0.3}};
  Eigen::MatrixXd flat = plebanski_II_metric(Expr(0)).at(p);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = 0.5;  // dw dx
  expected(1, 2) = expected(2, 1) = 0.5;  // dy dz
  EXPECT_LE(max_diff(flat, expected), 0.0);
  Eigen::MatrixXd pp = plebanski_II_metric(kCubic).at(p);
  expected(3, 3) = -eval(diff(kCubic, std::vector<std::string>{"y", "y"}), p);
  EXPECT_LE(max_diff(pp, expected), 1e-14);
}

TEST(SecondPlebanski, ConstantDeterminant) {
  EXPECT_EQ(determinant(plebanski_II_metric(Expr(0))), Expr(Rational(1, 16)));
  EXPECT_EQ(determinant(plebanski_II_metric(kCubic)), Expr(Rational(1, 16)));
  EXPECT_EQ(determinant(plebanski_II_metric(parse("x^3*y + exp(z*w) + y^2*x^2"))), Expr(Rational(1, 16)));
}

TEST(SecondPlebanski, UnitTwistInverse) {
  TwistFunction one{"phi", parse_unary_function("1")};
  MetricExpr ti = twisted_inverse_II(kCubic, one);
  MetricExpr g = plebanski_II_metric(kCubic);
  for (const auto& p : pp_sample(10, 6)) {
    Eigen::MatrixXd prod = g.at(p) * ti.at(p);
    EXPECT_LE(max_diff(prod, -0.5 * Eigen::MatrixXd::Identity(4, 4)), 1e-9);
  }
}

TEST(SecondPlebanski, TwistedFlatCovariantForm) {
  // inverse of the twisted matrix at theta = 0:
  // -2 phi' dx^2 - w phi' dx dz - phi dx dw - phi dy dz - 2 y phi' dz^2 (entries as displayed)
  TwistFunction phi{"phi", std::nullopt};
  Bindings b{{"phi", parse_unary_function("exp(t/2)")}};
  MetricExpr ti = twisted_inverse_II(Expr(0), phi);
  for (const auto& p : pp_sample(10, 7)) {
    double f = std::exp(p.at("z") / 2), fp = f / 2, y = p.at("y"), w = p.at("w");
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected(0, 0) = -2 * fp;
    expected(0, 2) = expected(2, 0) = -w * fp;
    expected(0, 3) = expected(3, 0) = -f;
    expected(1, 2) = expected(2, 1) = -f;
    expected(2, 2) = -2 * y * fp;
    EXPECT_LE(max_diff(ti.at(p, b).inverse(), expected), 1e-12);
  }
}

TEST(SecondPlebanski, TwistedPpWaveInvertibleUnderGuard) {
  TwistFunction phi{"phi", parse_unary_function("z")};
  MetricExpr ti = twisted_inverse_II(kCubic, phi);
  Expr factor = twisted_conformal_factor_II(kCubic, phi);
  int used = 0;
  for (const auto& p : pp_sample(30, 8)) {
    if (std::abs(eval(factor, p)) < 0.05) continue;
    ++used;
    EXPECT_GT(std::abs(ti.at(p).determinant()), 1e-8);
  }
  EXPECT_GE(used, 10);
}

TEST(Reconstruction, FlatSecondStructure) {
  MetricExpr rec = gindikin_reconstruct(GindikinCandidate(plebanski_II_beta(Expr(0))), {1, 0}, {0, 1});
  Point p{{"x", 0.2}, {"y", 1.2}, {"z", 0.9}, {"w", 0.3}};
  // flat metric dw dx + dy dz, with the framework constant -2
  EXPECT_LE(max_diff(rec.at(p), -2.0 * plebanski_II_metric(Expr(0)).at(p)), 1e-14);
}

TEST(Reconstruction, FirstStructureMatchesDisplayedMetric) {
  BoundEntry b = build("iheav_exp");
  MetricExpr rec = gindikin_reconstruct(GindikinCandidate(plebanski_I_beta(b.key)), {1, 0}, {0, 1});
  MetricExpr g = plebanski_I_metric(b.key);
  for (const auto& p : entry_sample(b, 10, 9)) EXPECT_LE(max_diff(rec.at(p), 2.0 * g.at(p)), 1e-12);
}

TEST(Reconstruction, TwistedStructureInvertsTheTwistedMatrix) {
  TwistFunction phi{"phi", parse_unary_function("z")};
  auto beta = twist(plebanski_II_alpha(kCubic), "z", phi, Rational(0));
  MetricExpr rec = gindikin_reconstruct(beta, {1, 0}, {0, 1});
  MetricExpr ti = twisted_inverse_II(kCubic, phi);
  Expr factor = twisted_conformal_factor_II(kCubic, phi);
  double c = 0.0;
  for (const auto& p : pp_sample(20, 10)) {
    if (std::abs(eval(factor, p)) < 0.05) continue;
    Eigen::MatrixXd prod = rec.at(p) * ti.at(p);
    if (c == 0.0) c = prod(0, 0);
    EXPECT_LE(max_diff(prod, c * Eigen::MatrixXd::Identity(4, 4)), 1e-8 * std::abs(c));
  }
  EXPECT_NE(c, 0.0);
}

TEST(FrameMetric, CoordinateFrame) {
  Chart c({"x", "y", "z", "w"});
  MetricExpr g = frame_metric(one_form(c, "x"), one_form(c, "y"), one_form(c, "z"), one_form(c, "w"));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = 1;   // dx (.) dw
  expected(1, 2) = expected(2, 1) = -1;  // -dy (.) dz
  EXPECT_LE(max_diff(g.at({{"x", 0}, {"y", 0}, {"z", 0}, {"w", 0}}), expected), 0.0);
}

TEST(FrameMetric, FirstCoframeIsTwiceTheDisplayedMetric) {
  BoundEntry b = build("iheav_exp");
  Coframe f = plebanski_I_coframe(b.key);
  MetricExpr g = frame_metric(f.gamma0, f.gamma1, f.delta0, f.delta1);
  for (const auto& p : entry_sample(b, 10, 11))
    EXPECT_LE(max_diff(g.at(p), 2.0 * plebanski_I_metric(b.key).at(p)), 1e-12);
}

TEST(FrameMetric, ComplexTetradMatchesDisplayedMetric) {
  for (const char* psi : {"1/Z", "1", "2/sqrt(Z)", "Z"}) {
    Expr P = parse(psi);
    TetradMetric t = holo_tetrad_metric(P);
    MetricExpr shown = holo_metric(P);
    Rng rng(12);
    for (int i = 0; i < 10; ++i) {
      Point q{{"x", rng.uniform(-1, 1)}, {"Z", rng.uniform(0.5, 2)}, {"kappa", rng.uniform(0.5, 2)},
              {"mu", rng.uniform(-1, 1)}};
      EXPECT_LE(max_diff(t.re.at(q), shown.at(q)), 1e-12) << psi;
      EXPECT_LE(t.im.at(q).cwiseAbs().maxCoeff(), 1e-12) << psi;
    }
  }
}

TEST(Inverse, IdentityAndInvolution) {
  Chart c({"a", "b", "c", "d"});
  MetricExpr id(c, Variance::Covariant);
  for (std::size_t i = 0; i < 4; ++i) id.set(i, i, Expr(1));
  MetricExpr inv = invert_metric(id);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(inv(i, j), Expr(i == j ? 1 : 0));

  TwistFunction phi{"phi", std::nullopt};
  Bindings b{{"phi", parse_unary_function("t^2 + 1")}};
  MetricExpr ti = twisted_inverse_II(Expr(0), phi);
  MetricExpr twice = invert_metric(invert_metric(ti));
  for (const auto& p : pp_sample(10, 13)) EXPECT_LE(max_diff(twice.at(p, b), ti.at(p, b)), 1e-9);
}

TEST(Inverse, PpWaveBlockStructure) {
  MetricExpr inv = invert_metric(plebanski_II_metric(kCubic));
  // nonzero only on (x,w), (y,z) and the (x,x) slot fed by F_yy
  for (const auto& p : pp_sample(5, 14)) {
    Eigen::MatrixXd m = inv.at(p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        bool allowed = (i + j == 3) || (i == 0 && j == 0);
        if (!allowed) EXPECT_EQ(m(i, j), 0.0) << i << j;
      }
    EXPECT_NEAR(m(0, 3), 2.0, 1e-14);
    EXPECT_NEAR(m(1, 2), 2.0, 1e-14);
  }
}

TEST(Serialization, MetricJson) {
  Json j = to_json(plebanski_II_metric(kCubic));
  EXPECT_EQ(j["variance"], "covariant");
  EXPECT_EQ(j["entries"].size(), 10u);
}
