#include "heavenly/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace heavenly {

std::string to_string(Framework f) {
  switch (f) {
    case Framework::General: return "general";
    case Framework::I: return "I";
    case Framework::II: return "II";
  }
  return "?";
}

Framework framework_from_string(const std::string& s) {
  if (s == "general") return Framework::General;
  if (s == "I") return Framework::I;
  if (s == "II") return Framework::II;
  throw std::invalid_argument("unknown framework '" + s + "' (general, I, II)");
}

namespace {

Expectation E(std::string kind, std::string target = "", bool pass = true, double threshold = 0.0) {
  return {std::move(kind), std::move(target), pass, threshold};
}

std::vector<Interval> box_of(const Chart& chart, std::map<std::string, std::pair<double, double>> ranges,
                             std::pair<double, double> fallback = {0.5, 1.5}) {
  std::vector<Interval> box;
  for (const auto& n : chart.names()) {
    auto it = ranges.find(n);
    auto r = it == ranges.end() ? fallback : it->second;
    box.push_back({n, r.first, r.second});
  }
  return box;
}

std::string lift(const std::string& base, const std::map<std::string, Expr>& scaled) {
  Expr u = Expr::variable("u");
  return (u * subst(parse(base), scaled)).str();
}

std::string holo_key(const std::vector<Rational>& c) { return holo_ppwave_key(c).str(); }

const char* kIheavExp =
    "(c1*(r + z) + c2*w)*s - (c2*c3*exp(-(c1/c2)*(c1*(r + z) + c2*w)) - (c1*w - 1)*(r + z) + c1*c2*w^3/6 "
    "- c2*w^2/2)/c1^2";
const char* kCubic = "(4*y - w^2)^(3/2)";
const char* kCubicB = "(4*y - w^2)^(3/2)/8";
const char* kGhQuad = "2*x1*x2 + 2*x3*x4 + x1*x3 + x2*x4";

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> cat;
  const Chart g4 = chart_general(4), g5 = chart_general(5);
  const Chart& i4 = chart_I4();
  const Chart& i5 = chart_I5();
  const Chart& ii4 = chart_II4();
  const Chart& ii5 = chart_II5();
  const std::vector<Rational> l4 = default_lambdas(4), l5 = default_lambdas(5);
  const std::map<std::string, Rational> cdef{{"c1", 1}, {"c2", 1}, {"c3", 1}};
  const auto ii_box = box_of(ii4, {{"x", {-0.5, 0.5}}, {"w", {-0.5, 0.5}}});
  const std::vector<std::pair<std::string, double>> cubic_guard{{"4*y - w^2", 0.1}};

  auto add = [&](CatalogEntry e) { cat.push_back(std::move(e)); };

  // ---- general heavenly
  add({"gh_flat_nondeg", Framework::General, "quadratic solution of the general heavenly equation (J = -1)", g4,
       kGhQuad, {}, {}, {}, box_of(g4, {}), {}, l4, {},
       {E("residual", "heav4"), E("closed"), E("simple"), E("nondegenerate"), E("sdve"), E("flat"),
        E("null_plane"), E("gauge"), E("cross_pipeline")}});
  add({"gh_nonflat", Framework::General, "quadratic solution plus an arbitrary function of (x1, x4)", g4,
       std::string(kGhQuad) + " + exp(x1 + x4)/3", {}, {}, {}, box_of(g4, {{"x1", {-0.5, 0.5}}, {"x4", {-0.5, 0.5}}}),
       {}, l4, {},
       {E("residual", "heav4"), E("closed"), E("simple"), E("nondegenerate"), E("sdve"), E("weyl_nonzero"),
        E("null_plane"), E("gauge"), E("cross_pipeline"), E("fd_oracle")}});
  add({"gh_product", Framework::General, "product solution of the full 4D Hirota system (J = 0)", g4,
       "x1*x2*x3*x4", {}, {}, {}, box_of(g4, {}), {}, l5, {},
       {E("residual", "heav4"), E("residual", "hirota4"), E("closed"), E("simple"), E("degenerate")}});
  add({"gh_nonsolution", Framework::General, "not a solution of the general heavenly equation", g4,
       "x1*x2 + x3^2*x4^2", {}, {}, {}, box_of(g4, {}), {}, l5, {},
       {E("residual", "heav4", false), E("residual", "hirota4", false), E("closed"), E("simple", "", false)}});
  add({"gh_product_lift", Framework::General, "separated 5D lift h * exp(x5) of the product solution", g5,
       "x1*x2*x3*x4*exp(x5)", {}, {}, {}, box_of(g5, {{"x5", {-0.5, 0.5}}}), {}, l5, {{"x5", "1"}},
       {E("residual", "schief5"), E("residual", "sep5"), E("closed"), E("simple"), E("symmetry"),
        E("potential")}});
  add({"gh_product_twist", Framework::General, "product solution twisted by exp through its integral f", g4,
       "x1*x2*x3*x4", {}, std::string("exp(z)"), {}, box_of(g4, {}), {}, l5, {},
       {E("closed"), E("simple")}});

  // ---- first Plebanski framework
  add({"flat_I", Framework::I, "flat solution of the first heavenly equation", i4, "s*w - r*z", {}, {}, {},
       box_of(i4, {}), {}, {}, {},
       {E("residual", "pleb1"), E("closed"), E("simple"), E("nondegenerate"), E("sdve"), E("flat"),
        E("cross_pipeline"), E("gauge"), E("mason_newman")}});
  add({"iheav_exp", Framework::I, "exponential solution of the I-Hirota system", i4, kIheavExp, cdef, {}, {},
       box_of(i4, {}, {0.1, 0.9}), {}, {}, {},
       {E("residual", "pleb1"), E("residual", "ihirota4"), E("closed"), E("simple"), E("nondegenerate"),
        E("sdve"), E("weyl_nonzero"), E("mason_newman"), E("cross_pipeline"), E("gauge"), E("null_plane"),
        E("fd_oracle")}});
  add({"iheav_exp_twist_z", Framework::I, "exponential I-Hirota solution twisted by phi(z) = z", i4, kIheavExp,
       cdef, std::string("z"), {}, box_of(i4, {{"z", {0.5, 1.5}}}, {0.1, 0.9}), {}, {}, {},
       {E("closed"), E("simple"), E("nondegenerate"), E("sdve"), E("weyl_nonzero"), E("not_special", "", true, 1e-6),
        E("cross_pipeline"), E("gauge"), E("null_plane"), E("fd_oracle")}});
  add({"iheav_exp_twist_exp", Framework::I, "exponential I-Hirota solution twisted by phi(z) = exp(z)", i4,
       kIheavExp, cdef, std::string("exp(z)"), {}, box_of(i4, {}, {0.1, 0.9}), {}, {}, {},
       {E("closed"), E("simple"), E("sdve"), E("weyl_nonzero"), E("cross_pipeline")}});
  add({"iheav_exp_lift", Framework::I, "separated 5D lift u theta(r, s/u, z, w/u) of the exponential solution", i5,
       lift(kIheavExp, {{"s", parse("s/u")}, {"w", parse("w/u")}}), cdef, {}, {},
       box_of(i5, {}, {0.3, 0.9}), {}, {}, {{"s", "s"}, {"w", "w"}, {"u", "u"}},
       {E("residual", "ih5d"), E("residual", "ihadd"), E("closed"), E("simple"), E("nondegenerate"),
        E("symmetry"), E("potential"), E("mason_newman")}});

  // ---- second Plebanski framework
  add({"flat_II", Framework::II, "theta = 0", ii4, "0", {}, {}, {}, ii_box, {}, {}, {},
       {E("residual", "pleb2"), E("residual", "iihirota4"), E("residual", "ppwave"), E("closed"), E("simple"),
        E("nondegenerate"), E("sdve"), E("flat"), E("invariants_zero"), E("spinor_path"), E("cross_pipeline"),
        E("gauge")}});
  add({"flat_II_twist_z2", Framework::II, "theta = 0 twisted by z^2 (third derivative zero)", ii4, "0", {},
       std::string("z^2"), {}, ii_box, {}, {}, {},
       {E("closed"), E("simple"), E("sdve"), E("flat"), E("cross_pipeline")}});
  add({"flat_II_twist_lin", Framework::II, "theta = 0 twisted by 2z + 1", ii4, "0", {}, std::string("2*z + 1"), {},
       ii_box, {}, {}, {}, {E("closed"), E("simple"), E("sdve"), E("flat")}});
  add({"flat_II_twist_exp", Framework::II, "theta = 0 twisted by exp(z)", ii4, "0", {}, std::string("exp(z)"), {},
       ii_box, {}, {}, {}, {E("closed"), E("simple"), E("sdve"), E("weyl_nonzero"), E("cross_pipeline")}});
  add({"ppwave", Framework::II, "pp-wave with profile y^3 (not a solution of the reduced Hirota equation)", ii4,
       "y^3", {}, {}, {}, ii_box, {}, {}, {},
       {E("residual", "pleb2"), E("residual", "ppwave", false), E("residual", "iihirota4", false), E("closed"),
        E("simple", "", true), E("sdve"), E("invariants_zero"), E("spinor_path")}});
  add({"ppwave_cubic", Framework::II, "pp-wave F = (4y - w^2)^(3/2)", ii4, kCubic, {}, {}, {}, ii_box, cubic_guard,
       {}, {},
       {E("residual", "pleb2"), E("residual", "ppwave"), E("residual", "iihirota4"), E("closed"), E("simple"),
        E("nondegenerate"), E("sdve"), E("weyl_nonzero"), E("invariants_zero"), E("spinor_path"),
        E("cross_pipeline"), E("gauge"), E("null_plane")}});
  add({"holo_ppwave", Framework::II, "pp-wave from the holomorphic datum xi^4", ii4,
       holo_key({0, 0, 0, 0, 1}), {}, {}, {}, ii_box, cubic_guard, {}, {},
       {E("residual", "ppwave"), E("residual", "pleb2"), E("residual", "iihirota4"), E("sdve")}});
  add({"holo_ppwave_quad", Framework::II, "pp-wave from the holomorphic datum xi^2", ii4, holo_key({0, 0, 1}), {},
       {}, {}, ii_box, cubic_guard, {}, {}, {E("residual", "ppwave"), E("residual", "iihirota4")}});
  add({"holo_ppwave_cubic", Framework::II, "pp-wave from the holomorphic datum xi^3/4", ii4,
       holo_key({0, 0, 0, Rational(1, 4)}), {}, {}, {}, ii_box, cubic_guard, {}, {},
       {E("residual", "ppwave"), E("residual", "iihirota4")}});
  add({"iipl_rational", Framework::II, "rational solution of the second heavenly equation", ii4,
       "x^2/(2*y) + x*w^2 - y^3*w/3", {}, {}, {}, ii_box, {}, {}, {},
       {E("residual", "pleb2"), E("residual", "iihirota4", false), E("closed"), E("simple"), E("nondegenerate"),
        E("sdve"), E("weyl_nonzero"), E("spinor_path"), E("cross_pipeline"), E("gauge"), E("null_plane"),
        E("fd_oracle")}});
  add({"cubic_eighth", Framework::II, "cubic pp-wave in the normalization of the complex description", ii4, kCubicB,
       {}, {}, {}, ii_box, cubic_guard, {}, {},
       {E("residual", "pleb2"), E("residual", "ppwave"), E("residual", "iihirota4"), E("sdve"),
        E("invariants_zero")}});
  add({"ppwave_cubic_lift", Framework::II, "separated 5D lift u theta(x, y/u, z, w/u) of the cubic pp-wave", ii5,
       lift(kCubic, {{"y", parse("y/u")}, {"w", parse("w/u")}}), {}, {}, {},
       box_of(ii5, {{"x", {-0.5, 0.5}}, {"w", {-0.5, 0.5}}}), {{"4*y*u - w^2", 0.1}}, {},
       {{"y", "y"}, {"w", "w"}, {"u", "u"}},
       {E("residual", "iih5d"), E("closed"), E("simple"), E("nondegenerate"), E("symmetry"), E("potential")}});

  // twisted cubic pp-waves: speciality ladder
  struct Ladder {
    const char* id;
    const char* phi;
    std::pair<double, double> z;
    std::vector<Expectation> ex;
  };
  for (const auto& l : std::vector<Ladder>{
           {"ladder_z", "z", {0.5, 1.5}, {E("special_nonzero")}},
           {"ladder_z2", "z^2", {0.5, 1.5}, {E("invariants_zero")}},
           {"ladder_z3", "z^3", {0.07, 0.11}, {E("not_special", "absolute", true, 1e-3)}}}) {
    CatalogEntry e{l.id, Framework::II, std::string("cubic pp-wave twisted by ") + l.phi, ii4, kCubic, {},
                   std::string(l.phi), {}, box_of(ii4, {{"x", {-0.5, 0.5}}, {"w", {-0.5, 0.5}}, {"z", l.z}}),
                   cubic_guard, {}, {}, l.ex};
    for (auto x : {E("sdve"), E("closed"), E("simple")}) e.expects.push_back(x);
    add(e);
  }

  // twisted cubic pp-waves against the closed-form invariants
  struct Family {
    const char* id;
    const char* phi;
    const char* psi;
    std::pair<double, double> z;
    Expectation verdict;
  };
  for (const auto& f : std::vector<Family>{
           {"twist_cubic_z", "z", "1/Z", {0.5, 1.5}, E("special_nonzero")},
           {"twist_cubic_z2", "z^2", "2/sqrt(Z)", {0.5, 1.5}, E("invariants_zero")},
           {"twist_cubic_z3", "z^3", "3*Z^(-1/3)", {0.3, 0.6}, E("not_special", "", true, 1e-6)},
           {"twist_cubic_exp", "exp(z)", "1", {-0.5, 0.5}, E("not_special", "", true, 1e-6)},
           {"twist_cubic_inv", "-1/z", "Z", {-2.0, -0.7}, E("not_special", "", true, 1e-6)},
           {"twist_cubic_sqrt", "z^2/4 - 1", "sqrt(Z + 1)/Z", {2.2, 3.2}, E("special_nonzero")}}) {
    CatalogEntry e{f.id, Framework::II, std::string("normalized cubic pp-wave twisted by ") + f.phi, ii4, kCubicB,
                   {}, std::string(f.phi), std::string(f.psi),
                   box_of(ii4, {{"x", {-0.5, 0.5}}, {"w", {-0.5, 0.5}}, {"z", f.z}}), cubic_guard, {}, {},
                   {E("closed"), E("simple"), E("nondegenerate"), E("sdve"), E("closed_form"), E("display_metric"),
                    f.verdict, E("null_plane")}};
    if (std::string(f.id) == "twist_cubic_z" || std::string(f.id) == "twist_cubic_exp") {
      e.expects.push_back(E("cross_pipeline"));
      e.expects.push_back(E("gauge"));
      e.expects.push_back(E("fd_oracle"));
    }
    add(e);
  }
  std::sort(cat.begin(), cat.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return cat;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = make_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& e : catalog()) ids.push_back(e.id);
  return ids;
}

// ---- build ------------------------------------------------------------------

namespace {

LambdaVectorField symmetry_field(const CatalogEntry& e) {
  std::vector<LambdaPoly> comps(e.chart.dim());
  for (const auto& [name, text] : e.symmetry)
    comps[static_cast<std::size_t>(e.chart.index_of(name))] = LambdaPoly(parse(text));
  return LambdaVectorField(e.chart, std::move(comps));
}

}  // namespace

namespace {

BoundEntry bind_entry(const CatalogEntry& e, const Expr& key_in, const std::map<std::string, Rational>& params,
                const std::optional<std::string>& twist_text, bool general_metric) {
  const std::string& id = e.id;
  std::map<std::string, Rational> values = e.parameters;
  for (const auto& [name, v] : params) {
    if (!values.count(name)) throw std::invalid_argument("entry '" + id + "' has no parameter '" + name + "'");
    if (v == 0) throw GuardError("parameter " + name + " of '" + id + "' must be nonzero");
    values[name] = v;
  }
  std::map<std::string, Expr> repl;
  for (const auto& [name, v] : values) repl[name] = Expr(v);
  BoundEntry b;
  b.entry = &e;
  b.key = subst(key_in, repl);
  for (const auto& v : free_variables(b.key))
    if (!e.chart.contains(v)) throw ChartMismatch("key variable '" + v + "' is not a coordinate of entry " + id);

  std::vector<Guard> guards;
  for (const auto& [text, bound] : e.guards) guards.push_back({parse(text), bound, false, text + " >= " + format_number(bound)});

  if (twist_text) {
    TwistFunction phi;
    phi.definition = parse_unary_function(*twist_text);
    b.phi = phi;
  }
  const std::size_t n = e.chart.dim();
  if (b.phi && n == 5) throw std::invalid_argument("entry '" + id + "' is five-dimensional and cannot be twisted");
  switch (e.framework) {
    case Framework::General: {
      if (b.phi) {
        std::vector<Rational> l = e.lambdas.size() > n ? e.lambdas : default_lambdas(n + 1);
        b.beta = twist(veronese_alpha(e.chart, b.key, l), b.key, *b.phi, l[n]);
        // no displayed metric exists for these; the reconstruction stands in
        if (general_metric) b.metric = gindikin_reconstruct(*b.beta, {1, 0}, {0, 1});
      } else {
        std::vector<Rational> l(e.lambdas.begin(), e.lambdas.begin() + static_cast<std::ptrdiff_t>(n));
        b.beta = GindikinCandidate(general_heavenly_beta(e.chart, b.key, l));
        if (n == 4 && e.expects.end() == std::find_if(e.expects.begin(), e.expects.end(), [](const Expectation& x) {
              return x.kind == "degenerate" || (x.kind == "simple" && !x.pass);
            }))
          b.metric = general_heavenly_metric(b.key);
      }
      break;
    }
    case Framework::I: {
      if (n == 5) {
        b.beta = GindikinCandidate(plebanski_I_beta5(b.key));
      } else if (b.phi) {
        b.beta = twist(plebanski_I_alpha(b.key), "z", *b.phi, 0);
        b.metric = twisted_inverse_I(b.key, *b.phi);
        guards.push_back({twisted_conformal_factor_I(b.key, *b.phi), 0.05, true, "conformal factor"});
      } else {
        b.beta = GindikinCandidate(plebanski_I_beta(b.key));
        b.metric = plebanski_I_metric(b.key);
      }
      break;
    }
    case Framework::II: {
      if (n == 5) {
        b.beta = GindikinCandidate(plebanski_II_beta5(b.key));
      } else if (b.phi) {
        b.beta = twist(plebanski_II_alpha(b.key), "z", *b.phi, 0);
        b.metric = twisted_inverse_II(b.key, *b.phi);
        guards.push_back({twisted_conformal_factor_II(b.key, *b.phi), 0.05, true, "conformal factor"});
      } else {
        b.beta = GindikinCandidate(plebanski_II_beta(b.key));
        b.metric = plebanski_II_metric(b.key);
      }
      break;
    }
  }
  b.domain = Domain(e.box, guards);
  return b;
}

}  // namespace

BoundEntry build_with_key(const std::string& id, const Expr& key, const std::map<std::string, Rational>& params) {
  const CatalogEntry& e = catalog_entry(id);
  return bind_entry(e, key, params, e.twist, false);
}

BoundEntry build_twisted(const std::string& id, const Expr& key, const std::string& phi,
                         const std::map<std::string, Rational>& params) {
  const CatalogEntry& e = catalog_entry(id);
  if (e.twist) throw std::invalid_argument("entry '" + id + "' already carries the twist " + *e.twist);
  return bind_entry(e, key, params, phi, true);
}

BoundEntry build(const std::string& id, const std::map<std::string, Rational>& params) {
  return build_with_key(id, parse(catalog_entry(id).key), params);
}

std::vector<Point> entry_sample(const BoundEntry& b, std::size_t count, std::uint64_t seed) {
  return sample_points(b.domain, count, seed);
}

WeylData entry_invariants(const BoundEntry& b, const Point& p) {
  if (!b.metric) throw std::invalid_argument("entry '" + b.entry->id + "' has no metric");
  std::string bad = b.domain.violation(p);
  if (!bad.empty()) throw GuardError("guard '" + bad + "' fails for entry '" + b.entry->id + "'");
  CurvatureEngine eng(*b.metric);
  auto c = eng.at(p);
  return selfdual_weyl(c, b.beta ? &*b.beta : nullptr, p);
}

// ---- checks -----------------------------------------------------------------

namespace {

double default_tolerance(const std::string& kind) {
  if (kind == "sdve") return 1e-7;
  if (kind == "gauge") return 1e-9;
  if (kind == "closed_form" || kind == "display_metric" || kind == "spinor_path") return 1e-6;
  if (kind == "fd_oracle") return 1e-5;
  if (kind == "weyl_nonzero") return 1e-6;
  return 1e-8;
}

double rel(double a, double b) { return std::abs(a - b) / (std::abs(b) + 1e-9); }

Eigen::MatrixXd covariant_at(const MetricExpr& g, const Point& p) {
  Eigen::MatrixXd m = g.at(p);
  return g.variance() == Variance::Contravariant ? Eigen::MatrixXd(m.inverse()) : m;
}

struct Context {
  const BoundEntry& b;
  const CheckOptions& opt;
  std::map<std::size_t, std::vector<Point>> samples;
  std::optional<CurvatureEngine> engine;
  std::map<std::size_t, std::vector<CurvatureAt>> curvature;
  std::map<std::size_t, std::vector<WeylData>> weyl;
  std::optional<std::vector<MetricExpr>> reconstructed;

  const std::vector<Point>& sample(std::size_t n) {
    auto it = samples.find(n);
    if (it == samples.end()) it = samples.emplace(n, entry_sample(b, n, opt.seed)).first;
    return it->second;
  }
  const CurvatureEngine& eng() {
    if (!engine) engine.emplace(*b.metric);
    return *engine;
  }
  const std::vector<CurvatureAt>& curv(std::size_t n) {
    auto it = curvature.find(n);
    if (it == curvature.end()) {
      std::vector<CurvatureAt> v;
      for (const auto& p : sample(n)) v.push_back(eng().at(p));
      it = curvature.emplace(n, std::move(v)).first;
    }
    return it->second;
  }
  const std::vector<WeylData>& weyls(std::size_t n) {
    auto it = weyl.find(n);
    if (it == weyl.end()) {
      const auto& cs = curv(n);
      const auto& ps = sample(n);
      std::vector<WeylData> v;
      for (std::size_t k = 0; k < cs.size(); ++k) v.push_back(selfdual_weyl(cs[k], b.beta ? &*b.beta : nullptr, ps[k]));
      it = weyl.emplace(n, std::move(v)).first;
    }
    return it->second;
  }
  const std::vector<MetricExpr>& recon() {
    if (!reconstructed) {
      std::vector<MetricExpr> v;
      for (auto [m, n] : std::vector<std::pair<Homogeneous, Homogeneous>>{
               {{1, 0}, {0, 1}}, {{1, 1}, {1, -1}}, {{2, 1}, {1, 3}}})
        v.push_back(gindikin_reconstruct(*b.beta, m, n));
      reconstructed = std::move(v);
    }
    return *reconstructed;
  }
};

void run_check(Context& ctx, const Expectation& ex, ExpectationResult& r) {
  const BoundEntry& b = ctx.b;
  const CatalogEntry& e = *b.entry;
  const CheckOptions& opt = ctx.opt;
  const double tol = r.tolerance;
  const std::string& k = ex.kind;
  auto need_metric = [&] {
    if (!b.metric) throw std::logic_error("entry has no metric");
  };
  auto need_beta = [&] {
    if (!b.beta) throw std::logic_error("entry has no Gindikin structure");
  };

  if (k == "residual") {
    std::vector<Rational> l = e.lambdas.empty() ? default_lambdas(5) : e.lambdas;
    if (l.size() < 5 && system_info(ex.target).lambda_count > l.size()) l = default_lambdas(5);
    auto rep = residual(ex.target, b.key, l, ctx.sample(opt.residual_points), {}, tol);
    r.observed = rep.pass();
    r.measured = rep.max_normalized();
    r.detail = to_json(rep);
  } else if (k == "closed" || k == "simple") {
    need_beta();
    auto rep = k == "closed" ? check_closed(*b.beta, ctx.sample(opt.structure_points), {}, tol)
                             : check_simple(*b.beta, ctx.sample(opt.structure_points), {}, tol);
    r.observed = rep.pass();
    r.measured = rep.max_normalized();
    r.detail = to_json(rep);
  } else if (k == "nondegenerate" || k == "degenerate") {
    need_beta();
    auto rep = check_nondegenerate(*b.beta, ctx.sample(opt.structure_points), {}, tol);
    r.observed = k == "nondegenerate" ? rep.nondegenerate() : !rep.nondegenerate();
    r.measured = rep.min_abs;
    r.detail = {{"min_abs", rep.min_abs}, {"pairs", rep.pairs}, {"points", rep.points}};
  } else if (k == "symmetry" || k == "potential") {
    need_beta();
    LambdaVectorField K = symmetry_field(e);
    if (k == "symmetry") {
      auto cert = check_symmetry(*b.beta, K, 1, ctx.sample(opt.structure_points), {}, tol);
      r.observed = cert.certified();
      r.measured = cert.report.max_normalized();
      r.detail = to_json(cert.report);
    } else {
      try {
        LambdaPolyForm alpha = potential(*b.beta, K, ctx.sample(opt.structure_points), {}, tol);
        r.observed = true;
        r.detail = {{"alpha_lambda_degree", alpha.lambda_degree()}};
      } catch (const HypothesisFailure& f) {
        r.observed = false;
        r.detail = {{"error", f.what()}, {"report", to_json(f.report())}};
      }
    }
  } else if (k == "mason_newman") {
    auto mn = mason_newman_fields(e.chart.dim() == 5 ? MNFramework::I5D : MNFramework::I4D, b.key);
    const auto& s = ctx.sample(opt.structure_points);
    auto c = commutator_check(mn.fields, s, {}, tol);
    auto d = divergence_check(mn.fields, mn.volume, s, {}, tol);
    r.observed = c.pass() && d.pass();
    r.measured = std::max(c.max_normalized(), d.max_normalized());
    r.detail = {{"commutators", to_json(c)}, {"divergence", to_json(d)}};
  } else if (k == "sdve") {
    need_metric();
    double ric = 0, sc = 0;
    for (const auto& c : ctx.curv(opt.curvature_points)) {
      ric = std::max(ric, c.ricci_norm());
      sc = std::max(sc, std::abs(c.scalar));
    }
    r.observed = ric <= tol && sc <= tol;
    r.measured = std::max(ric, sc);
    r.detail = {{"max_ricci", ric}, {"max_scalar", sc}, {"points", opt.curvature_points}};
  } else if (k == "flat" || k == "weyl_nonzero") {
    need_metric();
    double mx = 0, mn = std::numeric_limits<double>::infinity();
    for (const auto& c : ctx.curv(opt.curvature_points)) {
      mx = std::max(mx, c.riemann_norm());
      mn = std::min(mn, c.riemann_norm());
    }
    r.observed = k == "flat" ? mx <= tol : mn >= tol;
    r.measured = k == "flat" ? mx : mn;
    r.detail = {{"max_riemann", mx}, {"min_riemann", mn}};
  } else if (k == "invariants_zero" || k == "special_nonzero" || k == "not_special") {
    need_metric();
    double maxI = 0, maxJ = 0, minI = std::numeric_limits<double>::infinity(), minJ = minI, minS = minI,
           worst_special = 0;
    double max_flat_half = 0, max_invariance = 0;
    for (const auto& w : ctx.weyls(opt.curvature_points)) {
      maxI = std::max(maxI, std::abs(w.I));
      maxJ = std::max(maxJ, std::abs(w.J));
      minI = std::min(minI, std::abs(w.I));
      minJ = std::min(minJ, std::abs(w.J));
      double scale = ex.target == "absolute" ? 1.0 : 1.0 + std::pow(std::abs(w.I), 3) + w.J * w.J;
      minS = std::min(minS, std::abs(w.S) / scale);
      worst_special = std::max(worst_special, std::abs(w.S) / (1.0 + std::pow(std::abs(w.I), 3) + w.J * w.J));
      max_flat_half = std::max(max_flat_half, w.flat_half_residual);
      max_invariance = std::max(max_invariance, w.invariance_residual);
    }
    if (k == "invariants_zero") {
      r.observed = maxI <= tol && maxJ <= tol;
      r.measured = std::max(maxI, maxJ);
    } else if (k == "special_nonzero") {
      r.observed = minI > tol && minJ > tol && worst_special <= tol;
      r.measured = worst_special;
    } else {
      r.tolerance = ex.threshold;
      r.observed = minS >= ex.threshold;
      r.measured = minS;
    }
    r.detail = {{"max_abs_I", maxI}, {"max_abs_J", maxJ}, {"min_abs_I", minI}, {"min_abs_J", minJ},
                {"min_S", minS}, {"max_special_defect", worst_special},
                {"flat_half_residual", max_flat_half}, {"invariance_residual", max_invariance}};
  } else if (k == "closed_form" || k == "display_metric") {
    need_metric();
    if (!e.psi || !b.phi) throw std::logic_error("entry has no complex-chart data");
    Expr psi = parse(*e.psi);
    Expr Ic = holo_I(psi), Jc = holo_J(psi);
    std::optional<CurvatureEngine> disp;
    if (k == "display_metric") disp.emplace(holo_metric(psi));
    const auto& ps = ctx.sample(opt.invariant_points);
    const auto& ws = ctx.weyls(opt.invariant_points);
    double worst = 0;
    Json pts = Json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Point q = holo_coordinate_map(ps[i], *b.phi->definition);
      double I0, J0;
      if (disp) {
        auto w = selfdual_weyl(disp->at(q));
        I0 = w.I;
        J0 = w.J;
      } else {
        I0 = eval(Ic, q);
        J0 = eval(Jc, q);
      }
      double d = std::max(rel(ws[i].I, I0), rel(ws[i].J, J0));
      worst = std::max(worst, d);
      if (i < 3) pts.push_back({{"Z", q["Z"]}, {"kappa", q["kappa"]}, {"mu", q["mu"]}, {"I", ws[i].I}, {"I_ref", I0},
                                {"J", ws[i].J}, {"J_ref", J0}});
    }
    r.observed = worst <= tol;
    r.measured = worst;
    r.detail = {{"psi", *e.psi}, {"points", ps.size()}, {"max_relative_error", worst}, {"first_points", pts}};
  } else if (k == "cross_pipeline") {
    need_metric();
    need_beta();
    const MetricExpr& G = ctx.recon()[0];
    double c0 = 0, worst_shape = 0, worst_const = 0;
    const auto& ps = ctx.sample(opt.pipeline_points);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Eigen::MatrixXd A = G.at(ps[i]);
      Eigen::MatrixXd B = covariant_at(*b.metric, ps[i]);
      double c = (A.array() * B.array()).sum() / (B.array() * B.array()).sum();
      if (i == 0) c0 = c;
      worst_shape = std::max(worst_shape, (A - c * B).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff());
      worst_const = std::max(worst_const, std::abs(c - c0) / std::abs(c0));
    }
    r.observed = worst_shape <= tol && worst_const <= tol && std::abs(c0) > 0;
    r.measured = std::max(worst_shape, worst_const);
    r.detail = {{"constant", c0}, {"shape_residual", worst_shape}, {"constant_drift", worst_const}};
    if (e.framework == Framework::I && !b.phi) {
      auto cf = plebanski_I_coframe(b.key);
      MetricExpr F = frame_metric(cf.gamma0, cf.gamma1, cf.delta0, cf.delta1);
      double fr = 0, f0 = 0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        Eigen::MatrixXd A = F.at(ps[i]), B = b.metric->at(ps[i]);
        double c = (A.array() * B.array()).sum() / (B.array() * B.array()).sum();
        if (i == 0) f0 = c;
        fr = std::max(fr, (A - f0 * B).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff());
      }
      r.detail["frame_constant"] = f0;
      r.detail["frame_residual"] = fr;
      r.observed = r.observed && fr <= tol;
    }
  } else if (k == "gauge") {
    need_beta();
    const auto& R = ctx.recon();
    double worst = 0;
    for (const auto& p : ctx.sample(opt.pipeline_points)) {
      Eigen::MatrixXd A = R[0].at(p);
      double s = A.cwiseAbs().maxCoeff();
      for (std::size_t j = 1; j < R.size(); ++j) worst = std::max(worst, (R[j].at(p) - A).cwiseAbs().maxCoeff() / s);
    }
    r.observed = worst <= tol;
    r.measured = worst;
    r.detail = {{"pairs", Json::array({"(1,0),(0,1)", "(1,1),(1,-1)", "(2,1),(1,3)"})}, {"max_relative", worst}};
  } else if (k == "null_plane") {
    need_metric();
    need_beta();
    double worst = 0;
    for (const auto& p : ctx.sample(opt.pipeline_points))
      worst = std::max(worst, null_plane_defect(*b.metric, *b.beta, p));
    r.observed = worst <= tol;
    r.measured = worst;
  } else if (k == "spinor_path") {
    need_metric();
    const auto& ps = ctx.sample(opt.curvature_points);
    const auto& ws = ctx.weyls(opt.curvature_points);
    double worst = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto s = plebanski_II_weyl(b.key, ps[i]);
      worst = std::max({worst, std::abs(s.I - ws[i].I) / (std::abs(ws[i].I) + 1e-9),
                        std::abs(s.J - ws[i].J) / (std::abs(ws[i].J) + 1e-9)});
    }
    r.observed = worst <= tol;
    r.measured = worst;
  } else if (k == "fd_oracle") {
    need_metric();
    const auto& ps = ctx.sample(5);
    double worst = 0;
    for (const auto& p : ps) {
      auto c = ctx.eng().at(p);
      auto f = fd_curvature(*b.metric, p, {}, 2e-4);
      double d = 0;
      for (std::size_t i = 0; i < c.riemann.size(); ++i) d = std::max(d, std::abs(c.riemann[i] - f.riemann[i]));
      for (std::size_t i = 0; i < c.gamma.size(); ++i) d = std::max(d, std::abs(c.gamma[i] - f.gamma[i]));
      worst = std::max(worst, d / (1.0 + c.riemann_norm()));
    }
    r.observed = worst <= tol;
    r.measured = worst;
  } else {
    throw std::logic_error("unknown expectation kind '" + k + "'");
  }
}

}  // namespace

std::vector<ExpectationResult> check_entry(const BoundEntry& b, const CheckOptions& opt) {
  Context ctx{b, opt, {}, {}, {}, {}, {}};
  std::vector<ExpectationResult> out;
  for (const auto& ex : b.entry->expects) {
    if (!opt.kinds.empty() && !opt.kinds.count(ex.kind)) continue;
    ExpectationResult r;
    r.entry = b.entry->id;
    r.expectation = ex;
    r.tolerance = opt.tolerance.value_or(default_tolerance(ex.kind));
    try {
      run_check(ctx, ex, r);
    } catch (const std::exception& err) {
      r.observed = false;
      r.detail = {{"error", err.what()}};
    }
    out.push_back(std::move(r));
  }
  return out;
}

Json to_json(const ExpectationResult& r) {
  Json j;
  j["entry"] = r.entry;
  j["kind"] = r.expectation.kind;
  if (!r.expectation.target.empty()) j["target"] = r.expectation.target;
  j["expected"] = r.expectation.pass ? "pass" : "fail";
  j["observed"] = r.observed ? "pass" : "fail";
  j["measured"] = r.measured;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.ok() ? "ok" : "mismatch";
  if (!r.detail.is_null()) j["detail"] = r.detail;
  return j;
}

Json to_json(const CatalogEntry& e) {
  Json j;
  j["id"] = e.id;
  j["framework"] = to_string(e.framework);
  j["description"] = e.description;
  j["chart"] = e.chart.names();
  j["key"] = e.key;
  if (!e.parameters.empty()) {
    Json p;
    for (const auto& [n, v] : e.parameters) p[n] = rational_json(v);
    j["parameters"] = p;
  }
  if (e.twist) j["phi"] = *e.twist;
  if (e.psi) j["psi"] = *e.psi;
  Json box = Json::array();
  for (const auto& iv : e.box) box.push_back({{"name", iv.name}, {"lo", iv.lo}, {"hi", iv.hi}});
  j["box"] = box;
  Json guards = Json::array();
  for (const auto& [t, bound] : e.guards) guards.push_back({{"expr", t}, {"min", bound}});
  j["guards"] = guards;
  if (!e.lambdas.empty()) {
    Json l = Json::array();
    for (const auto& v : e.lambdas) l.push_back(rational_json(v));
    j["lambdas"] = l;
  }
  if (!e.symmetry.empty()) j["symmetry"] = e.symmetry;
  Json ex = Json::array();
  for (const auto& x : e.expects) {
    Json o{{"kind", x.kind}, {"expected", x.pass ? "pass" : "fail"}};
    if (!x.target.empty()) o["target"] = x.target;
    ex.push_back(o);
  }
  j["expects"] = ex;
  return j;
}

}  // namespace heavenly
