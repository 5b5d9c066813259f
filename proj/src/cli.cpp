#include "heavenly/cli.hpp"

#include "heavenly/suite.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace heavenly {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string system, example, key, theta, phi, psi, lambdas, at, out, framework;
  std::vector<std::string> params;
  std::size_t points = 100;
  std::uint64_t seed = 20240917;
  std::optional<double> tol;
  bool json = false, text = false, all = false;
};

double tolerance(const Config& c) { return c.tol.value_or(1e-8); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Rational> parse_lambdas(const std::string& s) {
  std::vector<Rational> l;
  for (const auto& t : split(s, ',')) {
    try {
      l.push_back(parse_rational(t));
    } catch (const std::exception& e) {
      throw UsageError("bad lambda value '" + t + "': " + e.what());
    }
  }
  return l;
}

Point parse_point(const std::string& s) {
  Point p;
  for (const auto& item : split(s, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--at expects name=value pairs, got '" + item + "'");
    std::string name = item.substr(0, eq);
    Expr v = parse(item.substr(eq + 1));
    if (!free_variables(v).empty()) throw UsageError("--at value for " + name + " must be a number");
    p[name] = eval(v, {});
  }
  return p;
}

std::map<std::string, Rational> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, Rational> m;
  for (const auto& item : items)
    for (const auto& kv : split(item, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + kv + "'");
      m[kv.substr(0, eq)] = parse_rational(kv.substr(eq + 1));
    }
  return m;
}

std::string key_text(const Config& c) { return !c.key.empty() ? c.key : c.theta; }

BoundEntry bound_example(const Config& c) {
  const CatalogEntry& e = catalog_entry(c.example);
  auto params = parse_params(c.params);
  Expr key = key_text(c).empty() ? parse(e.key) : parse(key_text(c));
  if (!c.phi.empty()) return build_twisted(e.id, key, c.phi, params);
  return build_with_key(e.id, key, params);
}

Json header(const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(const Config& c, Json& out) {
  out = header("verify");
  if (c.system.empty() && c.example.empty()) throw UsageError("verify needs --system or --example");
  if (!c.system.empty()) {
    const SystemInfo& info = system_info(c.system);
    std::optional<BoundEntry> b;
    if (!c.example.empty()) b = bound_example(c);
    if (!b && key_text(c).empty()) throw UsageError("verify --system needs --key (or --example)");
    Expr key = b ? b->key : parse(key_text(c));
    std::vector<Rational> l = c.lambdas.empty() ? default_lambdas(info.lambda_count) : parse_lambdas(c.lambdas);
    Domain dom = default_domain(c.system);
    if (b) dom = b->domain;
    auto sample = sample_points(dom, c.points, c.seed);
    ResidualReport rep = residual(c.system, key, l, sample, {}, tolerance(c));
    out["system"] = c.system;
    if (b) out["example"] = b->entry->id;
    out["key"] = key.str();
    out["seed"] = c.seed;
    out["report"] = to_json(rep);
    out["verdict"] = rep.pass() ? "pass" : "fail";
    return rep.pass() ? kExitOk : kExitFailed;
  }
  BoundEntry b = bound_example(c);
  CheckOptions opt;
  opt.residual_points = c.points;
  opt.seed = c.seed;
  opt.tolerance = c.tol;
  opt.kinds = {"residual"};
  auto rs = check_entry(b, opt);
  out["example"] = b.entry->id;
  out["key"] = b.key.str();
  out["seed"] = c.seed;
  Json arr = Json::array();
  bool ok = true;
  for (const auto& r : rs) {
    Json j;
    j["system"] = r.expectation.target;
    j["expected"] = r.expectation.pass ? "pass" : "fail";
    j["observed"] = r.observed ? "pass" : "fail";
    j["report"] = r.detail;
    arr.push_back(j);
    ok = ok && r.ok();
  }
  out["systems"] = arr;
  out["verdict"] = ok ? "pass" : "fail";
  return ok ? kExitOk : kExitFailed;
}

// ---- invariants -------------------------------------------------------------

std::string classify(double max_riemann, double max_I, double max_J, std::size_t special, std::size_t n, double tol) {
  if (max_riemann <= tol) return "flat";
  if (max_I <= tol && max_J <= tol) return "I = J = 0";
  if (special == n) return "special";
  if (special == 0) return "not special";
  return "mixed";
}

bool is_cubic_ppwave(const Expr& key) {
  Expr k = parse(key.str());
  for (const char* t : {"(4*y - w^2)^(3/2)", "(4*y - w^2)^(3/2)/8"})
    if (k.str() == parse(t).str()) return true;
  return false;
}

int invariants_at_display(const Config& c, const BoundEntry& b, const Point& at, Json& out) {
  if (b.entry->framework != Framework::II || !is_cubic_ppwave(b.key))
    throw UsageError("coordinates (Z, kappa, mu) apply only to the cubic pp-wave of the second framework");
  std::string phi_text = !c.phi.empty() ? c.phi : b.entry->twist.value_or("");
  if (phi_text.empty()) throw UsageError("coordinates (Z, kappa, mu) need a twist --phi");
  for (const char* k : {"Z", "kappa", "mu"})
    if (!at.count(k)) throw UsageError(std::string("--at is missing ") + k);
  UnaryFunction phi = parse_unary_function(phi_text);
  const std::string phi_norm = phi.apply(Expr::variable("z")).str();
  std::string psi_text = c.psi;
  const CatalogEntry* family = nullptr;
  for (const auto& e : catalog())
    if (e.psi && e.twist && parse_unary_function(*e.twist).apply(Expr::variable("z")).str() == phi_norm) family = &e;
  if (psi_text.empty()) {
    if (!family) throw UsageError("no Psi(Z) known for phi = " + phi_text + "; pass --psi");
    psi_text = *family->psi;
  }
  Expr psi = parse(psi_text);
  Point q = at;
  if (!q.count("x")) q["x"] = 0.0;
  if (!(q["kappa"] > 0)) throw GuardError("kappa must be positive");
  CurvatureEngine eng(holo_metric(psi));
  auto curv = eng.at(q);
  WeylData w = selfdual_weyl(curv);
  auto ir = invariants_report(w, tolerance(c));
  double I0 = eval(holo_I(psi), q), J0 = eval(holo_J(psi), q);
  out["example"] = b.entry->id;
  out["phi"] = phi_text;
  out["psi"] = psi_text;
  out["metric"] = "display metric in (x, Z, kappa, mu)";
  out["point"] = q;
  out["invariants"] = to_json(ir);
  out["weyl"] = to_json(w);
  out["ricci"] = curv.ricci_norm();
  out["closed_form"] = {{"I", I0}, {"J", J0}};
  double err = std::max(std::abs(w.I - I0) / (std::abs(I0) + 1e-12), std::abs(w.J - J0) / (std::abs(J0) + 1e-12));
  out["closed_form"]["relative_error"] = err;
  if (family) {
    for (const auto& iv : family->box)
      if (iv.name == "z") {
        try {
          out["chart_point"] = holo_inverse_map(q, phi, iv.lo, iv.hi);
        } catch (const DomainError&) {
        }
      }
  }
  out["closed_form"]["match"] = err <= 1e-6;
  out["verdict"] = classify(curv.riemann_norm(), std::abs(w.I), std::abs(w.J), ir.special ? 1 : 0, 1, tolerance(c));
  return err <= 1e-6 ? kExitOk : kExitFailed;
}

int cmd_invariants(const Config& c, Json& out) {
  out = header("invariants");
  if (c.example.empty()) throw UsageError("invariants needs --example");
  BoundEntry b = bound_example(c);
  if (!b.metric) throw UsageError("entry '" + b.entry->id + "' carries no metric");
  if (!c.at.empty()) {
    Point at = parse_point(c.at);
    if (at.count("Z") || at.count("kappa") || at.count("mu")) return invariants_at_display(c, b, at, out);
    for (const auto& n : b.entry->chart.names())
      if (!at.count(n)) throw UsageError("--at is missing coordinate " + n);
    std::string bad = b.domain.violation(at);
    if (!bad.empty()) {
      Json pt(at);
      throw GuardError("guard '" + bad + "' fails at " + pt.dump());
    }
    auto curv = CurvatureEngine(*b.metric).at(at);
    WeylData w = selfdual_weyl(curv, b.beta ? &*b.beta : nullptr, at);
    out["example"] = b.entry->id;
    if (b.phi) out["phi"] = b.phi->definition->body.str();
    out["key"] = b.key.str();
    out["point"] = at;
    out["invariants"] = to_json(invariants_report(w, tolerance(c)));
    out["weyl"] = to_json(w);
    out["riemann"] = curv.riemann_norm();
    out["ricci"] = curv.ricci_norm();
    out["verdict"] = classify(curv.riemann_norm(), std::abs(w.I), std::abs(w.J),
                              invariants_report(w, tolerance(c)).special ? 1 : 0, 1, tolerance(c));
    return kExitOk;
  }
  const double tol = tolerance(c);
  auto pts = sample_points(b.domain, c.points, c.seed);
  CurvatureEngine eng(*b.metric);
  std::optional<std::pair<Expr, Expr>> closed;
  if (b.entry->psi && b.phi) closed = std::make_pair(holo_I(parse(*b.entry->psi)), holo_J(parse(*b.entry->psi)));
  double maxR = 0, maxRic = 0, maxI = 0, maxJ = 0, maxS = 0, minI = INFINITY, minJ = INFINITY, minS = INFINITY,
         closed_err = 0;
  std::size_t special = 0;
  Json sample = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto curv = eng.at(pts[i]);
    WeylData w = selfdual_weyl(curv, b.beta ? &*b.beta : nullptr, pts[i]);
    auto ir = invariants_report(w, tol);
    special += ir.special ? 1 : 0;
    maxR = std::max(maxR, curv.riemann_norm());
    maxRic = std::max(maxRic, curv.ricci_norm());
    maxI = std::max(maxI, std::abs(w.I));
    maxJ = std::max(maxJ, std::abs(w.J));
    maxS = std::max(maxS, std::abs(w.S));
    minI = std::min(minI, std::abs(w.I));
    minJ = std::min(minJ, std::abs(w.J));
    minS = std::min(minS, std::abs(w.S));
    if (closed) {
      Point q = holo_coordinate_map(pts[i], *b.phi->definition);
      double I0 = eval(closed->first, q), J0 = eval(closed->second, q);
      closed_err = std::max({closed_err, std::abs(w.I - I0) / (std::abs(I0) + 1e-12),
                             std::abs(w.J - J0) / (std::abs(J0) + 1e-12)});
    }
    if (i < 5) sample.push_back({{"point", pts[i]}, {"I", w.I}, {"J", w.J}, {"S", w.S}});
  }
  out["example"] = b.entry->id;
  if (b.phi) out["phi"] = b.phi->definition->body.str();
  out["key"] = b.key.str();
  out["points"] = pts.size();
  out["seed"] = c.seed;
  out["tolerance"] = tol;
  out["summary"] = {{"max_riemann", maxR}, {"max_ricci", maxRic},  {"max_abs_I", maxI}, {"min_abs_I", minI},
                    {"max_abs_J", maxJ},   {"min_abs_J", minJ},    {"max_abs_S", maxS}, {"min_abs_S", minS},
                    {"special_points", special}};
  out["verdict"] = classify(maxR, maxI, maxJ, special, pts.size(), tol);
  out["first_points"] = sample;
  int code = kExitOk;
  if (closed) {
    out["closed_form"] = {{"psi", *b.entry->psi}, {"max_relative_error", closed_err}};
    if (closed_err > 1e-6) code = kExitFailed;
  }
  return code;
}

// ---- report -----------------------------------------------------------------

int cmd_report(const Config& c, Json& out) {
  out = header("report");
  std::optional<Framework> fw;
  if (!c.framework.empty()) fw = framework_from_string(c.framework);
  CheckOptions opt;
  opt.seed = c.seed;
  opt.residual_points = c.points;
  opt.structure_points = c.points;
  opt.tolerance = c.tol;
  CatalogRun run = run_catalog(opt, fw);
  out["filter"] = {{"framework", fw ? to_string(*fw) : "all"}};
  if (c.tol) out["filter"]["tolerance"] = *c.tol;
  out["seed"] = c.seed;
  out["catalog"] = to_json(run);
  bool ok = run.all_ok();
  // the numbered criteria carry their own tolerances; they run on the full catalog only
  if (!fw) {
    SuiteOptions so;
    so.seed = c.seed;
    Json crit = Json::array();
    for (const auto& r : run_acceptance(so)) {
      crit.push_back(to_json(r));
      ok = ok && r.pass;
    }
    out["criteria"] = crit;
  }
  out["verdict"] = ok ? "pass" : "fail";
  return ok ? kExitOk : kExitFailed;
}

int cmd_catalog(const Config& c, Json& out) {
  out = header("catalog");
  Json arr = Json::array();
  for (const auto& e : catalog()) {
    if (!c.example.empty() && e.id != c.example) continue;
    if (!c.framework.empty() && to_string(e.framework) != c.framework) continue;
    arr.push_back(to_json(e));
  }
  if (!c.example.empty() && arr.empty()) throw std::invalid_argument("unknown catalog entry '" + c.example + "'");
  out["entries"] = arr;
  return kExitOk;
}

std::string num(const Json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream os;
  const std::string cmd = j.value("command", "");
  if (j.contains("error")) {
    os << "error: " << j["error"].get<std::string>() << "\n";
    return os.str();
  }
  if (cmd == "verify") {
    if (j.contains("report")) {
      const Json& r = j["report"];
      os << "verify " << j["system"].get<std::string>() << " on " << j["key"].get<std::string>() << "\n";
      for (const auto& e : r["equations"])
        os << "  " << std::left << std::setw(10) << e["name"].get<std::string>() << " max normalized "
           << num(e["max_normalized"]) << "\n";
      os << "verdict: " << j["verdict"].get<std::string>() << " (tolerance " << num(r["tolerance"]) << ", "
         << num(r["points"]) << " points)\n";
    } else {
      os << "verify example " << j["example"].get<std::string>() << "\n";
      for (const auto& s : j["systems"])
        os << "  " << std::left << std::setw(10) << s["system"].get<std::string>() << " observed "
           << s["observed"].get<std::string>() << ", expected " << s["expected"].get<std::string>()
           << ", max normalized " << num(s["report"].value("max_residual", Json(0.0))) << "\n";
      os << "verdict: " << j["verdict"].get<std::string>() << "\n";
    }
  } else if (cmd == "invariants") {
    os << "invariants of " << j["example"].get<std::string>();
    if (j.contains("phi")) os << " twisted by phi = " << j["phi"].get<std::string>();
    os << "\n";
    if (j.contains("invariants")) {
      const Json& ir = j["invariants"];
      os << "  I = " << num(ir["I"]) << "\n  J = " << num(ir["J"]) << "\n  I^3 - 6 J^2 = " << num(ir["S"]) << "\n"
         << "  special: " << (ir["special"].get<bool>() ? "yes" : "no") << "\n";
      if (j.contains("closed_form"))
        os << "  closed form: I = " << num(j["closed_form"]["I"]) << ", J = " << num(j["closed_form"]["J"]) << "\n";
    } else {
      const Json& s = j["summary"];
      os << "  " << num(j["points"]) << " points, max |Riemann| " << num(s["max_riemann"]) << ", max |Ricci| "
         << num(s["max_ricci"]) << "\n  |I| in [" << num(s["min_abs_I"]) << ", " << num(s["max_abs_I"])
         << "], |J| in [" << num(s["min_abs_J"]) << ", " << num(s["max_abs_J"]) << "], |S| in ["
         << num(s["min_abs_S"]) << ", " << num(s["max_abs_S"]) << "]\n";
      if (j.contains("closed_form"))
        os << "  closed form (Psi = " << j["closed_form"]["psi"].get<std::string>() << ") max relative error "
           << num(j["closed_form"]["max_relative_error"]) << "\n";
    }
    os << "verdict: " << j["verdict"].get<std::string>() << "\n";
  } else if (cmd == "report") {
    const Json& cat = j["catalog"];
    std::string last;
    for (const auto& r : cat["results"]) {
      const std::string id = r["entry"].get<std::string>();
      if (id != last) os << id << "\n";
      last = id;
      std::string what = r["kind"].get<std::string>();
      if (r.contains("target")) what += " " + r["target"].get<std::string>();
      os << "  " << (r["verdict"] == "ok" ? "ok       " : "MISMATCH ") << std::left << std::setw(22) << what
         << " expected " << r["expected"].get<std::string>() << ", measured " << num(r["measured"]) << "\n";
    }
    const Json errors = cat.value("build_errors", Json::object());
    for (const auto& [id, msg] : errors.items())
      os << id << "\n  BUILD ERROR " << msg.get<std::string>() << "\n";
    os << "catalog: " << num(cat["matched"]) << " of " << num(cat["expectations"]) << " expectations met\n";
    if (j.contains("criteria"))
      for (const auto& c : j["criteria"])
        os << (c["verdict"] == "pass" ? "PASS" : "FAIL") << " [" << c["criterion"].get<int>() << "] "
           << c["name"].get<std::string>() << ": " << c["summary"].get<std::string>() << "\n";
    os << "verdict: " << j["verdict"].get<std::string>() << "\n";
  } else if (cmd == "catalog") {
    for (const auto& e : j["entries"])
      os << std::left << std::setw(22) << e["id"].get<std::string>() << std::setw(8) << e["framework"].get<std::string>()
         << e["description"].get<std::string>() << "\n";
  } else {
    os << j.dump(2) << "\n";
  }
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heavenly equations, Gindikin structures and self-dual metrics", "heavenly"};
  app.require_subcommand(1);
  Config c;
  std::optional<double> tol_in;

  auto common = [&](CLI::App* s) {
    s->add_option("--points", c.points, "sample size")->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed, "sampling seed");
    s->add_option("--tol", tol_in, "tolerance")->check(CLI::PositiveNumber);
    s->add_flag("--json", c.json, "JSON output");
    s->add_flag("--text", c.text, "human-readable output (default)");
    s->add_option("--out", c.out, "write the report to a file");
  };
  auto keyed = [&](CLI::App* s) {
    s->add_option("--example", c.example, "catalog entry id");
    s->add_option("--key", c.key, "key function expression");
    s->add_option("--theta", c.theta, "alias of --key for the Plebanski frameworks");
    s->add_option("--param", c.params, "entry parameter, name=value (repeatable)");
  };
  CLI::App* verify = app.add_subcommand("verify", "residuals of a system or of a catalog entry");
  verify->add_option("--system", c.system, "system id");
  verify->add_option("--lambdas", c.lambdas, "comma-separated spectral values");
  keyed(verify);
  common(verify);
  CLI::App* inv = app.add_subcommand("invariants", "curvature invariants of an entry's metric");
  keyed(inv);
  inv->add_option("--phi", c.phi, "twist function of z");
  inv->add_option("--psi", c.psi, "Psi(Z) for coordinates (Z, kappa, mu)");
  inv->add_option("--at", c.at, "evaluation point, name=value,...");
  common(inv);
  CLI::App* rep = app.add_subcommand("report", "run the catalog expectations and the acceptance criteria");
  rep->add_flag("--all", c.all, "every framework (default)");
  rep->add_option("--framework", c.framework, "general, I or II");
  common(rep);
  CLI::App* cat = app.add_subcommand("catalog", "list catalog entries");
  cat->add_option("--example", c.example, "single entry id");
  cat->add_option("--framework", c.framework, "general, I or II");
  common(cat);

  std::vector<std::string> argv_s{"heavenly"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  c.tol = tol_in;
  if (c.json && c.text) {
    err << "error: --json and --text are exclusive\n";
    return kExitUsage;
  }

  Json report;
  int code = kExitOk;
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "verify") code = cmd_verify(c, report);
    else if (name == "invariants") code = cmd_invariants(c, report);
    else if (name == "report") code = cmd_report(c, report);
    else code = cmd_catalog(c, report);
  } catch (const std::exception& e) {
    // configuration, parse, guard and domain problems
    report = header(name);
    report["error"] = e.what();
    if (const auto* de = dynamic_cast<const DomainError*>(&e)) report["subexpression"] = de->subexpression();
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
  }
  if (code == kExitUsage && !c.json) return code;
  std::string body = c.json ? report.dump(2) + "\n" : render_text(report);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) {
      err << "error: cannot write " << c.out << "\n";
      return kExitUsage;
    }
    f << body;
  } else {
    out << body;
  }
  return code;
}

}  // namespace heavenly
