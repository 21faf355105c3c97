// Command-line front end: parse one JSON document, run one computation, print
// one document. Data goes to stdout, diagnostics to stderr. Exit codes:
// 0 success, 1 validation failure, 2 schema or usage error, 3 non-convergence.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsinv/cluster_tree.hpp"
#include "wsinv/component_graph.hpp"
#include "wsinv/errors.hpp"
#include "wsinv/height.hpp"
#include "wsinv/hyperelliptic.hpp"
#include "wsinv/json_io.hpp"
#include "wsinv/riemann_surface.hpp"
#include "wsinv/theta.hpp"

namespace {

using nlohmann::json;
using namespace wsinv;

struct Options {
  std::string input;
  std::string format;  // filled with the per-command default when left empty
  double tol = 1e-10;
  std::uint64_t seed = 1;
  bool override_assumptions = false;
  int schema_version = kSchemaVersion;
};

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open input file: " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

std::string fstr(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string cstr(const std::complex<double>& z) {
  std::string s = fstr(z.real());
  s += z.imag() < 0 ? " - " : " + ";
  s += fstr(std::abs(z.imag()));
  s += "i";
  return s;
}

void emit_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

// Two aligned columns, keys padded to the widest.
void emit_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows)
    std::cout << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

// The tree itself is well-defined without the soft assumptions, so `tree`
// only warns; `residual` depends on them for correctness and refuses to run
// on a dirty report unless overridden.
ClusterTree checked_tree(const RootConfig& cfg, bool override_assumptions, bool gate) {
  AssumptionReport report = validate(cfg);
  if (gate && !report.all_ok() && !override_assumptions) {
    std::string msg = "assumption check failed";
    for (const std::string& m : report.messages) msg += "\n  " + m;
    msg += "\nrerun with --override-assumptions to proceed anyway";
    throw ValidationError(msg);
  }
  for (const std::string& m : report.messages) std::cerr << "warning: " << m << "\n";
  return build_tree(cfg);
}

int run_tree(const Options& opt) {
  RootConfig cfg = parse_root_config(read_input(opt.input));
  ClusterTree tree = checked_tree(cfg, opt.override_assumptions, /*gate=*/false);
  if (opt.format == "dot") {
    std::cout << tree_to_dot(tree);
    return 0;
  }
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["g"] = cfg.g;
  doc["p"] = cfg.p.str();
  doc["depth"] = tree.depth();
  json vertices = json::array();
  for (int i = 0; i < tree.vertex_count(); ++i) {
    const ClusterVertex& v = tree.vertex(i);
    json jv;
    jv["id"] = i;
    jv["level"] = v.level;
    jv["phi"] = v.phi();
    jv["C"] = v.parity_flag() ? 1 : 0;
    jv["members"] = v.members;
    jv["parent"] = v.parent;
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  emit_json(doc);
  return 0;
}

int run_residual(const Options& opt) {
  RootConfig cfg = parse_root_config(read_input(opt.input));
  ClusterTree tree = checked_tree(cfg, opt.override_assumptions, /*gate=*/true);
  Rat e = compute_e(tree);
  std::map<int, Rat> residual = residual_divisor(tree, opt.override_assumptions);
  // The discriminant-section valuation feeds a fiber document's ord_lambda;
  // its closed form needs residue characteristic != 2.
  std::optional<Int> ol;
  if (!cfg.residue_char_is_two()) ol = ord_lambda(cfg, tree);
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["e"] = rational_to_string(e);
    json div = json::object();
    for (const auto& [id, mult] : residual) div["v" + std::to_string(id)] = rational_to_string(mult);
    doc["residual"] = std::move(div);
    if (ol) doc["ord_lambda"] = ol->str();
    emit_json(doc);
  } else {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("e", rational_to_string(e));
    for (const auto& [id, mult] : residual)
      rows.emplace_back("v" + std::to_string(id), rational_to_string(mult));
    if (ol) rows.emplace_back("ord_lambda", ol->str());
    emit_rows(rows);
  }
  return 0;
}

int run_phi(const Options& opt) {
  FiberDocument fd = parse_fiber_document(read_input(opt.input));
  if (fd.sections.empty()) throw SchemaError("\"sections\" must be nonempty");
  ComponentGraph graph = ComponentGraph::create(fd.g, fd.components, fd.intersection);
  Rat sum_neg = 0;
  json sections = json::array();
  std::vector<std::pair<std::string, std::string>> rows;
  for (const SectionIncidence& s : fd.sections) {
    VerticalQDivisor phi = phi_divisor(graph, s);
    Rat self = phi_self_intersection(graph, s);
    sum_neg -= self;
    json entry;
    entry["name"] = s.name;
    entry["meets"] = s.meets;
    json coeffs = json::object();
    std::string vec;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      coeffs[graph.component(i).name] = rational_to_string(phi[i]);
      if (i) vec += ", ";
      vec += rational_to_string(phi[i]);
    }
    entry["phi"] = std::move(coeffs);
    entry["self_intersection"] = rational_to_string(self);
    sections.push_back(std::move(entry));
    rows.emplace_back(s.name, "phi = [" + vec + "]  phi^2 = " + rational_to_string(self));
  }
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["sections"] = std::move(sections);
    doc["sum_neg_phi_sq"] = rational_to_string(sum_neg);
    emit_json(doc);
  } else {
    rows.emplace_back("sum_neg_phi_sq", rational_to_string(sum_neg));
    emit_rows(rows);
  }
  return 0;
}

int run_verify_local(const Options& opt) {
  FiberDocument fd = parse_fiber_document(read_input(opt.input));
  if (!fd.residual) throw SchemaError("verify-local needs the \"E\" divisor");
  if (!fd.ord_lambda) throw SchemaError("verify-local needs \"ord_lambda\"");
  ComponentGraph graph = ComponentGraph::create(fd.g, fd.components, fd.intersection);
  LocalIdentityResult r = verify_local_identity(graph, fd.sections, *fd.residual, *fd.ord_lambda);
  bool agrees = r.residual == 0;
  // Disagreement is a result, not a failure; still exit 0.
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["lhs"] = rational_to_string(r.lhs);
    doc["rhs"] = rational_to_string(r.rhs);
    doc["residual"] = rational_to_string(r.residual);
    doc["agrees"] = agrees;
    emit_json(doc);
  } else {
    emit_rows({{"lhs", rational_to_string(r.lhs)},
               {"rhs", rational_to_string(r.rhs)},
               {"residual", rational_to_string(r.residual)},
               {"agrees", agrees ? "yes" : "no"}});
  }
  return 0;
}

int run_wronskian(const Options& opt) {
  CurveDocument cd = parse_curve_document(read_input(opt.input));
  HyperellipticEquation eq =
      cd.roots ? HyperellipticEquation::from_roots(cd.field, *cd.a_scalar, *cd.roots)
               : HyperellipticEquation::from_ab(
                     cd.field, Poly::from_coefficients(cd.field, *cd.a_poly),
                     Poly::from_coefficients(cd.field, *cd.b_poly));
  if (eq.genus() != cd.g)
    throw ValidationError("declared g=" + std::to_string(cd.g) + " but the equation has genus " +
                          std::to_string(eq.genus()));
  const int g = eq.genus();
  const std::size_t precision = 20 + static_cast<std::size_t>(g) * g;

  // Identity checks at the first few non-branch integer abscissas, gap orders
  // at the branch abscissas (given roots, or scanned small integers).
  std::vector<Rat> generic_xs, branch_xs;
  for (long k = 0; generic_xs.size() < 3 && k < 200; ++k) {
    Rat x0 = cd.field.reduce(Rat(k));
    if (!eq.is_branch_x(x0)) generic_xs.push_back(x0);
  }
  if (cd.roots) {
    for (const Rat& r : *cd.roots) {
      Rat x0 = cd.field.reduce(r);
      bool seen = false;
      for (const Rat& b : branch_xs) seen = seen || b == x0;
      if (!seen) branch_xs.push_back(x0);
    }
  } else {
    for (long k = -30; k <= 30 && branch_xs.size() < static_cast<std::size_t>(2 * g + 2); ++k) {
      Rat x0 = cd.field.reduce(Rat(k));
      bool seen = false;
      for (const Rat& b : branch_xs) seen = seen || b == x0;
      if (!seen && eq.is_branch_x(x0)) branch_xs.push_back(x0);
    }
  }

  json identity = json::array();
  std::vector<std::pair<std::string, std::string>> rows;
  for (const Rat& x0 : generic_xs) {
    bool ok = hyperelliptic_wronskian_check(eq, x0, precision);
    identity.push_back({{"x0", rational_to_string(x0)}, {"ok", ok}});
    rows.emplace_back("identity at x0=" + rational_to_string(x0), ok ? "ok" : "FAILED");
  }
  json gaps = json::array();
  for (const Rat& x0 : branch_xs) {
    long order = weierstrass_gap_order(eq, x0, precision);
    gaps.push_back({{"x0", rational_to_string(x0)}, {"order", order}});
    rows.emplace_back("gap order at x0=" + rational_to_string(x0), std::to_string(order));
  }
  long expected = static_cast<long>(g) * (g - 1) / 2;

  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["g"] = g;
    doc["field"] = cd.field.describe();
    doc["identity"] = std::move(identity);
    doc["gap_orders"] = std::move(gaps);
    doc["expected_branch_order"] = expected;
    emit_json(doc);
  } else {
    rows.emplace_back("expected branch order", std::to_string(expected));
    emit_rows(rows);
  }
  return 0;
}

int run_theta(const Options& opt) {
  AnalyticDocument ad = parse_analytic_document(read_input(opt.input));
  if (!ad.tau) throw SchemaError("theta needs \"tau\"");
  PeriodMatrix pm = PeriodMatrix::create(*ad.tau);
  const int g = pm.genus();
  CVec z = ad.z ? *ad.z : CVec(CVec::Zero(g));
  if (z.size() != g) throw SchemaError("\"z\" must have length g");
  std::complex<double> value = theta(z, pm, opt.tol);
  double norm = theta_norm(z, pm, opt.tol);
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["g"] = g;
    doc["theta"] = json::array({value.real(), value.imag()});
    doc["theta_norm"] = norm;
    emit_json(doc);
  } else {
    emit_rows({{"theta", cstr(value)}, {"theta_norm", fstr(norm)}});
  }
  return 0;
}

int run_tinv(const Options& opt) {
  AnalyticDocument ad = parse_analytic_document(read_input(opt.input));
  CurveAnalytic curve = [&] {
    if (ad.branch_points) return CurveAnalytic::from_branch_points(*ad.branch_points, opt.tol);
    PeriodMatrix pm = PeriodMatrix::create(*ad.tau);
    if (pm.genus() != 1)
      throw SchemaError("tau-only input works at genus 1; give \"branch_points\" instead");
    return CurveAnalytic::from_period_matrix(pm);
  }();
  double t = t_invariant(curve, opt.seed, opt.tol);
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["g"] = curve.genus();
    doc["seed"] = opt.seed;
    doc["t"] = t;
    doc["log_t"] = std::log(t);
    emit_json(doc);
  } else {
    emit_rows({{"g", std::to_string(curve.genus())},
               {"seed", std::to_string(opt.seed)},
               {"t", fstr(t)},
               {"log_t", fstr(std::log(t))}});
  }
  return 0;
}

int run_height(const Options& opt) {
  GlobalHeightInput in = parse_height_input(read_input(opt.input));
  DegLambdaResult r = deg_lambda(in);
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["g"] = in.g;
    doc["degree_k"] = in.degree_k;
    doc["deg_lambda"] = r.value;
    doc["undivided"] = r.undivided;
    doc["height_term"] = r.height_term;
    doc["local_term"] = r.local_term;
    doc["arch_term"] = r.arch_term;
    doc["slope_constant"] = rational_to_string(slope_constant(in.g));
    emit_json(doc);
  } else {
    emit_rows({{"g", std::to_string(in.g)},
               {"degree_k", std::to_string(in.degree_k)},
               {"deg_lambda", fstr(r.value)},
               {"undivided", fstr(r.undivided)},
               {"height_term", fstr(r.height_term)},
               {"local_term", fstr(r.local_term)},
               {"arch_term", fstr(r.arch_term)},
               {"slope_constant", rational_to_string(slope_constant(in.g))}});
  }
  return 0;
}

int run_report(const Options& opt) {
  ReportDocument rd = parse_report_document(read_input(opt.input));
  DegLambdaResult r = deg_lambda(rd.ledger);
  double lower = faltings_lower_bound(rd.ledger.g, rd.ledger.degree_k, rd.ledger.archs);
  std::optional<BostBound> bost;
  if (rd.bost_tau) {
    PeriodMatrix pm = PeriodMatrix::create(*rd.bost_tau);
    std::vector<MonteCarloResult> integrals;
    for (int k = 0; k < rd.ledger.degree_k; ++k)
      integrals.push_back(bost_integral(pm, opt.seed + static_cast<std::uint64_t>(k),
                                        rd.bost_samples, opt.tol));
    bost = bost_bound(rd.ledger.g, rd.ledger.degree_k, integrals);
  }
  if (opt.format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["g"] = rd.ledger.g;
    doc["degree_k"] = rd.ledger.degree_k;
    doc["deg_lambda"] = r.value;
    doc["terms"] = {{"height_term", r.height_term},
                    {"local_term", r.local_term},
                    {"arch_term", r.arch_term}};
    doc["faltings_lower_bound"] = lower;
    if (bost) doc["bost_bound"] = {{"value", bost->value}, {"std_error", bost->std_error}};
    emit_json(doc);
  } else {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"genus", std::to_string(rd.ledger.g)},
        {"degree", std::to_string(rd.ledger.degree_k)},
        {"deg_lambda", fstr(r.value)},
        {"height_term", fstr(r.height_term)},
        {"local_term", fstr(r.local_term)},
        {"arch_term", fstr(r.arch_term)},
        {"faltings_lower_bound", fstr(lower)}};
    if (bost)
      rows.emplace_back("bost_bound", fstr(bost->value) + " +- " + fstr(bost->std_error));
    emit_rows(rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariants of hyperelliptic curves: cluster trees, special fibers, Wronskians, "
               "theta functions, height ledgers"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](const char* name, const char* desc,
                        std::vector<std::string> formats) -> CLI::App* {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--input", opt.input, "input JSON file (use - for stdin)")->required();
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember(std::move(formats)));
    cmd->add_option("--schema-version", opt.schema_version, "expected schema version");
    return cmd;
  };

  CLI::App* tree = add_common("tree", "residue-class tree of a root configuration",
                              {"dot", "json"});
  CLI::App* residual = add_common("residual", "e-invariant and residual divisor multiplicities",
                                  {"json", "text"});
  for (CLI::App* cmd : {tree, residual})
    cmd->add_flag("--override-assumptions", opt.override_assumptions,
                  "proceed past soft assumption failures");
  add_common("phi", "correction divisors and self-intersections on a special fiber",
             {"json", "text"});
  add_common("verify-local", "check the local identity against a supplied ord_lambda",
             {"json", "text"});
  add_common("wronskian", "Wronskian identity checks and branch-point gap orders",
             {"json", "text"});
  CLI::App* theta_cmd = add_common("theta", "theta value and invariant norm at a point",
                                   {"json", "text"});
  CLI::App* tinv = add_common("tinv", "sample-independent T-invariant of a curve",
                              {"json", "text"});
  for (CLI::App* cmd : {theta_cmd, tinv})
    cmd->add_option("--tol", opt.tol, "numerical tolerance");
  tinv->add_option("--seed", opt.seed, "RNG seed");
  add_common("height", "degree of the stable height ledger", {"json", "text"});
  CLI::App* report = add_common("report", "full ledger report with comparison bounds",
                                {"json", "text"});
  report->add_option("--seed", opt.seed, "RNG seed");
  report->add_option("--tol", opt.tol, "numerical tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opt.schema_version != kSchemaVersion)
      throw SchemaError("unsupported schema version " + std::to_string(opt.schema_version));
    auto with_default = [&](const char* def) {
      if (opt.format.empty()) opt.format = def;
    };
    for (const CLI::App* cmd : app.get_subcommands()) {
      const std::string& name = cmd->get_name();
      if (name == "tree") { with_default("dot"); return run_tree(opt); }
      if (name == "residual") { with_default("json"); return run_residual(opt); }
      if (name == "phi") { with_default("json"); return run_phi(opt); }
      if (name == "verify-local") { with_default("json"); return run_verify_local(opt); }
      if (name == "wronskian") { with_default("json"); return run_wronskian(opt); }
      if (name == "theta") { with_default("json"); return run_theta(opt); }
      if (name == "tinv") { with_default("json"); return run_tinv(opt); }
      if (name == "height") { with_default("json"); return run_height(opt); }
      if (name == "report") { with_default("text"); return run_report(opt); }
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateSampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
