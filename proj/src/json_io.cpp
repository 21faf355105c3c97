#include "wsinv/json_io.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace wsinv {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw SchemaError(msg); }

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) fail("malformed JSON");
  return doc;
}

// Documents may omit schema_version; any explicit value must match.
void check_version(const json& doc) {
  if (!doc.is_object()) fail("document must be a JSON object");
  auto it = doc.find("schema_version");
  if (it == doc.end()) return;
  if (!it->is_number_integer() || it->get<long long>() != kSchemaVersion)
    fail("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

long long as_int(const json& v, const char* key) {
  if (!v.is_number_integer()) fail(std::string("\"") + key + "\" must be an integer");
  return v.get<long long>();
}

double as_double(const json& v, const char* key) {
  if (!v.is_number()) fail(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const char* key) {
  if (!v.is_string()) fail(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

// Rationals travel as "num/den" strings; bare JSON integers are accepted too.
Rat as_rational(const json& v, const char* key) {
  try {
    if (v.is_number_integer()) return Rat(Int(v.get<long long>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(std::string("\"") + key + "\": " + e.what());
  }
  fail(std::string("\"") + key + "\" must be an integer or \"num/den\" string");
}

// Big integers likewise: a bare integer or a decimal string.
Int as_big_int(const json& v, const char* key) {
  Rat q = as_rational(v, key);
  if (denominator(q) != 1) fail(std::string("\"") + key + "\" must be an integer");
  return numerator(q);
}

std::vector<Rat> as_rational_list(const json& v, const char* key) {
  if (!v.is_array()) fail(std::string("\"") + key + "\" must be an array");
  std::vector<Rat> out;
  out.reserve(v.size());
  for (const json& e : v) out.push_back(as_rational(e, key));
  return out;
}

std::complex<double> as_complex(const json& v, const char* key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(std::string("\"") + key + "\" entries must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

// Row-major list of g*g [re, im] pairs; "g" in the enclosing document is
// optional when the count is a perfect square.
CMat parse_tau(const json& doc, const json& entries) {
  if (!entries.is_array()) fail("\"tau\" must be an array of [re, im] pairs");
  int g = 0;
  if (auto it = doc.find("g"); it != doc.end()) {
    g = static_cast<int>(as_int(*it, "g"));
  } else {
    g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
  }
  if (g < 1 || static_cast<std::size_t>(g) * g != entries.size())
    fail("\"tau\" must hold g*g entries");
  CMat tau(g, g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) tau(i, j) = as_complex(entries[i * g + j], "tau");
  return tau;
}

GlobalHeightInput height_from_json(const json& doc) {
  check_version(doc);
  GlobalHeightInput in;
  in.g = static_cast<int>(as_int(require(doc, "g"), "g"));
  in.degree_k = static_cast<int>(as_int(require(doc, "degree_k"), "degree_k"));

  const json& hts = require(doc, "nt_heights");
  if (!hts.is_array()) fail("\"nt_heights\" must be an array");
  for (const json& h : hts) in.nt_heights.push_back(as_double(h, "nt_heights"));

  const json& locals = require(doc, "locals");
  if (!locals.is_array()) fail("\"locals\" must be an array");
  for (const json& entry : locals) {
    if (!entry.is_object()) fail("\"locals\" entries must be objects");
    LocalLedgerEntry e;
    e.place = as_string(require(entry, "place"), "place");
    e.log_residue_size = as_double(require(entry, "log_residue_size"), "log_residue_size");
    e.ord_delta = as_big_int(require(entry, "ord_delta"), "ord_delta");
    e.sum_phi_sq = as_rational(require(entry, "sum_phi_sq"), "sum_phi_sq");
    e.e_omega_degree = as_rational(require(entry, "e_omega_degree"), "e_omega_degree");
    in.locals.push_back(std::move(e));
  }

  const json& archs = require(doc, "archs");
  if (!archs.is_array()) fail("\"archs\" must be an array");
  for (const json& entry : archs) {
    if (!entry.is_object()) fail("\"archs\" entries must be objects");
    ArchLedgerEntry e;
    e.embedding = as_string(require(entry, "embedding"), "embedding");
    e.log_t = as_double(require(entry, "log_t"), "log_t");
    in.archs.push_back(std::move(e));
  }
  return in;
}

}  // namespace

RootConfig parse_root_config(const std::string& text) {
  json doc = parse_text(text);
  check_version(doc);
  RootConfig cfg;
  cfg.g = static_cast<int>(as_int(require(doc, "g"), "g"));
  cfg.p = as_big_int(require(doc, "p"), "p");
  cfg.A = as_rational(require(doc, "A"), "A");
  cfg.roots = as_rational_list(require(doc, "roots"), "roots");
  return cfg;
}

std::string root_config_to_json(const RootConfig& cfg) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["g"] = cfg.g;
  doc["p"] = cfg.p.str();
  doc["A"] = rational_to_string(cfg.A);
  json roots = json::array();
  for (const Rat& r : cfg.roots) roots.push_back(rational_to_string(r));
  doc["roots"] = std::move(roots);
  return doc.dump(2) + "\n";
}

FiberDocument parse_fiber_document(const std::string& text) {
  json doc = parse_text(text);
  check_version(doc);
  FiberDocument out;
  out.g = static_cast<int>(as_int(require(doc, "g"), "g"));

  const json& comps = require(doc, "components");
  if (!comps.is_array() || comps.empty()) fail("\"components\" must be a nonempty array");
  for (const json& entry : comps) {
    if (!entry.is_object()) fail("\"components\" entries must be objects");
    FiberComponent c;
    c.name = as_string(require(entry, "name"), "name");
    c.multiplicity = as_int(require(entry, "m"), "m");
    c.pa = as_int(require(entry, "pa"), "pa");
    if (auto it = entry.find("internal_nodes"); it != entry.end())
      c.internal_nodes = as_int(*it, "internal_nodes");
    out.components.push_back(std::move(c));
  }

  const json& inter = require(doc, "intersection");
  if (!inter.is_array() || inter.size() != out.components.size())
    fail("\"intersection\" must be a square matrix over the components");
  for (const json& row : inter) {
    if (!row.is_array() || row.size() != out.components.size())
      fail("\"intersection\" must be a square matrix over the components");
    std::vector<long> r;
    for (const json& e : row) r.push_back(as_int(e, "intersection"));
    out.intersection.push_back(std::move(r));
  }

  const json& sections = require(doc, "sections");
  if (!sections.is_array()) fail("\"sections\" must be an array");
  for (const json& entry : sections) {
    if (!entry.is_object()) fail("\"sections\" entries must be objects");
    SectionIncidence s;
    s.name = as_string(require(entry, "name"), "name");
    s.meets = as_string(require(entry, "meets"), "meets");
    out.sections.push_back(std::move(s));
  }

  if (auto it = doc.find("E"); it != doc.end()) {
    if (!it->is_object()) fail("\"E\" must map component names to rationals");
    VerticalQDivisor div(out.components.size(), Rat(0));
    for (const auto& [name, value] : it->items()) {
      std::size_t idx = out.components.size();
      for (std::size_t i = 0; i < out.components.size(); ++i)
        if (out.components[i].name == name) idx = i;
      if (idx == out.components.size()) fail("\"E\" names unknown component \"" + name + "\"");
      div[idx] = as_rational(value, "E");
    }
    out.residual = std::move(div);
  }
  if (auto it = doc.find("ord_lambda"); it != doc.end())
    out.ord_lambda = as_big_int(*it, "ord_lambda");
  return out;
}

CurveDocument parse_curve_document(const std::string& text) {
  json doc = parse_text(text);
  check_version(doc);
  CurveDocument out;
  out.g = static_cast<int>(as_int(require(doc, "g"), "g"));

  const json& field = require(doc, "field");
  if (field.is_string() && field.get<std::string>() == "Q") {
    out.field = CoefficientField::rationals();
  } else if (field.is_object() && field.contains("Fp")) {
    out.field = CoefficientField::prime_field(as_big_int(field.at("Fp"), "Fp"));
  } else {
    fail("\"field\" must be \"Q\" or {\"Fp\": p}");
  }

  bool has_roots = doc.contains("roots");
  bool has_ab = doc.contains("a") && doc.contains("b");
  if (has_roots == has_ab) fail("provide either \"A\"+\"roots\" or \"a\"+\"b\"");
  if (has_roots) {
    out.a_scalar = as_rational(require(doc, "A"), "A");
    out.roots = as_rational_list(doc.at("roots"), "roots");
  } else {
    out.a_poly = as_rational_list(doc.at("a"), "a");
    out.b_poly = as_rational_list(doc.at("b"), "b");
  }
  return out;
}

AnalyticDocument parse_analytic_document(const std::string& text) {
  json doc = parse_text(text);
  check_version(doc);
  AnalyticDocument out;
  if (auto it = doc.find("tau"); it != doc.end()) out.tau = parse_tau(doc, *it);
  if (auto it = doc.find("branch_points"); it != doc.end()) {
    if (!it->is_array() || it->size() < 3) fail("\"branch_points\" needs at least 3 entries");
    std::vector<std::complex<double>> pts;
    for (const json& e : *it) pts.push_back(as_complex(e, "branch_points"));
    out.branch_points = std::move(pts);
  }
  if (auto it = doc.find("z"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail("\"z\" must be a nonempty array of [re, im] pairs");
    CVec z(it->size());
    for (std::size_t i = 0; i < it->size(); ++i) z(static_cast<int>(i)) = as_complex((*it)[i], "z");
    out.z = std::move(z);
  }
  if (!out.tau && !out.branch_points) fail("need \"tau\" or \"branch_points\"");
  return out;
}

GlobalHeightInput parse_height_input(const std::string& text) {
  return height_from_json(parse_text(text));
}

ReportDocument parse_report_document(const std::string& text) {
  json doc = parse_text(text);
  check_version(doc);
  ReportDocument out;
  // A bare ledger document doubles as a report request.
  if (auto it = doc.find("ledger"); it != doc.end()) {
    if (!it->is_object()) fail("\"ledger\" must be an object");
    out.ledger = height_from_json(*it);
  } else {
    out.ledger = height_from_json(doc);
  }
  if (auto it = doc.find("bost"); it != doc.end()) {
    if (!it->is_object()) fail("\"bost\" must be an object");
    out.bost_tau = parse_tau(*it, require(*it, "tau"));
    if (auto s = it->find("samples"); s != it->end()) {
      long long n = as_int(*s, "samples");
      if (n < 1) fail("\"samples\" must be positive");
      out.bost_samples = static_cast<std::size_t>(n);
    }
  }
  return out;
}

std::string tree_to_dot(const ClusterTree& tree) {
  std::ostringstream os;
  os << "graph cluster_tree {\n";
  for (int i = 0; i < tree.vertex_count(); ++i) {
    const ClusterVertex& v = tree.vertex(i);
    os << "  v" << i << " [label=\"n=" << v.level << ", phi=" << v.phi()
       << ", C=" << (v.parity_flag() ? 1 : 0) << "\"];\n";
  }
  for (int i = 0; i < tree.vertex_count(); ++i) {
    const ClusterVertex& v = tree.vertex(i);
    if (v.parent >= 0) os << "  v" << v.parent << " -- v" << i << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace wsinv
