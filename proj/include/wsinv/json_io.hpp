#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wsinv/cluster_tree.hpp"
#include "wsinv/component_graph.hpp"
#include "wsinv/errors.hpp"
#include "wsinv/field.hpp"
#include "wsinv/height.hpp"
#include "wsinv/theta.hpp"

namespace wsinv {

// Version stamped into every emitted document; parsers reject other values.
inline constexpr int kSchemaVersion = 1;

// {"g": int, "p": int, "A": "num/den", "roots": ["num/den", ...]}
RootConfig parse_root_config(const std::string& text);
std::string root_config_to_json(const RootConfig& cfg);

// {"g": int, "components": [{"name", "m", "pa", "internal_nodes"}],
//  "intersection": [[int]], "sections": [{"name", "meets"}]}
// plus two optional keys: "E" (map component name -> rational string, the
// residual divisor) and "ord_lambda" (integer).
struct FiberDocument {
  int g = 0;
  std::vector<FiberComponent> components;
  std::vector<std::vector<long>> intersection;
  std::vector<SectionIncidence> sections;
  std::optional<VerticalQDivisor> residual;  // in component order
  std::optional<Int> ord_lambda;
};
FiberDocument parse_fiber_document(const std::string& text);

// {"g": int, "field": "Q" | {"Fp": p}, "A": "num/den", "roots": [...]}
// or {"g": int, "field": ..., "a": [...], "b": [...]} with ascending
// coefficient lists for y^2 + a(x) y = b(x).
struct CurveDocument {
  int g = 0;
  CoefficientField field = CoefficientField::rationals();
  std::optional<Rat> a_scalar;
  std::optional<std::vector<Rat>> roots;
  std::optional<std::vector<Rat>> a_poly;
  std::optional<std::vector<Rat>> b_poly;
};
CurveDocument parse_curve_document(const std::string& text);

// Analytic inputs: {"tau": [[re, im], ...]} (row-major, g*g pairs, g inferred
// from the count) and/or {"branch_points": [[re, im], ...]}; optional
// {"z": [[re, im], ...]} evaluation point of length g.
struct AnalyticDocument {
  std::optional<CMat> tau;
  std::optional<std::vector<std::complex<double>>> branch_points;
  std::optional<CVec> z;
};
AnalyticDocument parse_analytic_document(const std::string& text);

// Ledger mirroring GlobalHeightInput:
// {"g", "degree_k", "nt_heights": [float], "locals": [{"place",
//  "log_residue_size", "ord_delta", "sum_phi_sq", "e_omega_degree"}],
//  "archs": [{"embedding", "log_t"}]}
GlobalHeightInput parse_height_input(const std::string& text);

// Report driver document: {"ledger": <height input>} with an optional
// {"bost": {"tau": [[re, im], ...], "samples": int}} block requesting the
// Monte-Carlo comparison bound at the same tau for every embedding.
struct ReportDocument {
  GlobalHeightInput ledger;
  std::optional<CMat> bost_tau;
  std::size_t bost_samples = 20000;
};
ReportDocument parse_report_document(const std::string& text);

// DOT rendering: one node per vertex, label "n=..., phi=..., C=...", one
// undirected edge from each non-root vertex to its parent.
std::string tree_to_dot(const ClusterTree& tree);

}  // namespace wsinv
