#pragma once

#include <map>
#include <string>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/rational.hpp"

namespace wsinv {

// A marked root configuration over Z_(p): the 2g+2 branch roots of a
// hyperelliptic equation y^2 = A f(x), all integral at p, A a p-unit.
struct RootConfig {
  int g = 0;
  Int p = 0;
  Rat A = 1;
  std::vector<Rat> roots;

  bool residue_char_is_two() const { return p == 2; }
};

// Soft assumptions checked up front. Structural requirements (root count,
// distinctness, prime p, integrality, unit A) are hard errors instead.
struct AssumptionReport {
  bool evenness_ok = true;   // v(a_i - a_j) even for all pairs
  bool residues_ok = true;   // >= 3 distinct root residues mod p
  std::vector<std::string> messages;

  bool all_ok() const { return evenness_ok && residues_ok; }
};

struct ClusterVertex {
  int level = 0;                // n(V)
  std::vector<int> members;     // root indices, ascending
  int parent = -1;              // -1 at the root vertex
  int phi() const { return static_cast<int>(members.size()); }
  // C(V) = 1 iff level and class size are both odd.
  bool parity_flag() const { return level % 2 == 1 && phi() % 2 == 1; }
};

// Levelwise residue-class tree of a root configuration: a vertex for each
// residue class mod p^n holding at least two roots, ordered root-first.
class ClusterTree {
 public:
  const RootConfig& config() const { return config_; }
  const AssumptionReport& report() const { return report_; }
  const std::vector<ClusterVertex>& vertices() const { return vertices_; }
  const ClusterVertex& vertex(int id) const { return vertices_.at(id); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const std::vector<int>& children(int id) const { return children_.at(id); }
  int depth() const;

  // Pairwise root valuation table, v[i][j] = v_p(a_i - a_j) for i != j.
  long pair_valuation(int i, int j) const;

  friend ClusterTree build_tree(const RootConfig& config);

 private:
  RootConfig config_;
  AssumptionReport report_;
  std::vector<ClusterVertex> vertices_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<long>> pair_val_;
};

// Throws ValidationError on structural defects (wrong root count, coincident
// roots, composite p, non-integral roots, non-unit A).
void check_structure(const RootConfig& config);

AssumptionReport validate(const RootConfig& config);

ClusterTree build_tree(const RootConfig& config);

// Sum of phi over the path vertices at levels 1..n(V). Cross-checked on every
// call against the counting identity sum_i min(n(V), v(a - a_i)) for each
// representative a of V; a mismatch is a logic error.
Int path_phi_sum(const ClusterTree& tree, int vertex_id);

// e-invariant: (1/2) sum over non-root vertices of (phi/2)(phi/2 - 1) for phi
// even and ((phi-1)/2)^2 for phi odd. Integral whenever evenness holds.
Rat compute_e(const ClusterTree& tree);

// Multiplicities of the residual divisor at the parity-0 vertices:
// e - (g/2) * path_phi_sum(V) + (g(g+1)/2) * n(V), keyed by vertex id.
// Requires a clean AssumptionReport unless overridden.
std::map<int, Rat> residual_divisor(const ClusterTree& tree, bool override_assumptions = false);

}  // namespace wsinv
