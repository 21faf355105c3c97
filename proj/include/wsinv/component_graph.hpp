#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/exact_linalg.hpp"
#include "wsinv/rational.hpp"

namespace wsinv {

struct FiberComponent {
  std::string name;
  long multiplicity = 1;    // m_C, positive
  long pa = 0;              // arithmetic genus of the component
  long internal_nodes = 0;  // self-nodes, counted into adjunction and node_count
};

struct SectionIncidence {
  std::string name;
  std::string meets;  // component crossed transversally in the smooth locus
};

// Rational-coefficient vertical divisor, one coefficient per component in
// graph order. Houses the correction divisors Phi_P and the residual divisor.
using VerticalQDivisor = std::vector<Rat>;

// Special fiber of a semistable fibration presented as components with
// multiplicities and their symmetric intersection matrix. Construction
// verifies: symmetry, nonnegative off-diagonal entries, M m = 0, connectivity
// of the dual graph, adjunction degrees (omega, C) >= -2, and the fiber total
// sum m_C (omega, C) = 2g - 2.
class ComponentGraph {
 public:
  static ComponentGraph create(int genus, std::vector<FiberComponent> components,
                               std::vector<std::vector<long>> intersection,
                               std::optional<std::vector<long>> omega_override = {});

  int genus() const { return genus_; }
  int size() const { return static_cast<int>(components_.size()); }
  const FiberComponent& component(int i) const { return components_.at(i); }
  const std::vector<FiberComponent>& components() const { return components_; }
  long intersection(int i, int j) const { return intersection_.at(i).at(j); }
  int index_of(const std::string& name) const;  // throws on unknown name

  // (omega, C_i) = 2 pa - 2 - (C_i, C_i) + 2 internal_nodes, by adjunction.
  long omega_degree_component(int i) const { return omega_.at(i); }

  VerticalQDivisor zero_divisor() const { return VerticalQDivisor(components_.size(), Rat(0)); }
  VerticalQDivisor fiber_divisor() const;  // coefficients = multiplicities

 private:
  int genus_ = 0;
  std::vector<FiberComponent> components_;
  std::vector<std::vector<long>> intersection_;
  std::vector<long> omega_;
};

// Bilinear extension of the intersection matrix, t(x1) M x2.
Rat pair(const ComponentGraph& graph, const VerticalQDivisor& d1, const VerticalQDivisor& d2);

// sum coeff(C) * (omega, C).
Rat omega_degree(const ComponentGraph& graph, const VerticalQDivisor& d);

// The unique vertical Q-divisor with ((2g-2) P - omega + Phi, C) = 0 for every
// component C and coefficient 0 on the component P meets. Requires that
// component to have multiplicity 1 (transversal incidence in the smooth
// locus). The defining equations are re-substituted after solving.
VerticalQDivisor phi_divisor(const ComponentGraph& graph, const SectionIncidence& p);

// pair(Phi_P, Phi_P); always <= 0, and invariant under shifting Phi_P by a
// multiple of the full fiber (asserted on every call).
Rat phi_self_intersection(const ComponentGraph& graph, const SectionIncidence& p);

// Number of nodes of the geometric special fiber: sum of the off-diagonal
// intersection numbers over unordered pairs plus all internal nodes. Equals
// the local valuation of the Noether discriminant.
long node_count(const ComponentGraph& graph);

// -sum_P Phi_P^2 + (4g-2)(g+1) node_count + 8 omega_degree(E),
// over the full list of 2g+2 marked sections.
Rat ord_xi(const ComponentGraph& graph, const std::vector<SectionIncidence>& sections,
           const VerticalQDivisor& e);

struct LocalIdentityResult {
  Rat lhs;       // (3g-1) * ord_lambda
  Rat rhs;       // -1/2 sum Phi^2 + (2g-1)(g+1) node_count + 4 omega_degree(E)
  Rat residual;  // lhs - rhs; zero is the success criterion
};

LocalIdentityResult verify_local_identity(const ComponentGraph& graph,
                                          const std::vector<SectionIncidence>& sections,
                                          const VerticalQDivisor& e, const Int& ord_lambda);

}  // namespace wsinv
