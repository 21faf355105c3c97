#include "wsinv/component_graph.hpp"

#include <algorithm>
#include <queue>

namespace wsinv {

ComponentGraph ComponentGraph::create(int genus, std::vector<FiberComponent> components,
                                      std::vector<std::vector<long>> intersection,
                                      std::optional<std::vector<long>> omega_override) {
  size_t n = components.size();
  if (n == 0) throw ValidationError("fiber needs at least one component");
  if (genus < 0) throw ValidationError("genus must be nonnegative");
  if (intersection.size() != n) throw ValidationError("intersection matrix size mismatch");
  for (const auto& row : intersection)
    if (row.size() != n) throw ValidationError("intersection matrix not square");

  for (size_t i = 0; i < n; ++i) {
    if (components[i].multiplicity <= 0)
      throw ValidationError("component multiplicity must be positive: " + components[i].name);
    if (components[i].pa < 0 || components[i].internal_nodes < 0)
      throw ValidationError("negative genus or node count: " + components[i].name);
    for (size_t j = 0; j < n; ++j) {
      if (intersection[i][j] != intersection[j][i])
        throw ValidationError("intersection matrix not symmetric");
      if (i != j && intersection[i][j] < 0)
        throw ValidationError("negative off-diagonal intersection number");
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (components[i].name == components[j].name)
        throw ValidationError("duplicate component name: " + components[i].name);

  // Each component meets the full fiber with total degree zero.
  for (size_t i = 0; i < n; ++i) {
    long acc = 0;
    for (size_t j = 0; j < n; ++j) acc += intersection[i][j] * components[j].multiplicity;
    if (acc != 0)
      throw ValidationError("fiber kernel violated: (C, fiber) != 0 at " + components[i].name);
  }

  // Connectivity of the dual graph.
  std::vector<bool> seen(n, false);
  std::queue<size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    size_t i = frontier.front();
    frontier.pop();
    for (size_t j = 0; j < n; ++j) {
      if (i != j && intersection[i][j] > 0 && !seen[j]) {
        seen[j] = true;
        frontier.push(j);
      }
    }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw ValidationError("dual graph is disconnected");

  std::vector<long> omega(n);
  long total = 0;
  for (size_t i = 0; i < n; ++i) {
    omega[i] = 2 * components[i].pa - 2 - intersection[i][i] + 2 * components[i].internal_nodes;
    if (omega[i] < -2)
      throw ValidationError("adjunction degree below -2 at " + components[i].name);
    total += components[i].multiplicity * omega[i];
  }
  if (total != 2 * genus - 2)
    throw ValidationError("fiber omega degree " + std::to_string(total) + " != 2g-2");

  if (omega_override) {
    if (omega_override->size() != n) throw ValidationError("omega override length mismatch");
    for (size_t i = 0; i < n; ++i)
      if ((*omega_override)[i] != omega[i])
        throw ValidationError("supplied omega degree disagrees with adjunction at " +
                              components[i].name);
  }

  ComponentGraph g;
  g.genus_ = genus;
  g.components_ = std::move(components);
  g.intersection_ = std::move(intersection);
  g.omega_ = std::move(omega);
  return g;
}

int ComponentGraph::index_of(const std::string& name) const {
  for (size_t i = 0; i < components_.size(); ++i)
    if (components_[i].name == name) return static_cast<int>(i);
  throw ValidationError("unknown component: " + name);
}

VerticalQDivisor ComponentGraph::fiber_divisor() const {
  VerticalQDivisor f;
  f.reserve(components_.size());
  for (const auto& c : components_) f.push_back(Rat(c.multiplicity));
  return f;
}

namespace {

void require_support(const ComponentGraph& graph, const VerticalQDivisor& d) {
  if (static_cast<int>(d.size()) != graph.size())
    throw ValidationError("divisor not supported on this fiber");
}

}  // namespace

Rat pair(const ComponentGraph& graph, const VerticalQDivisor& d1, const VerticalQDivisor& d2) {
  require_support(graph, d1);
  require_support(graph, d2);
  Rat acc(0);
  for (int i = 0; i < graph.size(); ++i)
    for (int j = 0; j < graph.size(); ++j) acc += d1[i] * Rat(graph.intersection(i, j)) * d2[j];
  return acc;
}

Rat omega_degree(const ComponentGraph& graph, const VerticalQDivisor& d) {
  require_support(graph, d);
  Rat acc(0);
  for (int i = 0; i < graph.size(); ++i) acc += d[i] * Rat(graph.omega_degree_component(i));
  return acc;
}

VerticalQDivisor phi_divisor(const ComponentGraph& graph, const SectionIncidence& p) {
  int comp = graph.index_of(p.meets);
  if (graph.component(comp).multiplicity != 1)
    throw ValidationError("section " + p.name + " meets a multiplicity > 1 component");

  int n = graph.size();
  int g = graph.genus();
  RatMat m(n, RatVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = Rat(graph.intersection(i, j));

  RatVec b(n);
  Rat balance(0);
  for (int i = 0; i < n; ++i) {
    b[i] = Rat(graph.omega_degree_component(i));
    if (i == comp) b[i] -= Rat(2 * g - 2);
    balance += Rat(graph.component(i).multiplicity) * b[i];
  }
  // Solvability: b must pair to zero with the kernel vector m_C, which is
  // the fiber total (2g-2) minus the section's own (2g-2).
  if (balance != 0) throw std::logic_error("right-hand side not orthogonal to the fiber kernel");

  LinearSolution sol = solve_exact(m, b);
  if (!sol.consistent) throw ValidationError("phi system inconsistent: invalid fiber data");
  if (sol.kernel.size() != 1)
    throw ValidationError("fiber intersection matrix kernel is not one-dimensional");

  VerticalQDivisor phi = sol.particular;
  VerticalQDivisor fiber = graph.fiber_divisor();
  Rat shift = phi[comp] / fiber[comp];
  for (int i = 0; i < n; ++i) phi[i] -= shift * fiber[i];

  // Re-substitute both defining constraints.
  if (phi[comp] != 0) throw std::logic_error("phi normalization failed");
  for (int i = 0; i < n; ++i) {
    Rat acc(0);
    for (int j = 0; j < n; ++j) acc += Rat(graph.intersection(i, j)) * phi[j];
    if (acc != b[i]) throw std::logic_error("phi system residual nonzero after solve");
  }
  return phi;
}

Rat phi_self_intersection(const ComponentGraph& graph, const SectionIncidence& p) {
  VerticalQDivisor phi = phi_divisor(graph, p);
  Rat value = pair(graph, phi, phi);

  // Normalization independence: shifting by the full fiber must not move the
  // self-intersection, since the fiber pairs to zero with everything.
  VerticalQDivisor shifted = phi;
  VerticalQDivisor fiber = graph.fiber_divisor();
  for (int i = 0; i < graph.size(); ++i) shifted[i] += fiber[i];
  if (pair(graph, shifted, shifted) != value)
    throw std::logic_error("phi self-intersection not fiber-shift invariant");

  if (value > 0) throw std::logic_error("phi self-intersection must be nonpositive");
  return value;
}

long node_count(const ComponentGraph& graph) {
  long acc = 0;
  for (int i = 0; i < graph.size(); ++i) {
    acc += graph.component(i).internal_nodes;
    for (int j = i + 1; j < graph.size(); ++j) acc += graph.intersection(i, j);
  }
  return acc;
}

namespace {

Rat phi_square_sum(const ComponentGraph& graph, const std::vector<SectionIncidence>& sections) {
  int g = graph.genus();
  if (static_cast<int>(sections.size()) != 2 * g + 2)
    throw ValidationError("expected " + std::to_string(2 * g + 2) + " sections, got " +
                          std::to_string(sections.size()));
  Rat acc(0);
  for (const auto& p : sections) acc += phi_self_intersection(graph, p);
  return acc;
}

}  // namespace

Rat ord_xi(const ComponentGraph& graph, const std::vector<SectionIncidence>& sections,
           const VerticalQDivisor& e) {
  int g = graph.genus();
  Rat acc = -phi_square_sum(graph, sections);
  acc += Rat((4 * g - 2) * (g + 1)) * Rat(node_count(graph));
  acc += Rat(8) * omega_degree(graph, e);
  return acc;
}

LocalIdentityResult verify_local_identity(const ComponentGraph& graph,
                                          const std::vector<SectionIncidence>& sections,
                                          const VerticalQDivisor& e, const Int& ord_lambda) {
  int g = graph.genus();
  LocalIdentityResult out;
  out.lhs = Rat(3 * g - 1) * Rat(ord_lambda);
  out.rhs = -phi_square_sum(graph, sections) / 2;
  out.rhs += Rat((2 * g - 1) * (g + 1)) * Rat(node_count(graph));
  out.rhs += Rat(4) * omega_degree(graph, e);
  out.residual = out.lhs - out.rhs;
  return out;
}

}  // namespace wsinv
