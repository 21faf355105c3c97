#include "wsinv/cluster_tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wsinv/field.hpp"

namespace wsinv {

namespace {

int expected_root_count(const RootConfig& config) { return 2 * config.g + 2; }

std::vector<std::vector<long>> pairwise_valuations(const RootConfig& config) {
  int m = static_cast<int>(config.roots.size());
  std::vector<std::vector<long>> v(m, std::vector<long>(m, 0));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      auto val = p_valuation(config.roots[i] - config.roots[j], config.p);
      if (!val.has_value())
        throw ValidationError("coincident roots at indices " + std::to_string(i) + ", " +
                              std::to_string(j));
      v[i][j] = v[j][i] = *val;
    }
  }
  return v;
}

}  // namespace

void check_structure(const RootConfig& config) {
  if (config.g < 2) throw ValidationError("genus must be >= 2");
  if (!is_prime(config.p)) throw ValidationError("p must be prime, got " + config.p.str());
  int m = expected_root_count(config);
  if (static_cast<int>(config.roots.size()) != m)
    throw ValidationError("expected " + std::to_string(m) + " roots, got " +
                          std::to_string(config.roots.size()));
  auto va = p_valuation(config.A, config.p);
  if (!va.has_value() || *va != 0)
    throw ValidationError("leading unit A must have valuation 0");
  for (int i = 0; i < m; ++i) {
    auto v = p_valuation(config.roots[i], config.p);
    if (v.has_value() && *v < 0)
      throw ValidationError("root " + std::to_string(i) + " is not integral at p");
  }
  pairwise_valuations(config);  // throws on coincident roots
}

AssumptionReport validate(const RootConfig& config) {
  check_structure(config);
  AssumptionReport report;
  auto v = pairwise_valuations(config);
  int m = expected_root_count(config);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (v[i][j] % 2 != 0) {
        report.evenness_ok = false;
        std::ostringstream msg;
        msg << "odd valuation v(a_" << i + 1 << " - a_" << j + 1 << ") = " << v[i][j];
        report.messages.push_back(msg.str());
      }
    }
  }
  // Root residues mod p; roots are p-integral so the denominator is a unit.
  CoefficientField fp = CoefficientField::prime_field(config.p);
  std::vector<Rat> residues;
  for (const Rat& a : config.roots) {
    Rat r = fp.reduce(a);
    if (std::find(residues.begin(), residues.end(), r) == residues.end()) residues.push_back(r);
  }
  if (residues.size() < 3) {
    report.residues_ok = false;
    report.messages.push_back("only " + std::to_string(residues.size()) +
                              " distinct root residues mod p (need >= 3)");
  }
  return report;
}

ClusterTree build_tree(const RootConfig& config) {
  check_structure(config);
  ClusterTree tree;
  tree.config_ = config;
  tree.report_ = validate(config);
  tree.pair_val_ = pairwise_valuations(config);

  int m = expected_root_count(config);
  long max_val = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) max_val = std::max(max_val, tree.pair_val_[i][j]);

  ClusterVertex root;
  root.level = 0;
  root.members.resize(m);
  std::iota(root.members.begin(), root.members.end(), 0);
  tree.vertices_.push_back(root);

  // Classes at level n: i ~ j iff v(a_i - a_j) >= n. The relation is already
  // transitive by the ultrametric inequality; union-find keeps that honest.
  std::vector<int> previous_vertex_of_root(m, 0);  // deepest vertex containing each root so far
  for (long n = 1; n <= max_val; ++n) {
    std::vector<int> parent_uf(m);
    std::iota(parent_uf.begin(), parent_uf.end(), 0);
    auto find = [&](int x) {
      while (parent_uf[x] != x) x = parent_uf[x] = parent_uf[parent_uf[x]];
      return x;
    };
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (tree.pair_val_[i][j] >= n) parent_uf[find(i)] = find(j);
      }
    }
    std::map<int, std::vector<int>> classes;
    for (int i = 0; i < m; ++i) classes[find(i)].push_back(i);
    for (auto& [rep, members] : classes) {
      if (members.size() < 2) continue;
      ClusterVertex v;
      v.level = static_cast<int>(n);
      v.members = members;
      v.parent = previous_vertex_of_root[members.front()];
      int id = static_cast<int>(tree.vertices_.size());
      tree.vertices_.push_back(v);
      for (int r : members) previous_vertex_of_root[r] = id;
    }
  }

  tree.children_.assign(tree.vertices_.size(), {});
  for (int id = 1; id < tree.vertex_count(); ++id)
    tree.children_[tree.vertices_[id].parent].push_back(id);
  return tree;
}

int ClusterTree::depth() const {
  int d = 0;
  for (const auto& v : vertices_) d = std::max(d, v.level);
  return d;
}

long ClusterTree::pair_valuation(int i, int j) const { return pair_val_.at(i).at(j); }

Int path_phi_sum(const ClusterTree& tree, int vertex_id) {
  const ClusterVertex& target = tree.vertex(vertex_id);
  Int sum = 0;
  for (int id = vertex_id; id != -1 && tree.vertex(id).level >= 1; id = tree.vertex(id).parent)
    sum += tree.vertex(id).phi();

  // Counting identity: for any representative a of V,
  // sum_i min(n(V), v(a - a_i)) equals the path sum (v(a - a) counts as n).
  int m = static_cast<int>(tree.config().roots.size());
  long n = target.level;
  for (int rep : target.members) {
    Int check = 0;
    for (int i = 0; i < m; ++i) {
      if (i == rep) {
        check += n;
      } else {
        check += std::min<long>(n, tree.pair_valuation(rep, i));
      }
    }
    if (check != sum)
      throw std::logic_error("path phi sum disagrees with the valuation counting identity");
  }
  return sum;
}

Rat compute_e(const ClusterTree& tree) {
  Rat e(0);
  for (int id = 1; id < tree.vertex_count(); ++id) {
    long phi = tree.vertex(id).phi();
    if (phi % 2 == 0) {
      Rat half(phi, 2);
      e += half * (half - 1);
    } else {
      Rat half(phi - 1, 2);
      e += half * half;
    }
  }
  e /= 2;
  if (tree.report().evenness_ok && denominator(e) != 1)
    throw std::logic_error("e-invariant must be integral when evenness holds");
  return e;
}

std::map<int, Rat> residual_divisor(const ClusterTree& tree, bool override_assumptions) {
  if (!tree.report().all_ok() && !override_assumptions) {
    std::string detail;
    for (const auto& msg : tree.report().messages) detail += "\n  " + msg;
    throw ValidationError("assumption violations (pass override to proceed):" + detail);
  }
  int g = tree.config().g;
  Rat e = compute_e(tree);
  Rat half_g(g, 2);
  Rat level_weight(g * (g + 1), 2);

  bool all_phi_small = true;
  for (const auto& v : tree.vertices())
    if (v.phi() > 2 * g && v.level >= 1) all_phi_small = false;

  std::map<int, Rat> mult;
  for (int id = 0; id < tree.vertex_count(); ++id) {
    const ClusterVertex& v = tree.vertex(id);
    if (v.parity_flag()) continue;
    Rat value = e - half_g * Rat(path_phi_sum(tree, id)) + level_weight * Rat(v.level);
    if (all_phi_small && value < 0)
      throw std::logic_error("residual multiplicity negative despite phi <= 2g");
    mult[id] = value;
  }
  return mult;
}

}  // namespace wsinv
