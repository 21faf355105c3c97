#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "wsinv/cluster_tree.hpp"
#include "wsinv/errors.hpp"
#include "wsinv/rational.hpp"

using namespace wsinv;

namespace {

// Valuation by repeated division. Integer inputs are enough here.
long val_oracle(Int x, const Int& p) {
  REQUIRE(x != 0);
  if (x < 0) x = -x;
  long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

Int pow_int(const Int& p, long e) {
  Int r = 1;
  for (long i = 0; i < e; ++i) r *= p;
  return r;
}

Int mod_positive(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Residue classes mod p^n holding at least two roots, as sorted index lists.
std::vector<std::vector<int>> partition_oracle(const std::vector<Int>& roots, const Int& p,
                                               long n) {
  Int pn = pow_int(p, n);
  std::map<Int, std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(roots.size()); ++i)
    classes[mod_positive(roots[i], pn)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [residue, members] : classes)
    if (members.size() >= 2) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

RootConfig make_config(int g, long p, const std::vector<long>& roots) {
  RootConfig cfg;
  cfg.g = g;
  cfg.p = p;
  for (long r : roots) cfg.roots.push_back(Rat(r));
  return cfg;
}

}  // namespace

TEST_CASE("worked example: tree shape, parity flags, e, residual") {
  RootConfig cfg = make_config(2, 5, {1, 2, 3, 0, 25, 150});
  ClusterTree tree = build_tree(cfg);

  REQUIRE(tree.vertex_count() == 4);
  CHECK(tree.depth() == 3);

  const ClusterVertex& v0 = tree.vertex(0);
  CHECK(v0.level == 0);
  CHECK(v0.phi() == 6);
  CHECK(v0.parent == -1);
  CHECK_FALSE(v0.parity_flag());
  CHECK((v0.members == std::vector<int>{0, 1, 2, 3, 4, 5}));

  const ClusterVertex& v1 = tree.vertex(1);
  CHECK(v1.level == 1);
  CHECK((v1.members == std::vector<int>{3, 4, 5}));
  CHECK(v1.parent == 0);
  CHECK(v1.parity_flag());  // level and size both odd

  const ClusterVertex& v2 = tree.vertex(2);
  CHECK(v2.level == 2);
  CHECK((v2.members == std::vector<int>{3, 4, 5}));
  CHECK(v2.parent == 1);
  CHECK_FALSE(v2.parity_flag());

  const ClusterVertex& v3 = tree.vertex(3);
  CHECK(v3.level == 3);
  CHECK((v3.members == std::vector<int>{4, 5}));
  CHECK(v3.parent == 2);
  CHECK_FALSE(v3.parity_flag());

  CHECK((tree.children(0) == std::vector<int>{1}));
  CHECK((tree.children(1) == std::vector<int>{2}));
  CHECK((tree.children(3) == std::vector<int>{}));

  CHECK(tree.pair_valuation(3, 4) == 2);  // v(0 - 25)
  CHECK(tree.pair_valuation(3, 5) == 2);  // v(0 - 150)
  CHECK(tree.pair_valuation(4, 5) == 3);  // v(25 - 150)
  CHECK(tree.pair_valuation(0, 1) == 0);

  CHECK(path_phi_sum(tree, 0) == 0);
  CHECK(path_phi_sum(tree, 1) == 3);
  CHECK(path_phi_sum(tree, 2) == 6);
  CHECK(path_phi_sum(tree, 3) == 8);

  CHECK(compute_e(tree) == Rat(1));

  // The level-3 pair has odd valuation, so the report is dirty; the residue
  // count is fine (four residues mod 5).
  CHECK_FALSE(tree.report().evenness_ok);
  CHECK(tree.report().residues_ok);
  CHECK(tree.report().messages.size() == 1);
  CHECK_FALSE(tree.report().all_ok());

  CHECK_THROWS_AS(residual_divisor(tree), ValidationError);

  std::map<int, Rat> res = residual_divisor(tree, true);
  REQUIRE(res.size() == 3);
  CHECK(res.at(0) == Rat(1));
  CHECK(res.at(2) == Rat(1));
  CHECK(res.at(3) == Rat(2));
  CHECK(res.count(1) == 0);  // the parity-1 vertex carries no multiplicity
}

TEST_CASE("random configurations match the residue-class partition oracle") {
  std::mt19937_64 rng(20260816);
  const long primes[] = {3, 5, 7};
  for (int trial = 0; trial < 40; ++trial) {
    int g = 2 + static_cast<int>(rng() % 2);
    long p = primes[rng() % 3];
    int m = 2 * g + 2;

    std::vector<long> roots;
    while (static_cast<int>(roots.size()) < m) {
      long center = static_cast<long>(rng() % p);
      long k = static_cast<long>(rng() % 4);
      long unit = static_cast<long>(rng() % 20) + 1;
      if (unit % p == 0) ++unit;
      long pk = 1;
      for (long i = 0; i < k; ++i) pk *= p;
      long r = center + pk * unit * ((rng() % 2) ? 1 : -1);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }

    RootConfig cfg = make_config(g, p, roots);
    ClusterTree tree = build_tree(cfg);

    std::vector<Int> int_roots;
    for (long r : roots) int_roots.push_back(Int(r));

    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        CHECK(tree.pair_valuation(i, j) == val_oracle(int_roots[i] - int_roots[j], cfg.p));

    for (long n = 1; n <= tree.depth(); ++n) {
      std::vector<std::vector<int>> got;
      for (const ClusterVertex& v : tree.vertices())
        if (v.level == n) got.push_back(v.members);
      std::sort(got.begin(), got.end());
      CHECK((got == partition_oracle(int_roots, cfg.p, n)));
    }
    CHECK(partition_oracle(int_roots, cfg.p, tree.depth() + 1).empty());

    for (int id = 1; id < tree.vertex_count(); ++id) {
      const ClusterVertex& v = tree.vertex(id);
      const ClusterVertex& par = tree.vertex(v.parent);
      CHECK(par.level == v.level - 1);
      CHECK(std::includes(par.members.begin(), par.members.end(), v.members.begin(),
                          v.members.end()));
    }

    // Path sums against an independent parent walk and against the counting
    // identity evaluated with oracle valuations.
    for (int id = 0; id < tree.vertex_count(); ++id) {
      Int by_walk = 0;
      for (int c = id; c != -1; c = tree.vertex(c).parent)
        if (tree.vertex(c).level >= 1) by_walk += tree.vertex(c).phi();
      Int pps = path_phi_sum(tree, id);
      CHECK(pps == by_walk);

      long n = tree.vertex(id).level;
      int rep = tree.vertex(id).members.front();
      Int by_count = 0;
      for (int i = 0; i < m; ++i) {
        if (i == rep)
          by_count += n;
        else
          by_count += std::min<long>(n, val_oracle(int_roots[rep] - int_roots[i], cfg.p));
      }
      CHECK(pps == by_count);
    }

    if (tree.report().all_ok()) {
      CHECK(denominator(compute_e(tree)) == 1);
      CHECK_NOTHROW(residual_divisor(tree));
    } else {
      CHECK_THROWS_AS(residual_divisor(tree), ValidationError);
    }

    std::map<int, Rat> res = residual_divisor(tree, true);
    Rat e = compute_e(tree);
    int parity_zero = 0;
    for (int id = 0; id < tree.vertex_count(); ++id)
      if (!tree.vertex(id).parity_flag()) ++parity_zero;
    CHECK(static_cast<int>(res.size()) == parity_zero);
    for (const auto& [id, mult] : res) {
      const ClusterVertex& v = tree.vertex(id);
      CHECK_FALSE(v.parity_flag());
      Rat expected = e - Rat(g, 2) * Rat(path_phi_sum(tree, id)) +
                     Rat(g * (g + 1), 2) * Rat(v.level);
      CHECK(mult == expected);
    }
  }
}

TEST_CASE("structural defects are hard errors") {
  CHECK_THROWS_AS(build_tree(make_config(1, 5, {0, 1, 2, 3})), ValidationError);
  CHECK_THROWS_AS(build_tree(make_config(2, 6, {0, 1, 2, 3, 4, 7})), ValidationError);
  CHECK_THROWS_AS(build_tree(make_config(2, 5, {0, 1, 2, 3, 4})), ValidationError);
  CHECK_THROWS_AS(build_tree(make_config(2, 5, {0, 1, 2, 3, 4, 4})), ValidationError);
  CHECK_THROWS_AS(validate(make_config(2, 4, {0, 1, 2, 3, 4, 7})), ValidationError);

  {
    RootConfig cfg = make_config(2, 5, {0, 1, 2, 3, 4, 6});
    cfg.roots[5] = Rat(1, 5);  // valuation -1
    CHECK_THROWS_AS(build_tree(cfg), ValidationError);
  }
  {
    RootConfig cfg = make_config(2, 5, {0, 1, 2, 3, 4, 6});
    cfg.A = Rat(5);
    CHECK_THROWS_AS(build_tree(cfg), ValidationError);
    cfg.A = Rat(1, 5);
    CHECK_THROWS_AS(build_tree(cfg), ValidationError);
  }
  {
    // Denominators prime to p are integral at p and stay legal.
    RootConfig cfg = make_config(2, 5, {0, 1, 2, 3, 4, 6});
    cfg.roots[5] = Rat(1, 3);
    CHECK_NOTHROW(build_tree(cfg));
  }
}

TEST_CASE("assumption report separates the two soft conditions") {
  {
    // Two residues mod 5, every pair valuation even.
    RootConfig cfg = make_config(2, 5, {0, 25, 50, 1, 26, 51});
    ClusterTree tree = build_tree(cfg);
    CHECK_FALSE(tree.report().residues_ok);
    CHECK(tree.report().evenness_ok);
    CHECK_FALSE(tree.report().all_ok());
    CHECK_THROWS_AS(residual_divisor(tree), ValidationError);
    CHECK_NOTHROW(residual_divisor(tree, true));
  }
  {
    // v(0 - 125) = 3 odd, five residues.
    RootConfig cfg = make_config(2, 5, {0, 125, 1, 2, 3, 4});
    ClusterTree tree = build_tree(cfg);
    CHECK_FALSE(tree.report().evenness_ok);
    CHECK(tree.report().residues_ok);
  }
  {
    // Clean configuration: no override needed, hand-computed multiplicities.
    RootConfig cfg = make_config(2, 5, {0, 25, 1, 2, 3, 4});
    ClusterTree tree = build_tree(cfg);
    CHECK(tree.report().all_ok());
    REQUIRE(tree.vertex_count() == 3);
    CHECK(compute_e(tree) == Rat(0));
    std::map<int, Rat> res = residual_divisor(tree);
    REQUIRE(res.size() == 3);
    CHECK(res.at(0) == Rat(0));
    CHECK(res.at(1) == Rat(1));
    CHECK(res.at(2) == Rat(2));
  }
  {
    // p = 2 leaves only two possible residues, so that flag can never hold.
    RootConfig cfg = make_config(2, 2, {0, 1, 2, 4, 8, 16});
    CHECK(cfg.residue_char_is_two());
    ClusterTree tree = build_tree(cfg);
    CHECK_FALSE(tree.report().residues_ok);
    CHECK_NOTHROW(residual_divisor(tree, true));
  }
}
