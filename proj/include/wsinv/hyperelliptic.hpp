#pragma once

#include <vector>

#include "wsinv/cluster_tree.hpp"
#include "wsinv/errors.hpp"
#include "wsinv/field.hpp"
#include "wsinv/polynomial.hpp"
#include "wsinv/rational.hpp"
#include "wsinv/series.hpp"

namespace wsinv {

// Smooth hyperelliptic curve y^2 = A f(x) over a field of characteristic
// != 2, with f monic separable of degree 2g+1 or 2g+2.
class HyperellipticEquation {
 public:
  static HyperellipticEquation from_f(CoefficientField field, const Rat& a_scalar, Poly f);
  static HyperellipticEquation from_roots(CoefficientField field, const Rat& a_scalar,
                                          const std::vector<Rat>& roots);
  // y^2 + a(x) y = b(x), reduced via (2y + a)^2 = a^2 + 4b.
  static HyperellipticEquation from_ab(CoefficientField field, const Poly& a, const Poly& b);

  const CoefficientField& field() const { return field_; }
  int genus() const { return g_; }
  const Rat& leading_unit() const { return a_scalar_; }
  const Poly& f() const { return f_; }

  bool is_branch_x(const Rat& x0) const;  // f(x0) = 0

 private:
  HyperellipticEquation(CoefficientField field, Rat a_scalar, Poly f, int g);
  CoefficientField field_;
  Rat a_scalar_;
  Poly f_;
  int g_;
};

// Valuation of the hyperelliptic discriminant section:
// g * v_p(disc f) - (8g+4) * e with f the monic root product and e the
// cluster-tree invariant. A derived closed form; the component-graph local
// identity is the authority when both are available.
Int ord_lambda(const RootConfig& config, const ClusterTree& tree);

// Verifies, coefficientwise in a local parameter at x0, the identity
// [x^{j-1} / (2y)]_{j=1..g} = (2y)^{-g} for the Hasse-Wronskian of the
// standard differential basis. Both sides are divided by the constant
// sqrt(A f(x0))^{-g}, which cancels, so no field extension is needed.
bool hyperelliptic_wronskian_check(const HyperellipticEquation& eq, const Rat& x0,
                                   std::size_t precision);

// Order of vanishing of the Wronskian section at the point above x0. Uses y
// as the local parameter at a branch point and x - x0 elsewhere. Equals
// g(g-1)/2 at branch points of a smooth curve and 0 at generic points.
long weierstrass_gap_order(const HyperellipticEquation& eq, const Rat& x0,
                           std::size_t precision);

}  // namespace wsinv
