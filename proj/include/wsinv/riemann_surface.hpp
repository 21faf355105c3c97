#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/theta.hpp"

namespace wsinv {

// Analytic model of a curve: a period matrix plus enough structure to map
// points and divisor classes into the jacobian. Two construction paths:
//
//  - from_branch_points: hyperelliptic y^2 = prod (x - b_i), genus 1 or 2,
//    distinct complex branch points. Periods are computed by integrating
//    x^{i-1} dx / y over loops around consecutive branch pairs (trapezoid
//    sums with node doubling, sheet tracked by continuity), the symplectic
//    structure is recovered from numerically computed intersection numbers,
//    and the Abel-Jacobi map integrates from the first branch point with
//    regularizing substitutions at branch points and at infinity.
//
//  - from_period_matrix: genus-1 torus mode. Points are classes on the
//    jacobian itself; used to evaluate jacobian-level invariants at a
//    prescribed tau.
//
// The Riemann constant kappa is calibrated so that classes of effective
// divisors of degree g-1 land on the zero set of theta; the calibrating
// oracle is vanishing at the branch-point images (genus >= 2) or at the
// lattice half-period zero (genus 1).
class CurveAnalytic {
 public:
  static CurveAnalytic from_branch_points(std::vector<std::complex<double>> branch,
                                          double tol = 1e-10);
  static CurveAnalytic from_period_matrix(const PeriodMatrix& pm);

  int genus() const { return pm_.genus(); }
  bool torus_mode() const { return torus_mode_; }
  const PeriodMatrix& period_matrix() const { return pm_; }
  const CVec& riemann_constant() const { return kappa_; }

  // Images u(R) of the Weierstrass points, empty in genus-1 torus mode
  // (deg W = g^3 - g = 0 there).
  const std::vector<CVec>& weierstrass_images() const { return weierstrass_images_; }

  const std::vector<std::complex<double>>& branch_points() const { return branch_; }

  // Largest |tau_ij - tau_ji| in the raw quadrature output before the matrix
  // is symmetrized; 0 in torus mode where tau is prescribed exactly. The
  // constructor only rejects runs past 1e-6, but healthy quadrature lands
  // orders of magnitude lower, so this is the number to watch.
  double period_asymmetry() const { return period_asymmetry_; }

  // Abel-Jacobi image of the point (x, sheet) with respect to the first
  // branch point; sheet selects one of the two square roots of f(x) by a
  // fixed deterministic convention, and the two images are negatives of each
  // other modulo the lattice. Branch-point x values are allowed, as is
  // x = infinity via abel_jacobi_infinity for odd-degree models.
  CVec abel_jacobi(std::complex<double> x, int sheet) const;
  CVec abel_jacobi_infinity() const;

  // Jacobian image of a uniformly drawn curve point (torus mode: Haar sample
  // on the jacobian itself).
  CVec sample_point(std::mt19937_64& rng) const;

 private:
  CurveAnalytic() : pm_(PeriodMatrix::create(CMat::Identity(1, 1) * std::complex<double>(0, 1))) {}

  PeriodMatrix pm_;
  bool torus_mode_ = false;
  double tol_ = 1e-10;
  double period_asymmetry_ = 0.0;
  std::vector<std::complex<double>> branch_;  // sorted
  std::vector<std::complex<double>> f_;       // monic coefficients, ascending
  CMat a_inverse_;                            // maps raw integral vectors to jacobian coords
  CVec kappa_;
  std::vector<CVec> weierstrass_images_;
};

// The point-choice-independent archimedean invariant
//   T = (||th||(P_1+..+P_g - Q) / prod_k ||th||(g P_k - Q)^{1/g})^{2g-2}
//       * prod_{k != l} ||th||(g P_k - P_l)^{1/g} / ||J||(P_1..P_g)^2
//       * prod_{R in W} prod_k ||th||(g P_k - R)^{(g-1)/g^4},
// evaluated on a random sample drawn from the seed. Samples with any factor
// within 1e-8 of the theta divisor are rejected and redrawn, at most 50
// times, then DegenerateSampleError.
double t_invariant(const CurveAnalytic& curve, std::uint64_t seed, double tol = 1e-10);

}  // namespace wsinv
