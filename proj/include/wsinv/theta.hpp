#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "wsinv/errors.hpp"

namespace wsinv {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Symmetric g x g period matrix with positive-definite imaginary part.
// Construction symmetrizes the input after checking the asymmetry is within
// sym_tol, and caches Y = Im tau, its inverse, determinant, and smallest
// eigenvalue (used by the theta tail bounds).
class PeriodMatrix {
 public:
  static PeriodMatrix create(CMat tau, double sym_tol = 1e-8);

  int genus() const { return static_cast<int>(tau_.rows()); }
  const CMat& tau() const { return tau_; }
  const Eigen::MatrixXd& imag_part() const { return y_; }
  const Eigen::MatrixXd& imag_inverse() const { return y_inv_; }
  double det_imag() const { return det_y_; }
  double lambda_min() const { return lambda_min_; }

 private:
  CMat tau_;
  Eigen::MatrixXd y_, y_inv_;
  double det_y_ = 0;
  double lambda_min_ = 0;
};

// Lattice reduction z = z_red + m + tau n with n = round(Y^{-1} Im z),
// m = round(Re(z - tau n)).
struct ReducedPoint {
  CVec z_red;
  Eigen::VectorXd n;  // integer entries
  Eigen::VectorXd m;
};
ReducedPoint lattice_reduce(const CVec& z, const PeriodMatrix& pm);

// theta(z; tau) = sum over n in Z^g of exp(pi i n.tau n + 2 pi i n.z),
// evaluated after lattice reduction with the quasi-periodicity factor
// restored. The lattice sum is truncated with a proven shell majorant whose
// tail is below tol; ConvergenceError if no radius achieves that.
std::complex<double> theta(const CVec& z, const PeriodMatrix& pm, double tol = 1e-12);

// Gradient (d theta / d z_k)_k at z, same tail control.
CVec theta_gradient(const CVec& z, const PeriodMatrix& pm, double tol = 1e-12);

// ||theta||(z) = (det Y)^{1/4} exp(-pi ty Y^{-1} y) |theta(z)|, y = Im z.
// Invariant under z -> z + m + tau n; evaluated in reduced form so the
// quasi-periodicity factor never overflows.
double theta_norm(const CVec& z, const PeriodMatrix& pm, double tol = 1e-12);

// ||J||(w_1..w_g) = (det Y)^{(g+2)/4} prod_l exp(-pi ty_l Y^{-1} y_l) |J|
// with J = det(d theta/d z_k (w_l)). Computed through the reduced
// representatives; as a function of classes it is well defined on points of
// the theta divisor, where the reduction correction -2 pi i n theta(w_red)
// vanishes.
double j_norm(const std::vector<CVec>& w, const PeriodMatrix& pm, double tol = 1e-12);

// Dedekind eta by the q-product, Im tau > 0.
std::complex<double> dedekind_eta(std::complex<double> tau, double tol = 1e-15);

// Petersson norm of the modular discriminant at genus 1:
// ||Delta||(tau) = (Im tau)^6 |Delta(tau)| with Delta = eta^24. This
// normalization makes T = (2 pi)^{-2} ||Delta||^{-1/4} hold exactly.
double petersson_delta_norm_g1(std::complex<double> tau, double tol = 1e-15);

struct MonteCarloResult {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

// Monte-Carlo average of log ||theta|| over Haar measure on the torus
// C^g / (Z^g + tau Z^g): samples x = xi + tau eta with xi, eta uniform on
// [0,1)^g from a seed-determined generator. Bit-for-bit reproducible for a
// fixed (tau, seed, n_samples).
MonteCarloResult bost_integral(const PeriodMatrix& pm, std::uint64_t seed,
                               std::size_t n_samples, double tol = 1e-10);

}  // namespace wsinv
