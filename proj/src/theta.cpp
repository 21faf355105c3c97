#include "wsinv/theta.hpp"

#include <cmath>
#include <random>

namespace wsinv {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const std::complex<double> kI(0.0, 1.0);

}  // namespace

PeriodMatrix PeriodMatrix::create(CMat tau, double sym_tol) {
  if (tau.rows() != tau.cols() || tau.rows() < 1)
    throw ValidationError("period matrix must be square and nonempty");
  double asym = (tau - tau.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol)
    throw ValidationError("period matrix asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
  PeriodMatrix pm;
  pm.tau_ = 0.5 * (tau + tau.transpose().eval());
  pm.y_ = pm.tau_.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pm.y_);
  if (es.info() != Eigen::Success)
    throw ValidationError("eigendecomposition of Im tau failed");
  pm.lambda_min_ = es.eigenvalues().minCoeff();
  if (pm.lambda_min_ <= 0)
    throw ValidationError("Im tau is not positive definite");
  pm.det_y_ = es.eigenvalues().prod();
  pm.y_inv_ = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
              es.eigenvectors().transpose();
  return pm;
}

ReducedPoint lattice_reduce(const CVec& z, const PeriodMatrix& pm) {
  if (z.size() != pm.genus()) throw ValidationError("point dimension mismatch");
  ReducedPoint out;
  Eigen::VectorXd y = z.imag();
  out.n = (pm.imag_inverse() * y).array().round();
  CVec shifted = z - pm.tau() * out.n.cast<std::complex<double>>();
  out.m = shifted.real().array().round();
  out.z_red = shifted - out.m.cast<std::complex<double>>();
  return out;
}

namespace {

// Enumerates integer vectors with max-norm exactly r, calling f on each.
template <typename F>
void for_each_shell_point(int g, long r, F&& f) {
  Eigen::VectorXd n(g);
  std::vector<long> v(g, -r);
  if (r == 0) {
    n.setZero();
    f(n);
    return;
  }
  while (true) {
    bool on_shell = false;
    for (int i = 0; i < g; ++i)
      if (std::labs(v[i]) == r) on_shell = true;
    if (on_shell) {
      for (int i = 0; i < g; ++i) n[i] = static_cast<double>(v[i]);
      f(n);
    }
    int k = 0;
    while (k < g && v[k] == r) v[k++] = -r;
    if (k == g) break;
    ++v[k];
  }
}

// Majorant for one theta term on the shell of max-norm r:
// #points <= 2g (2r+1)^{g-1}, |term| <= exp(-pi lambda_min r^2 + 2 pi sqrt(g) |y| r).
double shell_majorant(int g, long r, double lambda_min, double y_norm) {
  double count = 2.0 * g * std::pow(2.0 * r + 1.0, g - 1);
  double expo = -kPi * lambda_min * static_cast<double>(r) * static_cast<double>(r) +
                2.0 * kPi * std::sqrt(static_cast<double>(g)) * y_norm * r;
  return count * std::exp(expo);
}

struct RawTheta {
  std::complex<double> value;
  CVec gradient;
};

// Lattice sum at an already reduced point. The stopping rule is rigorous:
// once the majorant ratio between consecutive shells is <= 1/2, the tail is
// at most twice the next shell's majorant, for the gradient sum with the
// extra 2 pi sqrt(g) (r+1) factor as well.
RawTheta raw_theta(const CVec& z, const PeriodMatrix& pm, double tol, bool want_gradient) {
  int g = pm.genus();
  double y_norm = z.imag().norm();
  double sg = std::sqrt(static_cast<double>(g));

  RawTheta acc;
  acc.value = 0.0;
  acc.gradient = CVec::Zero(g);

  const long max_radius = 400;
  for (long r = 0; r <= max_radius; ++r) {
    for_each_shell_point(g, r, [&](const Eigen::VectorXd& n) {
      CVec nc = n.cast<std::complex<double>>();
      std::complex<double> quad = nc.dot(pm.tau() * nc);  // t(n) tau n, dot conjugates but n real
      std::complex<double> lin = nc.dot(z);
      std::complex<double> term = std::exp(kPi * kI * quad + 2.0 * kPi * kI * lin);
      acc.value += term;
      if (want_gradient) acc.gradient += (2.0 * kPi * kI * term) * nc;
    });

    double next = shell_majorant(g, r + 1, pm.lambda_min(), y_norm);
    double after = shell_majorant(g, r + 2, pm.lambda_min(), y_norm);
    // The majorant ratio decreases in r, so ratio <= 1/2 here keeps the tail
    // geometric from this shell on. The gradient majorant carries an extra
    // linear factor, growing by (r+2)/(r+1) per shell, folded into its ratio.
    double ratio = next > 0 ? after / next : 0.0;
    double grow = static_cast<double>(r + 2) / static_cast<double>(r + 1);
    bool ratio_ok = ratio <= 0.5 && (!want_gradient || ratio * grow <= 0.5);
    double tail = 2.0 * next;
    double grad_tail = 2.0 * next * 2.0 * kPi * sg * static_cast<double>(r + 1);
    if (ratio_ok && tail < tol && (!want_gradient || grad_tail < tol)) return acc;
  }
  throw ConvergenceError("theta series did not reach the tolerance at the radius cap");
}

}  // namespace

std::complex<double> theta(const CVec& z, const PeriodMatrix& pm, double tol) {
  ReducedPoint rp = lattice_reduce(z, pm);
  RawTheta raw = raw_theta(rp.z_red, pm, tol, false);
  CVec nc = rp.n.cast<std::complex<double>>();
  std::complex<double> quad = nc.dot(pm.tau() * nc);
  std::complex<double> lin = nc.dot(rp.z_red);
  // theta(z_red + m + tau n) = exp(-pi i n tau n - 2 pi i n z_red) theta(z_red)
  return std::exp(-kPi * kI * quad - 2.0 * kPi * kI * lin) * raw.value;
}

CVec theta_gradient(const CVec& z, const PeriodMatrix& pm, double tol) {
  ReducedPoint rp = lattice_reduce(z, pm);
  RawTheta raw = raw_theta(rp.z_red, pm, tol, true);
  CVec nc = rp.n.cast<std::complex<double>>();
  std::complex<double> quad = nc.dot(pm.tau() * nc);
  std::complex<double> lin = nc.dot(rp.z_red);
  std::complex<double> factor = std::exp(-kPi * kI * quad - 2.0 * kPi * kI * lin);
  return factor * (raw.gradient - (2.0 * kPi * kI * raw.value) * nc);
}

double theta_norm(const CVec& z, const PeriodMatrix& pm, double tol) {
  ReducedPoint rp = lattice_reduce(z, pm);
  RawTheta raw = raw_theta(rp.z_red, pm, tol, false);
  Eigen::VectorXd y_red = rp.z_red.imag();
  double expo = -kPi * y_red.dot(pm.imag_inverse() * y_red);
  return std::pow(pm.det_imag(), 0.25) * std::exp(expo) * std::abs(raw.value);
}

double j_norm(const std::vector<CVec>& w, const PeriodMatrix& pm, double tol) {
  int g = pm.genus();
  if (static_cast<int>(w.size()) != g)
    throw ValidationError("j_norm needs exactly g points");
  CMat jac(g, g);
  double log_expo = 0;
  for (int l = 0; l < g; ++l) {
    ReducedPoint rp = lattice_reduce(w[l], pm);
    RawTheta raw = raw_theta(rp.z_red, pm, tol, true);
    CVec nc = rp.n.cast<std::complex<double>>();
    jac.col(l) = raw.gradient - (2.0 * kPi * kI * raw.value) * nc;
    Eigen::VectorXd y_red = rp.z_red.imag();
    log_expo += -kPi * y_red.dot(pm.imag_inverse() * y_red);
  }
  return std::pow(pm.det_imag(), 0.25 * (g + 2)) * std::exp(log_expo) *
         std::abs(jac.determinant());
}

std::complex<double> dedekind_eta(std::complex<double> tau, double tol) {
  if (tau.imag() <= 0) throw ValidationError("eta needs Im tau > 0");
  std::complex<double> q = std::exp(2.0 * kPi * kI * tau);
  double qa = std::abs(q);
  std::complex<double> prod = 1.0;
  std::complex<double> qn = 1.0;
  for (long n = 1; n <= 100000; ++n) {
    qn *= q;
    prod *= (1.0 - qn);
    // |log prod tail| <= sum_{k>n} |q|^k = |q|^{n+1}/(1-|q|)
    if (std::abs(qn) * qa / (1.0 - qa) < tol) {
      std::complex<double> q24 = std::exp(2.0 * kPi * kI * tau / 24.0);
      return q24 * prod;
    }
  }
  throw ConvergenceError("eta product did not converge");
}

double petersson_delta_norm_g1(std::complex<double> tau, double tol) {
  double eta_abs = std::abs(dedekind_eta(tau, tol));
  return std::pow(tau.imag(), 6) * std::pow(eta_abs, 24);
}

MonteCarloResult bost_integral(const PeriodMatrix& pm, std::uint64_t seed,
                               std::size_t n_samples, double tol) {
  if (n_samples < 1) throw ValidationError("need at least one sample");
  int g = pm.genus();
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  double sum = 0, sum_sq = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    CVec z(g);
    Eigen::VectorXd xi(g), zeta(g);
    for (int i = 0; i < g; ++i) xi[i] = uniform();
    for (int i = 0; i < g; ++i) zeta[i] = uniform();
    z = xi.cast<std::complex<double>>() +
        pm.tau() * zeta.cast<std::complex<double>>();
    double v = std::log(theta_norm(z, pm, tol));
    sum += v;
    sum_sq += v * v;
  }
  MonteCarloResult out;
  out.samples = n_samples;
  out.mean = sum / static_cast<double>(n_samples);
  if (n_samples > 1) {
    double var = (sum_sq - sum * sum / static_cast<double>(n_samples)) /
                 (static_cast<double>(n_samples) - 1.0);
    out.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples));
  }
  return out;
}

}  // namespace wsinv
