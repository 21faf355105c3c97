#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/riemann_surface.hpp"
#include "wsinv/theta.hpp"

using namespace wsinv;

namespace {

constexpr double kPi = 3.14159265358979323846;
using Cx = std::complex<double>;

PeriodMatrix pm1(Cx tau) {
  CMat m(1, 1);
  m(0, 0) = tau;
  return PeriodMatrix::create(m);
}

// Distance from z to the nearest lattice point of Z^g + tau Z^g.
double lattice_distance(const CVec& z, const PeriodMatrix& pm) {
  ReducedPoint rp = lattice_reduce(z, pm);
  double best = rp.z_red.norm();
  // The reduced representative can sit near a far corner of the cell.
  for (int dm = -1; dm <= 1; ++dm)
    for (int dn = -1; dn <= 1; ++dn) {
      CVec w = rp.z_red;
      for (int k = 0; k < pm.genus(); ++k) w(k) += Cx(dm) + pm.tau()(k, k) * Cx(dn);
      if (pm.genus() == 1) best = std::min(best, w.norm());
    }
  if (pm.genus() > 1) {
    Eigen::VectorXd shift_m = Eigen::VectorXd::Zero(pm.genus());
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          for (int d = -1; d <= 1; ++d) {
            Eigen::Vector2d mm(a, b), nn(c, d);
            CVec w = rp.z_red + mm.cast<Cx>() + pm.tau() * nn.cast<Cx>();
            best = std::min(best, w.norm());
          }
  }
  return best;
}

// Genus-1 analytic modulus from theta nulls and the plane j-invariant.
Cx lambda_from_tau(Cx tau) {
  PeriodMatrix pm = pm1(tau);
  CVec half(1);
  half(0) = tau / 2.0;
  CVec zero(1);
  zero(0) = Cx(0, 0);
  Cx th2 = std::exp(Cx(0, kPi) * tau / 4.0) * theta(half, pm);
  Cx th3 = theta(zero, pm);
  Cx r = th2 / th3;
  return r * r * r * r;
}

Cx j_from_lambda(Cx l) {
  Cx num = l * l - l + Cx(1, 0);
  return 256.0 * num * num * num / (l * l * (Cx(1, 0) - l) * (Cx(1, 0) - l));
}

// Cross ratio lambda of four branch values, the fourth possibly infinite.
Cx lambda_from_branches(Cx a, Cx b, Cx c) {  // fourth at infinity
  return (c - a) / (c - b);
}

Cx lambda_from_branches(Cx a, Cx b, Cx c, Cx d) {
  return ((c - a) * (d - b)) / ((c - b) * (d - a));
}

}  // namespace

TEST_CASE("square-lattice curve: period matrix and marked images") {
  CurveAnalytic curve = CurveAnalytic::from_branch_points({Cx(0, 0), Cx(1, 0), Cx(-1, 0)});
  CHECK(curve.genus() == 1);
  CHECK_FALSE(curve.torus_mode());

  Cx tau = curve.period_matrix().tau()(0, 0);
  CHECK(std::abs(tau - Cx(0, 1)) < 1e-8);

  // Branch images are the finite half periods; infinity doubles to zero.
  const PeriodMatrix& pm = curve.period_matrix();
  CHECK(lattice_distance(2 * curve.abel_jacobi(Cx(0, 0), 0), pm) < 1e-8);
  CHECK(lattice_distance(2 * curve.abel_jacobi(Cx(1, 0), 0), pm) < 1e-8);
  CHECK(lattice_distance(2 * curve.abel_jacobi_infinity(), pm) < 1e-8);

  CVec u0 = curve.abel_jacobi(Cx(0, 0), 0);
  CVec u1 = curve.abel_jacobi(Cx(1, 0), 0);
  CVec uinf = curve.abel_jacobi_infinity();
  CVec e(1);
  e(0) = Cx(0.5, 0);
  CHECK(lattice_distance(u0 - e, pm) < 1e-8);
  e(0) = Cx(0.5, 0.5);
  CHECK(lattice_distance(u1 - e, pm) < 1e-8);
  e(0) = Cx(0, 0.5);
  CHECK(lattice_distance(uinf - e, pm) < 1e-8);

  // The two sheets give opposite classes.
  CVec plus = curve.abel_jacobi(Cx(0.37, 0.11), 0);
  CVec minus = curve.abel_jacobi(Cx(0.37, 0.11), 1);
  CHECK(lattice_distance(plus + minus, pm) < 1e-8);
}

TEST_CASE("torus mode carries the jacobian data directly") {
  PeriodMatrix pm = pm1(Cx(0, 1));
  CurveAnalytic torus = CurveAnalytic::from_period_matrix(pm);
  CHECK(torus.torus_mode());
  CHECK(torus.genus() == 1);
  CHECK(torus.weierstrass_images().empty());

  // Riemann constant at the odd half period.
  CVec e(1);
  e(0) = Cx(0.5, 0.5);
  CHECK(lattice_distance(torus.riemann_constant() - e, pm) < 1e-10);
  CHECK(theta_norm(torus.riemann_constant(), pm) < 1e-10);

  std::mt19937_64 a(5), b(5), c(6);
  CVec s1 = torus.sample_point(a);
  CVec s2 = torus.sample_point(b);
  CHECK((s1 - s2).norm() == 0.0);
  CVec s3 = torus.sample_point(c);
  CHECK((s1 - s3).norm() > 0);

  CHECK_THROWS_AS(torus.abel_jacobi(Cx(0, 0), 0), ValidationError);
  CHECK_THROWS_AS(torus.abel_jacobi_infinity(), ValidationError);
  CHECK_THROWS_AS(CurveAnalytic::from_period_matrix(PeriodMatrix::create(
                      CMat::Identity(2, 2) * Cx(0, 1))),
                  ValidationError);
}

TEST_CASE("archimedean invariant on the square torus against eta") {
  // T = (2 pi)^{-2} ||Delta||^{-1/4}, and at tau = i the right side comes
  // from the gamma closed form of eta.
  for (Cx tau : {Cx(0, 1), Cx(0.3, 1.1), Cx(0, 2)}) {
    CurveAnalytic torus = CurveAnalytic::from_period_matrix(pm1(tau));
    double expected =
        std::pow(2 * kPi, -2.0) * std::pow(petersson_delta_norm_g1(tau), -0.25);
    double t1 = t_invariant(torus, 11);
    double t2 = t_invariant(torus, 12);
    CHECK(t1 == doctest::Approx(expected).epsilon(1e-9));
    CHECK(t2 == doctest::Approx(expected).epsilon(1e-9));
  }

  CurveAnalytic sq = CurveAnalytic::from_period_matrix(pm1(Cx(0, 1)));
  CHECK(t_invariant(sq, 1) == doctest::Approx(0.123227663545).epsilon(1e-9));
}

TEST_CASE("branch-point construction reproduces the torus invariant") {
  CurveAnalytic curve = CurveAnalytic::from_branch_points({Cx(0, 0), Cx(1, 0), Cx(-1, 0)});
  CHECK(t_invariant(curve, 3) == doctest::Approx(0.123227663545).epsilon(1e-6));
}

TEST_CASE("analytic modulus matches the branch cross ratio") {
  // Even quartic model with branch points -1, 0, 1, 5.
  {
    CurveAnalytic curve =
        CurveAnalytic::from_branch_points({Cx(-1, 0), Cx(0, 0), Cx(1, 0), Cx(5, 0)});
    REQUIRE(curve.genus() == 1);
    Cx tau = curve.period_matrix().tau()(0, 0);
    Cx j_analytic = j_from_lambda(lambda_from_tau(tau));
    Cx j_plane = j_from_lambda(lambda_from_branches(Cx(-1, 0), Cx(0, 0), Cx(1, 0), Cx(5, 0)));
    CHECK(std::abs(j_analytic - j_plane) < 1e-6 * (1 + std::abs(j_plane)));
  }
  // Odd cubic model with branch points 0, i, -i (fourth at infinity).
  {
    CurveAnalytic curve = CurveAnalytic::from_branch_points({Cx(0, 0), Cx(0, 1), Cx(0, -1)});
    Cx tau = curve.period_matrix().tau()(0, 0);
    Cx j_analytic = j_from_lambda(lambda_from_tau(tau));
    Cx j_plane = j_from_lambda(lambda_from_branches(Cx(0, 0), Cx(0, 1), Cx(0, -1)));
    CHECK(std::abs(j_analytic - j_plane) < 1e-6 * (1 + std::abs(j_plane)));
  }
}

TEST_CASE("genus-2 curve with five branch points") {
  CurveAnalytic curve = CurveAnalytic::from_branch_points(
      {Cx(0, 0), Cx(1, 0), Cx(-1, 0), Cx(0, 1), Cx(0, -1)});
  CHECK(curve.genus() == 2);

  const CMat& tau = curve.period_matrix().tau();
  CHECK(std::abs(tau(0, 1) - tau(1, 0)) < 1e-8);
  CHECK(curve.period_matrix().lambda_min() > 0);

  // The extreme symmetry of y^2 = x^5 - x pins the period matrix.
  CHECK(std::abs(tau(0, 0) - Cx(-0.5, 0.70710678)) < 1e-6);
  CHECK(std::abs(tau(1, 1) - Cx(-0.5, 0.70710678)) < 1e-6);
  CHECK(std::abs(tau(0, 1) - Cx(-0.5, 0)) < 1e-6);

  // Six marked points (five finite branch points and infinity); each image,
  // shifted by the Riemann constant, lies on the theta divisor.
  REQUIRE(curve.weierstrass_images().size() == 6);
  for (const CVec& w : curve.weierstrass_images())
    CHECK(theta_norm(w + curve.riemann_constant(), curve.period_matrix()) < 1e-6);

  double reference = 0.0179273731603;
  for (std::uint64_t seed : {1, 2, 3})
    CHECK(t_invariant(curve, seed) == doctest::Approx(reference).epsilon(1e-4));
  CHECK(std::log(t_invariant(curve, 1)) == doctest::Approx(-4.02142650738).epsilon(1e-4));
}

TEST_CASE("construction rejects unusable branch data") {
  CHECK_THROWS_AS(CurveAnalytic::from_branch_points({Cx(0, 0), Cx(1, 0)}), ValidationError);
  CHECK_THROWS_AS(CurveAnalytic::from_branch_points(
                      {Cx(0, 0), Cx(1, 0), Cx(2, 0), Cx(3, 0), Cx(4, 0), Cx(5, 0), Cx(6, 0)}),
                  ValidationError);
  CHECK_THROWS_AS(CurveAnalytic::from_branch_points({Cx(0, 0), Cx(1, 0), Cx(1, 0)}),
                  ValidationError);
}
