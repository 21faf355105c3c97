#include <doctest.h>

#include <cmath>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/height.hpp"
#include "wsinv/rational.hpp"

using namespace wsinv;

namespace {

GlobalHeightInput example_ledger() {
  GlobalHeightInput in;
  in.g = 2;
  in.degree_k = 1;
  in.nt_heights = {0.10, 0.20, 0.30, 0.15, 0.25, 0.05};
  LocalLedgerEntry loc;
  loc.place = "5";
  loc.log_residue_size = std::log(5.0);
  loc.ord_delta = 3;
  loc.sum_phi_sq = Rat(-10);
  loc.e_omega_degree = Rat(2);
  in.locals = {loc};
  ArchLedgerEntry arch;
  arch.embedding = "sigma_1";
  arch.log_t = -4.02142650738;
  in.archs = {arch};
  return in;
}

}  // namespace

TEST_CASE("named coefficients") {
  CHECK(slope_numerator(2) == 100);
  CHECK(slope_denominator(2) == 9);
  CHECK(slope_numerator(3) == 224);
  CHECK(slope_denominator(3) == 20);
  CHECK(archimedean_coefficient(2) == 72);
  CHECK(archimedean_coefficient(3) == 240);
  CHECK(t_coefficient(2) == 32);
  CHECK(t_coefficient(3) == 72);

  CHECK(slope_constant(2) == Rat(100, 9));
  CHECK(slope_constant(3) == Rat(56, 5));
  CHECK_THROWS_AS(slope_constant(1), ValidationError);

  // Strictly above 11, below 12, increasing toward 12.
  for (int g = 2; g <= 100; ++g) {
    Rat s = slope_constant(g);
    CHECK(s > Rat(11));
    CHECK(s < Rat(12));
    if (g > 2) CHECK(s > slope_constant(g - 1));
    // Direct recomputation from the factored form.
    CHECK(s == Rat(Int(3 * g - 1) * Int(8 * g + 4), Int(2 * g - 1) * Int(g + 1)));
  }
}

TEST_CASE("norm constant in log form") {
  for (int g = 1; g <= 4; ++g) {
    for (double log_t : {-4.0, -0.5, 0.3}) {
      double expected =
          -4.0 * g * (2 * g - 1) * (g + 1) * std::log(2 * 3.14159265358979323846) +
          8.0 * g * g * log_t;
      CHECK(theorem_norm_constant_log(g, log_t) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(theorem_norm_constant_log(0, 0.0), ValidationError);
}

TEST_CASE("closed formula on the example ledger") {
  GlobalHeightInput in = example_ledger();
  DegLambdaResult r = deg_lambda(in);

  double log2pi = std::log(2 * 3.14159265358979323846);
  double height = (2.0 / 2.0) * 1.05;  // 2 [K:Q] / g(g-1) = 1
  // Per place: 10/2 + 9*3 + 4*2 = 5 + 27 + 8 = 40, weighted by log 5.
  double local = 40.0 * std::log(5.0);
  double arch = -72.0 * log2pi + 32.0 * (-4.02142650738);

  CHECK(r.height_term == doctest::Approx(height).epsilon(1e-14));
  CHECK(r.local_term == doctest::Approx(local).epsilon(1e-14));
  CHECK(r.arch_term == doctest::Approx(arch).epsilon(1e-14));
  CHECK(r.undivided == doctest::Approx(height + local + arch).epsilon(1e-14));
  CHECK(r.value == doctest::Approx((height + local + arch) / 100.0).epsilon(1e-14));
}

TEST_CASE("zeroed ledger meets the lower bound exactly") {
  GlobalHeightInput in;
  in.g = 2;
  in.degree_k = 2;
  in.nt_heights.assign(6, 0.0);
  ArchLedgerEntry a1, a2;
  a1.embedding = "sigma_1";
  a1.log_t = -4.0;
  a2.embedding = "sigma_2";
  a2.log_t = -3.7;
  in.archs = {a1, a2};

  DegLambdaResult r = deg_lambda(in);
  double bound = faltings_lower_bound(2, 2, in.archs);
  CHECK(r.value == doctest::Approx(in.degree_k * bound).epsilon(1e-14));

  // Any honest ledger contribution only adds on top.
  in.nt_heights[0] = 0.25;
  CHECK(deg_lambda(in).value > in.degree_k * bound);

  LocalLedgerEntry loc;
  loc.place = "7";
  loc.log_residue_size = std::log(7.0);
  loc.ord_delta = 1;
  loc.sum_phi_sq = Rat(0);
  loc.e_omega_degree = Rat(0);
  in.nt_heights[0] = 0.0;
  in.locals = {loc};
  CHECK(deg_lambda(in).value > in.degree_k * bound);
}

TEST_CASE("lower bound mechanics") {
  ArchLedgerEntry a;
  a.embedding = "sigma";
  a.log_t = -4.0;
  double b1 = faltings_lower_bound(1, 1, {a});
  double expected1 = (-4.0 * 1 * 1 * 2 * std::log(2 * 3.14159265358979323846) +
                      8.0 * (-4.0)) /
                     (2.0 * 12.0);
  CHECK(b1 == doctest::Approx(expected1).epsilon(1e-14));

  // Monotone in log T.
  ArchLedgerEntry higher = a;
  higher.log_t = -3.0;
  CHECK(faltings_lower_bound(2, 1, {higher}) > faltings_lower_bound(2, 1, {a}));

  // Per unit degree: doubling every embedding with the same value is neutral.
  CHECK(faltings_lower_bound(2, 2, {a, a}) == doctest::Approx(faltings_lower_bound(2, 1, {a})));

  CHECK_THROWS_AS(faltings_lower_bound(0, 1, {a}), ValidationError);
  CHECK_THROWS_AS(faltings_lower_bound(2, 2, {a}), ValidationError);
}

TEST_CASE("comparison bound from sampled integrals") {
  MonteCarloResult m1;
  m1.mean = -0.26;
  m1.std_error = 0.001;
  m1.samples = 1000;
  MonteCarloResult m2;
  m2.mean = -0.30;
  m2.std_error = 0.002;
  m2.samples = 1000;

  double log2pi = std::log(2 * 3.14159265358979323846);

  BostBound single = bost_bound(2, 1, {m1});
  CHECK(single.value == doctest::Approx(-2.0 * log2pi - 2.0 * (-0.26)).epsilon(1e-14));
  CHECK(single.std_error == doctest::Approx(2.0 * 0.001).epsilon(1e-14));

  BostBound both = bost_bound(2, 2, {m1, m2});
  CHECK(both.value == doctest::Approx(-2.0 * log2pi - 1.0 * (-0.56)).epsilon(1e-14));
  CHECK(both.std_error ==
        doctest::Approx(std::sqrt(0.001 * 0.001 + 0.002 * 0.002)).epsilon(1e-14));

  // One integral per embedding is mandatory.
  CHECK_THROWS_AS(bost_bound(2, 1, {m1, m2}), ValidationError);
}

TEST_CASE("ledger validation") {
  GlobalHeightInput in = example_ledger();
  CHECK_NOTHROW(validate(in));

  GlobalHeightInput bad = in;
  bad.g = 1;
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.nt_heights.pop_back();  // 5 != g^3 - g
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.nt_heights[2] = -0.1;
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.locals[0].sum_phi_sq = Rat(1);
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.locals[0].ord_delta = -1;
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.locals[0].log_residue_size = 0.0;
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.archs.clear();
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);

  bad = in;
  bad.degree_k = 0;
  CHECK_THROWS_AS(deg_lambda(bad), ValidationError);
}
