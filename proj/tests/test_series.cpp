#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "wsinv/series.hpp"

using namespace wsinv;

namespace {

// Test-local binomial: multiplicative formula over exact integers.
Int binom(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  Int num = 1, den = 1;
  for (unsigned long i = 0; i < k; ++i) {
    num *= Int(n - i);
    den *= Int(i + 1);
  }
  return num / den;
}

// Lucas: C(n, k) mod p from base-p digits.
Int lucas(unsigned long n, unsigned long k, unsigned long p) {
  Int r = 1;
  while (n > 0 || k > 0) {
    unsigned long nd = n % p, kd = k % p;
    r = (r * (binom(nd, kd) % Int(p))) % Int(p);
    n /= p;
    k /= p;
  }
  return r;
}

// Independent Hasse derivative: shift indices with test-local binomials.
TruncatedSeries hasse_oracle(const TruncatedSeries& f, std::size_t i) {
  std::size_t out = f.precision() > i ? f.precision() - i : 0;
  std::vector<Rat> coeffs(out, Rat(0));
  for (std::size_t n = 0; n < out; ++n)
    coeffs[n] = f.field().reduce(Rat(binom(n + i, i)) * f.coeff(n + i));
  TruncatedSeries r = TruncatedSeries::from_coefficients(f.field(), coeffs);
  return r.truncate(out);
}

TruncatedSeries random_series(const CoefficientField& field, std::size_t precision,
                              std::mt19937_64& rng, bool unit = false) {
  std::vector<Rat> coeffs(precision);
  for (auto& c : coeffs) c = field.reduce(Rat(static_cast<long>(rng() % 19) - 9));
  if (unit && field.is_zero(field.reduce(coeffs[0]))) coeffs[0] = field.reduce(Rat(1));
  return TruncatedSeries::from_coefficients(field, std::move(coeffs));
}

}  // namespace

TEST_CASE("arithmetic and precision bookkeeping") {
  CoefficientField q = CoefficientField::rationals();
  TruncatedSeries t = TruncatedSeries::parameter(q, 8);
  TruncatedSeries one = TruncatedSeries::constant(q, Rat(1), 8);
  TruncatedSeries p = (one + t) * (one - t);
  CHECK(p.precision() == 8);
  CHECK(p.coeff(0) == Rat(1));
  CHECK(p.coeff(1) == Rat(0));
  CHECK(p.coeff(2) == Rat(-1));
  for (std::size_t n = 3; n < 8; ++n) CHECK(p.coeff(n) == Rat(0));

  TruncatedSeries short_one = TruncatedSeries::constant(q, Rat(1), 3);
  CHECK((p + short_one).precision() == 3);
  CHECK((p * short_one).precision() == 3);
  CHECK_THROWS_AS(p.coeff(8), std::out_of_range);
  CHECK(p.truncate(2).precision() == 2);

  CHECK(t.order().has_value());
  CHECK(*t.order() == 1);
  CHECK(TruncatedSeries::constant(q, Rat(0), 5).is_known_zero());
  CHECK(agree_on_shared_prefix(p, p.truncate(4)));
}

TEST_CASE("hasse derivative matches binomial-shift oracle") {
  std::mt19937_64 rng(7);
  for (const CoefficientField& field :
       {CoefficientField::rationals(), CoefficientField::prime_field(3),
        CoefficientField::prime_field(7)}) {
    for (int trial = 0; trial < 20; ++trial) {
      TruncatedSeries f = random_series(field, 12, rng);
      for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
        TruncatedSeries got = hasse_derivative(f, i);
        TruncatedSeries want = hasse_oracle(f, i);
        CHECK(got.precision() == want.precision());
        CHECK(agree_on_shared_prefix(got, want));
      }
    }
  }
}

TEST_CASE("hasse composition law D_i D_j = C(i+j, i) D_{i+j}") {
  std::mt19937_64 rng(11);
  for (const CoefficientField& field :
       {CoefficientField::rationals(), CoefficientField::prime_field(2),
        CoefficientField::prime_field(5)}) {
    TruncatedSeries f = random_series(field, 14, rng);
    for (std::size_t i : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
      for (std::size_t j : {std::size_t{1}, std::size_t{2}}) {
        TruncatedSeries lhs = hasse_derivative(hasse_derivative(f, j), i);
        TruncatedSeries rhs = hasse_derivative(f, i + j).scale(field.binomial(i + j, i));
        CHECK(agree_on_shared_prefix(lhs, rhs));
      }
    }
  }
}

TEST_CASE("binomial reduction agrees with Lucas in characteristic p") {
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
    CoefficientField fp = CoefficientField::prime_field(static_cast<long>(p));
    for (unsigned long n = 0; n <= 40; ++n)
      for (unsigned long k = 0; k <= n; ++k)
        CHECK(fp.binomial(n, k) == Rat(lucas(n, k, p)));
  }
  CHECK(integer_binomial(10, 3) == 120);
  CHECK(integer_binomial(3, 10) == 0);
}

TEST_CASE("formal derivative is 1! D_1 and kills constants in char p") {
  CoefficientField f2 = CoefficientField::prime_field(2);
  TruncatedSeries t = TruncatedSeries::parameter(f2, 6);
  TruncatedSeries d = formal_derivative(t.pow(2));
  CHECK(d.is_known_zero());  // 2t = 0 in characteristic 2
  // but the Hasse derivative still sees the coefficient
  CHECK(hasse_derivative(t.pow(2), 2).coeff(0) == Rat(1));
}

TEST_CASE("wronskian alternates and scales") {
  std::mt19937_64 rng(13);
  for (const CoefficientField& field :
       {CoefficientField::rationals(), CoefficientField::prime_field(7)}) {
    TruncatedSeries a = random_series(field, 12, rng);
    TruncatedSeries b = random_series(field, 12, rng);
    TruncatedSeries c = random_series(field, 12, rng);

    // repeated entry kills the determinant
    CHECK(wronskian({a, a, b}).is_known_zero());

    // scaling law: [u f] = u^g [f]
    TruncatedSeries u = random_series(field, 12, rng, /*unit=*/true);
    TruncatedSeries lhs = wronskian({u * a, u * b, u * c});
    TruncatedSeries rhs = u.pow(3).truncate(lhs.precision()) * wronskian({a, b, c});
    CHECK(agree_on_shared_prefix(lhs, rhs));
  }
}

TEST_CASE("monomial wronskian closed form") {
  // W(t^{a_1},...,t^{a_g}) has lowest term prod_{i<j}(a_j - a_i) / prod (i-1)!
  // times t^{sum (a_i - (i-1))} under Hasse normalization.
  CoefficientField q = CoefficientField::rationals();
  std::vector<std::vector<unsigned long>> cases = {{1, 2, 5}, {0, 1, 2}, {2, 3, 7}, {0, 4}};
  for (const auto& exps : cases) {
    std::size_t g = exps.size();
    std::vector<TruncatedSeries> fs;
    for (unsigned long a : exps) {
      std::vector<Rat> coeffs(12, Rat(0));
      coeffs[a] = 1;
      fs.push_back(TruncatedSeries::from_coefficients(q, coeffs));
    }
    TruncatedSeries w = wronskian(fs);
    Int num = 1, den = 1;
    unsigned long order = 0;
    for (std::size_t i = 0; i < g; ++i) {
      order += exps[i] - i;
      for (std::size_t j = i + 1; j < g; ++j) num *= Int(exps[j]) - Int(exps[i]);
    }
    for (std::size_t i = 0; i < g; ++i)
      for (unsigned long k = 2; k <= i; ++k) den *= Int(k);
    REQUIRE(w.order().has_value());
    CHECK(*w.order() == order);
    CHECK(w.coeff(order) == Rat(num) / Rat(den));
  }
}

TEST_CASE("inverse and square root invert") {
  std::mt19937_64 rng(17);
  for (const CoefficientField& field :
       {CoefficientField::rationals(), CoefficientField::prime_field(11)}) {
    TruncatedSeries u = random_series(field, 10, rng, /*unit=*/true);
    TruncatedSeries inv = series_invert(u);
    TruncatedSeries prod = u * inv;
    CHECK(prod.coeff(0) == field.reduce(Rat(1)));
    for (std::size_t n = 1; n < prod.precision(); ++n)
      CHECK(field.is_zero(prod.coeff(n)));

    TruncatedSeries sq = u * u;
    TruncatedSeries root = series_sqrt(sq, u.coeff(0));
    CHECK(agree_on_shared_prefix(root, u));
    TruncatedSeries other = series_sqrt(sq, field.neg(u.coeff(0)));
    CHECK(agree_on_shared_prefix(other, -u));
  }

  CoefficientField q = CoefficientField::rationals();
  TruncatedSeries four = TruncatedSeries::constant(q, Rat(4), 5);
  CHECK(series_sqrt(four).coeff(0) == Rat(2));  // canonical branch
  CHECK_THROWS_AS(series_invert(TruncatedSeries::parameter(q, 5)), std::domain_error);
  CHECK_THROWS_AS(
      series_sqrt(TruncatedSeries::constant(CoefficientField::prime_field(2), Rat(1), 4)),
      std::domain_error);
}

TEST_CASE("divide by parameter") {
  CoefficientField q = CoefficientField::rationals();
  TruncatedSeries t = TruncatedSeries::parameter(q, 6);
  TruncatedSeries f = t.pow(2) + t.pow(3);
  TruncatedSeries d = f.divide_by_parameter(2);
  CHECK(d.precision() == 4);
  CHECK(d.coeff(0) == Rat(1));
  CHECK(d.coeff(1) == Rat(1));
  CHECK_THROWS_AS((t + TruncatedSeries::constant(q, Rat(1), 6)).divide_by_parameter(1),
                  std::domain_error);
}
