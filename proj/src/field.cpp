#include "wsinv/field.hpp"

#include <stdexcept>

namespace wsinv {

namespace {

Int mod_positive(const Int& a, const Int& p) {
  Int r = a % p;
  if (r < 0) r += p;
  return r;
}

// Extended Euclid; requires gcd(a, p) = 1.
Int mod_inverse(const Int& a, const Int& p) {
  Int old_r = mod_positive(a, p), r = p;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("element not invertible mod p");
  return mod_positive(old_s, p);
}

}  // namespace

CoefficientField CoefficientField::rationals() { return CoefficientField(Int(0)); }

CoefficientField CoefficientField::prime_field(const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("prime field needs a prime, got " + p.str());
  return CoefficientField(p);
}

Rat CoefficientField::reduce(const Rat& x) const {
  if (char_ == 0) return x;
  Int num = numerator(x);
  Int den = denominator(x);
  if (den % char_ == 0) throw std::domain_error("denominator vanishes in F_" + char_.str());
  Int r = mod_positive(num, char_);
  if (den != 1) r = mod_positive(r * mod_inverse(den, char_), char_);
  return Rat(r);
}

Rat CoefficientField::add(const Rat& a, const Rat& b) const { return reduce(a + b); }
Rat CoefficientField::sub(const Rat& a, const Rat& b) const { return reduce(a - b); }
Rat CoefficientField::mul(const Rat& a, const Rat& b) const { return reduce(a * b); }
Rat CoefficientField::neg(const Rat& a) const { return reduce(-a); }

Rat CoefficientField::inv(const Rat& a) const {
  Rat r = reduce(a);
  if (r == 0) throw std::domain_error("division by zero");
  if (char_ == 0) return Rat(1) / r;
  return Rat(mod_inverse(numerator(r), char_));
}

Rat CoefficientField::div(const Rat& a, const Rat& b) const { return mul(a, inv(b)); }

bool CoefficientField::is_zero(const Rat& a) const { return reduce(a) == 0; }

Int integer_binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int result = 1;
  for (unsigned long i = 1; i <= k; ++i) {
    result *= Int(n - k + i);
    result /= Int(i);  // exact at every step
  }
  return result;
}

Rat CoefficientField::binomial(unsigned long n, unsigned long k) const {
  return reduce(Rat(integer_binomial(n, k)));
}

std::optional<Rat> CoefficientField::sqrt(const Rat& x) const {
  Rat r = reduce(x);
  if (char_ == 0) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rat(0);
    Int num = numerator(r), den = denominator(r);
    Int sn = boost::multiprecision::sqrt(num);
    Int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rat(sn, sd);
  }
  Int a = numerator(r);
  if (a == 0) return Rat(0);
  if (char_ == 2) return Rat(a);  // squaring is the identity on F_2
  // Desk-scale p: direct search, smaller residue of the pair first.
  for (Int root = 1; root <= char_ / 2; ++root) {
    if (mod_positive(root * root, char_) == a) return Rat(root);
  }
  return std::nullopt;
}

std::string CoefficientField::describe() const {
  return char_ == 0 ? "Q" : "F_" + char_.str();
}

}  // namespace wsinv
