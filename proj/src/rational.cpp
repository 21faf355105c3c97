#include "wsinv/rational.hpp"

#include <stdexcept>

#include <boost/multiprecision/miller_rabin.hpp>

namespace wsinv {

Int parse_int(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("sign without digits: " + text);
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw std::invalid_argument("malformed integer literal: " + text);
  }
  // boost's string constructor rejects an explicit '+'.
  return Int(text[0] == '+' ? text.substr(1) : text);
}

Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rat(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rat(num, den);
}

std::string rational_to_string(const Rat& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (int small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    if (n == small) return true;
    if (n % small == 0) return false;
  }
  // 25 rounds leave a composite survival chance far below anything relevant
  // at the sizes this library ever sees.
  return boost::multiprecision::miller_rabin_test(n, 25);
}

namespace {

long factor_multiplicity(Int n, const Int& p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

void require_prime(const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("valuation base must be prime: " + p.str());
}

}  // namespace

std::optional<long> p_valuation(const Int& n, const Int& p) {
  require_prime(p);
  if (n == 0) return std::nullopt;
  return factor_multiplicity(boost::multiprecision::abs(n), p);
}

std::optional<long> p_valuation(const Rat& q, const Int& p) {
  require_prime(p);
  if (q == 0) return std::nullopt;
  Int num = boost::multiprecision::abs(boost::multiprecision::numerator(q));
  Int den = boost::multiprecision::denominator(q);
  return factor_multiplicity(num, p) - factor_multiplicity(den, p);
}

}  // namespace wsinv
