#pragma once

#include <optional>

#include "wsinv/rational.hpp"

namespace wsinv {

// Runtime-selected coefficient field: the rationals or F_p for an odd or even
// prime p. Elements are carried as Rat; in the F_p case the canonical
// representative is the integer residue in [0, p).
class CoefficientField {
 public:
  static CoefficientField rationals();
  static CoefficientField prime_field(const Int& p);  // throws unless p prime

  bool is_rationals() const { return char_ == 0; }
  // 0 for the rationals, p for F_p.
  const Int& characteristic() const { return char_; }

  bool operator==(const CoefficientField& other) const { return char_ == other.char_; }
  bool operator!=(const CoefficientField& other) const { return char_ != other.char_; }

  // Canonical representative of x. For F_p this inverts the denominator mod p
  // and throws std::domain_error if the denominator is divisible by p.
  Rat reduce(const Rat& x) const;

  Rat add(const Rat& a, const Rat& b) const;
  Rat sub(const Rat& a, const Rat& b) const;
  Rat mul(const Rat& a, const Rat& b) const;
  Rat neg(const Rat& a) const;
  Rat inv(const Rat& a) const;  // throws std::domain_error on zero
  Rat div(const Rat& a, const Rat& b) const;

  bool is_zero(const Rat& a) const;
  Rat from_int(long n) const { return reduce(Rat(n)); }

  // Integer binomial coefficient reduced into the field. In characteristic p
  // this computes the exact integer first and reduces (Lucas-compatible);
  // factorial quotients would divide by zero for n >= p.
  Rat binomial(unsigned long n, unsigned long k) const;

  // Canonical square root if x is a square: over Q the nonnegative rational
  // root, over F_p the least of the two residues. std::nullopt if none exists.
  std::optional<Rat> sqrt(const Rat& x) const;

  std::string describe() const;

 private:
  explicit CoefficientField(Int characteristic) : char_(std::move(characteristic)) {}

  Int char_;  // 0 = rationals
};

// Exact integer binomial via the multiplicative formula.
Int integer_binomial(unsigned long n, unsigned long k);

}  // namespace wsinv
