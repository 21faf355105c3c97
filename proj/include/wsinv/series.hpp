#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wsinv/field.hpp"

namespace wsinv {

// Truncated power series sum c_n t^n, n < precision, over a runtime field.
// Precision is information content: every binary operation truncates to the
// minimum operand precision, and no coefficient at index >= precision is ever
// claimed. A precision of 0 is a series about which nothing is known.
class TruncatedSeries {
 public:
  TruncatedSeries(CoefficientField field, std::size_t precision);
  static TruncatedSeries from_coefficients(CoefficientField field, std::vector<Rat> coeffs);
  static TruncatedSeries constant(CoefficientField field, const Rat& value, std::size_t precision);
  // The series t.
  static TruncatedSeries parameter(CoefficientField field, std::size_t precision);

  const CoefficientField& field() const { return field_; }
  std::size_t precision() const { return coeffs_.size(); }
  const Rat& coeff(std::size_t n) const;  // throws std::out_of_range at n >= precision

  TruncatedSeries truncate(std::size_t new_precision) const;

  TruncatedSeries operator+(const TruncatedSeries& other) const;
  TruncatedSeries operator-(const TruncatedSeries& other) const;
  TruncatedSeries operator*(const TruncatedSeries& other) const;
  TruncatedSeries operator-() const;
  TruncatedSeries scale(const Rat& c) const;
  TruncatedSeries pow(unsigned exponent) const;

  // Divide by t^k; requires the first k coefficients to vanish. Precision
  // drops by k.
  TruncatedSeries divide_by_parameter(std::size_t k = 1) const;

  // Index of the first nonzero known coefficient; nullopt when all known
  // coefficients vanish (the order is then only known to be >= precision).
  std::optional<std::size_t> order() const;

  bool is_known_zero() const { return !order().has_value(); }

  std::string to_string() const;

 private:
  CoefficientField field_;
  std::vector<Rat> coeffs_;  // size == precision, entries reduced
};

// Equality of all coefficients both series know about (up to min precision).
bool agree_on_shared_prefix(const TruncatedSeries& a, const TruncatedSeries& b);

// Hasse derivative D_i: t^n -> C(n, i) t^{n-i}. Output precision is
// max(precision - i, 0). D_i D_j = C(i+j, i) D_{i+j} in every characteristic.
TruncatedSeries hasse_derivative(const TruncatedSeries& f, std::size_t i);

// Ordinary formal derivative (equals 1! * D_1).
TruncatedSeries formal_derivative(const TruncatedSeries& f);

// Hasse-derivative Wronskian det(D_{i-1} f_j), i, j = 1..g. All inputs must
// share field and precision; the result's precision is precision - g + 1.
TruncatedSeries wronskian(const std::vector<TruncatedSeries>& fs);

// Multiplicative inverse; requires a unit (nonzero constant term).
TruncatedSeries series_invert(const TruncatedSeries& f);

// Square root by quadratic Newton iteration, branch fixed by the supplied
// square root of the constant term. The overload without a root uses the
// field's canonical one. Characteristic 2 is rejected.
TruncatedSeries series_sqrt(const TruncatedSeries& f, const Rat& constant_root);
TruncatedSeries series_sqrt(const TruncatedSeries& f);

}  // namespace wsinv
