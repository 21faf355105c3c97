#pragma once

#include <vector>

#include "wsinv/field.hpp"
#include "wsinv/series.hpp"

namespace wsinv {

// Dense univariate polynomial over a runtime coefficient field, coefficients
// ascending, trailing zeros stripped. The zero polynomial has degree -1.
class Poly {
 public:
  explicit Poly(CoefficientField field) : field_(std::move(field)) {}
  static Poly from_coefficients(CoefficientField field, std::vector<Rat> coeffs);
  static Poly constant(CoefficientField field, const Rat& c);
  static Poly monic_from_roots(CoefficientField field, const std::vector<Rat>& roots);

  const CoefficientField& field() const { return field_; }
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Rat leading_coefficient() const;
  Rat coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }

  Rat eval(const Rat& x) const;

  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator*(const Poly& other) const;
  Poly scale(const Rat& c) const;
  Poly derivative() const;

  // Coefficients of f(x0 + t) as a polynomial in t (exact Horner shift).
  Poly taylor_shift(const Rat& x0) const;

  // f(x0 + t) as a truncated series in t.
  TruncatedSeries series_at(const Rat& x0, std::size_t precision) const;

  // f evaluated on a series argument (polynomial composition via Horner).
  TruncatedSeries eval_series(const TruncatedSeries& arg) const;

 private:
  void normalize();

  CoefficientField field_;
  std::vector<Rat> coeffs_;
};

// Resultant via the Sylvester matrix, exact over the field.
Rat resultant(const Poly& f, const Poly& g);

// disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f), d = deg f >= 1.
Rat discriminant(const Poly& f);

}  // namespace wsinv
