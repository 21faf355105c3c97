#include "wsinv/polynomial.hpp"

#include <stdexcept>

namespace wsinv {

void Poly::normalize() {
  for (auto& c : coeffs_) c = field_.reduce(c);
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::from_coefficients(CoefficientField field, std::vector<Rat> coeffs) {
  Poly p(std::move(field));
  p.coeffs_ = std::move(coeffs);
  p.normalize();
  return p;
}

Poly Poly::constant(CoefficientField field, const Rat& c) {
  return from_coefficients(std::move(field), {c});
}

Poly Poly::monic_from_roots(CoefficientField field, const std::vector<Rat>& roots) {
  Poly p = constant(field, Rat(1));
  for (const Rat& r : roots) {
    Poly factor = from_coefficients(field, {field.neg(r), Rat(1)});
    p = p * factor;
  }
  return p;
}

Rat Poly::leading_coefficient() const {
  if (coeffs_.empty()) return Rat(0);
  return coeffs_.back();
}

Rat Poly::eval(const Rat& x) const {
  Rat acc(0);
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = field_.add(field_.mul(acc, x), coeffs_[i]);
  return acc;
}

Poly Poly::operator+(const Poly& other) const {
  if (field_ != other.field_) throw std::invalid_argument("polynomials over different fields");
  std::vector<Rat> c(std::max(coeffs_.size(), other.coeffs_.size()), Rat(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) c[i] += other.coeffs_[i];
  return from_coefficients(field_, std::move(c));
}

Poly Poly::operator-(const Poly& other) const {
  if (field_ != other.field_) throw std::invalid_argument("polynomials over different fields");
  std::vector<Rat> c(std::max(coeffs_.size(), other.coeffs_.size()), Rat(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) c[i] -= other.coeffs_[i];
  return from_coefficients(field_, std::move(c));
}

Poly Poly::operator*(const Poly& other) const {
  if (field_ != other.field_) throw std::invalid_argument("polynomials over different fields");
  if (coeffs_.empty() || other.coeffs_.empty()) return Poly(field_);
  std::vector<Rat> c(coeffs_.size() + other.coeffs_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  return from_coefficients(field_, std::move(c));
}

Poly Poly::scale(const Rat& c) const {
  std::vector<Rat> out(coeffs_);
  for (auto& x : out) x *= c;
  return from_coefficients(field_, std::move(out));
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return Poly(field_);
  std::vector<Rat> c(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * Rat(Int(i));
  return from_coefficients(field_, std::move(c));
}

Poly Poly::taylor_shift(const Rat& x0) const {
  // In-place Horner shift: repeatedly divide by (x - x0), O(d^2) exact.
  std::vector<Rat> c(coeffs_);
  Rat shift = field_.reduce(x0);
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    for (std::size_t j = c.size() - 1; j-- > k;) {
      c[j] = field_.add(c[j], field_.mul(shift, c[j + 1]));
    }
  }
  return from_coefficients(field_, std::move(c));
}

TruncatedSeries Poly::series_at(const Rat& x0, std::size_t precision) const {
  Poly shifted = taylor_shift(x0);
  std::vector<Rat> c(precision, Rat(0));
  for (std::size_t i = 0; i < precision; ++i) c[i] = shifted.coeff(i);
  return TruncatedSeries::from_coefficients(field_, std::move(c));
}

TruncatedSeries Poly::eval_series(const TruncatedSeries& arg) const {
  TruncatedSeries acc = TruncatedSeries::constant(field_, Rat(0), arg.precision());
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc * arg + TruncatedSeries::constant(field_, coeffs_[i], arg.precision());
  }
  return acc;
}

Rat resultant(const Poly& f, const Poly& g) {
  if (f.field() != g.field()) throw std::invalid_argument("resultant over different fields");
  const CoefficientField& field = f.field();
  long m = f.degree(), n = g.degree();
  if (m < 0 || n < 0) return Rat(0);
  if (m == 0 && n == 0) return Rat(1);
  std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<Rat>> s(size, std::vector<Rat>(size, Rat(0)));
  for (long row = 0; row < n; ++row) {
    for (long j = 0; j <= m; ++j) s[row][row + j] = f.coeff(static_cast<std::size_t>(m - j));
  }
  for (long row = 0; row < m; ++row) {
    for (long j = 0; j <= n; ++j) s[n + row][row + j] = g.coeff(static_cast<std::size_t>(n - j));
  }
  // Gaussian elimination with first-nonzero pivoting; exact over the field.
  Rat det(1);
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    while (pivot < size && field.is_zero(s[pivot][col])) ++pivot;
    if (pivot == size) return Rat(0);
    if (pivot != col) {
      std::swap(s[pivot], s[col]);
      det = field.neg(det);
    }
    det = field.mul(det, s[col][col]);
    Rat inv = field.inv(s[col][col]);
    for (std::size_t row = col + 1; row < size; ++row) {
      if (field.is_zero(s[row][col])) continue;
      Rat factor = field.mul(s[row][col], inv);
      for (std::size_t k = col; k < size; ++k) {
        s[row][k] = field.sub(s[row][k], field.mul(factor, s[col][k]));
      }
    }
  }
  return det;
}

Rat discriminant(const Poly& f) {
  long d = f.degree();
  if (d < 1) throw std::invalid_argument("discriminant needs degree >= 1");
  const CoefficientField& field = f.field();
  Rat res = resultant(f, f.derivative());
  Rat disc = field.div(res, f.leading_coefficient());
  if ((d * (d - 1) / 2) % 2 == 1) disc = field.neg(disc);
  return disc;
}

}  // namespace wsinv
