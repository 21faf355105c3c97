#include "wsinv/series.hpp"

#include <sstream>
#include <stdexcept>

namespace wsinv {

TruncatedSeries::TruncatedSeries(CoefficientField field, std::size_t precision)
    : field_(std::move(field)), coeffs_(precision, Rat(0)) {}

TruncatedSeries TruncatedSeries::from_coefficients(CoefficientField field,
                                                   std::vector<Rat> coeffs) {
  TruncatedSeries s(field, coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) s.coeffs_[i] = s.field_.reduce(coeffs[i]);
  return s;
}

TruncatedSeries TruncatedSeries::constant(CoefficientField field, const Rat& value,
                                          std::size_t precision) {
  TruncatedSeries s(field, precision);
  if (precision > 0) s.coeffs_[0] = s.field_.reduce(value);
  return s;
}

TruncatedSeries TruncatedSeries::parameter(CoefficientField field, std::size_t precision) {
  TruncatedSeries s(field, precision);
  if (precision > 1) s.coeffs_[1] = s.field_.reduce(Rat(1));
  return s;
}

const Rat& TruncatedSeries::coeff(std::size_t n) const {
  if (n >= coeffs_.size())
    throw std::out_of_range("coefficient index beyond series precision");
  return coeffs_[n];
}

TruncatedSeries TruncatedSeries::truncate(std::size_t new_precision) const {
  if (new_precision >= precision()) return *this;
  TruncatedSeries s(field_, new_precision);
  for (std::size_t i = 0; i < new_precision; ++i) s.coeffs_[i] = coeffs_[i];
  return s;
}

namespace {

void require_same_field(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.field() != b.field())
    throw std::invalid_argument("series over different coefficient fields");
}

}  // namespace

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& other) const {
  require_same_field(*this, other);
  std::size_t n = std::min(precision(), other.precision());
  TruncatedSeries s(field_, n);
  for (std::size_t i = 0; i < n; ++i) s.coeffs_[i] = field_.add(coeffs_[i], other.coeffs_[i]);
  return s;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& other) const {
  require_same_field(*this, other);
  std::size_t n = std::min(precision(), other.precision());
  TruncatedSeries s(field_, n);
  for (std::size_t i = 0; i < n; ++i) s.coeffs_[i] = field_.sub(coeffs_[i], other.coeffs_[i]);
  return s;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& other) const {
  require_same_field(*this, other);
  std::size_t n = std::min(precision(), other.precision());
  TruncatedSeries s(field_, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rat acc(0);
    for (std::size_t j = 0; j <= i; ++j) acc += coeffs_[j] * other.coeffs_[i - j];
    s.coeffs_[i] = field_.reduce(acc);
  }
  return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries s(field_, precision());
  for (std::size_t i = 0; i < precision(); ++i) s.coeffs_[i] = field_.neg(coeffs_[i]);
  return s;
}

TruncatedSeries TruncatedSeries::scale(const Rat& c) const {
  TruncatedSeries s(field_, precision());
  Rat r = field_.reduce(c);
  for (std::size_t i = 0; i < precision(); ++i) s.coeffs_[i] = field_.mul(coeffs_[i], r);
  return s;
}

TruncatedSeries TruncatedSeries::pow(unsigned exponent) const {
  TruncatedSeries result = constant(field_, Rat(1), precision());
  TruncatedSeries base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    base = base * base;
    exponent >>= 1u;
  }
  return result;
}

TruncatedSeries TruncatedSeries::divide_by_parameter(std::size_t k) const {
  if (precision() < k)
    throw std::invalid_argument("series precision too low to divide by t^k");
  for (std::size_t i = 0; i < k; ++i) {
    if (coeffs_[i] != 0)
      throw std::domain_error("series not divisible by t^" + std::to_string(k));
  }
  TruncatedSeries s(field_, precision() - k);
  for (std::size_t i = 0; i + k < precision(); ++i) s.coeffs_[i] = coeffs_[i + k];
  return s;
}

std::optional<std::size_t> TruncatedSeries::order() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) return i;
  }
  return std::nullopt;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) out << " + ";
    out << rational_to_string(coeffs_[i]);
    if (i > 0) out << "*t^" << i;
    first = false;
  }
  if (first) out << "0";
  out << " + O(t^" << coeffs_.size() << ")";
  return out.str();
}

bool agree_on_shared_prefix(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.field() != b.field()) return false;
  std::size_t n = std::min(a.precision(), b.precision());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeff(i) != b.coeff(i)) return false;
  }
  return true;
}

TruncatedSeries hasse_derivative(const TruncatedSeries& f, std::size_t i) {
  const CoefficientField& field = f.field();
  std::size_t out_precision = f.precision() >= i ? f.precision() - i : 0;
  std::vector<Rat> coeffs(out_precision, Rat(0));
  for (std::size_t n = i; n < f.precision(); ++n) {
    coeffs[n - i] = field.mul(field.binomial(n, i), f.coeff(n));
  }
  return TruncatedSeries::from_coefficients(field, std::move(coeffs));
}

TruncatedSeries formal_derivative(const TruncatedSeries& f) {
  const CoefficientField& field = f.field();
  std::size_t out_precision = f.precision() >= 1 ? f.precision() - 1 : 0;
  std::vector<Rat> coeffs(out_precision, Rat(0));
  for (std::size_t n = 1; n < f.precision(); ++n) {
    coeffs[n - 1] = field.mul(Rat(Int(n)), f.coeff(n));
  }
  return TruncatedSeries::from_coefficients(field, std::move(coeffs));
}

namespace {

// Cofactor expansion along the first column; matrices stay tiny (g <= 8).
TruncatedSeries series_determinant(const std::vector<std::vector<TruncatedSeries>>& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  const CoefficientField& field = m[0][0].field();
  std::size_t result_precision = SIZE_MAX;
  TruncatedSeries acc(field, 0);
  bool first_term = true;
  for (std::size_t row = 0; row < n; ++row) {
    std::vector<std::vector<TruncatedSeries>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      std::vector<TruncatedSeries> minor_row;
      minor_row.reserve(n - 1);
      for (std::size_t c = 1; c < n; ++c) minor_row.push_back(m[r][c]);
      minor.push_back(std::move(minor_row));
    }
    TruncatedSeries term = m[row][0] * series_determinant(minor);
    if (row % 2 == 1) term = -term;
    if (first_term) {
      acc = term;
      first_term = false;
    } else {
      acc = acc + term;
    }
    result_precision = std::min(result_precision, term.precision());
  }
  (void)result_precision;
  return acc;
}

}  // namespace

TruncatedSeries wronskian(const std::vector<TruncatedSeries>& fs) {
  if (fs.empty()) throw std::invalid_argument("wronskian of an empty family");
  for (const auto& f : fs) {
    if (f.field() != fs[0].field() || f.precision() != fs[0].precision())
      throw std::invalid_argument("wronskian inputs must share field and precision");
  }
  std::size_t g = fs.size();
  std::vector<std::vector<TruncatedSeries>> matrix;
  matrix.reserve(g);
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<TruncatedSeries> row;
    row.reserve(g);
    for (std::size_t j = 0; j < g; ++j) row.push_back(hasse_derivative(fs[j], i));
    matrix.push_back(std::move(row));
  }
  return series_determinant(matrix);
}

TruncatedSeries series_invert(const TruncatedSeries& f) {
  if (f.precision() == 0) throw std::invalid_argument("cannot invert a precision-0 series");
  const CoefficientField& field = f.field();
  if (field.is_zero(f.coeff(0))) throw std::domain_error("series is not a unit");
  std::size_t n = f.precision();
  std::vector<Rat> b(n, Rat(0));
  Rat c0_inv = field.inv(f.coeff(0));
  b[0] = c0_inv;
  for (std::size_t k = 1; k < n; ++k) {
    Rat acc(0);
    for (std::size_t j = 1; j <= k; ++j) acc += f.coeff(j) * b[k - j];
    b[k] = field.neg(field.mul(c0_inv, field.reduce(acc)));
  }
  return TruncatedSeries::from_coefficients(field, std::move(b));
}

TruncatedSeries series_sqrt(const TruncatedSeries& f, const Rat& constant_root) {
  const CoefficientField& field = f.field();
  if (field.characteristic() == 2)
    throw std::domain_error("series square root undefined in characteristic 2");
  if (f.precision() == 0) throw std::invalid_argument("cannot take sqrt of a precision-0 series");
  Rat root = field.reduce(constant_root);
  if (field.mul(root, root) != field.reduce(f.coeff(0)))
    throw std::invalid_argument("supplied constant root does not square to the constant term");
  if (field.is_zero(root)) throw std::domain_error("sqrt branch needs a unit constant term");

  std::size_t n = f.precision();
  Rat half = field.inv(field.from_int(2));
  TruncatedSeries x = TruncatedSeries::constant(field, root, n);
  // Quadratic Newton for x^2 = f: x <- (x + f/x)/2. Correct coefficients
  // double each pass, so ceil(log2 n) + 1 passes suffice at fixed precision.
  std::size_t passes = 1;
  while ((std::size_t{1} << passes) < n) ++passes;
  for (std::size_t pass = 0; pass <= passes; ++pass) {
    x = (x + f * series_invert(x)).scale(half);
  }
  return x;
}

TruncatedSeries series_sqrt(const TruncatedSeries& f) {
  if (f.precision() == 0) throw std::invalid_argument("cannot take sqrt of a precision-0 series");
  auto root = f.field().sqrt(f.coeff(0));
  if (!root.has_value())
    throw std::domain_error("constant term has no square root in the coefficient field");
  return series_sqrt(f, *root);
}

}  // namespace wsinv
