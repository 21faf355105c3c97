#include "wsinv/hyperelliptic.hpp"

#include <string>

namespace wsinv {

HyperellipticEquation::HyperellipticEquation(CoefficientField field, Rat a_scalar, Poly f, int g)
    : field_(std::move(field)), a_scalar_(std::move(a_scalar)), f_(std::move(f)), g_(g) {}

HyperellipticEquation HyperellipticEquation::from_f(CoefficientField field, const Rat& a_scalar,
                                                    Poly f) {
  if (field.characteristic() == 2)
    throw ValidationError("characteristic 2 models are unsupported");
  if (f.degree() < 3) throw ValidationError("f must have degree >= 3");
  Rat a = field.reduce(a_scalar);
  if (field.is_zero(a)) throw ValidationError("leading scalar must be nonzero");
  Rat lc = f.leading_coefficient();
  if (!field.is_zero(field.sub(lc, Rat(1)))) {
    a = field.mul(a, lc);
    f = f.scale(field.inv(lc));
  }
  if (field.is_zero(discriminant(f))) throw ValidationError("f must be separable");
  int g = static_cast<int>((f.degree() - 1) / 2);
  return HyperellipticEquation(std::move(field), std::move(a), std::move(f), g);
}

HyperellipticEquation HyperellipticEquation::from_roots(CoefficientField field,
                                                        const Rat& a_scalar,
                                                        const std::vector<Rat>& roots) {
  return from_f(field, a_scalar, Poly::monic_from_roots(field, roots));
}

HyperellipticEquation HyperellipticEquation::from_ab(CoefficientField field, const Poly& a,
                                                     const Poly& b) {
  if (field.characteristic() == 2)
    throw ValidationError("characteristic 2 models are unsupported");
  // (2y + a)^2 = a^2 + 4b.
  Poly f = a * a + b.scale(Rat(4));
  return from_f(std::move(field), Rat(1), std::move(f));
}

bool HyperellipticEquation::is_branch_x(const Rat& x0) const {
  return field_.is_zero(f_.eval(x0));
}

Int ord_lambda(const RootConfig& config, const ClusterTree& tree) {
  if (config.p == 2) throw ValidationError("residue characteristic 2 is unsupported");
  check_structure(config);
  if (tree.config().roots != config.roots || tree.config().p != config.p)
    throw ValidationError("tree was not built from this configuration");

  Poly f = Poly::monic_from_roots(CoefficientField::rationals(), config.roots);
  Rat disc = discriminant(f);
  auto v_disc = p_valuation(disc, config.p);
  if (!v_disc) throw std::logic_error("separable polynomial with zero discriminant");

  Rat e = compute_e(tree);
  Rat value = Rat(config.g) * Rat(*v_disc) - Rat(8 * config.g + 4) * e;
  if (denominator(value) != 1)
    throw std::logic_error("discriminant valuation came out non-integral");
  return numerator(value);
}

namespace {

// f = (x - x0) u with f(x0) = 0; returns u by synthetic division.
Poly deflate_at_root(const Poly& f, const Rat& x0) {
  const CoefficientField& field = f.field();
  long d = f.degree();
  std::vector<Rat> u(d, Rat(0));
  Rat carry(0);
  for (long k = d; k >= 1; --k) {
    carry = field.add(f.coeff(k), field.mul(x0, carry));
    u[k - 1] = carry;
  }
  Rat rem = field.add(f.coeff(0), field.mul(x0, carry));
  if (!field.is_zero(rem)) throw std::logic_error("deflation at a non-root");
  return Poly::from_coefficients(field, std::move(u));
}

// Powers 1, x, .., x^{g-1} of x = x0 + t times a common unit factor.
std::vector<TruncatedSeries> basis_numerators(const CoefficientField& field, const Rat& x0,
                                              const TruncatedSeries& x_tail,
                                              const TruncatedSeries& unit, int g) {
  TruncatedSeries x = TruncatedSeries::constant(field, x0, x_tail.precision()) + x_tail;
  std::vector<TruncatedSeries> fs;
  TruncatedSeries xpow = TruncatedSeries::constant(field, Rat(1), x.precision());
  for (int j = 0; j < g; ++j) {
    fs.push_back(xpow * unit);
    xpow = xpow * x;
  }
  return fs;
}

}  // namespace

bool hyperelliptic_wronskian_check(const HyperellipticEquation& eq, const Rat& x0,
                                   std::size_t precision) {
  int g = eq.genus();
  std::size_t needed = static_cast<std::size_t>(g * (g + 1) / 2 + 2);
  if (precision < needed)
    throw ValidationError("precision " + std::to_string(precision) + " too low, need >= " +
                          std::to_string(needed));
  const CoefficientField& field = eq.field();
  Rat fx0 = eq.f().eval(x0);
  if (field.is_zero(fx0))
    throw ValidationError("expansion point is a branch point; 2y is not a unit there");

  // y = sqrt(A f(x0)) * s with s = sqrt(f(x0+t)/f(x0)) a unit series over the
  // base field. The constant sqrt factors cancel between the two sides.
  TruncatedSeries ratio = eq.f().series_at(x0, precision).scale(field.inv(fx0));
  TruncatedSeries s_inv = series_invert(series_sqrt(ratio, Rat(1)));

  TruncatedSeries t = TruncatedSeries::parameter(field, precision);
  std::vector<TruncatedSeries> fs = basis_numerators(field, x0, t, s_inv, g);
  TruncatedSeries lhs = wronskian(fs);
  TruncatedSeries rhs = s_inv.pow(static_cast<unsigned>(g));
  return agree_on_shared_prefix(lhs, rhs);
}

long weierstrass_gap_order(const HyperellipticEquation& eq, const Rat& x0,
                           std::size_t precision) {
  int g = eq.genus();
  std::size_t needed = static_cast<std::size_t>(g * (g - 1) / 2 + g + 2);
  if (precision < needed)
    throw ValidationError("precision " + std::to_string(precision) + " too low, need >= " +
                          std::to_string(needed));
  const CoefficientField& field = eq.field();
  Rat fx0 = eq.f().eval(x0);

  std::vector<TruncatedSeries> fs;
  if (!field.is_zero(fx0)) {
    // Generic point, parameter t = x - x0. Orders are insensitive to the
    // constant (2 sqrt(A f(x0)))^{-g}, so the unit-cancelled form suffices.
    TruncatedSeries ratio = eq.f().series_at(x0, precision).scale(field.inv(fx0));
    TruncatedSeries s_inv = series_invert(series_sqrt(ratio, Rat(1)));
    TruncatedSeries t = TruncatedSeries::parameter(field, precision);
    fs = basis_numerators(field, x0, t, s_inv, g);
  } else {
    // Branch point, parameter t = y. Solve t^2 = A (x - x0) u(x) for
    // x = x0 + X(t) by fixed-point iteration gaining two orders per pass.
    Poly u = deflate_at_root(eq.f(), x0);
    TruncatedSeries t2 = TruncatedSeries::parameter(field, precision).pow(2);
    TruncatedSeries x0_const = TruncatedSeries::constant(field, x0, precision);
    TruncatedSeries big_x = TruncatedSeries::constant(field, Rat(0), precision);
    Rat a_inv = field.inv(eq.leading_unit());
    for (std::size_t pass = 0; pass <= precision / 2 + 1; ++pass)
      big_x = t2 * series_invert(u.eval_series(x0_const + big_x)).scale(a_inv);
    TruncatedSeries recovered = big_x * u.eval_series(x0_const + big_x);
    if (!agree_on_shared_prefix(recovered.scale(eq.leading_unit()), t2))
      throw std::logic_error("branch-point parametrization failed to converge");

    // dx/dt / (2t) is a unit series: X has valuation exactly 2.
    TruncatedSeries dx_over_2t = formal_derivative(big_x).divide_by_parameter(1).scale(Rat(1, 2));
    fs = basis_numerators(field, x0, big_x.truncate(dx_over_2t.precision()), dx_over_2t, g);
  }

  TruncatedSeries w = wronskian(fs);
  auto ord = w.order();
  if (!ord.has_value())
    throw ValidationError("wronskian vanishes to working precision; raise the precision");
  return static_cast<long>(*ord);
}

}  // namespace wsinv
