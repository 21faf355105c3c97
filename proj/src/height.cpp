#include "wsinv/height.hpp"

#include <cmath>

namespace wsinv {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

double to_double(const Rat& r) { return r.convert_to<double>(); }
double to_double(const Int& n) { return n.convert_to<double>(); }
}  // namespace

void validate(const GlobalHeightInput& in) {
  if (in.g < 2) throw ValidationError("global height ledger requires genus >= 2");
  if (in.degree_k < 1) throw ValidationError("[K:Q] must be a positive integer");
  long long g = in.g;
  long long expected = g * g * g - g;
  if (in.nt_heights.size() != static_cast<std::size_t>(expected))
    throw ValidationError("expected one Neron-Tate height per Weierstrass section, g^3 - g values");
  for (double h : in.nt_heights)
    if (!(h >= 0) || !std::isfinite(h))
      throw ValidationError("Neron-Tate heights must be finite and nonnegative");
  for (const auto& loc : in.locals) {
    if (!(loc.log_residue_size > 0) || !std::isfinite(loc.log_residue_size))
      throw ValidationError("log residue size must be positive and finite");
    if (loc.ord_delta < 0) throw ValidationError("ord Delta must be nonnegative");
    if (loc.sum_phi_sq > 0) throw ValidationError("sum of Phi self-intersections must be <= 0");
    if (loc.e_omega_degree < 0) throw ValidationError("(E, omega) degree must be >= 0");
  }
  if (in.archs.size() != static_cast<std::size_t>(in.degree_k))
    throw ValidationError("need exactly one archimedean entry per embedding, [K:Q] in total");
  for (const auto& arch : in.archs)
    if (!std::isfinite(arch.log_t)) throw ValidationError("log T must be finite");
}

Int slope_numerator(int g) { return Int(3 * g - 1) * Int(8 * g + 4); }
Int slope_denominator(int g) { return Int(2 * g - 1) * Int(g + 1); }
Int archimedean_coefficient(int g) { return Int(4) * g * Int(2 * g - 1) * Int(g + 1); }
Int t_coefficient(int g) { return Int(8) * g * g; }

Rat slope_constant(int g) {
  if (g < 2) throw ValidationError("the slope constant is defined for genus >= 2");
  return Rat(slope_numerator(g), slope_denominator(g));
}

double theorem_norm_constant_log(int g, double log_t) {
  if (g < 1) throw ValidationError("genus must be >= 1");
  return -to_double(archimedean_coefficient(g)) * kLog2Pi + to_double(t_coefficient(g)) * log_t;
}

DegLambdaResult deg_lambda(const GlobalHeightInput& in) {
  validate(in);
  int g = in.g;
  Rat gg1 = Rat(Int(g) * Int(g - 1));  // g(g-1)

  double height_sum = 0;
  for (double h : in.nt_heights) height_sum += h;
  double height_term = to_double(Rat(2 * in.degree_k) / gg1) * height_sum;

  // Per place: exact rational combination, floated against log #k at the end.
  double local_term = 0;
  for (const auto& loc : in.locals) {
    Rat combo = -loc.sum_phi_sq / gg1;
    combo += Rat(slope_denominator(g)) * loc.ord_delta;  // (2g-1)(g+1) ord Delta
    combo += Rat(4) * loc.e_omega_degree;
    local_term += to_double(combo) * loc.log_residue_size;
  }

  double log_t_sum = 0;
  for (const auto& arch : in.archs) log_t_sum += arch.log_t;
  double arch_term = -to_double(archimedean_coefficient(g)) * in.degree_k * kLog2Pi +
                     to_double(t_coefficient(g)) * log_t_sum;

  DegLambdaResult out;
  out.height_term = height_term;
  out.local_term = local_term;
  out.arch_term = arch_term;
  out.undivided = height_term + local_term + arch_term;
  out.value = out.undivided / to_double(slope_numerator(g));
  return out;
}

double faltings_lower_bound(int g, int degree_k,
                            const std::vector<ArchLedgerEntry>& archs) {
  if (g < 1) throw ValidationError("genus must be >= 1");
  if (degree_k < 1) throw ValidationError("[K:Q] must be a positive integer");
  if (archs.size() != static_cast<std::size_t>(degree_k))
    throw ValidationError("need exactly one archimedean entry per embedding, [K:Q] in total");
  double log_t_sum = 0;
  for (const auto& arch : archs) {
    if (!std::isfinite(arch.log_t)) throw ValidationError("log T must be finite");
    log_t_sum += arch.log_t;
  }
  double undivided = -to_double(archimedean_coefficient(g)) * kLog2Pi +
                     to_double(t_coefficient(g)) * log_t_sum / degree_k;
  return undivided / to_double(slope_numerator(g));
}

BostBound bost_bound(int g, int degree_k, const std::vector<MonteCarloResult>& integrals) {
  if (g < 1) throw ValidationError("genus must be >= 1");
  if (degree_k < 1) throw ValidationError("[K:Q] must be a positive integer");
  if (integrals.size() != static_cast<std::size_t>(degree_k))
    throw ValidationError("need exactly one theta integral per embedding, [K:Q] in total");
  BostBound out;
  double sum = 0, var = 0;
  for (const auto& mc : integrals) {
    sum += mc.mean;
    var += mc.std_error * mc.std_error;
  }
  out.value = -g * kLog2Pi - 2.0 * sum / degree_k;
  out.std_error = 2.0 * std::sqrt(var) / degree_k;
  return out;
}

}  // namespace wsinv
