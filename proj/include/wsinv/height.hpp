#pragma once

#include <string>
#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/rational.hpp"
#include "wsinv/theta.hpp"

namespace wsinv {

// One finite place: the combinatorial fiber quantities together with the log
// of the residue field size that weights them in global formulas.
struct LocalLedgerEntry {
  std::string place;
  double log_residue_size = 0;  // log #k(s), positive
  Int ord_delta = 0;            // >= 0
  Rat sum_phi_sq = 0;           // sum over sections of (Phi_P, Phi_P), <= 0
  Rat e_omega_degree = 0;       // degree of omega on the residual divisor, >= 0
};

// One archimedean embedding with its analytic invariant.
struct ArchLedgerEntry {
  std::string embedding;
  double log_t = 0;
};

// Everything the closed height formula consumes. The Neron-Tate heights come
// one per Weierstrass section with multiplicity, g^3 - g values in total.
struct GlobalHeightInput {
  int g = 2;
  int degree_k = 1;  // [K:Q]
  std::vector<double> nt_heights;
  std::vector<LocalLedgerEntry> locals;
  std::vector<ArchLedgerEntry> archs;  // exactly degree_k entries
};

void validate(const GlobalHeightInput& in);

// Named coefficients of the formula, always derived from g.
Int slope_numerator(int g);        // (3g-1)(8g+4)
Int slope_denominator(int g);      // (2g-1)(g+1)
Int archimedean_coefficient(int g);  // 4g(2g-1)(g+1)
Int t_coefficient(int g);          // 8g^2

// The slope (3g-1)(8g+4)/((2g-1)(g+1)) as an exact rational; > 11 for all
// g >= 2 and increasing toward 12.
Rat slope_constant(int g);

// log of the theorem's norm constant (2pi)^{-4g(2g-1)(g+1)} T^{8g^2}; kept in
// log form because the value itself underflows a double by genus 4.
double theorem_norm_constant_log(int g, double log_t);

struct DegLambdaResult {
  double value = 0;        // deg lambda
  double undivided = 0;    // (3g-1)(8g+4) deg lambda
  double height_term = 0;  // (2 [K:Q] / g(g-1)) sum of NT heights
  double local_term = 0;   // all finite-place contributions
  double arch_term = 0;    // -4g(2g-1)(g+1) [K:Q] log 2pi + 8g^2 sum log T
};

// The closed formula
//   (3g-1)(8g+4) deg lambda = (2 [K:Q] / g(g-1)) sum h(P)
//                             - (1 / g(g-1)) sum (Phi_P, Phi_P)
//                             + (2g-1)(g+1) sum ord Delta log #k
//                             + 4 (E, omega-bar)
//                             - 4g(2g-1)(g+1) [K:Q] log 2pi
//                             + 8g^2 sum log T.
// Per place, the rational combination of ord Delta, sum Phi^2, and (E, omega)
// is accumulated exactly and multiplied by log #k only at the end.
DegLambdaResult deg_lambda(const GlobalHeightInput& in);

// Lower bound per unit degree:
//   (3g-1)(8g+4) h_F >= -4g(2g-1)(g+1) log 2pi + 8g^2 (1/[K:Q]) sum log T,
// returned divided by (3g-1)(8g+4). Valid from g = 1 up (no ledger needed).
double faltings_lower_bound(int g, int degree_k, const std::vector<ArchLedgerEntry>& archs);

struct BostBound {
  double value = 0;
  double std_error = 0;  // propagated from the Monte-Carlo integrals
};

// h_F(A) >= -g log 2pi - (2/[K:Q]) sum over embeddings of the average of
// log ||theta|| against Haar measure, with the Monte-Carlo standard errors
// propagated in quadrature.
BostBound bost_bound(int g, int degree_k, const std::vector<MonteCarloResult>& integrals);

}  // namespace wsinv
