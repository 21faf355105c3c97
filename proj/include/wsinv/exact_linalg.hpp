#pragma once

#include <vector>

#include "wsinv/errors.hpp"
#include "wsinv/rational.hpp"

namespace wsinv {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;
using IntMat = std::vector<std::vector<Int>>;

// Fraction-free (Bareiss) determinant. Every intermediate division is exact.
Int integer_determinant(IntMat m);

Rat rational_determinant(RatMat m);

struct LinearSolution {
  bool consistent = false;
  RatVec particular;            // one solution of M x = b, free variables set to 0
  std::vector<RatVec> kernel;   // basis of the null space of M
};

// Exact Gauss-Jordan over the rationals. Square or rectangular M.
LinearSolution solve_exact(const RatMat& m, const RatVec& b);

// True iff the symmetric matrix M is negative semidefinite, decided exactly:
// every principal minor of -M must be nonnegative. Exponential in dimension,
// intended for the small matrices of fiber component graphs.
bool negative_semidefinite(const RatMat& m);

}  // namespace wsinv
