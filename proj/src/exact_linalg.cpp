#include "wsinv/exact_linalg.hpp"

#include <algorithm>

namespace wsinv {

Int integer_determinant(IntMat m) {
  size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ValidationError("determinant needs a square matrix");
  if (n == 0) return 1;
  int sign = 1;
  Int prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Rat rational_determinant(RatMat m) {
  size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ValidationError("determinant needs a square matrix");
  if (n == 0) return Rat(1);
  Rat det(1);
  for (size_t k = 0; k < n; ++k) {
    size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return Rat(0);
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      det = -det;
    }
    det *= m[k][k];
    Rat inv = Rat(1) / m[k][k];
    for (size_t i = k + 1; i < n; ++i) {
      Rat factor = m[i][k] * inv;
      for (size_t j = k; j < n; ++j) m[i][j] -= factor * m[k][j];
    }
  }
  return det;
}

LinearSolution solve_exact(const RatMat& m, const RatVec& b) {
  size_t rows = m.size();
  if (b.size() != rows) throw ValidationError("right-hand side length mismatch");
  size_t cols = rows == 0 ? 0 : m[0].size();
  for (const auto& row : m)
    if (row.size() != cols) throw ValidationError("ragged matrix");

  RatMat a(rows, RatVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
    a[i][cols] = b[i];
  }

  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    Rat inv = Rat(1) / a[rank][col];
    for (size_t j = col; j <= cols; ++j) a[rank][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      Rat factor = a[i][col];
      for (size_t j = col; j <= cols; ++j) a[i][j] -= factor * a[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  LinearSolution out;
  out.consistent = true;
  for (size_t i = rank; i < rows; ++i)
    if (a[i][cols] != 0) out.consistent = false;

  std::vector<int> pivot_of_col(cols, -1);
  for (size_t r = 0; r < rank; ++r) pivot_of_col[pivot_col[r]] = static_cast<int>(r);

  if (out.consistent) {
    out.particular.assign(cols, Rat(0));
    for (size_t r = 0; r < rank; ++r) out.particular[pivot_col[r]] = a[r][cols];
  }
  for (size_t col = 0; col < cols; ++col) {
    if (pivot_of_col[col] != -1) continue;
    RatVec basis(cols, Rat(0));
    basis[col] = 1;
    for (size_t r = 0; r < rank; ++r) basis[pivot_col[r]] = -a[r][col];
    out.kernel.push_back(std::move(basis));
  }
  return out;
}

bool negative_semidefinite(const RatMat& m) {
  size_t n = m.size();
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw ValidationError("ragged matrix");
    for (size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw ValidationError("matrix not symmetric");
  }
  if (n >= 24) throw ValidationError("semidefiniteness check limited to small matrices");
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ul << i)) idx.push_back(i);
    RatMat sub(idx.size(), RatVec(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) sub[i][j] = -m[idx[i]][idx[j]];
    if (rational_determinant(std::move(sub)) < 0) return false;
  }
  return true;
}

}  // namespace wsinv
