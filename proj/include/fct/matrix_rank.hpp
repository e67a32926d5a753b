#pragma once

#include <gmpxx.h>

#include <vector>

#include "fct/rational.hpp"

namespace fct {

// Exact rank over the rationals. Rows are scaled to integers, then reduced by
// fraction-free Bareiss elimination with column pivoting, so no intermediate
// value is ever rounded.
inline int exact_rank(const std::vector<std::vector<Rational>>& matrix) {
  std::size_t rows = matrix.size();
  if (rows == 0) return 0;
  std::size_t cols = matrix[0].size();
  for (const auto& r : matrix)
    if (r.size() != cols) throw Error("ragged matrix");
  if (cols == 0) return 0;

  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class scale = 1;
    for (const auto& x : matrix[i]) {
      mpz_class den = x.denominator();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
      scale *= den / g;
    }
    for (std::size_t j = 0; j < cols; ++j)
      a[i][j] = matrix[i][j].numerator() * (scale / matrix[i][j].denominator());
  }

  int rank = 0;
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[row]);
    for (std::size_t i = row + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev;
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace fct
