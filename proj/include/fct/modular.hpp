#pragma once

#include <cstdint>
#include <vector>

#include "fct/errors.hpp"
#include "fct/util.hpp"

namespace fct {

namespace modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;  // p < 2^63 so no overflow
  return s >= p ? s - p : s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 powmod(u64 base, u64 exp, u64 p) {
  u64 r = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Random prime in [2^61, 2^62): large enough that random evaluation points
// essentially never collide, small enough for 128-bit products.
inline u64 random_prime(SplitMix64& rng) {
  for (;;) {
    u64 c = (rng.next() & ((1ull << 61) - 1)) | (1ull << 61) | 1ull;
    if (is_prime(c)) return c;
  }
}

// Reduced row echelon nullspace basis of an r x c matrix mod p. Returns one
// kernel vector per free column (coordinates over all c columns). Row
// updates run in parallel; the arithmetic is identical for any worker count.
inline std::vector<std::vector<u64>> nullspace(std::vector<std::vector<u64>>& a, u64 p) {
  std::size_t rows = a.size();
  std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    u64 inv = invmod(a[rank][col], p);
    for (std::size_t j = col; j < cols; ++j) a[rank][j] = mulmod(a[rank][j], inv, p);
    const std::vector<u64>& prow = a[rank];
    std::size_t r0 = rank;
    parallel_for(rows, [&](std::size_t i) {
      if (i == r0 || a[i][col] == 0) return;
      u64 f = a[i][col];
      for (std::size_t j = col; j < cols; ++j)
        a[i][j] = submod(a[i][j], mulmod(f, prow[j], p), p);
    });
    pivot_col.push_back(col);
    ++rank;
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<u64>> kernel;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<u64> v(cols, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      u64 coef = a[k][free];
      if (coef) v[pivot_col[k]] = p - coef;
    }
    kernel.push_back(std::move(v));
  }
  return kernel;
}

struct LiftedRational {
  long long num;
  unsigned long long den;
};

// Smallest rational num/den with |num|, den <= 2^32 congruent to r mod p, via
// the extended Euclidean lattice walk. Fails (nullopt) when no such pair
// exists, which for a 61-bit prime means r is not the image of any small
// rational.
inline bool rational_lift(u64 r, u64 p, LiftedRational& out) {
  const long long bound = 1ll << 32;
  __int128 r0 = p, r1 = r;
  __int128 t0 = 0, t1 = 1;
  while (r1 >= bound) {
    __int128 q = r0 / r1;
    __int128 r2 = r0 - q * r1;
    __int128 t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  __int128 num = r1, den = t1;
  if (den == 0) return false;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den > bound || num > bound || num < -bound) return false;
  // require the representative to be exact: num = den * r (mod p) holds by
  // construction; demand coprimality so the answer is canonical
  long long n = static_cast<long long>(num);
  unsigned long long d = static_cast<unsigned long long>(den);
  unsigned long long x = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  unsigned long long y = d;
  while (y) {
    unsigned long long t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    n /= static_cast<long long>(x);
    d /= x;
  }
  out.num = n;
  out.den = d;
  return true;
}

}  // namespace modular

}  // namespace fct
