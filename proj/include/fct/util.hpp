#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fct {

// Node labels and variable labels share one alphabet so the polynomial text
// format s_<u>_<v> stays unambiguous.
inline bool label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// SplitMix64: tiny deterministic generator used for all randomized draws.
// Streams are cheap to fork: stream i of master seed s starts at mix(s ^ i).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [1, 2^20]; 2^64 is a multiple of 2^20 so this is exact.
  std::uint64_t next_coefficient() { return (next() & 0xFFFFFull) + 1; }
};

inline std::uint64_t splitmix_mix(std::uint64_t x) {
  SplitMix64 g(x);
  return g.next();
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix_mix(master ^ index);
}

// Shortlex: shorter strings first, ties broken lexicographically. Keeps
// numeric labels in numeric order ("9" < "10") without parsing them.
inline bool shortlex_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline int shortlex_cmp(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

// Worker count: FCT_THREADS caps parallelism, 0 or 1 means serial.
inline unsigned thread_count() {
  if (const char* env = std::getenv("FCT_THREADS")) {
    long n = std::atol(env);
    if (n <= 1) return 1;
    return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return hw < 8u ? hw : 8u;
}

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks, so the
// result of each index is independent of the worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = thread_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fct
