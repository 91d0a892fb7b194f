#pragma once

// Test-side reference implementations. They are written independently of the
// library (plain loops, no shared helpers) so that tests compare two routes
// to the same number.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// L_0 = 0, L_m = b_1 + ... + b_m with b_1 = 1, b_i = 2^(L_{i-1}); stops before the first L_m > cap.
inline std::vector<std::uint64_t> block_ends(std::uint64_t cap) {
  std::vector<std::uint64_t> L{0};
  std::uint64_t sum = 0;
  for (int i = 1; i < 8; ++i) {
    std::uint64_t b = 1;
    if (i > 1) {
      if (sum >= 63) break;
      for (std::uint64_t k = 0; k < sum; ++k) b *= 2;
    }
    if (b > cap) break;
    sum += b;
    L.push_back(sum);
  }
  return L;
}

/// example1 metric for x = s + n, y = s2 + n2 (n, n2 integer offsets).
inline double example1_distance(double s, std::uint64_t n, double s2, std::uint64_t n2, std::uint64_t cap) {
  if (s == s2 && n == n2) return 0.0;
  if (n != n2 || n % 2 == 1) return 1.0;
  const auto L = block_ends(cap);
  for (std::size_t k = 1; 2 * k < L.size(); ++k) {
    const std::uint64_t lo = L[2 * k];
    const std::uint64_t hi = 2 * k + 1 < L.size() ? L[2 * k + 1] : UINT64_MAX;
    if (n >= lo && n < hi) return std::pow(2.0, -static_cast<double>(k));
  }
  return 1.0;
}

/// d(f^i x, f^i y) for the example1 translation, offsets 0.
inline std::vector<double> example1_profile(double s, double s2, std::uint64_t horizon) {
  std::vector<double> d(horizon);
  for (std::uint64_t i = 0; i < horizon; ++i) d[i] = example1_distance(s, i, s2, i, horizon);
  return d;
}

inline std::uint64_t count_below(const std::vector<double>& d, double t, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t i = 0; i < n; ++i) c += d[i] < t ? 1 : 0;
  return c;
}

/// Scrambled-family boundaries A_m = 25^m - 1 (m >= 1) up to the first >= limit.
inline std::vector<std::uint64_t> family_ends(std::uint64_t limit) {
  std::vector<std::uint64_t> a;
  std::uint64_t p = 1;
  while (true) {
    p *= 25;
    a.push_back(p - 1);
    if (p - 1 >= limit) break;
  }
  return a;
}

/// Symbols of the family member with parameter `word`.
inline std::vector<int> family_symbols(const std::vector<int>& word, std::uint64_t len) {
  std::vector<int> s(len, 0);
  const auto A = family_ends(len);
  std::uint64_t start = 0;
  for (std::size_t m = 0; m < A.size(); ++m) {
    if (m % 2 == 1)
      for (std::uint64_t i = start; i < A[m] && i < len; ++i) s[i] = word[(i - start) % word.size()];
    start = A[m];
  }
  return s;
}

/// Forward scan: 2^-k with k the first mismatch at or after position i, 0 if none in range.
inline double shift_distance(const std::vector<int>& a, const std::vector<int>& b, std::uint64_t i) {
  for (std::uint64_t k = i; k < a.size() && k < b.size(); ++k)
    if (a[k] != b[k]) return std::ldexp(1.0, -static_cast<int>(k - i));
  return 0.0;
}

/// Tent map in long double, direct formula.
inline long double tent(long double x) { return x < 0.5L ? 2.0L * x : 2.0L * (1.0L - x); }

}  // namespace oracle
