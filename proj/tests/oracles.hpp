#pragma once

// Brute-force reference implementations shared by the unit tests. Each one
// follows the textbook definition and shares no code with the library.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int mobius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline std::uint64_t phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

inline std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

// E_{x,h_1,...,h_d} prod_w f(x + w.h) by enumerating every cube.
inline double box_average(const std::vector<double>& f, int d) {
  const std::size_t n = f.size();
  std::vector<std::size_t> h(static_cast<std::size_t>(d), 0);
  double total = 0;
  for (;;) {
    for (std::size_t x = 0; x < n; ++x) {
      double prod = 1;
      for (unsigned w = 0; w < (1u << d); ++w) {
        std::size_t y = x;
        for (int i = 0; i < d; ++i)
          if (w >> i & 1u) y += h[static_cast<std::size_t>(i)];
        prod *= f[y % n];
      }
      total += prod;
    }
    std::size_t i = 0;
    while (i < h.size() && ++h[i] == n) h[i++] = 0;
    if (i == h.size()) break;
  }
  return total / std::pow(static_cast<double>(n), d + 1);
}

}  // namespace oracle
