#include "petlab/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "petlab/errors.hpp"

namespace petlab {

namespace {

constexpr std::uint64_t kSegmentThreshold = 10'000'000;
constexpr std::uint64_t kSegmentOdds = std::uint64_t{1} << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void clear_bit(std::vector<std::uint64_t>& bits, std::uint64_t i) {
  bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

// Odd-only sieve, bit i <-> 2i+1. Bit 0 (the number 1) is cleared by caller.
void sieve_plain(std::vector<std::uint64_t>& bits, std::uint64_t limit) {
  for (std::uint64_t p = 3; p * p <= limit; p += 2) {
    const std::uint64_t i = p >> 1;
    if (!((bits[i >> 6] >> (i & 63)) & 1u)) continue;
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) clear_bit(bits, m >> 1);
  }
}

void sieve_segmented(std::vector<std::uint64_t>& bits, std::uint64_t limit) {
  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint64_t> base(root / 128 + 1, ~std::uint64_t{0});
  sieve_plain(base, root);
  std::vector<std::uint64_t> base_primes;
  for (std::uint64_t p = 3; p <= root; p += 2) {
    const std::uint64_t i = p >> 1;
    if ((base[i >> 6] >> (i & 63)) & 1u) base_primes.push_back(p);
  }
  const std::uint64_t total_odds = (limit + 1) / 2;
  for (std::uint64_t lo = 0; lo < total_odds; lo += kSegmentOdds) {
    const std::uint64_t hi = std::min(total_odds, lo + kSegmentOdds);
    const std::uint64_t lo_n = 2 * lo + 1;
    const std::uint64_t hi_n = 2 * (hi - 1) + 1;
    for (std::uint64_t p : base_primes) {
      if (p * p > hi_n) break;
      std::uint64_t start = std::max(p * p, (lo_n + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t m = start; m <= hi_n; m += 2 * p) clear_bit(bits, m >> 1);
    }
  }
}

}  // namespace

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) {
    throw ResourceError("prime table covers [1, " + std::to_string(limit_) +
                        "], queried " + std::to_string(n));
  }
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  return odd_bit(n);
}

std::uint64_t PrimeTable::count_up_to(std::uint64_t n) const {
  if (n > limit_) {
    throw ResourceError("prime table covers [1, " + std::to_string(limit_) +
                        "], count requested up to " + std::to_string(n));
  }
  if (n < 2) return 0;
  // Odd numbers 1,3,...,n (or n-1) are bits 0..last.
  const std::uint64_t last = (n - 1) / 2;
  std::uint64_t c = 1;  // the prime 2
  const std::uint64_t full_words = (last + 1) / 64;
  for (std::uint64_t w = 0; w < full_words; ++w) c += std::popcount(bits_[w]);
  const std::uint64_t rem = (last + 1) % 64;
  if (rem) c += std::popcount(bits_[full_words] & ((std::uint64_t{1} << rem) - 1));
  return c;
}

std::vector<std::uint64_t> PrimeTable::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  if (limit_ >= 2) out.push_back(2);
  for (std::uint64_t n = 3; n <= limit_; n += 2)
    if (odd_bit(n)) out.push_back(n);
  return out;
}

PrimeTable primes_up_to(std::uint64_t limit) {
  if (limit == 0) throw InvalidArgument("primes_up_to: limit must be >= 1");
  PrimeTable t;
  t.limit_ = limit;
  const std::uint64_t odds = (limit + 1) / 2;
  t.bits_.assign(odds / 64 + 1, ~std::uint64_t{0});
  // Drop bits past the last odd number <= limit.
  for (std::uint64_t i = odds; i < t.bits_.size() * 64; ++i) clear_bit(t.bits_, i);
  clear_bit(t.bits_, 0);  // 1 is not prime
  if (limit > kSegmentThreshold)
    sieve_segmented(t.bits_, limit);
  else
    sieve_plain(t.bits_, limit);
  t.count_ = limit >= 2 ? t.count_up_to(limit) : 0;
  return t;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("factorize: n must be >= 1");
  Factorization f;
  f.n = n;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("mobius: n must be >= 1");
  const Factorization f = factorize(n);
  for (const auto& pe : f.factors)
    if (pe.exponent > 1) return 0;
  return f.factors.size() % 2 ? -1 : 1;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("euler_phi: n must be >= 1");
  std::uint64_t phi = n;
  for (const auto& pe : factorize(n).factors) phi = phi / pe.prime * (pe.prime - 1);
  return phi;
}

std::uint64_t primorial_below(std::uint64_t w) {
  if (w < 2) throw InvalidArgument("primorial_below: w must be >= 2");
  std::uint64_t product = 1;
  for (std::uint64_t p = 2; p < w; ++p) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    if (product > std::numeric_limits<std::uint64_t>::max() / p)
      throw OverflowError("primorial_below(" + std::to_string(w) + ") exceeds 64 bits");
    product *= p;
  }
  return product;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

LinearSieve::LinearSieve(std::uint32_t limit)
    : limit_(limit), spf_(limit + 1, 0), mu_(limit + 1, 0), phi_(limit + 1, 0) {
  if (limit == 0) throw InvalidArgument("LinearSieve: limit must be >= 1");
  mu_[1] = 1;
  phi_[1] = 1;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = i;
      mu_[i] = -1;
      phi_[i] = i - 1;
      primes_.push_back(i);
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t ip = std::uint64_t{i} * p;
      if (p > spf_[i] || ip > limit) break;
      spf_[ip] = p;
      if (p == spf_[i]) {
        mu_[ip] = 0;
        phi_[ip] = phi_[i] * p;
      } else {
        mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
        phi_[ip] = phi_[i] * (p - 1);
      }
    }
  }
}

Factorization LinearSieve::factorize(std::uint32_t n) const {
  if (n == 0 || n > limit_) throw InvalidArgument("LinearSieve::factorize: n out of range");
  Factorization f;
  f.n = n;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

}  // namespace petlab
