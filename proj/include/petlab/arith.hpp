#pragma once

#include <cstdint>
#include <vector>

namespace petlab {

// Primality membership over [1, limit], one bit per odd number.
// Immutable after construction and safe for concurrent reads.
class PrimeTable {
 public:
  PrimeTable() = default;

  std::uint64_t limit() const { return limit_; }

  // Throws ResourceError when n > limit().
  bool is_prime(std::uint64_t n) const;

  // pi(limit()).
  std::uint64_t count() const { return count_; }

  // pi(n) for n <= limit().
  std::uint64_t count_up_to(std::uint64_t n) const;

  std::vector<std::uint64_t> primes() const;

 private:
  friend PrimeTable primes_up_to(std::uint64_t limit);

  bool odd_bit(std::uint64_t n) const {
    const std::uint64_t i = n >> 1;
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }

  std::uint64_t limit_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> bits_;  // bit i <-> odd number 2i+1
};

// Sieve of Eratosthenes; segmented above 10^7. Throws InvalidArgument for 0.
PrimeTable primes_up_to(std::uint64_t limit);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing
};

// Trial division. Throws InvalidArgument for 0.
Factorization factorize(std::uint64_t n);

int mobius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

// Product of the primes strictly below w. Throws OverflowError when the
// product leaves 64 bits and InvalidArgument for w < 2.
std::uint64_t primorial_below(std::uint64_t w);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Smallest-prime-factor, Moebius and totient tables over [1, limit], built by
// a linear sieve. Use for bulk queries; the free functions above serve single
// values.
class LinearSieve {
 public:
  explicit LinearSieve(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }
  std::uint32_t smallest_factor(std::uint32_t n) const { return spf_.at(n); }
  int mobius(std::uint32_t n) const { return mu_.at(n); }
  std::uint32_t phi(std::uint32_t n) const { return phi_.at(n); }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  Factorization factorize(std::uint32_t n) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> phi_;
  std::vector<std::uint32_t> primes_;
};

}  // namespace petlab
