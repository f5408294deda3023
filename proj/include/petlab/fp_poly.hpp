#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "petlab/poly.hpp"

namespace petlab {

// Multivariate polynomial over F_p, p < 2^32.
class FpPoly {
 public:
  using TermMap = std::map<Monomial, std::uint64_t>;

  explicit FpPoly(std::uint64_t p = 2) : p_(p) {}
  static FpPoly constant(std::uint64_t p, std::uint64_t c);
  static FpPoly reduce(const Poly& q, std::uint64_t p);

  std::uint64_t prime() const { return p_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  // -1 when no variable occurs.
  int max_var() const;
  int degree_in(std::size_t var) const;
  // Coefficient of var^k as a polynomial without var.
  FpPoly coefficient_in(std::size_t var, unsigned k) const;
  FpPoly leading_coefficient_in(std::size_t var) const;

  void add_term(Monomial m, std::uint64_t c);
  FpPoly& operator+=(const FpPoly& o);
  FpPoly& operator-=(const FpPoly& o);
  friend FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
  friend FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly times_power(std::size_t var, unsigned k) const;
  FpPoly scaled(std::uint64_t c) const;
  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.terms_ == b.terms_; }

  std::uint64_t evaluate(std::span<const std::uint64_t> point) const;

 private:
  std::uint64_t p_;
  TermMap terms_;
};

std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p);

// a / b when b divides a exactly, otherwise nullopt. b must be non-zero.
std::optional<FpPoly> exact_divide(const FpPoly& a, const FpPoly& b);

// A greatest common divisor (defined up to a unit), by contents and
// primitive pseudo-remainder sequences, recursing on the variables.
FpPoly gcd(const FpPoly& a, const FpPoly& b);

// gcd is a non-zero constant.
bool coprime(const FpPoly& a, const FpPoly& b);

}  // namespace petlab
