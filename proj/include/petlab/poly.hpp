#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace petlab {

using BigInt = boost::multiprecision::cpp_int;

// Exponent vector over the ordered variables (x_0, x_1, ...). Stored without
// trailing zeros so that equal monomials compare equal regardless of how many
// variables a run has introduced.
using Monomial = std::vector<std::uint16_t>;

unsigned total_degree(const Monomial& m);

// Graded order, descending: higher total degree first, then the monomial with
// the larger exponent in the earliest differing variable.
struct GradedDescending {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Exact multivariate polynomial with integer coefficients. Zero coefficients
// are never stored.
class Poly {
 public:
  using TermMap = std::map<Monomial, BigInt, GradedDescending>;

  Poly() = default;

  static Poly constant(const BigInt& c);
  static Poly variable(std::size_t index, unsigned power = 1, const BigInt& coeff = 1);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  BigInt constant_term() const;

  // Number of variable slots touched (1 + highest variable index in use).
  std::size_t num_vars() const;
  // -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  int total_degree() const;
  bool is_constant_in(std::size_t var) const { return degree_in(var) <= 0; }

  // Coefficient of var^power, as a polynomial in the remaining variables.
  Poly coefficient_in(std::size_t var, unsigned power) const;
  Poly leading_coefficient_in(std::size_t var) const;

  BigInt max_abs_coefficient() const;

  void add_term(Monomial m, const BigInt& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const BigInt& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const BigInt& c) { return a *= c; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  BigInt evaluate(std::span<const BigInt> point) const;

 private:
  TermMap terms_;
};

// Variable names: m for index 0, h1, h2, ... after it.
std::string pet_variable_name(std::size_t index);
std::vector<std::string> pet_variable_names(std::size_t count);

// Canonical text in the parser grammar, terms in GradedDescending order,
// e.g. "2*m*h1 + h1^2". Throws InvalidArgument if a used variable has no name.
std::string to_string(const Poly& p, std::span<const std::string> names);
std::string to_string(const Poly& p);  // PET names

// Parses a single polynomial over the given variable names. Terms are
// [sign] [integer] ['*'] factor ('*' factor)* or a bare integer, where
// factor is name ['^' power]. Whitespace is ignored. Errors are
// InvalidArgument with a character position.
Poly parse_poly(std::string_view text, std::span<const std::string> names);
Poly parse_poly(std::string_view text);  // PET names

// ';'-separated system in the single variable m. Rejects duplicates and any
// polynomial with a non-zero constant term.
std::vector<Poly> parse_poly_system(std::string_view text);

// Substitutes var -> var + new_var and expands.
Poly shift(const Poly& q, std::size_t var, std::size_t new_var);

// P(Wm)/W = sum a_i W^(i-1) m^i for P = sum_{i>=1} a_i m^i.
Poly w_rescale(const Poly& p, const BigInt& W);

// Value of a univariate-in-m polynomial at an integer, as int64.
// Throws OverflowError if the value leaves 64 bits.
std::int64_t evaluate_i64(const Poly& p, std::int64_t m);

// Poly compiled for repeated evaluation at machine-integer points. Exact:
// intermediate values are checked and OverflowError is raised when the
// result or a term leaves 64 bits.
class IntEvaluator {
 public:
  IntEvaluator() = default;
  explicit IntEvaluator(const Poly& p);

  std::size_t num_vars() const { return vars_; }
  std::int64_t operator()(std::span<const std::int64_t> point) const;
  // Value mod p in [0, p), for p < 2^32.
  std::uint64_t mod(std::span<const std::uint64_t> point, std::uint64_t p) const;

 private:
  struct Term {
    std::int64_t coeff;
    BigInt big;  // the exact coefficient, for reduction mod p
    std::vector<std::uint16_t> exponents;
  };
  std::vector<Term> terms_;
  std::size_t vars_ = 0;
};

}  // namespace petlab
