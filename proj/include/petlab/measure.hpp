#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "petlab/arith.hpp"

namespace petlab {

struct ParamOptions {
  std::uint64_t w = 3;
  std::uint64_t b = 1;
  int d0 = 1;
  // Unset exponents take the defaults eta0 = 0.3/d0, eta1 = eta0/10,
  // eta2 = eta1/(2 d0).
  std::optional<double> eta0;
  std::optional<double> eta1;
  std::optional<double> eta2;
  double delta0 = 0.1;
};

// Scale parameters of the W-tricked construction. M = floor(N^eta0) is the
// coarse scale and R = floor(N^eta2) the sieve level.
struct Params {
  std::int64_t N = 0;
  std::uint64_t w = 3;
  std::uint64_t W = 2;
  std::uint64_t b = 1;
  int d0 = 1;
  double eta0 = 0;
  double eta1 = 0;
  double eta2 = 0;
  std::int64_t M = 0;
  std::int64_t R = 0;
  double delta0 = 0.1;

  // Builds and validates; throws InvalidArgument on any violated invariant.
  static Params make(std::int64_t N, const ParamOptions& options = {});

  // gcd(b,W)=1, 1 <= b <= W, 0 < eta2 < eta1 < eta0 < 1/(2 d0), M >= 2,
  // R >= 2.
  void validate() const;

  // phi(W)/W
  double w_density() const;
};

// floor(N^eta) guarded against pow() landing just below an integer.
std::int64_t floor_power(std::int64_t N, double eta);

// Even cutoff supported on [-1,1], scaled so that int_0^1 |chi'|^2 = 1.
class CutoffFunction {
 public:
  CutoffFunction(std::string name, std::function<double(double)> profile,
                 std::function<double(double)> derivative, double scale);

  // Rescales an arbitrary even profile on [0,1) by Simpson quadrature of its
  // derivative energy.
  static CutoffFunction normalized(std::string name, std::function<double(double)> profile,
                                   std::function<double(double)> derivative,
                                   int intervals = 20000);

  double operator()(double t) const;
  double derivative(double t) const;
  double scale() const { return scale_; }
  const std::string& name() const { return name_; }

  // Simpson estimate of int_0^1 chi'(t)^2 dt.
  double derivative_energy(int intervals = 10000) const;

 private:
  std::string name_;
  std::function<double(double)> profile_;
  std::function<double(double)> derivative_;
  double scale_;
};

// chi(t) = (2 sqrt 2 / pi) cos(pi t / 2) on |t| <= 1.
CutoffFunction default_cutoff();

// C-infinity bump exp(-1/(1-t^2)), normalized numerically.
CutoffFunction smooth_bump_cutoff();

enum class MeasureLabel { Lambda, Nu, F, G, A, Custom };

std::string_view to_string(MeasureLabel label);
MeasureLabel measure_label_from_string(std::string_view text);

// Tabulated function on {1..size}; values(n-1) holds the value at n.
// Interpreted on the cyclic group Z_modulus with residue n mod modulus.
struct Measure {
  Eigen::VectorXd values;
  std::int64_t modulus = 0;
  MeasureLabel label = MeasureLabel::Custom;

  Measure() = default;
  Measure(Eigen::VectorXd v, std::int64_t mod, MeasureLabel l)
      : values(std::move(v)), modulus(mod), label(l) {}

  std::int64_t size() const { return values.size(); }

  // Value at integer n; zero outside [1, size()].
  double at(std::int64_t n) const {
    return (n >= 1 && n <= size()) ? values(n - 1) : 0.0;
  }

  // Value at the residue class of x in Z_modulus (representative in
  // [1, modulus]).
  double on_cycle(std::int64_t x) const {
    std::int64_t r = x % modulus;
    if (r <= 0) r += modulus;
    return at(r);
  }

  double mean() const;
};

// Lambda_{W,b;N}(n) = (phi(W)/W) log(Wn+b) when Wn+b is prime, n in [1,N].
// Throws ResourceError if the table does not reach W N + b.
Measure lambda_W_b(const Params& params, const PrimeTable& table);
Measure lambda_W_b(const Params& params);

// nu(n) = (phi(W)/W) log R (sum_{m | Wn+b, m <= R} mu(m) chi(log m/log R))^2
// for n in [1, N]. Only primes <= R dividing Wn+b are needed; they are found
// by sieving the progression, block by block.
Measure sieve_nu(std::uint64_t W, std::uint64_t b, std::int64_t R, std::int64_t N,
                 const CutoffFunction& chi);

Measure nu_W_b(const Params& params, const CutoffFunction& chi);

struct DenseModelWeights {
  Measure f;  // on [1, N]
  Measure g;  // on [1, M]
  Measure a;  // on [1, M], signed
  double alpha = 0;
};

// Weights of the dense-model reduction for a set A of primes (given as a
// membership predicate on integers up to W N + b).
DenseModelWeights dense_model_weights(const Params& params,
                                      const std::function<bool(std::uint64_t)>& in_A,
                                      const CutoffFunction& chi, const PrimeTable& table);

struct VanDerCorputCheck {
  double lhs = 0;  // (E_{m in [M]} x_m)^2
  double rhs = 0;  // E_{|h|<M} E_{m in [M]} x_m x_{m+h}, x zero outside [M]
  bool holds(double constant = 2.0) const { return lhs <= constant * rhs; }
};

// x[m-1] holds x_m for m in [1, M]; the correlation sum is done directly.
VanDerCorputCheck van_der_corput_check(std::span<const double> x);

}  // namespace petlab
