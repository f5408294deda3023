#pragma once

#include <boost/rational.hpp>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "petlab/measure.hpp"
#include "petlab/poly.hpp"

namespace petlab {

using Rational = boost::rational<std::int64_t>;
using Complex = std::complex<double>;

// Good and bad are complementary; terrible is an independent flag.
struct PrimeClass {
  bool good = false;
  bool terrible = false;
  bool coprime = false;       // pairwise coprimality mod p
  bool linear_split = false;  // every member is linear in some variable with coprime parts
  bool bad() const { return !good; }
  std::string name() const;
};

struct ClassifyLimits {
  std::size_t max_vars = 4;
  int max_total_degree = 8;
};

PrimeClass classify_prime(std::uint64_t p, const std::vector<Poly>& family,
                          const ClassifyLimits& limits = {});

// Fraction of y in F_p^D at which every member vanishes, by exhaustive
// enumeration. D is the number of variables (at least the largest index in
// use plus one).
Rational local_factor(std::uint64_t p, const std::vector<Poly>& family, std::size_t D,
                      double max_points = 1e8);

// For every subset S of the family (bit mask), c_p of the members in S.
// One pass over F_p^D.
std::vector<Rational> local_factor_table(std::uint64_t p, const std::vector<Poly>& family,
                                         std::size_t D, double max_points = 1e8);

// Members W P_j + b_1 (j in J_1) followed by W P_j + b_2 (j in J_2).
struct ResidueFamily {
  std::vector<Poly> J1;
  std::vector<Poly> J2;
  std::uint64_t b1 = 1;
  std::uint64_t b2 = 1;
  std::size_t D = 1;

  std::size_t size() const { return J1.size() + J2.size(); }
  std::vector<Poly> forms(std::uint64_t W) const;
};

// E_p as the sum over S of prod_{j in S} (p^{-z_j-z'_j} - p^{-z_j} - p^{-z'_j}) c_p(S),
// which is the expansion over m_j, m'_j in {1, p} collected by the set of j
// with p | lcm(m_j, m'_j).
Complex euler_factor_exact(std::uint64_t p, const ResidueFamily& family, std::uint64_t W,
                           const std::vector<Complex>& z, const std::vector<Complex>& z_prime);

// prod_j (1-p^{-(1+z_j)})(1-p^{-(1+z'_j)}) / (1-p^{-(1+z_j+z'_j)})
Complex euler_factor_model(std::uint64_t p, const std::vector<Complex>& z,
                           const std::vector<Complex>& z_prime);

struct ClaimOptions {
  std::uint64_t w = 3;
  std::uint64_t p_min = 2;
  std::uint64_t p_max = 199;
  double log_R = 10.0;
  int z_imag_samples = 0;  // extra z lines with random imaginary parts
  double xi_scale = 5.0;   // |xi| <= xi_scale on those lines
  std::uint64_t seed = 1;
  double small_prime_band = 0.1;
  double good_slope_max = -1.7;
  double bad_constant_max = 10.0;
};

struct PrimeClaimRow {
  std::uint64_t p = 0;
  PrimeClass cls;
  double deviation = 0;  // max over z lines of |E_p/E_p' - 1|
  bool exact_one = false;
};

struct ClaimReport {
  std::vector<PrimeClaimRow> rows;
  std::vector<std::vector<Complex>> z_lines;
  // Small primes: E_p == 1 exactly for every p < w, and
  // prod_{p<w} E_p' against (phi(W)/W)^|J|.
  bool small_primes_exact = true;
  double small_primes_product = 1;
  double small_primes_target = 1;
  bool small_primes_in_band = true;
  // Good primes: least-squares slope of log deviation against log p.
  std::size_t good_count = 0;
  double good_slope = 0;
  bool good_ok = false;
  // Bad but not terrible primes: max p * deviation.
  std::size_t bad_count = 0;
  double bad_constant = 0;
  bool bad_ok = true;
  std::size_t terrible_count = 0;
};

ClaimReport check_prime_class_claims(const ResidueFamily& family, std::uint64_t W,
                                     const ClaimOptions& options = {});

// Monte Carlo result. standard_error is the sample standard deviation of
// the per-sample values over sqrt(samples).
struct EstimateReport {
  double point_estimate = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int k = 0;
  int inner_samples = 0;
  // Bias of the estimator itself (zero: the k = 2 square uses two
  // independent inner replicas), and the bias squaring a single inner mean
  // would have had, estimated from the inner variances.
  double bias_bound = 0;
  double naive_square_bias = 0;
};

// Inclusive integer interval per coordinate.
using Box = std::vector<std::pair<std::int64_t, std::int64_t>>;

struct FormsOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  // Bound 1/eta_1 on |J| and D; 0 disables the check.
  std::size_t max_count = 0;
};

// E_{h in box} E_{x in Z_N} prod_j nu(x + Q_j(h)) with N = nu.modulus.
// Q_j use variables 0..D-1 with D = box.size().
EstimateReport forms_condition_estimate(const Measure& nu, const std::vector<Poly>& Q, const Box& box,
                                        const FormsOptions& options = {});

// 0/1 coefficient vector over the D variables of Omega_{M,D}.
using LinearForm = std::vector<int>;

struct ExtraOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int inner_samples = 64;
  int d0 = 0;                // total degree bound on Q_j; 0 disables
  std::size_t max_count = 0;  // 1/eta_1 bound on |J_1|, D, |J_2|; 0 disables
  std::optional<BigInt> max_coefficient;  // C W^{d0}
};

// E_{m in Omega_{M,D}} prod_{J_2} nu_2(L_j(m)) (int_X prod_{J_1} nu_1(x + Q_j(m)))^k
// with Omega_{M,D} = [1,M] x (-M,M)^{D-1}. Measures are read cyclically
// on their own moduli.
EstimateReport extra_condition_estimate(const Measure& nu1, const Measure& nu2,
                                        const std::vector<Poly>& Q,
                                        const std::vector<LinearForm>& L, int k, std::int64_t M,
                                        std::size_t D, const ExtraOptions& options = {});

// The instance with eight cube vertices m + w.(l,k,h) as L and six shifts
// built from R_1(m) = -m^2, R_2(m,h) = -(2mh+h^2); variables (m,h,k,l).
struct CubeInstance {
  std::vector<Poly> Q;
  std::vector<LinearForm> L;
  std::size_t D = 4;
};
CubeInstance cube_instance();

}  // namespace petlab
