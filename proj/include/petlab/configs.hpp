#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "petlab/arith.hpp"
#include "petlab/measure.hpp"
#include "petlab/poly.hpp"

namespace petlab {

// Pairs (n, p) with n in [1,N], p <= M prime and every n + P_i(p + shift)
// prime (values below 2 never count). shift is -1 or +1.
std::uint64_t count_configs(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift);
std::uint64_t count_configs(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                            const PrimeTable& table);

// Pairs (a, p) with a in [1,N], p <= M prime and a + P_i(p + shift) in A.
std::uint64_t count_configs_dense(const std::function<bool(std::int64_t)>& in_A,
                                  const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift);

// Smallest prime table limit count_configs needs.
std::uint64_t config_table_limit(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift);

// omega(q) = #{(n, m) in F_q^2 : m != 0, n + P_i(m + shift) != 0 for all i}.
std::uint64_t local_count(const std::vector<Poly>& system, std::uint64_t q, int shift);

struct Prediction {
  double predicted = 0;
  double singular_series = 0;
  std::uint64_t truncation_prime = 0;
  std::uint64_t blocking_prime = 0;  // non-zero when some omega(q) = 0
  std::uint64_t prime_count = 0;     // pi(M)
};

// singular_series = prod_{q <= T} (omega(q)/q^2) / (1 - 1/q)^{k+1};
// predicted = singular_series * sum_{p <= M prime} N / prod_i log(max(e, (N+1)/2 + P_i(p + shift))).
Prediction bateman_horn_prediction(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                                   std::uint64_t truncation_prime = 10000);

struct ConfigCountReport {
  std::int64_t N = 0;
  std::int64_t M = 0;
  int shift = -1;
  std::vector<Poly> system;
  std::uint64_t count = 0;
  Prediction prediction;
  double ratio = 0;  // count / predicted, 0 when predicted = 0
  // count normalized by N M / (log N)^{k+1} and by N M / log M
  double normalized_log_N = 0;
  double normalized_log_M = 0;
};

ConfigCountReport config_report(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                                std::uint64_t truncation_prime = 10000);

struct WeightedAverage {
  double value = 0;
  bool wraparound = false;  // some |P_i(Wm)/W| reached N/2
  std::int64_t max_shift = 0;
};

// E_{m in [M]} E_{x in Z_N} a(m) prod_i f_i(x + P_i(Wm)/W) with N, M, W
// from params and f_i read cyclically mod N.
WeightedAverage weighted_average(const Measure& a, const std::vector<Measure>& f, const std::vector<Poly>& system,
                                 const Params& params);

}  // namespace petlab
