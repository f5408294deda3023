#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "petlab/arith.hpp"
#include "petlab/configs.hpp"
#include "petlab/errors.hpp"
#include "petlab/measure.hpp"
#include "petlab/poly.hpp"

using namespace petlab;

namespace {

std::int64_t eval_m(const Poly& p, std::int64_t m) { return p.evaluate(std::vector<BigInt>{m}).convert_to<std::int64_t>(); }

std::uint64_t brute_count(const std::vector<Poly>& sys, std::int64_t N, std::int64_t M, int shift) {
  std::uint64_t c = 0;
  for (std::int64_t p = 2; p <= M; ++p) {
    if (!oracle::is_prime(p)) continue;
    for (std::int64_t n = 1; n <= N; ++n) {
      bool ok = true;
      for (const auto& P : sys) ok = ok && oracle::is_prime(n + eval_m(P, p + shift));
      c += ok;
    }
  }
  return c;
}

std::uint64_t brute_omega(const std::vector<Poly>& sys, std::int64_t q, int shift) {
  std::uint64_t c = 0;
  for (std::int64_t m = 1; m < q; ++m)
    for (std::int64_t n = 0; n < q; ++n) {
      bool ok = true;
      for (const auto& P : sys) ok = ok && ((n + eval_m(P, m + shift)) % q + q) % q != 0;
      c += ok;
    }
  return c;
}

}  // namespace

TEST_CASE("hand count for m^2, N = 10, M = 3") {
  // p = 2, 3 give steps 1 and 4: n + 1 prime for n in {1,2,4,6,10}, n + 4 for {1,3,7,9}
  CHECK(count_configs(parse_poly_system("m^2"), 10, 3, -1) == 9);
}

TEST_CASE("counts against the double loop") {
  for (const char* text : {"m^2", "m", "m^2;2*m", "m^3 - m", "m^2 + m;3*m^2"})
    for (int shift : {-1, 1}) {
      const auto sys = parse_poly_system(text);
      CHECK(count_configs(sys, 1000, 100, shift) == brute_count(sys, 1000, 100, shift));
    }
  const auto sys = parse_poly_system("m^2");
  const PrimeTable t = primes_up_to(config_table_limit(sys, 500, 50, -1));
  CHECK(count_configs(sys, 500, 50, -1, t) == brute_count(sys, 500, 50, -1));
  CHECK_THROWS_AS(count_configs(sys, 500, 50, -1, primes_up_to(100)), ResourceError);
  CHECK_THROWS_AS(count_configs(sys, 500, 50, 0), InvalidArgument);
  CHECK_THROWS_AS(count_configs(sys, 0, 50, 1), InvalidArgument);
}

TEST_CASE("dense counts") {
  const auto sys = parse_poly_system("m^2;m");
  CHECK(count_configs_dense([](std::int64_t) { return true; }, sys, 300, 40, -1) == 300 * 12);
  CHECK(count_configs_dense([](std::int64_t) { return false; }, sys, 300, 40, -1) == 0);
  const PrimeTable t = primes_up_to(5000);
  CHECK(count_configs_dense([&](std::int64_t v) { return v >= 2 && t.is_prime(static_cast<std::uint64_t>(v)); }, sys,
                            300, 40, 1) == count_configs(sys, 300, 40, 1));
}

TEST_CASE("local counts against enumeration") {
  for (const char* text : {"m^2", "m^2;m", "m^3;2*m^2;m"})
    for (int shift : {-1, 1})
      for (std::uint64_t q : {2, 3, 5, 7, 11, 13}) {
        const auto sys = parse_poly_system(text);
        CHECK(local_count(sys, q, shift) == brute_omega(sys, static_cast<std::int64_t>(q), shift));
      }
}

TEST_CASE("singular series for a single polynomial is 1") {
  // every m excludes exactly one n, so omega(q) = (q-1)^2
  const Prediction p = bateman_horn_prediction(parse_poly_system("m^2"), 1000, 100, -1, 997);
  CHECK(p.singular_series == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.blocking_prime == 0);
  CHECK(p.prime_count == 25);
}

TEST_CASE("prediction against its formula") {
  const auto sys = parse_poly_system("m^2;2*m");
  const std::int64_t N = 5000, M = 60;
  const std::uint64_t T = 50;
  double series = 1;
  for (std::int64_t q = 2; q <= static_cast<std::int64_t>(T); ++q) {
    if (!oracle::is_prime(q)) continue;
    const double qd = static_cast<double>(q);
    series *= static_cast<double>(brute_omega(sys, q, 1)) / (qd * qd) / std::pow(1 - 1 / qd, 3);
  }
  double volume = 0;
  for (std::int64_t p = 2; p <= M; ++p) {
    if (!oracle::is_prime(p)) continue;
    double denom = 1;
    for (const auto& P : sys)
      denom *= std::log(std::max(std::numbers::e, (N + 1) / 2.0 + static_cast<double>(eval_m(P, p + 1))));
    volume += N / denom;
  }
  const Prediction pred = bateman_horn_prediction(sys, N, M, 1, T);
  CHECK(pred.singular_series == doctest::Approx(series).epsilon(1e-10));
  CHECK(pred.predicted == doctest::Approx(series * volume).epsilon(1e-10));
  CHECK_THROWS_AS(bateman_horn_prediction(sys, N, M, 1, 20000), InvalidArgument);
}

TEST_CASE("config report normalizations") {
  const auto sys = parse_poly_system("m^2");
  const ConfigCountReport r = config_report(sys, 2000, 50, -1, 100);
  CHECK(r.count == brute_count(sys, 2000, 50, -1));
  CHECK(r.ratio == doctest::Approx(static_cast<double>(r.count) / r.prediction.predicted));
  const double nm = 2000.0 * 50;
  CHECK(r.normalized_log_N == doctest::Approx(r.count / (nm / std::pow(std::log(2000.0), 2))));
  CHECK(r.normalized_log_M == doctest::Approx(r.count / (nm / std::log(50.0))));
}

TEST_CASE("weighted average against nested loops") {
  ParamOptions o;
  o.eta0 = 0.3;
  o.eta1 = 0.2;
  o.eta2 = 0.1;
  const Params params = Params::make(2000, o);
  const std::int64_t N = params.N, M = params.M;
  Eigen::VectorXd a(M), f1(N), f2(N);
  for (std::int64_t i = 0; i < M; ++i) a(i) = std::sin(0.7 * static_cast<double>(i));
  for (std::int64_t i = 0; i < N; ++i) {
    f1(i) = (i * 13 % 7) / 3.0;
    f2(i) = std::cos(0.01 * static_cast<double>(i * i));
  }
  const Measure A(a, M, MeasureLabel::A), F1(f1, N, MeasureLabel::F), F2(f2, N, MeasureLabel::F);
  const auto sys = parse_poly_system("m^2;3*m");
  const WeightedAverage w = weighted_average(A, {F1, F2}, sys, params);
  double total = 0;
  for (std::int64_t m = 1; m <= M; ++m) {
    const std::int64_t s1 = 2 * m * m, s2 = 3 * m;  // P(Wm)/W with W = 2
    for (std::int64_t x = 1; x <= N; ++x) {
      const std::int64_t r1 = (x + s1 - 1) % N + 1, r2 = (x + s2 - 1) % N + 1;
      total += a(m - 1) * f1(r1 - 1) * f2(r2 - 1);
    }
  }
  CHECK(w.value == doctest::Approx(total / static_cast<double>(N * M)).epsilon(1e-10));
  CHECK(w.max_shift == 2 * M * M);
  CHECK_FALSE(w.wraparound);
  CHECK_THROWS_AS(weighted_average(A, {F1}, sys, params), InvalidArgument);
}

TEST_CASE("counts rank like the prediction over an (N, M) grid") {
  const auto sys = parse_poly_system("m^2");
  std::vector<std::pair<double, double>> pts;
  for (std::int64_t N : {2000, 4000, 8000})
    for (std::int64_t M : {30, 60, 120}) {
      const ConfigCountReport r = config_report(sys, N, M, -1, 200);
      pts.emplace_back(static_cast<double>(r.count), r.prediction.predicted);
    }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (pts[i].second < 0.8 * pts[j].second) CHECK(pts[i].first < pts[j].first);
}
