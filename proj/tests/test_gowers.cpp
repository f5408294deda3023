#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "petlab/arith.hpp"
#include "petlab/errors.hpp"
#include "petlab/gowers.hpp"
#include "petlab/parallel.hpp"

using namespace petlab;

namespace {

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.2, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

CyclicSignal<double> as_signal(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("U2 on Z_2 by hand") {
  const double a = 1.5, b = -0.5;
  const double expect = (a * a * a * a + b * b * b * b + 6 * a * a * b * b) / 8;
  CHECK(gowers_box_average(as_signal({a, b}), 2) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("constant signals") {
  CHECK(gowers_norm(CyclicSignal<double>::Constant(16, 1.0), 2) == doctest::Approx(1));
  CHECK(gowers_norm(CyclicSignal<double>::Constant(9, -2.0), 3) == doctest::Approx(2));
  CHECK(gowers_u2_fft(CyclicSignal<double>::Constant(16, 1.0)) == doctest::Approx(1));
}

TEST_CASE("direct box average against cube enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_signal(rng, 3 + trial % 10);
    for (int d = 1; d <= 3; ++d)
      CHECK(gowers_box_average(as_signal(v), d) == doctest::Approx(oracle::box_average(v, d)).epsilon(1e-10));
  }
  const auto v = random_signal(rng, 6);
  CHECK(gowers_box_average(as_signal(v), 4) == doctest::Approx(oracle::box_average(v, 4)).epsilon(1e-10));
}

TEST_CASE("FFT U2 against the direct sum") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {1u, 2u, 7u, 16u, 31u, 64u, 100u, 128u}) {
    const auto v = random_signal(rng, n);
    CHECK(gowers_u2_fft(as_signal(v)) == doctest::Approx(gowers_norm(as_signal(v), 2)).epsilon(1e-10));
  }
}

TEST_CASE("single precision scalars") {
  Eigen::VectorXf f(5);
  f << 1, 0.5f, -0.25f, 2, 0;
  std::vector<double> v{1, 0.5, -0.25, 2, 0};
  CHECK(gowers_box_average(f, 2) == doctest::Approx(oracle::box_average(v, 2)).epsilon(1e-5));
}

TEST_CASE("rejects bad input") {
  CHECK_THROWS_AS(gowers_norm(CyclicSignal<double>(0), 2), InvalidArgument);
  CHECK_THROWS_AS(gowers_norm(CyclicSignal<double>::Constant(4, 1.0), 0), InvalidArgument);
  CyclicSignal<double> bad = CyclicSignal<double>::Constant(4, 1.0);
  bad(2) = std::nan("");
  CHECK_THROWS_AS(gowers_norm(bad, 2), InvalidArgument);
}

TEST_CASE("[M]-supported embedding has no wraparound in Z_{7M}") {
  std::mt19937_64 rng(2);
  const std::int64_t M = 6;
  Eigen::VectorXd a(M);
  for (auto& x : a) x = std::normal_distribution<double>(0, 1)(rng);
  const Measure m(a, M, MeasureLabel::A);
  const CyclicSignal<double> f = embed_supported(m, 3);
  REQUIRE(f.size() == 7 * M);
  for (std::int64_t r = 0; r < f.size(); ++r) CHECK(f(r) == ((r >= 1 && r <= M) ? a(r - 1) : 0.0));
  // integer cubes with every vertex inside [1, M]
  auto at = [&](std::int64_t n) { return (n >= 1 && n <= M) ? a(n - 1) : 0.0; };
  double box = 0;
  for (std::int64_t x = 1; x <= M; ++x)
    for (std::int64_t h = -M + 1; h < M; ++h)
      for (std::int64_t k = -M + 1; k < M; ++k)
        for (std::int64_t l = -M + 1; l < M; ++l) {
          double prod = 1;
          for (int w = 0; w < 8; ++w) prod *= at(x + (w & 1 ? h : 0) + (w & 2 ? k : 0) + (w & 4 ? l : 0));
          box += prod;
        }
  const double n = 7.0 * M;
  CHECK(gowers_box_average(f, 3) * n * n * n * n == doctest::Approx(box).epsilon(1e-10));
  Eigen::VectorXd longer = Eigen::VectorXd::Zero(M + 1);
  longer(M) = 1;
  CHECK_THROWS_AS(embed_supported(Measure(longer, M + 1, MeasureLabel::A), M, 3), InvalidArgument);
}

TEST_CASE("lambda deviation norm from its definition") {
  const std::int64_t N = 60;
  const CyclicSignal<double> s = lambda_deviation_signal(N, 2, 1, 2);
  REQUIRE(s.size() == 5 * N);
  std::vector<double> v(static_cast<std::size_t>(5 * N), 0.0);
  for (std::int64_t n = 1; n <= N; ++n)
    v[static_cast<std::size_t>(n)] = (oracle::is_prime(2 * n + 1) ? 0.5 * std::log(2.0 * n + 1) : 0.0) - 1.0;
  for (std::size_t r = 0; r < v.size(); ++r) CHECK(s(static_cast<Eigen::Index>(r)) == doctest::Approx(v[r]));
  CHECK(lambda_deviation_norm(N, 2, 1, 2) == doctest::Approx(std::pow(oracle::box_average(v, 2), 0.25)).epsilon(1e-9));
  CHECK(lambda_deviation_norm(20, 2, 1, 3) ==
        doctest::Approx(gowers_norm(lambda_deviation_signal(20, 2, 1, 3), 3)).epsilon(1e-12));
  DeviationNormOptions tight;
  tight.max_operations = 1e6;
  CHECK_THROWS_AS(lambda_deviation_norm(1000, 2, 1, 3, tight), ResourceError);
  CHECK(gowers_direct_cost(100, 3) >= 1e6);
}

TEST_CASE("reductions do not depend on the thread count") {
  std::mt19937_64 rng(9);
  const auto v = random_signal(rng, 40);
  parallel::set_max_threads(1);
  const double one = gowers_box_average(as_signal(v), 3);
  parallel::set_max_threads(4);
  const double four = gowers_box_average(as_signal(v), 3);
  parallel::set_max_threads(0);
  CHECK(one == four);
}
