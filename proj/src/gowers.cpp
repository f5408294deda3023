#include "petlab/gowers.hpp"

#include <complex>
#include <unsupported/Eigen/FFT>

namespace petlab {

double gowers_u2_fft(const CyclicSignal<double>& f) {
  if (f.size() < 1) throw InvalidArgument("gowers: empty signal");
  detail::require_finite(f);
  if (f.size() == 1) return std::abs(f(0));
  const auto n = static_cast<double>(f.size());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(f.data(), f.data() + f.size());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  std::vector<double> fourth(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = std::norm(out[i]) / (n * n);
    fourth[i] = a * a;
  }
  const double s = parallel::pairwise_sum(std::span<const double>(fourth));
  return s <= 0 ? 0.0 : std::pow(s, 0.25);
}

CyclicSignal<double> embed_supported(const Measure& a, std::int64_t M, int d) {
  if (M < 1) throw InvalidArgument("embed_supported: M must be positive");
  if (d < 1) throw InvalidArgument("embed_supported: d must be >= 1");
  for (std::int64_t n = M + 1; n <= a.size(); ++n)
    if (a.at(n) != 0.0)
      throw InvalidArgument("embed_supported: value at " + std::to_string(n) +
                            " lies outside [1, " + std::to_string(M) + "]");
  CyclicSignal<double> out = CyclicSignal<double>::Zero((2 * d + 1) * M);
  for (std::int64_t n = 1; n <= std::min(M, a.size()); ++n) out(n) = a.at(n);
  return out;
}

CyclicSignal<double> embed_supported(const Measure& a, int d) { return embed_supported(a, a.size(), d); }

CyclicSignal<double> lambda_deviation_signal(std::int64_t N, std::uint64_t W, std::uint64_t b, int d) {
  if (N < 1) throw InvalidArgument("lambda_deviation: N must be positive");
  if (d < 1) throw InvalidArgument("lambda_deviation: d must be >= 1");
  if (W < 1 || b < 1 || b > W || gcd_u64(b, W) != 1)
    throw InvalidArgument("lambda_deviation: need 1 <= b <= W with gcd(b, W) = 1");
  const PrimeTable table = primes_up_to(W * static_cast<std::uint64_t>(N) + b);
  const double density = static_cast<double>(euler_phi(W)) / static_cast<double>(W);
  CyclicSignal<double> out = CyclicSignal<double>::Zero((2 * d + 1) * N);
  for (std::int64_t n = 1; n <= N; ++n) {
    const std::uint64_t x = W * static_cast<std::uint64_t>(n) + b;
    const double lambda = table.is_prime(x) ? density * std::log(static_cast<double>(x)) : 0.0;
    out(n) = lambda - 1.0;
  }
  return out;
}

double gowers_direct_cost(std::int64_t n, int d) {
  return std::pow(static_cast<double>(n), d);
}

double lambda_deviation_norm(std::int64_t N, std::uint64_t W, std::uint64_t b, int d,
                             const DeviationNormOptions& options) {
  const std::int64_t n = (2 * d + 1) * N;
  if (d >= 3) {
    const double cost = gowers_direct_cost(n, d);
    if (cost > options.max_operations)
      throw ResourceError("lambda_deviation_norm: U^" + std::to_string(d) + " on Z_" +
                          std::to_string(n) + " needs about " + std::to_string(cost) +
                          " operations, budget is " + std::to_string(options.max_operations));
  }
  const CyclicSignal<double> f = lambda_deviation_signal(N, W, b, d);
  return d == 2 ? gowers_u2_fft(f) : gowers_norm(f, d);
}

double lambda_deviation_norm(const Params& params, std::uint64_t b, int d,
                             const DeviationNormOptions& options) {
  return lambda_deviation_norm(params.N, params.W, b, d, options);
}

}  // namespace petlab
