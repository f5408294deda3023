#include "petlab/configs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <set>

#include "petlab/errors.hpp"
#include "petlab/parallel.hpp"

namespace petlab {

namespace {

void check_args(std::int64_t N, std::int64_t M, int shift) {
  if (N < 1) throw InvalidArgument("configs: N must be positive");
  if (M < 1) throw InvalidArgument("configs: M must be positive");
  if (shift != -1 && shift != 1) throw InvalidArgument("configs: shift must be -1 or +1");
}

std::vector<IntEvaluator> compile(const std::vector<Poly>& system) {
  std::vector<IntEvaluator> out;
  for (const auto& p : system) {
    if (p.num_vars() > 1) throw InvalidArgument("configs: polynomials must be in m only");
    out.emplace_back(p);
  }
  return out;
}

// steps[i] = P_i(p + shift) for every prime p <= M.
std::vector<std::vector<std::int64_t>> all_steps(const std::vector<IntEvaluator>& eval,
                                                 const std::vector<std::uint64_t>& primes, int shift) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(primes.size());
  for (std::uint64_t p : primes) {
    const std::int64_t arg[1] = {static_cast<std::int64_t>(p) + shift};
    std::vector<std::int64_t> s;
    for (const auto& e : eval) s.push_back(e(arg));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::uint64_t> primes_to(std::int64_t M) {
  if (M < 2) return {};
  return primes_up_to(static_cast<std::uint64_t>(M)).primes();
}

template <class Pred>
std::uint64_t count_pairs(const std::vector<std::vector<std::int64_t>>& steps, std::int64_t N, Pred&& pred) {
  std::vector<std::uint64_t> per(steps.size(), 0);
  parallel::for_blocks(steps.size(), [&](std::size_t i) {
    std::uint64_t c = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      bool ok = true;
      for (std::int64_t s : steps[i]) {
        if (!pred(n + s)) {
          ok = false;
          break;
        }
      }
      c += ok;
    }
    per[i] = c;
  });
  std::uint64_t total = 0;
  for (auto c : per) total += c;
  return total;
}

}  // namespace

std::uint64_t config_table_limit(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift) {
  check_args(N, M, shift);
  const auto eval = compile(system);
  std::int64_t top = 2;
  for (const auto& s : all_steps(eval, primes_to(M), shift))
    for (std::int64_t v : s) top = std::max(top, N + v);
  return static_cast<std::uint64_t>(top);
}

std::uint64_t count_configs(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                            const PrimeTable& table) {
  check_args(N, M, shift);
  const auto eval = compile(system);
  const auto primes = primes_to(M);
  const auto steps = all_steps(eval, primes, shift);
  std::int64_t top = 2;
  for (const auto& s : steps)
    for (std::int64_t v : s) top = std::max(top, N + v);
  if (table.limit() < static_cast<std::uint64_t>(top))
    throw ResourceError("count_configs: prime table reaches " + std::to_string(table.limit()) +
                        ", need " + std::to_string(top));
  return count_pairs(steps, N, [&](std::int64_t v) { return v >= 2 && table.is_prime(static_cast<std::uint64_t>(v)); });
}

std::uint64_t count_configs(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift) {
  const PrimeTable table = primes_up_to(config_table_limit(system, N, M, shift));
  return count_configs(system, N, M, shift, table);
}

std::uint64_t count_configs_dense(const std::function<bool(std::int64_t)>& in_A, const std::vector<Poly>& system,
                                  std::int64_t N, std::int64_t M, int shift) {
  check_args(N, M, shift);
  const auto eval = compile(system);
  const auto steps = all_steps(eval, primes_to(M), shift);
  return count_pairs(steps, N, in_A);
}

std::uint64_t local_count(const std::vector<Poly>& system, std::uint64_t q, int shift) {
  const auto eval = compile(system);
  std::uint64_t total = 0;
  std::vector<std::uint64_t> roots;
  for (std::uint64_t m = 1; m < q; ++m) {
    const std::uint64_t arg[1] = {(m + q + static_cast<std::uint64_t>(static_cast<std::int64_t>(shift))) % q};
    roots.clear();
    for (const auto& e : eval) roots.push_back((q - e.mod(arg, q)) % q);
    std::sort(roots.begin(), roots.end());
    const auto distinct = static_cast<std::uint64_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
    total += q - distinct;
  }
  return total;
}

Prediction bateman_horn_prediction(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                                   std::uint64_t truncation_prime) {
  check_args(N, M, shift);
  if (truncation_prime < 2 || truncation_prime > 10000)
    throw InvalidArgument("predict: truncation prime must lie in [2, 10^4]");
  const auto eval = compile(system);
  const auto k = static_cast<double>(system.size());
  Prediction out;
  out.truncation_prime = truncation_prime;
  double log_series = 0.0;
  for (std::uint64_t q : primes_up_to(truncation_prime).primes()) {
    const std::uint64_t omega = local_count(system, q, shift);
    if (omega == 0) {
      out.blocking_prime = q;
      out.singular_series = 0.0;
      out.predicted = 0.0;
      return out;
    }
    const double qd = static_cast<double>(q);
    log_series += std::log(static_cast<double>(omega) / (qd * qd)) - (k + 1) * std::log1p(-1.0 / qd);
  }
  out.singular_series = std::exp(log_series);
  const auto primes = primes_to(M);
  out.prime_count = primes.size();
  const double mean_n = (static_cast<double>(N) + 1.0) / 2.0;
  std::vector<double> terms;
  for (const auto& s : all_steps(eval, primes, shift)) {
    double denom = 1.0;
    for (std::int64_t v : s) denom *= std::log(std::max(std::numbers::e, mean_n + static_cast<double>(v)));
    terms.push_back(static_cast<double>(N) / denom);
  }
  out.predicted = out.singular_series * parallel::pairwise_sum(std::span<const double>(terms));
  return out;
}

ConfigCountReport config_report(const std::vector<Poly>& system, std::int64_t N, std::int64_t M, int shift,
                                std::uint64_t truncation_prime) {
  ConfigCountReport r;
  r.N = N;
  r.M = M;
  r.shift = shift;
  r.system = system;
  r.count = count_configs(system, N, M, shift);
  r.prediction = bateman_horn_prediction(system, N, M, shift, truncation_prime);
  r.ratio = r.prediction.predicted > 0 ? static_cast<double>(r.count) / r.prediction.predicted : 0.0;
  const double nm = static_cast<double>(N) * static_cast<double>(M);
  const double k = static_cast<double>(system.size());
  r.normalized_log_N = static_cast<double>(r.count) / (nm / std::pow(std::log(static_cast<double>(N)), k + 1));
  r.normalized_log_M = M >= 2 ? static_cast<double>(r.count) / (nm / std::log(static_cast<double>(M))) : 0.0;
  return r;
}

WeightedAverage weighted_average(const Measure& a, const std::vector<Measure>& f, const std::vector<Poly>& system,
                                 const Params& params) {
  if (f.size() != system.size()) throw InvalidArgument("weighted_average: need one f_i per polynomial");
  const std::int64_t N = params.N, M = params.M;
  for (std::int64_t n = M + 1; n <= a.size(); ++n)
    if (a.at(n) != 0.0) throw InvalidArgument("weighted_average: a must be supported on [1, M]");
  std::vector<IntEvaluator> eval;
  for (const auto& p : system) eval.emplace_back(w_rescale(p, BigInt(params.W)));

  WeightedAverage out;
  std::vector<std::vector<std::int64_t>> shifts(static_cast<std::size_t>(M));
  for (std::int64_t m = 1; m <= M; ++m) {
    const std::int64_t arg[1] = {m};
    for (const auto& e : eval) {
      const std::int64_t s = e(arg);
      out.max_shift = std::max(out.max_shift, s < 0 ? -s : s);
      shifts[static_cast<std::size_t>(m - 1)].push_back(s);
    }
  }
  out.wraparound = 2 * out.max_shift >= N;

  std::vector<double> per_m(static_cast<std::size_t>(M), 0.0);
  parallel::for_blocks(static_cast<std::size_t>(M), [&](std::size_t i) {
    const double am = a.at(static_cast<std::int64_t>(i) + 1);
    if (am == 0.0) return;
    std::vector<double> row(static_cast<std::size_t>(N));
    for (std::int64_t x = 1; x <= N; ++x) {
      double v = am;
      for (std::size_t j = 0; j < f.size(); ++j) {
        std::int64_t r = (x + shifts[i][j] % N) % N;
        if (r <= 0) r += N;
        v *= f[j].at(r);
      }
      row[static_cast<std::size_t>(x - 1)] = v;
    }
    per_m[i] = parallel::pairwise_sum(std::span<const double>(row)) / static_cast<double>(N);
  });
  out.value = parallel::pairwise_sum(std::span<const double>(per_m)) / static_cast<double>(M);
  return out;
}

}  // namespace petlab
