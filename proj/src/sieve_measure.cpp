#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "petlab/errors.hpp"
#include "petlab/measure.hpp"
#include "petlab/parallel.hpp"

namespace petlab {

std::int64_t floor_power(std::int64_t N, double eta) {
  const double v = std::pow(static_cast<double>(N), eta);
  auto r = static_cast<std::int64_t>(std::floor(v + 1e-9));
  return r;
}

Params Params::make(std::int64_t N, const ParamOptions& options) {
  if (N < 1) throw InvalidArgument("Params: N must be positive");
  if (options.d0 < 1) throw InvalidArgument("Params: d0 must be >= 1");
  Params p;
  p.N = N;
  p.w = options.w;
  p.W = primorial_below(options.w);
  p.b = options.b;
  p.d0 = options.d0;
  p.eta0 = options.eta0.value_or(0.3 / options.d0);
  p.eta1 = options.eta1.value_or(p.eta0 / 10.0);
  p.eta2 = options.eta2.value_or(p.eta1 / (2.0 * options.d0));
  p.M = floor_power(N, p.eta0);
  p.R = floor_power(N, p.eta2);
  p.delta0 = options.delta0;
  p.validate();
  return p;
}

void Params::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("Params: " + what); };
  if (N < 1) fail("N must be positive");
  if (w < 2) fail("w must be >= 2");
  if (W < 1) fail("W must be >= 1");
  if (b < 1 || b > W) fail("b must lie in [1, W]");
  if (gcd_u64(b, W) != 1) fail("b must be coprime to W");
  if (d0 < 1) fail("d0 must be >= 1");
  if (!(eta2 > 0 && eta2 < eta1 && eta1 < eta0 && eta0 < 1.0 / (2.0 * d0)))
    fail("need 0 < eta2 < eta1 < eta0 < 1/(2 d0), got eta0=" + std::to_string(eta0) +
         " eta1=" + std::to_string(eta1) + " eta2=" + std::to_string(eta2));
  if (M < 2) fail("coarse scale M = floor(N^eta0) = " + std::to_string(M) + " < 2");
  if (R < 2) fail("sieve level R = floor(N^eta2) = " + std::to_string(R) + " < 2");
}

double Params::w_density() const {
  return static_cast<double>(euler_phi(W)) / static_cast<double>(W);
}

// ---------------------------------------------------------------------------
// Cutoff

CutoffFunction::CutoffFunction(std::string name, std::function<double(double)> profile,
                               std::function<double(double)> derivative, double scale)
    : name_(std::move(name)),
      profile_(std::move(profile)),
      derivative_(std::move(derivative)),
      scale_(scale) {}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

CutoffFunction CutoffFunction::normalized(std::string name, std::function<double(double)> profile,
                                          std::function<double(double)> derivative,
                                          int intervals) {
  const double energy = simpson(
      [&](double t) {
        const double d = derivative(t);
        return d * d;
      },
      0.0, 1.0, intervals);
  if (!(energy > 0)) throw InvalidArgument("cutoff profile has zero derivative energy");
  return CutoffFunction(std::move(name), std::move(profile), std::move(derivative),
                        1.0 / std::sqrt(energy));
}

double CutoffFunction::operator()(double t) const {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  return scale_ * profile_(a);
}

// One-sided value at |t| = 1.
double CutoffFunction::derivative(double t) const {
  const double a = std::abs(t);
  if (a > 1.0) return 0.0;
  const double d = scale_ * derivative_(a);
  return t < 0 ? -d : d;
}

double CutoffFunction::derivative_energy(int intervals) const {
  return simpson(
      [this](double t) {
        const double d = derivative(t);
        return d * d;
      },
      0.0, 1.0, intervals);
}

CutoffFunction default_cutoff() {
  using std::numbers::pi;
  return CutoffFunction(
      "cosine", [](double t) { return std::cos(pi * t / 2); },
      [](double t) { return -(pi / 2) * std::sin(pi * t / 2); }, 2.0 * std::numbers::sqrt2 / pi);
}

CutoffFunction smooth_bump_cutoff() {
  auto profile = [](double t) {
    if (t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
  };
  auto derivative = [](double t) {
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t * t;
    return std::exp(-1.0 / u) * (-2.0 * t / (u * u));
  };
  return CutoffFunction::normalized("bump", profile, derivative);
}

// ---------------------------------------------------------------------------
// Measures

std::string_view to_string(MeasureLabel label) {
  switch (label) {
    case MeasureLabel::Lambda: return "lambda";
    case MeasureLabel::Nu: return "nu";
    case MeasureLabel::F: return "f";
    case MeasureLabel::G: return "g";
    case MeasureLabel::A: return "a";
    case MeasureLabel::Custom: return "custom";
  }
  return "custom";
}

MeasureLabel measure_label_from_string(std::string_view text) {
  if (text == "lambda") return MeasureLabel::Lambda;
  if (text == "nu") return MeasureLabel::Nu;
  if (text == "f") return MeasureLabel::F;
  if (text == "g") return MeasureLabel::G;
  if (text == "a") return MeasureLabel::A;
  if (text == "custom") return MeasureLabel::Custom;
  throw InvalidArgument("unknown measure label '" + std::string(text) + "'");
}

double Measure::mean() const {
  if (size() == 0) return 0.0;
  return parallel::pairwise_sum(std::span<const double>(values.data(), values.size())) /
         static_cast<double>(size());
}

Measure lambda_W_b(const Params& params, const PrimeTable& table) {
  const std::uint64_t top = params.W * static_cast<std::uint64_t>(params.N) + params.b;
  if (table.limit() < top)
    throw ResourceError("lambda_W_b: prime table reaches " + std::to_string(table.limit()) +
                        " but W*N+b = " + std::to_string(top));
  const double density = params.w_density();
  Eigen::VectorXd v(params.N);
  for (std::int64_t n = 1; n <= params.N; ++n) {
    const std::uint64_t x = params.W * static_cast<std::uint64_t>(n) + params.b;
    v(n - 1) = table.is_prime(x) ? density * std::log(static_cast<double>(x)) : 0.0;
  }
  return Measure(std::move(v), params.N, MeasureLabel::Lambda);
}

Measure lambda_W_b(const Params& params) {
  return lambda_W_b(params, primes_up_to(params.W * static_cast<std::uint64_t>(params.N) + params.b));
}

namespace {

constexpr std::int64_t kBlock = 1 << 15;
constexpr std::int64_t kMaxSieveLevel = 1'000'000'000;
constexpr int kMaxSmallFactors = 16;

// sum over squarefree m | x with m <= R, built from the distinct primes <= R
// dividing x (ascending), of mu(m) chi_table[m].
double divisor_sum(const std::uint32_t* primes, int count, std::int64_t R,
                   const std::vector<double>& chi_table) {
  double total = 0.0;
  // Iterative DFS over subsets in ascending prime order with pruning.
  struct Frame {
    int next;
    std::int64_t m;
    int sign;
  };
  std::array<Frame, kMaxSmallFactors + 1> stack;
  int top = 0;
  stack[0] = {0, 1, 1};
  total += chi_table[1];
  while (top >= 0) {
    Frame& f = stack[top];
    if (f.next >= count) {
      --top;
      continue;
    }
    const int i = f.next++;
    const std::int64_t m = f.m * primes[i];
    if (m > R) {
      // Primes ascend, so later primes overshoot too.
      f.next = count;
      continue;
    }
    const int sign = -f.sign;
    total += sign * chi_table[m];
    stack[++top] = {i + 1, m, sign};
  }
  return total;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  // p prime, a not divisible by p.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r) {
    const std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

}  // namespace

Measure sieve_nu(std::uint64_t W, std::uint64_t b, std::int64_t R, std::int64_t N,
                 const CutoffFunction& chi) {
  if (N < 1) throw InvalidArgument("sieve_nu: N must be positive");
  if (R < 2) throw InvalidArgument("sieve_nu: R must be >= 2");
  if (R > kMaxSieveLevel) throw ResourceError("sieve_nu: sieve level R too large");
  if (W == 0 || gcd_u64(b, W) != 1) throw InvalidArgument("sieve_nu: need gcd(b, W) = 1");

  const double logR = std::log(static_cast<double>(R));
  std::vector<double> chi_table(R + 1, 0.0);
  for (std::int64_t m = 1; m <= R; ++m)
    chi_table[m] = chi(std::log(static_cast<double>(m)) / logR);

  // Primes p <= R not dividing W, with the residue r_p of n for which
  // p | Wn + b.
  std::vector<std::uint32_t> primes;
  std::vector<std::uint64_t> roots;
  {
    const PrimeTable table = primes_up_to(static_cast<std::uint64_t>(R));
    for (std::uint64_t p : table.primes()) {
      if (W % p == 0) continue;
      primes.push_back(static_cast<std::uint32_t>(p));
      const std::uint64_t winv = inverse_mod(W % p, p);
      roots.push_back((p - b % p) % p * winv % p);
    }
  }

  const double prefactor = static_cast<double>(euler_phi(W)) / static_cast<double>(W) * logR;
  Eigen::VectorXd values(N);
  const std::int64_t blocks = (N + kBlock - 1) / kBlock;
  parallel::for_blocks(static_cast<std::size_t>(blocks), [&](std::size_t blk) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(blk) * kBlock;
    const std::int64_t hi = std::min<std::int64_t>(N, lo + kBlock - 1);
    const std::int64_t len = hi - lo + 1;
    std::vector<std::uint32_t> found(static_cast<std::size_t>(len) * kMaxSmallFactors);
    std::vector<std::uint8_t> counts(static_cast<std::size_t>(len), 0);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const std::uint64_t p = primes[i];
      // first n >= lo with n = roots[i] (mod p)
      const std::uint64_t lo_mod = static_cast<std::uint64_t>(lo) % p;
      std::uint64_t n = static_cast<std::uint64_t>(lo) + (roots[i] + p - lo_mod) % p;
      for (; n <= static_cast<std::uint64_t>(hi); n += p) {
        const std::size_t k = n - static_cast<std::uint64_t>(lo);
        if (counts[k] >= kMaxSmallFactors)
          throw ResourceError("sieve_nu: too many small prime factors");
        found[k * kMaxSmallFactors + counts[k]++] = static_cast<std::uint32_t>(p);
      }
    }
    for (std::int64_t k = 0; k < len; ++k) {
      const double s = divisor_sum(&found[static_cast<std::size_t>(k) * kMaxSmallFactors],
                                   counts[k], R, chi_table);
      values(lo - 1 + k) = prefactor * s * s;
    }
  });
  return Measure(std::move(values), N, MeasureLabel::Nu);
}

Measure nu_W_b(const Params& params, const CutoffFunction& chi) {
  return sieve_nu(params.W, params.b, params.R, params.N, chi);
}

DenseModelWeights dense_model_weights(const Params& params,
                                      const std::function<bool(std::uint64_t)>& in_A,
                                      const CutoffFunction& chi, const PrimeTable& table) {
  const std::uint64_t top_g = params.W * static_cast<std::uint64_t>(params.M) + 1;
  if (table.limit() < top_g)
    throw ResourceError("dense_model_weights: prime table must reach W*M+1 = " +
                        std::to_string(top_g));
  const double density = params.w_density();
  const double logR = std::log(static_cast<double>(params.R));
  // On a prime Wx+b > R the sieve weight equals density * log R * chi(0)^2,
  // so f carries the chi(0)^2 factor to stay below nu.
  const double chi0 = chi(0.0);
  const double f_level = density * logR * chi0 * chi0;

  DenseModelWeights out;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(params.N);
  for (std::int64_t x = params.R; x <= params.N / 2; ++x) {
    const std::uint64_t v = params.W * static_cast<std::uint64_t>(x) + params.b;
    if (in_A(v)) f(x - 1) = f_level;
  }
  out.f = Measure(std::move(f), params.N, MeasureLabel::F);

  Eigen::VectorXd g = Eigen::VectorXd::Zero(params.M);
  for (std::int64_t x = params.R; x <= params.M; ++x) {
    const std::uint64_t v = params.W * static_cast<std::uint64_t>(x) + 1;
    if (table.is_prime(v)) g(x - 1) = density * std::log(static_cast<double>(v));
  }

  const Measure nu2 = sieve_nu(params.W, 1, params.R, params.M, chi);
  double alpha = 1.0;
  for (std::int64_t x = 1; x <= params.M; ++x) {
    if (g(x - 1) > 0) alpha = std::min(alpha, nu2.values(x - 1) / g(x - 1));
  }
  if (!(alpha > 0))
    throw DegenerateInput("dense_model_weights: no positive alpha with alpha*g <= nu_{W,1}; "
                          "R is too large relative to M");
  out.alpha = alpha;
  Eigen::VectorXd a = alpha * (g.array() - 1.0).matrix();
  out.g = Measure(std::move(g), params.M, MeasureLabel::G);
  out.a = Measure(std::move(a), params.M, MeasureLabel::A);
  return out;
}

VanDerCorputCheck van_der_corput_check(std::span<const double> x) {
  const auto M = static_cast<std::int64_t>(x.size());
  if (M < 1) throw InvalidArgument("van_der_corput_check: empty sequence");
  VanDerCorputCheck out;
  double s = 0;
  for (double v : x) s += v;
  const double mean = s / static_cast<double>(M);
  out.lhs = mean * mean;
  std::vector<double> per_h;
  per_h.reserve(static_cast<std::size_t>(2 * M - 1));
  for (std::int64_t h = -(M - 1); h < M; ++h) {
    double c = 0;
    for (std::int64_t m = std::max<std::int64_t>(0, -h); m < M && m + h < M; ++m)
      c += x[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(m + h)];
    per_h.push_back(c);
  }
  out.rhs = parallel::pairwise_sum(std::span<const double>(per_h)) /
            (static_cast<double>(M) * static_cast<double>(2 * M - 1));
  return out;
}

}  // namespace petlab
