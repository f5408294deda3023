#include "petlab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "petlab/arith.hpp"
#include "petlab/errors.hpp"
#include "petlab/fp_poly.hpp"
#include "petlab/parallel.hpp"

namespace petlab {

std::string PrimeClass::name() const {
  if (terrible) return good ? "good+terrible" : "terrible";
  return good ? "good" : "bad";
}

PrimeClass classify_prime(std::uint64_t p, const std::vector<Poly>& family, const ClassifyLimits& limits) {
  if (p < 2 || p >= (1ull << 32)) throw InvalidArgument("classify_prime: p out of range");
  const Factorization f = factorize(p);
  if (f.factors.size() != 1 || f.factors[0].exponent != 1)
    throw InvalidArgument("classify_prime: " + std::to_string(p) + " is not prime");
  std::vector<FpPoly> red;
  std::size_t vars = 0;
  for (const auto& q : family) {
    vars = std::max(vars, q.num_vars());
    if (q.total_degree() > limits.max_total_degree)
      throw ResourceError("classify_prime: total degree " + std::to_string(q.total_degree()) +
                          " above the limit " + std::to_string(limits.max_total_degree));
    red.push_back(FpPoly::reduce(q, p));
  }
  if (vars > limits.max_vars)
    throw ResourceError("classify_prime: " + std::to_string(vars) + " variables, limit is " +
                        std::to_string(limits.max_vars));

  PrimeClass c;
  c.terrible = std::any_of(red.begin(), red.end(), [](const FpPoly& f) { return f.is_zero(); });
  c.coprime = true;
  for (std::size_t i = 0; i < red.size() && c.coprime; ++i)
    for (std::size_t j = 0; j < i && c.coprime; ++j) c.coprime = coprime(red[i], red[j]);
  c.linear_split = true;
  for (const auto& f : red) {
    bool found = false;
    for (std::size_t v = 0; v < vars && !found; ++v) {
      if (f.degree_in(v) != 1) continue;
      const FpPoly f1 = f.coefficient_in(v, 1), f0 = f.coefficient_in(v, 0);
      found = !f1.is_zero() && coprime(f1, f0);
    }
    if (!found) {
      c.linear_split = false;
      break;
    }
  }
  c.good = c.coprime && c.linear_split;
  return c;
}

namespace {

struct ModTerm {
  std::uint64_t coeff;
  Monomial exps;
};

std::vector<ModTerm> mod_terms(const Poly& q, std::uint64_t p) {
  std::vector<ModTerm> out;
  const FpPoly reduced = FpPoly::reduce(q, p);
  for (const auto& [m, c] : reduced.terms()) out.push_back({c, m});
  return out;
}

double checked_points(std::uint64_t p, std::size_t D, double max_points) {
  const double points = std::pow(static_cast<double>(p), static_cast<double>(D));
  if (points > max_points)
    throw ResourceError("local_factor: p^D = " + std::to_string(points) + " exceeds the budget " +
                        std::to_string(max_points));
  return points;
}

}  // namespace

std::vector<Rational> local_factor_table(std::uint64_t p, const std::vector<Poly>& family, std::size_t D,
                                         double max_points) {
  if (p < 2) throw InvalidArgument("local_factor: p must be prime");
  if (family.size() > 20) throw ResourceError("local_factor: at most 20 polynomials");
  for (const auto& q : family)
    if (q.num_vars() > D) throw InvalidArgument("local_factor: polynomial uses more than D variables");
  const auto total = static_cast<std::int64_t>(checked_points(p, D, max_points));
  const std::size_t k = family.size();
  std::vector<std::vector<ModTerm>> terms;
  for (const auto& q : family) terms.push_back(mod_terms(q, p));

  std::vector<std::int64_t> counts(std::size_t{1} << k, 0);
  std::vector<std::uint64_t> y(D, 0);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::size_t mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      std::uint64_t v = 0;
      for (const auto& t : terms[j]) {
        std::uint64_t x = t.coeff;
        for (std::size_t i = 0; i < t.exps.size(); ++i)
          for (unsigned e = 0; e < t.exps[i]; ++e) x = x * y[i] % p;
        v += x;
      }
      if (v % p == 0) mask |= std::size_t{1} << j;
    }
    ++counts[mask];
    for (std::size_t i = 0; i < D; ++i) {
      if (++y[i] < p) break;
      y[i] = 0;
    }
  }
  // superset sums
  for (std::size_t bit = 0; bit < k; ++bit)
    for (std::size_t mask = 0; mask < counts.size(); ++mask)
      if (!(mask & (std::size_t{1} << bit))) counts[mask] += counts[mask | (std::size_t{1} << bit)];
  std::vector<Rational> out;
  out.reserve(counts.size());
  for (auto c : counts) out.emplace_back(c, total);
  return out;
}

Rational local_factor(std::uint64_t p, const std::vector<Poly>& family, std::size_t D, double max_points) {
  if (family.empty()) return Rational(1);
  return local_factor_table(p, family, D, max_points).back();
}

std::vector<Poly> ResidueFamily::forms(std::uint64_t W) const {
  std::vector<Poly> out;
  for (const auto& q : J1) out.push_back(q * BigInt(W) + Poly::constant(b1));
  for (const auto& q : J2) out.push_back(q * BigInt(W) + Poly::constant(b2));
  return out;
}

namespace {

Complex p_power(std::uint64_t p, Complex s) { return std::exp(-s * std::log(static_cast<double>(p))); }

void check_z(const std::vector<Complex>& z, const std::vector<Complex>& zp, std::size_t n) {
  if (z.size() != n || zp.size() != n)
    throw InvalidArgument("euler factor: need one z and one z' per polynomial");
  for (std::size_t j = 0; j < n; ++j)
    if (!(z[j].real() > 0) || !(zp[j].real() > 0))
      throw InvalidArgument("euler factor: z and z' need positive real part");
}

}  // namespace

Complex euler_factor_exact(std::uint64_t p, const ResidueFamily& family, std::uint64_t W,
                           const std::vector<Complex>& z, const std::vector<Complex>& z_prime) {
  const std::size_t n = family.size();
  check_z(z, z_prime, n);
  if (n > 16) throw ResourceError("euler_factor_exact: at most 16 polynomials");
  if (n == 0) return Complex(1.0, 0.0);
  const std::vector<Rational> c = local_factor_table(p, family.forms(W), family.D);
  std::vector<Complex> a(n);
  for (std::size_t j = 0; j < n; ++j)
    a[j] = p_power(p, z[j] + z_prime[j]) - p_power(p, z[j]) - p_power(p, z_prime[j]);
  Complex total(1.0, 0.0);
  for (std::size_t S = 1; S < c.size(); ++S) {
    if (c[S].numerator() == 0) continue;
    Complex term(boost::rational_cast<double>(c[S]), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (S & (std::size_t{1} << j)) term *= a[j];
    total += term;
  }
  return total;
}

Complex euler_factor_model(std::uint64_t p, const std::vector<Complex>& z, const std::vector<Complex>& z_prime) {
  check_z(z, z_prime, z.size());
  Complex out(1.0, 0.0);
  for (std::size_t j = 0; j < z.size(); ++j)
    out *= (1.0 - p_power(p, 1.0 + z[j])) * (1.0 - p_power(p, 1.0 + z_prime[j])) /
           (1.0 - p_power(p, 1.0 + z[j] + z_prime[j]));
  return out;
}

ClaimReport check_prime_class_claims(const ResidueFamily& family, std::uint64_t W, const ClaimOptions& options) {
  if (options.log_R <= 0) throw InvalidArgument("euler-check: log R must be positive");
  if (options.p_max < options.p_min) throw InvalidArgument("euler-check: empty prime range");
  const std::size_t n = family.size();
  ClaimReport report;
  // z lines: the real line first, then random imaginary parts.
  report.z_lines.emplace_back(2 * n, Complex(1.0 / options.log_R, 0.0));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> xi(-options.xi_scale, options.xi_scale);
  for (int s = 0; s < options.z_imag_samples; ++s) {
    std::vector<Complex> line(2 * n);
    for (auto& v : line) v = Complex(1.0, xi(rng)) / options.log_R;
    report.z_lines.push_back(std::move(line));
  }
  auto split = [n](const std::vector<Complex>& line) {
    return std::pair(std::vector<Complex>(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(n)),
                     std::vector<Complex>(line.begin() + static_cast<std::ptrdiff_t>(n), line.end()));
  };
  const auto forms = family.forms(W);

  // small primes
  const PrimeTable table = primes_up_to(std::max<std::uint64_t>(options.p_max, options.w));
  double product = 1.0;
  for (std::uint64_t p : table.primes()) {
    if (p >= options.w) break;
    for (const auto& line : report.z_lines) {
      const auto [z, zp] = split(line);
      if (euler_factor_exact(p, family, W, z, zp) != Complex(1.0, 0.0)) report.small_primes_exact = false;
    }
    const auto [z, zp] = split(report.z_lines.front());
    product *= euler_factor_model(p, z, zp).real();
  }
  report.small_primes_product = product;
  report.small_primes_target =
      std::pow(static_cast<double>(euler_phi(W)) / static_cast<double>(W), static_cast<double>(n));
  report.small_primes_in_band =
      std::abs(product / report.small_primes_target - 1.0) <= options.small_prime_band;

  std::vector<double> xs, ys;
  for (std::uint64_t p : table.primes()) {
    if (p < options.p_min || p > options.p_max) continue;
    PrimeClaimRow row;
    row.p = p;
    row.cls = classify_prime(p, forms);
    bool exact = true;
    for (const auto& line : report.z_lines) {
      const auto [z, zp] = split(line);
      const Complex e = euler_factor_exact(p, family, W, z, zp);
      const Complex m = euler_factor_model(p, z, zp);
      exact = exact && e == Complex(1.0, 0.0);
      row.deviation = std::max(row.deviation, std::abs(e / m - 1.0));
    }
    row.exact_one = exact;
    if (p >= options.w) {
      if (row.cls.terrible) {
        ++report.terrible_count;
      } else if (row.cls.good) {
        ++report.good_count;
        if (row.deviation > 0) {
          xs.push_back(std::log(static_cast<double>(p)));
          ys.push_back(std::log(row.deviation));
        }
      } else {
        ++report.bad_count;
        report.bad_constant = std::max(report.bad_constant, static_cast<double>(p) * row.deviation);
      }
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    report.good_slope = sxx > 0 ? sxy / sxx : 0.0;
    report.good_ok = xs.size() >= 3 && report.good_slope <= options.good_slope_max;
  }
  report.bad_ok = report.bad_constant <= options.bad_constant_max;
  return report;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

constexpr std::uint64_t kChunk = 4096;

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

struct Moments {
  double sum = 0;
  double sum_sq = 0;
  double aux = 0;
};

// Runs body(rng, count) -> Moments over fixed chunks and combines them in
// chunk order.
template <class Body>
Moments run_chunks(std::uint64_t samples, std::uint64_t seed, Body&& body) {
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> parts(chunks);
  parallel::for_blocks(chunks, [&](std::size_t c) {
    auto rng = chunk_rng(seed, c);
    const std::uint64_t count = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
    parts[c] = body(rng, count);
  });
  std::vector<double> s(chunks), q(chunks), a(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    s[c] = parts[c].sum;
    q[c] = parts[c].sum_sq;
    a[c] = parts[c].aux;
  }
  return {parallel::pairwise_sum(std::span<const double>(s)), parallel::pairwise_sum(std::span<const double>(q)),
          parallel::pairwise_sum(std::span<const double>(a))};
}

void finish(EstimateReport& r, const Moments& m) {
  const auto n = static_cast<double>(r.samples);
  r.point_estimate = m.sum / n;
  if (r.samples > 1) {
    const double var = std::max(0.0, (m.sum_sq - m.sum * m.sum / n) / (n - 1));
    r.standard_error = std::sqrt(var / n);
  }
}

std::int64_t residue(std::int64_t x, std::int64_t q, std::int64_t N) {
  std::int64_t r = q % N;
  if (r < 0) r += N;
  return x + r;
}

std::vector<IntEvaluator> compile(const std::vector<Poly>& Q) {
  std::vector<IntEvaluator> out;
  for (const auto& q : Q) out.emplace_back(q);
  return out;
}

void check_differences(const std::vector<Poly>& Q, const std::string& label) {
  for (std::size_t i = 0; i < Q.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if ((Q[i] - Q[j]).is_constant())
        throw InvalidArgument(label + "Q_" + std::to_string(j + 1) + " - Q_" + std::to_string(i + 1) +
                              " is constant (" + to_string(Q[i] - Q[j]) + ")");
}

}  // namespace

EstimateReport forms_condition_estimate(const Measure& nu, const std::vector<Poly>& Q, const Box& box,
                                        const FormsOptions& options) {
  if (options.samples < 1) throw InvalidArgument("forms: need at least one sample");
  if (nu.modulus < 1 || nu.size() < 1) throw InvalidArgument("forms: empty measure");
  const std::size_t D = box.size();
  for (const auto& [lo, hi] : box)
    if (lo > hi) throw InvalidArgument("forms: box has an empty side");
  for (const auto& q : Q)
    if (q.num_vars() > D) throw InvalidArgument("forms: polynomial uses more variables than the box");
  check_differences(Q, "forms: ");
  if (options.max_count && (Q.size() > options.max_count || D > options.max_count))
    throw InvalidArgument("forms: |J| and D must be at most " + std::to_string(options.max_count));

  EstimateReport r;
  r.samples = options.samples;
  r.seed = options.seed;
  r.k = 1;
  if (Q.empty()) {
    r.point_estimate = 1.0;
    return r;
  }
  const auto eval = compile(Q);
  const std::int64_t N = nu.modulus;
  const Moments m = run_chunks(options.samples, options.seed, [&](std::mt19937_64& rng, std::uint64_t count) {
    std::uniform_int_distribution<std::int64_t> xdist(0, N - 1);
    std::vector<std::uniform_int_distribution<std::int64_t>> hdist;
    for (const auto& [lo, hi] : box) hdist.emplace_back(lo, hi);
    std::vector<std::int64_t> h(D);
    Moments acc;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::int64_t x = xdist(rng);
      for (std::size_t d = 0; d < D; ++d) h[d] = hdist[d](rng);
      double v = 1.0;
      for (const auto& e : eval) v *= nu.on_cycle(residue(x, e(h), N));
      acc.sum += v;
      acc.sum_sq += v * v;
    }
    return acc;
  });
  finish(r, m);
  return r;
}

EstimateReport extra_condition_estimate(const Measure& nu1, const Measure& nu2, const std::vector<Poly>& Q,
                                        const std::vector<LinearForm>& L, int k, std::int64_t M,
                                        std::size_t D, const ExtraOptions& options) {
  if (k < 0 || k > 2) throw InvalidArgument("extra: k must be 0, 1 or 2");
  if (M < 1) throw InvalidArgument("extra: M must be positive");
  if (D < 1) throw InvalidArgument("extra: D must be positive");
  if (options.samples < 1 || options.inner_samples < 1)
    throw InvalidArgument("extra: sample counts must be positive");
  for (const auto& q : Q)
    if (q.num_vars() > D) throw InvalidArgument("extra: polynomial uses more than D variables");
  check_differences(Q, "extra condition bullet 1 (differences not constant): ");
  if (options.max_count && (Q.size() > options.max_count || D > options.max_count))
    throw InvalidArgument("extra condition bullet 2 (|J_1| and D at most " + std::to_string(options.max_count) +
                          ") fails");
  for (std::size_t j = 0; j < Q.size(); ++j) {
    if (options.d0 > 0 && Q[j].total_degree() > options.d0)
      throw InvalidArgument("extra condition bullet 3 (total degree at most d0 = " + std::to_string(options.d0) +
                            ") fails for Q_" + std::to_string(j + 1));
    if (options.max_coefficient && Q[j].max_abs_coefficient() > *options.max_coefficient)
      throw InvalidArgument("extra condition bullet 3 (coefficient bound) fails for Q_" + std::to_string(j + 1));
  }
  for (std::size_t j = 0; j < L.size(); ++j) {
    if (L[j].size() != D)
      throw InvalidArgument("extra: linear form L_" + std::to_string(j + 1) + " needs " + std::to_string(D) +
                            " coefficients");
    for (int c : L[j])
      if (c != 0 && c != 1)
        throw InvalidArgument("extra condition bullet 6 (coefficients 0 or 1) fails for L_" +
                              std::to_string(j + 1));
  }
  for (std::size_t i = 0; i < L.size(); ++i) {
    const bool zero = std::all_of(L[i].begin(), L[i].end(), [](int c) { return c == 0; });
    if (zero && L.size() > 1)
      throw InvalidArgument("extra condition bullet 4 (pairwise linear independence) fails: L_" +
                            std::to_string(i + 1) + " is zero");
    for (std::size_t j = 0; j < i; ++j)
      if (L[i] == L[j])
        throw InvalidArgument("extra condition bullet 4 (pairwise linear independence) fails: L_" +
                              std::to_string(j + 1) + " = L_" + std::to_string(i + 1));
  }
  if (options.max_count && L.size() > options.max_count)
    throw InvalidArgument("extra condition bullet 5 (|J_2| at most " + std::to_string(options.max_count) +
                          ") fails");
  if (nu1.modulus < 1 || nu2.modulus < 1) throw InvalidArgument("extra: measures need a positive modulus");

  EstimateReport r;
  r.samples = options.samples;
  r.seed = options.seed;
  r.k = k;
  r.inner_samples = k == 0 ? 0 : options.inner_samples;
  const auto eval = compile(Q);
  const std::int64_t N1 = nu1.modulus, N2 = nu2.modulus;
  const int inner = options.inner_samples;

  const Moments m = run_chunks(options.samples, options.seed, [&](std::mt19937_64& rng, std::uint64_t count) {
    std::uniform_int_distribution<std::int64_t> mdist(1, M);
    std::uniform_int_distribution<std::int64_t> hdist(-(M - 1), M - 1);
    std::uniform_int_distribution<std::int64_t> xdist(0, N1 - 1);
    std::vector<std::int64_t> point(D), shifts(eval.size());
    Moments acc;
    auto inner_mean = [&](double& var) {
      double s = 0, sq = 0;
      for (int i = 0; i < inner; ++i) {
        const std::int64_t x = xdist(rng);
        double v = 1.0;
        for (std::size_t j = 0; j < shifts.size(); ++j) v *= nu1.on_cycle(residue(x, shifts[j], N1));
        s += v;
        sq += v * v;
      }
      const double mean = s / inner;
      var = inner > 1 ? std::max(0.0, (sq - s * s / inner) / (inner - 1)) : 0.0;
      return mean;
    };
    for (std::uint64_t i = 0; i < count; ++i) {
      point[0] = mdist(rng);
      for (std::size_t d = 1; d < D; ++d) point[d] = hdist(rng);
      double w = 1.0;
      for (const auto& form : L) {
        std::int64_t v = 0;
        for (std::size_t d = 0; d < D; ++d) v += form[d] * point[d];
        w *= nu2.on_cycle(residue(0, v, N2));
      }
      double value = w;
      if (k >= 1 && w != 0.0) {
        for (std::size_t j = 0; j < eval.size(); ++j) shifts[j] = eval[j](point);
        double var1 = 0, var2 = 0;
        const double i1 = inner_mean(var1);
        if (k == 1) {
          value = w * i1;
        } else {
          const double i2 = inner_mean(var2);
          value = w * i1 * i2;
          acc.aux += w * 0.5 * (var1 + var2) / inner;
        }
      } else if (k >= 1) {
        value = 0.0;
      }
      acc.sum += value;
      acc.sum_sq += value * value;
    }
    return acc;
  });
  finish(r, m);
  r.bias_bound = 0.0;
  r.naive_square_bias = k == 2 ? m.aux / static_cast<double>(options.samples) : 0.0;
  return r;
}

CubeInstance cube_instance() {
  const Poly m = Poly::variable(0), h = Poly::variable(1), kk = Poly::variable(2), l = Poly::variable(3);
  auto R1 = [](const Poly& a) { return -(a * a); };
  auto R2 = [](const Poly& a, const Poly& b) { return -(a * b * BigInt(2) + b * b); };
  CubeInstance out;
  out.Q = {R2(m, h),
           R1(m) + R2(m, h),
           R1(m + kk) + R2(m, h),
           R2(m + l, h),
           R1(m + l) + R2(m + l, h),
           R1(m + kk + l) + R2(m + l, h)};
  // vertices m + w.(l, k, h); coefficient order (m, h, k, l)
  for (int wl = 0; wl <= 1; ++wl)
    for (int wk = 0; wk <= 1; ++wk)
      for (int wh = 0; wh <= 1; ++wh) out.L.push_back({1, wh, wk, wl});
  return out;
}

}  // namespace petlab
