// Acceptance checks. Run with a criterion name (c1..c10) or with no argument
// for all of them; prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "petlab/arith.hpp"
#include "petlab/configs.hpp"
#include "petlab/correlation.hpp"
#include "petlab/errors.hpp"
#include "petlab/gowers.hpp"
#include "petlab/measure.hpp"
#include "petlab/pet.hpp"
#include "petlab/poly.hpp"

using namespace petlab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Verdict runtime_gate(Verdict v, const Timer& t, double limit) {
  const double s = t.seconds();
  v.detail += "; runtime " + fmt(s, 3) + " s (limit " + fmt(limit, 3) + " s)";
  if (s > limit) v.pass = false;
  return v;
}

// C1: mean of nu_{W,b} with w = 3 and R = N^0.05.
Verdict c1() {
  Timer t;
  ParamOptions o;
  o.w = 3;
  o.eta0 = 0.3;
  o.eta1 = 0.1;
  o.eta2 = 0.05;
  std::ostringstream msg;
  std::vector<double> dev;
  bool built = true;
  for (std::int64_t N : {100000, 1000000}) {
    msg << "N=" << N << ": R=floor(N^0.05)=" << floor_power(N, 0.05);
    try {
      const Params p = Params::make(N, o);
      const double mean = nu_W_b(p, default_cutoff()).mean();
      msg << " mean " << fmt(mean) << "; ";
      dev.push_back(std::abs(mean - 1));
      if (N == 100000 && (mean < 0.8 || mean > 1.2)) built = false;
    } catch (const InvalidArgument& e) {
      built = false;
      const double mean2 = sieve_nu(2, 1, 2, N, default_cutoff()).mean();
      msg << " rejected (" << e.what() << "), mean at R=2 would be " << fmt(mean2) << "; ";
    }
  }
  Verdict v;
  v.pass = built && dev.size() == 2 && dev[1] <= 1.5 * dev[0];
  v.detail = msg.str() + "need mean in [0.8,1.2] at 1e5 and |mean-1| not growing past 1.5x at 1e6";
  return runtime_gate(v, t, 120);
}

// C2: the m^2 trace.
Verdict c2() {
  Timer t;
  const PetTrace tr = pet_run(parse_poly_system("m^2"));
  std::vector<TypeVector> types{tr.initial_type};
  bool claims = true;
  for (const auto& s : tr.steps) {
    types.push_back(s.type_after);
    claims = claims && s.claims.all();
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < types.size(); ++i) decreasing = decreasing && type_less(types[i], types[i - 1]);
  std::ostringstream msg;
  msg << "t=" << tr.t << " d=" << tr.d << " group_multiplier=" << tr.group_multiplier << " types";
  for (const auto& ty : types) {
    msg << " (";
    for (std::size_t i = 0; i < ty.size(); ++i) msg << (i ? "," : "") << ty[i];
    msg << ")";
  }
  msg << " claims " << (claims ? "hold" : "FAIL");
  Verdict v;
  v.pass = tr.t == 2 && tr.d == 3 && tr.group_multiplier == 7 && types.size() == 3 && decreasing && claims;
  v.detail = msg.str();
  return runtime_gate(v, t, 5);
}

// C3: 50 random admissible systems.
Verdict c3() {
  Timer t;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> k_dist(1, 3), deg_dist(1, 3), coeff(-5, 5);
  PetOptions o;
  o.max_steps = 10000;
  o.max_family = 1u << 10;
  o.record_families = false;
  int terminated = 0, resource = 0, internal = 0;
  std::size_t worst_steps = 0;
  std::string first_resource;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Poly> sys;
    const int k = k_dist(rng);
    while (static_cast<int>(sys.size()) < k) {
      Poly p;
      const int d = deg_dist(rng);
      for (int e = 1; e <= d; ++e) p.add_term(Monomial{static_cast<std::uint16_t>(e)}, coeff(rng));
      if (p.degree_in(0) != d) continue;
      bool dup = false;
      for (const auto& q : sys) dup = dup || q == p;
      if (!dup) sys.push_back(p);
    }
    try {
      const PetTrace tr = pet_run(sys, o);
      ++terminated;
      worst_steps = std::max(worst_steps, tr.steps.size());
    } catch (const ResourceError& e) {
      ++resource;
      if (first_resource.empty()) {
        first_resource = "first refusal on {";
        for (std::size_t i = 0; i < sys.size(); ++i) first_resource += (i ? "; " : "") + to_string(sys[i]);
        first_resource += "}: " + std::string(e.what());
      }
    } catch (const InternalError&) {
      ++internal;
    }
  }
  Verdict v;
  v.pass = terminated == 50 && internal == 0;
  v.detail = std::to_string(terminated) + "/50 terminated (longest " + std::to_string(worst_steps) +
             " steps), " + std::to_string(resource) + " hit the family cap of " + std::to_string(o.max_family) + " members, " +
             std::to_string(internal) + " type or claim failures" + (first_resource.empty() ? "" : "; " + first_resource);
  return runtime_gate(v, t, 60);
}

// C4: FFT vs direct U^2, direct U^3 vs a naive quadruple loop.
Verdict c4() {
  Timer t;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> n2(1, 128), n3(1, 32);
  std::normal_distribution<double> val(0, 1);
  double worst2 = 0, worst3 = 0;
  for (int i = 0; i < 100; ++i) {
    CyclicSignal<double> f(n2(rng));
    for (auto& x : f) x = val(rng);
    const double a = gowers_u2_fft(f), b = gowers_norm(f, 2);
    worst2 = std::max(worst2, std::abs(a - b) / std::max(std::abs(b), 1e-300));
  }
  for (int i = 0; i < 30; ++i) {
    const int n = n3(rng);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = val(rng);
    const CyclicSignal<double> f = Eigen::Map<Eigen::VectorXd>(v.data(), n);
    double naive = 0;
    for (int x = 0; x < n; ++x)
      for (int h1 = 0; h1 < n; ++h1)
        for (int h2 = 0; h2 < n; ++h2)
          for (int h3 = 0; h3 < n; ++h3) {
            double prod = 1;
            for (int w = 0; w < 8; ++w) prod *= v[static_cast<std::size_t>((x + (w & 1) * h1 + (w >> 1 & 1) * h2 + (w >> 2 & 1) * h3) % n)];
            naive += prod;
          }
    naive /= std::pow(static_cast<double>(n), 4);
    const double direct = gowers_box_average(f, 3);
    worst3 = std::max(worst3, std::abs(direct - naive) / std::max(std::abs(naive), 1e-300));
  }
  Verdict v;
  v.pass = worst2 <= 1e-9 && worst3 <= 1e-9;
  v.detail = "max relative gap U2 fft/direct " + fmt(worst2, 3) + " over 100 signals, U3 direct/naive " +
             fmt(worst3, 3) + " over 30 signals (tolerance 1e-9)";
  return runtime_gate(v, t, 60);
}

// C5: decay of ||Lambda - 1||_{U^2} over N = 2^8, 2^10, 2^12.
Verdict c5() {
  Timer t;
  std::vector<double> norms;
  std::ostringstream msg;
  for (int e : {8, 10, 12}) {
    norms.push_back(lambda_deviation_norm(std::int64_t{1} << e, 2, 1, 2));
    msg << "N=2^" << e << ": " << fmt(norms.back(), 8) << "; ";
  }
  bool slack = true;
  for (std::size_t i = 1; i < norms.size(); ++i) slack = slack && norms[i] <= 1.05 * norms[i - 1];
  Verdict v;
  v.pass = norms[2] < norms[0] && slack;
  msg << "strict drop 2^8 -> 2^12 " << (norms[2] < norms[0] ? "yes" : "no") << ", 5% step slack "
      << (slack ? "yes" : "no");
  v.detail = msg.str();
  return runtime_gate(v, t, 300);
}

// C6: local factors against exhaustive enumeration.
Verdict c6() {
  Timer t;
  const std::vector<std::string> names{"x", "m"};
  const std::vector<std::vector<const char*>> corpus{
      {"x"},          {"x + m^2"},           {"x + m^2", "x + 2*m^2"}, {"x^2 + m^2"},
      {"x*m - 1"},    {"m^3 - m"},           {"x + m", "x - m"},       {"2*x + 1", "x + m^2 + 3"},
      {"x^2 - 2"},    {"x*m", "x + m", "x^2 + m^3 + 1"}};
  int checked = 0, mismatches = 0;
  for (const auto& texts : corpus) {
    std::vector<Poly> family;
    for (const char* s : texts) family.push_back(parse_poly(s, names));
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
      std::int64_t zeros = 0;
      for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t m = 0; m < p; ++m) {
          bool all = true;
          for (const auto& q : family) all = all && q.evaluate(std::vector<BigInt>{x, m}) % p == 0;
          zeros += all;
        }
      const Rational c = local_factor(static_cast<std::uint64_t>(p), family, 2);
      mismatches += c.numerator() * p * p != zeros * c.denominator();
      ++checked;
    }
  }
  Verdict v;
  v.pass = mismatches == 0;
  v.detail = std::to_string(checked) + " (family, p) pairs, " + std::to_string(mismatches) + " mismatches";
  return runtime_gate(v, t, 60);
}

// C7: Euler-factor claims.
Verdict c7() {
  Timer t;
  const std::vector<std::string> names{"x", "m"};
  ResidueFamily f;
  f.J1 = {parse_poly("x + m^2", names)};
  f.J2 = {parse_poly("x + 2*m^2", names)};
  f.D = 2;
  ClaimOptions o;
  o.w = 3;
  o.p_min = 5;
  o.p_max = 199;
  o.log_R = 10;
  const std::uint64_t W = primorial_below(o.w);
  const ClaimReport r = check_prime_class_claims(f, W, o);

  double worst = 0;
  int manufactured = 0;
  bool all_bad = true;
  const std::vector<Complex> z(2, Complex(1.0 / o.log_R, 0));
  for (std::uint64_t p : primes_up_to(199).primes()) {
    if (p < 5) continue;
    ResidueFamily b;
    b.J1 = {parse_poly("x + m^2", names), parse_poly("x + m^2", names) + Poly::constant(BigInt(p))};
    b.D = 2;
    const PrimeClass cls = classify_prime(p, b.forms(W));
    all_bad = all_bad && cls.bad() && !cls.terrible;
    const Complex e = euler_factor_exact(p, b, W, z, z);
    const Complex m = euler_factor_model(p, z, z);
    worst = std::max(worst, static_cast<double>(p) * std::abs(e / m - 1.0));
    ++manufactured;
  }
  Verdict v;
  v.pass = r.good_ok && r.small_primes_exact && all_bad && worst <= 10;
  v.detail = "good primes " + std::to_string(r.good_count) + ", slope " + fmt(r.good_slope) +
             " (need <= -1.7); E_p == 1 exactly for p < w: " + (r.small_primes_exact ? "yes" : "no") +
             "; manufactured bad primes " + std::to_string(manufactured) + (all_bad ? " (all bad, none terrible)" : " (classification mismatch)") +
             ", max p*|E_p/E_p'-1| = " + fmt(worst) + " (need <= 10)";
  return runtime_gate(v, t, 120);
}

// C8: extra-condition estimate on the cube instance.
Verdict c8() {
  Timer t;
  const std::int64_t N = 100000;
  ParamOptions o;
  o.w = 3;
  o.b = 1;
  o.d0 = 2;
  o.eta0 = 0.15;
  o.eta1 = 0.149;
  o.eta2 = 0.148;
  const Params p = Params::make(N, o);
  const CutoffFunction chi = default_cutoff();
  const Measure nu1 = nu_W_b(p, chi);
  const Measure nu2 = sieve_nu(p.W, 1, p.R, p.N, chi);
  const CubeInstance ci = cube_instance();
  std::ostringstream msg;
  msg << "M=" << p.M << " R=" << p.R << " mean nu=" << fmt(nu1.mean()) << "; ";
  bool ok = true;
  for (int k = 0; k <= 2; ++k) {
    ExtraOptions eo;
    eo.samples = 100000;
    eo.seed = 20240 + static_cast<std::uint64_t>(k);
    eo.inner_samples = 64;
    eo.d0 = 2;
    const EstimateReport r = extra_condition_estimate(nu1, nu2, ci.Q, ci.L, k, p.M, ci.D, eo);
    const double tol = std::max(3 * r.standard_error, 0.15);
    const bool in = std::abs(r.point_estimate - 1) <= tol;
    ok = ok && in;
    msg << "k=" << k << ": " << fmt(r.point_estimate) << " +- " << fmt(r.standard_error, 3) << (in ? " ok" : " off")
        << "; ";
  }
  Verdict v;
  v.pass = ok;
  v.detail = msg.str() + "need |estimate-1| <= max(3 se, 0.15)";
  return runtime_gate(v, t, 600);
}

// C9: configuration counts against the prediction.
Verdict c9() {
  Timer t;
  const auto sys = parse_poly_system("m^2");
  const ConfigCountReport a = config_report(sys, 100000, 1000, -1);
  const ConfigCountReport b = config_report(sys, 200000, 1000, -1);
  std::uint64_t brute = 0;
  for (std::int64_t p = 2; p <= 100; ++p) {
    if (!oracle::is_prime(p)) continue;
    for (std::int64_t n = 1; n <= 1000; ++n) brute += oracle::is_prime(n + (p - 1) * (p - 1));
  }
  const std::uint64_t fast = count_configs(sys, 1000, 100, -1);
  const double drift = std::abs(b.ratio / a.ratio - 1);
  Verdict v;
  v.pass = a.ratio >= 0.6 && a.ratio <= 1.6 && drift <= 0.2 && brute == fast;
  v.detail = "ratio " + fmt(a.ratio) + " at N=1e5 (count " + std::to_string(a.count) + "), " + fmt(b.ratio) +
             " at N=2e5, variation " + fmt(100 * drift, 3) + "%; brute force at (1e3,1e2) " + std::to_string(brute) +
             " vs " + std::to_string(fast);
  return runtime_gate(v, t, 120);
}

// C10: van der Corput inequality with constant 2.
Verdict c10() {
  Timer t;
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> len(1, 256), val(-10, 10);
  int holds = 0, exact_holds = 0;
  double tightest = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int M = len(rng);
    std::vector<double> x(static_cast<std::size_t>(M));
    std::vector<std::int64_t> xi(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(xi[static_cast<std::size_t>(i)] = val(rng));
    const VanDerCorputCheck c = van_der_corput_check(x);
    holds += c.holds(2.0);
    if (c.rhs > 0) tightest = std::max(tightest, c.lhs / (2 * c.rhs));
    // integers: (S/M)^2 <= 2 C / (M (2M-1)) iff S^2 (2M-1) <= 2 C M
    std::int64_t S = 0, C = 0;
    for (auto v : xi) S += v;
    for (int h = -(M - 1); h < M; ++h)
      for (int m = 0; m < M; ++m)
        if (m + h >= 0 && m + h < M) C += xi[static_cast<std::size_t>(m)] * xi[static_cast<std::size_t>(m + h)];
    exact_holds += S * S * (2 * M - 1) <= 2 * C * M;
  }
  Verdict v;
  v.pass = holds == 200 && exact_holds == 200;
  v.detail = std::to_string(holds) + "/200 in floating point, " + std::to_string(exact_holds) +
             "/200 in exact integers, largest lhs/(2 rhs) " + fmt(tightest);
  return runtime_gate(v, t, 60);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::pair<std::string, std::function<Verdict()>>>> all{
      {"c1", {"sieve-measure normalization", c1}},
      {"c2", {"PET toy example", c2}},
      {"c3", {"PET general invariants", c3}},
      {"c4", {"Gowers oracle equivalence", c4}},
      {"c5", {"Lambda deviation decay", c5}},
      {"c6", {"local factor oracle equivalence", c6}},
      {"c7", {"Euler-factor claims", c7}},
      {"c8", {"extra-condition estimate", c8}},
      {"c9", {"configuration count vs prediction", c9}},
      {"c10", {"van der Corput inequality", c10}},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  bool any = false, failed = false;
  for (const auto& [key, entry] : all) {
    if (!only.empty() && only != key) continue;
    any = true;
    Verdict v;
    try {
      v = entry.second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << key << " " << entry.first << ": " << v.detail << std::endl;
    failed = failed || !v.pass;
  }
  if (!any) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return failed ? 1 : 0;
}
