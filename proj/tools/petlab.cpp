#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "petlab/arith.hpp"
#include "petlab/configs.hpp"
#include "petlab/correlation.hpp"
#include "petlab/errors.hpp"
#include "petlab/gowers.hpp"
#include "petlab/measure.hpp"
#include "petlab/measure_io.hpp"
#include "petlab/parallel.hpp"
#include "petlab/pet.hpp"
#include "petlab/poly.hpp"

using json = nlohmann::ordered_json;
using namespace petlab;

namespace {

struct Output {
  json result = json::object();
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

struct Global {
  std::string format = "json";
  std::string output;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
};

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

void round_floats(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_floats(v);
  }
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    const auto a = cur.find_first_not_of(" \t");
    const auto b = cur.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

std::vector<Poly> parse_list(const std::string& text, const std::vector<std::string>& names) {
  std::vector<Poly> out;
  for (const auto& part : split(text, ';')) out.push_back(parse_poly(part, names));
  if (out.empty()) throw InvalidArgument("empty polynomial list");
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw InvalidArgument("range must be lo:hi, got '" + text + "'");
  try {
    return {std::stoll(parts[0]), std::stoll(parts[1])};
  } catch (const std::exception&) {
    throw InvalidArgument("range must be lo:hi, got '" + text + "'");
  }
}

json poly_strings(const std::vector<Poly>& ps, std::span<const std::string> names) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(to_string(p, names));
  return a;
}

json estimate_json(const EstimateReport& r) {
  return json{{"point_estimate", r.point_estimate}, {"standard_error", r.standard_error},
              {"samples", r.samples},               {"seed", r.seed},
              {"k", r.k},                           {"inner_samples", r.inner_samples},
              {"bias_bound", r.bias_bound},         {"naive_square_bias", r.naive_square_bias}};
}

CutoffFunction cutoff_named(const std::string& name) {
  if (name == "cosine") return default_cutoff();
  if (name == "bump") return smooth_bump_cutoff();
  throw InvalidArgument("unknown cutoff '" + name + "'");
}

// Sieve-scale options shared by the measure-building subcommands.
struct ScaleOpts {
  std::int64_t N = 100000;
  std::uint64_t w = 3;
  std::uint64_t b = 1;
  int d0 = 1;
  std::optional<double> eta0, eta1, eta2;
  std::optional<std::int64_t> R;
  std::string cutoff = "cosine";

  void add(CLI::App* sub, bool need_N) {
    auto* n = sub->add_option("--N", N, "range [1,N]");
    if (need_N) n->required();
    sub->add_option("--w", w, "W is the product of primes below w")->capture_default_str();
    sub->add_option("--b", b, "residue class b mod W")->capture_default_str();
    sub->add_option("--d0", d0, "degree bound d0")->capture_default_str();
    sub->add_option("--eta0", eta0);
    sub->add_option("--eta1", eta1);
    sub->add_option("--eta2", eta2);
    sub->add_option("--R", R, "sieve level, overriding eta2");
    sub->add_option("--cutoff", cutoff, "cosine | bump")->capture_default_str();
  }

  ParamOptions param_options() const {
    ParamOptions o;
    o.w = w;
    o.b = b;
    o.d0 = d0;
    o.eta0 = eta0;
    o.eta1 = eta1;
    o.eta2 = eta2;
    return o;
  }

  std::uint64_t W() const { return primorial_below(w); }

  std::int64_t sieve_level() const {
    if (R) {
      if (*R < 2) throw InvalidArgument("--R must be at least 2");
      return *R;
    }
    return Params::make(N, param_options()).R;
  }

  Measure nu(std::uint64_t residue) const {
    return sieve_nu(W(), residue, sieve_level(), N, cutoff_named(cutoff));
  }
};

Output run_sieve_measure(const ScaleOpts& s, const std::string& which, bool table, const std::string& save) {
  Measure m;
  std::int64_t R = 0, M = 0;
  if (which == "lambda") {
    const Params p = Params::make(s.N, s.param_options());
    m = lambda_W_b(p);
    R = p.R;
    M = p.M;
  } else if (which == "nu") {
    R = s.sieve_level();
    if (!s.R) M = Params::make(s.N, s.param_options()).M;
    m = s.nu(s.b);
  } else {
    throw InvalidArgument("--measure must be lambda or nu");
  }
  if (!save.empty()) save_measure(save, m);
  Output o;
  o.result = json{{"measure", which}, {"N", s.N},     {"W", s.W()},
                  {"b", s.b},         {"R", R},       {"M", M},
                  {"modulus", m.modulus},             {"mean", m.mean()},
                  {"min", m.values.minCoeff()},       {"max", m.values.maxCoeff()}};
  if (table) {
    json values = json::array();
    o.header = {"n", "value"};
    for (std::int64_t n = 1; n <= m.size(); ++n) {
      values.push_back(m.at(n));
      o.rows.push_back({n, m.at(n)});
    }
    o.result["values"] = values;
  } else {
    o.header = {"measure", "N", "W", "b", "R", "M", "mean", "min", "max"};
    std::vector<json> row;
    for (const auto& key : o.header) row.push_back(o.result[key]);
    o.rows.push_back(row);
  }
  return o;
}

Output run_gowers(const std::string& input, std::optional<double> constant, std::optional<std::int64_t> modulus,
                  int d, const std::string& method, std::optional<int> embed_d) {
  CyclicSignal<double> f;
  if (constant) {
    if (!input.empty()) throw InvalidArgument("give either --input or --constant");
    if (!modulus || *modulus < 1) throw InvalidArgument("--constant needs a positive --modulus");
    f = CyclicSignal<double>::Constant(*modulus, *constant);
  } else {
    if (input.empty()) throw InvalidArgument("give --input or --constant");
    const Measure m = load_measure(input);
    if (embed_d) {
      f = embed_supported(m, *embed_d);
    } else {
      const std::int64_t n = modulus ? *modulus : (m.modulus > 0 ? m.modulus : m.size());
      if (n < m.size()) throw InvalidArgument("--modulus is smaller than the signal length");
      f = CyclicSignal<double>::Zero(n);
      for (std::int64_t i = 1; i <= m.size(); ++i) f(i % n) = m.at(i);
    }
  }
  std::string used = method;
  if (used == "auto") used = d == 2 ? "fft" : "direct";
  double norm = 0;
  if (used == "fft") {
    if (d != 2) throw InvalidArgument("--method fft needs --d 2");
    norm = gowers_u2_fft(f);
  } else if (used == "direct") {
    norm = gowers_norm(f, d);
  } else {
    throw InvalidArgument("--method must be auto, direct or fft");
  }
  Output o;
  o.result = json{{"modulus", f.size()}, {"d", d}, {"method", used}, {"norm", norm},
                  {"box_average", std::pow(norm, static_cast<double>(1 << d))}};
  o.header = {"modulus", "d", "method", "norm", "box_average"};
  o.rows.push_back({o.result["modulus"], d, used, o.result["norm"], o.result["box_average"]});
  return o;
}

Output run_lambda_decay(const std::string& grid, std::uint64_t w, std::uint64_t b, int d, double max_ops) {
  const std::uint64_t W = primorial_below(w);
  DeviationNormOptions opts;
  opts.max_operations = max_ops;
  Output o;
  o.header = {"N", "modulus", "norm"};
  json rows = json::array();
  double prev = -1;
  bool non_increasing = true;
  for (const auto& item : split(grid, ',')) {
    std::int64_t N = 0;
    try {
      N = std::stoll(item);
    } catch (const std::exception&) {
      throw InvalidArgument("bad --N-grid entry '" + item + "'");
    }
    const double norm = lambda_deviation_norm(N, W, b, d, opts);
    if (prev >= 0 && norm > prev) non_increasing = false;
    prev = norm;
    const std::int64_t modulus = (2 * d + 1) * N;
    rows.push_back(json{{"N", N}, {"modulus", modulus}, {"norm", norm}});
    o.rows.push_back({N, modulus, norm});
  }
  o.result = json{{"W", W}, {"b", b}, {"d", d}, {"rows", rows}, {"non_increasing", non_increasing}};
  return o;
}

Output run_pet(const std::string& polys, const std::string& W, int max_steps, std::size_t max_family,
               bool no_families) {
  PetOptions opts;
  try {
    opts.W = BigInt(W);
  } catch (const std::exception&) {
    throw InvalidArgument("--W must be an integer");
  }
  if (opts.W < 1) throw InvalidArgument("--W must be positive");
  opts.max_steps = max_steps;
  opts.max_family = max_family;
  opts.record_families = !no_families;
  const PetTrace trace = pet_run(parse_poly_system(polys), opts);
  Output o;
  o.result = json::parse(pet_trace_json(trace, -1));
  o.header = {"s", "q", "new_var", "active", "constants", "retired", "type_before", "type_after", "c1", "c2", "c3"};
  auto type_str = [](const TypeVector& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
    return s;
  };
  for (const auto& st : trace.steps)
    o.rows.push_back({st.s, to_string(st.q), st.new_var, st.active_size, st.constants_size, st.retired_size,
                      type_str(st.type_before), type_str(st.type_after), st.claims.c1, st.claims.c2,
                      st.claims.c3});
  return o;
}

Output run_local_factors(const std::string& polys, const std::string& vars, std::uint64_t p_min,
                         std::uint64_t p_max) {
  const auto names = split(vars, ',');
  if (names.empty()) throw InvalidArgument("--vars is empty");
  const auto family = parse_list(polys, names);
  if (p_max < 2 || p_min > p_max) throw InvalidArgument("need 2 <= p-min <= p-max");
  Output o;
  o.header = {"p", "class", "c_p", "value"};
  json rows = json::array();
  for (std::uint64_t p : primes_up_to(p_max).primes()) {
    if (p < p_min) continue;
    const Rational c = local_factor(p, family, names.size());
    const std::string cls = classify_prime(p, family).name();
    const std::string frac = std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
    const double value = static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
    rows.push_back(json{{"p", p}, {"class", cls}, {"c_p", frac}, {"value", value}});
    o.rows.push_back({p, cls, frac, value});
  }
  o.result = json{{"family", poly_strings(family, names)}, {"vars", names}, {"rows", rows}};
  return o;
}

Output run_euler_check(const std::string& J1, const std::string& J2, const std::string& vars, std::uint64_t b1,
                       std::uint64_t b2, std::uint64_t w, const std::string& p_range, double z_real,
                       int z_imag_samples, double xi_scale, std::uint64_t seed) {
  const auto names = split(vars, ',');
  ResidueFamily fam;
  fam.J1 = parse_list(J1, names);
  if (!J2.empty()) fam.J2 = parse_list(J2, names);
  fam.b1 = b1;
  fam.b2 = b2;
  fam.D = names.size();
  if (!(z_real > 0)) throw InvalidArgument("--z-real must be positive");
  const auto [lo, hi] = parse_range(p_range);
  if (lo < 2 || hi < lo) throw InvalidArgument("--p-range must satisfy 2 <= lo <= hi");
  ClaimOptions opts;
  opts.w = w;
  opts.p_min = static_cast<std::uint64_t>(lo);
  opts.p_max = static_cast<std::uint64_t>(hi);
  opts.log_R = 1.0 / z_real;
  opts.z_imag_samples = z_imag_samples;
  opts.xi_scale = xi_scale;
  opts.seed = seed;
  const std::uint64_t W = primorial_below(w);
  const ClaimReport r = check_prime_class_claims(fam, W, opts);
  Output o;
  o.header = {"p", "class", "deviation", "exact_one"};
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"p", row.p}, {"class", row.cls.name()}, {"deviation", row.deviation},
                        {"exact_one", row.exact_one}});
    o.rows.push_back({row.p, row.cls.name(), row.deviation, row.exact_one});
  }
  o.result = json{{"W", W},
                  {"J1", poly_strings(fam.J1, names)},
                  {"J2", poly_strings(fam.J2, names)},
                  {"z_lines", r.z_lines.size()},
                  {"small_primes_exact", r.small_primes_exact},
                  {"small_primes_product", r.small_primes_product},
                  {"small_primes_target", r.small_primes_target},
                  {"small_primes_in_band", r.small_primes_in_band},
                  {"good_count", r.good_count},
                  {"good_slope", r.good_slope},
                  {"good_ok", r.good_ok},
                  {"bad_count", r.bad_count},
                  {"bad_constant", r.bad_constant},
                  {"bad_ok", r.bad_ok},
                  {"terrible_count", r.terrible_count},
                  {"rows", rows}};
  return o;
}

Output estimate_output(const EstimateReport& r, json extra) {
  Output o;
  o.result = std::move(extra);
  const json est = estimate_json(r);
  for (const auto& [k, v] : est.items()) o.result[k] = v;
  o.header = {"k", "samples", "seed", "point_estimate", "standard_error", "naive_square_bias"};
  o.rows.push_back({r.k, r.samples, r.seed, r.point_estimate, r.standard_error, r.naive_square_bias});
  return o;
}

Output run_forms_check(const ScaleOpts& s, const std::string& measure_file, const std::string& polys,
                       const std::string& vars, const std::string& box_text, std::uint64_t samples,
                       std::uint64_t seed) {
  const auto names = split(vars, ',');
  const auto Q = parse_list(polys, names);
  Box box;
  for (const auto& part : split(box_text, ',')) box.push_back(parse_range(part));
  if (box.size() != names.size()) throw InvalidArgument("--box needs one lo:hi per variable");
  const Measure nu = measure_file.empty() ? s.nu(s.b) : load_measure(measure_file);
  FormsOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  const auto r = forms_condition_estimate(nu, Q, box, opts);
  return estimate_output(r, json{{"Q", poly_strings(Q, names)}, {"modulus", nu.modulus}, {"nu_mean", nu.mean()}});
}

Output run_extra_check(const ScaleOpts& s, std::optional<std::int64_t> M_opt, int k, std::uint64_t samples,
                       std::uint64_t seed, int inner, const std::string& Q_text, const std::string& L_text,
                       const std::string& vars) {
  std::vector<Poly> Q;
  std::vector<LinearForm> L;
  std::vector<std::string> names;
  if (Q_text.empty() && L_text.empty()) {
    const CubeInstance ci = cube_instance();
    Q = ci.Q;
    L = ci.L;
    names = {"m", "h", "k", "l"};
  } else {
    names = split(vars, ',');
    Q = parse_list(Q_text, names);
    for (const auto& form : split(L_text, ';')) {
      LinearForm f;
      for (const auto& c : split(form, ',')) f.push_back(c == "1" ? 1 : c == "0" ? 0 : -1);
      for (int c : f)
        if (c < 0) throw InvalidArgument("linear form coefficients must be 0 or 1");
      L.push_back(f);
    }
  }
  const std::int64_t M = M_opt ? *M_opt : floor_power(s.N, 0.15);
  const Measure nu1 = s.nu(s.b);
  const Measure nu2 = s.nu(1);
  ExtraOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  opts.inner_samples = inner;
  const auto r = extra_condition_estimate(nu1, nu2, Q, L, k, M, names.size(), opts);
  return estimate_output(r, json{{"N", s.N},
                                 {"M", M},
                                 {"R", s.sieve_level()},
                                 {"Q", poly_strings(Q, names)},
                                 {"forms", L.size()},
                                 {"nu1_mean", nu1.mean()},
                                 {"nu2_mean", nu2.mean()}});
}

Output run_count_configs(const std::string& polys, std::int64_t N, std::int64_t M, int shift,
                         const std::string& dense_file) {
  const auto system = parse_poly_system(polys);
  std::uint64_t count = 0;
  if (dense_file.empty()) {
    count = count_configs(system, N, M, shift);
  } else {
    std::ifstream in(dense_file);
    if (!in) throw InvalidArgument("cannot open " + dense_file);
    std::unordered_set<std::int64_t> A;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        A.insert(std::stoll(line));
      } catch (const std::exception&) {
        throw InvalidArgument(dense_file + ":" + std::to_string(lineno) + ": not an integer");
      }
    }
    count = count_configs_dense([&](std::int64_t v) { return A.count(v) > 0; }, system, N, M, shift);
  }
  Output o;
  o.result = json{{"polys", poly_strings(system, pet_variable_names(1))},
                  {"N", N},
                  {"M", M},
                  {"shift", shift},
                  {"dense_set", dense_file.empty() ? json(nullptr) : json(dense_file)},
                  {"count", count}};
  o.header = {"N", "M", "shift", "count"};
  o.rows.push_back({N, M, shift, count});
  return o;
}

Output run_predict(const std::string& polys, std::int64_t N, std::int64_t M, int shift, std::uint64_t T) {
  const auto system = parse_poly_system(polys);
  const auto r = config_report(system, N, M, shift, T);
  Output o;
  o.result = json{{"polys", poly_strings(system, pet_variable_names(1))},
                  {"N", N},
                  {"M", M},
                  {"shift", shift},
                  {"count", r.count},
                  {"predicted", r.prediction.predicted},
                  {"singular_series", r.prediction.singular_series},
                  {"truncation_prime", r.prediction.truncation_prime},
                  {"blocking_prime", r.prediction.blocking_prime},
                  {"prime_count", r.prediction.prime_count},
                  {"ratio", r.ratio},
                  {"normalized_log_N", r.normalized_log_N},
                  {"normalized_log_M", r.normalized_log_M}};
  for (const auto& [k, v] : o.result.items())
    if (k != "polys") o.header.push_back(k);
  std::vector<json> row;
  for (const auto& key : o.header) row.push_back(o.result[key]);
  o.rows.push_back(row);
  return o;
}

json collect_config(const CLI::App& sub, const Global& g, unsigned threads) {
  json opts = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0)
        opts[name] = true;
      else if (res.size() == 1)
        opts[name] = res.front();
      else
        opts[name] = res;
    } else if (!opt->get_default_str().empty()) {
      opts[name] = opt->get_default_str();
    }
  }
  json c{{"subcommand", sub.get_name()}, {"options", opts}};
  c["seed"] = g.seed ? json(*g.seed) : json(nullptr);
  c["output_format"] = g.format;
  c["output_path"] = g.output.empty() ? json(nullptr) : json(g.output);
  c["thread_count"] = threads;
  c["deterministic"] = g.deterministic;
  if (!g.deterministic) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    c["timestamp"] = buf;
  }
  return c;
}

void emit(std::ostream& out, json config, Output o, const std::string& format) {
  round_floats(config);
  round_floats(o.result);
  if (format == "json") {
    json doc{{"config", config}, {"result", o.result}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# config " << config.dump() << '\n';
  for (std::size_t i = 0; i < o.header.size(); ++i) out << (i ? "," : "") << o.header[i];
  out << '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"petlab: sieve measures, Gowers norms, PET traces, local factors and prime configurations"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--output,-o", g.output, "output file (default stdout)");
  app.add_option("--threads", g.threads, "worker cap (default PETLAB_THREADS, else all cores)");
  app.add_option("--seed", g.seed, "64-bit seed for randomized subcommands");
  app.add_flag("--deterministic", g.deterministic, "require --seed and omit the timestamp");

  ScaleOpts scale;

  auto* sieve = app.add_subcommand("sieve-measure", "tabulate Lambda_{W,b;N} or nu_{W,b}");
  scale.add(sieve, true);
  std::string which = "nu", save;
  bool table = false;
  sieve->add_option("--measure", which, "lambda | nu")->capture_default_str();
  sieve->add_flag("--table", table, "emit the full table");
  sieve->add_option("--save", save, "write the measure to a .csv or .bin file");

  auto* gow = app.add_subcommand("gowers", "U^d norm of a signal");
  std::string input, method = "auto";
  std::optional<double> constant;
  std::optional<std::int64_t> modulus;
  std::optional<int> embed_d;
  int d = 2;
  gow->add_option("--input", input, "measure file (.csv or .bin)");
  gow->add_option("--constant", constant, "constant signal value");
  gow->add_option("--modulus", modulus, "cyclic group size");
  gow->add_option("--d", d, "order d")->capture_default_str();
  gow->add_option("--method", method, "auto | direct | fft")->capture_default_str();
  gow->add_option("--embed-d", embed_d, "embed an [M]-supported signal into Z_{(2e+1)M}");

  auto* decay = app.add_subcommand("lambda-decay", "||Lambda_{W,b;N} - 1_[N]||_{U^d} over an N grid");
  std::string grid = "256,1024,4096";
  std::uint64_t decay_w = 3, decay_b = 1;
  int decay_d = 2;
  double max_ops = 2e10;
  decay->add_option("--N-grid", grid, "comma-separated N values")->capture_default_str();
  decay->add_option("--w", decay_w)->capture_default_str();
  decay->add_option("--b", decay_b)->capture_default_str();
  decay->add_option("--d", decay_d)->capture_default_str();
  decay->add_option("--max-ops", max_ops, "budget for direct sums")->capture_default_str();

  auto* pet = app.add_subcommand("pet", "PET induction trace");
  std::string polys, W_text = "1";
  int max_steps = 10000;
  std::size_t max_family = 1u << 16;
  bool no_families = false;
  pet->add_option("--polys", polys, "';'-separated polynomials in m")->required();
  pet->add_option("--W", W_text, "rescale P(Wm)/W")->capture_default_str();
  pet->add_option("--max-steps", max_steps)->capture_default_str();
  pet->add_option("--max-family", max_family)->capture_default_str();
  pet->add_flag("--no-families", no_families, "omit the family lists from the trace");

  auto* local = app.add_subcommand("local-factors", "c_p table");
  std::string vars = "x,m";
  std::uint64_t p_min = 2, p_max = 13;
  local->add_option("--polys", polys, "';'-separated family")->required();
  local->add_option("--vars", vars, "comma-separated variable names")->capture_default_str();
  local->add_option("--p-min", p_min)->capture_default_str();
  local->add_option("--p-max", p_max)->capture_default_str();

  auto* euler = app.add_subcommand("euler-check", "prime-class claim report for E_p against E_p'");
  std::string J1, J2, p_range = "5:199";
  std::uint64_t b1 = 1, b2 = 1, euler_w = 3;
  double z_real = 0.1, xi_scale = 5.0;
  int z_imag = 0;
  euler->add_option("--J1", J1, "members W P + b1")->required();
  euler->add_option("--J2", J2, "members W P + b2");
  euler->add_option("--vars", vars)->capture_default_str();
  euler->add_option("--b1", b1)->capture_default_str();
  euler->add_option("--b2", b2)->capture_default_str();
  euler->add_option("--w", euler_w)->capture_default_str();
  euler->add_option("--p-range", p_range, "lo:hi")->capture_default_str();
  euler->add_option("--z-real", z_real, "Re z = 1/log R")->capture_default_str();
  euler->add_option("--z-imag-samples", z_imag, "extra random z lines")->capture_default_str();
  euler->add_option("--xi-scale", xi_scale)->capture_default_str();

  auto* forms = app.add_subcommand("forms-check", "polynomial forms estimate for nu");
  std::string measure_file, box_text, forms_vars = "h1";
  std::uint64_t samples = 100000;
  scale.add(forms, false);
  forms->add_option("--measure-file", measure_file, "use a saved measure instead of nu");
  forms->add_option("--polys", polys, "';'-separated Q_j")->required();
  forms->add_option("--vars", forms_vars)->capture_default_str();
  forms->add_option("--box", box_text, "lo:hi per variable, comma-separated")->required();
  forms->add_option("--samples", samples)->capture_default_str();

  auto* extra = app.add_subcommand("extra-check", "extra-condition estimate");
  std::optional<std::int64_t> extra_M;
  int k = 0, inner = 64;
  std::string Q_text, L_text, extra_vars = "m,h,k,l";
  scale.add(extra, false);
  extra->add_option("--M", extra_M, "outer scale (default floor(N^0.15))");
  extra->add_option("--k", k)->capture_default_str();
  extra->add_option("--samples", samples)->capture_default_str();
  extra->add_option("--inner", inner, "inner samples per outer sample")->capture_default_str();
  extra->add_option("--Q", Q_text, "shift polynomials (default: cube instance)");
  extra->add_option("--L", L_text, "0/1 forms, ';'-separated, comma-separated coefficients");
  extra->add_option("--vars", extra_vars)->capture_default_str();

  auto* count = app.add_subcommand("count-configs", "count (n, p) prime configurations");
  std::int64_t N = 0, M = 0;
  int shift = -1;
  std::string dense;
  for (auto* sub : {count}) {
    sub->add_option("--polys", polys)->required();
    sub->add_option("--N", N)->required();
    sub->add_option("--M", M)->required();
    sub->add_option("--shift", shift)->check(CLI::IsMember({-1, 1}))->capture_default_str();
  }
  count->add_option("--dense-set", dense, "newline-delimited integers");

  auto* predict = app.add_subcommand("predict", "count against the Bateman-Horn prediction");
  std::uint64_t truncation = 10000;
  predict->add_option("--polys", polys)->required();
  predict->add_option("--N", N)->required();
  predict->add_option("--M", M)->required();
  predict->add_option("--shift", shift)->check(CLI::IsMember({-1, 1}))->capture_default_str();
  predict->add_option("--truncation", truncation, "largest prime in the singular series")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    unsigned threads = g.threads;
    if (threads == 0)
      if (const char* env = std::getenv("PETLAB_THREADS")) threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    parallel::set_max_threads(threads);
    threads = parallel::max_threads();

    const CLI::App* sub = app.get_subcommands().front();
    const bool randomized = sub == forms || sub == extra || (sub == euler && z_imag > 0);
    if (randomized && !g.seed) {
      if (g.deterministic) throw InvalidArgument(sub->get_name() + " is randomized; --deterministic needs --seed");
      g.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    }
    const std::uint64_t seed = g.seed.value_or(0);
    const json config = collect_config(*sub, g, threads);

    Output o;
    if (sub == sieve) o = run_sieve_measure(scale, which, table, save);
    else if (sub == gow) o = run_gowers(input, constant, modulus, d, method, embed_d);
    else if (sub == decay) o = run_lambda_decay(grid, decay_w, decay_b, decay_d, max_ops);
    else if (sub == pet) o = run_pet(polys, W_text, max_steps, max_family, no_families);
    else if (sub == local) o = run_local_factors(polys, vars, p_min, p_max);
    else if (sub == euler)
      o = run_euler_check(J1, J2, vars, b1, b2, euler_w, p_range, z_real, z_imag, xi_scale, seed);
    else if (sub == forms) o = run_forms_check(scale, measure_file, polys, forms_vars, box_text, samples, seed);
    else if (sub == extra)
      o = run_extra_check(scale, extra_M, k, samples, seed, inner, Q_text, L_text, extra_vars);
    else if (sub == count) o = run_count_configs(polys, N, M, shift, dense);
    else o = run_predict(polys, N, M, shift, truncation);

    if (g.output.empty()) {
      emit(std::cout, config, std::move(o), g.format);
    } else {
      std::ofstream out(g.output, std::ios::binary);
      if (!out) throw InvalidArgument("cannot write " + g.output);
      emit(out, config, std::move(o), g.format);
    }
    return 0;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateInput& e) {
    std::cerr << "degenerate input: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
