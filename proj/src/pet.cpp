#include "petlab/pet.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <limits>
#include <span>
#include <sstream>

#include "json.hpp"
#include "petlab/errors.hpp"

namespace petlab {

namespace {

constexpr std::size_t kM = 0;

bool constant_in_m(const Poly& p) { return p.is_constant_in(kM); }

// p with its integer constant term dropped.
Poly without_constant(const Poly& p) { return p - Poly::constant(p.constant_term()); }

// Terms of p that involve m.
Poly m_part(const Poly& p) {
  Poly out;
  for (const auto& [mono, c] : p.terms())
    if (!mono.empty() && mono[0] > 0) out.add_term(mono, c);
  return out;
}

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const { return poly_less(a, b); }
};

void sort_unique(std::vector<Poly>& v) {
  std::sort(v.begin(), v.end(), PolyLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string type_string(const TypeVector& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

std::string dump(const PolyFamily& f, std::size_t vars) {
  const auto names = pet_variable_names(vars);
  std::ostringstream out;
  out << "step " << f.step << "\n  active:";
  for (const auto& p : f.active) out << "\n    " << to_string(p, names);
  out << "\n  retired:";
  for (const auto& p : f.retired) out << "\n    " << to_string(p, names);
  return out.str();
}

std::vector<Poly> non_constant(const PolyFamily& f) {
  std::vector<Poly> out;
  for (const auto& p : f.active)
    if (!constant_in_m(p)) out.push_back(p);
  return out;
}

}  // namespace

bool poly_less(const Poly& a, const Poly& b) {
  const GradedDescending order;
  auto ia = a.terms().begin(), ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (order(ia->first, ib->first)) return true;
    if (order(ib->first, ia->first)) return false;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms().end() && ib != b.terms().end();
}

void PolyFamily::normalize() {
  sort_unique(active);
  sort_unique(retired);
  constants.clear();
  for (const auto& p : active)
    if (constant_in_m(p)) constants.push_back(p);
}

TypeVector family_type(const PolyFamily& family, std::size_t length) {
  std::vector<std::set<Poly, PolyLess>> classes(length);
  for (const auto& p : family.active) {
    const int deg = p.degree_in(kM);
    if (deg <= 0) continue;
    if (static_cast<std::size_t>(deg) > length)
      throw InvalidArgument("family_type: member of degree " + std::to_string(deg) +
                            " exceeds type length " + std::to_string(length));
    classes[deg - 1].insert(p.leading_coefficient_in(kM));
  }
  TypeVector t(length);
  for (std::size_t j = 0; j < length; ++j) t[j] = static_cast<std::int64_t>(classes[j].size());
  return t;
}

bool is_zero_type(const TypeVector& t) {
  return std::all_of(t.begin(), t.end(), [](std::int64_t w) { return w == 0; });
}

bool type_less(const TypeVector& a, const TypeVector& b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t j = n; j-- > 0;) {
    const std::int64_t wa = j < a.size() ? a[j] : 0;
    const std::int64_t wb = j < b.size() ? b[j] : 0;
    if (wa != wb) return wa < wb;
  }
  return false;
}

PolyFamily vdc_operation(const PolyFamily& family, const Poly& q, std::size_t new_var) {
  if (constant_in_m(q)) throw InvalidArgument("vdc_operation: q is constant in m");
  if (std::find(family.active.begin(), family.active.end(), q) == family.active.end())
    throw InvalidArgument("vdc_operation: q is not an active member");
  PolyFamily out;
  out.step = family.step + 1;
  for (const auto& p : family.active) {
    if (constant_in_m(p)) {
      out.retired.push_back(p - q);
      continue;
    }
    out.active.push_back(shift(p, kM, new_var) - q);
    out.active.push_back(p - q);
  }
  for (const auto& p : family.retired) out.retired.push_back(p - q);
  out.normalize();
  return out;
}

namespace {

struct Choice {
  Poly q;
  PolyFamily next;
  TypeVector type_after;
};

Choice choose_and_apply(const PolyFamily& family, std::size_t length, std::size_t fresh) {
  const TypeVector before = family_type(family, length);
  if (is_zero_type(before)) throw InvalidArgument("choose_q: family has zero type");
  std::vector<Poly> candidates = non_constant(family);
  std::stable_sort(candidates.begin(), candidates.end(), [](const Poly& a, const Poly& b) {
    const int da = a.degree_in(kM), db = b.degree_in(kM);
    if (da != db) return da < db;
    return poly_less(a, b);
  });
  for (const auto& q : candidates) {
    PolyFamily next = vdc_operation(family, q, fresh);
    TypeVector after = family_type(next, length);
    if (type_less(after, before)) return {q, std::move(next), std::move(after)};
  }
  throw InternalError("choose_q: no member lowers the type " + type_string(before) + "\n" +
                      dump(family, fresh));
}

}  // namespace

Poly choose_q(const PolyFamily& family, std::size_t length) {
  std::size_t fresh = 1;
  for (const auto& p : family.active) fresh = std::max(fresh, p.num_vars());
  for (const auto& p : family.retired) fresh = std::max(fresh, p.num_vars());
  return choose_and_apply(family, length, fresh).q;
}

ClaimCheck check_claims(const PolyFamily& family) {
  ClaimCheck c;
  {
    std::set<Poly, PolyLess> seen;
    std::size_t total = 0;
    for (const auto* list : {&family.active, &family.retired}) {
      for (const auto& p : *list) {
        ++total;
        seen.insert(without_constant(p));
      }
    }
    c.c1 = seen.size() == total;
  }
  {
    std::set<Poly, PolyLess> retired_parts;
    for (const auto& p : family.retired) retired_parts.insert(m_part(p));
    for (const auto& q : family.active) {
      if (constant_in_m(q)) continue;
      if (retired_parts.count(m_part(q))) {
        c.c2 = false;
        break;
      }
    }
  }
  if (family.step >= 1)
    c.c3 = std::none_of(family.retired.begin(), family.retired.end(), constant_in_m);
  return c;
}

PetTrace pet_run(const std::vector<Poly>& system, const PetOptions& options) {
  if (system.empty()) throw InvalidArgument("pet_run: empty system");
  if (options.W < 1) throw InvalidArgument("pet_run: W must be positive");
  PetTrace trace;
  trace.input = system;
  trace.W = options.W;
  int degree = 0;
  for (const auto& p : system) {
    if (p.num_vars() > 1) throw InvalidArgument("pet_run: inputs must be polynomials in m");
    if (p.is_zero()) throw InvalidArgument("pet_run: zero polynomial in the system");
    trace.rescaled.push_back(w_rescale(p, options.W));
    degree = std::max(degree, p.degree_in(kM));
  }
  for (std::size_t i = 0; i < trace.rescaled.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (trace.rescaled[i] == trace.rescaled[j])
        throw InvalidArgument("pet_run: duplicate polynomial " + to_string(system[i]));
  const int max_degree = options.max_total_degree > 0 ? options.max_total_degree : degree;
  const auto length = static_cast<std::size_t>(degree);

  BigInt input_coeff = 0;
  for (const auto& p : trace.rescaled) input_coeff = std::max(input_coeff, p.max_abs_coefficient());
  BigInt seen_coeff = input_coeff;

  PolyFamily family;
  family.active = trace.rescaled;
  family.normalize();
  trace.initial = family;
  trace.initial_type = family_type(family, length);
  trace.max_family_size = family.active.size();
  {
    const ClaimCheck c0 = check_claims(family);
    if (!c0.all()) throw InternalError("pet_run: claims fail on the input\n" + dump(family, 1));
  }

  TypeVector type = trace.initial_type;
  while (!is_zero_type(type)) {
    const int s = family.step + 1;
    if (s > options.max_steps)
      throw ResourceError("pet_run: exceeded " + std::to_string(options.max_steps) + " steps");
    const auto new_var = static_cast<std::size_t>(s);
    Choice choice = choose_and_apply(family, length, new_var);
    const Poly& q = choice.q;
    PolyFamily next = std::move(choice.next);
    const TypeVector after = choice.type_after;
    if (!type_less(after, type))
      throw InternalError("pet_run: type did not decrease at step " + std::to_string(s) + ": " +
                          type_string(type) + " -> " + type_string(after));
    const std::size_t size = next.active.size() + next.retired.size();
    if (size > options.max_family)
      throw ResourceError("pet_run: family size " + std::to_string(size) + " at step " +
                          std::to_string(s) + " exceeds the cap " +
                          std::to_string(options.max_family));
    for (const auto* list : {&next.active, &next.retired}) {
      for (const auto& p : *list) {
        if (p.total_degree() > max_degree)
          throw ResourceError("pet_run: total degree " + std::to_string(p.total_degree()) +
                              " exceeds " + std::to_string(max_degree));
        seen_coeff = std::max(seen_coeff, p.max_abs_coefficient());
      }
    }
    const ClaimCheck claims = check_claims(next);
    if (!claims.all())
      throw InternalError("pet_run: claim " +
                          std::string(!claims.c1 ? "1" : !claims.c2 ? "2" : "3") +
                          " fails at step " + std::to_string(s) + "\n" + dump(next, s + 1));

    PetStep step;
    step.s = s;
    step.q = q;
    step.new_var = pet_variable_name(new_var);
    step.active_size = next.active.size();
    step.constants_size = next.constants.size();
    step.retired_size = next.retired.size();
    step.type_before = type;
    step.type_after = after;
    step.claims = claims;
    if (options.record_families) step.family = next;
    trace.steps.push_back(std::move(step));
    trace.max_family_size = std::max(trace.max_family_size, size);

    family = std::move(next);
    type = after;
  }
  trace.t = family.step;
  trace.d = trace.t + 1;
  trace.group_multiplier = 2 * trace.d + 1;
  trace.coefficient_growth =
      input_coeff > 0 ? static_cast<double>(seen_coeff) / static_cast<double>(input_coeff) : 1.0;
  return trace;
}

namespace {

nlohmann::ordered_json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

nlohmann::ordered_json poly_list(const std::vector<Poly>& v, std::span<const std::string> names) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : v) arr.push_back(to_string(p, names));
  return arr;
}

}  // namespace

std::string pet_trace_json(const PetTrace& trace, int indent) {
  using nlohmann::ordered_json;
  const auto names = pet_variable_names(static_cast<std::size_t>(trace.t) + 1);
  ordered_json j;
  j["input"] = poly_list(trace.input, names);
  j["W"] = bigint_json(trace.W);
  j["rescaled"] = poly_list(trace.rescaled, names);
  j["initial_type"] = trace.initial_type;
  auto steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json o;
    o["s"] = s.s;
    o["q"] = to_string(s.q, names);
    o["new_var"] = s.new_var;
    if (!s.family.active.empty() || s.active_size == 0) {
      o["active"] = poly_list(s.family.active, names);
      o["constants"] = poly_list(s.family.constants, names);
      o["retired"] = poly_list(s.family.retired, names);
    } else {
      o["active_size"] = s.active_size;
      o["constants_size"] = s.constants_size;
      o["retired_size"] = s.retired_size;
    }
    o["type_before"] = s.type_before;
    o["type_after"] = s.type_after;
    o["claims"] = {{"c1", s.claims.c1}, {"c2", s.claims.c2}, {"c3", s.claims.c3}};
    steps.push_back(std::move(o));
  }
  j["steps"] = std::move(steps);
  j["t"] = trace.t;
  j["d"] = trace.d;
  j["group_multiplier"] = trace.group_multiplier;
  j["coefficient_growth"] = trace.coefficient_growth;
  j["max_family_size"] = trace.max_family_size;
  return j.dump(indent);
}

}  // namespace petlab
