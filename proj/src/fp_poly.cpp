#include "petlab/fp_poly.hpp"

#include <algorithm>

#include "petlab/errors.hpp"

namespace petlab {

namespace {

std::uint16_t exponent(const Monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

// Content in var: gcd of the coefficients of the powers of var.
FpPoly content(const FpPoly& a, std::size_t var) {
  FpPoly g(a.prime());
  const int deg = a.degree_in(var);
  for (int k = 0; k <= deg; ++k) {
    const FpPoly c = a.coefficient_in(var, static_cast<unsigned>(k));
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd(g, c);
    if (g.is_constant()) return FpPoly::constant(a.prime(), 1);
  }
  return g;
}

FpPoly divide_or_throw(const FpPoly& a, const FpPoly& b) {
  auto q = exact_divide(a, b);
  if (!q) throw InternalError("fp gcd: content division was not exact");
  return *q;
}

FpPoly primitive_part(const FpPoly& a, std::size_t var) {
  if (a.is_zero()) return a;
  return divide_or_throw(a, content(a, var));
}

// lc(b)^(da-db+1) a mod b in var.
FpPoly pseudo_remainder(FpPoly r, const FpPoly& b, std::size_t var) {
  const int db = b.degree_in(var);
  const FpPoly lb = b.leading_coefficient_in(var);
  while (!r.is_zero() && r.degree_in(var) >= db) {
    const int dr = r.degree_in(var);
    const FpPoly lr = r.leading_coefficient_in(var);
    r = lb * r - (lr * b).times_power(var, static_cast<unsigned>(dr - db));
  }
  return r;
}

}  // namespace

std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw InvalidArgument("inverse_mod_prime: zero has no inverse");
  std::uint64_t result = 1, base = a, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

FpPoly FpPoly::constant(std::uint64_t p, std::uint64_t c) {
  FpPoly out(p);
  out.add_term({}, c % p);
  return out;
}

FpPoly FpPoly::reduce(const Poly& q, std::uint64_t p) {
  if (p < 2 || p >= (1ull << 32)) throw InvalidArgument("FpPoly: prime out of range");
  FpPoly out(p);
  for (const auto& [m, c] : q.terms()) {
    BigInt r = c % p;
    if (r < 0) r += p;
    out.add_term(m, static_cast<std::uint64_t>(r));
  }
  return out;
}

int FpPoly::max_var() const {
  int v = -1;
  for (const auto& [m, c] : terms_) v = std::max(v, static_cast<int>(m.size()) - 1);
  return v;
}

int FpPoly::degree_in(std::size_t var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, exponent(m, var));
  return d;
}

FpPoly FpPoly::coefficient_in(std::size_t var, unsigned k) const {
  FpPoly out(p_);
  for (const auto& [m, c] : terms_) {
    if (exponent(m, var) != k) continue;
    Monomial r = m;
    if (var < r.size()) r[var] = 0;
    out.add_term(std::move(r), c);
  }
  return out;
}

FpPoly FpPoly::leading_coefficient_in(std::size_t var) const {
  const int d = degree_in(var);
  return d < 0 ? FpPoly(p_) : coefficient_in(var, static_cast<unsigned>(d));
}

void FpPoly::add_term(Monomial m, std::uint64_t c) {
  c %= p_;
  if (c == 0) return;
  trim(m);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
    return;
  }
  it->second = (it->second + c) % p_;
  if (it->second == 0) terms_.erase(it);
}

FpPoly& FpPoly::operator+=(const FpPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, p_ - c);
  return *this;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  FpPoly out(a.p_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = exponent(ma, i) + exponent(mb, i);
      out.add_term(std::move(m), ca * cb % a.p_);
    }
  }
  return out;
}

FpPoly FpPoly::times_power(std::size_t var, unsigned k) const {
  FpPoly out(p_);
  for (const auto& [m, c] : terms_) {
    Monomial r = m;
    if (r.size() <= var) r.resize(var + 1, 0);
    r[var] = static_cast<std::uint16_t>(r[var] + k);
    out.add_term(std::move(r), c);
  }
  return out;
}

FpPoly FpPoly::scaled(std::uint64_t c) const {
  FpPoly out(p_);
  for (const auto& [m, v] : terms_) out.add_term(m, v * (c % p_) % p_);
  return out;
}

std::uint64_t FpPoly::evaluate(std::span<const std::uint64_t> point) const {
  std::uint64_t total = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t v = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (unsigned e = 0; e < m[i]; ++e) v = v * point[i] % p_;
    total = (total + v) % p_;
  }
  return total;
}

std::optional<FpPoly> exact_divide(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw InvalidArgument("exact_divide: division by zero");
  const std::uint64_t p = a.prime();
  if (a.is_zero()) return FpPoly(p);
  const int v = std::max(a.max_var(), b.max_var());
  if (v < 0) return a.scaled(inverse_mod_prime(b.terms().begin()->second, p));
  const auto var = static_cast<std::size_t>(v);
  if (b.degree_in(var) == 0) {
    FpPoly q(p);
    const int da = a.degree_in(var);
    for (int k = 0; k <= da; ++k) {
      const FpPoly c = a.coefficient_in(var, static_cast<unsigned>(k));
      if (c.is_zero()) continue;
      auto part = exact_divide(c, b);
      if (!part) return std::nullopt;
      q += part->times_power(var, static_cast<unsigned>(k));
    }
    return q;
  }
  const int db = b.degree_in(var);
  const FpPoly lb = b.leading_coefficient_in(var);
  FpPoly q(p), r = a;
  while (!r.is_zero() && r.degree_in(var) >= db) {
    const int dr = r.degree_in(var);
    auto t = exact_divide(r.leading_coefficient_in(var), lb);
    if (!t) return std::nullopt;
    const FpPoly term = t->times_power(var, static_cast<unsigned>(dr - db));
    q += term;
    r -= term * b;
  }
  if (!r.is_zero()) return std::nullopt;
  return q;
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  const std::uint64_t p = a.prime();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int v = std::max(a.max_var(), b.max_var());
  if (v < 0) return FpPoly::constant(p, 1);
  const auto var = static_cast<std::size_t>(v);
  if (a.degree_in(var) == 0) return gcd(a, content(b, var));
  if (b.degree_in(var) == 0) return gcd(content(a, var), b);

  const FpPoly ca = content(a, var), cb = content(b, var);
  const FpPoly gc = gcd(ca, cb);
  FpPoly r0 = divide_or_throw(a, ca), r1 = divide_or_throw(b, cb);
  if (r0.degree_in(var) < r1.degree_in(var)) std::swap(r0, r1);
  for (;;) {
    const FpPoly r = pseudo_remainder(r0, r1, var);
    if (r.is_zero()) break;
    if (r.degree_in(var) == 0) return gc;
    r0 = std::move(r1);
    r1 = primitive_part(r, var);
  }
  return gc * primitive_part(r1, var);
}

bool coprime(const FpPoly& a, const FpPoly& b) {
  const FpPoly g = gcd(a, b);
  return !g.is_zero() && g.is_constant();
}

}  // namespace petlab
