#include "petlab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "petlab/errors.hpp"

namespace petlab {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

std::uint16_t exponent(const Monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

bool GradedDescending::operator()(const Monomial& a, const Monomial& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ea = exponent(a, i), eb = exponent(b, i);
    if (ea != eb) return ea > eb;
  }
  return false;
}

Poly Poly::constant(const BigInt& c) {
  Poly p;
  p.add_term({}, c);
  return p;
}

Poly Poly::variable(std::size_t index, unsigned power, const BigInt& coeff) {
  Monomial m(index + 1, 0);
  m[index] = static_cast<std::uint16_t>(power);
  Poly p;
  p.add_term(std::move(m), coeff);
  return p;
}

void Poly::add_term(Monomial m, const BigInt& c) {
  if (c == 0) return;
  trim(m);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

BigInt Poly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::size_t Poly::num_vars() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

int Poly::degree_in(std::size_t var) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, exponent(m, var));
  return d;
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(petlab::total_degree(m)));
  return d;
}

Poly Poly::coefficient_in(std::size_t var, unsigned power) const {
  Poly out;
  for (const auto& [m, c] : terms_) {
    if (exponent(m, var) != power) continue;
    Monomial r = m;
    if (var < r.size()) r[var] = 0;
    out.add_term(std::move(r), c);
  }
  return out;
}

Poly Poly::leading_coefficient_in(std::size_t var) const {
  const int d = degree_in(var);
  return d < 0 ? Poly{} : coefficient_in(var, static_cast<unsigned>(d));
}

BigInt Poly::max_abs_coefficient() const {
  BigInt best = 0;
  for (const auto& [m, c] : terms_) best = std::max<BigInt>(best, abs(c));
  return best;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const BigInt& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = exponent(ma, i) + exponent(mb, i);
      out.add_term(std::move(m), ca * cb);
    }
  }
  return out;
}

BigInt Poly::evaluate(std::span<const BigInt> point) const {
  BigInt total = 0;
  for (const auto& [m, c] : terms_) {
    BigInt t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i >= point.size()) throw InvalidArgument("Poly::evaluate: point has too few coordinates");
      t *= boost::multiprecision::pow(point[i], m[i]);
    }
    total += t;
  }
  return total;
}

std::string pet_variable_name(std::size_t index) {
  return index == 0 ? std::string("m") : "h" + std::to_string(index);
}

std::vector<std::string> pet_variable_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back(pet_variable_name(i));
  return names;
}

std::string to_string(const Poly& p, std::span<const std::string> names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    const BigInt mag = negative ? BigInt(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (i >= names.size()) throw InvalidArgument("to_string: no name for variable " + std::to_string(i));
      if (!factors.empty()) factors += '*';
      factors += names[i];
      if (m[i] > 1) factors += '^' + std::to_string(m[i]);
    }
    if (factors.empty())
      out += mag.str();
    else if (mag == 1)
      out += factors;
    else
      out += mag.str() + '*' + factors;
  }
  return out;
}

std::string to_string(const Poly& p) {
  const auto names = pet_variable_names(std::max<std::size_t>(1, p.num_vars()));
  return to_string(p, names);
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  Poly parse_all() {
    Poly p = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("polynomial syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool at_digit() {
    skip_ws();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  bool at_ident() {
    skip_ws();
    return pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]));
  }

  BigInt parse_integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  std::size_t parse_variable() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == ident) return i;
    pos_ = start;
    fail("unknown variable '" + std::string(ident) + "'");
  }

  // factor := name ['^' power]
  void parse_factor(Monomial& m) {
    const std::size_t var = parse_variable();
    unsigned power = 1;
    if (peek('^')) {
      ++pos_;
      const BigInt e = parse_integer();
      if (e > 1000) fail("exponent too large");
      power = static_cast<unsigned>(e);
    }
    if (m.size() <= var) m.resize(var + 1, 0);
    m[var] = static_cast<std::uint16_t>(m[var] + power);
  }

  void parse_term(int sign, Poly& out) {
    BigInt coeff = 1;
    Monomial m;
    bool have_coeff = false;
    if (at_digit()) {
      coeff = parse_integer();
      have_coeff = true;
    }
    bool need_factor = false;
    if (have_coeff && peek('*')) {
      ++pos_;
      need_factor = true;
    }
    if (at_ident()) {
      parse_factor(m);
      while (peek('*')) {
        ++pos_;
        parse_factor(m);
      }
    } else if (need_factor || !have_coeff) {
      fail("expected variable or integer");
    }
    out.add_term(std::move(m), sign * coeff);
  }

  // poly := [sign] term (('+'|'-') term)*
  Poly parse_sum() {
    Poly out;
    int sign = 1;
    if (peek('-')) {
      ++pos_;
      sign = -1;
    } else if (peek('+')) {
      ++pos_;
    }
    parse_term(sign, out);
    for (;;) {
      if (peek('+')) {
        ++pos_;
        sign = 1;
      } else if (peek('-')) {
        ++pos_;
        sign = -1;
      } else {
        break;
      }
      parse_term(sign, out);
    }
    return out;
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, std::span<const std::string> names) {
  return Parser(text, names).parse_all();
}

Poly parse_poly(std::string_view text) {
  static const std::vector<std::string> names = pet_variable_names(64);
  return parse_poly(text, names);
}

std::vector<Poly> parse_poly_system(std::string_view text) {
  static const std::vector<std::string> names{"m"};
  std::vector<Poly> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t semi = text.find(';', start);
    const std::string_view piece = text.substr(start, semi == std::string_view::npos ? text.npos : semi - start);
    Poly p;
    try {
      p = parse_poly(piece, names);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("polynomial " + std::to_string(out.size() + 1) + " (offset " +
                            std::to_string(start) + "): " + e.what());
    }
    if (p.constant_term() != 0)
      throw InvalidArgument("polynomial " + std::to_string(out.size() + 1) + " '" + to_string(p) +
                            "' does not vanish at 0");
    if (std::find(out.begin(), out.end(), p) != out.end())
      throw InvalidArgument("duplicate polynomial '" + to_string(p) + "'");
    out.push_back(std::move(p));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

Poly shift(const Poly& q, std::size_t var, std::size_t new_var) {
  if (var == new_var) throw InvalidArgument("shift: new variable must differ from the shifted one");
  Poly out;
  for (const auto& [m, c] : q.terms()) {
    const unsigned e = exponent(m, var);
    for (unsigned i = 0; i <= e; ++i) {
      Monomial r(std::max({m.size(), var + 1, new_var + 1}), 0);
      std::copy(m.begin(), m.end(), r.begin());
      r[var] = static_cast<std::uint16_t>(e - i);
      r[new_var] = static_cast<std::uint16_t>(r[new_var] + i);
      out.add_term(std::move(r), c * binomial(e, i));
    }
  }
  return out;
}

Poly w_rescale(const Poly& p, const BigInt& W) {
  if (W <= 0) throw InvalidArgument("w_rescale: W must be positive");
  if (p.constant_term() != 0) throw InvalidArgument("w_rescale: polynomial must vanish at 0");
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (m.size() > 1) throw InvalidArgument("w_rescale: polynomial must be univariate in m");
    const unsigned e = exponent(m, 0);
    out.add_term(m, c * boost::multiprecision::pow(W, e - 1));
  }
  return out;
}

std::int64_t evaluate_i64(const Poly& p, std::int64_t m) {
  const BigInt point[1] = {BigInt(m)};
  const BigInt v = p.evaluate(point);
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw OverflowError("polynomial value " + v.str() + " exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace petlab

namespace petlab {

IntEvaluator::IntEvaluator(const Poly& p) : vars_(p.num_vars()) {
  for (const auto& [m, c] : p.terms()) {
    Term t;
    t.big = c;
    t.coeff = 0;
    if (c <= std::numeric_limits<std::int64_t>::max() && c >= std::numeric_limits<std::int64_t>::min())
      t.coeff = static_cast<std::int64_t>(c);
    else
      t.coeff = std::numeric_limits<std::int64_t>::min();  // marks an oversized coefficient
    t.exponents = m;
    terms_.push_back(std::move(t));
  }
}

std::int64_t IntEvaluator::operator()(std::span<const std::int64_t> point) const {
  if (point.size() < vars_) throw InvalidArgument("IntEvaluator: point has too few coordinates");
  __int128 total = 0;
  constexpr __int128 kLimit = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
  for (const auto& t : terms_) {
    if (t.coeff == std::numeric_limits<std::int64_t>::min())
      throw OverflowError("IntEvaluator: coefficient exceeds 64 bits");
    __int128 v = t.coeff;
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      for (unsigned e = 0; e < t.exponents[i]; ++e) {
        v *= point[i];
        if (v > kLimit || v < -kLimit) throw OverflowError("IntEvaluator: value exceeds 64 bits");
      }
    }
    total += v;
    if (total > kLimit || total < -kLimit) throw OverflowError("IntEvaluator: value exceeds 64 bits");
  }
  return static_cast<std::int64_t>(total);
}

std::uint64_t IntEvaluator::mod(std::span<const std::uint64_t> point, std::uint64_t p) const {
  if (point.size() < vars_) throw InvalidArgument("IntEvaluator: point has too few coordinates");
  std::uint64_t total = 0;
  for (const auto& t : terms_) {
    std::uint64_t v = 0;
    if (t.coeff != std::numeric_limits<std::int64_t>::min()) {
      const auto sp = static_cast<std::int64_t>(p);
      v = static_cast<std::uint64_t>((t.coeff % sp + sp) % sp);
    } else {
      BigInt r = t.big % p;
      if (r < 0) r += p;
      v = static_cast<std::uint64_t>(r);
    }
    for (std::size_t i = 0; i < t.exponents.size(); ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) v = v * (point[i] % p) % p;
    total = (total + v) % p;
  }
  return total;
}

}  // namespace petlab
