#include "polyaut/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "polyaut/error.hpp"

namespace polyaut {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::span<const int> exps) {
  require(exps.size() <= kMaxVars, Reason::InvalidArgument, "too many variables");
  for (std::size_t i = 0; i < exps.size(); ++i) {
    require(exps[i] >= 0, Reason::InvalidArgument, "negative exponent");
    set(i, static_cast<std::uint32_t>(exps[i]));
  }
}

Monomial Monomial::variable(std::size_t i) {
  Monomial m;
  m.set(i, 1);
  return m;
}

void Monomial::set(std::size_t i, std::uint32_t v) {
  require(v <= 0xFFFF, Reason::InvalidArgument, "exponent overflow");
  deg_ = deg_ - e_[i] + v;
  e_[i] = static_cast<std::uint16_t>(v);
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint32_t s = std::uint32_t{e_[i]} + o.e_[i];
    if (s > 0xFFFF) fail(Reason::InvalidArgument, "exponent overflow");
    r.e_[i] = static_cast<std::uint16_t>(s);
  }
  r.deg_ = deg_ + o.deg_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::operator/(const Monomial& o) const {
  require(o.divides(*this), Reason::InvalidArgument, "monomial does not divide");
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] - o.e_[i]);
  r.deg_ = deg_ - o.deg_;
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (deg_ != o.deg_) return deg_ <=> o.deg_;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e_[i] != o.e_[i]) return e_[i] <=> o.e_[i];
  return std::strong_ordering::equal;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : e_) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_string(const Degree& d) {
  return d.is_finite() ? std::to_string(d.value()) : std::string("-inf");
}

// ------------------------------------------------------------------- MPoly

namespace {

bool term_greater(const MPoly::Term& a, const MPoly::Term& b) { return a.first > b.first; }

}  // namespace

MPoly::MPoly(const FieldSpec& field, std::size_t nvars) : field_(field), nvars_(nvars) {
  if (!(nvars >= 1 && nvars <= kMaxVars))
    fail(Reason::InvalidArgument, "number of variables must be in [1, " + std::to_string(kMaxVars) + "]");
}

MPoly MPoly::constant(const FieldSpec& field, std::size_t nvars, const Scalar& c) {
  return monomial(field, nvars, Monomial{}, c);
}

MPoly MPoly::constant(const FieldSpec& field, std::size_t nvars, long long c) {
  return constant(field, nvars, Scalar::from_int(field, c));
}

MPoly MPoly::variable(const FieldSpec& field, std::size_t nvars, std::size_t i) {
  require(i < nvars, Reason::InvalidArgument, "variable index out of range");
  return monomial(field, nvars, Monomial::variable(i), Scalar::one(field));
}

MPoly MPoly::monomial(const FieldSpec& field, std::size_t nvars, const Monomial& m, const Scalar& c) {
  check_same_field(field, c.field());
  MPoly p(field, nvars);
  if (!c.is_zero()) p.terms_.emplace_back(m, c);
  return p;
}

MPoly MPoly::from_terms(const FieldSpec& field, std::size_t nvars, std::vector<Term> terms) {
  MPoly p(field, nvars);
  for (const auto& [m, c] : terms) {
    check_same_field(field, c.field());
    for (std::size_t i = nvars; i < kMaxVars; ++i)
      require(m[i] == 0, Reason::ArityMismatch, "monomial uses a variable beyond nvars");
  }
  std::sort(terms.begin(), terms.end(), term_greater);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first)
      p.terms_.back().second += t.second;
    else
      p.terms_.push_back(std::move(t));
    if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
  }
  return p;
}

void MPoly::check_compatible(const MPoly& o) const {
  check_same_field(field_, o.field_);
  if (nvars_ != o.nvars_)
    fail(Reason::ArityMismatch, "arity mismatch: " + std::to_string(nvars_) + " vs " + std::to_string(o.nvars_));
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first.total_degree() == 0);
}

Scalar MPoly::constant_term() const {
  if (!terms_.empty() && terms_.back().first.total_degree() == 0) return terms_.back().second;
  return Scalar::zero(field_);
}

Scalar MPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.first > key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return Scalar::zero(field_);
}

Degree MPoly::degree() const {
  if (terms_.empty()) return Degree::minus_infinity();
  return Degree(terms_.front().first.total_degree());
}

Degree MPoly::degree_in(std::size_t i) const {
  if (terms_.empty()) return Degree::minus_infinity();
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first[i]);
  return Degree(d);
}

bool MPoly::depends_on(std::size_t i) const {
  for (const auto& t : terms_)
    if (t.first[i] != 0) return true;
  return false;
}

MPoly MPoly::homogeneous_part(long long d) const {
  MPoly r(field_, nvars_);
  for (const auto& t : terms_)
    if (t.first.total_degree() == d) r.terms_.push_back(t);
  return r;
}

MPoly MPoly::truncate(long long d) const {
  MPoly r(field_, nvars_);
  for (const auto& t : terms_)
    if (t.first.total_degree() <= d) r.terms_.push_back(t);
  return r;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  check_compatible(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first > b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == ae || b->first > a->first) {
      out.push_back(*b++);
    } else {
      Scalar s = a->second + b->second;
      if (!s.is_zero()) out.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  r += o;
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  r += -o;
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MPoly MPoly::operator*(const Scalar& c) const {
  check_same_field(field_, c.field());
  MPoly r(field_, nvars_);
  if (c.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.emplace_back(t.first, t.second * c);
  return r;
}

namespace {

// Product accumulation on raw coefficient values.  `Acc` holds the running
// sum for one monomial; `add` adds ca*cb into it and `out` converts back.
template <class Acc, class Load, class Add, class Out>
std::vector<MPoly::Term> accumulate_products(const std::vector<MPoly::Term>& a,
                                             const std::vector<MPoly::Term>& b, long long cap,
                                             Load load, Add add, Out out) {
  using Val = decltype(load(a.front().second));
  std::vector<Val> va, vb;
  va.reserve(a.size());
  vb.reserve(b.size());
  for (const auto& t : a) va.push_back(load(t.second));
  for (const auto& t : b) vb.push_back(load(t.second));
  std::unordered_map<Monomial, Acc, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 4 * (a.size() + b.size())) + 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    long long room = cap - static_cast<long long>(a[i].first.total_degree());
    if (room < 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (static_cast<long long>(b[j].first.total_degree()) > room) continue;
      add(acc[a[i].first * b[j].first], va[i], vb[j]);
    }
  }
  std::vector<MPoly::Term> r;
  r.reserve(acc.size());
  for (auto& [m, c] : acc) {
    Scalar v = out(c);
    if (!v.is_zero()) r.emplace_back(m, std::move(v));
  }
  return r;
}

bool integral(const std::vector<MPoly::Term>& t) {
  return std::all_of(t.begin(), t.end(),
                     [](const MPoly::Term& x) { return x.second.rational().get_den() == 1; });
}

}  // namespace

MPoly MPoly::mul_truncated(const MPoly& o, long long cap) const {
  check_compatible(o);
  MPoly r(field_, nvars_);
  if (terms_.empty() || o.terms_.empty()) return r;
  if (o.terms_.size() == 1 && o.terms_.front().first.total_degree() == 0)
    return (*this * o.terms_.front().second).truncate(cap);
  if (terms_.size() == 1 && terms_.front().first.total_degree() == 0)
    return (o * terms_.front().second).truncate(cap);
  const FieldSpec f = field_;
  switch (f.kind()) {
    case FieldKind::Rationals:
      if (integral(terms_) && integral(o.terms_)) {
        r.terms_ = accumulate_products<mpz_class>(
            terms_, o.terms_, cap, [](const Scalar& s) { return s.rational().get_num(); },
            [](mpz_class& acc, const mpz_class& x, const mpz_class& y) {
              mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            },
            [&f](const mpz_class& c) { return Scalar::from_rational(f, mpq_class(c)); });
      } else {
        r.terms_ = accumulate_products<mpq_class>(
            terms_, o.terms_, cap, [](const Scalar& s) { return s.rational(); },
            [](mpq_class& acc, const mpq_class& x, const mpq_class& y) { acc += x * y; },
            [&f](const mpq_class& c) { return Scalar::from_rational(f, c); });
      }
      break;
    case FieldKind::PrimeField: {
      const std::uint64_t p = f.modulus();
      r.terms_ = accumulate_products<std::uint64_t>(
          terms_, o.terms_, cap, [](const Scalar& s) { return s.residue(); },
          [p](std::uint64_t& acc, std::uint64_t x, std::uint64_t y) { acc = (acc + x * y % p) % p; },
          [&f](std::uint64_t c) { return Scalar::from_int(f, static_cast<long long>(c)); });
      break;
    }
    case FieldKind::Cyclotomic8:
      r.terms_ = accumulate_products<std::optional<Scalar>>(
          terms_, o.terms_, cap, [](const Scalar& s) { return s; },
          [](std::optional<Scalar>& acc, const Scalar& x, const Scalar& y) {
            if (acc)
              *acc += x * y;
            else
              acc = x * y;
          },
          [](const std::optional<Scalar>& c) { return *c; });
      break;
  }
  std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  return mul_truncated(o, std::numeric_limits<long long>::max() / 2);
}

MPoly& MPoly::operator*=(const MPoly& o) {
  *this = *this * o;
  return *this;
}

MPoly MPoly::pow(unsigned k) const {
  MPoly r = constant(field_, nvars_, 1);
  MPoly base = *this;
  while (k) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

namespace {

// Horner-style evaluation grouped by variable: P = sum_k a_v^k * P_k where
// P_k involves only the variables after v.
class Substituter {
 public:
  Substituter(const FieldSpec& field, std::size_t nvars, std::span<const MPoly> args)
      : field_(field), src_nvars_(nvars), args_(args), powers_(nvars) {}

  MPoly run(std::vector<MPoly::Term> terms, std::size_t v) {
    const std::size_t out_nvars = args_.front().nvars();
    if (terms.empty()) return MPoly(field_, out_nvars);
    if (v == src_nvars_) {
      Scalar s = Scalar::zero(field_);
      for (const auto& t : terms) s += t.second;
      return MPoly::constant(field_, out_nvars, s);
    }
    std::map<std::uint32_t, std::vector<MPoly::Term>> groups;
    for (auto& t : terms) {
      std::uint32_t k = t.first[v];
      t.first.set(v, 0);
      groups[k].push_back(std::move(t));
    }
    MPoly result(field_, out_nvars);
    const bool last = v + 1 == src_nvars_;
    for (auto& [k, group] : groups) {
      if (last) {
        Scalar s = Scalar::zero(field_);
        for (const auto& t : group) s += t.second;
        result += power(v, k) * s;
      } else {
        MPoly inner = run(std::move(group), v + 1);
        result += k == 0 ? inner : power(v, k) * inner;
      }
    }
    return result;
  }

 private:
  const MPoly& power(std::size_t v, std::uint32_t k) {
    auto& cache = powers_[v];
    if (cache.empty()) cache.push_back(MPoly::constant(field_, args_.front().nvars(), 1));
    while (cache.size() <= k) cache.push_back(cache.back() * args_[v]);
    return cache[k];
  }

  const FieldSpec& field_;
  std::size_t src_nvars_;
  std::span<const MPoly> args_;
  std::vector<std::vector<MPoly>> powers_;
};

}  // namespace

MPoly MPoly::substitute(std::span<const MPoly> args) const {
  if (args.size() != nvars_)
    fail(Reason::ArityMismatch,
         "substitute expects " + std::to_string(nvars_) + " arguments, got " + std::to_string(args.size()));
  for (const auto& a : args) {
    check_same_field(field_, a.field());
    require(a.nvars() == args.front().nvars(), Reason::ArityMismatch,
            "substitution arguments must share arity");
  }
  Substituter s(field_, nvars_, args);
  return s.run(terms_, 0);
}

Scalar MPoly::evaluate(std::span<const Scalar> point) const {
  require(point.size() == nvars_, Reason::ArityMismatch, "evaluation point has wrong arity");
  for (const auto& c : point) check_same_field(field_, c.field());
  Scalar s = Scalar::zero(field_);
  for (const auto& [m, c] : terms_) {
    Scalar v = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i]) v *= point[i].pow(m[i]);
    s += v;
  }
  return s;
}

MPoly MPoly::partial_derivative(std::size_t i) const {
  require(i < nvars_, Reason::InvalidArgument, "variable index out of range");
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    d.set(i, m[i] - 1);
    Scalar coef = c * Scalar::from_int(field_, m[i]);
    if (!coef.is_zero()) out.emplace_back(d, coef);
  }
  return from_terms(field_, nvars_, std::move(out));
}

MPoly MPoly::shift(std::size_t i, const Scalar& c) const {
  require(i < nvars_, Reason::InvalidArgument, "variable index out of range");
  std::vector<MPoly> args;
  for (std::size_t j = 0; j < nvars_; ++j) {
    MPoly v = variable(field_, nvars_, j);
    if (j == i) v += constant(field_, nvars_, c);
    args.push_back(std::move(v));
  }
  return substitute(args);
}

MPoly MPoly::difference_delta(std::size_t i) const {
  return *this - shift(i, -Scalar::one(field_));
}

MPoly MPoly::extend(std::size_t new_nvars) const {
  require(new_nvars >= nvars_, Reason::ArityMismatch, "cannot shrink the variable set");
  MPoly r(field_, new_nvars);
  r.terms_ = terms_;
  return r;
}

bool MPoly::operator==(const MPoly& o) const {
  check_compatible(o);
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].first == o.terms_[i].first) || !(terms_[i].second == o.terms_[i].second))
      return false;
  return true;
}

std::string variable_name(std::size_t nvars, std::size_t i) {
  static const char* short_names[] = {"x", "y", "z", "w"};
  if (nvars <= 4) return short_names[i];
  return "x" + std::to_string(i + 1);
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variable_name(nvars_, i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    std::string coef;
    bool negative = false;
    if (field_.kind() == FieldKind::Rationals) {
      mpq_class q = c.rational();
      negative = q < 0;
      if (negative) q = -q;
      coef = q.get_str();
    } else if (field_.kind() == FieldKind::PrimeField) {
      coef = c.to_string();
    } else {
      coef = "(" + c.to_string() + ")";
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (mono.empty())
      os << coef;
    else if (coef == "1")
      os << mono;
    else
      os << coef << "*" << mono;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.to_string(); }

// ------------------------------------------------------------------ parser

namespace {

class PolyParser {
 public:
  PolyParser(const FieldSpec& field, std::size_t nvars, std::string_view text)
      : field_(field), nvars_(nvars) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  MPoly parse() {
    MPoly p = expr();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(Reason::ParseError, "polynomial parse error at " + std::to_string(pos_) + " in '" + s_ +
                                 "': " + msg);
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  MPoly expr() {
    MPoly acc(field_, nvars_);
    bool first = true;
    while (true) {
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      MPoly t = term();
      acc += sign < 0 ? -t : t;
      first = false;
      if (!peek('+') && !peek('-')) break;
    }
    return acc;
  }

  MPoly term() {
    MPoly acc = factor();
    while (peek('*') || peek('/')) {
      char op = s_[pos_++];
      MPoly f = factor();
      if (op == '*') {
        acc *= f;
      } else {
        if (!f.is_constant() || f.is_zero()) error("division only by nonzero constants");
        acc = acc * f.constant_term().inverse();
      }
    }
    return acc;
  }

  MPoly factor() {
    MPoly b = base();
    if (peek('^')) {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) error("missing exponent");
      b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return b;
  }

  MPoly base() {
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly e = expr();
      if (!peek(')')) error("missing ')'");
      ++pos_;
      return e;
    }
    if (c == '-' || c == '+') {
      ++pos_;
      MPoly b = factor();
      return c == '-' ? -b : b;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return MPoly::constant(field_, nvars_, Scalar::parse(field_, s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "zeta") return MPoly::constant(field_, nvars_, Scalar::zeta(field_));
      for (std::size_t i = 0; i < nvars_; ++i)
        if (variable_name(nvars_, i) == name) return MPoly::variable(field_, nvars_, i);
      error("unknown variable '" + name + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const FieldSpec& field_;
  std::size_t nvars_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly MPoly::parse(const FieldSpec& field, std::size_t nvars, std::string_view text) {
  return PolyParser(field, nvars, text).parse();
}

}  // namespace polyaut
