#include "polyaut/field.hpp"

#include <cctype>
#include <functional>
#include <ostream>
#include <vector>

#include "polyaut/error.hpp"

namespace polyaut {
namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mod_mul(r, a, p);
    a = mod_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  mpz_class r = z % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

mpz_class parse_integer(const std::string& s, const std::string& whole) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) fail(Reason::ParseError, "malformed rational '" + whole + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      fail(Reason::ParseError, "malformed rational '" + whole + "'");
  mpz_class z(s.substr(i), 10);
  return s[0] == '-' ? mpz_class(-z) : z;
}

// Accepts `a` or `a/b` with an optional sign on either part.
mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) fail(Reason::ParseError, "empty rational");
  std::size_t slash = s.find('/');
  mpz_class num = parse_integer(s.substr(0, slash), s);
  mpz_class den = slash == std::string::npos ? mpz_class(1) : parse_integer(s.substr(slash + 1), s);
  if (den == 0) fail(Reason::ParseError, "zero denominator in '" + s + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

using Zeta = Scalar::Zeta;

Zeta zeta_mul(const Zeta& a, const Zeta& b) {
  Zeta c{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b[j] == 0) continue;
      int k = i + j;
      if (k < 4)
        c[k] += a[i] * b[j];
      else
        c[k - 4] -= a[i] * b[j];
    }
  }
  return c;
}

// Dense univariate polynomials over Q, low degree first, used only for the
// extended Euclidean inversion modulo x^4 + 1.
using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

void poly_divmod(QPoly a, const QPoly& b, QPoly& q, QPoly& r) {
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, mpq_class(0));
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    mpq_class c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
    trim(a);
  }
  trim(q);
  r = std::move(a);
}

Zeta zeta_inverse(const Zeta& a) {
  QPoly modulus{1, 0, 0, 0, 1};
  QPoly r0 = modulus, r1(a.begin(), a.end());
  trim(r1);
  if (r1.empty()) fail(Reason::InvalidArgument, "division by zero in Q(zeta8)");
  QPoly s0{}, s1{1};
  while (!r1.empty()) {
    QPoly q, r;
    poly_divmod(r0, r1, q, r);
    QPoly s = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant since x^4 + 1 is irreducible over Q.
  Zeta out{0, 0, 0, 0};
  QPoly rem, quo;
  poly_divmod(s0, modulus, quo, rem);
  for (std::size_t i = 0; i < rem.size() && i < 4; ++i) out[i] = rem[i] / r0[0];
  return out;
}

Zeta parse_zeta(std::string_view text) {
  Zeta out{0, 0, 0, 0};
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(Reason::ParseError, "empty cyclotomic element");
  std::size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (!first) {
      if (s[i] != '+' && s[i] != '-') fail(Reason::ParseError, "expected '+' in '" + s + "'");
      if (s[i] == '-') sign = -1;
      ++i;
    }
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    first = false;
    std::size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    mpq_class coef(1);
    bool has_coef = i > start;
    if (has_coef) coef = parse_rational(s.substr(start, i - start));
    int power = 0;
    if (i < s.size() && (s[i] == '*' || s[i] == 'z')) {
      if (s[i] == '*') {
        if (!has_coef) fail(Reason::ParseError, "dangling '*' in '" + s + "'");
        ++i;
      }
      if (i >= s.size() || s[i] != 'z') fail(Reason::ParseError, "expected 'z' in '" + s + "'");
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t ds = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (ds == i) fail(Reason::ParseError, "missing exponent in '" + s + "'");
        power = std::stoi(s.substr(ds, i - ds));
      }
    } else if (!has_coef) {
      fail(Reason::ParseError, "malformed cyclotomic element '" + s + "'");
    }
    // zeta^8 = 1 and zeta^4 = -1
    power %= 8;
    if (power >= 4) {
      power -= 4;
      sign = -sign;
    }
    out[power] += sign * coef;
  }
  return out;
}

}  // namespace

FieldSpec FieldSpec::prime(std::uint64_t p) {
  require(p < (1ULL << 32), Reason::InvalidArgument, "prime modulus must be below 2^32");
  if (!is_prime(p)) fail(Reason::InvalidArgument, std::to_string(p) + " is not prime");
  return FieldSpec(FieldKind::PrimeField, p);
}

FieldSpec FieldSpec::parse(std::string_view d) {
  if (d == "q") return rationals();
  if (d == "zeta8") return cyclotomic8();
  if (d.substr(0, 3) == "fp:" && d.size() > 3) {
    std::uint64_t p = 0;
    for (char c : d.substr(3)) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || p > (1ULL << 40))
        fail(Reason::ParseError, "bad field descriptor '" + std::string(d) + "'");
      p = p * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return prime(p);
  }
  fail(Reason::ParseError, "bad field descriptor '" + std::string(d) + "'");
}

std::string FieldSpec::descriptor() const {
  switch (kind_) {
    case FieldKind::Rationals: return "q";
    case FieldKind::PrimeField: return "fp:" + std::to_string(modulus_);
    case FieldKind::Cyclotomic8: return "zeta8";
  }
  return "?";
}

void check_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b))
    fail(Reason::FieldMismatch, "field mismatch: " + a.descriptor() + " vs " + b.descriptor());
}

Scalar Scalar::zero(const FieldSpec& f) { return from_int(f, 0); }
Scalar Scalar::one(const FieldSpec& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const FieldSpec& f, long long v) {
  return from_rational(f, mpq_class(mpz_class(static_cast<long>(v))));
}

Scalar Scalar::from_rational(const FieldSpec& f, const mpq_class& raw) {
  mpq_class q = raw;
  q.canonicalize();
  switch (f.kind()) {
    case FieldKind::Rationals:
      return Scalar(f, q);
    case FieldKind::PrimeField: {
      std::uint64_t p = f.modulus();
      std::uint64_t den = reduce_mpz(q.get_den(), p);
      if (den == 0)
        fail(Reason::InvalidArgument, "denominator " + q.get_den().get_str() + " vanishes in " + f.descriptor());
      std::uint64_t num = reduce_mpz(q.get_num(), p);
      return Scalar(f, mod_mul(num, mod_pow(den, p - 2, p), p));
    }
    case FieldKind::Cyclotomic8:
      return Scalar(f, Zeta{q, 0, 0, 0});
  }
  fail(Reason::InvalidArgument, "unknown field");
}

Scalar Scalar::zeta(const FieldSpec& f) {
  require(f.kind() == FieldKind::Cyclotomic8, Reason::InvalidArgument,
          "zeta exists only in zeta8");
  return Scalar(f, Zeta{0, 1, 0, 0});
}

Scalar Scalar::from_zeta(const FieldSpec& f, Zeta coords) {
  require(f.kind() == FieldKind::Cyclotomic8, Reason::InvalidArgument,
          "cyclotomic coordinates require zeta8");
  for (auto& c : coords) c.canonicalize();
  return Scalar(f, std::move(coords));
}

Scalar Scalar::parse(const FieldSpec& f, std::string_view text) {
  if (f.kind() == FieldKind::Cyclotomic8) return Scalar(f, parse_zeta(text));
  return from_rational(f, parse_rational(text));
}

std::optional<Scalar> Scalar::enumerate(const FieldSpec& f, std::uint64_t index) {
  if (f.is_finite() && index >= f.modulus()) return std::nullopt;
  long long magnitude = static_cast<long long>((index + 1) / 2);
  long long v = (index % 2 == 1) ? magnitude : -magnitude;
  return from_int(f, v);
}

bool Scalar::is_zero() const {
  switch (field_.kind()) {
    case FieldKind::Rationals: return rational() == 0;
    case FieldKind::PrimeField: return residue() == 0;
    case FieldKind::Cyclotomic8: {
      const auto& z = zeta_coords();
      return z[0] == 0 && z[1] == 0 && z[2] == 0 && z[3] == 0;
    }
  }
  return false;
}

bool Scalar::is_one() const {
  switch (field_.kind()) {
    case FieldKind::Rationals: return rational() == 1;
    case FieldKind::PrimeField: return residue() == 1;
    case FieldKind::Cyclotomic8: {
      const auto& z = zeta_coords();
      return z[0] == 1 && z[1] == 0 && z[2] == 0 && z[3] == 0;
    }
  }
  return false;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same_field(field_, o.field_);
  switch (field_.kind()) {
    case FieldKind::Rationals:
      std::get<mpq_class>(value_) += o.rational();
      break;
    case FieldKind::PrimeField: {
      std::uint64_t p = field_.modulus();
      auto& r = std::get<std::uint64_t>(value_);
      r = (r + o.residue()) % p;
      break;
    }
    case FieldKind::Cyclotomic8: {
      auto& z = std::get<Zeta>(value_);
      for (int i = 0; i < 4; ++i) z[i] += o.zeta_coords()[i];
      break;
    }
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same_field(field_, o.field_);
  switch (field_.kind()) {
    case FieldKind::Rationals:
      std::get<mpq_class>(value_) *= o.rational();
      break;
    case FieldKind::PrimeField: {
      auto& r = std::get<std::uint64_t>(value_);
      r = mod_mul(r, o.residue(), field_.modulus());
      break;
    }
    case FieldKind::Cyclotomic8:
      value_ = zeta_mul(zeta_coords(), o.zeta_coords());
      break;
  }
  return *this;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r = *this;
  r += o;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r = *this;
  r -= o;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r = *this;
  r *= o;
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const {
  switch (field_.kind()) {
    case FieldKind::Rationals:
      return Scalar(field_, mpq_class(-rational()));
    case FieldKind::PrimeField: {
      std::uint64_t r = residue();
      return Scalar(field_, r == 0 ? 0 : field_.modulus() - r);
    }
    case FieldKind::Cyclotomic8: {
      Zeta z = zeta_coords();
      for (auto& c : z) c = -c;
      return Scalar(field_, std::move(z));
    }
  }
  return *this;
}

Scalar Scalar::inverse() const {
  require(!is_zero(), Reason::InvalidArgument, "division by zero");
  switch (field_.kind()) {
    case FieldKind::Rationals:
      return Scalar(field_, mpq_class(1 / rational()));
    case FieldKind::PrimeField:
      return Scalar(field_, mod_pow(residue(), field_.modulus() - 2, field_.modulus()));
    case FieldKind::Cyclotomic8:
      return Scalar(field_, zeta_inverse(zeta_coords()));
  }
  return *this;
}

Scalar Scalar::pow(long long e) const {
  Scalar base = e < 0 ? inverse() : *this;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Scalar r = one(field_);
  while (k) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  check_same_field(field_, o.field_);
  return value_ == o.value_;
}

std::string Scalar::to_string() const {
  switch (field_.kind()) {
    case FieldKind::Rationals:
      return rational().get_str();
    case FieldKind::PrimeField:
      return std::to_string(residue());
    case FieldKind::Cyclotomic8: {
      const auto& z = zeta_coords();
      return z[0].get_str() + "+" + z[1].get_str() + "*z+" + z[2].get_str() + "*z^2+" +
             z[3].get_str() + "*z^3";
    }
  }
  return "?";
}

std::optional<mpq_class> Scalar::to_rational() const {
  switch (field_.kind()) {
    case FieldKind::Rationals:
      return rational();
    case FieldKind::PrimeField:
      return std::nullopt;
    case FieldKind::Cyclotomic8: {
      const auto& z = zeta_coords();
      if (z[1] == 0 && z[2] == 0 && z[3] == 0) return z[0];
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::size_t Scalar::hash() const {
  auto hq = [](const mpq_class& q) {
    std::size_t h = mpz_get_ui(q.get_num_mpz_t()) * 1000003u;
    h ^= mpz_get_ui(q.get_den_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    if (q < 0) h = ~h;
    return h;
  };
  switch (field_.kind()) {
    case FieldKind::Rationals:
      return hq(rational());
    case FieldKind::PrimeField:
      return std::hash<std::uint64_t>{}(residue());
    case FieldKind::Cyclotomic8: {
      std::size_t h = 0;
      for (const auto& c : zeta_coords()) h = h * 31 + hq(c);
      return h;
    }
  }
  return 0;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace polyaut
