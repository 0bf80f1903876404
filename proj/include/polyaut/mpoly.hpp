#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyaut/field.hpp"

namespace polyaut {

inline constexpr std::size_t kMaxVars = 8;

/// Exponent vector of up to kMaxVars variables.  Ordered graded
/// lexicographically: total degree first, then the exponent of x_0, x_1, ...
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::span<const int> exps);

  static Monomial variable(std::size_t i);

  std::uint32_t operator[](std::size_t i) const { return e_[i]; }
  std::uint32_t total_degree() const { return deg_; }
  void set(std::size_t i, std::uint32_t v);

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return e_ == o.e_; }
  std::strong_ordering operator<=>(const Monomial& o) const;

  std::size_t hash() const;

 private:
  std::array<std::uint16_t, kMaxVars> e_{};
  std::uint32_t deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Total degree with a sentinel below every integer for the zero polynomial.
class Degree {
 public:
  constexpr Degree() = default;
  constexpr explicit Degree(long long v) : v_(v) {}
  static constexpr Degree minus_infinity() { return Degree(); }

  constexpr bool is_finite() const { return v_ != kNegInf; }
  /// Finite value; callers must check is_finite() first.
  constexpr long long value() const { return v_; }

  constexpr auto operator<=>(const Degree&) const = default;
  constexpr bool operator==(const Degree&) const = default;
  constexpr bool operator==(long long v) const { return v_ == v && is_finite(); }
  constexpr auto operator<=>(long long v) const { return v_ <=> v; }

  constexpr Degree operator+(const Degree& o) const {
    if (!is_finite() || !o.is_finite()) return minus_infinity();
    return Degree(v_ + o.v_);
  }

 private:
  static constexpr long long kNegInf = std::numeric_limits<long long>::min();
  long long v_ = kNegInf;
};

std::string to_string(const Degree& d);

/// Sparse multivariate polynomial over a Scalar field.  Terms are stored in
/// descending graded-lex order with no zero coefficients.
class MPoly {
 public:
  using Term = std::pair<Monomial, Scalar>;

  MPoly() : MPoly(FieldSpec::rationals(), 1) {}
  MPoly(const FieldSpec& field, std::size_t nvars);

  static MPoly constant(const FieldSpec& field, std::size_t nvars, const Scalar& c);
  static MPoly constant(const FieldSpec& field, std::size_t nvars, long long c);
  static MPoly variable(const FieldSpec& field, std::size_t nvars, std::size_t i);
  static MPoly monomial(const FieldSpec& field, std::size_t nvars, const Monomial& m, const Scalar& c);
  /// Sums duplicate monomials and drops zero coefficients.
  static MPoly from_terms(const FieldSpec& field, std::size_t nvars, std::vector<Term> terms);

  /// Parses expressions such as `x^2 - 1/2*x*y + (y+1)^3`.  Variables are
  /// x, y, z, w when nvars <= 4, otherwise x1, ..., xn; `zeta` denotes the
  /// primitive 8th root of unity in zeta8.
  static MPoly parse(const FieldSpec& field, std::size_t nvars, std::string_view text);

  const FieldSpec& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  Scalar coefficient(const Monomial& m) const;
  /// Largest term in the monomial order; the polynomial must be nonzero.
  const Term& leading_term() const { return terms_.front(); }

  Degree degree() const;
  /// Degree in variable i (minus infinity for zero).
  Degree degree_in(std::size_t i) const;
  bool depends_on(std::size_t i) const;
  MPoly homogeneous_part(long long d) const;
  /// Sum of the terms of total degree at most d.
  MPoly truncate(long long d) const;

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator-() const;
  MPoly operator*(const Scalar& c) const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly pow(unsigned k) const;
  /// Product with every term of total degree above cap discarded.
  MPoly mul_truncated(const MPoly& o, long long cap) const;

  /// P(args_0, ..., args_{n-1}); every argument shares a field and arity.
  MPoly substitute(std::span<const MPoly> args) const;
  Scalar evaluate(std::span<const Scalar> point) const;
  MPoly partial_derivative(std::size_t i) const;
  /// q - q|_{x_i -> x_i - 1}.
  MPoly difference_delta(std::size_t i) const;
  /// q|_{x_i -> x_i + c}.
  MPoly shift(std::size_t i, const Scalar& c) const;
  /// Same polynomial viewed in a ring with more (trailing) variables.
  MPoly extend(std::size_t new_nvars) const;

  bool operator==(const MPoly& o) const;

  std::string to_string() const;

 private:
  void check_compatible(const MPoly& o) const;

  FieldSpec field_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

std::string variable_name(std::size_t nvars, std::size_t i);
std::ostream& operator<<(std::ostream& os, const MPoly& p);

}  // namespace polyaut
