#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace polyaut {

enum class FieldKind { Rationals, PrimeField, Cyclotomic8 };

/// Descriptor of one of the supported exact coefficient fields: the
/// rationals, a prime field F_p (p < 2^32), or Q(zeta) with zeta^4 = -1.
class FieldSpec {
 public:
  static FieldSpec rationals() { return FieldSpec(FieldKind::Rationals, 0); }
  /// Throws InvalidArgument unless p is a prime below 2^32.
  static FieldSpec prime(std::uint64_t p);
  static FieldSpec cyclotomic8() { return FieldSpec(FieldKind::Cyclotomic8, 0); }

  /// Parses the command-line descriptor: `q`, `fp:<p>` or `zeta8`.
  static FieldSpec parse(std::string_view descriptor);

  FieldSpec() = default;

  FieldKind kind() const noexcept { return kind_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t characteristic() const noexcept { return modulus_; }
  bool is_finite() const noexcept { return kind_ == FieldKind::PrimeField; }
  std::string descriptor() const;

  bool operator==(const FieldSpec&) const = default;

 private:
  FieldSpec(FieldKind kind, std::uint64_t modulus) : kind_(kind), modulus_(modulus) {}

  FieldKind kind_ = FieldKind::Rationals;
  std::uint64_t modulus_ = 0;
};

void check_same_field(const FieldSpec& a, const FieldSpec& b);

/// Exact field element tagged with its field.  Rationals are kept in lowest
/// terms by GMP, prime-field residues in [0, p), and cyclotomic elements as
/// four rational coordinates on 1, zeta, zeta^2, zeta^3.
class Scalar {
 public:
  using Zeta = std::array<mpq_class, 4>;

  Scalar() : Scalar(FieldSpec::rationals(), mpq_class(0)) {}

  static Scalar zero(const FieldSpec& f);
  static Scalar one(const FieldSpec& f);
  static Scalar from_int(const FieldSpec& f, long long v);
  /// Image of a rational number; throws InvalidArgument if the denominator
  /// vanishes in F_p.
  static Scalar from_rational(const FieldSpec& f, const mpq_class& q);
  /// zeta, the chosen primitive 8th root of unity (Cyclotomic8 only).
  static Scalar zeta(const FieldSpec& f);
  static Scalar from_zeta(const FieldSpec& f, Zeta coords);
  static Scalar parse(const FieldSpec& f, std::string_view text);

  /// The index-th element of the canonical enumeration 0, 1, -1, 2, -2, ...
  /// (nullopt once a finite field is exhausted).
  static std::optional<Scalar> enumerate(const FieldSpec& f, std::uint64_t index);

  const FieldSpec& field() const noexcept { return field_; }

  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);

  /// Throws InvalidArgument on zero.
  Scalar inverse() const;
  Scalar pow(long long e) const;

  /// Exact equality; comparing scalars of different fields is an error.
  bool operator==(const Scalar& o) const;

  /// Canonical text: `num/den`, residue `k`, or `c0+c1*z+c2*z^2+c3*z^3`.
  std::string to_string() const;

  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }
  const Zeta& zeta_coords() const { return std::get<Zeta>(value_); }

  /// Rational value when the element lies in the prime subfield of a
  /// characteristic-zero field.
  std::optional<mpq_class> to_rational() const;

  std::size_t hash() const;

 private:
  using Value = std::variant<mpq_class, std::uint64_t, Zeta>;
  Scalar(const FieldSpec& f, Value v) : field_(f), value_(std::move(v)) {}

  FieldSpec field_;
  Value value_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace polyaut
