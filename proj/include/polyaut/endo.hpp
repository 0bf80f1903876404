#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyaut/error.hpp"
#include "polyaut/matrix.hpp"
#include "polyaut/mpoly.hpp"

namespace polyaut {

/// Polynomial self-map (f_1, ..., f_n) of affine n-space.
class Endo {
 public:
  explicit Endo(std::vector<MPoly> components);
  static Endo identity(const FieldSpec& field, std::size_t n);
  /// Components written in the MPoly text syntax.
  static Endo parse(const FieldSpec& field, std::size_t n, const std::vector<std::string>& components);
  /// x -> M x + c.
  static Endo affine(const Matrix& m, std::span<const Scalar> c);
  static Endo translation(const FieldSpec& field, std::span<const Scalar> c);

  std::size_t n() const { return c_.size(); }
  const FieldSpec& field() const { return c_.front().field(); }
  const std::vector<MPoly>& components() const { return c_; }
  const MPoly& operator[](std::size_t i) const { return c_[i]; }

  Degree degree() const;
  bool is_identity() const;
  std::vector<Scalar> evaluate(std::span<const Scalar> point) const;
  /// f(0).
  std::vector<Scalar> constant_terms() const;
  /// Matrix of the degree-one coefficients.
  Matrix linear_matrix() const;
  Endo homogeneous_part(long long d) const;

  bool operator==(const Endo& o) const { return c_ == o.c_; }
  std::string to_string() const;

 private:
  std::vector<MPoly> c_;
};

/// f∘g, that is f(g_1, ..., g_n).
Endo compose(const Endo& f, const Endo& g);
MPoly jacobian_det(const Endo& f);
Endo linear_part(const Endo& f);
/// t'∘f∘t_c where t_c is translation by c and t' translation by -(f∘t_c)(0).
Endo translate_conjugate(const Endo& f, std::span<const Scalar> c);

/// Homogeneous parts g_1, ..., g_D of the formal inverse of f, which must fix
/// the origin and have an invertible linear part.
std::vector<Endo> formal_inverse_truncated(const Endo& f, long long D);

struct AutoCert {
  Endo forward;
  Endo inverse;
};

struct NotAutomorphism {
  Reason reason;
  std::string detail;
};

using CertResult = std::variant<AutoCert, NotAutomorphism>;

/// Decides invertibility by the Jacobian test and the inverse degree bound
/// deg(f^-1) <= deg(f)^(n-1).  In the plane the inverse comes from the
/// Jung-van der Kulk factorization; otherwise from the truncated formal
/// inverse, checked by composing both ways.
CertResult certify_automorphism(const Endo& f);
/// As certify_automorphism but throws Error on rejection.
AutoCert require_automorphism(const Endo& f);

/// Derivation sum_i c_i d/dx_i (times an optional multiplier) whose
/// coefficient c_i only involves x_{i+1}, ..., x_n.
class TriangularDerivation {
 public:
  TriangularDerivation(std::vector<MPoly> coeffs, std::optional<MPoly> multiplier = std::nullopt);

  std::size_t n() const { return coeffs_.size(); }
  const FieldSpec& field() const { return coeffs_.front().field(); }
  const std::vector<MPoly>& coeffs() const { return coeffs_; }
  const std::optional<MPoly>& multiplier() const { return multiplier_; }

  MPoly apply(const MPoly& h) const;

 private:
  MPoly apply_base(const MPoly& h) const;

  std::vector<MPoly> coeffs_;
  std::optional<MPoly> multiplier_;
};

inline constexpr long long kDefaultNilpotencyCap = 64;

/// exp(t D) applied to the coordinate functions.
Endo exp_derivation(const TriangularDerivation& d, const Scalar& t,
                    long long degree_cap = kDefaultNilpotencyCap);

/// Constant coefficient in eps of h_eps^-1 ∘ g ∘ h_eps with
/// h_eps = (eps^w_1 x_1, ..., eps^w_n x_n).
Endo scaling_limit(const Endo& g, std::span<const long long> weights);

/// (xz+y^2)(-2y d/dx + z d/dy) on three variables; exp of t times it is the
/// Nagata family.
TriangularDerivation nagata_derivation(const FieldSpec& field);

}  // namespace polyaut
