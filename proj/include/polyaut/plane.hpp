#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "polyaut/endo.hpp"

namespace polyaut {

/// (m00 x + m01 y + c0, m10 x + m11 y + c1) with invertible matrix.
class AffineMap {
 public:
  AffineMap(Matrix m, Scalar c0, Scalar c1);
  static AffineMap sigma(const FieldSpec& field);
  static AffineMap from_endo(const Endo& f);

  const FieldSpec& field() const { return m_.field(); }
  const Matrix& matrix() const { return m_; }
  const Scalar& c0() const { return c0_; }
  const Scalar& c1() const { return c1_; }

  /// In B exactly when the y-component does not involve x.
  bool is_triangular() const { return m_(1, 0).is_zero(); }
  AffineMap operator*(const AffineMap& o) const;  // composition this∘o
  AffineMap inverse() const;
  Endo to_endo() const;
  bool operator==(const AffineMap& o) const;
  std::string to_string() const { return to_endo().to_string(); }

 private:
  Matrix m_;
  Scalar c0_, c1_;
};

/// (a x + p(y), b y + c) with a, b nonzero; p is stored as a univariate
/// polynomial in its single variable.
class TriMap {
 public:
  TriMap(Scalar a, MPoly p, Scalar b, Scalar c);
  static TriMap identity(const FieldSpec& field);
  /// (-x + p(y), y).
  static TriMap involution(const MPoly& p);
  /// Parses a univariate text in y, e.g. "y^5 + y^4", into p.
  static MPoly parse_p(const FieldSpec& field, std::string_view text);
  /// nullopt unless f has the triangular shape.
  static std::optional<TriMap> from_endo(const Endo& f);
  static TriMap from_affine(const AffineMap& a);

  const FieldSpec& field() const { return a_.field(); }
  const Scalar& a() const { return a_; }
  const MPoly& p() const { return p_; }
  const Scalar& b() const { return b_; }
  const Scalar& c() const { return c_; }

  /// Member of A∩B.
  bool is_affine() const { return p_.degree() <= 1; }
  bool is_identity() const;
  /// Member of B_2 = {(a x + c, b y + c')}.
  bool is_diagonal() const { return p_.degree() <= 0; }
  TriMap operator*(const TriMap& o) const;  // composition this∘o
  TriMap inverse() const;
  AffineMap to_affine() const;
  Endo to_endo() const;
  bool operator==(const TriMap& o) const;
  std::string to_string() const { return to_endo().to_string(); }

 private:
  Scalar a_;
  MPoly p_;
  Scalar b_, c_;
};

/// Factor of a tame word.  Reduced words keep A∩B elements as TriMap, so an
/// AffineMap factor of a reduced word always lies in A \ B.
using Factor = std::variant<AffineMap, TriMap>;

Endo factor_endo(const Factor& f);
Factor factor_inverse(const Factor& f);
std::string factor_to_string(const Factor& f);

/// Composition f_0∘f_1∘...∘f_k of affine and triangular factors.  A reduced
/// word alternates A \ B and B \ A factors, or is a single A∩B element.
class TameWord {
 public:
  explicit TameWord(const FieldSpec& field) : field_(field) {}
  /// Reduces in the amalgamated product A *_{A∩B} B.
  static TameWord reduce(const FieldSpec& field, std::span<const Factor> factors);
  static TameWord of(const Factor& f);

  const FieldSpec& field() const { return field_; }
  const std::vector<Factor>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }

  std::size_t affine_length() const;
  std::size_t triangular_length() const;
  /// Degrees of the B \ A factors in order.
  std::vector<long long> multidegree() const;

  TameWord inverse() const;
  /// Image of a point, applying the factors right to left without expanding.
  std::array<Scalar, 2> evaluate(const std::array<Scalar, 2>& pt) const;
  /// Reduced product this∘o.
  TameWord operator*(const TameWord& o) const;
  /// Exact equality in the group, decided by reducing this∘o^-1.
  bool same_element(const TameWord& o) const { return (*this * o.inverse()).is_identity(); }

  Endo to_endo() const;
  std::string to_string() const;

 private:
  FieldSpec field_;
  std::vector<Factor> factors_;
};

/// Degree-reduction factorization of a plane automorphism.
TameWord jvdk_factorize(const Endo& f);

std::size_t affine_length(const Endo& f);
std::size_t triangular_length(const Endo& f);
std::vector<long long> multidegree(const Endo& f);
bool in_Mr(const TameWord& w, long long r);

TameWord cyclic_reduce(const TameWord& w);

struct Classification {
  enum class Kind { TriangularizableElliptic, Henon } kind;
  /// Translation length on the Bass-Serre tree (0 for elliptic).
  std::size_t translation_length;
};
Classification classify(const TameWord& w);

/// (t1, t2) in A∩B with a = t1∘σ∘t2; a must lie in A \ B.
std::pair<TriMap, TriMap> sigma_decompose_affine(const AffineMap& a);

/// f = τ1∘σ∘i_1∘σ∘...∘σ∘i_n∘σ∘τ2 with i_j = (-x + p_j(y), y), deg p_j >= 2.
struct ReducedForm {
  TriMap tau1;
  std::vector<MPoly> involutions;
  TriMap tau2;

  std::size_t affine_length() const { return involutions.size() + 1; }
  std::vector<Factor> factors() const;
  std::vector<Factor> inverse_factors() const;
};

ReducedForm normal_form(const TameWord& w);

/// Word over B and the letters f, f^-1, stored as a DAG so that repeated
/// subwords are shared and evaluated once.
class GenWord {
 public:
  enum class Kind { Element, F, FInverse, Concat, Inverse };
  struct Node {
    Kind kind;
    std::optional<TriMap> element;
    std::vector<std::size_t> children;
  };

  std::size_t element(const TriMap& b);
  std::size_t f();
  std::size_t f_inverse();
  std::size_t concat(std::vector<std::size_t> children);
  std::size_t inverse(std::size_t id);

  const std::vector<Node>& nodes() const { return nodes_; }
  /// Value of node id once f is replaced by fw.
  TameWord evaluate(std::size_t id, const TameWord& fw) const;
  /// Number of f and f^-1 letters in the fully expanded word (saturating).
  std::uint64_t letter_count(std::size_t id) const;
  std::string describe(std::size_t root) const;

 private:
  std::vector<Node> nodes_;
  mutable std::vector<std::optional<TameWord>> cache_;
  mutable const TameWord* cache_owner_ = nullptr;
};

struct ReductionStep {
  std::size_t length;
  std::vector<long long> involution_degrees;
  std::string shift;
};

struct GeneratorReduction {
  GenWord word;
  std::size_t root;
  TameWord value;
  std::vector<ReductionStep> steps;
};

/// Builds, for 1 <= l_A(f) <= 4, a word in B and f^{±1} of affine length
/// exactly 1, following the case analysis for lengths 2, 3 and 4.
GeneratorReduction generator_reduce(const TameWord& f);

/// Tame word sending sources[i] to targets[i]; unchecked, see transitive_move.
TameWord transitive_move_word(const std::vector<std::array<Scalar, 2>>& sources,
                              const std::vector<std::array<Scalar, 2>>& targets);
/// The same move expanded, with its inverse.
AutoCert transitive_move(const std::vector<std::array<Scalar, 2>>& sources,
                         const std::vector<std::array<Scalar, 2>>& targets);

}  // namespace polyaut
