#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyaut/endo.hpp"
#include "polyaut/matrix.hpp"

namespace polyaut {

inline constexpr std::size_t kDefaultClosureCap = 10000;

/// Finite group of invertible square matrices, stored as an explicit element
/// list (identity first, then breadth-first order from the generators).
class GroupEnum {
 public:
  /// Closure of the generators under multiplication; throws
  /// ClosureCapExceeded past `cap` elements.
  static GroupEnum closure(const FieldSpec& field, std::size_t dim, const std::vector<Matrix>& generators,
                           std::size_t cap = kDefaultClosureCap);

  const FieldSpec& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::vector<Matrix>& generators() const { return generators_; }
  bool contains(const Matrix& m) const;
  bool is_trivial() const { return elements_.size() == 1; }

 private:
  FieldSpec field_;
  std::size_t dim_ = 0;
  std::vector<Matrix> elements_;
  std::vector<Matrix> generators_;
};

GroupEnum group_closure(const FieldSpec& field, std::size_t dim, const std::vector<Matrix>& generators,
                        std::size_t cap = kDefaultClosureCap);

/// g h g^-1 h^-1.
Matrix commutator(const Matrix& g, const Matrix& h);

/// Subgroup generated by all commutators.
GroupEnum derived_subgroup(const GroupEnum& g);

struct DerivedSeriesReport {
  std::vector<std::size_t> orders;
  /// Index of the first trivial term.  A non-solvable group never reaches
  /// the trivial group; length is then nullopt and the series stops where
  /// it stabilizes.
  std::optional<std::size_t> length;
  std::vector<GroupEnum> subgroups;
};

DerivedSeriesReport derived_series(const GroupEnum& g);

/// g h g^-1 in sub for all g in G, h in sub.
bool is_normal_subgroup(const GroupEnum& sub, const GroupEnum& g);
bool is_cyclic(const GroupEnum& g);
std::size_t element_order(const Matrix& m);

/// Span of {h v - v : h in H, v in the plane}.
struct SpanCondition {
  bool spans_plane;
  /// Nonzero direction containing the span when it is a line; nullopt when
  /// it spans the plane or is zero.
  std::optional<std::vector<Scalar>> direction;
};

SpanCondition span_condition(const GroupEnum& h);

struct AffineExtensionReport {
  DerivedSeriesReport base;
  /// For each i with D^i(G) non-cyclic: the span condition holds, giving
  /// D^{i+1}(G ⋉ plane) = D^{i+1}(G) ⋉ plane.
  std::vector<bool> stage_spans;
  /// First stage m with D^i(G ⋉ plane) = D^i(G) ⋉ plane for all i <= m and
  /// D^m(G) cyclic.
  std::size_t cyclic_stage;
  /// Derived length of G ⋉ plane.
  std::size_t derived_length;
  /// For nontrivial D^m(G): h in D^m(G) and v with [h, translation v] the
  /// nonzero translation h v - v.
  std::optional<Matrix> witness_element;
  std::optional<std::vector<Scalar>> witness_translation;
};

/// Derived length of G ⋉ plane for a finite G in GL(2), certified through the
/// span condition at each non-cyclic stage.
AffineExtensionReport affine_extension_series(const GroupEnum& g);

/// Generators over Q(zeta) of the binary octahedral group, the quaternion
/// group, and the diagonal Klein group {diag(±1, ±1)} over any field.
std::vector<Matrix> binary_octahedral_generators(const FieldSpec& field);
std::vector<Matrix> quaternion_generators(const FieldSpec& field);
std::vector<Matrix> klein_generators(const FieldSpec& field);

/// Dilatation d(j, lambda) and elementary map e(j, q) in n variables; j is
/// 0-based and q may only involve variables after j.
Endo dilatation(const FieldSpec& field, std::size_t n, std::size_t j, const Scalar& lambda);
Endo elementary(std::size_t n, std::size_t j, const MPoly& q);

/// Member of U_k: f_i = x_i for i >= k, f_i - x_i depends only on later
/// variables for i < k (0-based).
bool in_U(const Endo& f, std::size_t k);

struct TriangularIdentityReport {
  std::size_t n;
  std::size_t trials;
  std::uint64_t seed;
  std::size_t dilatation_checks = 0;
  std::size_t shift_checks = 0;
  std::size_t membership_checks = 0;
};

/// Random instances of [e(j,q), d(j,lambda)] = e(j, (1 - lambda) q) and
/// [e(j,q), e(j+1,1)] = e(j, Delta_{j+1} q), plus [U_{k+1}, U_{k+1}] ⊂ U_k.
/// Throws PropertyViolation with the counterexample on failure.
TriangularIdentityReport triangular_identities(const FieldSpec& field, std::size_t n, std::size_t trials,
                                               std::uint64_t seed);

}  // namespace polyaut
