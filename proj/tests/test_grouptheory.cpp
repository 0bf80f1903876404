#include <functional>

#include "doctest.h"
#include "polyaut/error.hpp"
#include "polyaut/grouptheory.hpp"

using namespace polyaut;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime(5);
const FieldSpec Z8 = FieldSpec::cyclotomic8();

GroupEnum two_O() { return group_closure(Z8, 2, binary_octahedral_generators(Z8)); }

Matrix M(const FieldSpec& f, std::vector<std::vector<long long>> rows) {
  std::vector<std::vector<Scalar>> r;
  for (auto& row : rows) {
    r.emplace_back();
    for (long long v : row) r.back().push_back(Scalar::from_int(f, v));
  }
  return Matrix::from_rows(f, r);
}

// G ⋉ F_p^2 as 3x3 matrices [[h, v], [0, 1]].
GroupEnum semidirect(const FieldSpec& f, const std::vector<Matrix>& gens) {
  std::vector<Matrix> big;
  for (const auto& g : gens) {
    Matrix m = Matrix::identity(f, 3);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = g(i, j);
    big.push_back(m);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    Matrix t = Matrix::identity(f, 3);
    t(k, 2) = Scalar::one(f);
    big.push_back(t);
  }
  return group_closure(f, 3, big);
}

}  // namespace

TEST_CASE("closure orders") {
  CHECK(group_closure(Q, 2, {M(Q, {{-1, 0}, {0, -1}})}).order() == 2);
  CHECK(group_closure(Z8, 2, quaternion_generators(Z8)).order() == 8);
  GroupEnum g = two_O();
  CHECK(g.order() == 48);
  // 2:1 onto its projective image: the scalar elements are exactly ±I, and
  // the image has order 24
  std::size_t scalars = 0;
  for (const auto& m : g.elements()) {
    if (m(0, 1).is_zero() && m(1, 0).is_zero() && m(0, 0) == m(1, 1)) ++scalars;
    CHECK(g.contains(m * Scalar::from_int(Z8, -1)));
  }
  CHECK(scalars == 2);
  CHECK(g.order() / 2 == 24);
  CHECK(g.elements().front().is_identity());

  // translations-like infinite group over Q hits the cap
  bool capped = false;
  try {
    group_closure(Q, 2, {M(Q, {{1, 1}, {0, 1}})}, 100);
  } catch (const Error& e) {
    capped = e.reason() == Reason::ClosureCapExceeded;
  }
  CHECK(capped);
}

TEST_CASE("derived series") {
  GroupEnum g = two_O();
  DerivedSeriesReport r = derived_series(g);
  CHECK(r.orders == std::vector<std::size_t>{48, 24, 8, 2, 1});
  REQUIRE(r.length);
  CHECK(*r.length == 4);
  for (std::size_t i = 1; i < r.subgroups.size(); ++i) {
    CHECK(is_normal_subgroup(r.subgroups[i], r.subgroups[i - 1]));
    CHECK(is_normal_subgroup(r.subgroups[i], g));
  }
  // D^2 is a quaternion group: order 8, non-cyclic, a single involution
  const GroupEnum& d2 = r.subgroups[2];
  CHECK_FALSE(is_cyclic(d2));
  std::size_t involutions = 0;
  for (const auto& m : d2.elements()) {
    CHECK(4 % element_order(m) == 0);
    if (element_order(m) == 2) ++involutions;
  }
  CHECK(involutions == 1);

  DerivedSeriesReport q8 = derived_series(group_closure(Z8, 2, quaternion_generators(Z8)));
  CHECK(q8.orders == std::vector<std::size_t>{8, 2, 1});
  CHECK(*q8.length == 2);

  DerivedSeriesReport v4 = derived_series(group_closure(Q, 2, klein_generators(Q)));
  CHECK(*v4.length <= 1);
  CHECK(*derived_series(group_closure(Q, 2, {})).length == 0);

  // SL(2, F_5) is perfect: the series stabilizes and never reaches 1
  DerivedSeriesReport sl = derived_series(group_closure(F5, 2, {M(F5, {{1, 1}, {0, 1}}), M(F5, {{1, 0}, {1, 1}})}));
  CHECK(sl.orders.front() == 120);
  CHECK_FALSE(sl.length);
}

TEST_CASE("cyclicity and span condition") {
  GroupEnum q8 = group_closure(Z8, 2, quaternion_generators(Z8));
  CHECK_FALSE(is_cyclic(q8));
  CHECK(span_condition(q8).spans_plane);

  const Scalar z = Scalar::zeta(Z8), one = Scalar::one(Z8), zero = Scalar::zero(Z8);
  GroupEnum c8 = group_closure(Z8, 2, {Matrix::from_rows(Z8, {{z, zero}, {zero, one}})});
  CHECK(c8.order() == 8);
  CHECK(is_cyclic(c8));
  SpanCondition sc = span_condition(c8);
  CHECK_FALSE(sc.spans_plane);
  REQUIRE(sc.direction);
  CHECK_FALSE((*sc.direction)[0].is_zero());
  CHECK((*sc.direction)[1].is_zero());

  GroupEnum triv = group_closure(Z8, 2, {});
  CHECK(is_cyclic(triv));
  CHECK_FALSE(span_condition(triv).spans_plane);
  CHECK_FALSE(span_condition(triv).direction);

  // Over every group built here: non-cyclic implies the span is the plane,
  // equivalently a span confined to a line forces a cyclic group.
  std::vector<GroupEnum> groups{q8, c8, triv, group_closure(Z8, 2, klein_generators(Z8))};
  GroupEnum g = two_O();
  for (const auto& s : derived_series(g).subgroups) groups.push_back(s);
  for (const auto& m : g.elements()) groups.push_back(group_closure(Z8, 2, {m}));
  for (std::size_t a = 0; a < g.elements().size(); a += 5)
    for (std::size_t b = a + 1; b < g.elements().size(); b += 7)
      groups.push_back(group_closure(Z8, 2, {g.elements()[a], g.elements()[b]}));
  for (const auto& h : groups) {
    SpanCondition s = span_condition(h);
    if (!is_cyclic(h)) CHECK(s.spans_plane);
    if (!s.spans_plane) CHECK(is_cyclic(h));
  }
}

TEST_CASE("affine extension series") {
  AffineExtensionReport r = affine_extension_series(two_O());
  CHECK(r.derived_length == 5);
  CHECK(r.cyclic_stage == 3);
  CHECK(r.stage_spans == std::vector<bool>{true, true, true});
  REQUIRE(r.witness_element);
  CHECK(*r.witness_element == Matrix::identity(Z8, 2) * Scalar::from_int(Z8, -1));
  REQUIRE(r.witness_translation);
  CHECK_FALSE((*r.witness_translation)[0].is_zero());

  CHECK(affine_extension_series(group_closure(Q, 2, {})).derived_length == 1);
  AffineExtensionReport v4 = affine_extension_series(group_closure(Q, 2, klein_generators(Q)));
  CHECK(v4.derived_length == 2);
  CHECK(v4.stage_spans == std::vector<bool>{true});
}

TEST_CASE("affine extension agrees with brute force over F_5") {
  // Q8 over F_5 with i = 2
  std::vector<Matrix> q8{M(F5, {{2, 0}, {0, 3}}), M(F5, {{0, 1}, {4, 0}})};
  std::vector<std::vector<Matrix>> cases{q8, klein_generators(F5), {M(F5, {{2, 0}, {0, 1}})}, {}};
  for (const auto& gens : cases) {
    GroupEnum h = group_closure(F5, 2, gens);
    GroupEnum big = semidirect(F5, gens);
    CHECK(big.order() == h.order() * 25);
    DerivedSeriesReport brute = derived_series(big);
    REQUIRE(brute.length);
    CHECK_MESSAGE(affine_extension_series(h).derived_length == *brute.length, "order ", h.order());
  }
}

TEST_CASE("triangular identities") {
  // n = 2: [e(1, y^2), d(1, 2)] = e(1, -y^2)
  {
    Endo e = elementary(2, 0, MPoly::parse(Q, 2, "y^2")), einv = elementary(2, 0, MPoly::parse(Q, 2, "-y^2"));
    Endo d = dilatation(Q, 2, 0, Scalar::from_int(Q, 2)), dinv = dilatation(Q, 2, 0, Scalar::parse(Q, "1/2"));
    CHECK(compose(compose(compose(e, d), einv), dinv) == elementary(2, 0, MPoly::parse(Q, 2, "-y^2")));
    // lambda = 1 gives the identity
    Endo one = dilatation(Q, 2, 0, Scalar::one(Q));
    CHECK(compose(compose(compose(e, one), einv), one).is_identity());
  }
  // n = 3: [e(1, x2 x3), e(2, 1)] = e(1, x3)
  {
    MPoly q = MPoly::parse(Q, 3, "y*z");
    Endo lhs = compose(compose(compose(elementary(3, 0, q), elementary(3, 1, MPoly::constant(Q, 3, 1))),
                               elementary(3, 0, -q)),
                       elementary(3, 1, MPoly::constant(Q, 3, -1)));
    CHECK(lhs == elementary(3, 0, MPoly::parse(Q, 3, "z")));
  }
  for (const FieldSpec& f : {Q, F5})
    for (std::size_t n = 2; n <= 4; ++n) {
      TriangularIdentityReport r = triangular_identities(f, n, 200, 100 + n);
      CHECK(r.dilatation_checks == 200);
      CHECK(r.shift_checks == 200);
      CHECK(r.membership_checks == 200);
    }
  CHECK(in_U(elementary(3, 1, MPoly::parse(Q, 3, "z^2")), 2));
  CHECK_FALSE(in_U(elementary(3, 1, MPoly::parse(Q, 3, "z^2")), 1));
}
