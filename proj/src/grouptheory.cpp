#include "polyaut/grouptheory.hpp"

#include <deque>
#include <unordered_set>

#include "polyaut/error.hpp"
#include "polyaut/random.hpp"

namespace polyaut {

namespace {

Matrix inverse_of(const Matrix& m) {
  auto inv = m.inverse();
  if (!inv.has_value()) fail(Reason::InvalidArgument, "matrix " + m.to_string() + " is singular");
  return *inv;
}

}  // namespace

GroupEnum GroupEnum::closure(const FieldSpec& field, std::size_t dim, const std::vector<Matrix>& generators,
                             std::size_t cap) {
  GroupEnum g;
  g.field_ = field;
  g.dim_ = dim;
  g.generators_ = generators;
  for (const auto& m : generators) {
    require(m.rows() == dim && m.cols() == dim, Reason::ArityMismatch, "generator has the wrong size");
    check_same_field(m.field(), field);
    if (m.det().is_zero()) fail(Reason::InvalidArgument, "generator " + m.to_string() + " is singular");
  }
  std::unordered_set<Matrix, MatrixHash> seen;
  Matrix id = Matrix::identity(field, dim);
  seen.insert(id);
  g.elements_.push_back(id);
  // Right multiplication by generators from the identity reaches every word;
  // in a finite group the inverses are positive words as well.
  for (std::size_t i = 0; i < g.elements_.size(); ++i) {
    for (const auto& gen : generators) {
      Matrix y = g.elements_[i] * gen;
      if (seen.insert(y).second) {
        if (g.elements_.size() >= cap)
          fail(Reason::ClosureCapExceeded, "closure exceeds " + std::to_string(cap) + " elements");
        g.elements_.push_back(std::move(y));
      }
    }
  }
  for (const auto& m : g.elements_)
    require(seen.count(inverse_of(m)) == 1, Reason::PropertyViolation, "closure is missing an inverse");
  return g;
}

bool GroupEnum::contains(const Matrix& m) const {
  for (const auto& e : elements_)
    if (e == m) return true;
  return false;
}

GroupEnum group_closure(const FieldSpec& field, std::size_t dim, const std::vector<Matrix>& generators,
                        std::size_t cap) {
  return GroupEnum::closure(field, dim, generators, cap);
}

Matrix commutator(const Matrix& g, const Matrix& h) { return g * h * inverse_of(g) * inverse_of(h); }

GroupEnum derived_subgroup(const GroupEnum& g) {
  std::unordered_set<Matrix, MatrixHash> seen;
  std::vector<Matrix> gens;
  for (const auto& a : g.elements())
    for (const auto& b : g.elements()) {
      Matrix c = commutator(a, b);
      if (!c.is_identity() && seen.insert(c).second) gens.push_back(std::move(c));
    }
  return GroupEnum::closure(g.field(), g.dim(), gens, g.order());
}

DerivedSeriesReport derived_series(const GroupEnum& g) {
  DerivedSeriesReport r;
  r.subgroups.push_back(g);
  r.orders.push_back(g.order());
  while (!r.subgroups.back().is_trivial()) {
    GroupEnum next = derived_subgroup(r.subgroups.back());
    if (next.order() == r.subgroups.back().order()) return r;  // perfect: never solvable
    r.orders.push_back(next.order());
    r.subgroups.push_back(std::move(next));
  }
  r.length = r.subgroups.size() - 1;
  return r;
}

bool is_normal_subgroup(const GroupEnum& sub, const GroupEnum& g) {
  std::unordered_set<Matrix, MatrixHash> members(sub.elements().begin(), sub.elements().end());
  for (const auto& a : g.elements()) {
    Matrix ainv = inverse_of(a);
    for (const auto& h : sub.elements())
      if (!members.count(a * h * ainv)) return false;
  }
  return true;
}

std::size_t element_order(const Matrix& m) {
  Matrix p = m;
  for (std::size_t k = 1;; ++k) {
    if (p.is_identity()) return k;
    require(k <= kDefaultClosureCap, Reason::ClosureCapExceeded, "element order is too large");
    p = p * m;
  }
}

bool is_cyclic(const GroupEnum& g) {
  for (const auto& m : g.elements())
    if (element_order(m) == g.order()) return true;
  return false;
}

SpanCondition span_condition(const GroupEnum& h) {
  require(h.dim() == 2, Reason::ArityMismatch, "span condition is defined for plane groups");
  const FieldSpec& f = h.field();
  // Columns of h - I over all h span {h v - v}.
  std::vector<std::vector<Scalar>> cols;
  for (const auto& m : h.elements()) {
    Matrix d = m - Matrix::identity(f, 2);
    for (std::size_t j = 0; j < 2; ++j) cols.push_back({d(0, j), d(1, j)});
  }
  Matrix span(f, 2, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    span(0, j) = cols[j][0];
    span(1, j) = cols[j][1];
  }
  const std::size_t r = span.rank();
  if (r == 2) return {true, std::nullopt};
  if (r == 0) return {false, std::nullopt};
  for (const auto& c : cols)
    if (!c[0].is_zero() || !c[1].is_zero()) return {false, c};
  return {false, std::nullopt};
}

AffineExtensionReport affine_extension_series(const GroupEnum& g) {
  require(g.dim() == 2, Reason::ArityMismatch, "affine extension series needs a plane group");
  AffineExtensionReport rep{derived_series(g), {}, 0, 0, std::nullopt, std::nullopt};
  require(rep.base.length.has_value(), Reason::InvalidArgument, "group is not solvable");
  const auto& subs = rep.base.subgroups;
  std::size_t m = 0;
  while (!is_cyclic(subs[m])) {
    SpanCondition sc = span_condition(subs[m]);
    rep.stage_spans.push_back(sc.spans_plane);
    // A non-cyclic finite subgroup of GL(2) always spans; failure here would
    // contradict the lemma and is reported rather than skipped.
    if (!sc.spans_plane)
      fail(Reason::PropertyViolation, "non-cyclic stage " + std::to_string(m) + " does not span the plane");
    ++m;
  }
  rep.cyclic_stage = m;
  if (subs[m].is_trivial()) {
    // D^m(G ⋉ plane) is the plane of translations: abelian and nontrivial.
    rep.derived_length = m + 1;
    return rep;
  }
  // D^m(G) is cyclic and nontrivial, so D^{m+1}(G ⋉ plane) is the nonzero
  // subspace spanned by h v - v, and D^{m+2} is trivial.
  const FieldSpec& f = g.field();
  for (const auto& h : subs[m].elements()) {
    if (h.is_identity()) continue;
    for (std::size_t j = 0; j < 2; ++j) {
      std::vector<Scalar> v{Scalar::zero(f), Scalar::zero(f)};
      v[j] = Scalar::one(f);
      auto hv = h.apply(v);
      std::vector<Scalar> w{hv[0] - v[0], hv[1] - v[1]};
      if (!w[0].is_zero() || !w[1].is_zero()) {
        rep.witness_element = h;
        rep.witness_translation = w;
        rep.derived_length = m + 2;
        return rep;
      }
    }
  }
  fail(Reason::PropertyViolation, "nontrivial cyclic stage acts trivially on the plane");
}

std::vector<Matrix> binary_octahedral_generators(const FieldSpec& field) {
  require(field.kind() == FieldKind::Cyclotomic8, Reason::InvalidArgument,
          "the binary octahedral group needs the field zeta8");
  const Scalar z = Scalar::zeta(field), i = z * z, one = Scalar::one(field), zero = Scalar::zero(field);
  const Scalar half = Scalar::from_rational(field, mpq_class(1, 2));
  // diag(zeta, zeta^-1) lifts a rotation of order 4; the second generator
  // lifts a rotation of order 3.
  Matrix a = Matrix::from_rows(field, {{z, zero}, {zero, z.inverse()}});
  Matrix b = Matrix::from_rows(field, {{(one + i) * half, (one + i) * half}, {(i - one) * half, (one - i) * half}});
  return {a, b};
}

std::vector<Matrix> quaternion_generators(const FieldSpec& field) {
  require(field.kind() == FieldKind::Cyclotomic8, Reason::InvalidArgument,
          "the quaternion group is built over the field zeta8");
  const Scalar z = Scalar::zeta(field), i = z * z, one = Scalar::one(field), zero = Scalar::zero(field);
  return {Matrix::from_rows(field, {{i, zero}, {zero, -i}}), Matrix::from_rows(field, {{zero, one}, {-one, zero}})};
}

std::vector<Matrix> klein_generators(const FieldSpec& field) {
  const Scalar one = Scalar::one(field), zero = Scalar::zero(field);
  return {Matrix::from_rows(field, {{-one, zero}, {zero, one}}), Matrix::from_rows(field, {{one, zero}, {zero, -one}})};
}

Endo dilatation(const FieldSpec& field, std::size_t n, std::size_t j, const Scalar& lambda) {
  require(j < n, Reason::InvalidArgument, "index out of range");
  require(!lambda.is_zero(), Reason::InvalidArgument, "dilatation factor must be nonzero");
  std::vector<MPoly> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(MPoly::variable(field, n, i) * (i == j ? lambda : Scalar::one(field)));
  return Endo(std::move(c));
}

Endo elementary(std::size_t n, std::size_t j, const MPoly& q) {
  require(j < n && q.nvars() == n, Reason::InvalidArgument, "index or arity out of range");
  for (std::size_t i = 0; i <= j; ++i)
    require(!q.depends_on(i), Reason::InvalidArgument, "q may only involve variables after the index");
  std::vector<MPoly> c;
  for (std::size_t i = 0; i < n; ++i) {
    MPoly v = MPoly::variable(q.field(), n, i);
    c.push_back(i == j ? v + q : v);
  }
  return Endo(std::move(c));
}

bool in_U(const Endo& f, std::size_t k) {
  const std::size_t n = f.n();
  for (std::size_t i = 0; i < n; ++i) {
    MPoly rest = f[i] - MPoly::variable(f.field(), n, i);
    if (i >= k) {
      if (!rest.is_zero()) return false;
    } else {
      for (std::size_t v = 0; v <= i; ++v)
        if (rest.depends_on(v)) return false;
    }
  }
  return true;
}

namespace {

// Polynomial in the variables after j with small degree and coefficients.
MPoly random_later(const FieldSpec& field, std::size_t n, std::size_t j, Rng& rng) {
  std::vector<MPoly::Term> terms;
  const int count = static_cast<int>(rng.uniform(1, 3));
  for (int t = 0; t < count; ++t) {
    Monomial m;
    if (j + 1 < n) {
      const int deg = static_cast<int>(rng.uniform(0, 3));
      for (int d = 0; d < deg; ++d) {
        std::size_t v = static_cast<std::size_t>(rng.uniform(static_cast<long long>(j) + 1, static_cast<long long>(n) - 1));
        m.set(v, m[v] + 1);
      }
    }
    terms.emplace_back(m, random_scalar(field, rng, -3, 3));
  }
  return MPoly::from_terms(field, n, std::move(terms));
}

// Element e(k-1, p_{k-1})∘...∘e(0, p_0) of U_k and its inverse.
std::pair<Endo, Endo> random_U(const FieldSpec& field, std::size_t n, std::size_t k, Rng& rng) {
  Endo f = Endo::identity(field, n), finv = Endo::identity(field, n);
  for (std::size_t j = 0; j < k; ++j) {
    MPoly p = random_later(field, n, j, rng);
    f = compose(elementary(n, j, p), f);
    finv = compose(finv, elementary(n, j, -p));
  }
  return {f, finv};
}

Endo commutator4(const Endo& a, const Endo& b, const Endo& ainv, const Endo& binv) {
  return compose(compose(compose(a, b), ainv), binv);
}

}  // namespace

TriangularIdentityReport triangular_identities(const FieldSpec& field, std::size_t n, std::size_t trials,
                                               std::uint64_t seed) {
  require(n >= 2 && n <= kMaxVars, Reason::InvalidArgument, "n must lie in [2, 8]");
  TriangularIdentityReport rep{n, trials, seed};
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    // [e(j,q), d(j,lambda)] = e(j, (1 - lambda) q)
    {
      std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 1));
      MPoly q = random_later(field, n, j, rng);
      Scalar lambda = random_nonzero_scalar(field, rng, -4, 4);
      Endo lhs = commutator4(elementary(n, j, q), dilatation(field, n, j, lambda), elementary(n, j, -q),
                             dilatation(field, n, j, lambda.inverse()));
      Endo rhs = elementary(n, j, q * (Scalar::one(field) - lambda));
      if (lhs != rhs)
        fail(Reason::PropertyViolation, "[e(j,q), d(j,l)] identity fails for j=" + std::to_string(j) +
                                            ", q=" + q.to_string() + ", l=" + lambda.to_string());
      ++rep.dilatation_checks;
    }
    // [e(j,q), e(j+1,1)] = e(j, Delta_{j+1} q)
    {
      std::size_t j = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 2));
      MPoly q = random_later(field, n, j, rng);
      MPoly one = MPoly::constant(field, n, 1);
      Endo lhs = commutator4(elementary(n, j, q), elementary(n, j + 1, one), elementary(n, j, -q),
                             elementary(n, j + 1, -one));
      Endo rhs = elementary(n, j, q.difference_delta(j + 1));
      if (lhs != rhs)
        fail(Reason::PropertyViolation,
             "[e(j,q), e(j+1,1)] identity fails for j=" + std::to_string(j) + ", q=" + q.to_string());
      ++rep.shift_checks;
    }
    // [U_{k+1}, U_{k+1}] ⊂ U_k
    {
      std::size_t k = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 1));
      auto [f, finv] = random_U(field, n, k + 1, rng);
      auto [g, ginv] = random_U(field, n, k + 1, rng);
      if (!(in_U(f, k + 1) && in_U(g, k + 1) && compose(f, finv).is_identity()))
        fail(Reason::PropertyViolation, "sampled element is not in U_" + std::to_string(k + 1));
      Endo c = commutator4(f, g, finv, ginv);
      if (!in_U(c, k))
        fail(Reason::PropertyViolation, "commutator " + c.to_string() + " leaves U_" + std::to_string(k));
      ++rep.membership_checks;
    }
  }
  return rep;
}

}  // namespace polyaut
