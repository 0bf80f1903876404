#include "polyaut/endo.hpp"

#include <map>

namespace polyaut {

Endo::Endo(std::vector<MPoly> components) : c_(std::move(components)) {
  require(!c_.empty(), Reason::ArityMismatch, "an endomorphism needs at least one component");
  for (const auto& p : c_) {
    check_same_field(c_.front().field(), p.field());
    if (p.nvars() != c_.size())
      fail(Reason::ArityMismatch,
           "component arity " + std::to_string(p.nvars()) + " differs from dimension " + std::to_string(c_.size()));
  }
}

Endo Endo::identity(const FieldSpec& field, std::size_t n) {
  std::vector<MPoly> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(MPoly::variable(field, n, i));
  return Endo(std::move(c));
}

Endo Endo::parse(const FieldSpec& field, std::size_t n, const std::vector<std::string>& components) {
  if (components.size() != n)
    fail(Reason::ArityMismatch,
         "expected " + std::to_string(n) + " components, got " + std::to_string(components.size()));
  std::vector<MPoly> c;
  for (const auto& s : components) c.push_back(MPoly::parse(field, n, s));
  return Endo(std::move(c));
}

Endo Endo::affine(const Matrix& m, std::span<const Scalar> c) {
  const std::size_t n = m.rows();
  require(m.cols() == n && c.size() == n, Reason::ArityMismatch, "affine map shape mismatch");
  std::vector<MPoly> comps;
  for (std::size_t i = 0; i < n; ++i) {
    MPoly p = MPoly::constant(m.field(), n, c[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (!m(i, j).is_zero()) p += MPoly::variable(m.field(), n, j) * m(i, j);
    comps.push_back(std::move(p));
  }
  return Endo(std::move(comps));
}

Endo Endo::translation(const FieldSpec& field, std::span<const Scalar> c) {
  return affine(Matrix::identity(field, c.size()), c);
}

Degree Endo::degree() const {
  Degree d;
  for (const auto& p : c_) d = std::max(d, p.degree());
  return d;
}

bool Endo::is_identity() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!(c_[i] == MPoly::variable(field(), n(), i))) return false;
  return true;
}

std::vector<Scalar> Endo::evaluate(std::span<const Scalar> point) const {
  std::vector<Scalar> out;
  for (const auto& p : c_) out.push_back(p.evaluate(point));
  return out;
}

std::vector<Scalar> Endo::constant_terms() const {
  std::vector<Scalar> out;
  for (const auto& p : c_) out.push_back(p.constant_term());
  return out;
}

Matrix Endo::linear_matrix() const {
  Matrix m(field(), n(), n());
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j) m(i, j) = c_[i].coefficient(Monomial::variable(j));
  return m;
}

Endo Endo::homogeneous_part(long long d) const {
  std::vector<MPoly> c;
  for (const auto& p : c_) c.push_back(p.homogeneous_part(d));
  return Endo(std::move(c));
}

std::string Endo::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? ", " : "") + c_[i].to_string();
  return s + ")";
}

Endo compose(const Endo& f, const Endo& g) {
  check_same_field(f.field(), g.field());
  require(f.n() == g.n(), Reason::ArityMismatch, "cannot compose maps of different dimension");
  std::vector<MPoly> c;
  for (const auto& p : f.components()) c.push_back(p.substitute(g.components()));
  return Endo(std::move(c));
}

namespace {

MPoly det_expand(const std::vector<std::vector<MPoly>>& m, std::vector<std::size_t>& cols, std::size_t row) {
  const std::size_t n = m.size();
  if (row == n) return MPoly::constant(m[0][0].field(), m[0][0].nvars(), 1);
  MPoly acc(m[0][0].field(), m[0][0].nvars());
  int sign = 1;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::size_t c = cols[k];
    if (!m[row][c].is_zero()) {
      cols.erase(cols.begin() + static_cast<long>(k));
      MPoly minor = det_expand(m, cols, row + 1);
      cols.insert(cols.begin() + static_cast<long>(k), c);
      MPoly term = m[row][c] * minor;
      acc = sign > 0 ? acc + term : acc - term;
    }
    sign = -sign;
  }
  return acc;
}

}  // namespace

MPoly jacobian_det(const Endo& f) {
  std::vector<std::vector<MPoly>> m(f.n());
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t j = 0; j < f.n(); ++j) m[i].push_back(f[i].partial_derivative(j));
  std::vector<std::size_t> cols(f.n());
  for (std::size_t j = 0; j < f.n(); ++j) cols[j] = j;
  return det_expand(m, cols, 0);
}

Endo linear_part(const Endo& f) { return f.homogeneous_part(1); }

Endo translate_conjugate(const Endo& f, std::span<const Scalar> c) {
  require(c.size() == f.n(), Reason::ArityMismatch, "translation vector has wrong length");
  Endo g = compose(f, Endo::translation(f.field(), c));
  std::vector<Scalar> back = g.constant_terms();
  for (auto& s : back) s = -s;
  return compose(Endo::translation(f.field(), back), g);
}

namespace {

// Homogeneous parts of G^e for the exponent vectors e occurring in f, where
// G = g_1 + g_2 + ... is the formal inverse being built.  Part d of any
// product only needs operand parts of degree below d, so the table can be
// extended one degree at a time as new g_d become known.
class PowerTable {
 public:
  PowerTable(const FieldSpec& field, std::size_t n) : field_(field), n_(n) {
    for (std::size_t i = 0; i < n; ++i) {
      Monomial m = Monomial::variable(i);
      index_[m] = nodes_.size();
      nodes_.push_back(Node{m, 1, npos, npos, {}});
    }
  }

  std::size_t node_for(const Monomial& e) {
    auto it = index_.find(e);
    if (it != index_.end()) return it->second;
    // Split off the last variable present: e = rest * x_v^k.
    std::size_t v = n_;
    while (v > 0 && e[v - 1] == 0) --v;
    --v;
    Monomial rest = e;
    std::size_t left, right;
    if (e[v] == e.total_degree()) {
      Monomial lower = e;
      lower.set(v, e[v] - 1);
      left = node_for(lower);
      right = node_for(Monomial::variable(v));
    } else {
      rest.set(v, 0);
      Monomial pw;
      pw.set(v, e[v]);
      left = node_for(rest);
      right = node_for(pw);
    }
    std::size_t id = nodes_.size();
    nodes_.push_back(Node{e, static_cast<long long>(e.total_degree()), left, right, {}});
    index_[e] = id;
    return id;
  }

  void set_base_part(std::size_t i, MPoly part) { nodes_[i].parts.push_back(std::move(part)); }

  // Computes part d of every product node; base parts below d must exist.
  void advance(long long d) {
    for (auto& nd : nodes_) {
      if (nd.left == npos) continue;
      MPoly sum(field_, n_);
      if (d >= nd.min_degree) {
        const Node& a = nodes_[nd.left];
        const Node& b = nodes_[nd.right];
        for (long long j = a.min_degree; j <= d - b.min_degree; ++j) {
          const MPoly& pa = part(a, j);
          if (pa.is_zero()) continue;
          const MPoly& pb = part(b, d - j);
          if (!pb.is_zero()) sum += pa * pb;
        }
      }
      nd.parts.push_back(std::move(sum));
    }
  }

  // Part d of node id (zero below its minimum degree).
  const MPoly& part_of(std::size_t id, long long d) const { return part(nodes_[id], d); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Node {
    Monomial exps;
    long long min_degree;
    std::size_t left, right;
    // Base nodes store parts from degree 1; products from degree 1 as well,
    // zero below the minimum degree.
    std::vector<MPoly> parts;
  };

  const MPoly& part(const Node& nd, long long d) const {
    if (d < 1 || d > static_cast<long long>(nd.parts.size())) return zero_();
    return nd.parts[static_cast<std::size_t>(d - 1)];
  }
  const MPoly& zero_() const {
    if (!zero_cache_) zero_cache_.emplace(field_, n_);
    return *zero_cache_;
  }

  FieldSpec field_;
  std::size_t n_;
  std::vector<Node> nodes_;
  std::map<Monomial, std::size_t> index_;
  mutable std::optional<MPoly> zero_cache_;
};

}  // namespace

std::vector<Endo> formal_inverse_truncated(const Endo& f, long long D) {
  const FieldSpec& field = f.field();
  const std::size_t n = f.n();
  for (const auto& c : f.constant_terms())
    require(c.is_zero(), Reason::NonZeroConstantTerm, "formal inverse needs f(0) = 0");
  std::optional<Matrix> linv = f.linear_matrix().inverse();
  require(linv.has_value(), Reason::LinearPartSingular, "linear part of f is singular");

  // Nonlinear part of each component, as (node, coefficient) lists.
  PowerTable table(field, n);
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> nonlinear(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : f[i].terms())
      if (m.total_degree() >= 2) nonlinear[i].emplace_back(table.node_for(m), c);

  auto apply_linv = [&](const std::vector<MPoly>& v) {
    std::vector<MPoly> out;
    for (std::size_t i = 0; i < n; ++i) {
      MPoly s(field, n);
      for (std::size_t j = 0; j < n; ++j)
        if (!(*linv)(i, j).is_zero() && !v[j].is_zero()) s += v[j] * (*linv)(i, j);
      out.push_back(std::move(s));
    }
    return out;
  };

  std::vector<Endo> parts;
  if (D < 1) return parts;
  std::vector<MPoly> g1 = apply_linv(Endo::identity(field, n).components());
  for (std::size_t i = 0; i < n; ++i) table.set_base_part(i, g1[i]);
  table.advance(1);
  parts.emplace_back(g1);
  for (long long d = 2; d <= D; ++d) {
    table.advance(d);
    std::vector<MPoly> rhs;
    for (std::size_t i = 0; i < n; ++i) {
      MPoly s(field, n);
      for (const auto& [id, c] : nonlinear[i]) {
        const MPoly& p = table.part_of(id, d);
        if (!p.is_zero()) s += p * c;
      }
      rhs.push_back(-s);
    }
    std::vector<MPoly> gd = apply_linv(rhs);
    for (std::size_t i = 0; i < n; ++i) table.set_base_part(i, gd[i]);
    parts.emplace_back(std::move(gd));
  }
  return parts;
}

TriangularDerivation::TriangularDerivation(std::vector<MPoly> coeffs, std::optional<MPoly> multiplier)
    : coeffs_(std::move(coeffs)), multiplier_(std::move(multiplier)) {
  require(!coeffs_.empty(), Reason::ArityMismatch, "derivation needs at least one coefficient");
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    check_same_field(coeffs_[0].field(), coeffs_[i].field());
    require(coeffs_[i].nvars() == n, Reason::ArityMismatch, "derivation coefficient arity mismatch");
    for (std::size_t j = 0; j <= i; ++j)
      if (coeffs_[i].depends_on(j))
        fail(Reason::InvalidArgument, "coefficient of d/d" + variable_name(n, i) + " may only use later variables");
  }
  if (multiplier_) {
    check_same_field(coeffs_[0].field(), multiplier_->field());
    require(multiplier_->nvars() == n, Reason::ArityMismatch, "multiplier arity mismatch");
    if (!apply_base(*multiplier_).is_zero())
      fail(Reason::NotLocallyNilpotent, "multiplier " + multiplier_->to_string() + " is not a kernel element");
  }
}

MPoly TriangularDerivation::apply_base(const MPoly& h) const {
  MPoly s(field(), n());
  for (std::size_t i = 0; i < n(); ++i)
    if (!coeffs_[i].is_zero() && h.depends_on(i)) s += coeffs_[i] * h.partial_derivative(i);
  return s;
}

MPoly TriangularDerivation::apply(const MPoly& h) const {
  MPoly s = apply_base(h);
  return multiplier_ ? *multiplier_ * s : s;
}

Endo exp_derivation(const TriangularDerivation& d, const Scalar& t, long long degree_cap) {
  const FieldSpec& field = d.field();
  require(field.characteristic() == 0, Reason::PositiveCharacteristic,
          "exponential of a derivation needs characteristic 0");
  check_same_field(field, t.field());
  std::vector<MPoly> comps;
  for (std::size_t i = 0; i < d.n(); ++i) {
    MPoly term = MPoly::variable(field, d.n(), i);
    MPoly sum = term;
    for (long long k = 1; !term.is_zero(); ++k) {
      term = d.apply(term) * (t / Scalar::from_int(field, k));
      if (!(!term.is_zero() ? term.degree() <= degree_cap : true))
        fail(Reason::NotLocallyNilpotent,
             "iterated derivative of " + variable_name(d.n(), i) + " exceeds degree " + std::to_string(degree_cap));
      sum += term;
    }
    comps.push_back(std::move(sum));
  }
  return Endo(std::move(comps));
}

Endo scaling_limit(const Endo& g, std::span<const long long> weights) {
  require(weights.size() == g.n(), Reason::ArityMismatch, "one weight per variable expected");
  for (long long w : weights) require(w >= 0, Reason::InvalidArgument, "weights must be nonnegative");
  std::vector<MPoly> comps;
  for (std::size_t i = 0; i < g.n(); ++i) {
    std::vector<MPoly::Term> kept;
    for (const auto& [m, c] : g[i].terms()) {
      long long v = -weights[i];
      for (std::size_t j = 0; j < g.n(); ++j) v += weights[j] * m[j];
      if (v < 0)
        fail(Reason::NegativeValuation,
             "component " + std::to_string(i + 1) + ", monomial " +
                 MPoly::monomial(g.field(), g.n(), m, c).to_string() + " has eps-valuation " +
                 std::to_string(v));
      if (v == 0) kept.emplace_back(m, c);
    }
    comps.push_back(MPoly::from_terms(g.field(), g.n(), std::move(kept)));
  }
  return Endo(std::move(comps));
}

TriangularDerivation nagata_derivation(const FieldSpec& field) {
  return TriangularDerivation({MPoly::parse(field, 3, "-2*y"), MPoly::parse(field, 3, "z"), MPoly(field, 3)},
                              MPoly::parse(field, 3, "x*z + y^2"));
}

}  // namespace polyaut
