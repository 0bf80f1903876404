#include "polyaut/plane.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace polyaut {

namespace {

MPoly uvar(const FieldSpec& f) { return MPoly::variable(f, 1, 0); }

// p(alpha*y + beta) for univariate p.
MPoly subst_affine(const MPoly& p, const Scalar& alpha, const Scalar& beta) {
  const FieldSpec& f = p.field();
  MPoly arg = uvar(f) * alpha + MPoly::constant(f, 1, beta);
  return p.substitute(std::vector{arg});
}

// Univariate p viewed as a polynomial in y of the plane.
MPoly in_y(const MPoly& p) {
  return p.substitute(std::vector{MPoly::variable(p.field(), 2, 1)});
}

}  // namespace

AffineMap::AffineMap(Matrix m, Scalar c0, Scalar c1) : m_(std::move(m)), c0_(std::move(c0)), c1_(std::move(c1)) {
  require(m_.rows() == 2 && m_.cols() == 2, Reason::ArityMismatch, "plane affine map needs a 2x2 matrix");
  check_same_field(m_.field(), c0_.field());
  check_same_field(m_.field(), c1_.field());
  require(!m_.det().is_zero(), Reason::NotAutomorphism, "affine map with singular matrix");
}

AffineMap AffineMap::sigma(const FieldSpec& field) {
  Matrix m(field, 2, 2);
  m(0, 1) = Scalar::one(field);
  m(1, 0) = Scalar::one(field);
  return AffineMap(m, Scalar::zero(field), Scalar::zero(field));
}

AffineMap AffineMap::from_endo(const Endo& f) {
  require(f.n() == 2, Reason::ArityMismatch, "plane maps have two components");
  if (f.degree() > 1) fail(Reason::InvalidArgument, "map is not affine: " + f.to_string());
  auto c = f.constant_terms();
  return AffineMap(f.linear_matrix(), c[0], c[1]);
}

AffineMap AffineMap::operator*(const AffineMap& o) const {
  std::array<Scalar, 2> oc{o.c0_, o.c1_};
  auto v = m_.apply(oc);
  return AffineMap(m_ * o.m_, v[0] + c0_, v[1] + c1_);
}

AffineMap AffineMap::inverse() const {
  Matrix inv = *m_.inverse();
  std::array<Scalar, 2> c{-c0_, -c1_};
  auto v = inv.apply(c);
  return AffineMap(inv, v[0], v[1]);
}

Endo AffineMap::to_endo() const {
  std::array<Scalar, 2> c{c0_, c1_};
  return Endo::affine(m_, c);
}

bool AffineMap::operator==(const AffineMap& o) const {
  return m_ == o.m_ && c0_ == o.c0_ && c1_ == o.c1_;
}

TriMap::TriMap(Scalar a, MPoly p, Scalar b, Scalar c)
    : a_(std::move(a)), p_(std::move(p)), b_(std::move(b)), c_(std::move(c)) {
  require(p_.nvars() == 1, Reason::ArityMismatch, "triangular part must be univariate");
  check_same_field(a_.field(), p_.field());
  check_same_field(a_.field(), b_.field());
  check_same_field(a_.field(), c_.field());
  require(!a_.is_zero() && !b_.is_zero(), Reason::NotAutomorphism, "triangular map with zero diagonal");
}

TriMap TriMap::identity(const FieldSpec& field) {
  return TriMap(Scalar::one(field), MPoly(field, 1), Scalar::one(field), Scalar::zero(field));
}

TriMap TriMap::involution(const MPoly& p) {
  const FieldSpec& f = p.field();
  return TriMap(-Scalar::one(f), p, Scalar::one(f), Scalar::zero(f));
}

MPoly TriMap::parse_p(const FieldSpec& field, std::string_view text) {
  MPoly q = MPoly::parse(field, 2, text);
  require(!q.depends_on(0), Reason::InvalidArgument, "expected a polynomial in y only");
  return q.substitute(std::vector{MPoly(field, 1), uvar(field)});
}

std::optional<TriMap> TriMap::from_endo(const Endo& f) {
  if (f.n() != 2) return std::nullopt;
  const FieldSpec& field = f.field();
  if (f[1].depends_on(0) || f[1].degree() > 1) return std::nullopt;
  Scalar a = Scalar::zero(field);
  std::vector<MPoly::Term> p;
  for (const auto& [m, c] : f[0].terms()) {
    if (m[0] == 1 && m[1] == 0) {
      a = c;
    } else if (m[0] == 0) {
      Monomial u;
      u.set(0, m[1]);
      p.emplace_back(u, c);
    } else {
      return std::nullopt;
    }
  }
  Scalar b = f[1].coefficient(Monomial::variable(1));
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  return TriMap(a, MPoly::from_terms(field, 1, std::move(p)), b, f[1].constant_term());
}

TriMap TriMap::from_affine(const AffineMap& m) {
  require(m.is_triangular(), Reason::InvalidArgument, "affine map is not triangular");
  const FieldSpec& f = m.field();
  MPoly p = uvar(f) * m.matrix()(0, 1) + MPoly::constant(f, 1, m.c0());
  return TriMap(m.matrix()(0, 0), p, m.matrix()(1, 1), m.c1());
}

bool TriMap::is_identity() const { return a_.is_one() && p_.is_zero() && b_.is_one() && c_.is_zero(); }

TriMap TriMap::operator*(const TriMap& o) const {
  // (a x + p(y), b y + c)∘(a' x + p'(y), b' y + c')
  MPoly p = o.p_ * a_ + subst_affine(p_, o.b_, o.c_);
  return TriMap(a_ * o.a_, std::move(p), b_ * o.b_, b_ * o.c_ + c_);
}

TriMap TriMap::inverse() const {
  Scalar ai = a_.inverse(), bi = b_.inverse();
  MPoly p = subst_affine(p_, bi, -c_ * bi) * (-ai);
  return TriMap(ai, std::move(p), bi, -c_ * bi);
}

AffineMap TriMap::to_affine() const {
  require(is_affine(), Reason::InvalidArgument, "triangular map is not affine");
  const FieldSpec& f = field();
  Matrix m(f, 2, 2);
  m(0, 0) = a_;
  m(0, 1) = p_.coefficient(Monomial::variable(0));
  m(1, 1) = b_;
  return AffineMap(m, p_.constant_term(), c_);
}

Endo TriMap::to_endo() const {
  const FieldSpec& f = field();
  MPoly x = MPoly::variable(f, 2, 0), y = MPoly::variable(f, 2, 1);
  return Endo({x * a_ + in_y(p_), y * b_ + MPoly::constant(f, 2, c_)});
}

bool TriMap::operator==(const TriMap& o) const {
  return a_ == o.a_ && p_ == o.p_ && b_ == o.b_ && c_ == o.c_;
}

Endo factor_endo(const Factor& f) {
  return std::visit([](const auto& g) { return g.to_endo(); }, f);
}

Factor factor_inverse(const Factor& f) {
  return std::visit([](const auto& g) -> Factor { return g.inverse(); }, f);
}

std::array<Scalar, 2> TameWord::evaluate(const std::array<Scalar, 2>& pt) const {
  std::array<Scalar, 2> v = pt;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (const auto* t = std::get_if<TriMap>(&*it)) {
      const Scalar py = t->p().evaluate(std::span(&v[1], 1));
      v = {t->a() * v[0] + py, t->b() * v[1] + t->c()};
    } else {
      const auto& a = std::get<AffineMap>(*it);
      const Matrix& m = a.matrix();
      v = {m(0, 0) * v[0] + m(0, 1) * v[1] + a.c0(), m(1, 0) * v[0] + m(1, 1) * v[1] + a.c1()};
    }
  }
  return v;
}

std::string factor_to_string(const Factor& f) {
  return std::visit([](const auto& g) { return g.to_string(); }, f);
}

namespace {

enum class Group { Both, AOnly, BOnly };

Factor canonical(Factor f) {
  if (auto* a = std::get_if<AffineMap>(&f); a && a->is_triangular()) return TriMap::from_affine(*a);
  return f;
}

Group group_of(const Factor& f) {
  if (const auto* t = std::get_if<TriMap>(&f)) return t->is_affine() ? Group::Both : Group::BOnly;
  return Group::AOnly;
}

bool is_identity_factor(const Factor& f) {
  const auto* t = std::get_if<TriMap>(&f);
  return t && t->is_identity();
}

// Product of two factors that lie in a common subgroup A or B.
Factor merge(const Factor& x, const Factor& y) {
  const auto* tx = std::get_if<TriMap>(&x);
  const auto* ty = std::get_if<TriMap>(&y);
  if (tx && ty) return *tx * *ty;
  AffineMap ax = tx ? tx->to_affine() : std::get<AffineMap>(x);
  AffineMap ay = ty ? ty->to_affine() : std::get<AffineMap>(y);
  return canonical(ax * ay);
}

// Stack of a reduced word read from the right: back() is the leftmost factor.
void push_front(std::vector<Factor>& stack, Factor x) {
  for (;;) {
    x = canonical(std::move(x));
    if (is_identity_factor(x)) return;
    if (stack.empty()) {
      stack.push_back(std::move(x));
      return;
    }
    Group gx = group_of(x), gy = group_of(stack.back());
    if (gx != Group::Both && gy != Group::Both && gx != gy) {
      stack.push_back(std::move(x));
      return;
    }
    Factor y = std::move(stack.back());
    stack.pop_back();
    x = merge(x, y);
  }
}

}  // namespace

TameWord TameWord::reduce(const FieldSpec& field, std::span<const Factor> factors) {
  std::vector<Factor> stack;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    check_same_field(field, std::visit([](const auto& g) -> const FieldSpec& { return g.field(); }, *it));
    push_front(stack, *it);
  }
  TameWord w(field);
  w.factors_.assign(std::make_move_iterator(stack.rbegin()), std::make_move_iterator(stack.rend()));
  return w;
}

TameWord TameWord::of(const Factor& f) {
  const FieldSpec& field = std::visit([](const auto& g) -> const FieldSpec& { return g.field(); }, f);
  return reduce(field, std::span<const Factor>(&f, 1));
}

std::size_t TameWord::affine_length() const {
  return static_cast<std::size_t>(std::count_if(factors_.begin(), factors_.end(),
                                                [](const Factor& f) { return group_of(f) == Group::AOnly; }));
}

std::size_t TameWord::triangular_length() const {
  return static_cast<std::size_t>(std::count_if(factors_.begin(), factors_.end(),
                                                [](const Factor& f) { return group_of(f) == Group::BOnly; }));
}

std::vector<long long> TameWord::multidegree() const {
  std::vector<long long> out;
  for (const auto& f : factors_)
    if (group_of(f) == Group::BOnly) out.push_back(std::get<TriMap>(f).p().degree().value());
  return out;
}

TameWord TameWord::inverse() const {
  TameWord w(field_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) w.factors_.push_back(factor_inverse(*it));
  return w;
}

TameWord TameWord::operator*(const TameWord& o) const {
  check_same_field(field_, o.field_);
  std::vector<Factor> all = factors_;
  all.insert(all.end(), o.factors_.begin(), o.factors_.end());
  return reduce(field_, all);
}

Endo TameWord::to_endo() const {
  Endo g = Endo::identity(field_, 2);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) g = compose(factor_endo(*it), g);
  return g;
}

std::string TameWord::to_string() const {
  if (factors_.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " o " : "") + factor_to_string(factors_[i]);
  return s;
}

TameWord jvdk_factorize(const Endo& f) {
  require(f.n() == 2, Reason::ArityMismatch, "factorization needs a plane map");
  const FieldSpec& field = f.field();
  const Factor sigma = AffineMap::sigma(field);
  std::vector<Factor> left;
  Endo h = f;
  // Powers of h[1], kept until the next swap changes h[1].
  std::vector<MPoly> powers;
  for (;;) {
    if (h.degree() <= 1) {
      auto c = h.constant_terms();
      Matrix m = h.linear_matrix();
      require(!m.det().is_zero(), Reason::NotAutomorphism, "affine remainder is singular");
      left.push_back(AffineMap(m, c[0], c[1]));
      break;
    }
    if (h[0].degree() < h[1].degree()) {
      left.push_back(sigma);
      h = Endo({h[1], h[0]});
      powers.clear();
    }
    const long long d1 = h[0].degree().value();
    const Degree d2 = h[1].degree();
    if (!(d2 >= 1 && d1 % d2.value() == 0))
      fail(Reason::NotAutomorphism, "degrees " + std::to_string(d1) + " and " + to_string(d2) + " are not divisible");
    const unsigned k = static_cast<unsigned>(d1 / d2.value());
    MPoly top1 = h[0].homogeneous_part(d1);
    if (powers.empty()) powers.push_back(MPoly::constant(field, 2, 1));
    while (powers.size() <= k) powers.push_back(powers.back() * h[1]);
    MPoly top2k = powers[k].homogeneous_part(d1);
    Scalar c = top1.leading_term().second / top2k.leading_term().second;
    require(top1 == top2k * c, Reason::NotAutomorphism, "leading forms are not proportional");
    // h <- (x - c y^k, y)∘h, recording (x + c y^k, y) on the left
    Monomial yk;
    yk.set(0, k);
    MPoly p = MPoly::monomial(field, 1, yk, c);
    left.push_back(TriMap(Scalar::one(field), p, Scalar::one(field), Scalar::zero(field)));
    h = Endo({h[0] - powers[k] * c, h[1]});
  }
  return TameWord::reduce(field, left);
}

std::size_t affine_length(const Endo& f) { return jvdk_factorize(f).affine_length(); }
std::size_t triangular_length(const Endo& f) { return jvdk_factorize(f).triangular_length(); }
std::vector<long long> multidegree(const Endo& f) { return jvdk_factorize(f).multidegree(); }

bool in_Mr(const TameWord& w, long long r) {
  require(r >= 1, Reason::InvalidArgument, "r must be at least 1");
  auto md = w.multidegree();
  return std::all_of(md.begin(), md.end(), [r](long long d) { return d <= r; });
}

TameWord cyclic_reduce(const TameWord& w) {
  TameWord cur = w;
  while (cur.factors().size() >= 2) {
    const Factor& first = cur.factors().front();
    const Factor& last = cur.factors().back();
    if (group_of(first) != group_of(last)) break;
    // conjugate by the last factor: last∘w∘last^-1
    std::vector<Factor> all{last};
    all.insert(all.end(), cur.factors().begin(), cur.factors().end());
    all.push_back(factor_inverse(last));
    cur = TameWord::reduce(cur.field(), all);
  }
  return cur;
}

Classification classify(const TameWord& w) {
  TameWord c = cyclic_reduce(w);
  if (c.factors().size() >= 2) return {Classification::Kind::Henon, c.factors().size()};
  return {Classification::Kind::TriangularizableElliptic, 0};
}

std::pair<TriMap, TriMap> sigma_decompose_affine(const AffineMap& m) {
  require(!m.is_triangular(), Reason::TriangularInput, "affine map already lies in A∩B");
  const FieldSpec& f = m.field();
  const Matrix& M = m.matrix();
  const Scalar &a = M(0, 0), &b = M(0, 1), &a1 = M(1, 0), &b1 = M(1, 1);
  Scalar one = Scalar::one(f), zero = Scalar::zero(f);
  // (x + (a/a') y + c, y + c') ∘ σ ∘ (a' x + b' y, ((b a' - a b')/a') y)
  TriMap t1(one, uvar(f) * (a / a1) + MPoly::constant(f, 1, m.c0()), one, m.c1());
  TriMap t2(a1, uvar(f) * b1, (b * a1 - a * b1) / a1, zero);
  return {t1, t2};
}

std::vector<Factor> ReducedForm::factors() const {
  const FieldSpec& f = tau1.field();
  std::vector<Factor> out{tau1, AffineMap::sigma(f)};
  for (const auto& p : involutions) {
    out.push_back(TriMap::involution(p));
    out.push_back(AffineMap::sigma(f));
  }
  out.push_back(tau2);
  return out;
}

std::vector<Factor> ReducedForm::inverse_factors() const {
  const FieldSpec& f = tau1.field();
  std::vector<Factor> out{tau2.inverse(), AffineMap::sigma(f)};
  for (auto it = involutions.rbegin(); it != involutions.rend(); ++it) {
    out.push_back(TriMap::involution(*it));
    out.push_back(AffineMap::sigma(f));
  }
  out.push_back(tau1.inverse());
  return out;
}

ReducedForm normal_form(const TameWord& w) {
  require(w.affine_length() >= 1, Reason::TriangularInput, "a triangular map has no sigma form");
  const FieldSpec& field = w.field();
  // Split into B-segments separated by sigma.
  std::vector<TriMap> seg;
  TriMap cur = TriMap::identity(field);
  for (const auto& fac : w.factors()) {
    if (const auto* t = std::get_if<TriMap>(&fac)) {
      cur = cur * *t;
    } else {
      auto [t1, t2] = sigma_decompose_affine(std::get<AffineMap>(fac));
      seg.push_back(cur * t1);
      cur = t2;
    }
  }
  seg.push_back(cur);

  ReducedForm nf{seg.front(), {}, seg.back()};
  TriMap carry = TriMap::identity(field);
  for (std::size_t j = 1; j + 1 < seg.size(); ++j) {
    TriMap m = carry * seg[j];
    require(!m.is_affine(), Reason::PropertyViolation, "interior factor of a reduced word lies in A∩B");
    // m = (-x + p((y - c)/b), y)∘(-a x, b y + c); the diagonal part crosses
    // sigma as (b x + c, -a y).
    Scalar bi = m.b().inverse();
    nf.involutions.push_back(subst_affine(m.p(), bi, -m.c() * bi));
    carry = TriMap(m.b(), MPoly::constant(field, 1, m.c()), -m.a(), Scalar::zero(field));
  }
  nf.tau2 = carry * seg.back();
  return nf;
}

std::size_t GenWord::element(const TriMap& b) {
  nodes_.push_back(Node{Kind::Element, b, {}});
  return nodes_.size() - 1;
}

std::size_t GenWord::f() {
  nodes_.push_back(Node{Kind::F, std::nullopt, {}});
  return nodes_.size() - 1;
}

std::size_t GenWord::f_inverse() {
  nodes_.push_back(Node{Kind::FInverse, std::nullopt, {}});
  return nodes_.size() - 1;
}

std::size_t GenWord::concat(std::vector<std::size_t> children) {
  for (auto c : children) require(c < nodes_.size(), Reason::InvalidArgument, "unknown word node");
  nodes_.push_back(Node{Kind::Concat, std::nullopt, std::move(children)});
  return nodes_.size() - 1;
}

std::size_t GenWord::inverse(std::size_t id) {
  require(id < nodes_.size(), Reason::InvalidArgument, "unknown word node");
  nodes_.push_back(Node{Kind::Inverse, std::nullopt, {id}});
  return nodes_.size() - 1;
}

TameWord GenWord::evaluate(std::size_t id, const TameWord& fw) const {
  std::vector<std::optional<TameWord>> memo(nodes_.size());
  std::function<const TameWord&(std::size_t)> eval = [&](std::size_t i) -> const TameWord& {
    if (memo[i]) return *memo[i];
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case Kind::Element: memo[i] = TameWord::of(*nd.element); break;
      case Kind::F: memo[i] = fw; break;
      case Kind::FInverse: memo[i] = fw.inverse(); break;
      case Kind::Inverse: memo[i] = eval(nd.children[0]).inverse(); break;
      case Kind::Concat: {
        std::vector<Factor> all;
        for (auto c : nd.children) {
          const auto& fs = eval(c).factors();
          all.insert(all.end(), fs.begin(), fs.end());
        }
        memo[i] = TameWord::reduce(fw.field(), all);
        break;
      }
    }
    return *memo[i];
  };
  return eval(id);
}

std::uint64_t GenWord::letter_count(std::size_t id) const {
  std::vector<std::optional<std::uint64_t>> memo(nodes_.size());
  constexpr std::uint64_t cap = ~std::uint64_t{0};
  std::function<std::uint64_t(std::size_t)> count = [&](std::size_t i) -> std::uint64_t {
    if (memo[i]) return *memo[i];
    const Node& nd = nodes_[i];
    std::uint64_t r = 0;
    if (nd.kind == Kind::F || nd.kind == Kind::FInverse) r = 1;
    for (auto c : nd.children) {
      std::uint64_t v = count(c);
      r = r > cap - v ? cap : r + v;
    }
    memo[i] = r;
    return r;
  };
  return count(id);
}

std::string GenWord::describe(std::size_t root) const {
  std::vector<bool> seen(nodes_.size());
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (seen[i]) return;
    seen[i] = true;
    for (auto c : nodes_[i].children) visit(c);
    order.push_back(i);
  };
  visit(root);
  auto name = [&](std::size_t i) -> std::string {
    const Node& nd = nodes_[i];
    if (nd.kind == Kind::F) return "f";
    if (nd.kind == Kind::FInverse) return "f^-1";
    if (nd.kind == Kind::Element) return nd.element->to_string();
    return "w" + std::to_string(i);
  };
  std::string s;
  for (auto i : order) {
    const Node& nd = nodes_[i];
    if (nd.kind == Kind::Concat) {
      s += "w" + std::to_string(i) + " = ";
      for (std::size_t k = 0; k < nd.children.size(); ++k) s += (k ? " o " : "") + name(nd.children[k]);
      s += "\n";
    } else if (nd.kind == Kind::Inverse) {
      s += "w" + std::to_string(i) + " = (" + name(nd.children[0]) + ")^-1\n";
    }
  }
  if (s.empty()) s = name(root) + "\n";
  return s;
}

namespace {

std::vector<long long> degrees_of(const ReducedForm& nf) {
  std::vector<long long> d;
  for (const auto& p : nf.involutions) d.push_back(p.degree().value());
  return d;
}

// First shift c (in the canonical enumeration, skipping 0) for which
// q(y) - q(y + c) keeps degree at least 1; in characteristic p the obvious
// choice c = 1 can collapse q = y^p to a constant.
std::optional<Scalar> choose_shift(const MPoly& q) {
  const FieldSpec& f = q.field();
  for (std::uint64_t idx = 1; idx < 256; ++idx) {
    auto c = Scalar::enumerate(f, idx);
    if (!c) break;
    MPoly diff = q - subst_affine(q, Scalar::one(f), *c);
    if (diff.degree() >= 1) return c;
  }
  return std::nullopt;
}

}  // namespace

GeneratorReduction generator_reduce(const TameWord& fw) {
  const FieldSpec& field = fw.field();
  const std::size_t l0 = fw.affine_length();
  if (!(l0 >= 1 && l0 <= 4)) fail(Reason::LengthOutOfRange, "affine length " + std::to_string(l0) + " is outside 1..4");
  GeneratorReduction out{GenWord{}, 0, fw, {}};
  GenWord& g = out.word;
  std::size_t cur = g.f();
  TameWord value = fw;
  const Scalar one = Scalar::one(field), zero = Scalar::zero(field);
  auto shift_map = [&](const Scalar& a, const Scalar& c0, const Scalar& b, const Scalar& c1) {
    return TriMap(a, MPoly::constant(field, 1, c0), b, c1);
  };

  for (;;) {
    ReducedForm nf = normal_form(value);
    const std::size_t len = nf.affine_length();
    auto degs = degrees_of(nf);
    if (len == 1) {
      out.steps.push_back({len, degs, ""});
      break;
    }
    // f0 = tau1^-1 ∘ w ∘ tau2^-1 = σ∘i_1∘σ∘...∘σ
    std::vector<std::size_t> parts;
    if (!nf.tau1.is_identity()) parts.push_back(g.element(nf.tau1.inverse()));
    parts.push_back(cur);
    if (!nf.tau2.is_identity()) parts.push_back(g.element(nf.tau2.inverse()));
    std::size_t f0 = parts.size() == 1 ? cur : g.concat(parts);

    const MPoly& target = len == 2 ? nf.involutions[0] : len == 3 ? nf.involutions[0] : nf.involutions[1];
    auto c = choose_shift(target);
    if (!c.has_value())
      fail(Reason::RewriteStalled, "no shift keeps the degree of " + target.to_string() + " positive");
    out.steps.push_back({len, degs, c->to_string()});

    std::size_t next;
    if (len == 2) {
      // f0∘(x - c, y)∘f0∘(x + c, -y) = σ∘(-x + p(y) - p(y + c), y)∘σ
      next = g.concat({f0, g.element(shift_map(one, -*c, one, zero)), f0,
                       g.element(shift_map(one, *c, -one, zero))});
    } else if (len == 3) {
      // f0∘(x, y + c)∘f0^-1∘(x + c, -y) = σ∘(-x + p1(y) - p1(y + c), y)∘σ
      next = g.concat({f0, g.element(shift_map(one, zero, one, *c)), g.inverse(f0),
                       g.element(shift_map(one, *c, -one, zero))});
    } else {
      // f0∘(x, y + c)∘f0^-1 = σ∘i1∘σ∘i2'∘σ∘i1'∘σ∘(B_2 element)
      next = g.concat({f0, g.element(shift_map(one, zero, one, *c)), g.inverse(f0)});
    }
    TameWord nv = g.evaluate(next, fw);
    // Each step must lower the length, or keep it and lower the degree of the
    // involution the step acts on (the only one for length 2, the middle one
    // for length 4).
    const std::size_t nlen = nv.affine_length();
    bool decreased = nlen >= 1 && nlen < len;
    if (nlen == len && len != 3) {
      const std::size_t slot = len == 2 ? 0 : 1;
      decreased = normal_form(nv).involutions[slot].degree() < target.degree();
    }
    if (!decreased)
      fail(Reason::RewriteStalled,
           "rewrite step from length " + std::to_string(len) + " gave length " + std::to_string(nlen));
    cur = next;
    value = std::move(nv);
  }
  out.root = cur;
  out.value = value;
  return out;
}

namespace {

// Lagrange interpolation through (xs[i], ys[i]) as a univariate polynomial.
// Newton divided differences, expanded on a dense coefficient vector.
MPoly interpolate(const FieldSpec& f, const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) {
  const std::size_t k = xs.size();
  std::vector<Scalar> dd = ys;
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t i = k - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  std::vector<Scalar> c{dd[k - 1]};
  for (std::size_t i = k - 1; i-- > 0;) {
    // c <- c (y - xs[i]) + dd[i]
    c.push_back(Scalar::zero(f));
    for (std::size_t e = c.size() - 1; e > 0; --e) c[e] = c[e - 1] - c[e] * xs[i];
    c[0] = dd[i] - c[0] * xs[i];
  }
  std::vector<MPoly::Term> terms;
  for (std::size_t e = 0; e < c.size(); ++e)
    if (!c[e].is_zero()) terms.emplace_back(Monomial(std::vector<int>{static_cast<int>(e)}), c[e]);
  return MPoly::from_terms(f, 1, std::move(terms));
}

bool pairwise_distinct(const std::vector<Scalar>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) return false;
  return true;
}

}  // namespace

TameWord transitive_move_word(const std::vector<std::array<Scalar, 2>>& sources,
                              const std::vector<std::array<Scalar, 2>>& targets) {
  require(!sources.empty() && sources.size() == targets.size(), Reason::InvalidArgument,
          "sources and targets must be nonempty lists of equal length");
  const FieldSpec& field = sources.front()[0].field();
  const std::size_t k = sources.size();
  auto distinct_points = [](const std::vector<std::array<Scalar, 2>>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (pts[i][0] == pts[j][0] && pts[i][1] == pts[j][1]) return false;
    return true;
  };
  require(distinct_points(sources), Reason::InvalidArgument, "source points are not distinct");
  require(distinct_points(targets), Reason::InvalidArgument, "target points are not distinct");

  // Shear (x, y + c x) separating the y-coordinates of both point sets.
  std::optional<Scalar> shear;
  std::vector<Scalar> sy, ty;
  for (std::uint64_t idx = 0; !shear; ++idx) {
    auto c = Scalar::enumerate(field, idx);
    if (!c || idx > 4 * k * k + 8) break;
    sy.clear();
    ty.clear();
    for (std::size_t i = 0; i < k; ++i) {
      sy.push_back(sources[i][1] + *c * sources[i][0]);
      ty.push_back(targets[i][1] + *c * targets[i][0]);
    }
    if (pairwise_distinct(sy) && pairwise_distinct(ty)) shear = c;
  }
  require(shear.has_value(), Reason::FieldTooSmall, "no shear separates the points");
  std::vector<Scalar> e;
  for (std::size_t i = 0; i < k; ++i) {
    auto v = Scalar::enumerate(field, i);
    require(v.has_value(), Reason::FieldTooSmall, "field has fewer elements than points");
    e.push_back(*v);
  }
  const Scalar one = Scalar::one(field), zero = Scalar::zero(field);
  std::vector<Scalar> d1, d2, d3;
  for (std::size_t i = 0; i < k; ++i) {
    d1.push_back(e[i] - sources[i][0]);
    d2.push_back(ty[i] - sy[i]);
    d3.push_back(targets[i][0] - e[i]);
  }
  // T1: (x_i, sy_i) -> (e_i, sy_i); T2 = σ∘(x + q(y), y)∘σ: (e_i, sy_i) -> (e_i, ty_i);
  // T3: (e_i, ty_i) -> (x'_i, ty_i).
  TriMap t1(one, interpolate(field, sy, d1), one, zero);
  TriMap q(one, interpolate(field, e, d2), one, zero);
  TriMap t3(one, interpolate(field, ty, d3), one, zero);
  Matrix sm = Matrix::identity(field, 2);
  sm(1, 0) = *shear;
  AffineMap s(sm, zero, zero);
  Factor sigma = AffineMap::sigma(field);
  std::vector<Factor> word{s.inverse(), t3, sigma, q, sigma, t1, s};
  return TameWord::reduce(field, word);
}

AutoCert transitive_move(const std::vector<std::array<Scalar, 2>>& sources,
                         const std::vector<std::array<Scalar, 2>>& targets) {
  const TameWord w = transitive_move_word(sources, targets);
  // a tame word is invertible by construction; its inverse word is the certificate
  AutoCert cert{w.to_endo(), w.inverse().to_endo()};
  for (std::size_t i = 0; i < sources.size(); ++i) {
    auto img = cert.forward.evaluate(sources[i]);
    auto back = cert.inverse.evaluate(targets[i]);
    require(img[0] == targets[i][0] && img[1] == targets[i][1] && back[0] == sources[i][0] &&
                back[1] == sources[i][1],
            Reason::PropertyViolation, "expanded transitivity map missed a target");
  }
  return cert;
}

}  // namespace polyaut
