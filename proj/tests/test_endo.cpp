#include "doctest.h"
#include "polyaut/endo.hpp"
#include "polyaut/plane.hpp"
#include "polyaut/random.hpp"

using namespace polyaut;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime(5);

Endo E(const FieldSpec& f, std::vector<std::string> c) { return Endo::parse(f, c.size(), c); }

// Remainder of p modulo the principal ideal (g); g's leading monomial is the
// leading term in the library order, so zero remainder means g divides p.
MPoly remainder(MPoly p, const MPoly& g) {
  const auto& [lm, lc] = g.leading_term();
  MPoly rest(p.field(), p.nvars());
  while (!p.is_zero()) {
    auto [m, c] = p.leading_term();
    if (lm.divides(m)) {
      p -= g * MPoly::monomial(p.field(), p.nvars(), m / lm, c / lc);
    } else {
      MPoly t = MPoly::monomial(p.field(), p.nvars(), m, c);
      rest += t;
      p -= t;
    }
  }
  return rest;
}

// Random element of the tame group in n variables: alternating invertible
// affine maps and elementary triangular maps.
Endo random_tame(const FieldSpec& f, std::size_t n, int steps, int max_deg, Rng& rng) {
  Endo g = Endo::identity(f, n);
  for (int s = 0; s < steps; ++s) {
    Matrix m(f, n, n);
    do {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_scalar(f, rng, -2, 2);
    } while (m.det().is_zero());
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(random_scalar(f, rng, -2, 2));
    g = compose(Endo::affine(m, c), g);
    std::size_t v = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(n) - 2));
    std::vector<MPoly> comps = Endo::identity(f, n).components();
    comps[v] += random_poly_in(f, n, v + 1, static_cast<int>(rng.uniform(2, max_deg)), rng);
    g = compose(Endo(comps), g);
  }
  return g;
}

mpz_class catalan(unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 2 * k, k);
  return b / (k + 1);
}

}  // namespace

TEST_CASE("compose examples") {
  Endo f = E(Q, {"x + y^2 - 3", "2*y + x"});
  CHECK(compose(Endo::identity(Q, 2), f) == f);
  CHECK(compose(f, Endo::identity(Q, 2)) == f);
  Endo t = E(Q, {"-x + y^5 + y^4", "y"});
  CHECK(compose(t, t).is_identity());

  // t∘σ∘(a x + c, b' y + c')∘σ∘t for a = 2, c = 3, b' = -1, c' = 5
  Endo sigma = E(Q, {"y", "x"});
  Endo b = E(Q, {"2*x + 3", "-y + 5"});
  Endo chain = compose(t, compose(sigma, compose(b, compose(sigma, t))));
  MPoly p = MPoly::parse(Q, 2, "y^5 + y^4");
  MPoly p_shift = p.substitute(std::vector{MPoly::parse(Q, 2, "0"), MPoly::parse(Q, 2, "2*y + 3")});
  Endo expected({MPoly::parse(Q, 2, "-x - 5") + p_shift + p, MPoly::parse(Q, 2, "2*y + 3")});
  CHECK(chain == expected);
}

TEST_CASE("jacobian determinant") {
  CHECK(jacobian_det(E(Q, {"y", "x"})) == MPoly::constant(Q, 2, -1));
  CHECK(jacobian_det(E(Q, {"x + y^2", "y"})) == MPoly::constant(Q, 2, 1));
  CHECK(jacobian_det(E(Q, {"x^2", "y"})) == MPoly::parse(Q, 2, "2*x"));
}

TEST_CASE("chain rule and associativity") {
  Rng rng(31);
  for (const auto& f : {Q, F5}) {
    for (int i = 0; i < 10; ++i) {
      Endo a = Endo({random_poly(f, 2, 3, 4, rng), random_poly(f, 2, 3, 4, rng)});
      Endo b = Endo({random_poly(f, 2, 2, 4, rng), random_poly(f, 2, 2, 4, rng)});
      Endo c = Endo({random_poly(f, 2, 2, 3, rng), random_poly(f, 2, 2, 3, rng)});
      CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
      CHECK(jacobian_det(compose(a, b)) ==
            jacobian_det(a).substitute(b.components()) * jacobian_det(b));
      CHECK(compose(a, b).degree() <= a.degree().value() * b.degree().value());
    }
  }
}

TEST_CASE("linear part and translate conjugate") {
  Endo f = E(Q, {"x + y^2", "y"});
  CHECK(linear_part(f) == Endo::identity(Q, 2));
  std::vector<Scalar> zero{Scalar::zero(Q), Scalar::zero(Q)};
  CHECK(translate_conjugate(f, zero) == f);
  std::vector<Scalar> c{Scalar::zero(Q), Scalar::one(Q)};
  Endo g = translate_conjugate(f, c);
  CHECK(g.evaluate(zero) == zero);
  CHECK(linear_part(g) == E(Q, {"x + 2*y", "y"}));
}

TEST_CASE("formal inverse examples") {
  auto parts = formal_inverse_truncated(E(Q, {"x + y^2", "y"}), 5);
  CHECK(parts[0] == Endo::identity(Q, 2));
  CHECK(parts[1] == E(Q, {"-y^2", "0"}));
  for (std::size_t d = 2; d < parts.size(); ++d) CHECK(parts[d] == E(Q, {"0", "0"}));

  // x + x^2 inverts to sum (-1)^(k-1) Catalan(k-1) x^k
  auto cat = formal_inverse_truncated(E(Q, {"x + x^2", "y"}), 10);
  for (unsigned k = 1; k <= 10; ++k) {
    mpq_class coef(catalan(k - 1) * ((k % 2) ? 1 : -1));
    Monomial m;
    m.set(0, k);
    CHECK(cat[k - 1][0] == MPoly::monomial(Q, 2, m, Scalar::from_rational(Q, coef)));
  }

  for (std::uint64_t p : {2, 3}) {
    FieldSpec fp = FieldSpec::prime(p);
    Endo f = E(fp, {"x + x^" + std::to_string(p), "y"});
    auto g = formal_inverse_truncated(f, static_cast<long long>(p * p));
    CHECK(!g[p * p - 1][0].is_zero());
    for (std::size_t d = p; d < p * p - 1; ++d)
      if (d + 1 != p) CHECK(g[d][0].is_zero());
  }

  CHECK_THROWS_AS(formal_inverse_truncated(E(Q, {"x + 1", "y"}), 3), Error);
  CHECK_THROWS_AS(formal_inverse_truncated(E(Q, {"x^2 + y", "y^2"}), 3), Error);
}

TEST_CASE("certify automorphism examples") {
  auto ok = certify_automorphism(E(Q, {"x + y^2", "y"}));
  REQUIRE(std::holds_alternative<AutoCert>(ok));
  CHECK(std::get<AutoCert>(ok).inverse == E(Q, {"x - y^2", "y"}));

  auto bad = certify_automorphism(E(Q, {"x^2", "y"}));
  REQUIRE(std::holds_alternative<NotAutomorphism>(bad));
  CHECK(std::get<NotAutomorphism>(bad).reason == Reason::JacobianNotConstant);
  CHECK(std::get<NotAutomorphism>(certify_automorphism(E(Q, {"x + y", "x + y"}))).reason == Reason::JacobianZero);

  for (std::uint64_t p : {2, 3, 5}) {
    FieldSpec fp = FieldSpec::prime(p);
    Endo f = E(fp, {"x + x^" + std::to_string(p), "y"});
    CHECK(jacobian_det(f) == MPoly::constant(fp, 2, 1));
    auto r = certify_automorphism(f);
    REQUIRE(std::holds_alternative<NotAutomorphism>(r));
    CHECK(std::get<NotAutomorphism>(r).reason == Reason::InverseDegreeExceeded);
    // the same map with a third, untouched coordinate goes through the
    // formal-inverse path
    Endo f3 = E(fp, {"x + x^" + std::to_string(p), "y", "z"});
    CHECK(std::get<NotAutomorphism>(certify_automorphism(f3)).reason == Reason::InverseDegreeExceeded);
  }
  CHECK(std::get<NotAutomorphism>(certify_automorphism(E(FieldSpec::prime(2), {"x + x^2"}))).reason ==
        Reason::InverseDegreeExceeded);
}

TEST_CASE("certification round trip on random tame maps") {
  Rng rng(77);
  for (const auto& f : {Q, F5, FieldSpec::cyclotomic8()}) {
    for (int i = 0; i < 6; ++i) {
      Endo g = random_tame(f, 2, 2, 3, rng);
      AutoCert c = require_automorphism(g);
      CHECK(compose(g, c.inverse).is_identity());
      CHECK(compose(c.inverse, g).is_identity());
      CHECK(c.inverse.degree() <= g.degree().value());
    }
  }
  for (const auto& f : {Q, F5}) {
    for (int i = 0; i < 4; ++i) {
      Endo g = random_tame(f, 3, 1, 2, rng);
      AutoCert c = require_automorphism(g);
      CHECK(compose(g, c.inverse).is_identity());
      long long d = g.degree().value();
      CHECK(c.inverse.degree() <= d * d);
    }
  }
}

TEST_CASE("exp of derivations") {
  TriangularDerivation d({MPoly::parse(Q, 3, "y"), MPoly::parse(Q, 3, "1"), MPoly(Q, 3)});
  CHECK(exp_derivation(d, Scalar::zero(Q)).is_identity());
  CHECK(exp_derivation(d, Scalar::one(Q)) == E(Q, {"x + y + 1/2", "y + 1", "z"}));

  CHECK_THROWS_AS(TriangularDerivation({MPoly::parse(Q, 2, "x"), MPoly(Q, 2)}), Error);
  CHECK_THROWS_AS(exp_derivation(TriangularDerivation({MPoly::parse(F5, 2, "y"), MPoly(F5, 2)}),
                                 Scalar::one(F5)),
                  Error);
  // multiplier outside the kernel is refused
  CHECK_THROWS_AS(TriangularDerivation({MPoly::parse(Q, 2, "y"), MPoly::parse(Q, 2, "1")},
                                       MPoly::parse(Q, 2, "y")),
                  Error);
}

TEST_CASE("Nagata automorphism") {
  Endo f1 = exp_derivation(nagata_derivation(Q), Scalar::one(Q));
  CHECK(f1 == E(Q, {"x - 2*y*(x*z + y^2) - z*(x*z + y^2)^2", "y + z*(x*z + y^2)", "z"}));
  CHECK(jacobian_det(f1) == MPoly::constant(Q, 3, 1));
  AutoCert cert = require_automorphism(f1);
  CHECK(cert.inverse == exp_derivation(nagata_derivation(Q), -Scalar::one(Q)));

  // t as a fourth variable w
  TriangularDerivation dw({MPoly::parse(Q, 4, "-2*y"), MPoly::parse(Q, 4, "z"), MPoly(Q, 4), MPoly(Q, 4)},
                          MPoly::parse(Q, 4, "(x*z + y^2)*w"));
  Endo fw = exp_derivation(dw, Scalar::one(Q));
  CHECK(fw == E(Q, {"x - 2*w*y*(x*z + y^2) - w^2*z*(x*z + y^2)^2", "y + w*z*(x*z + y^2)", "z", "w"}));
  CHECK(jacobian_det(fw) == MPoly::constant(Q, 4, 1));

  Rng rng(5);
  MPoly inv = MPoly::parse(Q, 3, "x*z + y^2");
  for (int i = 0; i < 5; ++i) {
    Scalar t = Scalar::from_rational(Q, mpq_class(static_cast<long>(rng.uniform(-9, 9)), 7));
    Scalar s = Scalar::from_rational(Q, mpq_class(static_cast<long>(rng.uniform(-9, 9)), 4));
    auto D = nagata_derivation(Q);
    CHECK(compose(exp_derivation(D, t), exp_derivation(D, s)) == exp_derivation(D, t + s));
    Endo ft = exp_derivation(D, t);
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(remainder(ft[k] - MPoly::variable(Q, 3, k), inv).is_zero());
  }
}

TEST_CASE("scaling limits") {
  Endo g = E(Q, {"2*x + y + x*y^2", "3*y - x^2"});
  long long unit[] = {1, 1};
  CHECK(scaling_limit(g, unit) == linear_part(g));
  CHECK(scaling_limit(Endo::identity(Q, 3), std::vector<long long>{2, 0, 5}).is_identity());
  CHECK_THROWS_AS(scaling_limit(E(Q, {"x + 1", "y"}), unit), Error);

  // (a x + b y + h1, c x + d y + h2, z) with coefficients in z and h in (x,y)^2
  Endo w = E(Q, {"(1+z)*x + z^2*y + x^2*z + x*y", "(2 - z)*x + 3*y + y^2", "z"});
  long long wt[] = {1, 1, 0};
  CHECK(scaling_limit(w, wt) == E(Q, {"(1+z)*x + z^2*y", "(2 - z)*x + 3*y", "z"}));
}
