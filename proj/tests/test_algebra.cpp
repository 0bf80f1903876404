#include "doctest.h"
#include "polyaut/error.hpp"
#include "polyaut/field.hpp"
#include "polyaut/mpoly.hpp"
#include "polyaut/random.hpp"

using namespace polyaut;

namespace {

const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F3 = FieldSpec::prime(3);
const FieldSpec F5 = FieldSpec::prime(5);
const FieldSpec Z8 = FieldSpec::cyclotomic8();

MPoly P(const FieldSpec& f, std::size_t n, const char* s) { return MPoly::parse(f, n, s); }

// Binomial expansion of (y + c)^k, written independently of MPoly::shift.
MPoly binomial_power(const FieldSpec& f, long long c, unsigned k) {
  MPoly out(f, 1);
  mpz_class binom = 1;
  for (unsigned j = 0; j <= k; ++j) {
    mpz_class cpow;
    mpz_pow_ui(cpow.get_mpz_t(), mpz_class(static_cast<long>(c)).get_mpz_t(), k - j);
    Monomial m;
    m.set(0, j);
    out += MPoly::monomial(f, 1, m, Scalar::from_rational(f, mpq_class(binom * cpow)));
    binom = binom * (k - j) / (j + 1);
  }
  return out;
}

std::vector<FieldSpec> all_fields() { return {Q, F5, Z8}; }

MPoly random_with_zeta(const FieldSpec& f, std::size_t n, Rng& rng) {
  MPoly p = random_poly(f, n, 4, 5, rng);
  if (f.kind() == FieldKind::Cyclotomic8)
    p += random_poly(f, n, 3, 3, rng) * Scalar::zeta(f).pow(rng.uniform(1, 3));
  return p;
}

}  // namespace

TEST_CASE("field construction and canonical text") {
  CHECK_THROWS_AS(FieldSpec::prime(9), Error);
  CHECK(FieldSpec::parse("fp:7") == FieldSpec::prime(7));
  CHECK(FieldSpec::parse("zeta8").descriptor() == "zeta8");
  CHECK_THROWS_AS(FieldSpec::parse("fp:x"), Error);

  CHECK(Scalar::parse(Q, "6/-4").to_string() == "-3/2");
  CHECK(Scalar::parse(Q, "-6/4").to_string() == "-3/2");
  CHECK(Scalar::parse(F5, "-1").to_string() == "4");
  CHECK(Scalar::parse(F5, "1/2").to_string() == "3");
  CHECK_THROWS_AS(Scalar::parse(F5, "1/5"), Error);

  Scalar z = Scalar::zeta(Z8);
  CHECK(z.pow(4) == Scalar::from_int(Z8, -1));
  CHECK(z.pow(8).is_one());
  CHECK(z.to_string() == "0+1*z+0*z^2+0*z^3");
  CHECK(Scalar::parse(Z8, "1/2+0*z+-1*z^2+0*z^3") == Scalar::parse(Z8, "1/2-z^2"));
  Scalar sqrt2 = z - z.pow(3);
  CHECK(sqrt2 * sqrt2 == Scalar::from_int(Z8, 2));
}

TEST_CASE("field mixing is rejected") {
  CHECK_THROWS_AS(Scalar::one(Q) + Scalar::one(F5), Error);
  CHECK_THROWS_AS(P(Q, 2, "x") + P(F5, 2, "x"), Error);
  CHECK_THROWS_AS(P(Q, 2, "x") + P(Q, 3, "x"), Error);
}

TEST_CASE("cyclotomic inverse via extended Euclid") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Scalar a = Scalar::from_zeta(Z8, {mpq_class(long(rng.uniform(-5, 5))), mpq_class(long(rng.uniform(-5, 5))),
                                      mpq_class(long(rng.uniform(-5, 5))),
                                      mpq_class(long(rng.uniform(-5, 5)))});
    if (a.is_zero()) continue;
    CHECK((a * a.inverse()).is_one());
  }
}

TEST_CASE("poly_arith examples") {
  CHECK((P(Q, 2, "y^5+y^4") - P(Q, 2, "y^5+y^4")).is_zero());
  CHECK(P(Q, 2, "(x+y)*(x-y)") == P(Q, 2, "x^2-y^2"));
  MPoly f3 = P(F3, 1, "x^6 - x^5");
  CHECK(f3 == P(F3, 1, "x^6 + 2*x^5"));
  CHECK(f3.to_string() == "x^6 + 2*x^5");
}

TEST_CASE("substitute examples") {
  CHECK(P(Q, 1, "x^2").substitute(std::vector{P(Q, 1, "x+1")}) == P(Q, 1, "x^2+2*x+1"));
  MPoly p = P(Q, 3, "x*z + y^2 - 3*x*y*z + 7");
  std::vector<MPoly> ids{P(Q, 3, "x"), P(Q, 3, "y"), P(Q, 3, "z")};
  CHECK(p.substitute(ids) == p);
  // x1*x3 + x2^2 in five variables, substituted with (x, y, z, 0, 0)
  MPoly q = P(Q, 5, "x1*x3 + x2^2");
  std::vector<MPoly> args{P(Q, 3, "x"), P(Q, 3, "y"), P(Q, 3, "z"), P(Q, 3, "0"), P(Q, 3, "0")};
  CHECK(q.substitute(args) == P(Q, 3, "x*z+y^2"));
  CHECK_THROWS_AS(p.substitute(std::vector{P(Q, 1, "x")}), Error);
}

TEST_CASE("degree and homogeneous parts") {
  CHECK(!MPoly(Q, 2).degree().is_finite());
  CHECK(MPoly(Q, 2).degree() < Degree(-1000000));
  CHECK(P(Q, 1, "x^5+x^4").degree() == 5);
  CHECK(P(Q, 2, "x^2+x*y+y").homogeneous_part(2) == P(Q, 2, "x^2+x*y"));
}

TEST_CASE("partial derivatives") {
  CHECK(P(Q, 1, "x^5+x^4").partial_derivative(0) == P(Q, 1, "5*x^4+4*x^3"));
  CHECK(P(Q, 3, "x*z+y^2").partial_derivative(0) == P(Q, 3, "z"));
  CHECK(P(F3, 1, "x^3").partial_derivative(0).is_zero());
}

TEST_CASE("difference operator") {
  CHECK(P(Q, 1, "x^2").difference_delta(0) == P(Q, 1, "2*x-1"));
  CHECK(P(Q, 2, "7").difference_delta(1).is_zero());
  // oracle: q(y) - q(y-1) from explicit binomial expansions
  MPoly oracle = P(Q, 1, "x^5+x^4") - binomial_power(Q, -1, 5) - binomial_power(Q, -1, 4);
  MPoly delta = P(Q, 1, "x^5+x^4").difference_delta(0);
  CHECK(delta == oracle);
  CHECK(delta == P(Q, 1, "5*x^4 - 6*x^3 + 4*x^2 - x"));
  CHECK(delta.degree() == 4);
}

TEST_CASE("ring axioms on random triples") {
  Rng rng(2024);
  for (const auto& f : all_fields()) {
    for (int i = 0; i < 30; ++i) {
      MPoly a = random_with_zeta(f, 3, rng), b = random_with_zeta(f, 3, rng),
            c = random_with_zeta(f, 3, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a - a).is_zero());
      if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == a.degree() + b.degree());
    }
  }
}

TEST_CASE("substitution is a ring homomorphism") {
  Rng rng(7);
  for (const auto& f : all_fields()) {
    for (int i = 0; i < 15; ++i) {
      MPoly a = random_with_zeta(f, 2, rng), b = random_with_zeta(f, 2, rng);
      std::vector<MPoly> v{random_poly(f, 3, 2, 3, rng), random_poly(f, 3, 3, 3, rng)};
      CHECK((a * b).substitute(v) == a.substitute(v) * b.substitute(v));
      CHECK((a + b).substitute(v) == a.substitute(v) + b.substitute(v));
    }
  }
}

TEST_CASE("difference operator telescopes") {
  Rng rng(99);
  for (const auto& f : all_fields()) {
    for (int i = 0; i < 20; ++i) {
      MPoly q = random_poly(f, 2, 5, 4, rng);
      Scalar one = Scalar::one(f);
      MPoly q_plus = q.shift(1, one);
      CHECK(q_plus.difference_delta(1) + q.difference_delta(1) == q_plus - q.shift(1, -one));
    }
  }
}

TEST_CASE("difference operator lowers the degree") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    MPoly q = random_poly_in(Q, 1, 0, static_cast<int>(rng.uniform(1, 8)), rng);
    CHECK(q.difference_delta(0).degree() == q.degree().value() - 1);
  }
}

TEST_CASE("parser and printer") {
  MPoly p = P(Q, 2, "-1/2*x^2*y + 3 - y");
  CHECK(p.to_string() == "-1/2*x^2*y - y + 3");
  CHECK(P(Q, 2, p.to_string().c_str()) == p);
  CHECK_THROWS_AS(P(Q, 2, "x + q"), Error);
  CHECK_THROWS_AS(P(Q, 2, "x + (y"), Error);
  CHECK(P(Z8, 1, "zeta^2*x").coefficient(Monomial::variable(0)) == Scalar::zeta(Z8).pow(2));
}
