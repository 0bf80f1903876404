#include "polyaut/obstruct.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "polyaut/error.hpp"

namespace polyaut {

namespace {

MPoly uvar(const FieldSpec& f) { return MPoly::variable(f, 1, 0); }

long long udegree(const MPoly& p) { return p.is_zero() ? -1 : p.degree().value(); }

void require_univariate(const MPoly& p) {
  require(p.nvars() == 1, Reason::ArityMismatch, "expected a polynomial in the single variable y");
}

// Coefficient vector, index = exponent.
template <class T, class Get>
std::vector<T> dense(const MPoly& p, Get get) {
  std::vector<T> c(static_cast<std::size_t>(udegree(p) + 1));
  for (const auto& [m, s] : p.terms()) c[m[0]] = get(s);
  return c;
}

// ---- exhaustive search over F_p ----

constexpr std::uint64_t kMaxExhaustivePrime = 4096;

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

WGReport wg_exhaustive(const MPoly& p) {
  const FieldSpec& f = p.field();
  const std::uint64_t q = f.modulus();
  if (q >= kMaxExhaustivePrime)
    fail(Reason::InvalidArgument,
         "exhaustive search is limited to primes below " + std::to_string(kMaxExhaustivePrime));
  const auto c = dense<std::uint64_t>(p, [](const Scalar& s) { return s.residue(); });
  const std::size_t d = c.size() - 1;
  // The top coefficient forces alpha = beta^-d, so the search runs over
  // (beta, gamma) only.
  std::vector<std::uint64_t> shifted(d + 1);
  for (std::uint64_t beta = 1; beta < q; ++beta) {
    const std::uint64_t alpha = powmod(powmod(beta, d, q), q - 2, q);
    for (std::uint64_t gamma = 0; gamma < q; ++gamma) {
      // Horner: p(y + gamma), then scale y -> beta y.
      std::fill(shifted.begin(), shifted.end(), 0);
      for (std::size_t i = d + 1; i-- > 0;) {
        for (std::size_t j = d; j > 0; --j) shifted[j] = (shifted[j - 1] + shifted[j] * gamma) % q;
        shifted[0] = (shifted[0] * gamma + c[i]) % q;
      }
      bool small = true;
      std::uint64_t bp = powmod(beta, 2, q);
      for (std::size_t j = 2; j <= d && small; ++j, bp = bp * beta % q)
        small = (c[j] + q - alpha * (shifted[j] * bp % q) % q) % q == 0;
      if (small && !(beta == 1 && gamma == 0 && alpha == 1)) {
        return {p, false,
                std::array<Scalar, 3>{Scalar::from_int(f, static_cast<long long>(alpha)),
                                      Scalar::from_int(f, static_cast<long long>(beta)),
                                      Scalar::from_int(f, static_cast<long long>(gamma))},
                "exhaustive"};
      }
    }
  }
  return {p, true, std::nullopt, "exhaustive"};
}

// ---- rational root search over Q ----

using QPoly = std::vector<mpq_class>;  // dense, index = exponent, no trailing zeros

void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly qpoly(const MPoly& p) {
  QPoly a = dense<mpq_class>(p, [](const Scalar& s) { return s.rational(); });
  trim(a);
  return a;
}

QPoly qrem(QPoly a, const QPoly& b) {
  while (a.size() >= b.size()) {
    mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

QPoly qgcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = qrem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    mpq_class lead = a.back();
    for (auto& x : a) x /= lead;
  }
  return a;
}

mpq_class qeval(const QPoly& a, const mpq_class& x) {
  mpq_class r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

// Positive divisors of |n| > 0; trial division, since the coefficients come
// from the input polynomial and stay small in practice.
std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, unsigned>> primes;
  for (mpz_class d = 2; d * d <= n; ++d) {
    require(d < 10000000, Reason::InvalidArgument, "coefficients too large for the rational root test");
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) primes.emplace_back(d, e);
  }
  if (n > 1) primes.emplace_back(n, 1);
  std::vector<mpz_class> out{1};
  for (const auto& [pr, e] : primes) {
    const std::size_t base = out.size();
    mpz_class pw = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pw *= pr;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pw);
    }
  }
  return out;
}

// Distinct nonzero rational roots.
std::vector<mpq_class> rational_roots(QPoly a) {
  std::size_t low = 0;
  while (low < a.size() && a[low] == 0) ++low;
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(low));
  if (a.size() <= 1) return {};
  mpz_class den = 1;
  for (const auto& x : a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> z;
  for (const auto& x : a) z.push_back(mpz_class(x * den));
  std::vector<mpq_class> roots;
  for (const auto& r : divisors(z.front()))
    for (const auto& s : divisors(z.back()))
      for (int sign : {1, -1}) {
        mpq_class cand(sign * r, s);
        cand.canonicalize();
        if (qeval(a, cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end())
          roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

WGReport wg_rational(const MPoly& p) {
  const FieldSpec& f = p.field();
  const QPoly c = qpoly(p);
  const long long d = static_cast<long long>(c.size()) - 1;
  // alpha = beta^-d from the top coefficient; the y^{d-1} coefficient gives
  // gamma = p_{d-1} (beta - 1) / (d p_d).  Every lower coefficient of
  // beta^d p(y) - p(beta y + gamma(beta)) must vanish, a polynomial in beta.
  const MPoly beta = MPoly::variable(f, 2, 0), y = MPoly::variable(f, 2, 1);
  const Scalar k = Scalar::from_rational(f, c[d - 1] / (mpq_class(static_cast<long>(d)) * c[d]));
  const MPoly gamma = (beta - MPoly::constant(f, 2, 1)) * k;
  const MPoly lhs = p.substitute(std::vector{y}) * beta.pow(static_cast<unsigned>(d));
  const MPoly rhs = p.substitute(std::vector{beta * y + gamma});
  const MPoly diff = lhs - rhs;
  std::vector<QPoly> constraints(static_cast<std::size_t>(d + 1));
  for (const auto& [m, s] : diff.terms()) {
    auto& q = constraints[m[1]];
    if (q.size() <= m[0]) q.resize(m[0] + 1);
    q[m[0]] = s.rational();
  }
  QPoly g;
  for (long long j = 2; j <= d; ++j) {
    trim(constraints[j]);
    g = qgcd(g, constraints[j]);
  }
  auto witness_at = [&](const mpq_class& b) {
    mpq_class alpha = 1;
    for (long long i = 0; i < d; ++i) alpha /= b;
    mpq_class gam = c[d - 1] * (b - 1) / (mpq_class(static_cast<long>(d)) * c[d]);
    return std::array<Scalar, 3>{Scalar::from_rational(f, alpha), Scalar::from_rational(f, b),
                                 Scalar::from_rational(f, gam)};
  };
  if (g.empty()) return {p, false, witness_at(2), "rational-roots"};
  for (const auto& r : rational_roots(g))
    if (r != 1) return {p, false, witness_at(r), "rational-roots"};
  return {p, true, std::nullopt, "rational-roots"};
}

}  // namespace

bool wg_relation_holds(const MPoly& p, const Scalar& alpha, const Scalar& beta, const Scalar& gamma) {
  require_univariate(p);
  const FieldSpec& f = p.field();
  MPoly arg = uvar(f) * beta + MPoly::constant(f, 1, gamma);
  return (p - p.substitute(std::vector{arg}) * alpha).degree() <= 1;
}

WGReport is_weakly_general(const MPoly& p) {
  require_univariate(p);
  require(udegree(p) >= 2, Reason::DegreeTooSmall, "weakly general needs deg p >= 2");
  WGReport r;
  switch (p.field().kind()) {
    case FieldKind::PrimeField:
      r = wg_exhaustive(p);
      break;
    case FieldKind::Rationals:
      r = wg_rational(p);
      break;
    case FieldKind::Cyclotomic8:
      fail(Reason::InvalidArgument, "weakly general test is available over the rationals and F_p only");
  }
  if (r.witness) {
    const auto& [a, b, c] = *r.witness;
    if (!wg_relation_holds(p, a, b, c))
      fail(Reason::PropertyViolation, "witness fails verification for " + p.to_string());
  }
  return r;
}

TameWord obstruction_word(const MPoly& p) {
  require_univariate(p);
  require(udegree(p) >= 2, Reason::DegreeTooSmall, "the obstruction element needs deg p >= 2");
  const FieldSpec& f = p.field();
  const Factor s = AffineMap::sigma(f), t = TriMap::involution(p);
  std::vector<Factor> w{s, t, s, t, s, t, s, t, s};
  return TameWord::reduce(f, w);
}

AutoCert obstruction_generator(const MPoly& p) {
  WGReport wg = is_weakly_general(p);
  if (!wg.verdict) {
    const auto& [a, b, c] = *wg.witness;
    fail(Reason::NotWeaklyGeneral, p.to_string() + " is not weakly general, witness (" + a.to_string() + ", " +
                                       b.to_string() + ", " + c.to_string() + ")");
  }
  const TameWord word = obstruction_word(p);
  require((word * word).is_identity(), Reason::PropertyViolation, "f o f is not the identity");
  require(word.affine_length() == 5, Reason::PropertyViolation, "obstruction word is not of affine length 5");

  const Endo fe = word.to_endo();
  const TameWord fact = jvdk_factorize(fe);
  require(fact.same_element(word) && fact.affine_length() == 5, Reason::PropertyViolation,
          "factorization of the expanded element disagrees with its word");
  const Endo inv = fact.inverse().to_endo();
  require(inv == fe, Reason::PropertyViolation, "expanded element is not an involution");
  return {fe, inv};
}

RewriteU rewrite_u(const TriMap& b, const MPoly& p) {
  require_univariate(p);
  require(udegree(p) >= 2, Reason::DegreeTooSmall, "rewrite needs deg p >= 2");
  require(!b.is_identity(), Reason::IdentityInput, "b = id shortens the word instead");
  const FieldSpec& f = p.field();
  const Factor s = AffineMap::sigma(f), t = TriMap::involution(p);
  RewriteU r{0, {}, TameWord(f), false};
  const Scalar one = Scalar::one(f);
  const bool translation_y = b.a().is_one() && b.b().is_one() && b.p().is_zero();
  if (!b.is_affine()) {
    r.case_tag = 1;
    r.factors = {t, s, t, s, b, s, t, s, t};
  } else if (!b.is_diagonal()) {
    r.case_tag = 2;
    AffineMap hat = AffineMap::sigma(f) * b.to_affine() * AffineMap::sigma(f);
    r.factors = {t, s, t, hat, t, s, t};
  } else if (!translation_y) {
    // b = (a x + c, b' y + c') gives (b' x + p(a y + c) - b' p(y) - c', a y + c)
    r.case_tag = 3;
    const Scalar& a = b.a();
    const Scalar c = b.p().constant_term();
    MPoly shifted = p.substitute(std::vector{uvar(f) * a + MPoly::constant(f, 1, c)});
    TriMap bar(b.b(), shifted - p * b.b() - MPoly::constant(f, 1, b.c()), a, c);
    if (bar.is_affine())
      fail(Reason::NotWeaklyGeneral, "p(a y + c) - b' p(y) has degree <= 1, so p is not weakly general");
    r.factors = {t, s, bar, s, t};
  } else {
    r.case_tag = 4;
    const Scalar& cp = b.c();
    TriMap tilde(one, p.shift(0, -cp) - p, one, -cp);
    require(!tilde.is_affine(), Reason::NotWeaklyGeneral,
            "p(y - c') - p(y) has degree <= 1, so p is not weakly general");
    r.factors = {tilde};
  }
  // Every factor list above is already reduced; the reduction must leave its
  // length unchanged and agree with the direct composition.
  TameWord closed = TameWord::reduce(f, r.factors);
  if (closed.factors().size() != r.factors.size())
    fail(Reason::PropertyViolation, "case " + std::to_string(r.case_tag) + " expression is not reduced");
  std::vector<Factor> direct{t, s, t, s, b, s, t, s, t};
  r.direct = TameWord::reduce(f, direct);
  if (!r.direct.same_element(closed))
    fail(Reason::PropertyViolation,
         "case " + std::to_string(r.case_tag) + " closed form disagrees with the composition");
  // Expanded check when the element is small enough to handle explicitly.
  // The intermediate degree is deg(p)^4 deg(b), whatever the result's degree.
  const long long dp = udegree(p);
  const long long deg = dp * dp * dp * dp * std::max<long long>(1, udegree(b.p()));
  if (deg <= 256) {
    Endo e = compose(compose(compose(factor_endo(t), factor_endo(s)), compose(factor_endo(t), factor_endo(s))),
                     compose(b.to_endo(), compose(compose(factor_endo(s), factor_endo(t)),
                                                  compose(factor_endo(s), factor_endo(t)))));
    if (!(e == closed.to_endo() && jvdk_factorize(e).same_element(closed)))
      fail(Reason::PropertyViolation, "case " + std::to_string(r.case_tag) + " disagrees with the expanded map");
    r.explicit_checked = true;
  }
  return r;
}

TriMap random_jonquieres(const FieldSpec& field, Rng& rng, bool non_identity) {
  for (;;) {
    Scalar a = random_nonzero_scalar(field, rng, -3, 3);
    Scalar b = random_nonzero_scalar(field, rng, -3, 3);
    int deg = static_cast<int>(rng.uniform(0, 6));
    MPoly p = random_poly_in(field, 1, 0, deg, rng, -3, 3);
    Scalar c = random_scalar(field, rng, -3, 3);
    TriMap t(a, p, b, c);
    if (!non_identity || !t.is_identity()) return t;
  }
}

namespace {

SampleTrial run_trial(const MPoly& p, const TameWord& fw, int kmax, std::uint64_t seed, std::uint64_t i) {
  const FieldSpec& field = p.field();
  Rng rng(seed, i);
  const int k = static_cast<int>(rng.uniform(0, kmax));
  std::vector<Factor> word;
  std::string desc;
  for (int j = 0; j <= k; ++j) {
    TriMap b = random_jonquieres(field, rng, j > 0 && j < k);
    word.push_back(b);
    desc += (j ? " o f o " : "") + b.to_string();
    if (j < k) word.insert(word.end(), fw.factors().begin(), fw.factors().end());
  }
  TameWord g = TameWord::reduce(field, word);
  const std::size_t len = g.affine_length();
  if (!(len == 0 || len >= 5))
    fail(Reason::PropertyViolation,
         "trial " + std::to_string(i) + " has affine length " + std::to_string(len) + ": " + desc);
  return {i, k, desc, len};
}

}  // namespace

SampleReport sample_words(const MPoly& p, int kmax, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads) {
  require(trials >= 1, Reason::InvalidArgument, "trials must be at least 1");
  require(kmax >= 0, Reason::InvalidArgument, "kmax must be nonnegative");
  WGReport wg = is_weakly_general(p);
  if (!wg.verdict) fail(Reason::NotWeaklyGeneral, p.to_string() + " is not weakly general");
  const TameWord fw = obstruction_word(p);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
  std::vector<std::optional<SampleTrial>> out(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < trials;) {
      try {
        out[i] = run_trial(p, fw, kmax, seed, i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = trials;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  SampleReport rep{seed, {}, {}};
  for (auto& t : out) {
    ++rep.histogram[t->affine_length];
    rep.trials.push_back(std::move(*t));
  }
  return rep;
}

Membership non_membership_certificate(const TameWord& g, const MPoly& p) {
  WGReport wg = is_weakly_general(p);
  if (!wg.verdict) fail(Reason::NotWeaklyGeneral, p.to_string() + " is not weakly general");
  const std::size_t len = g.affine_length();
  return len >= 1 && len <= 4 ? Membership::NotInSubgroup : Membership::Unknown;
}

// Factorization already decides invertibility in the plane; the formal
// inverse only runs on failure, to name the reason.
Membership non_membership_certificate(const Endo& g, const MPoly& p) {
  std::optional<TameWord> w;
  try {
    w = jvdk_factorize(g);
  } catch (const Error& e) {
    if (e.reason() != Reason::NotAutomorphism) throw;
  }
  if (!w) {
    const CertResult cert = certify_automorphism(g);
    const auto* no = std::get_if<NotAutomorphism>(&cert);
    fail(Reason::NotAutomorphism,
         no ? std::string(reason_name(no->reason)) + ": " + no->detail : "factorization failed");
  }
  return non_membership_certificate(*w, p);
}

}  // namespace polyaut
