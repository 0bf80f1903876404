#include "polyaut/random.hpp"

#include <limits>

#include "polyaut/error.hpp"

namespace polyaut {

Rng::Rng(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair; avoids correlated mt19937 streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  engine_.seed(z);
}

long long Rng::uniform(long long lo, long long hi) {
  require(lo <= hi, Reason::InvalidArgument, "empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<long long>(next());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return lo + static_cast<long long>(v % span);
}

Scalar random_scalar(const FieldSpec& f, Rng& rng, long long lo, long long hi) {
  return Scalar::from_int(f, rng.uniform(lo, hi));
}

Scalar random_nonzero_scalar(const FieldSpec& f, Rng& rng, long long lo, long long hi) {
  for (;;) {
    Scalar s = random_scalar(f, rng, lo, hi);
    if (!s.is_zero()) return s;
  }
}

MPoly random_poly(const FieldSpec& f, std::size_t nvars, int max_degree, int terms, Rng& rng,
                  long long lo, long long hi) {
  std::vector<MPoly::Term> out;
  for (int t = 0; t < terms; ++t) {
    int d = static_cast<int>(rng.uniform(0, max_degree));
    Monomial m;
    for (int k = 0; k < d; ++k) {
      std::size_t v = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(nvars) - 1));
      m.set(v, m[v] + 1);
    }
    out.emplace_back(m, random_scalar(f, rng, lo, hi));
  }
  return MPoly::from_terms(f, nvars, std::move(out));
}

MPoly random_poly_in(const FieldSpec& f, std::size_t nvars, std::size_t var, int degree, Rng& rng,
                     long long lo, long long hi) {
  MPoly p(f, nvars);
  if (degree < 0) return p;
  MPoly v = MPoly::variable(f, nvars, var);
  for (int k = 0; k <= degree; ++k) {
    Scalar c = k == degree ? random_nonzero_scalar(f, rng, lo, hi) : random_scalar(f, rng, lo, hi);
    p += v.pow(static_cast<unsigned>(k)) * c;
  }
  return p;
}

}  // namespace polyaut
