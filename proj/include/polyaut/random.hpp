#pragma once

#include <cstdint>
#include <random>

#include "polyaut/field.hpp"
#include "polyaut/mpoly.hpp"

namespace polyaut {

/// Seeded generator with a platform-independent integer distribution, so
/// that seeded runs reproduce byte-identical output everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for (seed, index), e.g. one per sampling trial.
  Rng(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  long long uniform(long long lo, long long hi);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Integer in [lo, hi] mapped into the field.
Scalar random_scalar(const FieldSpec& f, Rng& rng, long long lo, long long hi);
Scalar random_nonzero_scalar(const FieldSpec& f, Rng& rng, long long lo, long long hi);

/// Up to `terms` random monomials of total degree <= max_degree with integer
/// coefficients in [lo, hi].
MPoly random_poly(const FieldSpec& f, std::size_t nvars, int max_degree, int terms, Rng& rng,
                  long long lo = -3, long long hi = 3);

/// Univariate-in-variable `var` polynomial of exact degree `degree` (for
/// degree >= 0) embedded in nvars variables.
MPoly random_poly_in(const FieldSpec& f, std::size_t nvars, std::size_t var, int degree, Rng& rng,
                     long long lo = -3, long long hi = 3);

}  // namespace polyaut
