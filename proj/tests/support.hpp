#pragma once

// Random generators shared by the unit tests and the acceptance binary.

#include "polyaut/plane.hpp"
#include "polyaut/random.hpp"

namespace polyaut::testing {

inline AffineMap random_affine(const FieldSpec& f, Rng& rng, bool non_triangular) {
  for (;;) {
    Matrix m(f, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = random_scalar(f, rng, -3, 3);
    if (non_triangular && m(1, 0).is_zero()) continue;
    if (m.det().is_zero()) continue;
    return AffineMap(m, random_scalar(f, rng, -3, 3), random_scalar(f, rng, -3, 3));
  }
}

/// (a x + p(y), b y + c) with deg p exactly `degree` (or p = 0 for degree < 0).
inline TriMap random_trimap(const FieldSpec& f, Rng& rng, int degree) {
  MPoly p = random_poly_in(f, 1, 0, degree, rng);
  return TriMap(random_nonzero_scalar(f, rng, -3, 3), p, random_nonzero_scalar(f, rng, -3, 3),
                random_scalar(f, rng, -3, 3));
}

/// Alternating product a_0 t_1 a_1 ... whose triangular degrees multiply to
/// at most max_degree.
inline std::vector<Factor> random_tame_factors(const FieldSpec& f, Rng& rng, long long max_degree) {
  std::vector<Factor> w;
  long long deg = 1;
  if (rng.coin()) w.push_back(random_trimap(f, rng, static_cast<int>(rng.uniform(0, 1))));
  w.push_back(random_affine(f, rng, true));
  for (int s = 0; s < 4; ++s) {
    long long room = max_degree / deg;
    if (room < 2) break;
    int d = static_cast<int>(rng.uniform(2, std::min<long long>(room, 6)));
    deg *= d;
    w.push_back(random_trimap(f, rng, d));
    w.push_back(random_affine(f, rng, true));
  }
  return w;
}

/// Involution polynomial of exact degree `degree` >= 2.
inline MPoly random_involution_poly(const FieldSpec& f, Rng& rng, int degree) {
  return random_poly_in(f, 1, 0, degree, rng);
}

/// Reduced-form data τ1 σ i_1 σ ... σ i_{l-1} σ τ2 with random triangular τ's.
inline ReducedForm random_reduced_form(const FieldSpec& f, Rng& rng, std::size_t length, int max_deg) {
  ReducedForm nf{random_trimap(f, rng, static_cast<int>(rng.uniform(-1, 3))), {},
                 random_trimap(f, rng, static_cast<int>(rng.uniform(-1, 3)))};
  for (std::size_t j = 0; j + 1 < length; ++j)
    nf.involutions.push_back(random_involution_poly(f, rng, static_cast<int>(rng.uniform(2, max_deg))));
  return nf;
}

// Brute force over all (alpha, beta, gamma) in F_p^3 with alpha, beta != 0;
// coefficients of p are given low to high.
inline bool wg_brute(std::uint64_t q, const std::vector<std::uint64_t>& c) {
  const std::size_t d = c.size() - 1;
  for (std::uint64_t al = 1; al < q; ++al)
    for (std::uint64_t be = 1; be < q; ++be)
      for (std::uint64_t ga = 0; ga < q; ++ga) {
        if (al == 1 && be == 1 && ga == 0) continue;
        // r = p(be*y + ga) by expanding each power
        std::vector<std::uint64_t> r(d + 1, 0), pw(d + 1, 0);
        pw[0] = 1;
        for (std::size_t i = 0; i <= d; ++i) {
          for (std::size_t j = 0; j <= d; ++j) r[j] = (r[j] + c[i] * pw[j]) % q;
          std::vector<std::uint64_t> next(d + 1, 0);
          for (std::size_t j = 0; j <= d; ++j) {
            next[j] = (next[j] + pw[j] * ga) % q;
            if (j + 1 <= d) next[j + 1] = (next[j + 1] + pw[j] * be) % q;
          }
          pw = next;
        }
        bool small = true;
        for (std::size_t j = 2; j <= d; ++j) small = small && (c[j] + q * q - al * r[j] % q) % q == 0;
        if (small) return false;
      }
  return true;
}

inline MPoly from_coeffs(const FieldSpec& f, const std::vector<std::uint64_t>& c) {
  MPoly p(f, 1);
  MPoly y = MPoly::variable(f, 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    p += y.pow(static_cast<unsigned>(i)) * Scalar::from_int(f, static_cast<long long>(c[i]));
  return p;
}

}  // namespace polyaut::testing
