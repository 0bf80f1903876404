#include "polyaut/endo.hpp"
#include "polyaut/plane.hpp"

namespace polyaut {

namespace {

// Above this bound the plane certificate skips the formal-inverse cross-check.
constexpr long long kCrossCheckDegree = 12;

Endo sum_parts(const std::vector<Endo>& parts, const FieldSpec& field, std::size_t n) {
  std::vector<MPoly> c(n, MPoly(field, n));
  for (const auto& g : parts)
    for (std::size_t i = 0; i < n; ++i) c[i] += g[i];
  return Endo(std::move(c));
}

}  // namespace

CertResult certify_automorphism(const Endo& f) {
  const FieldSpec& field = f.field();
  const std::size_t n = f.n();
  MPoly jac = jacobian_det(f);
  if (jac.is_zero()) return NotAutomorphism{Reason::JacobianZero, "Jacobian determinant is 0"};
  if (!jac.is_constant())
    return NotAutomorphism{Reason::JacobianNotConstant, "Jacobian determinant is " + jac.to_string()};

  // f = t_{f(0)}∘f~ with f~(0) = 0
  std::vector<Scalar> shift = f.constant_terms();
  std::vector<Scalar> back;
  for (const auto& s : shift) back.push_back(-s);
  Endo ft = compose(Endo::translation(field, back), f);
  if (!ft.linear_matrix().inverse())
    return NotAutomorphism{Reason::LinearPartSingular, "linear part is singular"};

  const long long d = f.degree().value();
  long long bound = 1;
  for (std::size_t i = 1; i < n; ++i) bound *= d;

  if (n == 2) {
    TameWord w(field);
    try {
      w = jvdk_factorize(f);
    } catch (const Error& e) {
      if (e.reason() != Reason::NotAutomorphism) throw;
      return NotAutomorphism{Reason::InverseDegreeExceeded,
                             "no polynomial inverse of degree <= " + std::to_string(bound) + ": " + e.what()};
    }
    require(w.to_endo() == f, Reason::PropertyViolation, "factorization does not recompose to f");
    Endo inv = w.inverse().to_endo();
    if (bound <= kCrossCheckDegree) {
      Endo g = sum_parts(formal_inverse_truncated(ft, bound), field, n);
      require(compose(g, Endo::translation(field, back)) == inv, Reason::PropertyViolation,
              "formal inverse disagrees with the factorization inverse");
    }
    return AutoCert{f, std::move(inv)};
  }

  Endo g = sum_parts(formal_inverse_truncated(ft, bound), field, n);
  if (!compose(ft, g).is_identity() || !compose(g, ft).is_identity())
    return NotAutomorphism{Reason::InverseDegreeExceeded,
                           "formal inverse has terms beyond degree " + std::to_string(bound)};
  return AutoCert{f, compose(g, Endo::translation(field, back))};
}

AutoCert require_automorphism(const Endo& f) {
  CertResult r = certify_automorphism(f);
  if (auto* bad = std::get_if<NotAutomorphism>(&r))
    fail(bad->reason, "not an automorphism: " + bad->detail);
  return std::get<AutoCert>(std::move(r));
}

}  // namespace polyaut
