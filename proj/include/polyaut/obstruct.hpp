#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyaut/plane.hpp"
#include "polyaut/random.hpp"

namespace polyaut {

/// Verdict on the weakly general property of p(y): deg[p(y) - a p(b y + c)] <= 1
/// only for (a, b, c) = (1, 1, 0).  Only triples in the ground field are searched.
struct WGReport {
  MPoly polynomial;
  bool verdict;
  /// (alpha, beta, gamma) violating the property when the verdict is false.
  std::optional<std::array<Scalar, 3>> witness;
  /// "exhaustive" over F_p, "rational-roots" over the rationals.
  std::string method;
};

/// True when deg[p(y) - alpha p(beta y + gamma)] <= 1.
bool wg_relation_holds(const MPoly& p, const Scalar& alpha, const Scalar& beta, const Scalar& gamma);

/// Over F_p (p < 4096) by exhaustive search, over the rationals by
/// eliminating alpha and gamma and testing rational roots in beta.
WGReport is_weakly_general(const MPoly& p);

/// Reduced word of f = (σ∘t)^2∘σ∘(t∘σ)^2 with t = (-x + p(y), y); no
/// hypothesis on p beyond deg p >= 2.
TameWord obstruction_word(const MPoly& p);

/// The explicit involution f for a weakly general p.  Certified by
/// factorizing the expanded map: the factorization must equal the word, have
/// affine length 5, and its inverse must expand back to f itself.
AutoCert obstruction_generator(const MPoly& p);

/// Reduced expression of u = (t∘σ)^2∘b∘(σ∘t)^2 for b in B \ {id}, following
/// the four cases B_0 \ B_1, B_1 \ B_2, B_2 \ B_3 and B_3 \ {id}.
struct RewriteU {
  int case_tag;
  std::vector<Factor> factors;
  /// The direct composition, reduced; always the same group element.
  TameWord direct;
  /// Whether the direct composition was also expanded and refactorized.
  bool explicit_checked;
};

/// Throws IdentityInput for b = id, NotWeaklyGeneral if the middle factor of
/// case 3 or 4 turns out affine (which the weakly general property rules out).
RewriteU rewrite_u(const TriMap& b, const MPoly& p);

struct SampleTrial {
  std::uint64_t index;
  int k;
  std::string word;
  std::size_t affine_length;
};

struct SampleReport {
  std::uint64_t seed;
  std::vector<SampleTrial> trials;
  std::map<std::size_t, std::uint64_t> histogram;
};

/// Random element of B: a, b in [-3, 3] \ {0}, p of degree uniform in
/// [0, 6] with coefficients in [-3, 3], c in [-3, 3].
TriMap random_jonquieres(const FieldSpec& field, Rng& rng, bool non_identity);

/// Samples words b_1∘f∘b_2∘...∘b_k∘f∘b_{k+1} with k uniform in [0, kmax].
/// Trial i draws from Rng(seed, i), so the report does not depend on the
/// number of worker threads.  Throws PropertyViolation if some word has
/// affine length in [1, 4].
SampleReport sample_words(const MPoly& p, int kmax, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads = 0);

enum class Membership { NotInSubgroup, Unknown };

/// NotInSubgroup when 1 <= l_A(g) <= 4, a sound certificate that g is not in
/// <B, f>; Unknown otherwise.  Never claims membership.
Membership non_membership_certificate(const Endo& g, const MPoly& p);
Membership non_membership_certificate(const TameWord& g, const MPoly& p);

}  // namespace polyaut
