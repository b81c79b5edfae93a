#pragma once

// Cohomology of finite categories with coefficients in presheaves of finitely
// generated abelian groups: cochain complexes of strings, stack cohomology
// over a fibred site with the trivial topology, Čech cohomology of a covering
// sieve and the comparison along sectionwise equivalences.

#include <optional>
#include <vector>

#include "fibsite/fibred.hpp"
#include "fibsite/fincat.hpp"
#include "fibsite/linalg.hpp"
#include "fibsite/site.hpp"

namespace fibsite {

inline constexpr std::size_t default_string_cap = 200000;

/// Contravariant functor to finitely generated abelian groups. Each value is
/// presented by cyclic generators (order 0 for ℤ); f: a -> b acts by an
/// integer matrix from the generators of F(b) to those of F(a).
struct AbelianPresheaf {
    CategoryRef base;
    std::vector<std::vector<BigInt>> orders;  // per object
    std::vector<IntegerMatrix> restriction;   // per morphism, rows = generators of F(source)

    FgAbelianGroup value(Index o) const { return FgAbelianGroup::from_cyclic(orders.at(o)); }
};

/// Shapes, orders ≥ 0, relations mapped into relations, identities and composites respected.
ValidationReport validate_abelian_presheaf(const AbelianPresheaf& f);
/// The constant presheaf on the given cyclic orders, identity restrictions.
AbelianPresheaf constant_abelian(const CategoryRef& c, const std::vector<BigInt>& orders);
/// F∘f on the domain of f.
AbelianPresheaf precompose(const AbelianPresheaf& f, const Functor& along);
/// The underlying presheaf of sets; every order must be positive. Elements
/// are coefficient tuples in mixed radix, first generator fastest.
Presheaf underlying_presheaf(const AbelianPresheaf& f);

/// Cⁿ presented by cyclic generators, with dⁿ: Cⁿ -> Cⁿ⁺¹ on generators.
struct CochainComplex {
    std::vector<std::vector<BigInt>> orders;    // per degree
    std::vector<SparseMatrix> differential;     // dⁿ, rows = generators of Cⁿ⁺¹
    std::vector<std::size_t> strings;           // strings per degree
};

/// Cⁿ = ∏ F(x0) over n-strings x0 -> ... -> xn, with
/// (dφ)(x0 -> ... -> xn+1) = F(x0 -> x1)φ(x1 -> ...) + Σ_{i ≥ 1} (-1)^i φ(d_i).
/// Normalized strings omit identities. Degrees 0..n_max+1, differentials
/// d⁰..d^{n_max}. Throws CapExceeded past `cap` strings in a degree.
CochainComplex cochain_complex(const FiniteCategory& d, const AbelianPresheaf& f, std::size_t n_max,
                               bool normalized = true, std::size_t cap = default_string_cap);
/// dⁿ⁺¹∘dⁿ vanishes modulo the relations of Cⁿ⁺².
bool squares_to_zero(const CochainComplex& c);
/// H⁰..H^top with top the index of the last differential. Throws
/// ValidationError when a differential does not respect the relations.
std::vector<FgAbelianGroup> cohomology_of_complex(const CochainComplex& c);

/// Cohomology of the total category of `fs`; refused unless its topology is trivial.
std::vector<FgAbelianGroup> stack_cohomology(const FibredSite& fs, const AbelianPresheaf& f, std::size_t n_max,
                                             std::size_t cap = default_string_cap);
/// As above from a base topology and a presheaf of groupoids.
std::vector<FgAbelianGroup> stack_cohomology(const GrothendieckTopology& base, const PresheafOfGroupoids& g,
                                             const AbelianPresheaf& f, std::size_t n_max,
                                             std::size_t cap = default_string_cap);

/// The full subcategory of C/u on the members of s; object k is the k-th member.
struct SieveCategory {
    CategoryRef category;
    std::vector<Index> member;  // per object: the morphism of the site
    std::vector<Index> arrow;   // per morphism: γ with β∘γ = α
};

SieveCategory sieve_category(const FiniteCategory& c, const Sieve& s);
/// Cohomology of the sieve category with coefficients F(source α); s must cover u.
std::vector<FgAbelianGroup> cech_cohomology(const GrothendieckTopology& t, Index u, const Sieve& s,
                                            const AbelianPresheaf& f, std::size_t n_max,
                                            std::size_t cap = default_string_cap);

struct InvarianceReport {
    std::vector<FgAbelianGroup> codomain;  // Hⁿ(C/H, F)
    std::vector<FgAbelianGroup> domain;    // Hⁿ(C/G, m*F)
    std::vector<bool> match;

    bool pass() const;
};

/// Compares the cohomology of both total categories, with coefficients pulled
/// back along the induced functor. Refused when m is not a sectionwise
/// equivalence or the base topology is not trivial.
InvarianceReport invariance_report(const MorphismOfPresheavesOfCategories& m, const AbelianPresheaf& f,
                                   std::size_t n_max, const std::optional<GrothendieckTopology>& base = std::nullopt,
                                   std::size_t cap = default_string_cap);

}  // namespace fibsite
