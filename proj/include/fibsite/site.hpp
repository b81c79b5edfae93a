#pragma once

// Sieves, Grothendieck topologies on finite categories, the sheaf condition
// and sheafification by the plus construction.

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fibsite/fincat.hpp"

namespace fibsite {

/// Morphisms with a common target, as a bitset over all morphisms of the site.
struct Sieve {
    Index base = npos;
    boost::dynamic_bitset<> members;

    bool contains(Index m) const { return members.test(m); }
    std::vector<Index> member_list() const;
    std::size_t size() const { return members.count(); }

    bool operator==(const Sieve& o) const { return base == o.base && members == o.members; }
    bool operator<(const Sieve& o) const {
        return base != o.base ? base < o.base : members < o.members;
    }
};

Sieve empty_sieve(const FiniteCategory& c, Index base);
Sieve maximal_sieve(const FiniteCategory& c, Index base);
/// Smallest sieve containing `generators`; each must target `base`.
Sieve sieve_from_generators(const FiniteCategory& c, Index base, const std::vector<Index>& generators);
/// {γ into V | α∘γ ∈ s} for α: V -> base(s).
Sieve pullback_sieve(const FiniteCategory& c, const Sieve& s, Index alpha);
/// Closed under precomposition and all members target the base.
bool is_sieve(const FiniteCategory& c, const Sieve& s);
std::string describe(const FiniteCategory& c, const Sieve& s);

/// Caps for the exhaustive local-character check.
struct SiteLimits {
    std::size_t max_objects = 5;
    std::size_t max_morphisms = 16;
    std::size_t max_sieves_per_object = 1u << 18;

    /// Raised caps used for total categories of Grothendieck constructions.
    static SiteLimits total() { return {256, 4096, 1u << 18}; }
};

/// Every sieve on `base`; throws CapExceeded past `limits`.
std::vector<Sieve> enumerate_sieves(const FiniteCategory& c, Index base, const SiteLimits& limits = {});

struct GrothendieckTopology {
    CategoryRef site;
    std::vector<std::set<Sieve>> covers;  // per object

    bool covering(const Sieve& s) const { return covers.at(s.base).count(s) > 0; }
    bool is_trivial() const;
};

GrothendieckTopology trivial_topology(const CategoryRef& c);
/// Covers exactly as listed per object, plus the maximal sieves.
GrothendieckTopology topology_from_covers(const CategoryRef& c, const std::vector<std::vector<Sieve>>& covers);
/// Smallest topology containing the given sieves (closure under all three axioms).
GrothendieckTopology generate_topology(const CategoryRef& c, const std::vector<Sieve>& generators,
                                       const SiteLimits& limits = {});

/// One entry per violated axiom instance; empty iff `t` is a Grothendieck topology.
/// Throws CapExceeded when the site is larger than `limits`.
ValidationReport verify_topology(const GrothendieckTopology& t, const SiteLimits& limits = {});

// ---------------------------------------------------------------------------

/// A presheaf is a contravariant set-valued functor on the site.
using Presheaf = SetValuedFunctor;

/// The representable presheaf hom(-, u), with elements ordered as c.morphisms_into(u).
Presheaf representable(const CategoryRef& c, Index u);
/// Coproduct of presheaves on the same base.
Presheaf coproduct(const Presheaf& a, const Presheaf& b);

/// Matching family on s: one element of F(source α) per member α, indexed like
/// s.member_list(), compatible under precomposition.
using MatchingFamily = std::vector<Index>;

std::vector<MatchingFamily> matching_families(const Presheaf& f, const FiniteCategory& c, const Sieve& s);
/// The family α ↦ F(α)(x) induced by a section x ∈ F(base).
MatchingFamily restrict_section(const Presheaf& f, const FiniteCategory& c, const Sieve& s, Index x);

struct SheafWitness {
    enum class Failure { existence, uniqueness };
    Index object = npos;
    Sieve sieve;
    Failure failure = Failure::existence;
    MatchingFamily family;
    std::vector<Index> sections;  // for uniqueness failures: the clashing sections
};

struct SheafCheck {
    bool sheaf = true;
    std::optional<SheafWitness> witness;
};

SheafCheck is_sheaf(const Presheaf& f, const GrothendieckTopology& t);

struct Sheafification {
    Presheaf sheaf;
    std::vector<std::vector<Index>> unit;  // per object: F(U) -> aF(U)
};

/// One application of the plus construction, with its canonical map F -> F+.
Sheafification plus_construction(const Presheaf& f, const GrothendieckTopology& t);
/// Plus construction applied twice.
Sheafification sheafify(const Presheaf& f, const GrothendieckTopology& t);

}  // namespace fibsite
