#pragma once

// Seeded generators for small random instances. Draws use only the raw
// mt19937_64 stream so sequences are identical across standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "fibsite/fibred.hpp"
#include "fibsite/fincat.hpp"
#include "fibsite/hocopb.hpp"
#include "fibsite/site.hpp"

namespace fibsite {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n); n must be positive.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    bool coin() { return (engine_() & 1u) != 0; }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo + 1)));
    }

private:
    std::mt19937_64 engine_;
};

/// Thin category of a random preorder on 1..max_objects objects.
FiniteCategory random_preorder(Rng& rng, std::size_t max_objects);
/// Preorders, cyclic groups, codiscrete groupoids and their products and
/// disjoint unions, within the given caps.
FiniteCategory random_category(Rng& rng, std::size_t max_objects, std::size_t max_morphisms);
/// Disjoint union of codiscrete groupoids with cyclic automorphism groups.
FiniteCategory random_groupoid_category(Rng& rng, std::size_t max_objects, std::size_t max_order);
/// Coproduct of representables and terminal presheaves, at most `max_summands` of them.
Presheaf random_presheaf(Rng& rng, const CategoryRef& c, std::size_t max_summands);
/// Topology generated by a few random sieves.
GrothendieckTopology random_topology(Rng& rng, const CategoryRef& c);

/// Random strict presheaf of categories with at most `max_section` objects per section.
PresheafOfCategories random_presheaf_of_categories(Rng& rng, const CategoryRef& site, std::size_t max_section);
/// As above, with groupoid values.
PresheafOfCategories random_presheaf_of_groupoids(Rng& rng, const CategoryRef& site, std::size_t max_section);

struct SectionwiseEquivalence {
    PresheafOfCategoriesRef domain;
    PresheafOfCategoriesRef codomain;
    MorphismOfPresheavesOfCategories map;
};

/// Projection G × K -> G with K sectionwise codiscrete and nonempty.
SectionwiseEquivalence random_sectionwise_equivalence(Rng& rng, const CategoryRef& site, std::size_t max_section);

/// Random presheaf on the total category of `fs`, converted to an enriched diagram.
EnrichedSetDiagram random_enriched_diagram(Rng& rng, const FibredSite& fs, std::size_t max_summands);

/// Disjoint union of codiscrete groupoids with automorphism groups 1, ℤ/2 or
/// ℤ/3; pieces with more than one object have trivial groups.
Groupoid random_small_groupoid(Rng& rng, std::size_t max_objects);
/// Simplices attached to strings of the nerve of g plus a subcomplex of the
/// nerve itself, with at most `max_nondegenerate` nondegenerate simplices.
OverNerve random_over_nerve(Rng& rng, const CategoryRef& g, std::size_t dim, std::size_t max_nondegenerate);
/// Point, free orbits, pullbacks of random over-objects and products with small simplicial sets.
GroupoidDiagram random_groupoid_diagram(Rng& rng, const Groupoid& g, std::size_t dim);

/// An enriched diagram and an object over the nerves on the same presheaf of groupoids.
struct EnrichedAdjunctionSample {
    FibredSite fibred;
    EnrichedGroupoidDiagram diagram;
    PresheafOverNerve over;
};

EnrichedAdjunctionSample random_enriched_adjunction_sample(Rng& rng, const CategoryRef& site, std::size_t max_section,
                                                           std::size_t dim);

}  // namespace fibsite
