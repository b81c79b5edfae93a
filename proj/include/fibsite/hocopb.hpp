#pragma once

// Homotopy colimits of groupoid diagrams of simplicial sets, the pullback
// functor pb, the unit and counit relating them, and their sectionwise
// versions over a presheaf of groupoids.

#include <vector>

#include "fibsite/fibred.hpp"
#include "fibsite/fincat.hpp"
#include "fibsite/sset.hpp"

namespace fibsite {

/// A covariant functor G -> sSet: a value per object and, for g: y -> z,
/// a map g_*: A_y -> A_z.
struct GroupoidDiagram {
    Groupoid base;
    std::vector<SSetRef> values;         // per object
    std::vector<SimplicialMap> action;   // per morphism

    std::size_t dim() const;
};

/// Maps valid with the right ends, equal truncations, identities and composites respected.
ValidationReport validate_groupoid_diagram(const GroupoidDiagram& a);

/// A simplicial set over the nerve of `base`. The codomain of `structure`
/// is a nerve of `base` keyed [a0, m1, ..., mn].
struct OverNerve {
    CategoryRef base;
    SSetRef total;
    SimplicialMap structure;

    const TruncatedSimplicialSet& nerve() const { return *structure.codomain; }
    /// X_σ: the n-simplices over the n-simplex σ of the nerve.
    std::vector<Index> fibre(std::size_t n, Index sigma) const;
};

ValidationReport validate_over_nerve(const OverNerve& x);
/// The nerve over itself via the identity.
OverNerve nerve_over_itself(const CategoryRef& g, std::size_t dim);

/// A natural transformation of diagrams: a map per object.
using DiagramSSetMap = std::vector<SimplicialMap>;

bool is_natural(const GroupoidDiagram& from, const GroupoidDiagram& to, const DiagramSSetMap& f);

// Constructions on groupoid diagrams ------------------------------------------

/// Diagonal of the simplicial replacement. n-simplices are keyed
/// [a0, m1, ..., mn, s] with s an n-simplex of A_{a0}; the structure map
/// forgets s.
OverNerve hocolim(const GroupoidDiagram& a, std::size_t d);
/// The simplicial replacement itself, cells keyed [a0, m1, ..., mm, s] with s in (A_{a0})_n.
BisimplicialSet simplicial_replacement(const GroupoidDiagram& a, std::size_t d);
/// (σ, s) ↦ (σ, f_{a0}(s)).
SimplicialMap hocolim_map(const DiagramSSetMap& f, const OverNerve& from, const OverNerve& to);

/// pb(X)_y has n-simplices (x, γ) with γ: a0 -> y from the first vertex of
/// the string under x, keyed [x, γ]; g: y -> z acts by γ ↦ gγ. Throws
/// InputError when the base is not a groupoid.
GroupoidDiagram pb(const OverNerve& x);
/// Triples in the form (x, α: an -> y), rewritten to (x, γ = α∘mn∘…∘m1).
Index pb_simplex_from_last_vertex(const OverNerve& x, const GroupoidDiagram& pbx, Index y, std::size_t n, Index simplex,
                                  Index alpha);
/// (x, γ) ↦ (h(x), γ) for a map h: X -> Y over the nerve.
DiagramSSetMap pb_map(const SimplicialMap& h, const GroupoidDiagram& from, const GroupoidDiagram& to);

/// η(x) = (σ, (x, 1_{a0})), into the total of `hpbx` = hocolim(pb x).
SimplicialMap unit_eta(const OverNerve& x, const GroupoidDiagram& pbx, const OverNerve& hpbx);
SimplicialMap unit_eta(const OverNerve& x);
/// ε_y((σ, s), γ) = γ_*(s) from `pbh` = pb(hocolim a) to a.
DiagramSSetMap counit_epsilon(const GroupoidDiagram& a, const OverNerve& h, const GroupoidDiagram& pbh);
DiagramSSetMap counit_epsilon(const GroupoidDiagram& a);
/// Projection hocolim pb(X) -> X, (σ', (x, γ)) ↦ x; a retraction of η.
SimplicialMap comparison_c(const OverNerve& x, const GroupoidDiagram& pbx, const OverNerve& hpbx);

/// Both triangle identities, simplex by simplex up to degree d:
/// `left` is ε_{pb X} ∘ pb(η_X) = 1, `right` is hocolim(ε) ∘ η_{hocolim A} = 1.
TriangleCheck check_triangles(const GroupoidDiagram& a, const OverNerve& x, std::size_t d);

// Sectionwise versions -----------------------------------------------------------

/// Per section U a diagram on G(U)^op (a contravariant diagram on G(U)) and
/// site actions value(U, x) -> value(V, α*x) for α: V -> U.
struct EnrichedGroupoidDiagram {
    PresheafOfGroupoids base;
    std::vector<GroupoidDiagram> sections;                 // per U, over opposite(G(U))
    std::vector<std::vector<SimplicialMap>> site_action;  // [α][x]
};

ValidationReport validate_enriched_groupoid_diagram(const EnrichedGroupoidDiagram& x);

/// Per section U an object over the nerve of G(U)^op and maps X(U) -> X(V)
/// covering the nerve of α*.
struct PresheafOverNerve {
    PresheafOfGroupoids base;
    std::vector<OverNerve> sections;
    std::vector<SimplicialMap> site_action;  // per α
};

ValidationReport validate_presheaf_over_nerve(const PresheafOverNerve& x);

/// An enriched set diagram as a diagram of constant simplicial sets; the
/// fibres must be groupoids.
EnrichedGroupoidDiagram discrete_enriched(const EnrichedSetDiagram& x, std::size_t dim);
/// Each nerve of G(U)^op over itself, with the nerves of the restrictions.
PresheafOverNerve nerve_over_itself(const PresheafOfGroupoids& g, std::size_t dim);

struct SectionwiseAdjunction {
    PresheafOverNerve hocolim;                // of the enriched diagram
    EnrichedGroupoidDiagram pb;               // of the presheaf over the nerve
    std::vector<SimplicialMap> eta;           // per U: X(U) -> hocolim(pb X)(U)
    std::vector<DiagramSSetMap> epsilon;      // per U: pb(hocolim A)(U) -> A(U)
    bool natural = false;                     // site actions commute with everything above
    TriangleCheck triangles;                  // all sections
};

PresheafOverNerve presheaf_hocolim(const EnrichedGroupoidDiagram& a, std::size_t d);
EnrichedGroupoidDiagram presheaf_pb(const PresheafOverNerve& x);
/// hocolim, pb, η and ε in every section with the site actions carried along.
SectionwiseAdjunction presheaf_hocolim_pb(const EnrichedGroupoidDiagram& a, const PresheafOverNerve& x, std::size_t d);

// Samples ---------------------------------------------------------------------

/// Every object sent to k, every morphism to the identity.
GroupoidDiagram constant_diagram(const Groupoid& g, const SSetRef& k);
/// The one-point diagram.
GroupoidDiagram point_diagram(const Groupoid& g, std::size_t dim);
/// Each object sent to the discrete set hom(y0, y), acted on by postcomposition.
GroupoidDiagram free_orbit_diagram(const Groupoid& g, Index y0, std::size_t dim);
/// A_y × k with the action on the first factor.
GroupoidDiagram product(const GroupoidDiagram& a, const SSetRef& k);

}  // namespace fibsite
