#pragma once

// Presheaves of categories on a finite site, the Grothendieck construction
// C/A with its induced topology, enriched set-valued diagrams on A^op and
// the functors relating them.

#include <optional>
#include <string>
#include <vector>

#include "fibsite/fincat.hpp"
#include "fibsite/site.hpp"

namespace fibsite {

/// A strict presheaf of categories: a category A(U) per object of the site
/// and a functor α*: A(U) -> A(V) per morphism α: V -> U.
///
/// Sections (U, x) with x ∈ Ob A(U) are numbered consecutively, grouped by U.
class PresheafOfCategories {
public:
    PresheafOfCategories() = default;
    PresheafOfCategories(CategoryRef site, std::vector<CategoryRef> values, std::vector<Functor> restriction);

    const CategoryRef& site() const noexcept { return site_; }
    const FiniteCategory& value(Index u) const { return *values_.at(u); }
    const CategoryRef& value_ref(Index u) const { return values_.at(u); }
    /// α*: A(target α) -> A(source α).
    const Functor& along(Index alpha) const { return restriction_.at(alpha); }
    const std::vector<CategoryRef>& values() const noexcept { return values_; }
    const std::vector<Functor>& restrictions() const noexcept { return restriction_; }

    std::size_t section_count() const noexcept { return base_of_.size(); }
    Index section(Index u, Index x) const { return offset_.at(u) + x; }
    Index section_base(Index s) const { return base_of_.at(s); }
    Index section_object(Index s) const { return s - offset_[base_of_.at(s)]; }

private:
    CategoryRef site_;
    std::vector<CategoryRef> values_;
    std::vector<Functor> restriction_;
    std::vector<Index> offset_;
    std::vector<Index> base_of_;
};

using PresheafOfCategoriesRef = std::shared_ptr<const PresheafOfCategories>;

inline PresheafOfCategoriesRef share(PresheafOfCategories a) {
    return std::make_shared<const PresheafOfCategories>(std::move(a));
}

/// Categories valid, restrictions valid functors, identities and composites strict.
ValidationReport validate_presheaf_of_categories(const PresheafOfCategories& a);

struct PresheafOfGroupoids {
    PresheafOfCategoriesRef categories;
    std::vector<Groupoid> groupoids;  // per object of the site
};

std::optional<PresheafOfGroupoids> as_presheaf_of_groupoids(const PresheafOfCategoriesRef& a);
ValidationReport validate_presheaf_of_groupoids(const PresheafOfGroupoids& g);

/// Ob(A) and Mor(A) as presheaves of sets on the site.
Presheaf object_presheaf(const PresheafOfCategories& a);
Presheaf morphism_presheaf(const PresheafOfCategories& a);

// Constructions -------------------------------------------------------------

PresheafOfCategories constant_presheaf(const CategoryRef& site, const CategoryRef& k);
/// Discrete categories on the sets X(U); objects are named by label or index.
PresheafOfCategories discrete_presheaf(const Presheaf& x);
/// Codiscrete groupoids on the sets X(U).
PresheafOfCategories codiscrete_presheaf(const Presheaf& x);
/// A(U) = ℤ/order[U]; restrictions reduce modulo the smaller order, which must divide the larger.
PresheafOfCategories cyclic_reduction_presheaf(const CategoryRef& site, const std::vector<std::size_t>& order);
PresheafOfCategories product(const PresheafOfCategories& a, const PresheafOfCategories& b);
PresheafOfCategories coproduct(const PresheafOfCategories& a, const PresheafOfCategories& b);

/// An I-indexed family of presheaves Y_i with natural maps θ*: Y_i -> Y_j.
struct IndexedPresheaves {
    CategoryRef index;
    std::vector<Presheaf> family;                          // per object i
    std::vector<std::vector<std::vector<Index>>> transition;  // per θ, per U: Y_i(U) -> Y_j(U)
};

ValidationReport validate_indexed_presheaves(const IndexedPresheaves& y);
/// EY(U) is the translation category of U ↦ Y_i(U); throws ValidationError on non-natural input.
PresheafOfCategories make_translation_presheaf(const IndexedPresheaves& y);

// Morphisms -----------------------------------------------------------------

struct MorphismOfPresheavesOfCategories {
    PresheafOfCategoriesRef domain;
    PresheafOfCategoriesRef codomain;
    std::vector<Functor> components;  // per object U: A(U) -> B(U)

    Index on_section(Index s) const;
};

ValidationReport validate_morphism(const MorphismOfPresheavesOfCategories& m);
MorphismOfPresheavesOfCategories identity_morphism(const PresheafOfCategoriesRef& a);
MorphismOfPresheavesOfCategories compose(const MorphismOfPresheavesOfCategories& g,
                                         const MorphismOfPresheavesOfCategories& f);
/// First projection A × B -> A; `product` must be product(*a, *b).
MorphismOfPresheavesOfCategories first_projection(const PresheafOfCategoriesRef& product,
                                                  const PresheafOfCategoriesRef& a);
/// Every section's component is an equivalence of categories.
bool is_sectionwise_equivalence(const MorphismOfPresheavesOfCategories& m);

// Grothendieck construction -------------------------------------------------

/// The category C/A: objects (U, x), morphisms (α, f): (V, y) -> (U, x) with
/// f: y -> α*x in A(V), and (α, f)(γ, g) = (αγ, γ*(f)∘g).
struct FibredSite {
    PresheafOfCategoriesRef fibres;
    CategoryRef total;   // object index = section index of `fibres`
    Functor projection;  // total -> site
    std::vector<Index> morphism_base;    // α
    std::vector<Index> morphism_fibre;   // f, a morphism of A(source α)
    std::vector<Index> morphism_target;  // x, an object of A(target α)
    std::optional<GrothendieckTopology> topology;

    /// Index of (α, f) with target (target α, x).
    Index morphism(Index alpha, Index x, Index f) const;

    std::vector<std::vector<std::vector<Index>>> lookup;  // [α][x][f]
};

FibredSite grothendieck_construct(const PresheafOfCategoriesRef& a);
/// The functor C/A -> C/B induced by m; fibred sites must be built from m's ends.
Functor total_functor(const MorphismOfPresheavesOfCategories& m, const FibredSite& from, const FibredSite& to);

/// π⁻¹S on (U, x): every (α, f) into (U, x) with α ∈ S.
Sieve inverse_image(const FibredSite& fs, const Sieve& s, Index x);
/// Topology generated by the sieves π⁻¹S: every sieve containing one of them.
/// For presheaves of groupoids these are exactly the π⁻¹S.
GrothendieckTopology induced_topology(const FibredSite& fs, const GrothendieckTopology& base);

// Enriched diagrams ---------------------------------------------------------

/// A family of maps indexed by sections: entry s sends element e to map[s][e].
using DiagramMap = std::vector<std::vector<Index>>;

/// Set-valued presheaf on C/Ob(A): a set per section and the site action
/// value(U, x) -> value(V, α*x) for α: V -> U.
struct ObjectDiagram {
    PresheafOfCategoriesRef base;
    std::vector<std::size_t> sizes;                        // per section
    std::vector<std::vector<std::vector<Index>>> site_action;  // [α][x]

    bool operator==(const ObjectDiagram& o) const { return sizes == o.sizes && site_action == o.site_action; }
};

/// Enriched diagram on A^op: sets per section, a contravariant action of
/// each A(U) and the site action, commuting with each other.
struct EnrichedSetDiagram {
    PresheafOfCategoriesRef base;
    std::vector<std::size_t> sizes;                               // per section
    std::vector<std::vector<std::vector<Index>>> category_action;  // [U][γ]: value(U, target γ) -> value(U, source γ)
    std::vector<std::vector<std::vector<Index>>> site_action;      // [α][x]

    bool operator==(const EnrichedSetDiagram& o) const {
        return sizes == o.sizes && category_action == o.category_action && site_action == o.site_action;
    }
};

ValidationReport validate_object_diagram(const ObjectDiagram& x);
ValidationReport validate_enriched_diagram(const EnrichedSetDiagram& x);
/// Maps commute with all actions.
bool is_diagram_map(const EnrichedSetDiagram& from, const EnrichedSetDiagram& to, const DiagramMap& f);
bool is_diagram_map(const ObjectDiagram& from, const ObjectDiagram& to, const DiagramMap& f);
DiagramMap compose(const DiagramMap& g, const DiagramMap& f);
bool is_identity(const DiagramMap& f);

EnrichedSetDiagram constant_point(const PresheafOfCategoriesRef& a);
/// Enriched diagram of a presheaf on the total category, via (1, γ) and (α, 1).
EnrichedSetDiagram to_enriched(const FibredSite& fs, const Presheaf& f);
/// Presheaf with (α, γ) acting by γ*∘α*; throws ValidationError on an invalid diagram.
Presheaf to_presheaf(const FibredSite& fs, const EnrichedSetDiagram& x);

/// ψ⁎: forget the category actions.
ObjectDiagram object_restriction(const EnrichedSetDiagram& x);
/// ψ*: value(U, b) = {(γ: b -> a, s) | s ∈ x0(U, a)}, acted on by precomposition.
EnrichedSetDiagram psi_left_adjoint(const ObjectDiagram& x0);
/// ψ* on a map x0 -> y0.
DiagramMap psi_left_adjoint(const ObjectDiagram& x0, const ObjectDiagram& y0, const DiagramMap& f);
/// s ↦ (1, s), into ψ⁎ψ* x0.
DiagramMap psi_unit(const ObjectDiagram& x0);
/// (γ, s) ↦ γ*(s), from ψ*ψ⁎ x.
DiagramMap psi_counit(const EnrichedSetDiagram& x);

struct TriangleCheck {
    bool left = false;   // ε_F ∘ F(η) = 1
    bool right = false;  // G(ε) ∘ η_G = 1
    bool ok() const { return left && right; }
};

TriangleCheck psi_triangles(const ObjectDiagram& x0, const EnrichedSetDiagram& x);

/// X₀ -> Ob(A) as a map of presheaves on the site.
struct PresheafOver {
    Presheaf total;
    Presheaf base;
    std::vector<std::vector<Index>> structure;  // per U: total(U) -> base(U)
};

ValidationReport validate_presheaf_over(const PresheafOver& y);
/// Disjoint union of the values over each U, mapped to Ob(A).
PresheafOver over_form(const ObjectDiagram& x);
ObjectDiagram from_over_form(const PresheafOfCategoriesRef& a, const PresheafOver& y);

/// m₀⁎ along the object part of m.
ObjectDiagram restrict_objects(const MorphismOfPresheavesOfCategories& m, const ObjectDiagram& x);
/// m⁎: precompose with m.
EnrichedSetDiagram restrict_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& x);
/// m*: sectionwise left Kan extension along m(U)^op.
EnrichedSetDiagram left_kan_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y);
/// Unit y -> m⁎m*y.
DiagramMap kan_unit(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y);
/// Counit m*m⁎x -> x.
DiagramMap kan_counit(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& x);
/// m* on a map y -> y2.
DiagramMap left_kan_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y,
                          const EnrichedSetDiagram& y2, const DiagramMap& f);
TriangleCheck kan_triangles(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y,
                            const EnrichedSetDiagram& x);

// Sites C/X -------------------------------------------------------------------

/// A presheaf map Y -> X as a presheaf on C/X; `cx` is built from discrete_presheaf(X).
Presheaf over_to_fibred(const FibredSite& cx, const PresheafOver& y);
PresheafOver fibred_to_over(const FibredSite& cx, const Presheaf& f);
/// Pullback of Y -> X along the section x: hom(-, U) -> X.
PresheafOver pullback_along_section(const PresheafOver& y, Index u, Index x);

}  // namespace fibsite
