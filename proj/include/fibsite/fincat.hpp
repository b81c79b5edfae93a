#pragma once

// Finite categories with explicit composition tables, functors, groupoids,
// comma categories, connected components and set-valued colimits.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fibsite/errors.hpp"

namespace fibsite {

using Index = std::size_t;
inline constexpr Index npos = static_cast<Index>(-1);

struct Morphism {
    std::string name;
    Index source = npos;
    Index target = npos;

    bool operator==(const Morphism&) const = default;
};

/// A finite category stored extensionally. Composition is a dense table over
/// all ordered pairs of morphisms; non-composable pairs hold `npos`.
class FiniteCategory {
public:
    FiniteCategory() = default;
    FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                   std::vector<Index> identity, std::vector<Index> compose_table);

    std::size_t object_count() const noexcept { return objects_.size(); }
    std::size_t morphism_count() const noexcept { return morphisms_.size(); }

    const std::string& object_name(Index o) const { return objects_.at(o); }
    const std::vector<std::string>& object_names() const noexcept { return objects_; }
    const Morphism& morphism(Index m) const { return morphisms_.at(m); }
    const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }
    const std::string& morphism_name(Index m) const { return morphisms_.at(m).name; }
    Index source(Index m) const { return morphisms_[m].source; }
    Index target(Index m) const { return morphisms_[m].target; }

    Index identity(Index o) const { return identity_.at(o); }
    bool is_identity(Index m) const { return identity_[morphisms_[m].source] == m; }

    /// g∘f, or npos when target(f) != source(g) or the table has no entry.
    Index compose(Index g, Index f) const {
        return compose_[g * morphisms_.size() + f];
    }
    /// g∘f; throws InputError on a non-composable pair.
    Index compose_checked(Index g, Index f) const;
    const std::vector<Index>& compose_table() const noexcept { return compose_; }

    std::optional<Index> find_object(std::string_view name) const;
    std::optional<Index> find_morphism(std::string_view name) const;
    Index object_index(std::string_view name) const;
    Index morphism_index(std::string_view name) const;

    std::vector<Index> hom(Index a, Index b) const;
    std::vector<Index> morphisms_into(Index b) const;

    bool operator==(const FiniteCategory& other) const {
        return objects_ == other.objects_ && morphisms_ == other.morphisms_ &&
               identity_ == other.identity_ && compose_ == other.compose_;
    }

private:
    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<Index> identity_;
    std::vector<Index> compose_;
    std::unordered_map<std::string, Index> object_lookup_;
    std::unordered_map<std::string, Index> morphism_lookup_;
};

using CategoryRef = std::shared_ptr<const FiniteCategory>;

inline CategoryRef share(FiniteCategory c) {
    return std::make_shared<const FiniteCategory>(std::move(c));
}

/// Incremental construction. Identities `id_<object>` and composites with
/// identities are filled in automatically; every other composite must be set.
class CategoryBuilder {
public:
    Index add_object(std::string name);
    Index add_morphism(std::string name, Index source, Index target);
    Index add_morphism(std::string name, std::string_view source, std::string_view target);
    void set_compose(Index g, Index f, Index h);
    void set_compose(std::string_view g, std::string_view f, std::string_view h);

    Index object(std::string_view name) const;
    Index morphism(std::string_view name) const;
    Index identity(Index o) const { return identity_.at(o); }
    std::size_t morphism_count() const noexcept { return morphisms_.size(); }
    std::size_t object_count() const noexcept { return objects_.size(); }

    FiniteCategory build() const;

private:
    std::vector<std::string> objects_;
    std::vector<Morphism> morphisms_;
    std::vector<Index> identity_;
    std::vector<std::tuple<Index, Index, Index>> composites_;
    std::unordered_map<std::string, Index> object_lookup_;
    std::unordered_map<std::string, Index> morphism_lookup_;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
    void merge(const ValidationReport& other, std::string_view prefix = {});
};

ValidationReport validate_category(const FiniteCategory& c);

/// Same identifiers, sources and targets swapped, composition reversed.
FiniteCategory opposite(const FiniteCategory& c);

// Small standard categories used throughout the tests and generators.
FiniteCategory terminal_category(std::string object = "*");
FiniteCategory discrete_category(const std::vector<std::string>& objects);
/// Chain o0 -> o1 -> ... with all composites named "<i><j>" style.
FiniteCategory chain_category(std::size_t length);
/// Codiscrete groupoid: exactly one arrow between any two objects.
FiniteCategory codiscrete_category(const std::vector<std::string>& objects);
/// One-object category of the cyclic group of order n (generator "t").
FiniteCategory cyclic_group_category(std::size_t order, std::string object = "*");
/// Disjoint union of codiscrete groupoid on `objects` with automorphism group ℤ/order.
FiniteCategory codiscrete_group_category(const std::vector<std::string>& objects, std::size_t order);
FiniteCategory product_category(const FiniteCategory& a, const FiniteCategory& b);
FiniteCategory disjoint_union(const FiniteCategory& a, const FiniteCategory& b);
/// Same category with `prefix` prepended to object and non-identity morphism names.
FiniteCategory prefixed(const FiniteCategory& c, const std::string& prefix);

// ---------------------------------------------------------------------------

struct Functor {
    CategoryRef domain;
    CategoryRef codomain;
    std::vector<Index> object_map;
    std::vector<Index> morphism_map;

    Index on_object(Index o) const { return object_map.at(o); }
    Index on_morphism(Index m) const { return morphism_map.at(m); }
};

ValidationReport validate_functor(const Functor& f);
Functor identity_functor(const CategoryRef& c);
/// g∘f; requires f.codomain and g.domain to be the same category by value.
Functor compose(const Functor& g, const Functor& f);
bool same_maps(const Functor& a, const Functor& b);
/// The unique functor to the terminal category.
Functor to_terminal(const CategoryRef& c, const CategoryRef& terminal);
/// The same functor viewed between opposite categories.
Functor opposite(const Functor& f, const CategoryRef& domain_op, const CategoryRef& codomain_op);

/// Fully faithful and essentially surjective, by exhaustive search.
bool is_equivalence(const Functor& f);

// ---------------------------------------------------------------------------

struct Groupoid {
    CategoryRef category;
    std::vector<Index> inverse;

    const FiniteCategory& cat() const { return *category; }
};

/// Finds inverses for every morphism; nullopt when some morphism has none.
std::optional<Groupoid> as_groupoid(const CategoryRef& c);
ValidationReport validate_groupoid(const Groupoid& g);
Groupoid opposite(const Groupoid& g);

// ---------------------------------------------------------------------------

enum class Variance { covariant, contravariant };

/// Set-valued functor with values {0, ..., size-1}. For a covariant functor
/// action[m] maps value(source m) -> value(target m); for a contravariant one
/// action[m] maps value(target m) -> value(source m).
struct SetValuedFunctor {
    CategoryRef base;
    Variance variance = Variance::covariant;
    std::vector<std::size_t> sizes;
    std::vector<std::vector<Index>> action;
    std::vector<std::vector<std::string>> labels;  // optional, per object

    std::size_t size(Index o) const { return sizes.at(o); }
    std::string label(Index o, Index e) const;
};

ValidationReport validate_set_functor(const SetValuedFunctor& f);
SetValuedFunctor constant_point(const CategoryRef& base, Variance variance);
/// Contravariant functor reread as covariant on the opposite category (and back).
SetValuedFunctor flip_variance(const SetValuedFunctor& f, const CategoryRef& opposite_base);
/// F∘g for a functor g into f.base, with the variance of f.
SetValuedFunctor precompose(const SetValuedFunctor& f, const Functor& g);

/// Element-wise bijections commuting with actions (value maps given explicitly).
bool is_natural_iso(const SetValuedFunctor& a, const SetValuedFunctor& b,
                    const std::vector<std::vector<Index>>& components);

// ---------------------------------------------------------------------------

struct CommaCategory {
    FiniteCategory category;
    std::vector<Index> object_source;     // x of each object (x, h)
    std::vector<Index> object_arrow;      // h of each object (x, h)
    std::vector<Index> morphism_source;   // m of each morphism
};

/// The comma category f/y: objects (x, h: f(x) -> y).
CommaCategory comma_category(const Functor& f, Index y);
CommaCategory comma_category(const Functor& f, std::string_view y);

struct Partition {
    std::vector<Index> class_of;                 // per object
    std::vector<std::vector<Index>> classes;     // each sorted by identifier
    std::vector<Index> representative;           // least identifier of each class

    std::size_t count() const noexcept { return classes.size(); }
};

/// Zig-zag components; classes ordered by their least identifier.
Partition pi0(const FiniteCategory& c);

struct SetColimit {
    std::size_t size = 0;
    std::vector<std::vector<Index>> cocone;  // per object: element -> class
};

SetColimit colim_set(const SetValuedFunctor& f);

/// Pointwise left Kan extension of a covariant functor on A along A -> B.
SetValuedFunctor left_kan_set(const Functor& along, const SetValuedFunctor& f);

/// Left Kan extension together with the colimit data at each object of B.
struct KanExtension {
    SetValuedFunctor functor;
    std::vector<CommaCategory> commas;     // along/b
    std::vector<SetColimit> colimits;
    std::vector<std::unordered_map<Index, std::unordered_map<Index, Index>>> comma_object;  // b -> x -> h -> object

    /// Class in functor(b) of the element e of f(x) placed over h: along(x) -> b.
    Index element(Index b, Index x, Index h, Index e) const;
};

KanExtension left_kan_extension(const Functor& along, const SetValuedFunctor& f);

}  // namespace fibsite
