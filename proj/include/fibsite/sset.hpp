#pragma once

// Truncated simplicial sets, nerves, bisimplicial sets and diagonals,
// normalized integral homology and weak-equivalence evidence.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fibsite/fincat.hpp"
#include "fibsite/linalg.hpp"

namespace fibsite {

/// Simplices are identified by structured keys; the key encoding is chosen by
/// the construction (e.g. a nerve uses [a0, m1, ..., mn]).
using Key = std::vector<Index>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
};

class KeyTable {
public:
    /// Index of `key`, inserting it when new.
    Index insert(const Key& key);
    std::optional<Index> find(const Key& key) const;
    Index at(const Key& key) const;
    const Key& key(Index i) const { return keys_[i]; }
    std::size_t size() const noexcept { return keys_.size(); }
    const std::vector<Key>& keys() const noexcept { return keys_; }

private:
    std::vector<Key> keys_;
    std::unordered_map<Key, Index, KeyHash> index_;
};

/// Simplicial set truncated at degree `dim`: simplices of degrees 0..dim,
/// faces d_i: X_n -> X_{n-1} for n >= 1, degeneracies s_i: X_n -> X_{n+1} for n < dim.
class TruncatedSimplicialSet {
public:
    using FaceFn = std::function<Key(std::size_t n, std::size_t i, const Key&)>;

    TruncatedSimplicialSet() = default;
    /// Assembles the tables from the simplex keys; face and degeneracy keys
    /// must name listed simplices.
    TruncatedSimplicialSet(std::size_t dim, std::vector<std::vector<Key>> simplices, const FaceFn& face,
                           const FaceFn& degeneracy);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t count(std::size_t n) const { return tables_.at(n).size(); }
    Index d(std::size_t n, std::size_t i, Index x) const { return faces_[n][x * (n + 1) + i]; }
    Index s(std::size_t n, std::size_t i, Index x) const { return degens_[n][x * (n + 1) + i]; }
    const Key& key(std::size_t n, Index x) const { return tables_[n].key(x); }
    std::optional<Index> find(std::size_t n, const Key& k) const { return tables_.at(n).find(k); }
    Index at(std::size_t n, const Key& k) const { return tables_.at(n).at(k); }

    bool degenerate(std::size_t n, Index x) const { return degenerate_[n][x] != 0; }
    std::size_t nondegenerate_count(std::size_t n) const;
    std::size_t total_nondegenerate() const;

private:
    std::size_t dim_ = 0;
    std::vector<KeyTable> tables_;
    std::vector<std::vector<Index>> faces_;
    std::vector<std::vector<Index>> degens_;
    std::vector<std::vector<char>> degenerate_;
};

using SSetRef = std::shared_ptr<const TruncatedSimplicialSet>;

inline SSetRef share(TruncatedSimplicialSet s) {
    return std::make_shared<const TruncatedSimplicialSet>(std::move(s));
}

ValidationReport validate_simplicial_set(const TruncatedSimplicialSet& s);

struct SimplicialMap {
    SSetRef domain;
    SSetRef codomain;
    std::vector<std::vector<Index>> map;  // per degree

    Index operator()(std::size_t n, Index x) const { return map[n][x]; }
};

ValidationReport validate_simplicial_map(const SimplicialMap& f);
SimplicialMap identity_map(const SSetRef& s);
SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);
/// Maps agree on every simplex, with domains and codomains identified by index.
bool same_maps(const SimplicialMap& a, const SimplicialMap& b);
bool is_identity(const SimplicialMap& f);
/// Bijective in every degree.
bool is_isomorphism(const SimplicialMap& f);

/// Builds a map from a key-level formula.
SimplicialMap map_from_keys(const SSetRef& domain, const SSetRef& codomain,
                            const std::function<Key(std::size_t n, const Key&)>& f);

// ---------------------------------------------------------------------------
// Constructions

/// n-simplices are strings a0 -> ... -> an, keyed [a0, m1, ..., mn].
TruncatedSimplicialSet nerve(const FiniteCategory& c, std::size_t dim);
SSetRef nerve_ref(const FiniteCategory& c, std::size_t dim);
/// The induced map of nerves.
SimplicialMap nerve_map(const Functor& f, const SSetRef& domain_nerve, const SSetRef& codomain_nerve);

/// Standard simplex Δ^k truncated at `dim`; simplices keyed by vertex sequences.
TruncatedSimplicialSet standard_simplex(std::size_t k, std::size_t dim);
/// Degreewise product, keyed [x, y] by indices.
TruncatedSimplicialSet product(const TruncatedSimplicialSet& a, const TruncatedSimplicialSet& b);
/// Disjoint union, keyed [tag, x].
TruncatedSimplicialSet disjoint_union(const TruncatedSimplicialSet& a, const TruncatedSimplicialSet& b);
/// Smallest sub-simplicial set containing the (degree, index) generators; keys kept.
TruncatedSimplicialSet generated_subset(const TruncatedSimplicialSet& s,
                                        const std::vector<std::pair<std::size_t, Index>>& generators);
/// Inclusion of a subset produced by `generated_subset` (keys are shared).
SimplicialMap key_inclusion(const SSetRef& sub, const SSetRef& ambient);
/// Constant simplicial set on a finite set of points, keyed [p].
TruncatedSimplicialSet discrete_simplicial_set(std::size_t points, std::size_t dim);

// ---------------------------------------------------------------------------

/// Bisimplicial set truncated at (dim, dim); horizontal degree m, vertical n.
class BisimplicialSet {
public:
    using FaceFn = std::function<Key(std::size_t m, std::size_t n, std::size_t i, const Key&)>;

    BisimplicialSet() = default;
    BisimplicialSet(std::size_t dim, std::vector<std::vector<std::vector<Key>>> cells, const FaceFn& hface,
                    const FaceFn& vface, const FaceFn& hdegen, const FaceFn& vdegen);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t count(std::size_t m, std::size_t n) const { return cell(m, n).size(); }
    const Key& key(std::size_t m, std::size_t n, Index x) const { return cell(m, n).key(x); }
    Index dh(std::size_t m, std::size_t n, std::size_t i, Index x) const { return hface_[slot(m, n)][x * (m + 1) + i]; }
    Index dv(std::size_t m, std::size_t n, std::size_t i, Index x) const { return vface_[slot(m, n)][x * (n + 1) + i]; }
    Index sh(std::size_t m, std::size_t n, std::size_t i, Index x) const { return hdeg_[slot(m, n)][x * (m + 1) + i]; }
    Index sv(std::size_t m, std::size_t n, std::size_t i, Index x) const { return vdeg_[slot(m, n)][x * (n + 1) + i]; }

private:
    std::size_t slot(std::size_t m, std::size_t n) const { return m * (dim_ + 1) + n; }
    const KeyTable& cell(std::size_t m, std::size_t n) const { return cells_.at(slot(m, n)); }

    std::size_t dim_ = 0;
    std::vector<KeyTable> cells_;
    std::vector<std::vector<Index>> hface_, vface_, hdeg_, vdeg_;
};

ValidationReport validate_bisimplicial_set(const BisimplicialSet& b);
/// n-simplices are the (n, n)-bisimplices, d_i = dh_i dv_i, s_i = sh_i sv_i.
TruncatedSimplicialSet diagonal(const BisimplicialSet& b);

struct InterchangeComparison {
    BisimplicialSet x;
    SSetRef diagonal;
    SSetRef nerve_op;   // nerve of the opposite category
    SSetRef nerve;
    SimplicialMap phi;  // diagonal -> nerve_op
    SimplicialMap psi;  // diagonal -> nerve
};

/// X(C)_{m,n} = strings b_m -> ... -> b_0 -> a_0 -> ... -> a_n.
InterchangeComparison interchange_comparison(const FiniteCategory& c, std::size_t dim);

// ---------------------------------------------------------------------------
// Homology

struct HomologyResult {
    std::vector<FgAbelianGroup> groups;  // degrees 0..top
    std::size_t components = 0;
};

/// Normalized chain complex; degrees 0..top, requires top + 1 <= dim.
HomologyResult homology(const TruncatedSimplicialSet& s, std::size_t top);
/// Unnormalized chains (all simplices), for cross-checks.
HomologyResult homology_unnormalized(const TruncatedSimplicialSet& s, std::size_t top);

/// Path components of the 1-skeleton: class per vertex.
Partition components(const TruncatedSimplicialSet& s);

struct Evidence {
    bool pi0_bijective = false;
    std::vector<bool> homology_match;  // per degree
    std::vector<FgAbelianGroup> domain_homology;
    std::vector<FgAbelianGroup> codomain_homology;
    std::optional<bool> groupoid_check;  // automorphism groups, when applicable
    std::vector<std::string> notes;

    bool pass() const;
};

/// π0 bijection plus degreewise homology isomorphism type up to `top`.
Evidence we_evidence(const SimplicialMap& f, std::size_t top);
/// As above for the nerve of a functor between groupoids, plus an isomorphism
/// check of automorphism groups on matched components.
Evidence we_evidence(const Functor& f, std::size_t top, std::size_t dim);

/// Isomorphism of the finite groups Aut(a) in g and Aut(b) in h, by brute force.
bool automorphism_groups_isomorphic(const FiniteCategory& g, Index a, const FiniteCategory& h, Index b);

}  // namespace fibsite
