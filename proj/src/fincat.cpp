#include "fibsite/fincat.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace fibsite {

namespace {

constexpr std::size_t kMaxReportedViolations = 200;

void add_capped(ValidationReport& r, std::string v) {
    if (r.violations.size() < kMaxReportedViolations) {
        r.add(std::move(v));
    } else if (r.violations.size() == kMaxReportedViolations) {
        r.add("... further violations omitted");
    }
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    Index find(Index x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<Index> parent_;
};

}  // namespace

// ---------------------------------------------------------------------------
// FiniteCategory

FiniteCategory::FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                               std::vector<Index> identity, std::vector<Index> compose_table)
    : objects_(std::move(objects)),
      morphisms_(std::move(morphisms)),
      identity_(std::move(identity)),
      compose_(std::move(compose_table)) {
    if (identity_.size() != objects_.size()) {
        throw InputError("identity list must have one entry per object");
    }
    if (compose_.size() != morphisms_.size() * morphisms_.size()) {
        throw InputError("composition table must have |Mor|^2 entries");
    }
    for (Index o = 0; o < objects_.size(); ++o) {
        if (!object_lookup_.emplace(objects_[o], o).second) {
            throw InputError("duplicate object identifier '" + objects_[o] + "'");
        }
        if (identity_[o] >= morphisms_.size()) {
            throw InputError("identity of '" + objects_[o] + "' out of range");
        }
    }
    for (Index m = 0; m < morphisms_.size(); ++m) {
        const auto& mor = morphisms_[m];
        if (mor.source >= objects_.size() || mor.target >= objects_.size()) {
            throw InputError("morphism '" + mor.name + "' has an unknown endpoint");
        }
        if (!morphism_lookup_.emplace(mor.name, m).second) {
            throw InputError("duplicate morphism identifier '" + mor.name + "'");
        }
    }
}

Index FiniteCategory::compose_checked(Index g, Index f) const {
    if (target(f) != source(g)) {
        throw InputError("cannot compose " + morphism_name(g) + "." + morphism_name(f) +
                         ": endpoints do not match");
    }
    const Index h = compose(g, f);
    if (h == npos) {
        throw InputError("composite " + morphism_name(g) + "." + morphism_name(f) + " is undefined");
    }
    return h;
}

std::optional<Index> FiniteCategory::find_object(std::string_view name) const {
    auto it = object_lookup_.find(std::string(name));
    if (it == object_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<Index> FiniteCategory::find_morphism(std::string_view name) const {
    auto it = morphism_lookup_.find(std::string(name));
    if (it == morphism_lookup_.end()) return std::nullopt;
    return it->second;
}

Index FiniteCategory::object_index(std::string_view name) const {
    if (auto o = find_object(name)) return *o;
    throw InputError("unknown object '" + std::string(name) + "'");
}

Index FiniteCategory::morphism_index(std::string_view name) const {
    if (auto m = find_morphism(name)) return *m;
    throw InputError("unknown morphism '" + std::string(name) + "'");
}

std::vector<Index> FiniteCategory::hom(Index a, Index b) const {
    std::vector<Index> out;
    for (Index m = 0; m < morphisms_.size(); ++m) {
        if (morphisms_[m].source == a && morphisms_[m].target == b) out.push_back(m);
    }
    return out;
}

std::vector<Index> FiniteCategory::morphisms_into(Index b) const {
    std::vector<Index> out;
    for (Index m = 0; m < morphisms_.size(); ++m) {
        if (morphisms_[m].target == b) out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CategoryBuilder

Index CategoryBuilder::add_object(std::string name) {
    const Index o = objects_.size();
    if (!object_lookup_.emplace(name, o).second) {
        throw InputError("duplicate object identifier '" + name + "'");
    }
    objects_.push_back(name);
    const Index id = morphisms_.size();
    std::string id_name = "id_" + name;
    if (!morphism_lookup_.emplace(id_name, id).second) {
        throw InputError("identity name '" + id_name + "' collides with a morphism");
    }
    morphisms_.push_back({std::move(id_name), o, o});
    identity_.push_back(id);
    return o;
}

Index CategoryBuilder::add_morphism(std::string name, Index source, Index target) {
    if (source >= objects_.size() || target >= objects_.size()) {
        throw InputError("morphism '" + name + "' has an unknown endpoint");
    }
    const Index m = morphisms_.size();
    if (!morphism_lookup_.emplace(name, m).second) {
        throw InputError("duplicate morphism identifier '" + name + "'");
    }
    morphisms_.push_back({std::move(name), source, target});
    return m;
}

Index CategoryBuilder::add_morphism(std::string name, std::string_view source, std::string_view target) {
    return add_morphism(std::move(name), object(source), object(target));
}

void CategoryBuilder::set_compose(Index g, Index f, Index h) {
    if (g >= morphisms_.size() || f >= morphisms_.size() || h >= morphisms_.size()) {
        throw InputError("composite refers to an unknown morphism");
    }
    if (morphisms_[f].target != morphisms_[g].source) {
        throw InputError("cannot compose " + morphisms_[g].name + "." + morphisms_[f].name +
                         ": endpoints do not match");
    }
    composites_.emplace_back(g, f, h);
}

void CategoryBuilder::set_compose(std::string_view g, std::string_view f, std::string_view h) {
    set_compose(morphism(g), morphism(f), morphism(h));
}

Index CategoryBuilder::object(std::string_view name) const {
    auto it = object_lookup_.find(std::string(name));
    if (it == object_lookup_.end()) throw InputError("unknown object '" + std::string(name) + "'");
    return it->second;
}

Index CategoryBuilder::morphism(std::string_view name) const {
    auto it = morphism_lookup_.find(std::string(name));
    if (it == morphism_lookup_.end()) throw InputError("unknown morphism '" + std::string(name) + "'");
    return it->second;
}

FiniteCategory CategoryBuilder::build() const {
    const std::size_t n = morphisms_.size();
    std::vector<Index> table(n * n, npos);
    for (Index m = 0; m < n; ++m) {
        table[m * n + identity_[morphisms_[m].source]] = m;
        table[identity_[morphisms_[m].target] * n + m] = m;
    }
    for (const auto& [g, f, h] : composites_) table[g * n + f] = h;
    return FiniteCategory(objects_, morphisms_, identity_, std::move(table));
}

// ---------------------------------------------------------------------------
// Validation

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
    for (const auto& v : other.violations) {
        violations.push_back(std::string(prefix) + v);
    }
}

ValidationReport validate_category(const FiniteCategory& c) {
    ValidationReport r;
    const std::size_t n = c.morphism_count();
    for (Index o = 0; o < c.object_count(); ++o) {
        const auto& id = c.morphism(c.identity(o));
        if (id.source != o || id.target != o) {
            add_capped(r, "identity law: identity of " + c.object_name(o) + " is not an endomorphism of it");
        }
    }
    for (Index g = 0; g < n; ++g) {
        for (Index f = 0; f < n; ++f) {
            const Index h = c.compose(g, f);
            const bool composable = c.target(f) == c.source(g);
            if (!composable) {
                if (h != npos) {
                    add_capped(r, "composition: " + c.morphism_name(g) + "." + c.morphism_name(f) +
                                      " defined for a non-composable pair");
                }
                continue;
            }
            if (h == npos) {
                add_capped(r, "composition: missing composite " + c.morphism_name(g) + "." +
                                  c.morphism_name(f));
                continue;
            }
            if (c.source(h) != c.source(f) || c.target(h) != c.target(g)) {
                add_capped(r, "composition: " + c.morphism_name(g) + "." + c.morphism_name(f) + " = " +
                                  c.morphism_name(h) + " has wrong source or target");
            }
        }
    }
    for (Index f = 0; f < n; ++f) {
        const Index left = c.compose(c.identity(c.target(f)), f);
        const Index right = c.compose(f, c.identity(c.source(f)));
        if (left != f) {
            add_capped(r, "unit law: id_" + c.object_name(c.target(f)) + "." + c.morphism_name(f) +
                              " != " + c.morphism_name(f));
        }
        if (right != f) {
            add_capped(r, "unit law: " + c.morphism_name(f) + ".id_" + c.object_name(c.source(f)) +
                              " != " + c.morphism_name(f));
        }
    }
    for (Index f = 0; f < n; ++f) {
        for (Index g = 0; g < n; ++g) {
            if (c.target(f) != c.source(g)) continue;
            const Index gf = c.compose(g, f);
            if (gf == npos) continue;
            for (Index h = 0; h < n; ++h) {
                if (c.target(g) != c.source(h)) continue;
                const Index hg = c.compose(h, g);
                if (hg == npos) continue;
                const Index lhs = c.compose(h, gf);
                const Index rhs = c.compose(hg, f);
                if (lhs != rhs) {
                    add_capped(r, "associativity: (" + c.morphism_name(h) + "." + c.morphism_name(g) + ")." +
                                      c.morphism_name(f) + " != " + c.morphism_name(h) + ".(" +
                                      c.morphism_name(g) + "." + c.morphism_name(f) + ")");
                }
            }
        }
    }
    return r;
}

FiniteCategory opposite(const FiniteCategory& c) {
    std::vector<Morphism> mors = c.morphisms();
    for (auto& m : mors) std::swap(m.source, m.target);
    const std::size_t n = c.morphism_count();
    std::vector<Index> table(n * n, npos);
    for (Index g = 0; g < n; ++g) {
        for (Index f = 0; f < n; ++f) table[g * n + f] = c.compose(f, g);
    }
    std::vector<Index> ids(c.object_count());
    for (Index o = 0; o < ids.size(); ++o) ids[o] = c.identity(o);
    return FiniteCategory(c.object_names(), std::move(mors), std::move(ids), std::move(table));
}

// ---------------------------------------------------------------------------
// Standard categories

FiniteCategory terminal_category(std::string object) {
    CategoryBuilder b;
    b.add_object(std::move(object));
    return b.build();
}

FiniteCategory discrete_category(const std::vector<std::string>& objects) {
    CategoryBuilder b;
    for (const auto& o : objects) b.add_object(o);
    return b.build();
}

FiniteCategory chain_category(std::size_t length) {
    CategoryBuilder b;
    for (std::size_t i = 0; i <= length; ++i) b.add_object("c" + std::to_string(i));
    auto name = [](std::size_t i, std::size_t j) {
        return "c" + std::to_string(i) + "c" + std::to_string(j);
    };
    for (std::size_t i = 0; i <= length; ++i) {
        for (std::size_t j = i + 1; j <= length; ++j) b.add_morphism(name(i, j), i, j);
    }
    for (std::size_t i = 0; i <= length; ++i) {
        for (std::size_t j = i + 1; j <= length; ++j) {
            for (std::size_t k = j + 1; k <= length; ++k) b.set_compose(name(j, k), name(i, j), name(i, k));
        }
    }
    return b.build();
}

FiniteCategory codiscrete_category(const std::vector<std::string>& objects) {
    return codiscrete_group_category(objects, 1);
}

FiniteCategory cyclic_group_category(std::size_t order, std::string object) {
    if (order == 0) throw InputError("group order must be positive");
    CategoryBuilder b;
    const Index o = b.add_object(std::move(object));
    std::vector<Index> elt(order);
    elt[0] = b.identity(o);
    for (std::size_t k = 1; k < order; ++k) {
        elt[k] = b.add_morphism(k == 1 ? "t" : "t" + std::to_string(k), o, o);
    }
    for (std::size_t i = 1; i < order; ++i) {
        for (std::size_t j = 1; j < order; ++j) b.set_compose(elt[i], elt[j], elt[(i + j) % order]);
    }
    return b.build();
}

FiniteCategory codiscrete_group_category(const std::vector<std::string>& objects, std::size_t order) {
    if (order == 0) throw InputError("group order must be positive");
    CategoryBuilder b;
    for (const auto& o : objects) b.add_object(o);
    const std::size_t k = objects.size();
    // arrow[a][b][g]
    std::vector<std::vector<std::vector<Index>>> arrow(k, std::vector<std::vector<Index>>(k));
    for (Index a = 0; a < k; ++a) {
        for (Index c = 0; c < k; ++c) {
            for (std::size_t g = 0; g < order; ++g) {
                if (a == c && g == 0) {
                    arrow[a][c].push_back(b.identity(a));
                    continue;
                }
                std::string name = objects[a] + ">" + objects[c];
                if (order > 1) name += ":" + std::to_string(g);
                arrow[a][c].push_back(b.add_morphism(std::move(name), a, c));
            }
        }
    }
    for (Index a = 0; a < k; ++a) {
        for (Index c = 0; c < k; ++c) {
            for (Index d = 0; d < k; ++d) {
                for (std::size_t g = 0; g < order; ++g) {
                    for (std::size_t h = 0; h < order; ++h) {
                        b.set_compose(arrow[c][d][h], arrow[a][c][g], arrow[a][d][(g + h) % order]);
                    }
                }
            }
        }
    }
    return b.build();
}

FiniteCategory product_category(const FiniteCategory& a, const FiniteCategory& b) {
    std::vector<std::string> objs;
    for (Index i = 0; i < a.object_count(); ++i) {
        for (Index j = 0; j < b.object_count(); ++j) {
            objs.push_back("(" + a.object_name(i) + "," + b.object_name(j) + ")");
        }
    }
    const std::size_t nb = b.morphism_count();
    std::vector<Morphism> mors;
    for (Index f = 0; f < a.morphism_count(); ++f) {
        for (Index g = 0; g < nb; ++g) {
            mors.push_back({"(" + a.morphism_name(f) + "," + b.morphism_name(g) + ")",
                            a.source(f) * b.object_count() + b.source(g),
                            a.target(f) * b.object_count() + b.target(g)});
        }
    }
    std::vector<Index> ids;
    for (Index i = 0; i < a.object_count(); ++i) {
        for (Index j = 0; j < b.object_count(); ++j) ids.push_back(a.identity(i) * nb + b.identity(j));
    }
    const std::size_t n = mors.size();
    std::vector<Index> table(n * n, npos);
    for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
            const Index ca = a.compose(x / nb, y / nb);
            const Index cb = b.compose(x % nb, y % nb);
            if (ca != npos && cb != npos) table[x * n + y] = ca * nb + cb;
        }
    }
    return FiniteCategory(std::move(objs), std::move(mors), std::move(ids), std::move(table));
}

FiniteCategory disjoint_union(const FiniteCategory& a, const FiniteCategory& b) {
    std::vector<std::string> objs = a.object_names();
    objs.insert(objs.end(), b.object_names().begin(), b.object_names().end());
    std::vector<Morphism> mors = a.morphisms();
    const std::size_t oa = a.object_count();
    const std::size_t ma = a.morphism_count();
    for (auto m : b.morphisms()) {
        m.source += oa;
        m.target += oa;
        mors.push_back(std::move(m));
    }
    std::vector<Index> ids;
    for (Index o = 0; o < oa; ++o) ids.push_back(a.identity(o));
    for (Index o = 0; o < b.object_count(); ++o) ids.push_back(b.identity(o) + ma);
    const std::size_t n = mors.size();
    std::vector<Index> table(n * n, npos);
    for (Index g = 0; g < ma; ++g) {
        for (Index f = 0; f < ma; ++f) table[g * n + f] = a.compose(g, f);
    }
    for (Index g = 0; g < b.morphism_count(); ++g) {
        for (Index f = 0; f < b.morphism_count(); ++f) {
            const Index h = b.compose(g, f);
            table[(g + ma) * n + (f + ma)] = h == npos ? npos : h + ma;
        }
    }
    return FiniteCategory(std::move(objs), std::move(mors), std::move(ids), std::move(table));
}

FiniteCategory prefixed(const FiniteCategory& c, const std::string& prefix) {
    std::vector<std::string> objs;
    for (const auto& o : c.object_names()) objs.push_back(prefix + o);
    std::vector<Morphism> mors = c.morphisms();
    for (Index m = 0; m < mors.size(); ++m) {
        mors[m].name = c.is_identity(m) ? "id_" + objs[mors[m].source] : prefix + mors[m].name;
    }
    std::vector<Index> ids;
    for (Index o = 0; o < c.object_count(); ++o) ids.push_back(c.identity(o));
    return FiniteCategory(std::move(objs), std::move(mors), std::move(ids), c.compose_table());
}

// ---------------------------------------------------------------------------
// Functors

ValidationReport validate_functor(const Functor& f) {
    ValidationReport r;
    const auto& d = *f.domain;
    const auto& c = *f.codomain;
    if (f.object_map.size() != d.object_count() || f.morphism_map.size() != d.morphism_count()) {
        r.add("functor: maps do not cover the domain");
        return r;
    }
    for (Index o = 0; o < d.object_count(); ++o) {
        if (f.object_map[o] >= c.object_count()) {
            r.add("functor: object " + d.object_name(o) + " maps outside the codomain");
            return r;
        }
    }
    for (Index m = 0; m < d.morphism_count(); ++m) {
        const Index fm = f.morphism_map[m];
        if (fm >= c.morphism_count()) {
            r.add("functor: morphism " + d.morphism_name(m) + " maps outside the codomain");
            return r;
        }
        if (c.source(fm) != f.object_map[d.source(m)] || c.target(fm) != f.object_map[d.target(m)]) {
            add_capped(r, "functor: " + d.morphism_name(m) + " does not preserve source/target");
        }
    }
    for (Index o = 0; o < d.object_count(); ++o) {
        if (f.morphism_map[d.identity(o)] != c.identity(f.object_map[o])) {
            add_capped(r, "functor: identity of " + d.object_name(o) + " not preserved");
        }
    }
    for (Index g = 0; g < d.morphism_count(); ++g) {
        for (Index h = 0; h < d.morphism_count(); ++h) {
            const Index gh = d.compose(g, h);
            if (gh == npos) continue;
            if (f.morphism_map[gh] != c.compose(f.morphism_map[g], f.morphism_map[h])) {
                add_capped(r, "functor: composite " + d.morphism_name(g) + "." + d.morphism_name(h) +
                                  " not preserved");
            }
        }
    }
    return r;
}

Functor identity_functor(const CategoryRef& c) {
    Functor f{c, c, std::vector<Index>(c->object_count()), std::vector<Index>(c->morphism_count())};
    std::iota(f.object_map.begin(), f.object_map.end(), 0);
    std::iota(f.morphism_map.begin(), f.morphism_map.end(), 0);
    return f;
}

Functor compose(const Functor& g, const Functor& f) {
    if (f.codomain != g.domain && !(*f.codomain == *g.domain)) {
        throw InputError("functor composition: codomain and domain differ");
    }
    Functor h{f.domain, g.codomain, {}, {}};
    h.object_map.reserve(f.object_map.size());
    for (Index o : f.object_map) h.object_map.push_back(g.object_map.at(o));
    h.morphism_map.reserve(f.morphism_map.size());
    for (Index m : f.morphism_map) h.morphism_map.push_back(g.morphism_map.at(m));
    return h;
}

bool same_maps(const Functor& a, const Functor& b) {
    return a.object_map == b.object_map && a.morphism_map == b.morphism_map;
}

Functor to_terminal(const CategoryRef& c, const CategoryRef& terminal) {
    if (terminal->object_count() != 1 || terminal->morphism_count() != 1) {
        throw InputError("to_terminal: target is not a terminal category");
    }
    return Functor{c, terminal, std::vector<Index>(c->object_count(), 0),
                   std::vector<Index>(c->morphism_count(), 0)};
}

Functor opposite(const Functor& f, const CategoryRef& domain_op, const CategoryRef& codomain_op) {
    return Functor{domain_op, codomain_op, f.object_map, f.morphism_map};
}

bool is_equivalence(const Functor& f) {
    const auto& d = *f.domain;
    const auto& c = *f.codomain;
    for (Index a = 0; a < d.object_count(); ++a) {
        for (Index b = 0; b < d.object_count(); ++b) {
            const auto src = d.hom(a, b);
            const auto dst = c.hom(f.object_map[a], f.object_map[b]);
            if (src.size() != dst.size()) return false;
            std::vector<Index> image;
            for (Index m : src) image.push_back(f.morphism_map[m]);
            std::sort(image.begin(), image.end());
            if (std::adjacent_find(image.begin(), image.end()) != image.end()) return false;
        }
    }
    for (Index y = 0; y < c.object_count(); ++y) {
        bool reached = false;
        for (Index a = 0; a < d.object_count() && !reached; ++a) {
            const Index fa = f.object_map[a];
            for (Index m : c.hom(fa, y)) {
                for (Index n : c.hom(y, fa)) {
                    if (c.compose(n, m) == c.identity(fa) && c.compose(m, n) == c.identity(y)) {
                        reached = true;
                        break;
                    }
                }
                if (reached) break;
            }
        }
        if (!reached) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Groupoids

std::optional<Groupoid> as_groupoid(const CategoryRef& c) {
    Groupoid g{c, std::vector<Index>(c->morphism_count(), npos)};
    for (Index m = 0; m < c->morphism_count(); ++m) {
        for (Index n : c->hom(c->target(m), c->source(m))) {
            if (c->compose(n, m) == c->identity(c->source(m)) &&
                c->compose(m, n) == c->identity(c->target(m))) {
                g.inverse[m] = n;
                break;
            }
        }
        if (g.inverse[m] == npos) return std::nullopt;
    }
    return g;
}

ValidationReport validate_groupoid(const Groupoid& g) {
    ValidationReport r = validate_category(g.cat());
    const auto& c = g.cat();
    if (g.inverse.size() != c.morphism_count()) {
        r.add("inverse law: inverse map does not cover all morphisms");
        return r;
    }
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index n = g.inverse[m];
        if (n >= c.morphism_count() || c.compose(n, m) != c.identity(c.source(m)) ||
            c.compose(m, n) != c.identity(c.target(m))) {
            add_capped(r, "inverse law: " + c.morphism_name(m) + " has no valid inverse" +
                              (n < c.morphism_count() ? " (declared " + c.morphism_name(n) + ")" : ""));
        }
    }
    return r;
}

Groupoid opposite(const Groupoid& g) {
    return Groupoid{share(opposite(g.cat())), g.inverse};
}

// ---------------------------------------------------------------------------
// Set-valued functors

std::string SetValuedFunctor::label(Index o, Index e) const {
    if (o < labels.size() && e < labels[o].size()) return labels[o][e];
    return std::to_string(e);
}

ValidationReport validate_set_functor(const SetValuedFunctor& f) {
    ValidationReport r;
    const auto& c = *f.base;
    if (f.sizes.size() != c.object_count() || f.action.size() != c.morphism_count()) {
        r.add("set functor: data does not cover the base category");
        return r;
    }
    const bool co = f.variance == Variance::covariant;
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index from = co ? c.source(m) : c.target(m);
        const Index to = co ? c.target(m) : c.source(m);
        if (f.action[m].size() != f.sizes[from]) {
            r.add("set functor: action of " + c.morphism_name(m) + " has wrong domain size");
            return r;
        }
        for (Index e : f.action[m]) {
            if (e >= f.sizes[to]) {
                r.add("set functor: action of " + c.morphism_name(m) + " leaves its codomain");
                return r;
            }
        }
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        const auto& act = f.action[c.identity(o)];
        for (Index e = 0; e < act.size(); ++e) {
            if (act[e] != e) {
                add_capped(r, "set functor: identity of " + c.object_name(o) + " acts non-trivially");
                break;
            }
        }
    }
    for (Index g = 0; g < c.morphism_count(); ++g) {
        for (Index h = 0; h < c.morphism_count(); ++h) {
            const Index gh = c.compose(g, h);
            if (gh == npos) continue;
            const auto& first = co ? f.action[h] : f.action[g];
            const auto& second = co ? f.action[g] : f.action[h];
            for (Index e = 0; e < first.size(); ++e) {
                if (second[first[e]] != f.action[gh][e]) {
                    add_capped(r, "set functor: composite " + c.morphism_name(g) + "." + c.morphism_name(h) +
                                      " not respected");
                    break;
                }
            }
        }
    }
    return r;
}

SetValuedFunctor constant_point(const CategoryRef& base, Variance variance) {
    SetValuedFunctor f{base, variance, std::vector<std::size_t>(base->object_count(), 1),
                       std::vector<std::vector<Index>>(base->morphism_count(), std::vector<Index>{0}),
                       {}};
    return f;
}

SetValuedFunctor flip_variance(const SetValuedFunctor& f, const CategoryRef& opposite_base) {
    SetValuedFunctor g = f;
    g.base = opposite_base;
    g.variance = f.variance == Variance::covariant ? Variance::contravariant : Variance::covariant;
    return g;
}

SetValuedFunctor precompose(const SetValuedFunctor& f, const Functor& g) {
    SetValuedFunctor out{g.domain, f.variance, {}, {}, {}};
    for (Index o = 0; o < g.domain->object_count(); ++o) {
        out.sizes.push_back(f.sizes.at(g.object_map[o]));
        if (!f.labels.empty()) out.labels.push_back(f.labels.at(g.object_map[o]));
    }
    for (Index m = 0; m < g.domain->morphism_count(); ++m) out.action.push_back(f.action.at(g.morphism_map[m]));
    return out;
}

bool is_natural_iso(const SetValuedFunctor& a, const SetValuedFunctor& b,
                    const std::vector<std::vector<Index>>& components) {
    const auto& c = *a.base;
    if (a.variance != b.variance || components.size() != c.object_count()) return false;
    for (Index o = 0; o < c.object_count(); ++o) {
        if (a.sizes[o] != b.sizes[o] || components[o].size() != a.sizes[o]) return false;
        std::vector<bool> hit(b.sizes[o], false);
        for (Index e : components[o]) {
            if (e >= b.sizes[o] || hit[e]) return false;
            hit[e] = true;
        }
    }
    const bool co = a.variance == Variance::covariant;
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index from = co ? c.source(m) : c.target(m);
        const Index to = co ? c.target(m) : c.source(m);
        for (Index e = 0; e < a.sizes[from]; ++e) {
            if (components[to][a.action[m][e]] != b.action[m][components[from][e]]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Comma categories, components, colimits

CommaCategory comma_category(const Functor& f, Index y) {
    const auto& d = *f.domain;
    const auto& c = *f.codomain;
    if (y >= c.object_count()) throw InputError("comma_category: object is not in the codomain");
    CommaCategory out;
    std::vector<std::string> names;
    std::vector<std::vector<std::pair<Index, Index>>> by_source(d.object_count());  // (h, comma index)
    for (Index x = 0; x < d.object_count(); ++x) {
        for (Index h : c.hom(f.object_map[x], y)) {
            by_source[x].emplace_back(h, out.object_source.size());
            out.object_source.push_back(x);
            out.object_arrow.push_back(h);
            names.push_back("(" + d.object_name(x) + "|" + c.morphism_name(h) + ")");
        }
    }
    const std::size_t nobj = names.size();
    std::vector<Morphism> mors;
    std::vector<Index> ids(nobj, npos);
    for (Index p = 0; p < nobj; ++p) {
        const Index x = out.object_source[p];
        const Index h = out.object_arrow[p];
        for (Index m = 0; m < d.morphism_count(); ++m) {
            if (d.source(m) != x) continue;
            const Index fm = f.morphism_map[m];
            for (const auto& [h2, q] : by_source[d.target(m)]) {
                if (c.compose(h2, fm) != h) continue;
                if (m == d.identity(x) && q == p) ids[p] = mors.size();
                mors.push_back({d.morphism_name(m) + ":" + names[p] + ">" + names[q], p, q});
                out.morphism_source.push_back(m);
            }
        }
    }
    const std::size_t n = mors.size();
    std::vector<Index> table(n * n, npos);
    // morphism lookup by (source comma object, domain morphism)
    std::vector<std::unordered_map<Index, Index>> lookup(nobj);
    for (Index k = 0; k < n; ++k) lookup[mors[k].source].emplace(out.morphism_source[k], k);
    for (Index g = 0; g < n; ++g) {
        for (Index f2 = 0; f2 < n; ++f2) {
            if (mors[f2].target != mors[g].source) continue;
            const Index dm = d.compose(out.morphism_source[g], out.morphism_source[f2]);
            auto it = lookup[mors[f2].source].find(dm);
            if (it != lookup[mors[f2].source].end()) table[g * n + f2] = it->second;
        }
    }
    out.category = FiniteCategory(std::move(names), std::move(mors), std::move(ids), std::move(table));
    return out;
}

CommaCategory comma_category(const Functor& f, std::string_view y) {
    auto o = f.codomain->find_object(y);
    if (!o) throw InputError("comma_category: '" + std::string(y) + "' is not in the codomain");
    return comma_category(f, *o);
}

Partition pi0(const FiniteCategory& c) {
    UnionFind uf(c.object_count());
    for (const auto& m : c.morphisms()) uf.unite(m.source, m.target);
    std::vector<std::vector<Index>> groups;
    std::unordered_map<Index, Index> root_to_group;
    for (Index o = 0; o < c.object_count(); ++o) {
        auto [it, fresh] = root_to_group.emplace(uf.find(o), groups.size());
        if (fresh) groups.emplace_back();
        groups[it->second].push_back(o);
    }
    auto by_name = [&c](Index a, Index b) { return c.object_name(a) < c.object_name(b); };
    for (auto& g : groups) std::sort(g.begin(), g.end(), by_name);
    std::sort(groups.begin(), groups.end(),
              [&](const auto& a, const auto& b) { return by_name(a.front(), b.front()); });
    Partition p;
    p.class_of.assign(c.object_count(), npos);
    for (Index k = 0; k < groups.size(); ++k) {
        for (Index o : groups[k]) p.class_of[o] = k;
        p.representative.push_back(groups[k].front());
    }
    p.classes = std::move(groups);
    return p;
}

SetColimit colim_set(const SetValuedFunctor& f) {
    if (f.variance != Variance::covariant) {
        throw InputError("colim_set: expected a covariant functor (use flip_variance)");
    }
    const auto& c = *f.base;
    std::vector<std::size_t> offset(c.object_count() + 1, 0);
    for (Index o = 0; o < c.object_count(); ++o) offset[o + 1] = offset[o] + f.sizes[o];
    UnionFind uf(offset.back());
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index s = c.source(m);
        const Index t = c.target(m);
        for (Index e = 0; e < f.sizes[s]; ++e) uf.unite(offset[s] + e, offset[t] + f.action[m][e]);
    }
    SetColimit out;
    std::unordered_map<Index, Index> root_to_class;
    out.cocone.resize(c.object_count());
    for (Index o = 0; o < c.object_count(); ++o) {
        for (Index e = 0; e < f.sizes[o]; ++e) {
            auto [it, fresh] = root_to_class.emplace(uf.find(offset[o] + e), out.size);
            if (fresh) ++out.size;
            out.cocone[o].push_back(it->second);
        }
    }
    return out;
}

KanExtension left_kan_extension(const Functor& along, const SetValuedFunctor& f) {
    if (f.variance != Variance::covariant) {
        throw InputError("left_kan_set: expected a covariant functor");
    }
    if (f.base != along.domain && !(*f.base == *along.domain)) {
        throw InputError("left_kan_set: functor is not defined on the domain of the extension");
    }
    const auto& b = *along.codomain;
    KanExtension out;
    out.functor = SetValuedFunctor{along.codomain, Variance::covariant, {}, {}, {}};
    for (Index y = 0; y < b.object_count(); ++y) {
        CommaCategory comma = comma_category(along, y);
        std::unordered_map<Index, std::unordered_map<Index, Index>> object_of;
        auto comma_ref = share(comma.category);
        SetValuedFunctor restricted{comma_ref, Variance::covariant, {}, {}, {}};
        for (Index p = 0; p < comma_ref->object_count(); ++p) {
            restricted.sizes.push_back(f.sizes[comma.object_source[p]]);
            object_of[comma.object_source[p]][comma.object_arrow[p]] = p;
        }
        for (Index k = 0; k < comma_ref->morphism_count(); ++k) {
            restricted.action.push_back(f.action[comma.morphism_source[k]]);
        }
        out.colimits.push_back(colim_set(restricted));
        out.functor.sizes.push_back(out.colimits.back().size);
        out.commas.push_back(std::move(comma));
        out.comma_object.push_back(std::move(object_of));
    }
    for (Index beta = 0; beta < b.morphism_count(); ++beta) {
        const Index from = b.source(beta);
        const auto& comma = out.commas[from];
        std::vector<Index> act(out.colimits[from].size, npos);
        for (Index p = 0; p < comma.object_source.size(); ++p) {
            const Index x = comma.object_source[p];
            const Index h2 = b.compose(beta, comma.object_arrow[p]);
            for (Index e = 0; e < f.sizes[x]; ++e) {
                act[out.colimits[from].cocone[p][e]] = out.element(b.target(beta), x, h2, e);
            }
        }
        out.functor.action.push_back(std::move(act));
    }
    return out;
}

Index KanExtension::element(Index b, Index x, Index h, Index e) const {
    return colimits[b].cocone[comma_object[b].at(x).at(h)][e];
}

SetValuedFunctor left_kan_set(const Functor& along, const SetValuedFunctor& f) {
    return left_kan_extension(along, f).functor;
}

}  // namespace fibsite
