#include "fibsite/fibred.hpp"

#include <algorithm>
#include <map>

namespace fibsite {

namespace {

bool same_category(const CategoryRef& a, const CategoryRef& b) {
    return a == b || (a && b && *a == *b);
}

std::string label_of(const Presheaf& x, Index u, Index e) {
    if (u < x.labels.size() && e < x.labels[u].size()) return x.labels[u][e];
    return std::to_string(e);
}

[[noreturn]] void throw_report(const std::string& what, const ValidationReport& r) {
    std::string msg = what;
    for (std::size_t i = 0; i < r.violations.size() && i < 5; ++i) msg += (i ? "; " : ": ") + r.violations[i];
    throw ValidationError(msg);
}

bool valid_map(const std::vector<Index>& f, std::size_t from, std::size_t to) {
    if (f.size() != from) return false;
    return std::all_of(f.begin(), f.end(), [&](Index e) { return e < to; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Presheaves of categories

PresheafOfCategories::PresheafOfCategories(CategoryRef site, std::vector<CategoryRef> values,
                                           std::vector<Functor> restriction)
    : site_(std::move(site)), values_(std::move(values)), restriction_(std::move(restriction)) {
    if (!site_) throw InputError("presheaf of categories: missing site");
    if (values_.size() != site_->object_count()) {
        throw InputError("presheaf of categories: expected one category per object of the site");
    }
    if (restriction_.size() != site_->morphism_count()) {
        throw InputError("presheaf of categories: expected one functor per morphism of the site");
    }
    for (Index u = 0; u < values_.size(); ++u) {
        if (!values_[u]) throw InputError("presheaf of categories: missing category");
        offset_.push_back(base_of_.size());
        base_of_.insert(base_of_.end(), values_[u]->object_count(), u);
    }
}

ValidationReport validate_presheaf_of_categories(const PresheafOfCategories& a) {
    ValidationReport r;
    const auto& c = *a.site();
    for (Index u = 0; u < c.object_count(); ++u) {
        r.merge(validate_category(a.value(u)), "A(" + c.object_name(u) + "): ");
    }
    if (!r.ok()) return r;
    bool shapes = true;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& f = a.along(alpha);
        const std::string name = c.morphism_name(alpha);
        if (!same_category(f.domain, a.value_ref(c.target(alpha))) ||
            !same_category(f.codomain, a.value_ref(c.source(alpha)))) {
            r.add("restriction: " + name + "* has the wrong domain or codomain");
            shapes = false;
            continue;
        }
        const auto fr = validate_functor(f);
        r.merge(fr, "restriction: " + name + "*: ");
        shapes = shapes && fr.ok();
    }
    if (!shapes) return r;
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& f = a.along(c.identity(u));
        const auto& k = a.value(u);
        bool ok = true;
        for (Index x = 0; x < k.object_count(); ++x) ok = ok && f.object_map[x] == x;
        for (Index m = 0; m < k.morphism_count(); ++m) ok = ok && f.morphism_map[m] == m;
        if (!ok) r.add("identity: restriction along id_" + c.object_name(u) + " is not the identity");
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        for (Index gamma : c.morphisms_into(c.source(alpha))) {
            const auto& fa = a.along(alpha);
            const auto& fg = a.along(gamma);
            const auto& fag = a.along(c.compose(alpha, gamma));
            bool ok = true;
            for (Index x = 0; x < fa.object_map.size(); ++x) ok = ok && fag.object_map[x] == fg.object_map[fa.object_map[x]];
            for (Index m = 0; m < fa.morphism_map.size(); ++m) {
                ok = ok && fag.morphism_map[m] == fg.morphism_map[fa.morphism_map[m]];
            }
            if (!ok) {
                r.add("composition: (" + c.morphism_name(alpha) + "∘" + c.morphism_name(gamma) + ")* != " +
                      c.morphism_name(gamma) + "*∘" + c.morphism_name(alpha) + "*");
            }
        }
    }
    return r;
}

std::optional<PresheafOfGroupoids> as_presheaf_of_groupoids(const PresheafOfCategoriesRef& a) {
    PresheafOfGroupoids g{a, {}};
    for (Index u = 0; u < a->site()->object_count(); ++u) {
        auto gu = as_groupoid(a->value_ref(u));
        if (!gu) return std::nullopt;
        g.groupoids.push_back(std::move(*gu));
    }
    return g;
}

ValidationReport validate_presheaf_of_groupoids(const PresheafOfGroupoids& g) {
    ValidationReport r = validate_presheaf_of_categories(*g.categories);
    const auto& a = *g.categories;
    const auto& c = *a.site();
    if (g.groupoids.size() != c.object_count()) {
        r.add("groupoid: expected one groupoid per object");
        return r;
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        r.merge(validate_groupoid(g.groupoids[u]), "A(" + c.object_name(u) + "): ");
    }
    if (!r.ok()) return r;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& f = a.along(alpha);
        const auto& from = g.groupoids[c.target(alpha)];
        const auto& to = g.groupoids[c.source(alpha)];
        for (Index m = 0; m < from.inverse.size(); ++m) {
            if (f.morphism_map[from.inverse[m]] != to.inverse[f.morphism_map[m]]) {
                r.add("inverse law: " + c.morphism_name(alpha) + "* does not preserve the inverse of " +
                      from.cat().morphism_name(m));
            }
        }
    }
    return r;
}

Presheaf object_presheaf(const PresheafOfCategories& a) {
    const auto& c = *a.site();
    Presheaf p{a.site(), Variance::contravariant, {}, {}, {}};
    for (Index u = 0; u < c.object_count(); ++u) {
        p.sizes.push_back(a.value(u).object_count());
        p.labels.push_back(a.value(u).object_names());
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) p.action.push_back(a.along(alpha).object_map);
    return p;
}

Presheaf morphism_presheaf(const PresheafOfCategories& a) {
    const auto& c = *a.site();
    Presheaf p{a.site(), Variance::contravariant, {}, {}, {}};
    for (Index u = 0; u < c.object_count(); ++u) {
        p.sizes.push_back(a.value(u).morphism_count());
        std::vector<std::string> names;
        for (const auto& m : a.value(u).morphisms()) names.push_back(m.name);
        p.labels.push_back(std::move(names));
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) p.action.push_back(a.along(alpha).morphism_map);
    return p;
}

// ---------------------------------------------------------------------------
// Constructions

PresheafOfCategories constant_presheaf(const CategoryRef& site, const CategoryRef& k) {
    std::vector<Functor> res(site->morphism_count(), identity_functor(k));
    return PresheafOfCategories(site, std::vector<CategoryRef>(site->object_count(), k), std::move(res));
}

namespace {

PresheafOfCategories sets_presheaf(const Presheaf& x, bool codiscrete) {
    const auto& c = *x.base;
    std::vector<CategoryRef> values;
    for (Index u = 0; u < c.object_count(); ++u) {
        std::vector<std::string> names;
        for (Index e = 0; e < x.sizes[u]; ++e) names.push_back(label_of(x, u, e));
        values.push_back(share(codiscrete ? codiscrete_category(names) : discrete_category(names)));
    }
    std::vector<Functor> res;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& from = values[c.target(alpha)];
        const auto& to = values[c.source(alpha)];
        Functor f{from, to, x.action[alpha], std::vector<Index>(from->morphism_count(), npos)};
        for (Index m = 0; m < from->morphism_count(); ++m) {
            f.morphism_map[m] = to->hom(f.object_map[from->source(m)], f.object_map[from->target(m)]).at(0);
        }
        res.push_back(std::move(f));
    }
    return PresheafOfCategories(x.base, std::move(values), std::move(res));
}

}  // namespace

PresheafOfCategories discrete_presheaf(const Presheaf& x) {
    return sets_presheaf(x, false);
}

PresheafOfCategories codiscrete_presheaf(const Presheaf& x) {
    return sets_presheaf(x, true);
}

PresheafOfCategories cyclic_reduction_presheaf(const CategoryRef& site, const std::vector<std::size_t>& order) {
    const auto& c = *site;
    if (order.size() != c.object_count()) throw InputError("cyclic_reduction_presheaf: one order per object");
    std::vector<CategoryRef> values;
    for (std::size_t n : order) values.push_back(share(cyclic_group_category(n)));
    std::vector<Functor> res;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const std::size_t big = order[c.target(alpha)];
        const std::size_t small = order[c.source(alpha)];
        if (big % small != 0) {
            throw InputError("cyclic_reduction_presheaf: order at " + c.object_name(c.source(alpha)) +
                             " does not divide order at " + c.object_name(c.target(alpha)));
        }
        Functor f{values[c.target(alpha)], values[c.source(alpha)], {0}, {}};
        for (Index k = 0; k < big; ++k) f.morphism_map.push_back(k % small);
        res.push_back(std::move(f));
    }
    return PresheafOfCategories(site, std::move(values), std::move(res));
}

PresheafOfCategories product(const PresheafOfCategories& a, const PresheafOfCategories& b) {
    if (!same_category(a.site(), b.site())) throw InputError("product: presheaves on different sites");
    const auto& c = *a.site();
    std::vector<CategoryRef> values;
    for (Index u = 0; u < c.object_count(); ++u) values.push_back(share(product_category(a.value(u), b.value(u))));
    std::vector<Functor> res;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& fa = a.along(alpha);
        const auto& fb = b.along(alpha);
        const auto& bu = b.value(c.target(alpha));
        const auto& bv = b.value(c.source(alpha));
        Functor f{values[c.target(alpha)], values[c.source(alpha)], {}, {}};
        for (Index o = 0; o < values[c.target(alpha)]->object_count(); ++o) {
            const Index i = o / bu.object_count();
            const Index j = o % bu.object_count();
            f.object_map.push_back(fa.object_map[i] * bv.object_count() + fb.object_map[j]);
        }
        for (Index m = 0; m < values[c.target(alpha)]->morphism_count(); ++m) {
            const Index i = m / bu.morphism_count();
            const Index j = m % bu.morphism_count();
            f.morphism_map.push_back(fa.morphism_map[i] * bv.morphism_count() + fb.morphism_map[j]);
        }
        res.push_back(std::move(f));
    }
    return PresheafOfCategories(a.site(), std::move(values), std::move(res));
}

PresheafOfCategories coproduct(const PresheafOfCategories& a, const PresheafOfCategories& b) {
    if (!same_category(a.site(), b.site())) throw InputError("coproduct: presheaves on different sites");
    const auto& c = *a.site();
    std::vector<CategoryRef> values;
    for (Index u = 0; u < c.object_count(); ++u) {
        values.push_back(share(disjoint_union(prefixed(a.value(u), "l"), prefixed(b.value(u), "r"))));
    }
    std::vector<Functor> res;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& fa = a.along(alpha);
        const auto& fb = b.along(alpha);
        const auto& av = a.value(c.source(alpha));
        Functor f{values[c.target(alpha)], values[c.source(alpha)], fa.object_map, fa.morphism_map};
        for (Index o : fb.object_map) f.object_map.push_back(o + av.object_count());
        for (Index m : fb.morphism_map) f.morphism_map.push_back(m + av.morphism_count());
        res.push_back(std::move(f));
    }
    return PresheafOfCategories(a.site(), std::move(values), std::move(res));
}

ValidationReport validate_indexed_presheaves(const IndexedPresheaves& y) {
    ValidationReport r;
    const auto& idx = *y.index;
    if (y.family.size() != idx.object_count()) {
        r.add("family: expected one presheaf per index object");
        return r;
    }
    if (y.transition.size() != idx.morphism_count()) {
        r.add("family: expected one transition per index morphism");
        return r;
    }
    if (idx.object_count() == 0) return r;
    const auto site = y.family[0].base;
    for (Index i = 0; i < idx.object_count(); ++i) {
        if (!same_category(y.family[i].base, site)) r.add("family: presheaves on different sites");
        r.merge(validate_set_functor(y.family[i]), "family " + idx.object_name(i) + ": ");
    }
    if (!r.ok()) return r;
    const auto& c = *site;
    for (Index th = 0; th < idx.morphism_count(); ++th) {
        const auto& yi = y.family[idx.source(th)];
        const auto& yj = y.family[idx.target(th)];
        if (y.transition[th].size() != c.object_count()) {
            r.add("naturality: transition " + idx.morphism_name(th) + " has the wrong shape");
            continue;
        }
        for (Index u = 0; u < c.object_count(); ++u) {
            if (!valid_map(y.transition[th][u], yi.sizes[u], yj.sizes[u])) {
                r.add("naturality: transition " + idx.morphism_name(th) + " at " + c.object_name(u) + " is not a map");
            }
        }
    }
    if (!r.ok()) return r;
    for (Index th = 0; th < idx.morphism_count(); ++th) {
        const auto& yi = y.family[idx.source(th)];
        const auto& yj = y.family[idx.target(th)];
        for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
            const Index u = c.target(alpha);
            const Index v = c.source(alpha);
            for (Index e = 0; e < yi.sizes[u]; ++e) {
                if (y.transition[th][v][yi.action[alpha][e]] != yj.action[alpha][y.transition[th][u][e]]) {
                    r.add("naturality: " + idx.morphism_name(th) + " does not commute with " + c.morphism_name(alpha));
                    break;
                }
            }
        }
        if (idx.is_identity(th)) {
            for (Index u = 0; u < c.object_count(); ++u) {
                for (Index e = 0; e < yi.sizes[u]; ++e) {
                    if (y.transition[th][u][e] != e) {
                        r.add("identity: " + idx.morphism_name(th) + " is not the identity");
                        u = c.object_count() - 1;
                        break;
                    }
                }
            }
        }
        for (Index th2 = 0; th2 < idx.morphism_count(); ++th2) {
            if (idx.source(th2) != idx.target(th)) continue;
            const Index comp = idx.compose(th2, th);
            for (Index u = 0; u < c.object_count(); ++u) {
                for (Index e = 0; e < yi.sizes[u]; ++e) {
                    if (y.transition[comp][u][e] != y.transition[th2][u][y.transition[th][u][e]]) {
                        r.add("composition: transitions of " + idx.morphism_name(th2) + "∘" + idx.morphism_name(th) +
                              " do not compose");
                        u = c.object_count() - 1;
                        break;
                    }
                }
            }
        }
    }
    return r;
}

PresheafOfCategories make_translation_presheaf(const IndexedPresheaves& y) {
    const auto r = validate_indexed_presheaves(y);
    if (!r.ok()) throw_report("make_translation_presheaf", r);
    const auto& idx = *y.index;
    if (idx.object_count() == 0) throw InputError("make_translation_presheaf: empty index category");
    const auto site = y.family[0].base;
    const auto& c = *site;
    std::vector<CategoryRef> values;
    // object (i, x) at obj_off[U][i] + x; morphism (θ, x) at mor_off[U][θ] + x
    std::vector<std::vector<Index>> obj_off(c.object_count()), mor_off(c.object_count());
    for (Index u = 0; u < c.object_count(); ++u) {
        std::vector<std::string> names;
        for (Index i = 0; i < idx.object_count(); ++i) {
            obj_off[u].push_back(names.size());
            for (Index e = 0; e < y.family[i].sizes[u]; ++e) {
                names.push_back(idx.object_name(i) + ":" + label_of(y.family[i], u, e));
            }
        }
        std::vector<Morphism> mors;
        for (Index th = 0; th < idx.morphism_count(); ++th) {
            mor_off[u].push_back(mors.size());
            const Index i = idx.source(th);
            const Index j = idx.target(th);
            for (Index e = 0; e < y.family[i].sizes[u]; ++e) {
                const Index from = obj_off[u][i] + e;
                const Index to = obj_off[u][j] + y.transition[th][u][e];
                mors.push_back({idx.is_identity(th) ? "id_" + names[from] : idx.morphism_name(th) + "@" + names[from],
                                from, to});
            }
        }
        std::vector<Index> ids;
        for (Index i = 0; i < idx.object_count(); ++i) {
            for (Index e = 0; e < y.family[i].sizes[u]; ++e) ids.push_back(mor_off[u][idx.identity(i)] + e);
        }
        const std::size_t n = mors.size();
        std::vector<Index> table(n * n, npos);
        for (Index th = 0; th < idx.morphism_count(); ++th) {
            for (Index th2 = 0; th2 < idx.morphism_count(); ++th2) {
                if (idx.source(th2) != idx.target(th)) continue;
                const Index comp = idx.compose(th2, th);
                for (Index e = 0; e < y.family[idx.source(th)].sizes[u]; ++e) {
                    const Index f = mor_off[u][th] + e;
                    const Index g = mor_off[u][th2] + y.transition[th][u][e];
                    table[g * n + f] = mor_off[u][comp] + e;
                }
            }
        }
        values.push_back(share(FiniteCategory(std::move(names), std::move(mors), std::move(ids), std::move(table))));
    }
    std::vector<Functor> res;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        Functor f{values[u], values[v], {}, {}};
        for (Index i = 0; i < idx.object_count(); ++i) {
            for (Index e = 0; e < y.family[i].sizes[u]; ++e) {
                f.object_map.push_back(obj_off[v][i] + y.family[i].action[alpha][e]);
            }
        }
        for (Index th = 0; th < idx.morphism_count(); ++th) {
            const auto& yi = y.family[idx.source(th)];
            for (Index e = 0; e < yi.sizes[u]; ++e) f.morphism_map.push_back(mor_off[v][th] + yi.action[alpha][e]);
        }
        res.push_back(std::move(f));
    }
    return PresheafOfCategories(site, std::move(values), std::move(res));
}

// ---------------------------------------------------------------------------
// Morphisms of presheaves of categories

Index MorphismOfPresheavesOfCategories::on_section(Index s) const {
    const Index u = domain->section_base(s);
    return codomain->section(u, components.at(u).object_map.at(domain->section_object(s)));
}

ValidationReport validate_morphism(const MorphismOfPresheavesOfCategories& m) {
    ValidationReport r;
    const auto& a = *m.domain;
    const auto& b = *m.codomain;
    if (!same_category(a.site(), b.site())) {
        r.add("morphism: presheaves on different sites");
        return r;
    }
    const auto& c = *a.site();
    if (m.components.size() != c.object_count()) {
        r.add("morphism: expected one functor per object");
        return r;
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& f = m.components[u];
        if (!same_category(f.domain, a.value_ref(u)) || !same_category(f.codomain, b.value_ref(u))) {
            r.add("morphism: component at " + c.object_name(u) + " has the wrong domain or codomain");
            continue;
        }
        r.merge(validate_functor(f), "component " + c.object_name(u) + ": ");
    }
    if (!r.ok()) return r;
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& mu = m.components[c.target(alpha)];
        const auto& mv = m.components[c.source(alpha)];
        const auto& fa = a.along(alpha);
        const auto& fb = b.along(alpha);
        bool ok = true;
        for (Index x = 0; x < mu.object_map.size(); ++x) {
            ok = ok && mv.object_map[fa.object_map[x]] == fb.object_map[mu.object_map[x]];
        }
        for (Index g = 0; g < mu.morphism_map.size(); ++g) {
            ok = ok && mv.morphism_map[fa.morphism_map[g]] == fb.morphism_map[mu.morphism_map[g]];
        }
        if (!ok) r.add("naturality: square at " + c.morphism_name(alpha) + " does not commute");
    }
    return r;
}

MorphismOfPresheavesOfCategories identity_morphism(const PresheafOfCategoriesRef& a) {
    MorphismOfPresheavesOfCategories m{a, a, {}};
    for (const auto& v : a->values()) m.components.push_back(identity_functor(v));
    return m;
}

MorphismOfPresheavesOfCategories compose(const MorphismOfPresheavesOfCategories& g,
                                         const MorphismOfPresheavesOfCategories& f) {
    MorphismOfPresheavesOfCategories m{f.domain, g.codomain, {}};
    for (Index u = 0; u < f.components.size(); ++u) m.components.push_back(compose(g.components[u], f.components[u]));
    return m;
}

MorphismOfPresheavesOfCategories first_projection(const PresheafOfCategoriesRef& product,
                                                  const PresheafOfCategoriesRef& a) {
    MorphismOfPresheavesOfCategories m{product, a, {}};
    for (Index u = 0; u < a->site()->object_count(); ++u) {
        const auto& p = product->value(u);
        const auto& au = a->value(u);
        Functor f{product->value_ref(u), a->value_ref(u), {}, {}};
        if (au.object_count() > 0) {
            const std::size_t nb = p.object_count() / au.object_count();
            const std::size_t mb = p.morphism_count() / au.morphism_count();
            for (Index o = 0; o < p.object_count(); ++o) f.object_map.push_back(o / nb);
            for (Index k = 0; k < p.morphism_count(); ++k) f.morphism_map.push_back(k / mb);
        }
        m.components.push_back(std::move(f));
    }
    return m;
}

bool is_sectionwise_equivalence(const MorphismOfPresheavesOfCategories& m) {
    return std::all_of(m.components.begin(), m.components.end(), [](const Functor& f) { return is_equivalence(f); });
}

// ---------------------------------------------------------------------------
// Grothendieck construction

Index FibredSite::morphism(Index alpha, Index x, Index f) const {
    return lookup.at(alpha).at(x).at(f);
}

FibredSite grothendieck_construct(const PresheafOfCategoriesRef& a) {
    const auto r = validate_presheaf_of_categories(*a);
    if (!r.ok()) throw_report("grothendieck_construct", r);
    const auto& c = *a->site();
    FibredSite fs;
    fs.fibres = a;
    std::vector<std::string> objects;
    for (Index s = 0; s < a->section_count(); ++s) {
        const Index u = a->section_base(s);
        objects.push_back("(" + c.object_name(u) + "|" + a->value(u).object_name(a->section_object(s)) + ")");
    }
    std::vector<Morphism> mors;
    fs.lookup.resize(c.morphism_count());
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        const auto& au = a->value(u);
        const auto& av = a->value(v);
        const auto& res = a->along(alpha);
        fs.lookup[alpha].assign(au.object_count(), std::vector<Index>(av.morphism_count(), npos));
        for (Index x = 0; x < au.object_count(); ++x) {
            for (Index f = 0; f < av.morphism_count(); ++f) {
                if (av.target(f) != res.object_map[x]) continue;
                fs.lookup[alpha][x][f] = mors.size();
                mors.push_back({"(" + c.morphism_name(alpha) + "|" + av.morphism_name(f) + ")", a->section(v, av.source(f)),
                                a->section(u, x)});
                fs.morphism_base.push_back(alpha);
                fs.morphism_fibre.push_back(f);
                fs.morphism_target.push_back(x);
            }
        }
    }
    // (α|f) is ambiguous when α* identifies two objects; qualify those by the target.
    std::map<std::string, std::size_t> seen;
    for (const auto& m : mors) ++seen[m.name];
    for (Index k = 0; k < mors.size(); ++k) {
        if (seen[mors[k].name] > 1) {
            const Index u = c.target(fs.morphism_base[k]);
            mors[k].name += "@" + a->value(u).object_name(fs.morphism_target[k]);
        }
    }
    std::vector<Index> ids;
    for (Index s = 0; s < a->section_count(); ++s) {
        const Index u = a->section_base(s);
        const Index x = a->section_object(s);
        ids.push_back(fs.lookup[c.identity(u)][x][a->value(u).identity(x)]);
    }
    const std::size_t n = mors.size();
    std::vector<Index> table(n * n, npos);
    for (Index g = 0; g < n; ++g) {
        const Index alpha = fs.morphism_base[g];
        const Index f = fs.morphism_fibre[g];
        const Index x = fs.morphism_target[g];
        for (Index h = 0; h < n; ++h) {
            if (mors[h].target != mors[g].source) continue;
            // (α, f)(γ, k) = (αγ, γ*(f)∘k)
            const Index gamma = fs.morphism_base[h];
            const Index w = c.source(gamma);
            const Index gf = a->along(gamma).morphism_map[f];
            const Index fibre = a->value(w).compose(gf, fs.morphism_fibre[h]);
            table[g * n + h] = fs.lookup[c.compose(alpha, gamma)][x][fibre];
        }
    }
    fs.total = share(FiniteCategory(std::move(objects), std::move(mors), std::move(ids), std::move(table)));
    std::vector<Index> obj_base;
    for (Index s = 0; s < a->section_count(); ++s) obj_base.push_back(a->section_base(s));
    fs.projection = Functor{fs.total, a->site(), std::move(obj_base), fs.morphism_base};
    return fs;
}

Functor total_functor(const MorphismOfPresheavesOfCategories& m, const FibredSite& from, const FibredSite& to) {
    const auto& c = *from.fibres->site();
    Functor f{from.total, to.total, {}, {}};
    for (Index s = 0; s < from.fibres->section_count(); ++s) f.object_map.push_back(m.on_section(s));
    for (Index k = 0; k < from.total->morphism_count(); ++k) {
        const Index alpha = from.morphism_base[k];
        const Index x = m.components[c.target(alpha)].object_map[from.morphism_target[k]];
        const Index g = m.components[c.source(alpha)].morphism_map[from.morphism_fibre[k]];
        f.morphism_map.push_back(to.morphism(alpha, x, g));
    }
    return f;
}

Sieve inverse_image(const FibredSite& fs, const Sieve& s, Index x) {
    const Index target = fs.fibres->section(s.base, x);
    Sieve out = empty_sieve(*fs.total, target);
    for (Index k : fs.total->morphisms_into(target)) {
        if (s.contains(fs.morphism_base[k])) out.members.set(k);
    }
    return out;
}

GrothendieckTopology induced_topology(const FibredSite& fs, const GrothendieckTopology& base) {
    if (!same_category(base.site, fs.fibres->site())) {
        throw InputError("induced_topology: topology is on a different site");
    }
    const auto& a = *fs.fibres;
    bool groupoids = true;
    for (const auto& v : a.values()) groupoids = groupoids && as_groupoid(v).has_value();
    GrothendieckTopology t{fs.total, std::vector<std::set<Sieve>>(fs.total->object_count())};
    for (Index s = 0; s < a.section_count(); ++s) {
        const Index u = a.section_base(s);
        std::vector<Sieve> literal;
        for (const auto& cover : base.covers[u]) literal.push_back(inverse_image(fs, cover, a.section_object(s)));
        if (groupoids) {
            t.covers[s].insert(literal.begin(), literal.end());
            continue;
        }
        // With non-invertible fibre arrows the π⁻¹S are not closed upwards; close them.
        for (auto& r : enumerate_sieves(*fs.total, s, SiteLimits::total())) {
            for (const auto& l : literal) {
                if (l.members.is_subset_of(r.members)) {
                    t.covers[s].insert(std::move(r));
                    break;
                }
            }
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Enriched diagrams

namespace {

void check_site_actions(const PresheafOfCategories& a, const std::vector<std::size_t>& sizes,
                        const std::vector<std::vector<std::vector<Index>>>& site_action, ValidationReport& r) {
    const auto& c = *a.site();
    if (sizes.size() != a.section_count()) {
        r.add("shape: expected one set per section");
        return;
    }
    if (site_action.size() != c.morphism_count()) {
        r.add("shape: expected one site action per morphism of the site");
        return;
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        if (site_action[alpha].size() != a.value(u).object_count()) {
            r.add("shape: site action of " + c.morphism_name(alpha) + " has the wrong number of sections");
            return;
        }
        for (Index x = 0; x < a.value(u).object_count(); ++x) {
            const Index to = a.section(v, a.along(alpha).object_map[x]);
            if (!valid_map(site_action[alpha][x], sizes[a.section(u, x)], sizes[to])) {
                r.add("shape: site action of " + c.morphism_name(alpha) + " is not a map");
                return;
            }
        }
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& act = site_action[c.identity(u)];
        for (Index x = 0; x < act.size(); ++x) {
            for (Index e = 0; e < act[x].size(); ++e) {
                if (act[x][e] != e) {
                    r.add("site action: id_" + c.object_name(u) + " does not act as the identity");
                    x = act.size() - 1;
                    break;
                }
            }
        }
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        for (Index beta : c.morphisms_into(c.source(alpha))) {
            const Index ab = c.compose(alpha, beta);
            bool ok = true;
            for (Index x = 0; x < site_action[alpha].size() && ok; ++x) {
                const Index ax = a.along(alpha).object_map[x];
                for (Index e = 0; e < site_action[alpha][x].size(); ++e) {
                    if (site_action[ab][x][e] != site_action[beta][ax][site_action[alpha][x][e]]) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                r.add("site action: " + c.morphism_name(alpha) + "∘" + c.morphism_name(beta) +
                      " does not act as the composite");
            }
        }
    }
}

}  // namespace

ValidationReport validate_object_diagram(const ObjectDiagram& x) {
    ValidationReport r;
    check_site_actions(*x.base, x.sizes, x.site_action, r);
    return r;
}

ValidationReport validate_enriched_diagram(const EnrichedSetDiagram& x) {
    ValidationReport r;
    const auto& a = *x.base;
    const auto& c = *a.site();
    check_site_actions(a, x.sizes, x.site_action, r);
    if (!r.ok()) return r;
    if (x.category_action.size() != c.object_count()) {
        r.add("shape: expected one category action per object of the site");
        return r;
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        const auto& act = x.category_action[u];
        if (act.size() != k.morphism_count()) {
            r.add("shape: category action at " + c.object_name(u) + " has the wrong number of morphisms");
            return r;
        }
        for (Index g = 0; g < k.morphism_count(); ++g) {
            if (!valid_map(act[g], x.sizes[a.section(u, k.target(g))], x.sizes[a.section(u, k.source(g))])) {
                r.add("shape: category action of " + k.morphism_name(g) + " is not a map");
                return r;
            }
        }
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        const auto& act = x.category_action[u];
        for (Index o = 0; o < k.object_count(); ++o) {
            const auto& id = act[k.identity(o)];
            for (Index e = 0; e < id.size(); ++e) {
                if (id[e] != e) {
                    r.add("category action: " + k.morphism_name(k.identity(o)) + " does not act as the identity");
                    break;
                }
            }
        }
        for (Index g = 0; g < k.morphism_count(); ++g) {
            for (Index d = 0; d < k.morphism_count(); ++d) {
                const Index dg = k.compose(d, g);
                if (dg == npos) continue;
                for (Index e = 0; e < act[d].size(); ++e) {
                    if (act[dg][e] != act[g][act[d][e]]) {
                        r.add("category action: " + k.morphism_name(d) + "∘" + k.morphism_name(g) +
                              " does not act as the composite");
                        break;
                    }
                }
            }
        }
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        const auto& k = a.value(u);
        const auto& res = a.along(alpha);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            // value(U, y) -> value(V, α*x) both ways round the square
            const auto& across_u = x.category_action[u][g];
            const auto& down_x = x.site_action[alpha][k.source(g)];
            const auto& down_y = x.site_action[alpha][k.target(g)];
            const auto& across_v = x.category_action[v][res.morphism_map[g]];
            for (Index e = 0; e < across_u.size(); ++e) {
                if (down_x[across_u[e]] != across_v[down_y[e]]) {
                    r.add("square: " + c.morphism_name(alpha) + " and " + k.morphism_name(g) + " do not commute");
                    break;
                }
            }
        }
    }
    return r;
}

namespace {

bool map_commutes(const std::vector<Index>& f_from, const std::vector<Index>& act_to, const std::vector<Index>& act_from,
                  const std::vector<Index>& f_to) {
    // f_from ∘ act_from == act_to ∘ f_to
    for (Index e = 0; e < act_from.size(); ++e) {
        if (f_from[act_from[e]] != act_to[f_to[e]]) return false;
    }
    return true;
}

bool shapes_match(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to, const DiagramMap& f) {
    if (f.size() != from.size() || to.size() != from.size()) return false;
    for (Index s = 0; s < f.size(); ++s) {
        if (!valid_map(f[s], from[s], to[s])) return false;
    }
    return true;
}

bool site_actions_commute(const PresheafOfCategories& a, const std::vector<std::vector<std::vector<Index>>>& from,
                          const std::vector<std::vector<std::vector<Index>>>& to, const DiagramMap& f) {
    const auto& c = *a.site();
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        for (Index x = 0; x < a.value(u).object_count(); ++x) {
            const Index sx = a.section(u, x);
            const Index sv = a.section(v, a.along(alpha).object_map[x]);
            if (!map_commutes(f[sv], to[alpha][x], from[alpha][x], f[sx])) return false;
        }
    }
    return true;
}

}  // namespace

bool is_diagram_map(const ObjectDiagram& from, const ObjectDiagram& to, const DiagramMap& f) {
    return shapes_match(from.sizes, to.sizes, f) && site_actions_commute(*from.base, from.site_action, to.site_action, f);
}

bool is_diagram_map(const EnrichedSetDiagram& from, const EnrichedSetDiagram& to, const DiagramMap& f) {
    if (!shapes_match(from.sizes, to.sizes, f)) return false;
    const auto& a = *from.base;
    if (!site_actions_commute(a, from.site_action, to.site_action, f)) return false;
    for (Index u = 0; u < a.site()->object_count(); ++u) {
        const auto& k = a.value(u);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            const auto& fs = f[a.section(u, k.source(g))];
            const auto& ft = f[a.section(u, k.target(g))];
            if (!map_commutes(fs, to.category_action[u][g], from.category_action[u][g], ft)) return false;
        }
    }
    return true;
}

DiagramMap compose(const DiagramMap& g, const DiagramMap& f) {
    DiagramMap out(f.size());
    for (Index s = 0; s < f.size(); ++s) {
        for (Index e : f[s]) out[s].push_back(g.at(s).at(e));
    }
    return out;
}

bool is_identity(const DiagramMap& f) {
    for (const auto& m : f) {
        for (Index e = 0; e < m.size(); ++e) {
            if (m[e] != e) return false;
        }
    }
    return true;
}

EnrichedSetDiagram constant_point(const PresheafOfCategoriesRef& a) {
    const auto& c = *a->site();
    EnrichedSetDiagram x{a, std::vector<std::size_t>(a->section_count(), 1), {}, {}};
    for (Index u = 0; u < c.object_count(); ++u) {
        x.category_action.emplace_back(a->value(u).morphism_count(), std::vector<Index>{0});
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        x.site_action.emplace_back(a->value(c.target(alpha)).object_count(), std::vector<Index>{0});
    }
    return x;
}

EnrichedSetDiagram to_enriched(const FibredSite& fs, const Presheaf& f) {
    if (!same_category(f.base, fs.total) || f.variance != Variance::contravariant) {
        throw InputError("to_enriched: expected a presheaf on the total category");
    }
    const auto& a = *fs.fibres;
    const auto& c = *a.site();
    EnrichedSetDiagram x{fs.fibres, f.sizes, {}, {}};
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        std::vector<std::vector<Index>> act;
        // (1, γ): (U, source γ) -> (U, target γ)
        for (Index g = 0; g < k.morphism_count(); ++g) act.push_back(f.action[fs.morphism(c.identity(u), k.target(g), g)]);
        x.category_action.push_back(std::move(act));
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& k = a.value(c.target(alpha));
        const auto& kv = a.value(c.source(alpha));
        std::vector<std::vector<Index>> act;
        // (α, 1): (V, α*x) -> (U, x)
        for (Index o = 0; o < k.object_count(); ++o) {
            act.push_back(f.action[fs.morphism(alpha, o, kv.identity(a.along(alpha).object_map[o]))]);
        }
        x.site_action.push_back(std::move(act));
    }
    return x;
}

Presheaf to_presheaf(const FibredSite& fs, const EnrichedSetDiagram& x) {
    const auto r = validate_enriched_diagram(x);
    if (!r.ok()) throw_report("to_presheaf", r);
    const auto& c = *fs.fibres->site();
    Presheaf f{fs.total, Variance::contravariant, x.sizes, {}, {}};
    for (Index k = 0; k < fs.total->morphism_count(); ++k) {
        const Index alpha = fs.morphism_base[k];
        const auto& down = x.site_action[alpha][fs.morphism_target[k]];
        const auto& across = x.category_action[c.source(alpha)][fs.morphism_fibre[k]];
        std::vector<Index> act;
        for (Index e : down) act.push_back(across[e]);
        f.action.push_back(std::move(act));
    }
    return f;
}

// ---------------------------------------------------------------------------
// ψ⁎ and ψ*

ObjectDiagram object_restriction(const EnrichedSetDiagram& x) {
    return ObjectDiagram{x.base, x.sizes, x.site_action};
}

namespace {

/// Position of (γ, s) in ψ*x0 at the section (U, source γ) is start[U][γ] + s.
std::vector<std::vector<Index>> psi_layout(const ObjectDiagram& x0, std::vector<std::size_t>& sizes) {
    const auto& a = *x0.base;
    const auto& c = *a.site();
    sizes.assign(a.section_count(), 0);
    std::vector<std::vector<Index>> start(c.object_count());
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            auto& slot = sizes[a.section(u, k.source(g))];
            start[u].push_back(slot);
            slot += x0.sizes[a.section(u, k.target(g))];
        }
    }
    return start;
}

}  // namespace

EnrichedSetDiagram psi_left_adjoint(const ObjectDiagram& x0) {
    const auto& a = *x0.base;
    const auto& c = *a.site();
    EnrichedSetDiagram out{x0.base, {}, {}, {}};
    const auto start = psi_layout(x0, out.sizes);
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        std::vector<std::vector<Index>> act(k.morphism_count());
        for (Index d = 0; d < k.morphism_count(); ++d) {
            // δ: c -> b sends (γ, s) at b to (γδ, s) at c
            act[d].resize(out.sizes[a.section(u, k.target(d))], npos);
            for (Index g = 0; g < k.morphism_count(); ++g) {
                if (k.source(g) != k.target(d)) continue;
                const Index gd = k.compose(g, d);
                for (Index s = 0; s < x0.sizes[a.section(u, k.target(g))]; ++s) act[d][start[u][g] + s] = start[u][gd] + s;
            }
        }
        out.category_action.push_back(std::move(act));
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        const auto& k = a.value(u);
        const auto& res = a.along(alpha);
        std::vector<std::vector<Index>> act(k.object_count());
        for (Index b = 0; b < k.object_count(); ++b) act[b].resize(out.sizes[a.section(u, b)], npos);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            const Index ag = res.morphism_map[g];
            const auto& down = x0.site_action[alpha][k.target(g)];
            for (Index s = 0; s < down.size(); ++s) act[k.source(g)][start[u][g] + s] = start[v][ag] + down[s];
        }
        out.site_action.push_back(std::move(act));
    }
    return out;
}

DiagramMap psi_left_adjoint(const ObjectDiagram& x0, const ObjectDiagram& y0, const DiagramMap& f) {
    const auto& a = *x0.base;
    const auto& c = *a.site();
    std::vector<std::size_t> xs, ys;
    const auto sx = psi_layout(x0, xs);
    const auto sy = psi_layout(y0, ys);
    DiagramMap out(a.section_count());
    for (Index s = 0; s < out.size(); ++s) out[s].resize(xs[s], npos);
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            const auto& fg = f[a.section(u, k.target(g))];
            for (Index s = 0; s < fg.size(); ++s) out[a.section(u, k.source(g))][sx[u][g] + s] = sy[u][g] + fg[s];
        }
    }
    return out;
}

DiagramMap psi_unit(const ObjectDiagram& x0) {
    const auto& a = *x0.base;
    std::vector<std::size_t> sizes;
    const auto start = psi_layout(x0, sizes);
    DiagramMap out(a.section_count());
    for (Index s = 0; s < out.size(); ++s) {
        const Index u = a.section_base(s);
        const Index id = a.value(u).identity(a.section_object(s));
        for (Index e = 0; e < x0.sizes[s]; ++e) out[s].push_back(start[u][id] + e);
    }
    return out;
}

DiagramMap psi_counit(const EnrichedSetDiagram& x) {
    const auto& a = *x.base;
    const auto& c = *a.site();
    const auto x0 = object_restriction(x);
    std::vector<std::size_t> sizes;
    const auto start = psi_layout(x0, sizes);
    DiagramMap out(a.section_count());
    for (Index s = 0; s < out.size(); ++s) out[s].resize(sizes[s], npos);
    for (Index u = 0; u < c.object_count(); ++u) {
        const auto& k = a.value(u);
        for (Index g = 0; g < k.morphism_count(); ++g) {
            const auto& act = x.category_action[u][g];
            for (Index s = 0; s < act.size(); ++s) out[a.section(u, k.source(g))][start[u][g] + s] = act[s];
        }
    }
    return out;
}

TriangleCheck psi_triangles(const ObjectDiagram& x0, const EnrichedSetDiagram& x) {
    TriangleCheck t;
    {
        const auto fx = psi_left_adjoint(x0);
        const auto eta = psi_unit(x0);
        const auto inner = object_restriction(fx);
        const auto f_eta = psi_left_adjoint(x0, inner, eta);
        const auto eps = psi_counit(fx);
        t.left = is_diagram_map(x0, inner, eta) && is_diagram_map(psi_left_adjoint(inner), fx, eps) &&
                 is_identity(compose(eps, f_eta));
    }
    {
        const auto gx = object_restriction(x);
        const auto eta = psi_unit(gx);
        const auto eps = psi_counit(x);
        t.right = is_diagram_map(psi_left_adjoint(gx), x, eps) && is_identity(compose(eps, eta));
    }
    return t;
}

ValidationReport validate_presheaf_over(const PresheafOver& y) {
    ValidationReport r;
    r.merge(validate_set_functor(y.total), "total: ");
    r.merge(validate_set_functor(y.base), "base: ");
    if (!r.ok()) return r;
    const auto& c = *y.base.base;
    if (!same_category(y.total.base, y.base.base) || y.structure.size() != c.object_count()) {
        r.add("structure: presheaves on different sites");
        return r;
    }
    for (Index u = 0; u < c.object_count(); ++u) {
        if (!valid_map(y.structure[u], y.total.sizes[u], y.base.sizes[u])) {
            r.add("structure: not a map at " + c.object_name(u));
            return r;
        }
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& sv = y.structure[c.source(alpha)];
        const auto& su = y.structure[c.target(alpha)];
        if (!map_commutes(sv, y.base.action[alpha], y.total.action[alpha], su)) {
            r.add("structure: not natural at " + c.morphism_name(alpha));
        }
    }
    return r;
}

PresheafOver over_form(const ObjectDiagram& x) {
    const auto& a = *x.base;
    const auto& c = *a.site();
    PresheafOver out{Presheaf{a.site(), Variance::contravariant, std::vector<std::size_t>(c.object_count(), 0), {}, {}},
                     object_presheaf(a), std::vector<std::vector<Index>>(c.object_count())};
    std::vector<Index> inner(a.section_count());
    for (Index s = 0; s < a.section_count(); ++s) {
        const Index u = a.section_base(s);
        inner[s] = out.total.sizes[u];
        out.total.sizes[u] += x.sizes[s];
        out.structure[u].insert(out.structure[u].end(), x.sizes[s], a.section_object(s));
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        std::vector<Index> act;
        for (Index o = 0; o < a.value(u).object_count(); ++o) {
            const Index to = a.section(v, a.along(alpha).object_map[o]);
            for (Index e : x.site_action[alpha][o]) act.push_back(inner[to] + e);
        }
        out.total.action.push_back(std::move(act));
    }
    return out;
}

ObjectDiagram from_over_form(const PresheafOfCategoriesRef& a, const PresheafOver& y) {
    const auto r = validate_presheaf_over(y);
    if (!r.ok()) throw_report("from_over_form", r);
    const auto ob = object_presheaf(*a);
    if (!same_category(y.base.base, a->site()) || y.base.sizes != ob.sizes || y.base.action != ob.action) {
        throw InputError("from_over_form: base is not Ob(A)");
    }
    const auto& c = *a->site();
    ObjectDiagram x{a, std::vector<std::size_t>(a->section_count(), 0), {}};
    std::vector<std::vector<Index>> pos(c.object_count());  // element -> index within its fibre
    for (Index u = 0; u < c.object_count(); ++u) {
        for (Index e = 0; e < y.total.sizes[u]; ++e) pos[u].push_back(x.sizes[a->section(u, y.structure[u][e])]++);
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        std::vector<std::vector<Index>> act(a->value(u).object_count());
        for (Index e = 0; e < y.total.sizes[u]; ++e) act[y.structure[u][e]].push_back(pos[v][y.total.action[alpha][e]]);
        x.site_action.push_back(std::move(act));
    }
    return x;
}

// ---------------------------------------------------------------------------
// Restriction and left Kan extension

ObjectDiagram restrict_objects(const MorphismOfPresheavesOfCategories& m, const ObjectDiagram& x) {
    const auto& a = *m.domain;
    const auto& c = *a.site();
    ObjectDiagram out{m.domain, {}, {}};
    for (Index s = 0; s < a.section_count(); ++s) out.sizes.push_back(x.sizes[m.on_section(s)]);
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const auto& mu = m.components[c.target(alpha)];
        std::vector<std::vector<Index>> act;
        for (Index o = 0; o < mu.object_map.size(); ++o) act.push_back(x.site_action[alpha][mu.object_map[o]]);
        out.site_action.push_back(std::move(act));
    }
    return out;
}

EnrichedSetDiagram restrict_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& x) {
    const auto obj = restrict_objects(m, object_restriction(x));
    EnrichedSetDiagram out{m.domain, obj.sizes, {}, obj.site_action};
    for (Index u = 0; u < m.components.size(); ++u) {
        std::vector<std::vector<Index>> act;
        for (Index g : m.components[u].morphism_map) act.push_back(x.category_action[u][g]);
        out.category_action.push_back(std::move(act));
    }
    return out;
}

namespace {

/// Per section of the site: y(U) as a covariant functor on A(U)^op, extended along m(U)^op.
std::vector<KanExtension> kan_data(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y) {
    const auto& a = *m.domain;
    const auto& b = *m.codomain;
    std::vector<KanExtension> out;
    for (Index u = 0; u < a.site()->object_count(); ++u) {
        auto aop = share(opposite(a.value(u)));
        auto bop = share(opposite(b.value(u)));
        SetValuedFunctor f{aop, Variance::covariant, {}, y.category_action[u], {}};
        for (Index o = 0; o < aop->object_count(); ++o) f.sizes.push_back(y.sizes[a.section(u, o)]);
        out.push_back(left_kan_extension(opposite(m.components[u], aop, bop), f));
    }
    return out;
}

DiagramMap restrict_map(const MorphismOfPresheavesOfCategories& m, const DiagramMap& g) {
    DiagramMap out;
    for (Index s = 0; s < m.domain->section_count(); ++s) out.push_back(g[m.on_section(s)]);
    return out;
}

}  // namespace

EnrichedSetDiagram left_kan_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y) {
    const auto& a = *m.domain;
    const auto& b = *m.codomain;
    const auto& c = *a.site();
    const auto kd = kan_data(m, y);
    EnrichedSetDiagram out{m.codomain, std::vector<std::size_t>(b.section_count()), {}, {}};
    for (Index u = 0; u < c.object_count(); ++u) {
        for (Index o = 0; o < b.value(u).object_count(); ++o) out.sizes[b.section(u, o)] = kd[u].functor.sizes[o];
        out.category_action.push_back(kd[u].functor.action);
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Index u = c.target(alpha);
        const Index v = c.source(alpha);
        const auto& ra = a.along(alpha);
        const auto& rb = b.along(alpha);
        std::vector<std::vector<Index>> act;
        for (Index o = 0; o < b.value(u).object_count(); ++o) {
            std::vector<Index> to(kd[u].functor.sizes[o], npos);
            const auto& comma = kd[u].commas[o];
            for (Index p = 0; p < comma.object_source.size(); ++p) {
                const Index x = comma.object_source[p];
                const Index h = comma.object_arrow[p];
                const auto& down = y.site_action[alpha][x];
                for (Index e = 0; e < down.size(); ++e) {
                    to[kd[u].colimits[o].cocone[p][e]] =
                        kd[v].element(rb.object_map[o], ra.object_map[x], rb.morphism_map[h], down[e]);
                }
            }
            act.push_back(std::move(to));
        }
        out.site_action.push_back(std::move(act));
    }
    return out;
}

DiagramMap kan_unit(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y) {
    const auto& a = *m.domain;
    const auto& b = *m.codomain;
    const auto kd = kan_data(m, y);
    DiagramMap out(a.section_count());
    for (Index s = 0; s < a.section_count(); ++s) {
        const Index u = a.section_base(s);
        const Index x = a.section_object(s);
        const Index mx = m.components[u].object_map[x];
        for (Index e = 0; e < y.sizes[s]; ++e) out[s].push_back(kd[u].element(mx, x, b.value(u).identity(mx), e));
    }
    return out;
}

DiagramMap kan_counit(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& x) {
    const auto& b = *m.codomain;
    const auto kd = kan_data(m, restrict_along(m, x));
    DiagramMap out(b.section_count());
    for (Index s = 0; s < b.section_count(); ++s) {
        const Index u = b.section_base(s);
        const Index o = b.section_object(s);
        out[s].assign(kd[u].functor.sizes[o], npos);
        const auto& comma = kd[u].commas[o];
        for (Index p = 0; p < comma.object_source.size(); ++p) {
            const Index h = comma.object_arrow[p];  // o -> m(a) in B(U)
            const auto& act = x.category_action[u][h];
            for (Index e = 0; e < act.size(); ++e) out[s][kd[u].colimits[o].cocone[p][e]] = act[e];
        }
    }
    return out;
}

DiagramMap left_kan_along(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y,
                          const EnrichedSetDiagram& y2, const DiagramMap& f) {
    const auto& a = *m.domain;
    const auto& b = *m.codomain;
    const auto k1 = kan_data(m, y);
    const auto k2 = kan_data(m, y2);
    DiagramMap out(b.section_count());
    for (Index s = 0; s < b.section_count(); ++s) {
        const Index u = b.section_base(s);
        const Index o = b.section_object(s);
        out[s].assign(k1[u].functor.sizes[o], npos);
        const auto& comma = k1[u].commas[o];
        for (Index p = 0; p < comma.object_source.size(); ++p) {
            const Index x = comma.object_source[p];
            const auto& fx = f[a.section(u, x)];
            for (Index e = 0; e < fx.size(); ++e) {
                out[s][k1[u].colimits[o].cocone[p][e]] = k2[u].element(o, x, comma.object_arrow[p], fx[e]);
            }
        }
    }
    return out;
}

TriangleCheck kan_triangles(const MorphismOfPresheavesOfCategories& m, const EnrichedSetDiagram& y,
                            const EnrichedSetDiagram& x) {
    TriangleCheck t;
    {
        const auto ly = left_kan_along(m, y);
        const auto ry = restrict_along(m, ly);
        const auto eta = kan_unit(m, y);
        const auto l_eta = left_kan_along(m, y, ry, eta);
        const auto eps = kan_counit(m, ly);
        t.left = is_diagram_map(y, ry, eta) && is_diagram_map(left_kan_along(m, ry), ly, eps) &&
                 is_identity(compose(eps, l_eta));
    }
    {
        const auto rx = restrict_along(m, x);
        const auto eta = kan_unit(m, rx);
        const auto eps = kan_counit(m, x);
        t.right = is_diagram_map(left_kan_along(m, rx), x, eps) && is_identity(compose(restrict_map(m, eps), eta));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Sites C/X

Presheaf over_to_fibred(const FibredSite& cx, const PresheafOver& y) {
    const auto x = from_over_form(cx.fibres, y);
    const auto& a = *cx.fibres;
    EnrichedSetDiagram e{cx.fibres, x.sizes, {}, x.site_action};
    for (Index u = 0; u < a.site()->object_count(); ++u) {
        const auto& k = a.value(u);
        std::vector<std::vector<Index>> act;
        for (Index g = 0; g < k.morphism_count(); ++g) {
            if (!k.is_identity(g)) throw InputError("over_to_fibred: fibres are not discrete");
            std::vector<Index> id(x.sizes[a.section(u, k.source(g))]);
            for (Index i = 0; i < id.size(); ++i) id[i] = i;
            act.push_back(std::move(id));
        }
        e.category_action.push_back(std::move(act));
    }
    return to_presheaf(cx, e);
}

PresheafOver fibred_to_over(const FibredSite& cx, const Presheaf& f) {
    return over_form(object_restriction(to_enriched(cx, f)));
}

PresheafOver pullback_along_section(const PresheafOver& y, Index u, Index x) {
    const auto r = validate_presheaf_over(y);
    if (!r.ok()) throw_report("pullback_along_section", r);
    const auto& site = y.base.base;
    const auto& c = *site;
    if (u >= c.object_count() || x >= y.base.sizes[u]) throw InputError("pullback_along_section: no such section");
    PresheafOver out{Presheaf{site, Variance::contravariant, {}, {}, {}}, representable(site, u),
                     std::vector<std::vector<Index>>(c.object_count())};
    // (α, e) with e over α*x; position lookup per object
    std::vector<std::map<std::pair<Index, Index>, Index>> pos(c.object_count());
    for (Index v = 0; v < c.object_count(); ++v) {
        const auto hom = c.hom(v, u);
        std::size_t count = 0;
        for (Index k = 0; k < hom.size(); ++k) {
            const Index ax = y.base.action[hom[k]][x];
            for (Index e = 0; e < y.total.sizes[v]; ++e) {
                if (y.structure[v][e] != ax) continue;
                pos[v][{hom[k], e}] = count++;
                out.structure[v].push_back(k);
            }
        }
        out.total.sizes.push_back(count);
    }
    for (Index beta = 0; beta < c.morphism_count(); ++beta) {
        const Index v = c.target(beta);
        const Index w = c.source(beta);
        std::vector<Index> act(out.total.sizes[v]);
        for (const auto& [key, p] : pos[v]) {
            act[p] = pos[w].at({c.compose(key.first, beta), y.total.action[beta][key.second]});
        }
        out.total.action.push_back(std::move(act));
    }
    return out;
}

}  // namespace fibsite
