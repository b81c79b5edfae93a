#include "fibsite/hocopb.hpp"

#include <string>

namespace fibsite {

namespace {

std::string str(std::size_t v) { return std::to_string(v); }

Key drop_last(const Key& k) { return Key(k.begin(), k.end() - 1); }

/// A string [a0, m1, ..., mn] pushed forward along a functor.
Key map_string(const Functor& f, const Key& k) {
    Key out(k.size());
    out[0] = f.on_object(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) out[i] = f.on_morphism(k[i]);
    return out;
}

bool same_values(const SimplicialMap& a, const SimplicialMap& b) { return a.map == b.map; }

void check_map_ends(ValidationReport& r, const std::string& what, const SimplicialMap& f, const SSetRef& from,
                    const SSetRef& to) {
    if (f.domain != from || f.codomain != to) {
        r.add(what + ": wrong domain or codomain");
        return;
    }
    for (const auto& v : validate_simplicial_map(f).violations) r.add(what + ": " + v);
}

/// ε from pb(h) into a, with h = hocolim a.
SimplicialMap counit_component(const GroupoidDiagram& a, const OverNerve& h, const GroupoidDiagram& pbh, Index y) {
    const auto& dom = *pbh.values[y];
    SimplicialMap m{pbh.values[y], a.values[y], std::vector<std::vector<Index>>(dom.dim() + 1)};
    for (std::size_t n = 0; n <= dom.dim(); ++n) {
        m.map[n].reserve(dom.count(n));
        for (Index e = 0; e < dom.count(n); ++e) {
            const Key& k = dom.key(n, e);
            const Key& w = h.total->key(n, k[0]);
            m.map[n].push_back(a.action[k[1]](n, w.back()));
        }
    }
    return m;
}

}  // namespace

std::size_t GroupoidDiagram::dim() const { return values.empty() ? 0 : values.front()->dim(); }

ValidationReport validate_groupoid_diagram(const GroupoidDiagram& a) {
    ValidationReport r;
    for (const auto& v : validate_groupoid(a.base).violations) r.add("base: " + v);
    if (!r.ok()) return r;
    const auto& g = a.base.cat();
    if (a.values.size() != g.object_count() || a.action.size() != g.morphism_count()) {
        r.add("shape: expected a value per object and an action per morphism");
        return r;
    }
    for (Index y = 0; y < a.values.size(); ++y) {
        if (!a.values[y]) {
            r.add("shape: missing value at " + g.object_name(y));
            return r;
        }
        if (a.values[y]->dim() != a.dim()) r.add("shape: truncation differs at " + g.object_name(y));
    }
    if (!r.ok()) return r;
    for (Index m = 0; m < g.morphism_count(); ++m) {
        check_map_ends(r, "action " + g.morphism_name(m), a.action[m], a.values[g.source(m)], a.values[g.target(m)]);
    }
    if (!r.ok()) return r;
    for (Index y = 0; y < g.object_count(); ++y) {
        if (!is_identity(a.action[g.identity(y)])) r.add("identity: action of " + g.morphism_name(g.identity(y)));
    }
    for (Index f = 0; f < g.morphism_count(); ++f) {
        for (Index h = 0; h < g.morphism_count(); ++h) {
            const Index hf = g.compose(h, f);
            if (hf == npos) continue;
            if (!same_values(a.action[hf], compose(a.action[h], a.action[f]))) {
                r.add("composition: " + g.morphism_name(h) + " after " + g.morphism_name(f));
            }
        }
    }
    return r;
}

std::vector<Index> OverNerve::fibre(std::size_t n, Index sigma) const {
    std::vector<Index> out;
    for (Index x = 0; x < total->count(n); ++x) {
        if (structure(n, x) == sigma) out.push_back(x);
    }
    return out;
}

ValidationReport validate_over_nerve(const OverNerve& x) {
    ValidationReport r;
    if (!x.base || !x.total || !x.structure.domain || !x.structure.codomain) {
        r.add("shape: incomplete object over a nerve");
        return r;
    }
    if (x.structure.domain != x.total) r.add("structure: domain is not the total simplicial set");
    for (const auto& v : validate_simplicial_map(x.structure).violations) r.add("structure: " + v);
    if (!r.ok()) return r;
    const auto expected = nerve(*x.base, x.total->dim());
    const auto& n = x.nerve();
    for (std::size_t d = 0; d <= expected.dim(); ++d) {
        if (n.count(d) != expected.count(d)) {
            r.add("structure: codomain is not the nerve of the base in degree " + str(d));
            continue;
        }
        for (Index s = 0; s < n.count(d); ++s) {
            if (!expected.find(d, n.key(d, s))) {
                r.add("structure: codomain simplex is not a string of the base in degree " + str(d));
                break;
            }
        }
    }
    return r;
}

OverNerve nerve_over_itself(const CategoryRef& g, std::size_t dim) {
    auto n = nerve_ref(*g, dim);
    return {g, n, identity_map(n)};
}

bool is_natural(const GroupoidDiagram& from, const GroupoidDiagram& to, const DiagramSSetMap& f) {
    const auto& g = from.base.cat();
    if (f.size() != g.object_count()) return false;
    for (Index m = 0; m < g.morphism_count(); ++m) {
        if (!same_values(compose(f[g.target(m)], from.action[m]), compose(to.action[m], f[g.source(m)]))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

OverNerve hocolim(const GroupoidDiagram& a, std::size_t d) {
    if (!a.values.empty() && a.dim() < d) throw InputError("hocolim: values are truncated at " + str(a.dim()) + ", below " + str(d));
    const auto nv = nerve_ref(a.base.cat(), d);
    const auto& nn = *nv;
    std::vector<std::vector<Key>> simplices(d + 1);
    for (std::size_t n = 0; n <= d; ++n) {
        for (Index s = 0; s < nn.count(n); ++s) {
            const Key& sigma = nn.key(n, s);
            const std::size_t size = a.values[sigma[0]]->count(n);
            for (Index e = 0; e < size; ++e) {
                Key k = sigma;
                k.push_back(e);
                simplices[n].push_back(std::move(k));
            }
        }
    }
    auto face = [&](std::size_t n, std::size_t i, const Key& k) {
        Key out = nn.key(n - 1, nn.d(n, i, nn.at(n, drop_last(k))));
        Index e = a.values[k[0]]->d(n, i, k.back());
        if (i == 0) e = a.action[k[1]](n - 1, e);
        out.push_back(e);
        return out;
    };
    auto degeneracy = [&](std::size_t n, std::size_t i, const Key& k) {
        Key out = nn.key(n + 1, nn.s(n, i, nn.at(n, drop_last(k))));
        out.push_back(a.values[k[0]]->s(n, i, k.back()));
        return out;
    };
    auto total = share(TruncatedSimplicialSet(d, std::move(simplices), face, degeneracy));
    auto structure = map_from_keys(total, nv, [](std::size_t, const Key& k) { return drop_last(k); });
    return {a.base.category, total, std::move(structure)};
}

BisimplicialSet simplicial_replacement(const GroupoidDiagram& a, std::size_t d) {
    if (!a.values.empty() && a.dim() < d) throw InputError("simplicial_replacement: values truncated below " + str(d));
    const auto nn = nerve(a.base.cat(), d);
    std::vector<std::vector<std::vector<Key>>> cells(d + 1, std::vector<std::vector<Key>>(d + 1));
    for (std::size_t m = 0; m <= d; ++m) {
        for (Index s = 0; s < nn.count(m); ++s) {
            const Key& sigma = nn.key(m, s);
            for (std::size_t n = 0; n <= d; ++n) {
                for (Index e = 0; e < a.values[sigma[0]]->count(n); ++e) {
                    Key k = sigma;
                    k.push_back(e);
                    cells[m][n].push_back(std::move(k));
                }
            }
        }
    }
    auto hface = [&](std::size_t m, std::size_t n, std::size_t i, const Key& k) {
        Key out = nn.key(m - 1, nn.d(m, i, nn.at(m, drop_last(k))));
        out.push_back(i == 0 ? a.action[k[1]](n, k.back()) : k.back());
        return out;
    };
    auto vface = [&](std::size_t, std::size_t n, std::size_t i, const Key& k) {
        Key out = k;
        out.back() = a.values[k[0]]->d(n, i, k.back());
        return out;
    };
    auto hdegen = [&](std::size_t m, std::size_t, std::size_t i, const Key& k) {
        Key out = nn.key(m + 1, nn.s(m, i, nn.at(m, drop_last(k))));
        out.push_back(k.back());
        return out;
    };
    auto vdegen = [&](std::size_t, std::size_t n, std::size_t i, const Key& k) {
        Key out = k;
        out.back() = a.values[k[0]]->s(n, i, k.back());
        return out;
    };
    return BisimplicialSet(d, std::move(cells), hface, vface, hdegen, vdegen);
}

SimplicialMap hocolim_map(const DiagramSSetMap& f, const OverNerve& from, const OverNerve& to) {
    return map_from_keys(from.total, to.total, [&](std::size_t n, const Key& k) {
        Key out = k;
        out.back() = f.at(k[0])(n, k.back());
        return out;
    });
}

GroupoidDiagram pb(const OverNerve& x) {
    auto g = as_groupoid(x.base);
    if (!g) throw InputError("pb: the base category is not a groupoid");
    const auto& c = *x.base;
    const auto& xs = *x.total;
    const auto& nn = x.nerve();
    const std::size_t dim = xs.dim();
    auto first = [&](std::size_t n, Index e) { return nn.key(n, x.structure(n, e))[0]; };

    GroupoidDiagram out{*g, {}, {}};
    for (Index y = 0; y < c.object_count(); ++y) {
        std::vector<std::vector<Key>> simplices(dim + 1);
        for (std::size_t n = 0; n <= dim; ++n) {
            for (Index e = 0; e < xs.count(n); ++e) {
                for (Index gamma : c.hom(first(n, e), y)) simplices[n].push_back({e, gamma});
            }
        }
        auto face = [&](std::size_t n, std::size_t i, const Key& k) {
            Index gamma = k[1];
            if (i == 0) gamma = c.compose(gamma, g->inverse[nn.key(n, x.structure(n, k[0]))[1]]);
            return Key{xs.d(n, i, k[0]), gamma};
        };
        auto degeneracy = [&](std::size_t n, std::size_t i, const Key& k) { return Key{xs.s(n, i, k[0]), k[1]}; };
        out.values.push_back(share(TruncatedSimplicialSet(dim, std::move(simplices), face, degeneracy)));
    }
    for (Index m = 0; m < c.morphism_count(); ++m) {
        out.action.push_back(map_from_keys(out.values[c.source(m)], out.values[c.target(m)],
                                           [&](std::size_t, const Key& k) { return Key{k[0], c.compose(m, k[1])}; }));
    }
    return out;
}

Index pb_simplex_from_last_vertex(const OverNerve& x, const GroupoidDiagram& pbx, Index y, std::size_t n, Index simplex,
                                  Index alpha) {
    const auto& c = *x.base;
    const Key& sigma = x.nerve().key(n, x.structure(n, simplex));
    Index gamma = alpha;
    for (std::size_t i = n; i >= 1; --i) gamma = c.compose_checked(gamma, sigma[i]);
    return pbx.values.at(y)->at(n, {simplex, gamma});
}

DiagramSSetMap pb_map(const SimplicialMap& h, const GroupoidDiagram& from, const GroupoidDiagram& to) {
    DiagramSSetMap out;
    for (Index y = 0; y < from.values.size(); ++y) {
        out.push_back(map_from_keys(from.values[y], to.values[y],
                                    [&](std::size_t n, const Key& k) { return Key{h(n, k[0]), k[1]}; }));
    }
    return out;
}

SimplicialMap unit_eta(const OverNerve& x, const GroupoidDiagram& pbx, const OverNerve& hpbx) {
    const auto& xs = *x.total;
    const auto& c = *x.base;
    if (hpbx.total->dim() != xs.dim()) throw InputError("unit_eta: truncation mismatch");
    SimplicialMap m{x.total, hpbx.total, std::vector<std::vector<Index>>(xs.dim() + 1)};
    for (std::size_t n = 0; n <= xs.dim(); ++n) {
        m.map[n].reserve(xs.count(n));
        for (Index e = 0; e < xs.count(n); ++e) {
            Key k = x.nerve().key(n, x.structure(n, e));
            k.push_back(pbx.values[k[0]]->at(n, {e, c.identity(k[0])}));
            m.map[n].push_back(hpbx.total->at(n, k));
        }
    }
    return m;
}

SimplicialMap unit_eta(const OverNerve& x) {
    const auto p = pb(x);
    return unit_eta(x, p, hocolim(p, x.total->dim()));
}

DiagramSSetMap counit_epsilon(const GroupoidDiagram& a, const OverNerve& h, const GroupoidDiagram& pbh) {
    if (!a.values.empty() && h.total->dim() != a.dim()) throw InputError("counit_epsilon: truncation mismatch");
    DiagramSSetMap out;
    for (Index y = 0; y < a.values.size(); ++y) out.push_back(counit_component(a, h, pbh, y));
    return out;
}

DiagramSSetMap counit_epsilon(const GroupoidDiagram& a) {
    const auto h = hocolim(a, a.dim());
    return counit_epsilon(a, h, pb(h));
}

SimplicialMap comparison_c(const OverNerve& x, const GroupoidDiagram& pbx, const OverNerve& hpbx) {
    const auto& hs = *hpbx.total;
    SimplicialMap m{hpbx.total, x.total, std::vector<std::vector<Index>>(hs.dim() + 1)};
    for (std::size_t n = 0; n <= hs.dim(); ++n) {
        m.map[n].reserve(hs.count(n));
        for (Index e = 0; e < hs.count(n); ++e) {
            const Key& k = hs.key(n, e);
            m.map[n].push_back(pbx.values[k[0]]->key(n, k.back())[0]);
        }
    }
    return m;
}

TriangleCheck check_triangles(const GroupoidDiagram& a, const OverNerve& x, std::size_t d) {
    if ((!a.values.empty() && a.dim() != d) || x.total->dim() != d) throw InputError("check_triangles: inputs must be truncated at " + str(d));
    TriangleCheck t;
    {
        const auto h = hocolim(a, d);
        const auto p = pb(h);
        const auto hp = hocolim(p, d);
        const auto eta = unit_eta(h, p, hp);
        const auto eps = counit_epsilon(a, h, p);
        t.right = is_identity(compose(hocolim_map(eps, hp, h), eta));
    }
    {
        const auto p = pb(x);
        const auto hp = hocolim(p, d);
        const auto eta = unit_eta(x, p, hp);
        const auto php = pb(hp);
        const auto p_eta = pb_map(eta, p, php);
        const auto eps = counit_epsilon(p, hp, php);
        t.left = true;
        for (Index y = 0; y < p.values.size(); ++y) t.left = t.left && is_identity(compose(eps[y], p_eta[y]));
    }
    return t;
}

// ---------------------------------------------------------------------------

ValidationReport validate_enriched_groupoid_diagram(const EnrichedGroupoidDiagram& x) {
    ValidationReport r;
    for (const auto& v : validate_presheaf_of_groupoids(x.base).violations) r.add("base: " + v);
    if (!r.ok()) return r;
    const auto& a = *x.base.categories;
    const auto& site = *a.site();
    if (x.sections.size() != site.object_count() || x.site_action.size() != site.morphism_count()) {
        r.add("shape: expected a diagram per object and actions per morphism of the site");
        return r;
    }
    for (Index u = 0; u < site.object_count(); ++u) {
        if (!(x.sections[u].base.cat() == opposite(a.value(u)))) r.add("shape: section " + str(u) + " is not over G(U)^op");
        for (const auto& v : validate_groupoid_diagram(x.sections[u]).violations) r.add("section " + str(u) + ": " + v);
    }
    if (!r.ok()) return r;
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const Index u = site.target(al);
        const Index v = site.source(al);
        const auto& f = a.along(al);
        if (x.site_action[al].size() != a.value(u).object_count()) {
            r.add("site action: wrong number of maps for " + site.morphism_name(al));
            continue;
        }
        for (Index o = 0; o < a.value(u).object_count(); ++o) {
            check_map_ends(r, "site action " + site.morphism_name(al), x.site_action[al][o], x.sections[u].values[o],
                           x.sections[v].values[f.on_object(o)]);
        }
    }
    if (!r.ok()) return r;
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const Index u = site.target(al);
        const Index v = site.source(al);
        const auto& f = a.along(al);
        const auto& gu = a.value(u);
        for (Index gm = 0; gm < gu.morphism_count(); ++gm) {
            // γ: s -> t in G(U) acts value(t) -> value(s)
            const Index s = gu.source(gm);
            const Index t = gu.target(gm);
            const auto lhs = compose(x.site_action[al][s], x.sections[u].action[gm]);
            const auto rhs = compose(x.sections[v].action[f.on_morphism(gm)], x.site_action[al][t]);
            if (!same_values(lhs, rhs)) r.add("square: " + site.morphism_name(al) + " and " + gu.morphism_name(gm));
        }
        if (site.is_identity(al)) {
            for (const auto& m : x.site_action[al]) {
                if (!is_identity(m)) r.add("site action: identity " + site.morphism_name(al) + " acts nontrivially");
            }
        }
        for (Index be = 0; be < site.morphism_count(); ++be) {
            const Index ab = site.compose(al, be);
            if (ab == npos) continue;
            for (Index o = 0; o < gu.object_count(); ++o) {
                const auto both = compose(x.site_action[be][f.on_object(o)], x.site_action[al][o]);
                if (!same_values(both, x.site_action[ab][o])) {
                    r.add("site action: composition " + site.morphism_name(al) + " after " + site.morphism_name(be));
                }
            }
        }
    }
    return r;
}

ValidationReport validate_presheaf_over_nerve(const PresheafOverNerve& x) {
    ValidationReport r;
    for (const auto& v : validate_presheaf_of_groupoids(x.base).violations) r.add("base: " + v);
    if (!r.ok()) return r;
    const auto& a = *x.base.categories;
    const auto& site = *a.site();
    if (x.sections.size() != site.object_count() || x.site_action.size() != site.morphism_count()) {
        r.add("shape: expected an object per object and a map per morphism of the site");
        return r;
    }
    for (Index u = 0; u < site.object_count(); ++u) {
        if (!(*x.sections[u].base == opposite(a.value(u)))) r.add("shape: section " + str(u) + " is not over G(U)^op");
        for (const auto& v : validate_over_nerve(x.sections[u]).violations) r.add("section " + str(u) + ": " + v);
    }
    if (!r.ok()) return r;
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const auto& from = x.sections[site.target(al)];
        const auto& to = x.sections[site.source(al)];
        const auto& m = x.site_action[al];
        check_map_ends(r, "site action " + site.morphism_name(al), m, from.total, to.total);
        if (!r.ok()) return r;
        bool covers = true;
        for (std::size_t n = 0; n <= from.total->dim() && covers; ++n) {
            for (Index e = 0; e < from.total->count(n); ++e) {
                const Key image = map_string(a.along(al), from.nerve().key(n, from.structure(n, e)));
                if (to.nerve().key(n, to.structure(n, m(n, e))) != image) {
                    covers = false;
                    break;
                }
            }
        }
        if (!covers) r.add("site action: " + site.morphism_name(al) + " does not cover the nerve of the restriction");
        if (site.is_identity(al) && !is_identity(m)) r.add("site action: identity acts nontrivially");
        for (Index be = 0; be < site.morphism_count(); ++be) {
            const Index ab = site.compose(al, be);
            if (ab == npos) continue;
            if (!same_values(compose(x.site_action[be], m), x.site_action[ab])) {
                r.add("site action: composition " + site.morphism_name(al) + " after " + site.morphism_name(be));
            }
        }
    }
    return r;
}

PresheafOverNerve presheaf_hocolim(const EnrichedGroupoidDiagram& a, std::size_t d) {
    const auto& g = *a.base.categories;
    const auto& site = *g.site();
    PresheafOverNerve out{a.base, {}, {}};
    for (const auto& s : a.sections) out.sections.push_back(hocolim(s, d));
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const auto& f = g.along(al);
        const auto& act = a.site_action[al];
        out.site_action.push_back(map_from_keys(out.sections[site.target(al)].total, out.sections[site.source(al)].total,
                                                [&](std::size_t n, const Key& k) {
                                                    Key img = map_string(f, drop_last(k));
                                                    img.push_back(act[k[0]](n, k.back()));
                                                    return img;
                                                }));
    }
    return out;
}

EnrichedGroupoidDiagram presheaf_pb(const PresheafOverNerve& x) {
    const auto& g = *x.base.categories;
    const auto& site = *g.site();
    EnrichedGroupoidDiagram out{x.base, {}, {}};
    for (const auto& s : x.sections) out.sections.push_back(pb(s));
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const Index u = site.target(al);
        const Index v = site.source(al);
        const auto& f = g.along(al);
        const auto& m = x.site_action[al];
        std::vector<SimplicialMap> maps;
        for (Index y = 0; y < out.sections[u].values.size(); ++y) {
            maps.push_back(map_from_keys(out.sections[u].values[y], out.sections[v].values[f.on_object(y)],
                                         [&](std::size_t n, const Key& k) { return Key{m(n, k[0]), f.on_morphism(k[1])}; }));
        }
        out.site_action.push_back(std::move(maps));
    }
    return out;
}

SectionwiseAdjunction presheaf_hocolim_pb(const EnrichedGroupoidDiagram& a, const PresheafOverNerve& x, std::size_t d) {
    const auto& g = *a.base.categories;
    const auto& site = *g.site();
    SectionwiseAdjunction out;
    out.hocolim = presheaf_hocolim(a, d);
    out.pb = presheaf_pb(x);
    const auto hpb = presheaf_hocolim(out.pb, d);
    const auto pbh = presheaf_pb(out.hocolim);
    for (Index u = 0; u < site.object_count(); ++u) {
        out.eta.push_back(unit_eta(x.sections[u], out.pb.sections[u], hpb.sections[u]));
        out.epsilon.push_back(counit_epsilon(a.sections[u], out.hocolim.sections[u], pbh.sections[u]));
    }
    out.natural = validate_presheaf_over_nerve(out.hocolim).ok() && validate_enriched_groupoid_diagram(out.pb).ok();
    for (Index al = 0; al < site.morphism_count() && out.natural; ++al) {
        const Index u = site.target(al);
        const Index v = site.source(al);
        if (!same_values(compose(hpb.site_action[al], out.eta[u]), compose(out.eta[v], x.site_action[al]))) {
            out.natural = false;
        }
        for (Index y = 0; y < a.sections[u].values.size() && out.natural; ++y) {
            const Index ay = g.along(al).on_object(y);
            if (!same_values(compose(a.site_action[al][y], out.epsilon[u][y]),
                             compose(out.epsilon[v][ay], pbh.site_action[al][y]))) {
                out.natural = false;
            }
        }
    }
    out.triangles = {true, true};
    for (Index u = 0; u < site.object_count(); ++u) {
        const auto t = check_triangles(a.sections[u], x.sections[u], d);
        out.triangles.left = out.triangles.left && t.left;
        out.triangles.right = out.triangles.right && t.right;
    }
    return out;
}

EnrichedGroupoidDiagram discrete_enriched(const EnrichedSetDiagram& x, std::size_t dim) {
    auto g = as_presheaf_of_groupoids(x.base);
    if (!g) throw InputError("discrete_enriched: fibres are not groupoids");
    const auto& a = *x.base;
    const auto& site = *a.site();
    EnrichedGroupoidDiagram out{*g, {}, {}};
    for (Index u = 0; u < site.object_count(); ++u) {
        GroupoidDiagram d{opposite(g->groupoids[u]), {}, {}};
        for (Index o = 0; o < a.value(u).object_count(); ++o) {
            d.values.push_back(share(discrete_simplicial_set(x.sizes[a.section(u, o)], dim)));
        }
        const auto& gu = a.value(u);
        for (Index m = 0; m < gu.morphism_count(); ++m) {
            const auto& table = x.category_action[u][m];
            d.action.push_back(map_from_keys(d.values[gu.target(m)], d.values[gu.source(m)],
                                             [&](std::size_t, const Key& k) { return Key{table[k[0]]}; }));
        }
        out.sections.push_back(std::move(d));
    }
    for (Index al = 0; al < site.morphism_count(); ++al) {
        const Index u = site.target(al);
        const Index v = site.source(al);
        std::vector<SimplicialMap> maps;
        for (Index o = 0; o < a.value(u).object_count(); ++o) {
            const auto& table = x.site_action[al][o];
            maps.push_back(map_from_keys(out.sections[u].values[o],
                                         out.sections[v].values[a.along(al).on_object(o)],
                                         [&](std::size_t, const Key& k) { return Key{table[k[0]]}; }));
        }
        out.site_action.push_back(std::move(maps));
    }
    return out;
}

PresheafOverNerve nerve_over_itself(const PresheafOfGroupoids& g, std::size_t dim) {
    const auto& a = *g.categories;
    const auto& site = *a.site();
    PresheafOverNerve out{g, {}, {}};
    for (Index u = 0; u < site.object_count(); ++u) out.sections.push_back(nerve_over_itself(share(opposite(a.value(u))), dim));
    for (Index al = 0; al < site.morphism_count(); ++al) {
        out.site_action.push_back(map_from_keys(out.sections[site.target(al)].total, out.sections[site.source(al)].total,
                                                [&](std::size_t, const Key& k) { return map_string(a.along(al), k); }));
    }
    return out;
}

// ---------------------------------------------------------------------------

GroupoidDiagram constant_diagram(const Groupoid& g, const SSetRef& k) {
    GroupoidDiagram out{g, std::vector<SSetRef>(g.cat().object_count(), k), {}};
    for (Index m = 0; m < g.cat().morphism_count(); ++m) out.action.push_back(identity_map(k));
    return out;
}

GroupoidDiagram point_diagram(const Groupoid& g, std::size_t dim) {
    return constant_diagram(g, share(discrete_simplicial_set(1, dim)));
}

GroupoidDiagram free_orbit_diagram(const Groupoid& g, Index y0, std::size_t dim) {
    const auto& c = g.cat();
    GroupoidDiagram out{g, {}, {}};
    std::vector<std::vector<Index>> homs;
    for (Index y = 0; y < c.object_count(); ++y) {
        homs.push_back(c.hom(y0, y));
        out.values.push_back(share(discrete_simplicial_set(homs.back().size(), dim)));
    }
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const auto& from = homs[c.source(m)];
        const auto& to = homs[c.target(m)];
        out.action.push_back(map_from_keys(out.values[c.source(m)], out.values[c.target(m)],
                                           [&](std::size_t, const Key& k) {
                                               const Index h = c.compose(m, from[k[0]]);
                                               for (Index i = 0; i < to.size(); ++i) {
                                                   if (to[i] == h) return Key{i};
                                               }
                                               throw InputError("free_orbit_diagram: composite missing");
                                           }));
    }
    return out;
}

GroupoidDiagram product(const GroupoidDiagram& a, const SSetRef& k) {
    GroupoidDiagram out{a.base, {}, {}};
    for (const auto& v : a.values) out.values.push_back(share(product(*v, *k)));
    const auto& c = a.base.cat();
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const auto& f = a.action[m];
        out.action.push_back(map_from_keys(out.values[c.source(m)], out.values[c.target(m)],
                                           [&](std::size_t n, const Key& key) { return Key{f(n, key[0]), key[1]}; }));
    }
    return out;
}

}  // namespace fibsite
