#include "fibsite/random.hpp"

#include <algorithm>

namespace fibsite {

FiniteCategory random_preorder(Rng& rng, std::size_t max_objects) {
    const std::size_t k = 1 + rng.below(max_objects);
    std::vector<std::vector<char>> le(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i) le[i][i] = 1;
    // sparse random relation, biased towards i < j to keep it mostly a poset
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const std::size_t roll = rng.below(12);
            if ((i < j && roll < 4) || roll == 0) le[i][j] = 1;
        }
    }
    for (std::size_t m = 0; m < k; ++m) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                if (le[i][m] && le[m][j]) le[i][j] = 1;
            }
        }
    }
    CategoryBuilder b;
    for (std::size_t i = 0; i < k; ++i) b.add_object("p" + std::to_string(i));
    std::vector<std::vector<Index>> arrow(k, std::vector<Index>(k, npos));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!le[i][j]) continue;
            arrow[i][j] = i == j ? b.identity(i) : b.add_morphism("p" + std::to_string(i) + "p" + std::to_string(j), i, j);
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t m = 0; m < k; ++m) {
                if (i == j || j == m || arrow[i][j] == npos || arrow[j][m] == npos) continue;
                b.set_compose(arrow[j][m], arrow[i][j], arrow[i][m]);
            }
        }
    }
    return b.build();
}

FiniteCategory random_groupoid_category(Rng& rng, std::size_t max_objects, std::size_t max_order) {
    std::size_t budget = 1 + rng.below(max_objects);
    FiniteCategory out;
    bool first = true;
    std::size_t tag = 0;
    while (budget > 0) {
        const std::size_t objs = 1 + rng.below(budget);
        const std::size_t order = objs > 1 ? 1 : 1 + rng.below(max_order);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < objs; ++i) names.push_back("g" + std::to_string(tag++));
        FiniteCategory piece = objs == 1 ? prefixed(cyclic_group_category(order, ""), names[0])
                                         : codiscrete_category(names);
        out = first ? piece : disjoint_union(out, piece);
        first = false;
        budget -= objs;
    }
    return out;
}

FiniteCategory random_category(Rng& rng, std::size_t max_objects, std::size_t max_morphisms) {
    for (;;) {
        FiniteCategory c;
        switch (rng.below(6)) {
            case 0:
            case 1:
                c = random_preorder(rng, max_objects);
                break;
            case 2:
                c = cyclic_group_category(1 + rng.below(4), "q");
                break;
            case 3:
                c = random_groupoid_category(rng, max_objects, 3);
                break;
            case 4:
                c = product_category(random_preorder(rng, 2), cyclic_group_category(1 + rng.below(3), "q"));
                break;
            default:
                c = disjoint_union(prefixed(random_preorder(rng, 2), "l"), prefixed(random_preorder(rng, 2), "r"));
                break;
        }
        if (c.object_count() <= max_objects && c.morphism_count() <= max_morphisms) return c;
    }
}

Presheaf random_presheaf(Rng& rng, const CategoryRef& c, std::size_t max_summands) {
    const std::size_t summands = 1 + rng.below(max_summands);
    Presheaf p{c, Variance::contravariant, std::vector<std::size_t>(c->object_count(), 0),
               std::vector<std::vector<Index>>(c->morphism_count()), {}};
    for (std::size_t k = 0; k < summands; ++k) {
        const std::size_t pick = rng.below(c->object_count() + 1);
        const Presheaf piece =
            pick == c->object_count() ? constant_point(c, Variance::contravariant) : representable(c, pick);
        p = coproduct(p, piece);
    }
    return p;
}

GrothendieckTopology random_topology(Rng& rng, const CategoryRef& c) {
    std::vector<Sieve> gens;
    const std::size_t count = rng.below(3);
    for (std::size_t k = 0; k < count; ++k) {
        const Index u = rng.below(c->object_count());
        std::vector<Index> g;
        for (Index m : c->morphisms_into(u)) {
            if (!c->is_identity(m) && rng.coin()) g.push_back(m);
        }
        gens.push_back(sieve_from_generators(*c, u, g));
    }
    return generate_topology(c, gens);
}

}  // namespace fibsite

namespace fibsite {

namespace {

bool within(const PresheafOfCategories& a, std::size_t max_section) {
    for (const auto& v : a.values()) {
        if (v->object_count() > max_section) return false;
    }
    return true;
}

/// Orders in {1, 2} with the order-2 objects closed upwards along morphisms.
std::vector<std::size_t> random_reduction_orders(Rng& rng, const FiniteCategory& c) {
    std::vector<std::size_t> order(c.object_count(), 1);
    for (Index u = 0; u < c.object_count(); ++u) {
        if (rng.coin()) order[u] = 2;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& m : c.morphisms()) {
            if (order[m.source] == 2 && order[m.target] == 1) {
                order[m.target] = 2;
                changed = true;
            }
        }
    }
    return order;
}

Presheaf nonempty_presheaf(Rng& rng, const CategoryRef& c, std::size_t max_summands) {
    return coproduct(constant_point(c, Variance::contravariant), random_presheaf(rng, c, max_summands));
}

PresheafOfCategories random_groupoids_once(Rng& rng, const CategoryRef& site, std::size_t max_section) {
    switch (rng.below(6)) {
        case 0:
            return constant_presheaf(site, share(random_groupoid_category(rng, std::min<std::size_t>(max_section, 2), 3)));
        case 1:
            return discrete_presheaf(random_presheaf(rng, site, 2));
        case 2:
            return codiscrete_presheaf(random_presheaf(rng, site, 2));
        case 3:
            return cyclic_reduction_presheaf(site, random_reduction_orders(rng, *site));
        case 4:
            return product(cyclic_reduction_presheaf(site, random_reduction_orders(rng, *site)),
                           codiscrete_presheaf(random_presheaf(rng, site, 1)));
        default:
            return coproduct(cyclic_reduction_presheaf(site, random_reduction_orders(rng, *site)),
                             discrete_presheaf(random_presheaf(rng, site, 1)));
    }
}

}  // namespace

PresheafOfCategories random_presheaf_of_groupoids(Rng& rng, const CategoryRef& site, std::size_t max_section) {
    for (;;) {
        auto a = random_groupoids_once(rng, site, max_section);
        if (within(a, max_section)) return a;
    }
}

PresheafOfCategories random_presheaf_of_categories(Rng& rng, const CategoryRef& site, std::size_t max_section) {
    for (;;) {
        PresheafOfCategories a;
        switch (rng.below(5)) {
            case 0:
                a = constant_presheaf(site, share(random_category(rng, std::min<std::size_t>(max_section, 3), 6)));
                break;
            case 1: {
                // Y_0 -> Y_0 ⊔ Y_1 over the arrow •→•
                const auto y0 = random_presheaf(rng, site, 1);
                const auto y1 = coproduct(y0, random_presheaf(rng, site, 1));
                IndexedPresheaves y{share(chain_category(1)), {y0, y1}, {}};
                for (Index th = 0; th < y.index->morphism_count(); ++th) {
                    std::vector<std::vector<Index>> t;
                    for (Index u = 0; u < site->object_count(); ++u) {
                        const std::size_t n = y.family[y.index->source(th)].sizes[u];
                        std::vector<Index> id(n);
                        for (Index e = 0; e < n; ++e) id[e] = e;
                        t.push_back(std::move(id));
                    }
                    y.transition.push_back(std::move(t));
                }
                a = make_translation_presheaf(y);
                break;
            }
            case 2:
                a = product(discrete_presheaf(random_presheaf(rng, site, 1)),
                            constant_presheaf(site, share(random_preorder(rng, 2))));
                break;
            default:
                a = random_groupoids_once(rng, site, max_section);
                break;
        }
        if (within(a, max_section)) return a;
    }
}

SectionwiseEquivalence random_sectionwise_equivalence(Rng& rng, const CategoryRef& site, std::size_t max_section) {
    for (;;) {
        auto g = share(random_presheaf_of_groupoids(rng, site, max_section));
        auto k = rng.coin() ? codiscrete_presheaf(nonempty_presheaf(rng, site, 1))
                            : constant_presheaf(site, share(codiscrete_category({"a", "b"})));
        auto gk = share(product(*g, k));
        if (!within(*gk, max_section)) continue;
        return {gk, g, first_projection(gk, g)};
    }
}

EnrichedSetDiagram random_enriched_diagram(Rng& rng, const FibredSite& fs, std::size_t max_summands) {
    return to_enriched(fs, random_presheaf(rng, fs.total, max_summands));
}

}  // namespace fibsite

namespace fibsite {

namespace {

/// Composite of the arrows of the string `sigma` between positions p <= q.
Index string_composite(const FiniteCategory& c, const Key& sigma, std::size_t p, std::size_t q) {
    Index obj = sigma[0];
    for (std::size_t i = 1; i <= p; ++i) obj = c.target(sigma[i]);
    Index out = c.identity(obj);
    for (std::size_t i = p + 1; i <= q; ++i) out = c.compose(sigma[i], out);
    return out;
}

Key string_object(const FiniteCategory& c, const Key& sigma, const Key& vertices) {
    Key out{c.target(string_composite(c, sigma, 0, vertices[0]))};
    for (std::size_t i = 1; i < vertices.size(); ++i) out.push_back(string_composite(c, sigma, vertices[i - 1], vertices[i]));
    return out;
}

SSetRef small_simplicial_set(Rng& rng, std::size_t dim) {
    switch (rng.below(3)) {
        case 0:
            return share(standard_simplex(1, dim));
        case 1: {
            const auto d2 = standard_simplex(2, dim);
            return share(generated_subset(d2, {{1, d2.at(1, {0, 1})}, {1, d2.at(1, {1, 2})}, {1, d2.at(1, {0, 2})}}));
        }
        default:
            return share(discrete_simplicial_set(2, dim));
    }
}

}  // namespace

Groupoid random_small_groupoid(Rng& rng, std::size_t max_objects) {
    std::size_t budget = 1 + rng.below(max_objects);
    FiniteCategory out;
    bool first = true;
    std::size_t tag = 0;
    while (budget > 0) {
        const std::size_t objs = 1 + rng.below(budget);
        const std::size_t order = objs > 1 ? 1 : 1 + rng.below(3);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < objs; ++i) names.push_back("y" + std::to_string(tag++));
        const FiniteCategory piece = codiscrete_group_category(names, order);
        out = first ? piece : disjoint_union(out, piece);
        first = false;
        budget -= objs;
    }
    return *as_groupoid(share(std::move(out)));
}

OverNerve random_over_nerve(Rng& rng, const CategoryRef& g, std::size_t dim, std::size_t max_nondegenerate) {
    const auto nv = nerve_ref(*g, dim);
    const auto& nn = *nv;
    for (;;) {
        std::vector<SSetRef> pieces;
        std::vector<std::function<Key(const Key&)>> over;
        const std::size_t count = 1 + rng.below(3);
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t k = rng.below(std::min<std::size_t>(dim, 3));
            const Key sigma = nn.key(k, rng.below(nn.count(k)));
            if (rng.coin()) {
                pieces.push_back(share(standard_simplex(k, dim)));
                over.push_back([g, sigma](const Key& v) { return string_object(*g, sigma, v); });
            } else {
                std::vector<std::pair<std::size_t, Index>> gens{{k, nn.at(k, sigma)}};
                if (k > 0 && rng.coin()) gens.emplace_back(k - 1, rng.below(nn.count(k - 1)));
                pieces.push_back(share(generated_subset(nn, gens)));
                over.push_back([](const Key& v) { return v; });
            }
        }
        std::vector<std::vector<Key>> simplices(dim + 1);
        for (std::size_t n = 0; n <= dim; ++n) {
            for (Index j = 0; j < pieces.size(); ++j) {
                for (Index x = 0; x < pieces[j]->count(n); ++x) simplices[n].push_back({j, x});
            }
        }
        auto total = share(TruncatedSimplicialSet(
            dim, std::move(simplices),
            [&](std::size_t n, std::size_t i, const Key& k) { return Key{k[0], pieces[k[0]]->d(n, i, k[1])}; },
            [&](std::size_t n, std::size_t i, const Key& k) { return Key{k[0], pieces[k[0]]->s(n, i, k[1])}; }));
        if (total->total_nondegenerate() > max_nondegenerate) continue;
        auto structure = map_from_keys(total, nv, [&](std::size_t n, const Key& k) {
            return over[k[0]](pieces[k[0]]->key(n, k[1]));
        });
        return {g, total, std::move(structure)};
    }
}

GroupoidDiagram random_groupoid_diagram(Rng& rng, const Groupoid& g, std::size_t dim) {
    const std::size_t objects = g.cat().object_count();
    switch (rng.below(6)) {
        case 0:
            return point_diagram(g, dim);
        case 1:
            return free_orbit_diagram(g, rng.below(objects), dim);
        case 2:
            return pb(random_over_nerve(rng, g.category, dim, 8));
        case 3:
            return product(free_orbit_diagram(g, rng.below(objects), dim), small_simplicial_set(rng, dim));
        case 4:
            return constant_diagram(g, small_simplicial_set(rng, dim));
        default:
            return pb(nerve_over_itself(g.category, dim));
    }
}

EnrichedAdjunctionSample random_enriched_adjunction_sample(Rng& rng, const CategoryRef& site, std::size_t max_section,
                                                           std::size_t dim) {
    auto fibres = share(random_presheaf_of_groupoids(rng, site, max_section));
    EnrichedAdjunctionSample out{grothendieck_construct(fibres), {}, {}};
    const auto g = *as_presheaf_of_groupoids(fibres);
    auto discrete = [&] { return discrete_enriched(random_enriched_diagram(rng, out.fibred, 2), dim); };
    switch (rng.below(3)) {
        case 0:
            out.diagram = discrete();
            break;
        case 1:
            out.diagram = presheaf_pb(nerve_over_itself(g, dim));
            break;
        default:
            out.diagram = presheaf_pb(presheaf_hocolim(discrete(), dim));
            break;
    }
    out.over = rng.coin() ? nerve_over_itself(g, dim) : presheaf_hocolim(discrete(), dim);
    return out;
}

}  // namespace fibsite
