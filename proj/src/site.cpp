#include "fibsite/site.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace fibsite {

namespace {

boost::dynamic_bitset<> empty_bits(const FiniteCategory& c) {
    return boost::dynamic_bitset<>(c.morphism_count());
}

void require_object(const FiniteCategory& c, Index o, const char* op) {
    if (o >= c.object_count()) throw InputError(std::string(op) + ": object out of range");
}

}  // namespace

std::vector<Index> Sieve::member_list() const {
    std::vector<Index> out;
    for (auto i = members.find_first(); i != boost::dynamic_bitset<>::npos; i = members.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

Sieve empty_sieve(const FiniteCategory& c, Index base) {
    require_object(c, base, "empty_sieve");
    return Sieve{base, empty_bits(c)};
}

Sieve maximal_sieve(const FiniteCategory& c, Index base) {
    require_object(c, base, "maximal_sieve");
    Sieve s{base, empty_bits(c)};
    for (Index m = 0; m < c.morphism_count(); ++m) {
        if (c.target(m) == base) s.members.set(m);
    }
    return s;
}

Sieve sieve_from_generators(const FiniteCategory& c, Index base, const std::vector<Index>& generators) {
    require_object(c, base, "sieve_from_generators");
    Sieve s{base, empty_bits(c)};
    for (Index g : generators) {
        if (g >= c.morphism_count() || c.target(g) != base) {
            throw InputError("sieve generator " + (g < c.morphism_count() ? c.morphism_name(g) : std::string("?")) +
                             " does not target " + c.object_name(base));
        }
        for (Index gamma = 0; gamma < c.morphism_count(); ++gamma) {
            if (c.target(gamma) == c.source(g)) s.members.set(c.compose_checked(g, gamma));
        }
    }
    return s;
}

Sieve pullback_sieve(const FiniteCategory& c, const Sieve& s, Index alpha) {
    if (alpha >= c.morphism_count() || c.target(alpha) != s.base) {
        throw InputError("pullback_sieve: morphism does not target the base of the sieve");
    }
    Sieve out{c.source(alpha), empty_bits(c)};
    for (Index gamma = 0; gamma < c.morphism_count(); ++gamma) {
        if (c.target(gamma) != out.base) continue;
        if (s.members.test(c.compose_checked(alpha, gamma))) out.members.set(gamma);
    }
    return out;
}

bool is_sieve(const FiniteCategory& c, const Sieve& s) {
    if (s.base >= c.object_count() || s.members.size() != c.morphism_count()) return false;
    for (Index a : s.member_list()) {
        if (c.target(a) != s.base) return false;
        for (Index gamma = 0; gamma < c.morphism_count(); ++gamma) {
            if (c.target(gamma) == c.source(a) && !s.members.test(c.compose(a, gamma))) return false;
        }
    }
    return true;
}

std::string describe(const FiniteCategory& c, const Sieve& s) {
    std::string out = c.object_name(s.base) + " {";
    bool first = true;
    for (Index m : s.member_list()) {
        out += first ? " " : ", ";
        out += c.morphism_name(m);
        first = false;
    }
    return out + " }";
}

std::vector<Sieve> enumerate_sieves(const FiniteCategory& c, Index base, const SiteLimits& limits) {
    require_object(c, base, "enumerate_sieves");
    std::vector<Index> into = c.morphisms_into(base);
    const std::size_t k = into.size();
    // down[i]: the sieve generated by into[i]; up[i]: all j whose sieve contains into[i].
    std::vector<boost::dynamic_bitset<>> down(k, boost::dynamic_bitset<>(k));
    std::vector<boost::dynamic_bitset<>> up(k, boost::dynamic_bitset<>(k));
    std::vector<Index> position(c.morphism_count(), npos);
    for (Index i = 0; i < k; ++i) position[into[i]] = i;
    for (Index i = 0; i < k; ++i) {
        for (Index gamma = 0; gamma < c.morphism_count(); ++gamma) {
            if (c.target(gamma) != c.source(into[i])) continue;
            const Index j = position[c.compose_checked(into[i], gamma)];
            down[i].set(j);
            up[j].set(i);
        }
    }
    std::vector<Sieve> out;
    boost::dynamic_bitset<> in(k), ex(k);
    std::function<void(Index)> recurse = [&](Index from) {
        Index i = from;
        while (i < k && (in.test(i) || ex.test(i))) ++i;
        if (i == k) {
            if (out.size() >= limits.max_sieves_per_object) {
                throw CapExceeded("more than " + std::to_string(limits.max_sieves_per_object) +
                                  " sieves on " + c.object_name(base));
            }
            Sieve s{base, empty_bits(c)};
            for (Index j = 0; j < k; ++j) {
                if (in.test(j)) s.members.set(into[j]);
            }
            out.push_back(std::move(s));
            return;
        }
        const auto saved_in = in;
        in |= down[i];
        recurse(i + 1);
        in = saved_in;
        const auto saved_ex = ex;
        ex |= up[i];
        recurse(i + 1);
        ex = saved_ex;
    };
    recurse(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

bool GrothendieckTopology::is_trivial() const {
    for (Index o = 0; o < covers.size(); ++o) {
        if (covers[o].size() != 1 || !(*covers[o].begin() == maximal_sieve(*site, o))) return false;
    }
    return true;
}

GrothendieckTopology trivial_topology(const CategoryRef& c) {
    GrothendieckTopology t{c, std::vector<std::set<Sieve>>(c->object_count())};
    for (Index o = 0; o < c->object_count(); ++o) t.covers[o].insert(maximal_sieve(*c, o));
    return t;
}

GrothendieckTopology topology_from_covers(const CategoryRef& c, const std::vector<std::vector<Sieve>>& covers) {
    GrothendieckTopology t = trivial_topology(c);
    for (Index o = 0; o < covers.size() && o < c->object_count(); ++o) {
        for (const auto& s : covers[o]) {
            if (s.base != o) throw InputError("cover listed under the wrong object");
            t.covers[o].insert(s);
        }
    }
    return t;
}

GrothendieckTopology generate_topology(const CategoryRef& c, const std::vector<Sieve>& generators,
                                       const SiteLimits& limits) {
    GrothendieckTopology t = trivial_topology(c);
    for (const auto& s : generators) t.covers.at(s.base).insert(s);
    std::vector<std::vector<Sieve>> all(c->object_count());
    for (Index o = 0; o < c->object_count(); ++o) all[o] = enumerate_sieves(*c, o, limits);
    bool changed = true;
    while (changed) {
        changed = false;
        // base change
        for (Index o = 0; o < c->object_count(); ++o) {
            const auto current = t.covers[o];
            for (const auto& s : current) {
                for (Index alpha : c->morphisms_into(o)) {
                    if (t.covers[c->source(alpha)].insert(pullback_sieve(*c, s, alpha)).second) changed = true;
                }
            }
        }
        // local character
        for (Index o = 0; o < c->object_count(); ++o) {
            for (const auto& r : all[o]) {
                if (t.covering(r)) continue;
                boost::dynamic_bitset<> locally(c->morphism_count());
                for (Index alpha : c->morphisms_into(o)) {
                    if (t.covering(pullback_sieve(*c, r, alpha))) locally.set(alpha);
                }
                for (const auto& s : t.covers[o]) {
                    if (s.members.is_subset_of(locally)) {
                        t.covers[o].insert(r);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return t;
}

ValidationReport verify_topology(const GrothendieckTopology& t, const SiteLimits& limits) {
    ValidationReport r;
    const auto& c = *t.site;
    if (c.object_count() > limits.max_objects || c.morphism_count() > limits.max_morphisms) {
        throw CapExceeded("site has " + std::to_string(c.object_count()) + " objects and " +
                          std::to_string(c.morphism_count()) + " morphisms; the cap is " +
                          std::to_string(limits.max_objects) + "/" + std::to_string(limits.max_morphisms));
    }
    if (t.covers.size() != c.object_count()) {
        r.add("topology: covers do not match the objects of the site");
        return r;
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        for (const auto& s : t.covers[o]) {
            if (s.base != o || !is_sieve(c, s)) r.add("sieve: " + describe(c, s) + " is not a sieve on " + c.object_name(o));
        }
    }
    if (!r.ok()) return r;
    for (Index o = 0; o < c.object_count(); ++o) {
        if (!t.covering(maximal_sieve(c, o))) {
            r.add("maximal sieve: the maximal sieve on " + c.object_name(o) + " is not covering");
        }
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        for (const auto& s : t.covers[o]) {
            for (Index alpha : c.morphisms_into(o)) {
                const Sieve p = pullback_sieve(c, s, alpha);
                if (!t.covering(p)) {
                    r.add("base change: pullback of " + describe(c, s) + " along " + c.morphism_name(alpha) +
                          " is " + describe(c, p) + ", not covering");
                }
            }
        }
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        const auto into = c.morphisms_into(o);
        for (const auto& rs : enumerate_sieves(c, o, limits)) {
            if (t.covering(rs)) continue;
            boost::dynamic_bitset<> locally(c.morphism_count());
            for (Index alpha : into) {
                if (t.covering(pullback_sieve(c, rs, alpha))) locally.set(alpha);
            }
            for (const auto& s : t.covers[o]) {
                if (s.members.is_subset_of(locally)) {
                    r.add("local character: " + describe(c, rs) + " is covering locally along " + describe(c, s) +
                          " but not covering");
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Sheaves

MatchingFamily restrict_section(const Presheaf& f, const FiniteCategory& c, const Sieve& s, Index x) {
    MatchingFamily fam;
    for (Index a : s.member_list()) fam.push_back(f.action[a][x]);
    (void)c;
    return fam;
}

std::vector<MatchingFamily> matching_families(const Presheaf& f, const FiniteCategory& c, const Sieve& s) {
    if (f.variance != Variance::contravariant) throw InputError("matching_families: expected a presheaf");
    const std::vector<Index> mem = s.member_list();
    const std::size_t k = mem.size();
    std::vector<Index> position(c.morphism_count(), npos);
    for (Index i = 0; i < k; ++i) position[mem[i]] = i;
    // constraints[i]: (gamma, j) with mem[i]∘gamma = mem[j]
    std::vector<std::vector<std::pair<Index, Index>>> constraints(k);
    for (Index i = 0; i < k; ++i) {
        for (Index gamma = 0; gamma < c.morphism_count(); ++gamma) {
            if (c.target(gamma) != c.source(mem[i])) continue;
            constraints[i].emplace_back(gamma, position[c.compose_checked(mem[i], gamma)]);
        }
    }
    std::vector<MatchingFamily> out;
    MatchingFamily value(k, npos);
    std::function<void(Index)> recurse = [&](Index from) {
        Index i = from;
        while (i < k && value[i] != npos) ++i;
        if (i == k) {
            out.push_back(value);
            return;
        }
        for (Index e = 0; e < f.sizes[c.source(mem[i])]; ++e) {
            const MatchingFamily saved = value;
            value[i] = e;
            bool ok = true;
            for (const auto& [gamma, j] : constraints[i]) {
                const Index forced = f.action[gamma][e];
                if (value[j] == npos) {
                    value[j] = forced;
                } else if (value[j] != forced) {
                    ok = false;
                    break;
                }
            }
            // forced values must themselves be consistent with their constraints
            if (ok) {
                for (Index j = 0; j < k && ok; ++j) {
                    if (value[j] == npos || saved[j] != npos) continue;
                    for (const auto& [gamma, l] : constraints[j]) {
                        const Index forced = f.action[gamma][value[j]];
                        if (value[l] != npos && value[l] != forced) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if (ok) recurse(i + 1);
            value = saved;
        }
    };
    recurse(0);
    std::sort(out.begin(), out.end());
    return out;
}

SheafCheck is_sheaf(const Presheaf& f, const GrothendieckTopology& t) {
    const auto& c = *t.site;
    for (Index o = 0; o < c.object_count(); ++o) {
        for (const auto& s : t.covers[o]) {
            const auto fams = matching_families(f, c, s);
            std::map<MatchingFamily, std::vector<Index>> hit;
            for (Index x = 0; x < f.sizes[o]; ++x) hit[restrict_section(f, c, s, x)].push_back(x);
            for (const auto& [fam, sections] : hit) {
                if (sections.size() > 1) {
                    return {false, SheafWitness{o, s, SheafWitness::Failure::uniqueness, fam, sections}};
                }
            }
            for (const auto& fam : fams) {
                if (!hit.count(fam)) {
                    return {false, SheafWitness{o, s, SheafWitness::Failure::existence, fam, {}}};
                }
            }
        }
    }
    return {};
}

Sheafification plus_construction(const Presheaf& f, const GrothendieckTopology& t) {
    const auto& c = *t.site;
    struct Stage {
        std::vector<Sieve> sieves;
        std::map<Sieve, Index> sieve_index;
        std::vector<std::vector<MatchingFamily>> families;
        std::vector<std::map<MatchingFamily, Index>> family_index;
        SetColimit colim;
        std::vector<std::pair<Index, Index>> representative;  // class -> (sieve, family)
    };
    std::vector<Stage> stages(c.object_count());
    Sheafification out;
    out.sheaf = Presheaf{t.site, Variance::contravariant, {}, {}, {}};
    for (Index o = 0; o < c.object_count(); ++o) {
        Stage& st = stages[o];
        st.sieves.assign(t.covers[o].begin(), t.covers[o].end());
        for (Index i = 0; i < st.sieves.size(); ++i) {
            st.sieve_index[st.sieves[i]] = i;
            st.families.push_back(matching_families(f, c, st.sieves[i]));
            std::map<MatchingFamily, Index> idx;
            for (Index k = 0; k < st.families[i].size(); ++k) idx[st.families[i][k]] = k;
            st.family_index.push_back(std::move(idx));
        }
        // Covering sieves ordered by reverse inclusion, as a thin category.
        CategoryBuilder poset;
        for (Index i = 0; i < st.sieves.size(); ++i) poset.add_object("S" + std::to_string(i));
        std::vector<std::vector<Index>> arrow(st.sieves.size(), std::vector<Index>(st.sieves.size(), npos));
        for (Index i = 0; i < st.sieves.size(); ++i) {
            arrow[i][i] = poset.identity(i);
            for (Index j = 0; j < st.sieves.size(); ++j) {
                if (i != j && st.sieves[j].members.is_subset_of(st.sieves[i].members)) {
                    arrow[i][j] = poset.add_morphism("S" + std::to_string(i) + ">S" + std::to_string(j), i, j);
                }
            }
        }
        for (Index i = 0; i < st.sieves.size(); ++i) {
            for (Index j = 0; j < st.sieves.size(); ++j) {
                for (Index k = 0; k < st.sieves.size(); ++k) {
                    if (i == j || j == k) continue;
                    if (arrow[i][j] != npos && arrow[j][k] != npos) {
                        poset.set_compose(arrow[j][k], arrow[i][j], arrow[i][k]);
                    }
                }
            }
        }
        auto poset_cat = share(poset.build());
        SetValuedFunctor diagram{poset_cat, Variance::covariant, {}, {}, {}};
        for (Index i = 0; i < st.sieves.size(); ++i) diagram.sizes.push_back(st.families[i].size());
        for (Index m = 0; m < poset_cat->morphism_count(); ++m) {
            const Index i = poset_cat->source(m);
            const Index j = poset_cat->target(m);
            const auto big = st.sieves[i].member_list();
            std::vector<Index> keep;
            for (Index p = 0; p < big.size(); ++p) {
                if (st.sieves[j].members.test(big[p])) keep.push_back(p);
            }
            std::vector<Index> act;
            for (const auto& fam : st.families[i]) {
                MatchingFamily restricted;
                for (Index p : keep) restricted.push_back(fam[p]);
                act.push_back(st.family_index[j].at(restricted));
            }
            diagram.action.push_back(std::move(act));
        }
        st.colim = colim_set(diagram);
        st.representative.assign(st.colim.size, {npos, npos});
        for (Index i = 0; i < st.sieves.size(); ++i) {
            for (Index k = 0; k < st.families[i].size(); ++k) {
                auto& rep = st.representative[st.colim.cocone[i][k]];
                if (rep.first == npos) rep = {i, k};
            }
        }
        out.sheaf.sizes.push_back(st.colim.size);
    }
    for (Index alpha = 0; alpha < c.morphism_count(); ++alpha) {
        const Stage& from = stages[c.target(alpha)];
        const Stage& to = stages[c.source(alpha)];
        std::vector<Index> act;
        for (const auto& [si, fi] : from.representative) {
            const Sieve& s = from.sieves[si];
            const Sieve p = pullback_sieve(c, s, alpha);
            auto it = to.sieve_index.find(p);
            if (it == to.sieve_index.end()) {
                throw InputError("plus construction: topology is not stable under base change");
            }
            const auto mem = s.member_list();
            const auto& fam = from.families[si][fi];
            MatchingFamily pulled;
            for (Index gamma : p.member_list()) {
                const Index composite = c.compose_checked(alpha, gamma);
                pulled.push_back(fam[std::lower_bound(mem.begin(), mem.end(), composite) - mem.begin()]);
            }
            const Index k = to.family_index[it->second].at(pulled);
            act.push_back(to.colim.cocone[it->second][k]);
        }
        out.sheaf.action.push_back(std::move(act));
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        const Stage& st = stages[o];
        const Sieve top = maximal_sieve(c, o);
        const Index ti = st.sieve_index.at(top);
        std::vector<Index> u;
        for (Index x = 0; x < f.sizes[o]; ++x) {
            u.push_back(st.colim.cocone[ti][st.family_index[ti].at(restrict_section(f, c, top, x))]);
        }
        out.unit.push_back(std::move(u));
    }
    return out;
}

Sheafification sheafify(const Presheaf& f, const GrothendieckTopology& t) {
    Sheafification once = plus_construction(f, t);
    Sheafification twice = plus_construction(once.sheaf, t);
    for (Index o = 0; o < once.unit.size(); ++o) {
        for (auto& e : once.unit[o]) e = twice.unit[o][e];
    }
    twice.unit = std::move(once.unit);
    return twice;
}

// ---------------------------------------------------------------------------

Presheaf representable(const CategoryRef& c, Index u) {
    Presheaf p{c, Variance::contravariant, {}, {}, {}};
    std::vector<std::vector<Index>> elems(c->object_count());
    std::vector<Index> pos(c->morphism_count(), npos);
    for (Index v = 0; v < c->object_count(); ++v) {
        elems[v] = c->hom(v, u);
        for (Index k = 0; k < elems[v].size(); ++k) pos[elems[v][k]] = k;
        p.sizes.push_back(elems[v].size());
        std::vector<std::string> labels;
        for (Index m : elems[v]) labels.push_back(c->morphism_name(m));
        p.labels.push_back(std::move(labels));
    }
    for (Index alpha = 0; alpha < c->morphism_count(); ++alpha) {
        std::vector<Index> act;
        for (Index h : elems[c->target(alpha)]) act.push_back(pos[c->compose_checked(h, alpha)]);
        p.action.push_back(std::move(act));
    }
    return p;
}

Presheaf coproduct(const Presheaf& a, const Presheaf& b) {
    Presheaf p{a.base, a.variance, {}, {}, {}};
    const auto& c = *a.base;
    for (Index o = 0; o < c.object_count(); ++o) p.sizes.push_back(a.sizes[o] + b.sizes[o]);
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index to = a.variance == Variance::contravariant ? c.source(m) : c.target(m);
        std::vector<Index> act = a.action[m];
        for (Index e : b.action[m]) act.push_back(e + a.sizes[to]);
        p.action.push_back(std::move(act));
    }
    return p;
}

}  // namespace fibsite
