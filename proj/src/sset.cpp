#include "fibsite/sset.hpp"

#include <algorithm>
#include <numeric>

namespace fibsite {

std::size_t KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull ^ k.size();
    for (Index v : k) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

Index KeyTable::insert(const Key& key) {
    auto [it, fresh] = index_.try_emplace(key, keys_.size());
    if (fresh) keys_.push_back(key);
    return it->second;
}

std::optional<Index> KeyTable::find(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Index KeyTable::at(const Key& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) {
        std::string s = "[";
        for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + std::to_string(key[i]);
        throw InputError("no simplex with key " + s + "]");
    }
    return it->second;
}

// ---------------------------------------------------------------------------

TruncatedSimplicialSet::TruncatedSimplicialSet(std::size_t dim, std::vector<std::vector<Key>> simplices,
                                               const FaceFn& face, const FaceFn& degeneracy)
    : dim_(dim), tables_(dim + 1), faces_(dim + 1), degens_(dim + 1), degenerate_(dim + 1) {
    if (simplices.size() != dim + 1) throw InputError("simplicial set: expected one simplex list per degree");
    for (std::size_t n = 0; n <= dim; ++n) {
        for (const auto& k : simplices[n]) tables_[n].insert(k);
    }
    for (std::size_t n = 0; n <= dim; ++n) {
        const std::size_t cnt = tables_[n].size();
        degenerate_[n].assign(cnt, 0);
        if (n >= 1) {
            faces_[n].resize(cnt * (n + 1));
            for (Index x = 0; x < cnt; ++x) {
                for (std::size_t i = 0; i <= n; ++i) {
                    faces_[n][x * (n + 1) + i] = tables_[n - 1].at(face(n, i, tables_[n].key(x)));
                }
            }
        }
    }
    for (std::size_t n = 0; n < dim; ++n) {
        const std::size_t cnt = tables_[n].size();
        degens_[n].resize(cnt * (n + 1));
        for (Index x = 0; x < cnt; ++x) {
            for (std::size_t i = 0; i <= n; ++i) {
                const Index y = tables_[n + 1].at(degeneracy(n, i, tables_[n].key(x)));
                degens_[n][x * (n + 1) + i] = y;
                degenerate_[n + 1][y] = 1;
            }
        }
    }
}

std::size_t TruncatedSimplicialSet::nondegenerate_count(std::size_t n) const {
    return static_cast<std::size_t>(std::count(degenerate_.at(n).begin(), degenerate_[n].end(), 0));
}

std::size_t TruncatedSimplicialSet::total_nondegenerate() const {
    std::size_t t = 0;
    for (std::size_t n = 0; n <= dim_; ++n) t += nondegenerate_count(n);
    return t;
}

namespace {

constexpr std::size_t kMaxViolations = 200;

void note(ValidationReport& r, std::string msg) {
    if (r.violations.size() < kMaxViolations) r.add(std::move(msg));
}

/// Simplicial identities for one simplicial direction given by accessors.
template <typename Count, typename Face, typename Degen>
void check_identities(ValidationReport& r, const std::string& where, std::size_t dim, Count count, Face d,
                      Degen s) {
    for (std::size_t n = 2; n <= dim; ++n) {
        for (Index x = 0; x < count(n); ++x) {
            for (std::size_t j = 1; j <= n; ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    if (d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x))) {
                        note(r, where + "face identity d" + std::to_string(i) + "d" + std::to_string(j) +
                                    " fails in degree " + std::to_string(n));
                    }
                }
            }
        }
    }
    for (std::size_t n = 0; n < dim; ++n) {
        for (Index x = 0; x < count(n); ++x) {
            for (std::size_t j = 0; j <= n; ++j) {
                const Index y = s(n, j, x);
                if (d(n + 1, j, y) != x || d(n + 1, j + 1, y) != x) {
                    note(r, where + "d s = id fails for s" + std::to_string(j) + " in degree " + std::to_string(n));
                }
                for (std::size_t i = 0; i <= n + 1; ++i) {
                    if (i < j && d(n + 1, i, y) != s(n - 1, j - 1, d(n, i, x))) {
                        note(r, where + "d" + std::to_string(i) + "s" + std::to_string(j) + " identity fails");
                    }
                    if (i > j + 1 && d(n + 1, i, y) != s(n - 1, j, d(n, i - 1, x))) {
                        note(r, where + "d" + std::to_string(i) + "s" + std::to_string(j) + " identity fails");
                    }
                }
                if (n + 1 < dim) {
                    for (std::size_t i = 0; i <= j; ++i) {
                        if (s(n + 1, i, y) != s(n + 1, j + 1, s(n, i, x))) {
                            note(r, where + "s" + std::to_string(i) + "s" + std::to_string(j) + " identity fails");
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

ValidationReport validate_simplicial_set(const TruncatedSimplicialSet& s) {
    ValidationReport r;
    check_identities(
        r, "", s.dim(), [&](std::size_t n) { return s.count(n); },
        [&](std::size_t n, std::size_t i, Index x) { return s.d(n, i, x); },
        [&](std::size_t n, std::size_t i, Index x) { return s.s(n, i, x); });
    return r;
}

ValidationReport validate_simplicial_map(const SimplicialMap& f) {
    ValidationReport r;
    const auto& a = *f.domain;
    const auto& b = *f.codomain;
    if (a.dim() != b.dim() || f.map.size() != a.dim() + 1) {
        r.add("simplicial map: truncation mismatch");
        return r;
    }
    for (std::size_t n = 0; n <= a.dim(); ++n) {
        if (f.map[n].size() != a.count(n)) {
            r.add("simplicial map: wrong table size in degree " + std::to_string(n));
            return r;
        }
        for (Index x = 0; x < a.count(n); ++x) {
            if (f.map[n][x] >= b.count(n)) {
                r.add("simplicial map: value out of range in degree " + std::to_string(n));
                return r;
            }
        }
    }
    for (std::size_t n = 0; n <= a.dim(); ++n) {
        for (Index x = 0; x < a.count(n); ++x) {
            for (std::size_t i = 0; i <= n; ++i) {
                if (n >= 1 && f.map[n - 1][a.d(n, i, x)] != b.d(n, i, f.map[n][x])) {
                    note(r, "simplicial map: does not commute with d" + std::to_string(i) + " in degree " +
                                std::to_string(n));
                }
                if (n < a.dim() && f.map[n + 1][a.s(n, i, x)] != b.s(n, i, f.map[n][x])) {
                    note(r, "simplicial map: does not commute with s" + std::to_string(i) + " in degree " +
                                std::to_string(n));
                }
            }
        }
    }
    return r;
}

SimplicialMap identity_map(const SSetRef& s) {
    SimplicialMap f{s, s, {}};
    for (std::size_t n = 0; n <= s->dim(); ++n) {
        f.map.emplace_back(s->count(n));
        std::iota(f.map.back().begin(), f.map.back().end(), Index{0});
    }
    return f;
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
    if (f.map.size() != g.map.size()) throw InputError("compose: truncation mismatch");
    SimplicialMap h{f.domain, g.codomain, f.map};
    for (std::size_t n = 0; n < h.map.size(); ++n) {
        for (auto& x : h.map[n]) x = g.map[n].at(x);
    }
    return h;
}

bool same_maps(const SimplicialMap& a, const SimplicialMap& b) { return a.map == b.map; }

bool is_identity(const SimplicialMap& f) {
    for (std::size_t n = 0; n < f.map.size(); ++n) {
        if (f.map[n].size() != f.codomain->count(n)) return false;
        for (Index x = 0; x < f.map[n].size(); ++x) {
            if (f.map[n][x] != x) return false;
        }
    }
    return true;
}

bool is_isomorphism(const SimplicialMap& f) {
    for (std::size_t n = 0; n < f.map.size(); ++n) {
        if (f.map[n].size() != f.codomain->count(n)) return false;
        std::vector<char> hit(f.codomain->count(n), 0);
        for (Index y : f.map[n]) {
            if (hit[y]) return false;
            hit[y] = 1;
        }
    }
    return true;
}

SimplicialMap map_from_keys(const SSetRef& domain, const SSetRef& codomain,
                            const std::function<Key(std::size_t n, const Key&)>& f) {
    if (domain->dim() != codomain->dim()) throw InputError("map_from_keys: truncation mismatch");
    SimplicialMap m{domain, codomain, std::vector<std::vector<Index>>(domain->dim() + 1)};
    for (std::size_t n = 0; n <= domain->dim(); ++n) {
        m.map[n].reserve(domain->count(n));
        for (Index x = 0; x < domain->count(n); ++x) m.map[n].push_back(codomain->at(n, f(n, domain->key(n, x))));
    }
    return m;
}

// ---------------------------------------------------------------------------

namespace {

/// Vertex a_i of a nerve key [a0, m1, ..., mn].
Index nerve_vertex(const FiniteCategory& c, const Key& k, std::size_t i) {
    return i == 0 ? k[0] : c.target(k[i]);
}

Key nerve_face(const FiniteCategory& c, std::size_t n, std::size_t i, const Key& k) {
    Key out;
    out.reserve(n);
    if (i == 0) {
        out.push_back(c.target(k[1]));
        out.insert(out.end(), k.begin() + 2, k.end());
    } else if (i == n) {
        out.assign(k.begin(), k.end() - 1);
    } else {
        out.assign(k.begin(), k.begin() + i);
        out.push_back(c.compose_checked(k[i + 1], k[i]));
        out.insert(out.end(), k.begin() + i + 2, k.end());
    }
    return out;
}

Key nerve_degeneracy(const FiniteCategory& c, std::size_t i, const Key& k) {
    Key out(k.begin(), k.begin() + i + 1);
    out.push_back(c.identity(nerve_vertex(c, k, i)));
    out.insert(out.end(), k.begin() + i + 1, k.end());
    return out;
}

std::vector<std::vector<Key>> nerve_strings(const FiniteCategory& c, std::size_t dim) {
    std::vector<std::vector<Key>> out(dim + 1);
    for (Index o = 0; o < c.object_count(); ++o) out[0].push_back({o});
    std::vector<std::vector<Index>> from(c.object_count());
    for (Index m = 0; m < c.morphism_count(); ++m) from[c.source(m)].push_back(m);
    for (std::size_t n = 1; n <= dim; ++n) {
        for (const auto& k : out[n - 1]) {
            const Index last = nerve_vertex(c, k, n - 1);
            for (Index m : from[last]) {
                Key e = k;
                e.push_back(m);
                out[n].push_back(std::move(e));
            }
        }
    }
    return out;
}

}  // namespace

TruncatedSimplicialSet nerve(const FiniteCategory& c, std::size_t dim) {
    return TruncatedSimplicialSet(
        dim, nerve_strings(c, dim), [&](std::size_t n, std::size_t i, const Key& k) { return nerve_face(c, n, i, k); },
        [&](std::size_t, std::size_t i, const Key& k) { return nerve_degeneracy(c, i, k); });
}

SSetRef nerve_ref(const FiniteCategory& c, std::size_t dim) { return share(nerve(c, dim)); }

SimplicialMap nerve_map(const Functor& f, const SSetRef& domain_nerve, const SSetRef& codomain_nerve) {
    return map_from_keys(domain_nerve, codomain_nerve, [&](std::size_t n, const Key& k) {
        Key out{f.on_object(k[0])};
        for (std::size_t i = 1; i <= n; ++i) out.push_back(f.on_morphism(k[i]));
        return out;
    });
}

TruncatedSimplicialSet standard_simplex(std::size_t k, std::size_t dim) {
    std::vector<std::vector<Key>> simplices(dim + 1);
    for (std::size_t n = 0; n <= dim; ++n) {
        Key seq(n + 1, 0);
        for (;;) {
            simplices[n].push_back(seq);
            // next nondecreasing sequence
            std::size_t p = n + 1;
            while (p > 0 && seq[p - 1] == k) --p;
            if (p == 0) break;
            const Index v = seq[p - 1] + 1;
            for (std::size_t q = p - 1; q <= n; ++q) seq[q] = v;
        }
    }
    return TruncatedSimplicialSet(
        dim, std::move(simplices),
        [](std::size_t, std::size_t i, const Key& key) {
            Key out = key;
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
            return out;
        },
        [](std::size_t, std::size_t i, const Key& key) {
            Key out = key;
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(i), key[i]);
            return out;
        });
}

TruncatedSimplicialSet product(const TruncatedSimplicialSet& a, const TruncatedSimplicialSet& b) {
    if (a.dim() != b.dim()) throw InputError("product: truncation mismatch");
    std::vector<std::vector<Key>> simplices(a.dim() + 1);
    for (std::size_t n = 0; n <= a.dim(); ++n) {
        for (Index x = 0; x < a.count(n); ++x) {
            for (Index y = 0; y < b.count(n); ++y) simplices[n].push_back({x, y});
        }
    }
    return TruncatedSimplicialSet(
        a.dim(), std::move(simplices),
        [&](std::size_t n, std::size_t i, const Key& k) { return Key{a.d(n, i, k[0]), b.d(n, i, k[1])}; },
        [&](std::size_t n, std::size_t i, const Key& k) { return Key{a.s(n, i, k[0]), b.s(n, i, k[1])}; });
}

TruncatedSimplicialSet disjoint_union(const TruncatedSimplicialSet& a, const TruncatedSimplicialSet& b) {
    if (a.dim() != b.dim()) throw InputError("disjoint_union: truncation mismatch");
    std::vector<std::vector<Key>> simplices(a.dim() + 1);
    for (std::size_t n = 0; n <= a.dim(); ++n) {
        for (Index x = 0; x < a.count(n); ++x) simplices[n].push_back({0, x});
        for (Index y = 0; y < b.count(n); ++y) simplices[n].push_back({1, y});
    }
    auto side = [&](const Key& k) -> const TruncatedSimplicialSet& { return k[0] == 0 ? a : b; };
    return TruncatedSimplicialSet(
        a.dim(), std::move(simplices),
        [&](std::size_t n, std::size_t i, const Key& k) { return Key{k[0], side(k).d(n, i, k[1])}; },
        [&](std::size_t n, std::size_t i, const Key& k) { return Key{k[0], side(k).s(n, i, k[1])}; });
}

TruncatedSimplicialSet generated_subset(const TruncatedSimplicialSet& s,
                                        const std::vector<std::pair<std::size_t, Index>>& generators) {
    const std::size_t dim = s.dim();
    std::vector<std::vector<char>> mark(dim + 1);
    for (std::size_t n = 0; n <= dim; ++n) mark[n].assign(s.count(n), 0);
    for (const auto& [n, x] : generators) {
        if (n > dim || x >= s.count(n)) throw InputError("generated_subset: generator out of range");
        mark[n][x] = 1;
    }
    for (std::size_t n = dim; n >= 1; --n) {
        for (Index x = 0; x < s.count(n); ++x) {
            if (!mark[n][x]) continue;
            for (std::size_t i = 0; i <= n; ++i) mark[n - 1][s.d(n, i, x)] = 1;
        }
    }
    for (std::size_t n = 0; n < dim; ++n) {
        for (Index x = 0; x < s.count(n); ++x) {
            if (!mark[n][x]) continue;
            for (std::size_t i = 0; i <= n; ++i) mark[n + 1][s.s(n, i, x)] = 1;
        }
    }
    std::vector<std::vector<Key>> simplices(dim + 1);
    for (std::size_t n = 0; n <= dim; ++n) {
        for (Index x = 0; x < s.count(n); ++x) {
            if (mark[n][x]) simplices[n].push_back(s.key(n, x));
        }
    }
    return TruncatedSimplicialSet(
        dim, std::move(simplices),
        [&](std::size_t n, std::size_t i, const Key& k) { return s.key(n - 1, s.d(n, i, s.at(n, k))); },
        [&](std::size_t n, std::size_t i, const Key& k) { return s.key(n + 1, s.s(n, i, s.at(n, k))); });
}

SimplicialMap key_inclusion(const SSetRef& sub, const SSetRef& ambient) {
    return map_from_keys(sub, ambient, [](std::size_t, const Key& k) { return k; });
}

TruncatedSimplicialSet discrete_simplicial_set(std::size_t points, std::size_t dim) {
    std::vector<std::vector<Key>> simplices(dim + 1);
    for (std::size_t n = 0; n <= dim; ++n) {
        for (Index p = 0; p < points; ++p) simplices[n].push_back({p});
    }
    auto same = [](std::size_t, std::size_t, const Key& k) { return k; };
    return TruncatedSimplicialSet(dim, std::move(simplices), same, same);
}

// ---------------------------------------------------------------------------

BisimplicialSet::BisimplicialSet(std::size_t dim, std::vector<std::vector<std::vector<Key>>> cells,
                                 const FaceFn& hface, const FaceFn& vface, const FaceFn& hdegen,
                                 const FaceFn& vdegen)
    : dim_(dim) {
    const std::size_t slots = (dim + 1) * (dim + 1);
    cells_.resize(slots);
    hface_.resize(slots);
    vface_.resize(slots);
    hdeg_.resize(slots);
    vdeg_.resize(slots);
    if (cells.size() != dim + 1) throw InputError("bisimplicial set: expected (dim+1)^2 cells");
    for (std::size_t m = 0; m <= dim; ++m) {
        if (cells[m].size() != dim + 1) throw InputError("bisimplicial set: expected (dim+1)^2 cells");
        for (std::size_t n = 0; n <= dim; ++n) {
            for (const auto& k : cells[m][n]) cells_[slot(m, n)].insert(k);
        }
    }
    for (std::size_t m = 0; m <= dim; ++m) {
        for (std::size_t n = 0; n <= dim; ++n) {
            const KeyTable& here = cells_[slot(m, n)];
            const std::size_t cnt = here.size();
            if (m >= 1) {
                auto& t = hface_[slot(m, n)];
                t.resize(cnt * (m + 1));
                for (Index x = 0; x < cnt; ++x) {
                    for (std::size_t i = 0; i <= m; ++i) t[x * (m + 1) + i] = cells_[slot(m - 1, n)].at(hface(m, n, i, here.key(x)));
                }
            }
            if (n >= 1) {
                auto& t = vface_[slot(m, n)];
                t.resize(cnt * (n + 1));
                for (Index x = 0; x < cnt; ++x) {
                    for (std::size_t i = 0; i <= n; ++i) t[x * (n + 1) + i] = cells_[slot(m, n - 1)].at(vface(m, n, i, here.key(x)));
                }
            }
            if (m < dim) {
                auto& t = hdeg_[slot(m, n)];
                t.resize(cnt * (m + 1));
                for (Index x = 0; x < cnt; ++x) {
                    for (std::size_t i = 0; i <= m; ++i) t[x * (m + 1) + i] = cells_[slot(m + 1, n)].at(hdegen(m, n, i, here.key(x)));
                }
            }
            if (n < dim) {
                auto& t = vdeg_[slot(m, n)];
                t.resize(cnt * (n + 1));
                for (Index x = 0; x < cnt; ++x) {
                    for (std::size_t i = 0; i <= n; ++i) t[x * (n + 1) + i] = cells_[slot(m, n + 1)].at(vdegen(m, n, i, here.key(x)));
                }
            }
        }
    }
}

ValidationReport validate_bisimplicial_set(const BisimplicialSet& b) {
    ValidationReport r;
    const std::size_t dim = b.dim();
    for (std::size_t n = 0; n <= dim; ++n) {
        check_identities(
            r, "horizontal (vertical degree " + std::to_string(n) + "): ", dim,
            [&](std::size_t m) { return b.count(m, n); },
            [&](std::size_t m, std::size_t i, Index x) { return b.dh(m, n, i, x); },
            [&](std::size_t m, std::size_t i, Index x) { return b.sh(m, n, i, x); });
    }
    for (std::size_t m = 0; m <= dim; ++m) {
        check_identities(
            r, "vertical (horizontal degree " + std::to_string(m) + "): ", dim,
            [&](std::size_t n) { return b.count(m, n); },
            [&](std::size_t n, std::size_t i, Index x) { return b.dv(m, n, i, x); },
            [&](std::size_t n, std::size_t i, Index x) { return b.sv(m, n, i, x); });
    }
    for (std::size_t m = 0; m <= dim; ++m) {
        for (std::size_t n = 0; n <= dim; ++n) {
            for (Index x = 0; x < b.count(m, n); ++x) {
                for (std::size_t i = 0; i <= m; ++i) {
                    for (std::size_t j = 0; j <= n; ++j) {
                        if (m >= 1 && n >= 1 && b.dh(m, n - 1, i, b.dv(m, n, j, x)) != b.dv(m - 1, n, j, b.dh(m, n, i, x))) {
                            note(r, "horizontal and vertical faces do not commute");
                        }
                        if (m >= 1 && n < dim && b.sv(m - 1, n, j, b.dh(m, n, i, x)) != b.dh(m, n + 1, i, b.sv(m, n, j, x))) {
                            note(r, "horizontal faces and vertical degeneracies do not commute");
                        }
                        if (n >= 1 && m < dim && b.sh(m, n - 1, i, b.dv(m, n, j, x)) != b.dv(m + 1, n, j, b.sh(m, n, i, x))) {
                            note(r, "vertical faces and horizontal degeneracies do not commute");
                        }
                        if (m < dim && n < dim && b.sh(m, n + 1, i, b.sv(m, n, j, x)) != b.sv(m + 1, n, j, b.sh(m, n, i, x))) {
                            note(r, "degeneracies do not commute");
                        }
                    }
                }
            }
        }
    }
    return r;
}

TruncatedSimplicialSet diagonal(const BisimplicialSet& b) {
    const std::size_t dim = b.dim();
    std::vector<std::vector<Key>> simplices(dim + 1);
    std::vector<KeyTable> lookup(dim + 1);
    for (std::size_t n = 0; n <= dim; ++n) {
        for (Index x = 0; x < b.count(n, n); ++x) {
            simplices[n].push_back(b.key(n, n, x));
            lookup[n].insert(b.key(n, n, x));
        }
    }
    return TruncatedSimplicialSet(
        dim, std::move(simplices),
        [&](std::size_t n, std::size_t i, const Key& k) {
            return b.key(n - 1, n - 1, b.dh(n, n - 1, i, b.dv(n, n, i, lookup[n].at(k))));
        },
        [&](std::size_t n, std::size_t i, const Key& k) {
            return b.key(n + 1, n + 1, b.sh(n, n + 1, i, b.sv(n, n, i, lookup[n].at(k))));
        });
}

InterchangeComparison interchange_comparison(const FiniteCategory& c, std::size_t dim) {
    const std::size_t top = 2 * dim + 1;
    const auto strings = nerve_strings(c, top);
    std::vector<std::vector<std::vector<Key>>> cells(dim + 1, std::vector<std::vector<Key>>(dim + 1));
    for (std::size_t m = 0; m <= dim; ++m) {
        for (std::size_t n = 0; n <= dim; ++n) cells[m][n] = strings[m + n + 1];
    }
    // b-vertices occupy positions 0..m (b_i at m - i), a-vertices m+1..m+n+1
    InterchangeComparison out;
    out.x = BisimplicialSet(
        dim, std::move(cells),
        [&](std::size_t m, std::size_t n, std::size_t i, const Key& k) { return nerve_face(c, m + n + 1, m - i, k); },
        [&](std::size_t m, std::size_t n, std::size_t j, const Key& k) {
            return nerve_face(c, m + n + 1, m + 1 + j, k);
        },
        [&](std::size_t m, std::size_t, std::size_t i, const Key& k) { return nerve_degeneracy(c, m - i, k); },
        [&](std::size_t m, std::size_t, std::size_t j, const Key& k) { return nerve_degeneracy(c, m + 1 + j, k); });
    out.diagonal = share(diagonal(out.x));
    const FiniteCategory op = opposite(c);
    out.nerve_op = nerve_ref(op, dim);
    out.nerve = nerve_ref(c, dim);
    out.phi = map_from_keys(out.diagonal, out.nerve_op, [&](std::size_t n, const Key& k) {
        Key b{nerve_vertex(c, k, n)};
        for (std::size_t j = n; j >= 1; --j) b.push_back(k[j]);
        return b;
    });
    out.psi = map_from_keys(out.diagonal, out.nerve, [&](std::size_t n, const Key& k) {
        Key a{nerve_vertex(c, k, n + 1)};
        for (std::size_t j = n + 2; j <= 2 * n + 1; ++j) a.push_back(k[j]);
        return a;
    });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

HomologyResult homology_impl(const TruncatedSimplicialSet& s, std::size_t top, bool normalized) {
    if (top + 1 > s.dim()) {
        throw InputError("homology up to degree " + std::to_string(top) + " needs truncation at least " +
                         std::to_string(top + 1) + ", have " + std::to_string(s.dim()));
    }
    std::vector<std::vector<Index>> pos(top + 2);
    std::vector<std::size_t> rank_n(top + 2, 0);
    for (std::size_t n = 0; n <= top + 1; ++n) {
        pos[n].assign(s.count(n), npos);
        for (Index x = 0; x < s.count(n); ++x) {
            if (!normalized || !s.degenerate(n, x)) pos[n][x] = rank_n[n]++;
        }
    }
    std::vector<MatrixInvariants> bd(top + 2);
    for (std::size_t n = 1; n <= top + 1; ++n) {
        SparseMatrix m(rank_n[n - 1], rank_n[n]);
        for (Index x = 0; x < s.count(n); ++x) {
            if (pos[n][x] == npos) continue;
            for (std::size_t i = 0; i <= n; ++i) {
                const Index y = pos[n - 1][s.d(n, i, x)];
                if (y != npos) m.add(y, pos[n][x], (i % 2) ? -1 : 1);
            }
        }
        bd[n] = matrix_invariants(m);
    }
    HomologyResult out;
    for (std::size_t n = 0; n <= top; ++n) {
        const std::size_t free = rank_n[n] - bd[n].rank - bd[n + 1].rank;
        FgAbelianGroup g;
        g.factors = bd[n + 1].torsion;
        g.factors.resize(g.factors.size() + free, BigInt(0));
        out.groups.push_back(std::move(g));
    }
    out.components = components(s).count();
    return out;
}

}  // namespace

HomologyResult homology(const TruncatedSimplicialSet& s, std::size_t top) { return homology_impl(s, top, true); }

HomologyResult homology_unnormalized(const TruncatedSimplicialSet& s, std::size_t top) {
    return homology_impl(s, top, false);
}

Partition components(const TruncatedSimplicialSet& s) {
    const std::size_t v = s.count(0);
    std::vector<Index> parent(v);
    std::iota(parent.begin(), parent.end(), Index{0});
    std::function<Index(Index)> find = [&](Index x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    if (s.dim() >= 1) {
        for (Index e = 0; e < s.count(1); ++e) {
            Index a = find(s.d(1, 0, e)), b = find(s.d(1, 1, e));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    Partition p;
    p.class_of.assign(v, npos);
    for (Index x = 0; x < v; ++x) {
        const Index root = find(x);
        if (p.class_of[root] == npos) {
            p.class_of[root] = p.classes.size();
            p.classes.emplace_back();
            p.representative.push_back(x);
        }
        p.class_of[x] = p.class_of[root];
        p.classes[p.class_of[x]].push_back(x);
    }
    return p;
}

bool Evidence::pass() const {
    if (!pi0_bijective) return false;
    for (bool b : homology_match) {
        if (!b) return false;
    }
    return !groupoid_check.has_value() || *groupoid_check;
}

Evidence we_evidence(const SimplicialMap& f, std::size_t top) {
    if (f.domain->dim() != f.codomain->dim()) throw InputError("we_evidence: truncation mismatch");
    Evidence ev;
    const Partition a = components(*f.domain);
    const Partition b = components(*f.codomain);
    std::vector<Index> induced(a.count(), npos);
    bool well_defined = true;
    for (Index x = 0; x < f.domain->count(0); ++x) {
        const Index cls = b.class_of[f.map[0][x]];
        Index& slot = induced[a.class_of[x]];
        if (slot != npos && slot != cls) well_defined = false;
        slot = cls;
    }
    std::vector<char> hit(b.count(), 0);
    bool injective = well_defined;
    for (Index cls : induced) {
        if (hit[cls]) injective = false;
        hit[cls] = 1;
    }
    ev.pi0_bijective = injective && a.count() == b.count();
    ev.domain_homology = homology(*f.domain, top).groups;
    ev.codomain_homology = homology(*f.codomain, top).groups;
    for (std::size_t n = 0; n <= top; ++n) ev.homology_match.push_back(ev.domain_homology[n] == ev.codomain_homology[n]);
    return ev;
}

Evidence we_evidence(const Functor& f, std::size_t top, std::size_t dim) {
    auto dn = nerve_ref(*f.domain, dim);
    auto cn = nerve_ref(*f.codomain, dim);
    Evidence ev = we_evidence(nerve_map(f, dn, cn), top);
    if (as_groupoid(f.domain) && as_groupoid(f.codomain)) {
        bool ok = true;
        const Partition comps = pi0(*f.domain);
        for (Index rep : comps.representative) {
            const Index image = f.on_object(rep);
            const auto src = f.domain->hom(rep, rep);
            std::vector<Index> seen;
            for (Index g : src) seen.push_back(f.on_morphism(g));
            std::sort(seen.begin(), seen.end());
            const bool injective = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
            if (!injective || seen.size() != f.codomain->hom(image, image).size()) {
                ok = false;
                ev.notes.push_back("automorphisms of " + f.domain->object_name(rep) + " do not map bijectively onto those of " +
                                   f.codomain->object_name(image));
            }
        }
        ev.groupoid_check = ok;
    }
    return ev;
}

bool automorphism_groups_isomorphic(const FiniteCategory& g, Index a, const FiniteCategory& h, Index b) {
    const auto ga = g.hom(a, a);
    const auto hb = h.hom(b, b);
    if (ga.size() != hb.size()) return false;
    if (ga.size() > 8) throw CapExceeded("automorphism group of order " + std::to_string(ga.size()) + " exceeds 8");
    const std::size_t n = ga.size();
    std::vector<Index> gpos(g.morphism_count(), npos), hpos(h.morphism_count(), npos);
    for (Index i = 0; i < n; ++i) {
        gpos[ga[i]] = i;
        hpos[hb[i]] = i;
    }
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
        bool hom = gpos[g.identity(a)] < n && perm[gpos[g.identity(a)]] == hpos[h.identity(b)];
        for (Index i = 0; i < n && hom; ++i) {
            for (Index j = 0; j < n && hom; ++j) {
                const Index gij = gpos[g.compose(ga[i], ga[j])];
                if (perm[gij] != hpos[h.compose(hb[perm[i]], hb[perm[j]])]) hom = false;
            }
        }
        if (hom) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace fibsite
