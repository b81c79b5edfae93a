#include "fibsite/cohom.hpp"

#include <limits>
#include <map>
#include <string>

#include "fibsite/sset.hpp"

namespace fibsite {

namespace {

BigInt reduce(const BigInt& x, const BigInt& n) {
    if (n == 0) return x;
    BigInt r = x % n;
    if (r < 0) r += n;
    return r;
}

std::int64_t small(const BigInt& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min()) {
        throw InputError("cochain entry does not fit in 64 bits");
    }
    return static_cast<std::int64_t>(x);
}

/// a ≡ b modulo the row orders.
bool equal_mod(const IntegerMatrix& a, const IntegerMatrix& b, const std::vector<BigInt>& rows) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (reduce(a.at(i, j) - b.at(i, j), rows[i]) != 0) return false;
        }
    }
    return true;
}

/// Strings of composable morphisms keyed [x0, m1, ..., mn].
std::vector<KeyTable> enumerate_strings(const FiniteCategory& d, std::size_t top, bool normalized, std::size_t cap) {
    std::vector<std::vector<Index>> out_of(d.object_count());
    for (Index m = 0; m < d.morphism_count(); ++m) {
        if (!normalized || !d.is_identity(m)) out_of[d.source(m)].push_back(m);
    }
    std::vector<KeyTable> tables(top + 1);
    for (Index x = 0; x < d.object_count(); ++x) tables[0].insert({x});
    for (std::size_t n = 1; n <= top; ++n) {
        for (const Key& s : tables[n - 1].keys()) {
            const Index last = n == 1 ? s[0] : d.target(s.back());
            for (Index m : out_of[last]) {
                Key k = s;
                k.push_back(m);
                tables[n].insert(k);
                if (tables[n].size() > cap) {
                    throw CapExceeded("more than " + std::to_string(cap) + " strings in degree " + std::to_string(n));
                }
            }
        }
    }
    return tables;
}

/// d_i of an (n+1)-string; nullopt when it is degenerate in the normalized complex.
std::optional<Key> string_face(const FiniteCategory& d, const Key& t, std::size_t i, bool normalized) {
    const std::size_t len = t.size() - 1;
    if (i == 0) {
        Key out{d.target(t[1])};
        out.insert(out.end(), t.begin() + 2, t.end());
        return out;
    }
    if (i == len) return Key(t.begin(), t.end() - 1);
    const Index c = d.compose(t[i + 1], t[i]);
    if (normalized && d.is_identity(c)) return std::nullopt;
    Key out(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(c);
    out.insert(out.end(), t.begin() + static_cast<std::ptrdiff_t>(i) + 2, t.end());
    return out;
}

FgAbelianGroup group_from(std::size_t free, const std::vector<BigInt>& torsion) {
    FgAbelianGroup g;
    g.factors = torsion;
    for (std::size_t k = 0; k < free; ++k) g.factors.emplace_back(0);
    return g;
}

bool trivial(const std::optional<GrothendieckTopology>& t) { return !t || t->is_trivial(); }

}  // namespace

ValidationReport validate_abelian_presheaf(const AbelianPresheaf& f) {
    ValidationReport r;
    if (!f.base) {
        r.add("shape: missing base category");
        return r;
    }
    const auto& c = *f.base;
    if (f.orders.size() != c.object_count() || f.restriction.size() != c.morphism_count()) {
        r.add("shape: expected generators per object and a matrix per morphism");
        return r;
    }
    for (Index o = 0; o < c.object_count(); ++o) {
        for (const auto& n : f.orders[o]) {
            if (n < 0) r.add("shape: negative order at " + c.object_name(o));
        }
    }
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const auto& a = f.restriction[m];
        if (a.rows() != f.orders[c.source(m)].size() || a.cols() != f.orders[c.target(m)].size()) {
            r.add("shape: matrix of " + c.morphism_name(m) + " has the wrong size");
        }
    }
    if (!r.ok()) return r;
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const auto& a = f.restriction[m];
        const auto& rows = f.orders[c.source(m)];
        const auto& cols = f.orders[c.target(m)];
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (cols[j] == 0) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                if (reduce(a.at(i, j) * cols[j], rows[i]) != 0) {
                    r.add("relations: " + c.morphism_name(m) + " does not respect the order of generator " + std::to_string(j));
                    break;
                }
            }
        }
    }
    if (!r.ok()) return r;
    for (Index o = 0; o < c.object_count(); ++o) {
        const Index id = c.identity(o);
        if (!equal_mod(f.restriction[id], IntegerMatrix::identity(f.orders[o].size()), f.orders[o])) {
            r.add("identity: " + c.morphism_name(id) + " does not act as the identity");
        }
    }
    for (Index g = 0; g < c.morphism_count(); ++g) {
        for (Index h = 0; h < c.morphism_count(); ++h) {
            const Index hg = c.compose(h, g);
            if (hg == npos) continue;
            if (!equal_mod(f.restriction[hg], f.restriction[g] * f.restriction[h], f.orders[c.source(g)])) {
                r.add("composition: " + c.morphism_name(h) + " after " + c.morphism_name(g));
            }
        }
    }
    return r;
}

AbelianPresheaf constant_abelian(const CategoryRef& c, const std::vector<BigInt>& orders) {
    AbelianPresheaf f{c, std::vector<std::vector<BigInt>>(c->object_count(), orders), {}};
    f.restriction.assign(c->morphism_count(), IntegerMatrix::identity(orders.size()));
    return f;
}

AbelianPresheaf precompose(const AbelianPresheaf& f, const Functor& along) {
    AbelianPresheaf out{along.domain, {}, {}};
    for (Index o = 0; o < along.domain->object_count(); ++o) out.orders.push_back(f.orders.at(along.on_object(o)));
    for (Index m = 0; m < along.domain->morphism_count(); ++m) out.restriction.push_back(f.restriction.at(along.on_morphism(m)));
    return out;
}

Presheaf underlying_presheaf(const AbelianPresheaf& f) {
    const auto& c = *f.base;
    Presheaf p{f.base, Variance::contravariant, {}, std::vector<std::vector<Index>>(c.morphism_count()), {}};
    for (Index o = 0; o < c.object_count(); ++o) {
        std::size_t size = 1;
        for (const auto& n : f.orders[o]) {
            if (n <= 0) throw InputError("underlying_presheaf: infinite value at " + c.object_name(o));
            size *= static_cast<std::size_t>(n);
        }
        p.sizes.push_back(size);
    }
    auto decode = [&](Index o, Index e) {
        std::vector<BigInt> v;
        for (const auto& n : f.orders[o]) {
            const auto k = static_cast<std::size_t>(n);
            v.emplace_back(e % k);
            e /= k;
        }
        return v;
    };
    for (Index m = 0; m < c.morphism_count(); ++m) {
        const Index s = c.source(m);
        const auto& a = f.restriction[m];
        for (Index e = 0; e < p.sizes[c.target(m)]; ++e) {
            const auto v = decode(c.target(m), e);
            Index code = 0;
            Index radix = 1;
            for (std::size_t i = 0; i < a.rows(); ++i) {
                BigInt sum = 0;
                for (std::size_t j = 0; j < a.cols(); ++j) sum += a.at(i, j) * v[j];
                code += static_cast<Index>(reduce(sum, f.orders[s][i])) * radix;
                radix *= static_cast<Index>(f.orders[s][i]);
            }
            p.action[m].push_back(code);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------

CochainComplex cochain_complex(const FiniteCategory& d, const AbelianPresheaf& f, std::size_t n_max, bool normalized,
                               std::size_t cap) {
    if (!f.base || !(*f.base == d)) throw InputError("cochain_complex: coefficients live on a different category");
    const auto strings = enumerate_strings(d, n_max + 1, normalized, cap);
    CochainComplex c;
    std::vector<std::vector<Index>> offset(n_max + 2);
    for (std::size_t n = 0; n <= n_max + 1; ++n) {
        c.strings.push_back(strings[n].size());
        std::vector<BigInt> orders;
        for (const Key& s : strings[n].keys()) {
            offset[n].push_back(orders.size());
            const auto& g = f.orders[s[0]];
            orders.insert(orders.end(), g.begin(), g.end());
        }
        c.orders.push_back(std::move(orders));
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
        SparseMatrix m(c.orders[n + 1].size(), c.orders[n].size());
        for (Index t = 0; t < strings[n + 1].size(); ++t) {
            const Key& key = strings[n + 1].key(t);
            const auto& rows = f.orders[key[0]];
            const std::size_t row = offset[n + 1][t];
            const Index s0 = strings[n].at(*string_face(d, key, 0, normalized));
            const auto& a = f.restriction[key[1]];
            for (std::size_t i = 0; i < a.rows(); ++i) {
                for (std::size_t j = 0; j < a.cols(); ++j) {
                    const BigInt v = reduce(a.at(i, j), rows[i]);
                    if (v != 0) m.add(row + i, offset[n][s0] + j, small(v));
                }
            }
            for (std::size_t i = 1; i <= n + 1; ++i) {
                const auto face = string_face(d, key, i, normalized);
                if (!face) continue;
                const Index s = strings[n].at(*face);
                const std::int64_t sign = i % 2 == 0 ? 1 : -1;
                for (std::size_t j = 0; j < rows.size(); ++j) m.add(row + j, offset[n][s] + j, sign);
            }
        }
        c.differential.push_back(std::move(m));
    }
    return c;
}

bool squares_to_zero(const CochainComplex& c) {
    for (std::size_t n = 0; n + 1 < c.differential.size(); ++n) {
        const auto& a = c.differential[n];
        const auto& b = c.differential[n + 1];
        for (std::size_t r = 0; r < b.rows(); ++r) {
            std::map<std::size_t, BigInt> acc;
            for (const auto& [k, v] : b.row(r)) {
                for (const auto& [col, w] : a.row(k)) acc[col] += BigInt(v) * w;
            }
            for (const auto& [col, v] : acc) {
                if (reduce(v, c.orders[n + 2][r]) != 0) return false;
            }
        }
    }
    return true;
}

std::vector<FgAbelianGroup> cohomology_of_complex(const CochainComplex& c) {
    if (c.differential.empty()) throw InputError("cohomology_of_complex: no differentials");
    const std::size_t top = c.differential.size() - 1;
    // torsion generators per degree and their positions
    std::vector<std::vector<Index>> tor(top + 2);
    std::vector<std::vector<Index>> tor_pos(top + 2);
    for (std::size_t n = 0; n <= top + 1; ++n) {
        tor_pos[n].assign(c.orders[n].size(), npos);
        for (Index g = 0; g < c.orders[n].size(); ++g) {
            if (c.orders[n][g] != 0) {
                tor_pos[n][g] = tor[n].size();
                tor[n].push_back(g);
            }
        }
    }
    // h^n: P^n -> P^{n+1} with R h = d R
    std::vector<std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>> h(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        const auto& d = c.differential[n];
        h[n].resize(tor[n].size());
        for (std::size_t r = 0; r < d.rows(); ++r) {
            const BigInt& nr = c.orders[n + 1][r];
            for (const auto& [col, v] : d.row(r)) {
                const BigInt& nc = c.orders[n][col];
                if (nc == 0) continue;
                const BigInt image = BigInt(v) * nc;
                if (reduce(image, nr) != 0) {
                    throw ValidationError("differential in degree " + std::to_string(n) + " does not respect relations");
                }
                const BigInt q = image / nr;
                if (q != 0) h[n][tor_pos[n][col]].emplace_back(tor_pos[n + 1][r], small(q));
            }
        }
    }
    // k^n: F^n -> P^{n+2} with R k = -d d, so that the cone squares to zero
    std::vector<std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>> k(top);
    for (std::size_t n = 0; n < top; ++n) {
        const auto& a = c.differential[n];
        const auto& b = c.differential[n + 1];
        k[n].resize(c.orders[n].size());
        for (std::size_t r = 0; r < b.rows(); ++r) {
            std::map<std::size_t, BigInt> acc;
            for (const auto& [mid, v] : b.row(r)) {
                for (const auto& [col, w] : a.row(mid)) acc[col] += BigInt(v) * w;
            }
            const BigInt& nr = c.orders[n + 2][r];
            for (const auto& [col, v] : acc) {
                if (v == 0) continue;
                if (reduce(v, nr) != 0) {
                    throw ValidationError("differential in degree " + std::to_string(n + 1) + " does not square to zero");
                }
                k[n][col].emplace_back(tor_pos[n + 2][r], small(-v / nr));
            }
        }
    }
    auto dim_t = [&](std::size_t n) { return c.orders[n].size() + tor[n + 1].size(); };
    // D^{n}: T^n -> T^{n+1} for n < top; n = -1 is encoded as n_plus = 0
    auto cone = [&](std::size_t n_plus) {
        if (n_plus == 0) {
            SparseMatrix m(dim_t(0), tor[0].size());
            for (Index p = 0; p < tor[0].size(); ++p) {
                m.add(tor[0][p], p, small(c.orders[0][tor[0][p]]));
                for (const auto& [q, v] : h[0][p]) m.add(c.orders[0].size() + q, p, -v);
            }
            return m;
        }
        const std::size_t n = n_plus - 1;
        const std::size_t rows = c.orders[n + 1].size() + tor[n + 2].size();
        SparseMatrix m(rows, dim_t(n));
        const auto& d = c.differential[n];
        for (std::size_t r = 0; r < d.rows(); ++r) {
            for (const auto& [col, v] : d.row(r)) m.add(r, col, v);
        }
        for (Index col = 0; col < k[n].size(); ++col) {
            for (const auto& [q, v] : k[n][col]) m.add(c.orders[n + 1].size() + q, col, v);
        }
        const std::size_t base = c.orders[n].size();
        for (Index p = 0; p < tor[n + 1].size(); ++p) {
            m.add(tor[n + 1][p], base + p, small(c.orders[n + 1][tor[n + 1][p]]));
            for (const auto& [q, v] : h[n + 1][p]) m.add(c.orders[n + 1].size() + q, base + p, -v);
        }
        return m;
    };
    std::vector<MatrixInvariants> inv;  // inv[k] for D^{k-1}, k = 0..top+1
    for (std::size_t k = 0; k <= top; ++k) inv.push_back(matrix_invariants(cone(k)));
    {
        // only the rank of D^top is used: R spans the torsion rows, d^top the rest
        const auto& d = c.differential[top];
        std::vector<std::size_t> free_rows;
        for (std::size_t r = 0; r < d.rows(); ++r) {
            if (c.orders[top + 1][r] == 0) free_rows.push_back(r);
        }
        SparseMatrix m(free_rows.size(), d.cols());
        for (std::size_t i = 0; i < free_rows.size(); ++i) {
            for (const auto& [col, v] : d.row(free_rows[i])) m.add(i, col, v);
        }
        MatrixInvariants last;
        last.rank = tor[top + 1].size() + matrix_invariants(m).rank;
        inv.push_back(std::move(last));
    }
    std::vector<FgAbelianGroup> out;
    for (std::size_t n = 0; n <= top; ++n) {
        const std::size_t free = dim_t(n) - inv[n + 1].rank - inv[n].rank;
        out.push_back(group_from(free, inv[n].torsion));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<FgAbelianGroup> stack_cohomology(const FibredSite& fs, const AbelianPresheaf& f, std::size_t n_max,
                                             std::size_t cap) {
    if (!trivial(fs.topology)) {
        throw RefusedError("exact stack cohomology needs the trivial topology; use cech_cohomology for a covering sieve");
    }
    if (!f.base || !(*f.base == *fs.total)) throw InputError("stack_cohomology: coefficients are not on the total category");
    const auto report = validate_abelian_presheaf(f);
    if (!report.ok()) throw ValidationError("coefficients: " + report.violations.front());
    return cohomology_of_complex(cochain_complex(*fs.total, f, n_max, true, cap));
}

std::vector<FgAbelianGroup> stack_cohomology(const GrothendieckTopology& base, const PresheafOfGroupoids& g,
                                             const AbelianPresheaf& f, std::size_t n_max, std::size_t cap) {
    if (!base.is_trivial()) {
        throw RefusedError("exact stack cohomology needs the trivial topology; use cech_cohomology for a covering sieve");
    }
    return stack_cohomology(grothendieck_construct(g.categories), f, n_max, cap);
}

SieveCategory sieve_category(const FiniteCategory& c, const Sieve& s) {
    const auto members = s.member_list();
    CategoryBuilder b;
    for (Index a : members) b.add_object(c.morphism_name(a));
    std::map<std::tuple<Index, Index, Index>, Index> arrow;  // (a, b, γ) -> morphism
    for (Index a = 0; a < members.size(); ++a) {
        for (Index bb = 0; bb < members.size(); ++bb) {
            for (Index g : c.hom(c.source(members[a]), c.source(members[bb]))) {
                if (c.compose(members[bb], g) != members[a]) continue;
                if (a == bb && c.is_identity(g)) {
                    arrow[{a, bb, g}] = b.identity(a);
                    continue;
                }
                arrow[{a, bb, g}] = b.add_morphism(
                    c.morphism_name(g) + ":" + c.morphism_name(members[a]) + ">" + c.morphism_name(members[bb]), a, bb);
            }
        }
    }
    for (const auto& [k1, f1] : arrow) {
        const auto [a, bb, g] = k1;
        for (const auto& [k2, f2] : arrow) {
            const auto [b2, cc, h] = k2;
            if (b2 != bb) continue;
            if (c.is_identity(g) && a == bb) continue;
            if (c.is_identity(h) && bb == cc) continue;
            b.set_compose(f2, f1, arrow.at({a, cc, c.compose(h, g)}));
        }
    }
    auto cat = share(b.build());
    std::vector<Index> gamma(cat->morphism_count(), npos);
    for (const auto& [k, m] : arrow) gamma[m] = std::get<2>(k);
    return {cat, members, gamma};
}

std::vector<FgAbelianGroup> cech_cohomology(const GrothendieckTopology& t, Index u, const Sieve& s,
                                            const AbelianPresheaf& f, std::size_t n_max, std::size_t cap) {
    if (s.base != u || !t.covering(s)) throw InputError("cech_cohomology: the sieve does not cover the object");
    const auto report = validate_abelian_presheaf(f);
    if (!report.ok()) throw ValidationError("coefficients: " + report.violations.front());
    const auto& c = *t.site;
    const auto sc = sieve_category(c, s);
    AbelianPresheaf g{sc.category, {}, {}};
    for (Index a : sc.member) g.orders.push_back(f.orders.at(c.source(a)));
    const auto& d = *sc.category;
    for (Index m = 0; m < d.morphism_count(); ++m) g.restriction.push_back(f.restriction.at(sc.arrow[m]));
    return cohomology_of_complex(cochain_complex(d, g, n_max, true, cap));
}

bool InvarianceReport::pass() const {
    for (bool b : match) {
        if (!b) return false;
    }
    return true;
}

InvarianceReport invariance_report(const MorphismOfPresheavesOfCategories& m, const AbelianPresheaf& f,
                                   std::size_t n_max, const std::optional<GrothendieckTopology>& base,
                                   std::size_t cap) {
    if (!trivial(base)) throw RefusedError("invariance_report: only the trivial topology is computed exactly");
    if (!is_sectionwise_equivalence(m)) throw RefusedError("invariance_report: the map is not a sectionwise equivalence");
    const auto from = grothendieck_construct(m.domain);
    const auto to = grothendieck_construct(m.codomain);
    const auto t = total_functor(m, from, to);
    InvarianceReport r;
    r.codomain = stack_cohomology(to, f, n_max, cap);
    r.domain = stack_cohomology(from, precompose(f, t), n_max, cap);
    for (std::size_t n = 0; n <= n_max; ++n) r.match.push_back(r.codomain[n] == r.domain[n]);
    return r;
}

}  // namespace fibsite
