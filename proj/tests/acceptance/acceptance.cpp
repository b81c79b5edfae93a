// One line per acceptance criterion; exit status 0 iff every criterion passes
// within its time limit. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fibsite/cli.hpp"
#include "fibsite/cohom.hpp"
#include "fibsite/errors.hpp"
#include "fibsite/fibred.hpp"
#include "fibsite/hocopb.hpp"
#include "fibsite/linalg.hpp"
#include "fibsite/random.hpp"
#include "fibsite/site.hpp"
#include "fibsite/sset.hpp"
#include "oracles.hpp"

using namespace fibsite;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string source(const std::string& relative) { return std::string(FIBSITE_SOURCE_DIR) + "/" + relative; }

std::vector<std::string> example_bundles() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(source("docs/examples"))) {
        if (e.path().extension() == ".bundle") out.push_back(e.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_bijective_functor(const Functor& f) {
    std::vector<char> so(f.codomain->object_count(), 0), sm(f.codomain->morphism_count(), 0);
    if (f.object_map.size() != so.size() || f.morphism_map.size() != sm.size()) return false;
    for (Index o : f.object_map) so[o] = 1;
    for (Index m : f.morphism_map) sm[m] = 1;
    return std::all_of(so.begin(), so.end(), [](char c) { return c; }) &&
           std::all_of(sm.begin(), sm.end(), [](char c) { return c; });
}

std::vector<FgAbelianGroup> groups(std::initializer_list<std::initializer_list<long long>> list) {
    std::vector<FgAbelianGroup> out;
    for (const auto& g : list) {
        std::vector<BigInt> orders;
        for (long long o : g) orders.emplace_back(o);
        out.push_back(FgAbelianGroup::from_cyclic(orders));
    }
    return out;
}

// 1 -------------------------------------------------------------------------

Outcome topology_soundness() {
    Outcome out;
    Rng rng(1001);
    std::size_t checked = 0, sampled = 0, largest = 0;
    while (checked < 100) {
        auto c = share(random_category(rng, 3, 8));
        const auto fs = grothendieck_construct(share(random_presheaf_of_categories(rng, c, 3)));
        const auto base = random_topology(rng, c);
        ++sampled;
        out.require(verify_topology(base).ok(), "random base topology fails verification");
        out.require(verify_topology(induced_topology(fs, base), SiteLimits::total()).ok(),
                    "induced topology fails verification, instance " + std::to_string(sampled));
        if (!base.is_trivial()) ++checked;
        largest = std::max(largest, fs.total->morphism_count());
    }
    std::size_t examples = 0;
    for (const auto& name : example_bundles()) {
        const auto b = cli::parse_bundle({source("docs/examples/" + name)});
        if (!b.fibred) continue;
        out.require(verify_topology(induced_topology(*b.fibred, b.topology), SiteLimits::total()).ok(),
                    "induced topology fails on " + name);
        ++examples;
    }
    if (out.pass) {
        out.detail = std::to_string(sampled) + " random instances (" + std::to_string(checked) +
                     " with a nontrivial base topology, up to " + std::to_string(largest) + " total morphisms), " +
                     std::to_string(examples) + " examples";
    }
    return out;
}

// 2 -------------------------------------------------------------------------

Outcome enriched_round_trip() {
    Outcome out;
    Rng rng(1002);
    for (int k = 0; k < 100; ++k) {
        auto c = share(random_category(rng, 3, 8));
        const auto fs = grothendieck_construct(share(random_presheaf_of_categories(rng, c, 3)));
        const auto f = random_presheaf(rng, fs.total, 3);
        const auto x = to_enriched(fs, f);
        out.require(validate_enriched_diagram(x).ok(), "invalid enriched diagram");
        const auto back = to_presheaf(fs, x);
        out.require(back.sizes == f.sizes && back.action == f.action, "presheaf -> enriched -> presheaf differs");
        out.require(to_enriched(fs, back) == x, "enriched -> presheaf -> enriched differs");
        out.require(validate_enriched_diagram(random_enriched_diagram(rng, fs, 2)).ok(), "random diagram invalid");
        const auto y = random_enriched_diagram(rng, fs, 2);
        out.require(to_enriched(fs, to_presheaf(fs, y)) == y, "round trip from a random enriched diagram differs");
    }
    if (out.pass) out.detail = "100 instances, both directions";
    return out;
}

// 3 -------------------------------------------------------------------------

Outcome constant_is_product() {
    Outcome out;
    Rng rng(1003);
    std::size_t groupoid_fibres = 0;
    for (int k = 0; k < 10; ++k) {
        auto c = share(random_category(rng, 3, 6));
        FiniteCategory j = random_groupoid_category(rng, 2, 3);
        while (k % 2 == 1 && as_groupoid(share(j))) j = random_preorder(rng, 3);
        const auto fs = grothendieck_construct(share(constant_presheaf(c, share(j))));
        auto p = share(product_category(*c, j));
        if (fs.total->object_count() != p->object_count() || fs.total->morphism_count() != p->morphism_count()) {
            out.require(false, "sizes differ from the product");
            continue;
        }
        auto rename = [](std::string s) {
            std::replace(s.begin(), s.end(), '|', ',');
            return s;
        };
        std::vector<Index> mo, mm;
        for (Index o = 0; o < p->object_count(); ++o) mo.push_back(p->object_index(rename(fs.total->object_name(o))));
        for (Index m = 0; m < p->morphism_count(); ++m) mm.push_back(p->morphism_index(rename(fs.total->morphism_name(m))));
        const Functor iso{fs.total, p, mo, mm};
        out.require(validate_functor(iso).ok() && is_bijective_functor(iso), "name bijection is not an isomorphism");

        // product topology: generated by the sieves {(β, f) | β ∈ S} for S covering in C
        const auto t = random_topology(rng, c);
        std::vector<Sieve> generators;
        for (Index o = 0; o < p->object_count(); ++o) {
            const Index u = o / j.object_count();
            for (const auto& s : t.covers[u]) {
                Sieve g = empty_sieve(*p, o);
                for (Index m : p->morphisms_into(o)) {
                    if (s.contains(m / j.morphism_count())) g.members.set(m);
                }
                generators.push_back(std::move(g));
            }
        }
        const auto product_topology = generate_topology(p, generators, SiteLimits::total());
        const auto induced = induced_topology(fs, t);
        for (Index o = 0; o < p->object_count(); ++o) {
            std::set<Sieve> mapped;
            for (const auto& s : induced.covers[o]) {
                Sieve img = empty_sieve(*p, mo[o]);
                for (Index m : s.member_list()) img.members.set(mm[m]);
                mapped.insert(img);
            }
            out.require(mapped == product_topology.covers[mo[o]], "covering sieves differ at " + p->object_name(mo[o]));
        }
        if (as_groupoid(share(j))) ++groupoid_fibres;
    }
    if (out.pass) out.detail = "10 samples (" + std::to_string(groupoid_fibres) + " with groupoid J)";
    return out;
}

// 4, 5 -----------------------------------------------------------------------

struct AdjunctionRun {
    std::size_t groupoid_instances = 0;
    std::size_t enriched_instances = 0;
    Outcome triangles;
    Outcome evidence;
    double seconds_triangles = 0;
    double seconds_evidence = 0;
};

const AdjunctionRun& adjunction_run() {
    static const AdjunctionRun run = [] {
        AdjunctionRun r;
        using clock = std::chrono::steady_clock;
        Rng rng(1004);
        std::vector<std::function<void()>> evidence_jobs;
        auto t0 = clock::now();
        for (int k = 0; k < 25; ++k) {
            const auto g = random_small_groupoid(rng, 3);
            const auto a = random_groupoid_diagram(rng, g, 4);
            const auto x = random_over_nerve(rng, g.category, 4, 12);
            r.triangles.require(check_triangles(a, x, 4).ok(), "groupoid instance " + std::to_string(k));
            ++r.groupoid_instances;
            evidence_jobs.push_back([&r, a, x, k] {
                r.evidence.require(we_evidence(unit_eta(x), 3).pass(), "eta, groupoid instance " + std::to_string(k));
                for (const auto& e : counit_epsilon(a)) {
                    r.evidence.require(we_evidence(e, 3).pass(), "epsilon, groupoid instance " + std::to_string(k));
                }
            });
        }
        for (int k = 0; k < 10; ++k) {
            const auto site = share(random_category(rng, 2, 4));
            const auto s = random_enriched_adjunction_sample(rng, site, 2, 4);
            const auto adj = presheaf_hocolim_pb(s.diagram, s.over, 4);
            r.triangles.require(adj.natural && adj.triangles.ok(), "enriched instance " + std::to_string(k));
            ++r.enriched_instances;
            evidence_jobs.push_back([&r, adj, k] {
                for (const auto& eta : adj.eta) {
                    r.evidence.require(we_evidence(eta, 3).pass(), "eta, enriched instance " + std::to_string(k));
                }
                for (const auto& section : adj.epsilon) {
                    for (const auto& e : section) {
                        r.evidence.require(we_evidence(e, 3).pass(), "epsilon, enriched instance " + std::to_string(k));
                    }
                }
            });
        }
        auto t1 = clock::now();
        for (auto& job : evidence_jobs) job();
        auto t2 = clock::now();
        r.seconds_triangles = std::chrono::duration<double>(t1 - t0).count();
        r.seconds_evidence = std::chrono::duration<double>(t2 - t1).count();
        return r;
    }();
    return run;
}

// 6 -------------------------------------------------------------------------

Outcome interchange_evidence() {
    Outcome out;
    const std::vector<std::pair<std::string, FiniteCategory>> cats{{"pt", terminal_category()},
                                                                   {"chain", chain_category(2)},
                                                                   {"Z2", cyclic_group_category(2)},
                                                                   {"E2", codiscrete_category({"a", "b"})}};
    for (const auto& [name, c] : cats) {
        const auto ic = interchange_comparison(c, 4);
        out.require(validate_simplicial_map(ic.phi).ok() && validate_simplicial_map(ic.psi).ok(),
                    name + ": comparison maps are not simplicial");
        out.require(we_evidence(ic.phi, 3).pass(), name + ": phi");
        out.require(we_evidence(ic.psi, 3).pass(), name + ": psi");
    }
    if (out.pass) out.detail = "pt, chain, Z2, E2";
    return out;
}

// 7 -------------------------------------------------------------------------

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
    Index find(Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(Index a, Index b) { parent[find(a)] = find(b); }
};

/// Compares left_kan_along(m, point) with the components of the commas b ↓ m(U),
/// enumerated here as pairs (a, h: b -> m(a)) glued along the arrows of A(U).
/// The comparison map sends (a, h) to h* of the unit element over a; it must
/// be constant on components, bijective and compatible with the site action.
void compare_kan_with_comma(const MorphismOfPresheavesOfCategories& m, Outcome& out) {
    const auto& dom = *m.domain;
    const auto& cod = *m.codomain;
    const auto point = constant_point(m.domain);
    const auto l = left_kan_along(m, point);
    const auto unit = kan_unit(m, point);
    const auto& site = *cod.site();

    // per codomain section: pairs, their classes and their images in l
    std::vector<std::map<std::pair<Index, Index>, Index>> class_of(cod.section_count());
    std::vector<std::map<Index, Index>> image_of_class(cod.section_count());
    for (Index s = 0; s < cod.section_count(); ++s) {
        const Index u = cod.section_base(s), b = cod.section_object(s);
        const auto& ca = dom.value(u);
        const auto& cb = cod.value(u);
        const auto& f = m.components[u];
        std::vector<std::pair<Index, Index>> pairs;
        std::map<std::pair<Index, Index>, Index> index;
        for (Index a = 0; a < ca.object_count(); ++a) {
            for (Index h : cb.hom(b, f.object_map[a])) {
                index[{a, h}] = pairs.size();
                pairs.emplace_back(a, h);
            }
        }
        UnionFind uf(pairs.size());
        for (Index g = 0; g < ca.morphism_count(); ++g) {
            for (Index h : cb.hom(b, f.object_map[ca.source(g)])) {
                uf.unite(index.at({ca.source(g), h}), index.at({ca.target(g), cb.compose(f.morphism_map[g], h)}));
            }
        }
        std::set<Index> hit;
        for (Index p = 0; p < pairs.size(); ++p) {
            const auto [a, h] = pairs[p];
            const Index e = l.category_action[u][h][unit[dom.section(u, a)][0]];
            const Index c = uf.find(p);
            class_of[s][pairs[p]] = c;
            auto [it, fresh] = image_of_class[s].emplace(c, e);
            out.require(it->second == e, "comparison map not constant on a component");
            if (fresh) out.require(hit.insert(e).second, "comparison map not injective");
        }
        out.require(hit.size() == l.sizes[s], "comparison map not surjective");
    }
    // site action: (a, h) at (U, b) goes to (α*a, α*h) at (V, α*b)
    for (Index alpha = 0; alpha < site.morphism_count(); ++alpha) {
        const Index u = site.target(alpha), v = site.source(alpha);
        const auto& ra = dom.along(alpha);
        const auto& rb = cod.along(alpha);
        for (Index b = 0; b < cod.value(u).object_count(); ++b) {
            const Index s = cod.section(u, b), t = cod.section(v, rb.object_map[b]);
            for (const auto& [pair, c] : class_of[s]) {
                const auto moved = std::make_pair(ra.object_map[pair.first], rb.morphism_map[pair.second]);
                const Index target = image_of_class[t].at(class_of[t].at(moved));
                out.require(l.site_action[alpha][b][image_of_class[s].at(c)] == target, "site action differs");
            }
        }
    }
}

Outcome kan_is_comma_components() {
    Outcome out;
    Rng rng(1007);
    std::size_t morphisms = 0, nontrivial = 0;
    for (int k = 0; k < 60; ++k) {
        auto c = share(random_category(rng, 3, 6));
        MorphismOfPresheavesOfCategories m;
        if (k % 2 == 0) {
            m = random_sectionwise_equivalence(rng, c, 3).map;
        } else {
            auto g = share(random_presheaf_of_groupoids(rng, c, 2));
            auto h = share(random_presheaf_of_groupoids(rng, c, 2));
            m = first_projection(share(product(*g, *h)), g);
        }
        if (!as_presheaf_of_groupoids(m.domain) || !as_presheaf_of_groupoids(m.codomain)) {
            out.require(false, "generator produced a non-groupoid presheaf");
            continue;
        }
        compare_kan_with_comma(m, out);
        const auto l = left_kan_along(m, constant_point(m.domain));
        if (std::any_of(l.sizes.begin(), l.sizes.end(), [](std::size_t n) { return n > 1; })) ++nontrivial;
        ++morphisms;
    }
    if (out.pass) {
        out.detail = std::to_string(morphisms) + " morphisms (" + std::to_string(nontrivial) +
                     " with a section of more than one component)";
    }
    return out;
}

// 8 -------------------------------------------------------------------------

Outcome z2_over_point() {
    Outcome out;
    auto pt = share(terminal_category());
    auto z2 = share(cyclic_group_category(2));
    const auto fs = grothendieck_construct(share(constant_presheaf(pt, z2)));
    const auto h = stack_cohomology(fs, constant_abelian(fs.total, {0}), 4);
    const auto expected = groups({{0}, {}, {2}, {}, {2}});
    out.require(h == expected, "stack cohomology differs from (Z, 0, Z/2, 0, Z/2)");
    out.require(oracle::group_bar_cohomology(*z2, 4) == expected, "bar-complex oracle differs");
    if (out.pass) out.detail = "H^0..H^4 = Z, 0, Z/2, 0, Z/2 by both code paths";
    return out;
}

// 9 -------------------------------------------------------------------------

Outcome homotopy_invariance() {
    Outcome out;
    Rng rng(1009);
    std::size_t largest = 0;
    for (int k = 0; k < 25; ++k) {
        auto site = share(random_category(rng, 3, 6));
        const auto e = random_sectionwise_equivalence(rng, site, 3);
        const auto fs = grothendieck_construct(e.codomain);
        const auto f = k % 3 == 0 ? constant_abelian(fs.total, {2}) : constant_abelian(fs.total, {0});
        const auto r = invariance_report(e.map, f, 3);
        out.require(r.pass(), "instance " + std::to_string(k));
        largest = std::max(largest, e.domain->section_count());
    }
    if (out.pass) out.detail = "25 equivalences, degrees 0..3, largest domain total " + std::to_string(largest) + " objects";
    return out;
}

// 10 ------------------------------------------------------------------------

Outcome smith_kernel() {
    Outcome out;
    Rng rng(1010);
    for (int k = 0; k < 1000; ++k) {
        IntegerMatrix m(1 + rng.below(8), 1 + rng.below(8));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rng.between(-10, 10);
        }
        const auto s = smith_normal_form(m);
        out.require(s.u * m * s.v == s.d, "U M V != D");
        const std::size_t n = std::min(s.d.rows(), s.d.cols());
        for (std::size_t i = 0; i < s.d.rows(); ++i) {
            for (std::size_t j = 0; j < s.d.cols(); ++j) out.require(i == j || s.d.at(i, j) == 0, "D not diagonal");
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const BigInt a = s.d.at(i, i), b = s.d.at(i + 1, i + 1);
            out.require(a >= 0 && b >= 0, "negative diagonal entry");
            out.require(a == 0 ? b == 0 : b % a == 0, "divisibility chain broken");
        }
        const BigInt du = determinant(s.u), dv = determinant(s.v);
        out.require((du == 1 || du == -1) && (dv == 1 || dv == -1), "U or V not unimodular");
    }
    if (out.pass) out.detail = "1000 matrices up to 8x8, entries in [-10, 10]";
    return out;
}

// 11 ------------------------------------------------------------------------

Outcome sheaf_machinery() {
    Outcome out;
    Rng rng(1011);
    std::size_t sheafified = 0, cech = 0;
    for (int k = 0; k < 60; ++k) {
        auto c = share(random_category(rng, 3, 8));
        const auto t = random_topology(rng, c);
        if (!verify_topology(t).ok()) {
            out.require(false, "sampled topology fails verification");
            continue;
        }
        for (int i = 0; i < 3; ++i) {
            const auto f = random_presheaf(rng, c, 3);
            out.require(is_sheaf(sheafify(f, t).sheaf, t).sheaf, "sheafification is not a sheaf");
            ++sheafified;
        }
        const std::vector<std::vector<BigInt>> coefficients{{2}, {3}, {2, 2}};
        const auto f = constant_abelian(c, coefficients[rng.below(coefficients.size())]);
        const auto p = underlying_presheaf(f);
        for (Index u = 0; u < c->object_count(); ++u) {
            for (const auto& s : t.covers[u]) {
                const auto h = cech_cohomology(t, u, s, f, 0);
                out.require(oracle::group_order(h[0]) == BigInt(matching_families(p, *c, s).size()),
                            "Cech H0 differs from the matching families");
                ++cech;
            }
        }
    }
    if (out.pass) {
        out.detail = std::to_string(sheafified) + " sheafifications, " + std::to_string(cech) + " Cech H0 comparisons";
    }
    return out;
}

// 12 ------------------------------------------------------------------------

int invoke(const std::vector<std::string>& args, std::string& text) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    text = out.str();
    return code;
}

std::vector<std::vector<std::string>> manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::vector<std::vector<std::string>> lines;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line.front() == '#') continue;
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string x; words >> x;) w.push_back(x);
        lines.push_back(std::move(w));
    }
    return lines;
}

Outcome cli_examples() {
    Outcome out;
    const auto bundles = example_bundles();
    for (const auto& name : bundles) cli::parse_bundle({source("docs/examples/" + name)});

    std::set<std::pair<std::string, std::string>> covered;
    std::size_t runs = 0;
    for (const auto& w : manifest(source("docs/examples/runs.txt"))) {
        // bundle command exit [options]
        std::vector<std::string> args{w[1]};
        args.insert(args.end(), w.begin() + 3, w.end());
        args.push_back(source("docs/examples/" + w[0]));
        for (const char* format : {"json", "markdown"}) {
            auto a = args;
            a.insert(a.begin() + 1, {"--format", format});
            std::string first, second;
            const int c1 = invoke(a, first), c2 = invoke(a, second);
            out.require(c1 == std::stoi(w[2]) && c2 == c1, w[0] + " " + w[1] + ": exit " + std::to_string(c1));
            out.require(first == second, w[0] + " " + w[1] + ": output differs between runs");
        }
        covered.emplace(w[0], w[1]);
        ++runs;
    }
    for (const auto& name : bundles) {
        for (const auto& c : cli::commands()) out.require(covered.count({name, c}) > 0, name + " " + c + " not in runs.txt");
    }

    std::set<int> codes;
    for (const auto& w : manifest(source("tests/fixtures/cli/cases.txt"))) {
        std::vector<std::string> args;
        for (auto it = w.begin() + 1; it != w.end(); ++it) args.push_back(it->find('/') != std::string::npos ? source(*it) : *it);
        std::string text;
        const int code = invoke(args, text);
        out.require(code == std::stoi(w[0]), "fixture exits " + std::to_string(code) + ": " + w[1]);
        codes.insert(std::stoi(w[0]));
    }
    out.require(codes == std::set<int>{0, 1, 2, 3, 4, 5}, "an exit code has no fixture");
    if (out.pass) {
        out.detail = std::to_string(bundles.size()) + " bundles, " + std::to_string(runs) +
                     " runs twice in both formats, exit codes 0-5 by fixture";
    }
    return out;
}

struct Criterion {
    int id;
    std::string title;
    double limit;  // seconds
    std::function<Outcome()> run;
    std::function<double(double)> seconds = [](double measured) { return measured; };
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    const std::vector<Criterion> criteria{
        {1, "induced topologies verify", 60, topology_soundness},
        {2, "presheaf/enriched round trip", 10, enriched_round_trip},
        {3, "constant fibre is the product site", 10, constant_is_product},
        {4, "triangle identities at truncation 4", 120,
         [] {
             const auto& r = adjunction_run();
             Outcome o = r.triangles;
             if (o.pass) {
                 o.detail = std::to_string(r.groupoid_instances) + " groupoid and " +
                            std::to_string(r.enriched_instances) + " enriched instances";
             }
             return o;
         },
         [](double measured) { return measured - adjunction_run().seconds_evidence; }},
        {5, "unit and counit weak-equivalence evidence", 120,
         [] {
             const auto& r = adjunction_run();
             Outcome o = r.evidence;
             if (o.pass) o.detail = "pi0 and homology through degree 3 on the instances of 4 (evidence, not proof)";
             return o;
         },
         [](double) { return adjunction_run().seconds_evidence; }},
        {6, "interchange comparisons phi and psi", 60, interchange_evidence},
        {7, "Kan extension of the point is pi0 of the comma", 30, kan_is_comma_components},
        {8, "stack cohomology of Z/2 over the point", 10, z2_over_point},
        {9, "homotopy invariance of cohomology", 300, homotopy_invariance},
        {10, "Smith normal form contract", 10, smith_kernel},
        {11, "sheafification and Cech H0", 60, sheaf_machinery},
        {12, "command-line examples and exit codes", 30, cli_examples},
    };

    bool all = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            c.seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        const bool in_time = seconds < c.limit;
        const bool pass = o.pass && in_time;
        all = all && pass;
        std::printf("%s %2d %-48s %7.2fs / %3.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), seconds,
                    c.limit, in_time ? "" : "time limit exceeded; ", o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
