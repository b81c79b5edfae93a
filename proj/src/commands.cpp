#include <chrono>
#include <functional>

#include "fibsite/cli.hpp"
#include "fibsite/errors.hpp"
#include "fibsite/hocopb.hpp"
#include "fibsite/random.hpp"
#include "fibsite/sset.hpp"

namespace fibsite::cli {

using nlohmann::ordered_json;

namespace {

class Timer {
public:
    explicit Timer(Report& r, bool enabled) : report_(r), enabled_(enabled) {}

    template <class F>
    auto phase(const std::string& name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        auto finish = [&] {
            if (enabled_) {
                report_.timings.emplace_back(name,
                                             std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            }
        };
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            finish();
        } else {
            auto out = f();
            finish();
            return out;
        }
    }

private:
    Report& report_;
    bool enabled_;
};

void verdict(Report& r, std::string name, bool pass, std::string detail = {}) {
    r.verdicts.push_back({std::move(name), pass, std::move(detail)});
}

void verdict(Report& r, std::string name, const ValidationReport& v) {
    verdict(r, std::move(name), v.ok(), v.ok() ? std::string{} : v.violations.front());
}

ordered_json groups_json(const std::vector<FgAbelianGroup>& gs) {
    ordered_json out = ordered_json::array();
    for (std::size_t n = 0; n < gs.size(); ++n) out.push_back({{"degree", n}, {"factors", group_json(gs[n])}});
    return out;
}

const FibredSite& need_fibred(const Bundle& b, const std::string& command) {
    if (!b.fibred) throw InputError(command + ": the bundle declares no psheaf-cat");
    return *b.fibred;
}

/// The category the command works on: the total category when there is a
/// psheaf-cat, else the site.
struct Target {
    CategoryRef category;
    std::string name;
    bool total = false;
};

Target target_category(const Bundle& b) {
    if (b.fibred) return {b.fibred->total, b.fibres_name + " (total)", true};
    return {b.categories[b.site], b.category_names[b.site], false};
}

/// Coefficients over the target: the declared ones when they live there,
/// else the constant integers.
AbelianPresheaf coefficients_on(const Bundle& b, const Target& t, std::string& label) {
    if (b.coefficients) {
        if (!(*b.coefficients->base == *t.category)) {
            throw InputError("abpresheaf " + b.coefficients_name + " is not over " + t.name);
        }
        label = b.coefficients_name;
        return *b.coefficients;
    }
    label = "constant Z";
    return constant_abelian(t.category, {0});
}

bool finite(const AbelianPresheaf& f) {
    for (const auto& os : f.orders) {
        for (const auto& n : os) {
            if (n == 0) return false;
        }
    }
    return true;
}

BigInt order(const FgAbelianGroup& g) {
    BigInt n = 1;
    for (const auto& f : g.factors) n *= f;
    return n;
}

std::string sieve_text(const FiniteCategory& c, const std::vector<Index>& generators) {
    std::string out = "<";
    for (std::size_t i = 0; i < generators.size(); ++i) out += (i ? " " : "") + c.morphism_name(generators[i]);
    return out + ">";
}

std::string key_text(const FiniteCategory& c, const Key& k) {
    std::string out = c.object_name(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) out += " " + c.morphism_name(k[i]);
    return out;
}

// Commands ------------------------------------------------------------------

void cmd_validate(const Bundle& b, Report& r, Timer&) {
    ordered_json cats = ordered_json::array();
    for (std::size_t i = 0; i < b.categories.size(); ++i) {
        const auto& c = b.categories[i];
        cats.push_back({{"name", b.category_names[i]},
                        {"objects", c->object_count()},
                        {"morphisms", c->morphism_count()},
                        {"groupoid", as_groupoid(c).has_value()}});
        verdict(r, "category " + b.category_names[i], validate_category(*c));
    }
    r.payload["categories"] = std::move(cats);
    r.payload["site"] = b.category_names[b.site];
    r.payload["covers"] = b.covers.size();
    r.payload["trivial topology"] = b.topology.is_trivial();
    if (b.fibres) {
        verdict(r, "psheaf-cat " + b.fibres_name, validate_presheaf_of_categories(*b.fibres));
        r.payload["psheaf-cat"] = {{"name", b.fibres_name},
                                   {"sections", b.fibres->section_count()},
                                   {"groupoids", as_presheaf_of_groupoids(b.fibres).has_value()}};
    }
    if (b.coefficients) {
        verdict(r, "abpresheaf " + b.coefficients_name, validate_abelian_presheaf(*b.coefficients));
        r.payload["abpresheaf"] = {{"name", b.coefficients_name},
                                   {"over", b.coefficients_over},
                                   {"finite", finite(*b.coefficients)}};
    }
}

void cmd_fibred_build(const Bundle& b, Report& r, Timer&) {
    const auto& fs = need_fibred(b, "fibred-build");
    const auto& t = *fs.total;
    verdict(r, "total category", validate_category(t));
    verdict(r, "projection functor", validate_functor(fs.projection));
    ordered_json objects = ordered_json::array();
    for (Index o = 0; o < t.object_count(); ++o) {
        objects.push_back({{"object", t.object_name(o)}, {"over", b.site_category().object_name(fs.projection.on_object(o))}});
    }
    ordered_json mors = ordered_json::array();
    for (Index m = 0; m < t.morphism_count(); ++m) {
        mors.push_back({{"morphism", t.morphism_name(m)},
                        {"source", t.object_name(t.source(m))},
                        {"target", t.object_name(t.target(m))}});
    }
    r.payload["objects"] = t.object_count();
    r.payload["morphisms"] = t.morphism_count();
    r.payload["groupoid"] = as_groupoid(fs.total).has_value();
    r.payload["total objects"] = std::move(objects);
    r.payload["total morphisms"] = std::move(mors);
}

ordered_json cover_counts(const GrothendieckTopology& t) {
    ordered_json out = ordered_json::array();
    for (Index o = 0; o < t.site->object_count(); ++o) {
        out.push_back({{"object", t.site->object_name(o)}, {"covering sieves", t.covers[o].size()}});
    }
    return out;
}

void cmd_topology_check(const Bundle& b, Report& r, Timer& timer) {
    timer.phase("base", [&] { verdict(r, "base topology", verify_topology(b.topology)); });
    r.payload["base"] = cover_counts(b.topology);
    if (!b.fibred) return;
    const auto induced = timer.phase("induce", [&] { return induced_topology(*b.fibred, b.topology); });
    timer.phase("induced", [&] { verdict(r, "induced topology", verify_topology(induced, SiteLimits::total())); });
    r.payload["induced"] = cover_counts(induced);
}

void sheaf_entry(Report& r, ordered_json& list, const std::string& name, const Presheaf& p, const GrothendieckTopology& t) {
    const auto check = is_sheaf(p, t);
    const auto a = sheafify(p, t);
    const auto again = is_sheaf(a.sheaf, t);
    ordered_json entry{{"presheaf", name}, {"sheaf", check.sheaf}, {"witness", ""}};
    if (check.witness) {
        const auto& w = *check.witness;
        entry["witness"] = std::string(w.failure == SheafWitness::Failure::existence ? "no amalgamation" : "two amalgamations") +
                           " on " + describe(*t.site, w.sieve);
    }
    verdict(r, name + " is a sheaf", check.sheaf, entry["witness"].get<std::string>());
    verdict(r, name + ": sheafification is a sheaf", again.sheaf);
    list.push_back(std::move(entry));
    if (check.sheaf) {
        bool bijective = true;
        for (Index o = 0; o < p.sizes.size(); ++o) {
            std::vector<Index> image = a.unit[o];
            std::sort(image.begin(), image.end());
            bijective = bijective && image.size() == a.sheaf.sizes[o] &&
                        std::adjacent_find(image.begin(), image.end()) == image.end();
        }
        verdict(r, name + ": unit is a bijection on a sheaf", bijective);
    }
}

void cmd_sheaf_check(const Bundle& b, Report& r, Timer& timer) {
    ordered_json list = ordered_json::array();
    if (b.fibres) {
        timer.phase("objects and morphisms", [&] {
            sheaf_entry(r, list, "Ob(" + b.fibres_name + ")", object_presheaf(*b.fibres), b.topology);
            sheaf_entry(r, list, "Mor(" + b.fibres_name + ")", morphism_presheaf(*b.fibres), b.topology);
        });
    }
    if (b.coefficients) {
        if (!finite(*b.coefficients)) {
            r.payload["note"] = "abpresheaf " + b.coefficients_name + " has infinite values and is not checked";
        } else {
            const auto p = underlying_presheaf(*b.coefficients);
            GrothendieckTopology t = trivial_topology(b.coefficients->base);
            if (b.fibred && b.coefficients_over == b.fibres_name) {
                t = induced_topology(*b.fibred, b.topology);
            } else if (*b.coefficients->base == b.site_category()) {
                t = b.topology;
            }
            timer.phase("coefficients", [&] { sheaf_entry(r, list, b.coefficients_name, p, t); });
        }
    }
    r.payload["presheaves"] = std::move(list);
}

void cmd_cohomology(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    const auto t = target_category(b);
    std::string label;
    const auto f = coefficients_on(b, t, label);
    if (!b.topology.is_trivial()) {
        throw RefusedError("cohomology: exact stack cohomology needs the trivial topology; use cech for a covering sieve");
    }
    const auto cc = timer.phase("complex", [&] { return cochain_complex(*t.category, f, o.n_max, true, o.cap); });
    verdict(r, "cochain complex squares to zero", squares_to_zero(cc));
    const auto h = timer.phase("cohomology", [&] { return cohomology_of_complex(cc); });
    r.payload["category"] = t.name;
    r.payload["coefficients"] = label;
    r.payload["strings"] = cc.strings;
    r.payload["cohomology"] = groups_json(h);
}

void cmd_cech(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    const auto t = target_category(b);
    std::string label;
    const auto f = coefficients_on(b, t, label);
    const auto& site = b.site_category();
    const GrothendieckTopology top =
        t.total ? timer.phase("induce", [&] { return induced_topology(*b.fibred, b.topology); }) : b.topology;
    const bool check_h0 = finite(f);
    const auto p = check_h0 ? underlying_presheaf(f) : Presheaf{};
    ordered_json list = ordered_json::array();
    timer.phase("cech", [&] {
        for (const auto& cv : b.covers) {
            const Sieve s = sieve_from_generators(site, cv.object, cv.generators);
            std::vector<std::pair<Index, Sieve>> targets;
            if (t.total) {
                for (Index x = 0; x < b.fibres->value(cv.object).object_count(); ++x) {
                    targets.emplace_back(b.fibres->section(cv.object, x), inverse_image(*b.fibred, s, x));
                }
            } else {
                targets.emplace_back(cv.object, s);
            }
            for (const auto& [u, sieve] : targets) {
                const auto h = cech_cohomology(top, u, sieve, f, o.n_max, o.cap);
                const std::string where = t.category->object_name(u) + " over " + sieve_text(site, cv.generators);
                if (check_h0) {
                    const auto families = matching_families(p, *t.category, sieve).size();
                    verdict(r, "H0 at " + where + " counts matching families", order(h[0]) == families,
                            std::to_string(families) + " families");
                }
                list.push_back({{"object", t.category->object_name(u)},
                                {"cover", sieve_text(site, cv.generators)},
                                {"cohomology", groups_json(h)}});
            }
        }
    });
    r.payload["category"] = t.name;
    r.payload["coefficients"] = label;
    r.payload["cech"] = std::move(list);
}

void cmd_adjunction_check(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    need_fibred(b, "adjunction-check");
    const auto g = as_presheaf_of_groupoids(b.fibres);
    if (!g) throw InputError("adjunction-check: the psheaf-cat " + b.fibres_name + " is not a presheaf of groupoids");
    if (o.truncation < 2) throw InputError("adjunction-check: truncation must be at least 2");
    const std::size_t d = o.truncation - 1;
    const std::size_t top = d - 1;
    r.payload["dimension"] = d;
    r.payload["evidence degrees"] = top;
    for (const auto& gu : g->groupoids) {
        // hocolim pb N(G) has about |N_d|² · |hom| simplices in degree d
        const auto& c = gu.cat();
        std::vector<double> ending(c.object_count(), 1.0);
        for (std::size_t n = 0; n < d; ++n) {
            std::vector<double> next(c.object_count(), 0.0);
            for (Index m = 0; m < c.morphism_count(); ++m) next[c.target(m)] += ending[c.source(m)];
            ending = std::move(next);
        }
        double strings = 0;
        for (double e : ending) strings += e;
        const double hom = c.object_count() ? static_cast<double>(c.morphism_count()) / c.object_count() : 0.0;
        if (strings * strings * hom > static_cast<double>(o.cap)) {
            throw CapExceeded("adjunction-check: about " + std::to_string(static_cast<std::size_t>(strings * strings * hom)) +
                              " simplices in degree " + std::to_string(d) + "; lower --truncation");
        }
    }

    const auto adj = timer.phase("sectionwise", [&] {
        const auto a = discrete_enriched(constant_point(b.fibres), d);
        const auto x = nerve_over_itself(*g, d);
        return presheaf_hocolim_pb(a, x, d);
    });
    verdict(r, "site actions are natural", adj.natural);
    verdict(r, "triangle identities, every section", adj.triangles.ok());
    const auto& site = b.site_category();
    ordered_json sections = ordered_json::array();
    bool eta_all = true;
    bool eps_all = true;
    timer.phase("evidence", [&] {
        for (Index u = 0; u < site.object_count(); ++u) {
            const bool eta = we_evidence(adj.eta[u], top).pass();
            bool eps = true;
            for (const auto& e : adj.epsilon[u]) eps = eps && we_evidence(e, top).pass();
            eta_all = eta_all && eta;
            eps_all = eps_all && eps;
            sections.push_back({{"object", site.object_name(u)},
                                {"groupoid objects", g->groupoids[u].cat().object_count()},
                                {"eta evidence", eta},
                                {"epsilon evidence", eps}});
        }
    });
    verdict(r, "eta passes weak-equivalence evidence", eta_all);
    verdict(r, "every epsilon_y passes weak-equivalence evidence", eps_all);
    r.payload["sections"] = std::move(sections);

    Rng rng(o.seed);
    ordered_json samples = ordered_json::array();
    bool samples_ok = true;
    timer.phase("samples", [&] {
        for (Index u = 0; u < site.object_count(); ++u) {
            const auto& gu = g->groupoids[u];
            if (gu.cat().object_count() == 0) continue;
            for (std::size_t k = 0; k < o.samples; ++k) {
                const auto a = random_groupoid_diagram(rng, gu, d);
                const auto x = random_over_nerve(rng, gu.category, d, 12);
                const bool tri = check_triangles(a, x, d).ok();
                bool eta = we_evidence(unit_eta(x), top).pass();
                bool eps = true;
                for (const auto& e : counit_epsilon(a)) eps = eps && we_evidence(e, top).pass();
                samples_ok = samples_ok && tri && eta && eps;
                samples.push_back({{"object", site.object_name(u)},
                                   {"sample", k},
                                   {"triangles", tri},
                                   {"eta evidence", eta},
                                   {"epsilon evidence", eps}});
            }
        }
    });
    verdict(r, "random samples: triangles and evidence", samples_ok, std::to_string(samples.size()) + " samples");
    r.payload["samples"] = std::move(samples);
}

void cmd_invariance_check(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    const auto& fs = need_fibred(b, "invariance-check");
    const Target t{fs.total, b.fibres_name + " (total)", true};
    std::string label;
    const auto f = coefficients_on(b, t, label);
    auto e2 = constant_presheaf(b.categories[b.site], share(codiscrete_category({"a", "b"})));
    auto domain = share(product(*b.fibres, e2));
    const auto m = first_projection(domain, b.fibres);
    verdict(r, "projection is a sectionwise equivalence", is_sectionwise_equivalence(m));
    const auto report = timer.phase("cohomology", [&] { return invariance_report(m, f, o.n_max, b.topology, o.cap); });
    for (std::size_t n = 0; n < report.match.size(); ++n) {
        verdict(r, "H" + std::to_string(n) + " agrees", report.match[n],
                report.codomain[n].to_string() + " vs " + report.domain[n].to_string());
    }
    r.payload["map"] = b.fibres_name + " x E2 -> " + b.fibres_name;
    r.payload["coefficients"] = label;
    r.payload["codomain"] = groups_json(report.codomain);
    r.payload["domain"] = groups_json(report.domain);
}

/// The nerve, after counting its strings: CapExceeded past `cap` simplices.
TruncatedSimplicialSet capped_nerve(const FiniteCategory& c, std::size_t dim, std::size_t cap) {
    std::vector<double> ending(c.object_count(), 1.0);  // strings ending at each object
    double total = static_cast<double>(c.object_count());
    for (std::size_t n = 1; n <= dim; ++n) {
        std::vector<double> next(c.object_count(), 0.0);
        for (Index m = 0; m < c.morphism_count(); ++m) next[c.target(m)] += ending[c.source(m)];
        ending = std::move(next);
        for (double e : ending) total += e;
        if (total > static_cast<double>(cap)) {
            throw CapExceeded("nerve: more than " + std::to_string(cap) + " simplices up to degree " + std::to_string(n));
        }
    }
    return nerve(c, dim);
}

void cmd_homology(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    const auto t = target_category(b);
    if (o.truncation < 1) throw InputError("homology: truncation must be at least 1");
    const std::size_t top = o.truncation - 1;
    const auto n = timer.phase("nerve", [&] { return capped_nerve(*t.category, o.truncation, o.cap); });
    const auto h = timer.phase("normalized", [&] { return homology(n, top); });
    const auto u = timer.phase("unnormalized", [&] { return homology_unnormalized(n, top); });
    verdict(r, "normalized and unnormalized chains agree", h.groups == u.groups);
    r.payload["category"] = t.name;
    r.payload["components"] = h.components;
    r.payload["homology"] = groups_json(h.groups);
}

void cmd_nerve_export(const Bundle& b, Report& r, const RunOptions& o, Timer& timer) {
    const auto t = target_category(b);
    const auto n = timer.phase("nerve", [&] { return capped_nerve(*t.category, o.truncation, o.cap); });
    verdict(r, "simplicial identities", validate_simplicial_set(n));
    ordered_json degrees = ordered_json::array();
    for (std::size_t k = 0; k <= n.dim(); ++k) {
        ordered_json simplices = ordered_json::array();
        for (Index x = 0; x < n.count(k); ++x) {
            ordered_json faces = ordered_json::array();
            if (k > 0) {
                for (std::size_t i = 0; i <= k; ++i) faces.push_back(n.d(k, i, x));
            }
            simplices.push_back({{"index", x},
                                 {"string", key_text(*t.category, n.key(k, x))},
                                 {"degenerate", n.degenerate(k, x)},
                                 {"faces", std::move(faces)}});
        }
        degrees.push_back({{"degree", k}, {"count", n.count(k)}, {"nondegenerate", n.nondegenerate_count(k)},
                           {"simplices", std::move(simplices)}});
    }
    r.payload["category"] = t.name;
    r.payload["dimension"] = n.dim();
    r.payload["degrees"] = std::move(degrees);
}

}  // namespace

Report run(const std::string& command, const Bundle& bundle, const RunOptions& options) {
    Report r;
    r.command = command;
    r.files = bundle.paths;
    r.input_hash = bundle.content_hash;
    r.options = {{"seed", options.seed},
                 {"truncation", options.truncation},
                 {"nmax", options.n_max},
                 {"samples", options.samples},
                 {"cap", options.cap}};
    Timer timer(r, options.timings);
    if (command == "validate") {
        cmd_validate(bundle, r, timer);
    } else if (command == "fibred-build") {
        cmd_fibred_build(bundle, r, timer);
    } else if (command == "topology-check") {
        cmd_topology_check(bundle, r, timer);
    } else if (command == "sheaf-check") {
        cmd_sheaf_check(bundle, r, timer);
    } else if (command == "cohomology") {
        cmd_cohomology(bundle, r, options, timer);
    } else if (command == "cech") {
        cmd_cech(bundle, r, options, timer);
    } else if (command == "adjunction-check") {
        cmd_adjunction_check(bundle, r, options, timer);
    } else if (command == "invariance-check") {
        cmd_invariance_check(bundle, r, options, timer);
    } else if (command == "homology") {
        cmd_homology(bundle, r, options, timer);
    } else if (command == "nerve-export") {
        cmd_nerve_export(bundle, r, options, timer);
    } else {
        throw InputError("unknown command " + command);
    }
    return r;
}

}  // namespace fibsite::cli
