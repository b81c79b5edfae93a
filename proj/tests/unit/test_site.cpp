#include <gtest/gtest.h>

#include "fibsite/random.hpp"
#include "fibsite/site.hpp"

using namespace fibsite;

namespace {

/// W -> V -> U with all composites.
CategoryRef chain_wvu() {
    CategoryBuilder b;
    b.add_object("W");
    b.add_object("V");
    b.add_object("U");
    b.add_morphism("wv", "W", "V");
    b.add_morphism("vu", "V", "U");
    b.add_morphism("wu", "W", "U");
    b.set_compose("vu", "wv", "wu");
    return share(b.build());
}

/// a: V -> U.
CategoryRef arrow_site() {
    CategoryBuilder b;
    b.add_object("V");
    b.add_object("U");
    b.add_morphism("a", "V", "U");
    return share(b.build());
}

/// Topology on the arrow site in which <a> covers U.
GrothendieckTopology arrow_topology(const CategoryRef& c) {
    const Index u = c->object_index("U");
    return topology_from_covers(c, {{}, {sieve_from_generators(*c, u, {c->morphism_index("a")})}});
}

std::vector<std::string> names(const FiniteCategory& c, const Sieve& s) {
    std::vector<std::string> out;
    for (Index m : s.member_list()) out.push_back(c.morphism_name(m));
    std::sort(out.begin(), out.end());
    return out;
}

bool sectionwise_bijective(const Presheaf& a, const Presheaf& b) {
    return a.sizes == b.sizes;
}

}  // namespace

TEST(Sieve, Generators) {
    auto c = chain_wvu();
    const Index u = c->object_index("U");
    EXPECT_EQ(sieve_from_generators(*c, u, {}).size(), 0u);
    EXPECT_EQ(sieve_from_generators(*c, u, {c->identity(u)}), maximal_sieve(*c, u));
    const auto s = sieve_from_generators(*c, u, {c->morphism_index("vu")});
    EXPECT_EQ(names(*c, s), (std::vector<std::string>{"vu", "wu"}));
    EXPECT_EQ(sieve_from_generators(*c, u, s.member_list()), s);
    EXPECT_THROW(sieve_from_generators(*c, u, {c->morphism_index("wv")}), InputError);
}

TEST(Sieve, Pullback) {
    auto c = chain_wvu();
    const Index u = c->object_index("U");
    const Index v = c->object_index("V");
    const auto s = sieve_from_generators(*c, u, {c->morphism_index("vu")});
    EXPECT_EQ(pullback_sieve(*c, s, c->identity(u)), s);
    EXPECT_EQ(pullback_sieve(*c, maximal_sieve(*c, u), c->morphism_index("vu")), maximal_sieve(*c, v));
    EXPECT_EQ(pullback_sieve(*c, s, c->morphism_index("vu")), maximal_sieve(*c, v));
    const auto w = sieve_from_generators(*c, u, {c->morphism_index("wu")});
    const auto pw = pullback_sieve(*c, w, c->morphism_index("vu"));
    EXPECT_EQ(names(*c, pw), (std::vector<std::string>{"wv"}));
    EXPECT_THROW(pullback_sieve(*c, s, c->morphism_index("wv")), InputError);
}

TEST(Sieve, PullbackIsFunctorial) {
    Rng rng(17);
    for (int k = 0; k < 40; ++k) {
        auto c = share(random_category(rng, 4, 12));
        for (Index u = 0; u < c->object_count(); ++u) {
            for (const auto& s : enumerate_sieves(*c, u)) {
                ASSERT_TRUE(is_sieve(*c, s));
                for (Index alpha : c->morphisms_into(u)) {
                    const auto p = pullback_sieve(*c, s, alpha);
                    ASSERT_TRUE(is_sieve(*c, p));
                    for (Index gamma : c->morphisms_into(c->source(alpha))) {
                        EXPECT_EQ(pullback_sieve(*c, p, gamma), pullback_sieve(*c, s, c->compose(alpha, gamma)));
                    }
                }
            }
        }
    }
}

TEST(Sieve, EnumerationMatchesBruteForce) {
    Rng rng(2);
    for (int k = 0; k < 30; ++k) {
        auto c = share(random_category(rng, 3, 8));
        for (Index u = 0; u < c->object_count(); ++u) {
            const auto into = c->morphisms_into(u);
            std::size_t brute = 0;
            for (std::size_t mask = 0; mask < (std::size_t{1} << into.size()); ++mask) {
                Sieve s{u, boost::dynamic_bitset<>(c->morphism_count())};
                for (std::size_t i = 0; i < into.size(); ++i) {
                    if (mask >> i & 1) s.members.set(into[i]);
                }
                if (is_sieve(*c, s)) ++brute;
            }
            EXPECT_EQ(enumerate_sieves(*c, u).size(), brute);
        }
    }
}

TEST(Topology, TrivialVerifies) {
    Rng rng(1);
    for (int k = 0; k < 30; ++k) {
        auto c = share(random_category(rng, 4, 12));
        EXPECT_TRUE(verify_topology(trivial_topology(c)).ok());
        EXPECT_TRUE(trivial_topology(c).is_trivial());
    }
}

TEST(Topology, MissingMaximalSieveReported) {
    auto c = arrow_site();
    GrothendieckTopology t = arrow_topology(c);
    const Index u = c->object_index("U");
    t.covers[u].erase(maximal_sieve(*c, u));
    const auto r = verify_topology(t);
    bool maximal = false, local = false;
    for (const auto& v : r.violations) {
        maximal = maximal || v.find("maximal sieve") == 0;
        local = local || v.find("local character") == 0;
    }
    EXPECT_TRUE(maximal);
    EXPECT_TRUE(local);
}

TEST(Topology, ArrowCoverIsATopology) {
    auto c = arrow_site();
    EXPECT_TRUE(verify_topology(arrow_topology(c)).ok());
}

TEST(Topology, GeneratedTopologiesVerify) {
    Rng rng(23);
    for (int k = 0; k < 60; ++k) {
        auto c = share(random_category(rng, 3, 8));
        EXPECT_TRUE(verify_topology(random_topology(rng, c)).ok());
    }
}

TEST(Topology, CapExceeded) {
    auto c = share(chain_category(5));
    EXPECT_THROW(verify_topology(trivial_topology(c)), CapExceeded);
    SiteLimits big;
    big.max_objects = 6;
    big.max_morphisms = 21;
    EXPECT_TRUE(verify_topology(trivial_topology(c), big).ok());
}

TEST(Sheaf, TrivialTopologyEverythingIsASheaf) {
    Rng rng(8);
    for (int k = 0; k < 30; ++k) {
        auto c = share(random_category(rng, 3, 8));
        EXPECT_TRUE(is_sheaf(random_presheaf(rng, c, 3), trivial_topology(c)).sheaf);
    }
}

TEST(Sheaf, ExistenceFailure) {
    auto c = arrow_site();
    Presheaf f{c, Variance::contravariant, {2, 1}, {}, {}};
    f.action.resize(c->morphism_count());
    f.action[c->morphism_index("id_V")] = {0, 1};
    f.action[c->morphism_index("id_U")] = {0};
    f.action[c->morphism_index("a")] = {0};
    ASSERT_TRUE(validate_set_functor(f).ok());
    const auto t = arrow_topology(c);
    const auto check = is_sheaf(f, t);
    ASSERT_FALSE(check.sheaf);
    ASSERT_TRUE(check.witness.has_value());
    EXPECT_EQ(check.witness->failure, SheafWitness::Failure::existence);
    EXPECT_EQ(check.witness->object, c->object_index("U"));
    EXPECT_EQ(matching_families(f, *c, check.witness->sieve).size(), 2u);

    const auto a = sheafify(f, t);
    EXPECT_TRUE(is_sheaf(a.sheaf, t).sheaf);
    EXPECT_EQ(a.sheaf.sizes, (std::vector<std::size_t>{2, 2}));
    EXPECT_TRUE(validate_set_functor(a.sheaf).ok());
}

TEST(Sheaf, IdentityRestrictionIsASheaf) {
    auto c = arrow_site();
    Presheaf f{c, Variance::contravariant, {2, 2}, {}, {}};
    f.action.assign(c->morphism_count(), {0, 1});
    EXPECT_TRUE(is_sheaf(f, arrow_topology(c)).sheaf);
}

TEST(Sheaf, UniquenessFailure) {
    auto c = arrow_site();
    Presheaf f{c, Variance::contravariant, {1, 2}, {}, {}};
    f.action.resize(c->morphism_count());
    f.action[c->morphism_index("id_V")] = {0};
    f.action[c->morphism_index("id_U")] = {0, 1};
    f.action[c->morphism_index("a")] = {0, 0};
    const auto check = is_sheaf(f, arrow_topology(c));
    ASSERT_FALSE(check.sheaf);
    EXPECT_EQ(check.witness->failure, SheafWitness::Failure::uniqueness);
    EXPECT_EQ(check.witness->sections.size(), 2u);
}

TEST(Sheafify, EmptyPresheaf) {
    auto c = arrow_site();
    Presheaf f{c, Variance::contravariant, {0, 0}, std::vector<std::vector<Index>>(c->morphism_count()), {}};
    const auto a = sheafify(f, trivial_topology(c));
    EXPECT_EQ(a.sheaf.sizes, (std::vector<std::size_t>{0, 0}));
}

TEST(Sheafify, SheavesAndIdempotence) {
    Rng rng(31);
    for (int k = 0; k < 60; ++k) {
        auto c = share(random_category(rng, 3, 8));
        const auto t = random_topology(rng, c);
        const auto f = random_presheaf(rng, c, 3);
        const auto a = sheafify(f, t);
        ASSERT_TRUE(validate_set_functor(a.sheaf).ok());
        EXPECT_TRUE(is_sheaf(a.sheaf, t).sheaf);
        const auto aa = sheafify(a.sheaf, t);
        EXPECT_TRUE(sectionwise_bijective(a.sheaf, aa.sheaf));
        // on a sheaf the unit is a natural isomorphism
        EXPECT_TRUE(is_natural_iso(a.sheaf, aa.sheaf, aa.unit));
        if (is_sheaf(f, t).sheaf) EXPECT_TRUE(is_natural_iso(f, a.sheaf, a.unit));
    }
}
