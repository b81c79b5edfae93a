#include <gtest/gtest.h>

#include "fibsite/fincat.hpp"
#include "fibsite/random.hpp"

using namespace fibsite;

namespace {

bool mentions(const ValidationReport& r, const std::string& what) {
    for (const auto& v : r.violations) {
        if (v.find(what) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(ValidateCategory, TerminalIsValid) {
    EXPECT_TRUE(validate_category(terminal_category()).ok());
}

TEST(ValidateCategory, UnitLawViolationReported) {
    CategoryBuilder b;
    b.add_object("V");
    b.add_object("U");
    b.add_morphism("a", "V", "U");
    b.add_morphism("b", "V", "U");
    b.set_compose("a", "id_V", "b");
    const auto r = validate_category(b.build());
    EXPECT_TRUE(mentions(r, "unit law"));
}

TEST(ValidateCategory, ThreeObjectChain) {
    const auto c = chain_category(2);
    EXPECT_EQ(c.object_count(), 3u);
    EXPECT_EQ(c.morphism_count(), 6u);
    EXPECT_TRUE(validate_category(c).ok());
}

TEST(ValidateCategory, MissingCompositeReported) {
    CategoryBuilder b;
    b.add_object("a");
    b.add_object("b");
    b.add_object("c");
    b.add_morphism("f", "a", "b");
    b.add_morphism("g", "b", "c");
    EXPECT_TRUE(mentions(validate_category(b.build()), "missing composite"));
}

TEST(Opposite, TerminalAndInvolution) {
    EXPECT_EQ(opposite(terminal_category()), terminal_category());
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        const auto c = random_category(rng, 4, 12);
        EXPECT_EQ(opposite(opposite(c)), c);
        EXPECT_TRUE(validate_category(opposite(c)).ok());
    }
}

TEST(Opposite, ChainReversesArrows) {
    const auto c = chain_category(2);
    const auto op = opposite(c);
    std::size_t non_identity = 0;
    for (Index m = 0; m < op.morphism_count(); ++m) {
        if (op.is_identity(m)) continue;
        ++non_identity;
        EXPECT_EQ(op.source(m), c.target(m));
        EXPECT_EQ(op.target(m), c.source(m));
    }
    EXPECT_EQ(non_identity, 3u);
    EXPECT_EQ(op.morphism_count(), c.morphism_count());
}

TEST(RandomCategories, LawsHoldExhaustively) {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto c = random_category(rng, 4, 12);
        EXPECT_LE(c.object_count(), 4u);
        EXPECT_LE(c.morphism_count(), 12u);
        EXPECT_TRUE(validate_category(c).ok());
    }
}

TEST(Groupoid, CyclicAndCodiscrete) {
    auto z2 = share(cyclic_group_category(2));
    auto g = as_groupoid(z2);
    ASSERT_TRUE(g.has_value());
    EXPECT_TRUE(validate_groupoid(*g).ok());
    EXPECT_FALSE(as_groupoid(share(chain_category(1))).has_value());
    auto e3 = share(codiscrete_category({"a", "b", "c"}));
    EXPECT_EQ(e3->morphism_count(), 9u);
    EXPECT_TRUE(as_groupoid(e3).has_value());
}

TEST(Comma, IdentityOnPoint) {
    auto pt = share(terminal_category());
    const auto comma = comma_category(identity_functor(pt), Index{0});
    EXPECT_EQ(comma.category.object_count(), 1u);
    EXPECT_EQ(comma.category.morphism_count(), 1u);
}

TEST(Comma, SliceOfZ2) {
    auto z2 = share(cyclic_group_category(2));
    const auto comma = comma_category(identity_functor(z2), "*");
    EXPECT_EQ(comma.category.object_count(), 2u);
    EXPECT_EQ(comma.category.morphism_count(), 4u);
    EXPECT_TRUE(validate_category(comma.category).ok());
    EXPECT_EQ(pi0(comma.category).count(), 1u);
    // G/y is a codiscrete groupoid: one arrow between any two objects
    for (Index a = 0; a < 2; ++a) {
        for (Index b = 0; b < 2; ++b) EXPECT_EQ(comma.category.hom(a, b).size(), 1u);
    }
}

TEST(Comma, UnknownObjectIsInputError) {
    auto pt = share(terminal_category());
    EXPECT_THROW(comma_category(identity_functor(pt), "nope"), InputError);
}

TEST(Comma, GroupoidWhenBothSidesAre) {
    Rng rng(5);
    for (int k = 0; k < 40; ++k) {
        auto g = share(random_groupoid_category(rng, 3, 3));
        auto pt = share(terminal_category());
        const Functor f = to_terminal(g, pt);
        const auto comma = comma_category(f, Index{0});
        EXPECT_TRUE(as_groupoid(share(comma.category)).has_value());
        const auto slice = comma_category(identity_functor(g), Index{0});
        EXPECT_TRUE(as_groupoid(share(slice.category)).has_value());
    }
}

TEST(Pi0, StandardCases) {
    EXPECT_EQ(pi0(discrete_category({"a", "b"})).count(), 2u);
    EXPECT_EQ(pi0(codiscrete_category({"a", "b"})).count(), 1u);
}

TEST(Pi0, RepresentativeIsLeastName) {
    const auto c = disjoint_union(codiscrete_category({"z", "b"}), discrete_category({"a"}));
    const auto p = pi0(c);
    ASSERT_EQ(p.count(), 2u);
    EXPECT_EQ(c.object_name(p.representative[0]), "a");
    EXPECT_EQ(c.object_name(p.representative[1]), "b");
}

TEST(Pi0, InvariantUnderOpposite) {
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const auto c = random_category(rng, 4, 12);
        const auto a = pi0(c);
        const auto b = pi0(opposite(c));
        EXPECT_EQ(a.class_of, b.class_of);
        EXPECT_EQ(a.classes, b.classes);
    }
}

TEST(Colimit, OnePointOverConnectedBase) {
    auto c = share(chain_category(2));
    EXPECT_EQ(colim_set(constant_point(c, Variance::covariant)).size, 1u);
}

TEST(Colimit, OnePointCountsComponents) {
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        auto c = share(random_category(rng, 4, 12));
        EXPECT_EQ(colim_set(constant_point(c, Variance::covariant)).size, pi0(*c).count());
    }
}

TEST(Colimit, ChainWithCollapsingMap) {
    auto c = share(chain_category(1));
    SetValuedFunctor f{c, Variance::covariant, {2, 1}, {}, {}};
    // morphisms: id_c0, id_c1, c0c1 in builder order
    f.action.resize(c->morphism_count());
    f.action[c->morphism_index("id_c0")] = {0, 1};
    f.action[c->morphism_index("id_c1")] = {0};
    f.action[c->morphism_index("c0c1")] = {0, 0};
    ASSERT_TRUE(validate_set_functor(f).ok());
    const auto col = colim_set(f);
    EXPECT_EQ(col.size, 1u);
}

TEST(Colimit, ContravariantRejected) {
    auto c = share(chain_category(1));
    EXPECT_THROW(colim_set(constant_point(c, Variance::contravariant)), InputError);
}

TEST(Colimit, UniversalAmongCocones) {
    // every cocone into a 2-element set factors uniquely through the colimit
    auto c = share(chain_category(1));
    SetValuedFunctor f{c, Variance::covariant, {2, 2}, {}, {}};
    f.action.resize(c->morphism_count());
    f.action[c->morphism_index("id_c0")] = {0, 1};
    f.action[c->morphism_index("id_c1")] = {0, 1};
    f.action[c->morphism_index("c0c1")] = {1, 1};
    const auto col = colim_set(f);
    ASSERT_EQ(col.size, 2u);
    std::size_t cocones = 0;
    for (int code = 0; code < 16; ++code) {
        std::vector<std::vector<Index>> leg{{Index(code & 1), Index((code >> 1) & 1)},
                                            {Index((code >> 2) & 1), Index((code >> 3) & 1)}};
        if (leg[1][f.action[c->morphism_index("c0c1")][0]] != leg[0][0]) continue;
        if (leg[1][f.action[c->morphism_index("c0c1")][1]] != leg[0][1]) continue;
        ++cocones;
        // factor: class -> value, must be well defined
        std::vector<Index> through(col.size, npos);
        bool ok = true;
        for (Index o = 0; o < 2; ++o) {
            for (Index e = 0; e < 2; ++e) {
                Index& slot = through[col.cocone[o][e]];
                if (slot != npos && slot != leg[o][e]) ok = false;
                slot = leg[o][e];
            }
        }
        EXPECT_TRUE(ok);
    }
    EXPECT_EQ(cocones, 4u);  // = 2^|colim|
}

TEST(LeftKan, AlongIdentityIsNaturallyIsomorphic) {
    Rng rng(21);
    for (int k = 0; k < 40; ++k) {
        auto c = share(random_category(rng, 3, 10));
        auto f = flip_variance(random_presheaf(rng, share(opposite(*c)), 2), c);
        ASSERT_TRUE(validate_set_functor(f).ok());
        const auto lan = left_kan_set(identity_functor(c), f);
        ASSERT_TRUE(validate_set_functor(lan).ok());
        // Lan_id F(b) = colim over id/b, which has terminal object (b, id_b)
        std::vector<std::vector<Index>> comp(c->object_count());
        bool sizes_match = true;
        for (Index b = 0; b < c->object_count(); ++b) {
            sizes_match = sizes_match && lan.sizes[b] == f.sizes[b];
        }
        ASSERT_TRUE(sizes_match);
        for (Index b = 0; b < c->object_count(); ++b) {
            const auto comma = comma_category(identity_functor(c), b);
            Index terminal = npos;
            for (Index p = 0; p < comma.category.object_count(); ++p) {
                if (comma.object_arrow[p] == c->identity(b)) terminal = p;
            }
            ASSERT_NE(terminal, npos);
            // the class of (x, id_b) in the colimit, using left_kan_set's own cocone ordering
            SetValuedFunctor restricted{share(comma.category), Variance::covariant, {}, {}, {}};
            for (Index p = 0; p < comma.category.object_count(); ++p) restricted.sizes.push_back(f.sizes[comma.object_source[p]]);
            for (Index m = 0; m < comma.category.morphism_count(); ++m) restricted.action.push_back(f.action[comma.morphism_source[m]]);
            const auto col = colim_set(restricted);
            comp[b] = col.cocone[terminal];
        }
        EXPECT_TRUE(is_natural_iso(f, lan, comp));
    }
}

TEST(LeftKan, OnePointGivesComponentsOfComma) {
    Rng rng(4);
    for (int k = 0; k < 40; ++k) {
        auto a = share(random_groupoid_category(rng, 3, 2));
        auto pt = share(terminal_category());
        const Functor f = to_terminal(a, pt);
        const auto lan = left_kan_set(f, constant_point(a, Variance::covariant));
        EXPECT_EQ(lan.sizes[0], pi0(comma_category(f, Index{0}).category).count());
        EXPECT_EQ(lan.sizes[0], pi0(*a).count());
    }
}

TEST(LeftKan, E2ToPoint) {
    auto e2 = share(codiscrete_category({"a", "b"}));
    auto pt = share(terminal_category());
    const auto lan = left_kan_set(to_terminal(e2, pt), constant_point(e2, Variance::covariant));
    EXPECT_EQ(lan.sizes[0], 1u);
}

TEST(Functor, EquivalenceTester) {
    auto e2 = share(codiscrete_category({"a", "b"}));
    auto pt = share(terminal_category());
    EXPECT_TRUE(is_equivalence(to_terminal(e2, pt)));
    auto z2 = share(cyclic_group_category(2));
    EXPECT_FALSE(is_equivalence(to_terminal(z2, pt)));
    EXPECT_TRUE(validate_functor(to_terminal(z2, pt)).ok());
}
