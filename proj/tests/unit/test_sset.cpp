#include <gtest/gtest.h>

#include "fibsite/random.hpp"
#include "fibsite/sset.hpp"

using namespace fibsite;

namespace {

std::vector<FgAbelianGroup> groups(std::initializer_list<std::initializer_list<long long>> list) {
    std::vector<FgAbelianGroup> out;
    for (const auto& g : list) {
        std::vector<BigInt> orders;
        for (long long o : g) orders.emplace_back(o);
        out.push_back(FgAbelianGroup::from_cyclic(orders));
    }
    return out;
}

}  // namespace

TEST(Nerve, Point) {
    const auto n = nerve(terminal_category(), 4);
    for (std::size_t d = 0; d <= 4; ++d) EXPECT_EQ(n.count(d), 1u);
    EXPECT_EQ(n.nondegenerate_count(0), 1u);
    for (std::size_t d = 1; d <= 4; ++d) EXPECT_EQ(n.nondegenerate_count(d), 0u);
}

TEST(Nerve, Z2Counts) {
    const auto n = nerve(cyclic_group_category(2), 4);
    for (std::size_t d = 0; d <= 4; ++d) EXPECT_EQ(n.count(d), std::size_t{1} << d);
    EXPECT_TRUE(validate_simplicial_set(n).ok());
}

TEST(Nerve, ArrowNondegenerate) {
    const auto n = nerve(chain_category(1), 3);
    EXPECT_EQ(n.nondegenerate_count(0), 2u);
    EXPECT_EQ(n.nondegenerate_count(1), 1u);
    EXPECT_EQ(n.nondegenerate_count(2), 0u);
    EXPECT_EQ(n.total_nondegenerate(), 3u);
}

TEST(Nerve, SimplicialIdentitiesOnRandomCategories) {
    Rng rng(12);
    for (int k = 0; k < 30; ++k) {
        const auto c = random_category(rng, 3, 8);
        EXPECT_TRUE(validate_simplicial_set(nerve(c, 4)).ok());
    }
}

TEST(Constructions, SimplexProductSubset) {
    const auto d2 = standard_simplex(2, 3);
    EXPECT_EQ(d2.count(0), 3u);
    EXPECT_EQ(d2.count(1), 6u);
    EXPECT_EQ(d2.nondegenerate_count(2), 1u);
    EXPECT_TRUE(validate_simplicial_set(d2).ok());
    const auto p = product(standard_simplex(1, 3), standard_simplex(1, 3));
    EXPECT_TRUE(validate_simplicial_set(p).ok());
    EXPECT_EQ(p.nondegenerate_count(2), 2u);
    const auto sub = generated_subset(d2, {{1, d2.at(1, {0, 1})}, {1, d2.at(1, {1, 2})}});
    EXPECT_TRUE(validate_simplicial_set(sub).ok());
    EXPECT_EQ(sub.count(0), 3u);
    EXPECT_EQ(sub.nondegenerate_count(1), 2u);
    EXPECT_EQ(sub.nondegenerate_count(2), 0u);
    const auto u = disjoint_union(d2, discrete_simplicial_set(2, 3));
    EXPECT_TRUE(validate_simplicial_set(u).ok());
    EXPECT_EQ(homology(u, 2).groups[0], FgAbelianGroup::free(3));
}

TEST(Maps, NerveMapsValidate) {
    auto e2 = share(codiscrete_category({"a", "b"}));
    auto pt = share(terminal_category());
    const auto f = nerve_map(to_terminal(e2, pt), nerve_ref(*e2, 3), nerve_ref(*pt, 3));
    EXPECT_TRUE(validate_simplicial_map(f).ok());
    const auto id = identity_map(nerve_ref(*e2, 3));
    EXPECT_TRUE(is_identity(id));
    EXPECT_TRUE(is_isomorphism(id));
    EXPECT_TRUE(same_maps(compose(f, id), f));
}

TEST(Bisimplicial, ConstantDirectionDiagonal) {
    const auto c = chain_category(1);
    const auto n = nerve(c, 3);
    std::vector<std::vector<std::vector<Key>>> cells(4, std::vector<std::vector<Key>>(4));
    for (std::size_t m = 0; m <= 3; ++m) {
        for (std::size_t k = 0; k <= 3; ++k) {
            for (Index x = 0; x < n.count(k); ++x) cells[m][k].push_back(n.key(k, x));
        }
    }
    const BisimplicialSet b(
        3, cells, [](std::size_t, std::size_t, std::size_t, const Key& k) { return k; },
        [&](std::size_t, std::size_t k, std::size_t i, const Key& key) { return n.key(k - 1, n.d(k, i, n.at(k, key))); },
        [](std::size_t, std::size_t, std::size_t, const Key& k) { return k; },
        [&](std::size_t, std::size_t k, std::size_t i, const Key& key) { return n.key(k + 1, n.s(k, i, n.at(k, key))); });
    EXPECT_TRUE(validate_bisimplicial_set(b).ok());
    const auto d = diagonal(b);
    for (std::size_t k = 0; k <= 3; ++k) {
        ASSERT_EQ(d.count(k), n.count(k));
        for (Index x = 0; x < d.count(k); ++x) {
            const Index y = n.at(k, d.key(k, x));
            for (std::size_t i = 0; k > 0 && i <= k; ++i) EXPECT_EQ(d.key(k - 1, d.d(k, i, x)), n.key(k - 1, n.d(k, i, y)));
        }
    }
}

TEST(Interchange, PointIsIsomorphism) {
    const auto ic = interchange_comparison(terminal_category(), 3);
    EXPECT_TRUE(validate_bisimplicial_set(ic.x).ok());
    EXPECT_TRUE(is_isomorphism(ic.phi));
    EXPECT_TRUE(is_isomorphism(ic.psi));
}

TEST(Interchange, Z2DiagonalCounts) {
    const auto ic = interchange_comparison(cyclic_group_category(2), 3);
    for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(ic.diagonal->count(n), std::size_t{1} << (2 * n + 1));
}

TEST(Interchange, MapsAreSimplicialAndWeakEquivalences) {
    std::vector<FiniteCategory> cats{terminal_category(), chain_category(1), cyclic_group_category(2),
                                     codiscrete_category({"a", "b"})};
    for (const auto& c : cats) {
        const auto ic = interchange_comparison(c, 4);
        EXPECT_TRUE(validate_bisimplicial_set(ic.x).ok());
        EXPECT_TRUE(validate_simplicial_set(*ic.diagonal).ok());
        EXPECT_TRUE(validate_simplicial_map(ic.phi).ok());
        EXPECT_TRUE(validate_simplicial_map(ic.psi).ok());
        EXPECT_TRUE(we_evidence(ic.phi, 3).pass());
        EXPECT_TRUE(we_evidence(ic.psi, 3).pass());
    }
}

TEST(Interchange, ChainHomology) {
    const auto ic = interchange_comparison(chain_category(1), 3);
    EXPECT_EQ(homology(*ic.diagonal, 2).groups, groups({{0}, {}, {}}));
}

TEST(Homology, Point) {
    EXPECT_EQ(homology(nerve(terminal_category(), 4), 3).groups, groups({{0}, {}, {}, {}}));
}

TEST(Homology, Z2) {
    const auto h = homology(nerve(cyclic_group_category(2), 5), 3);
    EXPECT_EQ(h.groups, groups({{0}, {2}, {}, {2}}));
    EXPECT_EQ(h.components, 1u);
}

TEST(Homology, Z3) {
    EXPECT_EQ(homology(nerve(cyclic_group_category(3), 5), 4).groups, groups({{0}, {3}, {}, {3}, {}}));
}

TEST(Homology, E2IsContractible) {
    EXPECT_EQ(homology(nerve(codiscrete_category({"a", "b"}), 5), 3).groups, groups({{0}, {}, {}, {}}));
}

TEST(Homology, TruncationTooSmall) {
    EXPECT_THROW(homology(nerve(terminal_category(), 2), 2), InputError);
}

TEST(Homology, StableUnderTruncation) {
    Rng rng(44);
    for (int k = 0; k < 20; ++k) {
        const auto c = random_category(rng, 3, 8);
        for (std::size_t i = 0; i <= 2; ++i) {
            const auto low = homology(nerve(c, i + 1), i).groups;
            const auto high = homology(nerve(c, i + 3), i).groups;
            EXPECT_EQ(low, high);
        }
    }
}

TEST(Homology, NormalizedMatchesUnnormalized) {
    const auto n = nerve(cyclic_group_category(2), 3);
    EXPECT_EQ(homology(n, 2).groups, homology_unnormalized(n, 2).groups);
    const auto m = nerve(chain_category(2), 3);
    EXPECT_EQ(homology(m, 2).groups, homology_unnormalized(m, 2).groups);
}

TEST(Homology, DegreeZeroCountsComponents) {
    Rng rng(45);
    for (int k = 0; k < 30; ++k) {
        const auto c = random_category(rng, 4, 12);
        const auto h = homology(nerve(c, 2), 0);
        EXPECT_EQ(h.groups[0], FgAbelianGroup::free(pi0(c).count()));
        EXPECT_EQ(h.components, pi0(c).count());
    }
}

TEST(Homology, OppositeHasSameHomology) {
    Rng rng(46);
    for (int k = 0; k < 20; ++k) {
        const auto c = random_category(rng, 3, 8);
        EXPECT_EQ(homology(nerve(c, 4), 3).groups, homology(nerve(opposite(c), 4), 3).groups);
    }
}

TEST(Evidence, IdentityPasses) {
    EXPECT_TRUE(we_evidence(identity_map(nerve_ref(cyclic_group_category(2), 4)), 3).pass());
}

TEST(Evidence, E2ToPointPassesWithGroupoidCheck) {
    auto e2 = share(codiscrete_category({"a", "b"}));
    auto pt = share(terminal_category());
    const auto ev = we_evidence(to_terminal(e2, pt), 3, 5);
    ASSERT_TRUE(ev.groupoid_check.has_value());
    EXPECT_TRUE(*ev.groupoid_check);
    EXPECT_TRUE(ev.pass());
}

TEST(Evidence, Z2ToPointFails) {
    auto z2 = share(cyclic_group_category(2));
    auto pt = share(terminal_category());
    const auto ev = we_evidence(to_terminal(z2, pt), 3, 5);
    EXPECT_FALSE(ev.pass());
    EXPECT_TRUE(ev.pi0_bijective);
    EXPECT_FALSE(ev.homology_match[1]);
    EXPECT_FALSE(*ev.groupoid_check);
}

TEST(Evidence, AutomorphismGroups) {
    const auto z4 = cyclic_group_category(4);
    const auto v4 = product_category(cyclic_group_category(2), cyclic_group_category(2));
    EXPECT_FALSE(automorphism_groups_isomorphic(z4, 0, v4, 0));
    EXPECT_TRUE(automorphism_groups_isomorphic(v4, 0, v4, 0));
    EXPECT_TRUE(automorphism_groups_isomorphic(cyclic_group_category(2), 0,
                                               codiscrete_group_category({"x", "y"}, 2), 1));
}
