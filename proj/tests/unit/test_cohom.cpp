#include <gtest/gtest.h>

#include "fibsite/cohom.hpp"
#include "fibsite/random.hpp"
#include "oracles.hpp"

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

std::vector<FgAbelianGroup> cohomology(const CategoryRef& c, const AbelianPresheaf& f, std::size_t n_max,
                                       bool normalized = true) {
    return cohomology_of_complex(cochain_complex(*c, f, n_max, normalized));
}

AbelianPresheaf random_constant(Rng& rng, const CategoryRef& c) {
    switch (rng.below(4)) {
        case 0:
            return constant_abelian(c, {0});
        case 1:
            return constant_abelian(c, {2});
        case 2:
            return constant_abelian(c, {0, 3});
        default:
            return constant_abelian(c, {2, 4});
    }
}

/// ℤ on which every non-identity power of the generator t of ℤ/2 acts by -1.
AbelianPresheaf sign_module(const CategoryRef& z2) {
    AbelianPresheaf f = constant_abelian(z2, {0});
    f.restriction[1] = IntegerMatrix{{-1}};
    return f;
}

IntegerMatrix random_unimodular(Rng& rng, std::size_t n) {
    IntegerMatrix m = IntegerMatrix::identity(n);
    for (int k = 0; k < 6 && n > 1; ++k) {
        const std::size_t i = rng.below(n);
        const std::size_t j = rng.below(n);
        if (i == j) continue;
        const long long c = rng.between(-2, 2);
        for (std::size_t r = 0; r < n; ++r) m.at(r, i) += c * m.at(r, j);
    }
    return m;
}

IntegerMatrix inverse_unimodular(const IntegerMatrix& m) {
    // U m V = I for a unimodular m, so m⁻¹ = V U
    const auto s = smith_normal_form(m);
    IntegerMatrix d = s.d;
    IntegerMatrix inv = s.v * s.u;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (d.at(i, i) == -1) {
            for (std::size_t c = 0; c < inv.cols(); ++c) inv.at(i, c) = -inv.at(i, c);
        }
    }
    return inv;
}

}  // namespace

TEST(Complex, PointWithIntegers) {
    auto pt = share(terminal_category());
    EXPECT_EQ(cohomology(pt, constant_abelian(pt, {0}), 4), groups({{0}, {}, {}, {}, {}}));
}

TEST(Complex, ZeroCoefficients) {
    Rng rng(401);
    for (int t = 0; t < 5; ++t) {
        auto c = share(random_category(rng, 3, 8));
        for (const auto& h : cohomology(c, constant_abelian(c, {}), 3)) EXPECT_TRUE(h.is_zero());
    }
}

TEST(Complex, SquaresToZero) {
    Rng rng(402);
    for (int t = 0; t < 30; ++t) {
        auto c = share(random_category(rng, 3, 8));
        const auto f = random_constant(rng, c);
        ASSERT_TRUE(validate_abelian_presheaf(f).ok());
        EXPECT_TRUE(squares_to_zero(cochain_complex(*c, f, 3)));
        EXPECT_TRUE(squares_to_zero(cochain_complex(*c, f, 2, false)));
    }
}

TEST(Complex, Z2MatchesBarComplex) {
    auto z2 = share(cyclic_group_category(2));
    const auto h = cohomology(z2, constant_abelian(z2, {0}), 4);
    EXPECT_EQ(h, groups({{0}, {}, {2}, {}, {2}}));
    EXPECT_EQ(h, oracle::group_bar_cohomology(*z2, 4));
}

TEST(Complex, CyclicGroupsMatchBarComplex) {
    for (std::size_t n : {3u, 4u}) {
        auto g = share(cyclic_group_category(n));
        const auto h = cohomology(g, constant_abelian(g, {0}), 3);
        EXPECT_EQ(h, oracle::group_bar_cohomology(*g, 3));
        EXPECT_EQ(h[2], FgAbelianGroup::from_cyclic({BigInt(n)}));
    }
    auto v4 = share(product_category(cyclic_group_category(2), cyclic_group_category(2)));
    EXPECT_EQ(cohomology(v4, constant_abelian(v4, {0}), 3), oracle::group_bar_cohomology(*v4, 3));
}

TEST(Complex, TorsionCoefficients) {
    auto z2 = share(cyclic_group_category(2));
    EXPECT_EQ(cohomology(z2, constant_abelian(z2, {2}), 4), groups({{2}, {2}, {2}, {2}, {2}}));
    auto pt = share(terminal_category());
    EXPECT_EQ(cohomology(pt, constant_abelian(pt, {0, 6}), 2), groups({{0, 6}, {}, {}}));
}

TEST(Complex, SignModule) {
    auto z2 = share(cyclic_group_category(2));
    const auto f = sign_module(z2);
    ASSERT_TRUE(validate_abelian_presheaf(f).ok());
    EXPECT_EQ(cohomology(z2, f, 4), groups({{}, {2}, {}, {2}, {}}));
    AbelianPresheaf mod4 = constant_abelian(z2, {4});
    mod4.restriction[1] = IntegerMatrix{{3}};
    EXPECT_EQ(cohomology(z2, mod4, 4), groups({{2}, {2}, {2}, {2}, {2}}));
}

TEST(Complex, NormalizedMatchesUnnormalized) {
    Rng rng(403);
    for (int t = 0; t < 15; ++t) {
        auto c = share(random_category(rng, 3, 6));
        const auto f = random_constant(rng, c);
        EXPECT_EQ(cohomology(c, f, 2), cohomology(c, f, 2, false));
    }
}

TEST(Complex, IndependentOfGeneratorBasis) {
    Rng rng(404);
    for (int t = 0; t < 15; ++t) {
        auto c = share(random_category(rng, 3, 8));
        const auto f = constant_abelian(c, {0, 0});
        std::vector<IntegerMatrix> p, pinv;
        for (Index o = 0; o < c->object_count(); ++o) {
            p.push_back(random_unimodular(rng, 2));
            pinv.push_back(inverse_unimodular(p.back()));
            ASSERT_EQ(p.back() * pinv.back(), IntegerMatrix::identity(2));
        }
        AbelianPresheaf g = f;
        for (Index m = 0; m < c->morphism_count(); ++m) {
            g.restriction[m] = pinv[c->source(m)] * f.restriction[m] * p[c->target(m)];
        }
        ASSERT_TRUE(validate_abelian_presheaf(g).ok());
        EXPECT_EQ(cohomology(c, f, 3), cohomology(c, g, 3));
    }
}

TEST(Complex, BrokenRelationsRejected) {
    auto c = share(chain_category(1));
    AbelianPresheaf f{c, {{0}, {2}}, {}};
    f.restriction = {IntegerMatrix{{1}}, IntegerMatrix{{1}}, IntegerMatrix{{1}}};
    const auto r = validate_abelian_presheaf(f);
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.violations.front().find("relations:"), std::string::npos);
    EXPECT_THROW(cohomology(c, f, 2), ValidationError);
}

TEST(Complex, NonFunctorialRejected) {
    auto z3 = share(cyclic_group_category(3));
    AbelianPresheaf f = constant_abelian(z3, {0});
    f.restriction[1] = IntegerMatrix{{-1}};
    const auto r = validate_abelian_presheaf(f);
    ASSERT_FALSE(r.ok());
    EXPECT_NE(r.violations.front().find("composition:"), std::string::npos);
}

TEST(H0, ConstantIntegersCountComponents) {
    Rng rng(405);
    for (int t = 0; t < 20; ++t) {
        auto c = share(random_category(rng, 4, 10));
        EXPECT_EQ(cohomology(c, constant_abelian(c, {0}), 1)[0], FgAbelianGroup::free(pi0(*c).count()));
    }
}

TEST(H0, FiniteCoefficientsCountCompatibleFamilies) {
    Rng rng(406);
    for (int t = 0; t < 20; ++t) {
        auto c = share(random_category(rng, 3, 8));
        const auto f = rng.coin() ? constant_abelian(c, {2}) : constant_abelian(c, {3});
        const auto h0 = cohomology(c, f, 1)[0];
        EXPECT_EQ(oracle::group_order(h0), BigInt(oracle::compatible_family_count(underlying_presheaf(f))));
    }
    auto z2 = share(cyclic_group_category(2));
    AbelianPresheaf twisted = constant_abelian(z2, {4});
    twisted.restriction[1] = IntegerMatrix{{3}};
    ASSERT_TRUE(validate_abelian_presheaf(twisted).ok());
    EXPECT_EQ(oracle::group_order(cohomology(z2, twisted, 1)[0]),
              BigInt(oracle::compatible_family_count(underlying_presheaf(twisted))));
}

TEST(Stack, Examples) {
    auto pt = share(terminal_category());
    const auto base = trivial_topology(pt);
    auto check = [&](FiniteCategory k, std::vector<FgAbelianGroup> expected) {
        auto g = *as_presheaf_of_groupoids(share(constant_presheaf(pt, share(std::move(k)))));
        const auto fs = grothendieck_construct(g.categories);
        EXPECT_EQ(stack_cohomology(base, g, constant_abelian(fs.total, {0}), 4), expected);
    };
    check(terminal_category(), groups({{0}, {}, {}, {}, {}}));
    check(cyclic_group_category(2), groups({{0}, {}, {2}, {}, {2}}));
    check(codiscrete_category({"a", "b"}), groups({{0}, {}, {}, {}, {}}));
}

TEST(Stack, RefusesNontrivialTopology) {
    auto site = share(chain_category(1));
    auto fibres = share(constant_presheaf(site, share(terminal_category())));
    const auto g = *as_presheaf_of_groupoids(fibres);
    const auto fs = grothendieck_construct(fibres);
    const auto base = generate_topology(site, {sieve_from_generators(*site, 1, {site->morphism_index("c0c1")})});
    ASSERT_FALSE(base.is_trivial());
    EXPECT_THROW(stack_cohomology(base, g, constant_abelian(fs.total, {0}), 2), RefusedError);
    auto with = fs;
    with.topology = induced_topology(fs, base);
    EXPECT_THROW(stack_cohomology(with, constant_abelian(fs.total, {0}), 2), RefusedError);
}

TEST(Stack, StringCap) {
    auto z3 = share(cyclic_group_category(3));
    EXPECT_THROW(cochain_complex(*z3, constant_abelian(z3, {0}), 4, true, 10), CapExceeded);
}

TEST(Stack, H0IsCompatibleFamiliesOnTotals) {
    Rng rng(407);
    for (int t = 0; t < 10; ++t) {
        auto site = share(random_category(rng, 2, 4));
        const auto fs = grothendieck_construct(share(random_presheaf_of_groupoids(rng, site, 2)));
        const auto f = constant_abelian(fs.total, {2});
        const auto h = stack_cohomology(fs, f, 1);
        EXPECT_EQ(oracle::group_order(h[0]), BigInt(oracle::compatible_family_count(underlying_presheaf(f))));
    }
}

TEST(Cech, MaximalSieveGivesTheValue) {
    Rng rng(408);
    for (int t = 0; t < 10; ++t) {
        auto c = share(random_category(rng, 3, 8));
        const auto top = trivial_topology(c);
        const auto f = random_constant(rng, c);
        for (Index u = 0; u < c->object_count(); ++u) {
            const auto h = cech_cohomology(top, u, maximal_sieve(*c, u), f, 2);
            EXPECT_EQ(h[0], f.value(u));
            EXPECT_TRUE(h[1].is_zero());
            EXPECT_TRUE(h[2].is_zero());
        }
    }
}

TEST(Cech, SingleArrowSieve) {
    auto c = share(chain_category(1));
    const Index a = c->morphism_index("c0c1");
    const auto s = sieve_from_generators(*c, 1, {a});
    const auto t = generate_topology(c, {s});
    const auto h = cech_cohomology(t, 1, s, constant_abelian(c, {0}), 2);
    EXPECT_EQ(h, groups({{0}, {}, {}}));
    for (const auto& g : cech_cohomology(t, 1, s, constant_abelian(c, {}), 2)) EXPECT_TRUE(g.is_zero());
}

TEST(Cech, NonCoveringSieveRejected) {
    auto c = share(chain_category(1));
    const auto s = sieve_from_generators(*c, 1, {c->morphism_index("c0c1")});
    EXPECT_THROW(cech_cohomology(trivial_topology(c), 1, s, constant_abelian(c, {0}), 2), InputError);
}

TEST(Cech, H0CountsMatchingFamilies) {
    Rng rng(409);
    std::size_t checked = 0;
    for (int t = 0; t < 20; ++t) {
        auto c = share(random_category(rng, 3, 8));
        const auto top = random_topology(rng, c);
        const auto f = rng.coin() ? constant_abelian(c, {2}) : constant_abelian(c, {3});
        const auto p = underlying_presheaf(f);
        for (Index u = 0; u < c->object_count(); ++u) {
            for (const auto& s : top.covers[u]) {
                const auto h = cech_cohomology(top, u, s, f, 0);
                EXPECT_EQ(oracle::group_order(h[0]), BigInt(matching_families(p, *c, s).size()));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 20u);
}

TEST(Invariance, IdentityPasses) {
    auto site = share(chain_category(1));
    auto g = share(constant_presheaf(site, share(cyclic_group_category(2))));
    const auto fs = grothendieck_construct(g);
    const auto r = invariance_report(identity_morphism(g), constant_abelian(fs.total, {0}), 3);
    EXPECT_TRUE(r.pass());
}

TEST(Invariance, E2ToPoint) {
    auto pt = share(terminal_category());
    auto e2 = share(constant_presheaf(pt, share(codiscrete_category({"a", "b"}))));
    auto one = share(constant_presheaf(pt, share(terminal_category())));
    MorphismOfPresheavesOfCategories m{e2, one, {to_terminal(e2->value_ref(0), one->value_ref(0))}};
    ASSERT_TRUE(validate_morphism(m).ok());
    const auto fs = grothendieck_construct(one);
    const auto r = invariance_report(m, constant_abelian(fs.total, {0}), 3);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.domain, groups({{0}, {}, {}, {}}));
}

TEST(Invariance, CodiscreteTimesZ2OverTwoObjects) {
    auto site = share(chain_category(1));
    auto z2 = share(constant_presheaf(site, share(cyclic_group_category(2))));
    auto e2 = constant_presheaf(site, share(codiscrete_category({"a", "b"})));
    auto prod = share(product(*z2, e2));
    const auto m = first_projection(prod, z2);
    const auto fs = grothendieck_construct(z2);
    const auto r = invariance_report(m, constant_abelian(fs.total, {0}), 3);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.codomain, groups({{0}, {}, {2}, {}}));
}

TEST(Invariance, RefusesNonEquivalenceAndTopology) {
    auto pt = share(terminal_category());
    auto z2 = share(constant_presheaf(pt, share(cyclic_group_category(2))));
    auto one = share(constant_presheaf(pt, share(terminal_category())));
    MorphismOfPresheavesOfCategories m{z2, one, {to_terminal(z2->value_ref(0), one->value_ref(0))}};
    const auto fs = grothendieck_construct(one);
    EXPECT_THROW(invariance_report(m, constant_abelian(fs.total, {0}), 2), RefusedError);

    auto site = share(chain_category(1));
    auto g = share(constant_presheaf(site, share(terminal_category())));
    const auto base = generate_topology(site, {sieve_from_generators(*site, 1, {site->morphism_index("c0c1")})});
    EXPECT_THROW(invariance_report(identity_morphism(g), constant_abelian(grothendieck_construct(g).total, {0}), 2, base),
                 RefusedError);
}

TEST(Invariance, RandomSectionwiseEquivalences) {
    Rng rng(410);
    for (int t = 0; t < 5; ++t) {
        auto site = share(random_category(rng, 2, 4));
        const auto e = random_sectionwise_equivalence(rng, site, 3);
        const auto fs = grothendieck_construct(e.codomain);
        const auto f = rng.coin() ? constant_abelian(fs.total, {0}) : constant_abelian(fs.total, {2});
        EXPECT_TRUE(invariance_report(e.map, f, 2).pass());
    }
}
