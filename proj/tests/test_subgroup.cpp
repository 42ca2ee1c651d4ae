#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pgroup/corpus.hpp"

using namespace pgroup;

TEST_CASE("generated subgroups") {
    auto c9 = build_cyclic(9);
    CHECK(trivial_subgroup(c9).order() == 1);
    CHECK(generated_subgroup(c9, {3}).order() == 3);

    auto ut = build_unitriangular(3, 3);
    auto gens = ut.builder_generators();
    REQUIRE(gens.size() == 2);
    CHECK(generated_subgroup(ut, gens).order() == 27);

    // idempotent and monotone in the generator set
    auto h1 = generated_subgroup(ut, {gens[0]});
    auto h2 = generated_subgroup(ut, h1.member_list());
    CHECK(h1.members() == h2.members());
    auto h3 = generated_subgroup(ut, {gens[0], gens[1]});
    CHECK(h3.contains(h1));
    CHECK(verify_subgroup(h1));
    CHECK(verify_subgroup(h3));
}

TEST_CASE("commutator subgroups") {
    auto c9 = build_cyclic(9);
    CHECK(commutator_subgroup(c9, whole_subgroup(c9), whole_subgroup(c9)).order() == 1);

    auto ut = build_unitriangular(3, 3);
    auto dd = commutator_subgroup(ut, whole_subgroup(ut), whole_subgroup(ut));
    CHECK(dd.order() == 3);
    CHECK(dd.members() == center(ut).members());
    CHECK(commutator_subgroup(ut, whole_subgroup(ut), trivial_subgroup(ut)).order() == 1);

    auto other = build_cyclic(9);
    CHECK_THROWS_AS(commutator_subgroup(ut, whole_subgroup(other), whole_subgroup(ut)),
                    std::invalid_argument);
}

TEST_CASE("power subgroups") {
    auto c9 = build_cyclic(9);
    CHECK(power_subgroup(c9, whole_subgroup(c9), 3).order() == 3);
    CHECK_THROWS_AS(power_subgroup(c9, whole_subgroup(c9), 6), std::invalid_argument);

    auto ut5 = build_unitriangular(3, 5);
    CHECK(power_subgroup(ut5, whole_subgroup(ut5), 5).order() == 1);

    auto g34 = construct_example1(3, 4);
    auto cubes = power_subgroup(g34.group, whole_subgroup(g34.group), 3);
    // the cube set is 3N = the last nontrivial lattice step: order 3, and
    // G^3 gamma_2 has index 9 (matching the maximal-class index claim)
    CHECK(cubes.order() == 3);
    auto g3gamma2 = join(cubes, lower_central_term(g34.group, 2));
    CHECK(g34.group.order() / g3gamma2.order() == 9);

    // antitone in the exponent
    for (const auto& e : corpus(3, 243)) {
        auto p1 = detail::power_set(e.group, 3);
        auto p2 = detail::power_set(e.group, 9);
        CHECK(p1.contains_all(p2));
    }
}

TEST_CASE("lower central series") {
    CHECK(nilpotency_class(build_abelian({9, 3})) == 1);
    CHECK(nilpotency_class(build_cyclic(1)) == 0);
    CHECK(nilpotency_class(build_unitriangular(3, 3)) == 2);
    CHECK(nilpotency_class(build_unitriangular(3, 5)) == 2);

    auto g34 = construct_example1(3, 4);
    auto series = lower_central_series(g34.group);
    CHECK(series.nilpotency_class == 3);
    REQUIRE(series.terms.size() == 4);
    CHECK(series.terms[1].order() / series.terms[2].order() == 3);
    CHECK(series.terms[2].order() / series.terms[3].order() == 3);
    CHECK(is_maximal_class(g34.group));
}

TEST_CASE("omega sets and subgroups") {
    CHECK(omega_set(build_cyclic(9), 1).count() == 3);

    auto g34 = construct_example1(3, 4);
    auto om = omega_set(g34.group, 1);
    CHECK(om.count() == 9);
    CHECK(g34.kernel.members().contains_all(om));
    CHECK(omega_subgroup(g34.group, 1).order() == 9);

    CHECK(omega_set(build_unitriangular(3, 5), 1).count() == 125);

    // chain and exhaustion invariants
    for (const auto& e : corpus(3, 243)) {
        auto o1 = omega_set(e.group, 1);
        auto o2 = omega_set(e.group, 2);
        CHECK(o2.contains_all(o1));
        int i = 1;
        std::uint64_t q = 3;
        while (q < exponent(e.group)) {
            q *= 3;
            ++i;
        }
        CHECK(omega_set(e.group, i).count() == e.group.order());
    }
}

TEST_CASE("Frattini subgroup and minimal generators") {
    CHECK(min_generators(build_cyclic(9)) == 1);
    CHECK(min_generators(build_abelian({3, 3})) == 2);

    auto g34 = construct_example1(3, 4);
    CHECK(min_generators(g34.group) == 2);
    CHECK(g34.group.order() / frattini_subgroup(g34.group).order() == 9);

    // d via exhaustive generation search: no single element generates, some
    // pair does
    for (const FiniteGroup& g : {build_abelian({3, 3}), build_unitriangular(3, 3), g34.group}) {
        bool single = false;
        for (Element e = 0; e < g.order() && !single; ++e)
            single = generated_subgroup(g, {e}).order() == g.order();
        CHECK_FALSE(single);
        bool pair = false;
        for (Element a = 0; a < g.order() && !pair; ++a)
            for (Element b = a + 1; b < g.order() && !pair; ++b)
                pair = generated_subgroup(g, {a, b}).order() == g.order();
        CHECK(pair);
    }

    // derived subgroup always lands inside the Frattini subgroup
    for (const auto& e : corpus(3, 243))
        CHECK(frattini_subgroup(e.group).members().contains_all(detail::derived_set(e.group)));
}

TEST_CASE("center") {
    auto ab = build_abelian({9, 3});
    CHECK(center(ab).order() == 27);
    CHECK(center(build_unitriangular(3, 3)).order() == 3);
    auto g34 = construct_example1(3, 4);
    CHECK(center(g34.group).order() == 3);
    CHECK(center(g34.group).contains(g34.z_id));
}

TEST_CASE("powerful groups") {
    CHECK(is_powerful(build_abelian({9, 3})));
    CHECK_FALSE(is_powerful(build_unitriangular(3, 5)));
    CHECK(is_powerful(build_modular(3)));
    CHECK_FALSE(is_powerful(construct_example1(3, 4).group));
    // p = 2 uses G^4: the dihedral group of order 8 fails, C_8 passes
    CHECK_FALSE(is_powerful(build_modular(2)));
    CHECK(is_powerful(build_cyclic(8)));
    CHECK_THROWS_AS(is_powerful(build_cyclic(6)), std::domain_error);
}

TEST_CASE("regularity") {
    CHECK(is_regular(build_abelian({9, 3})));
    CHECK(is_i_regular(build_abelian({27, 3}), 2).regular);
    CHECK(is_regular(build_unitriangular(3, 5)));  // class 2 < 5

    auto g34 = construct_example1(3, 4);
    auto reg = is_regular(g34.group);
    CHECK_FALSE(reg);
    // irregularity is forced: |G : G^3| differs from |Omega_1|
    CHECK(g34.group.order() / detail::power_set(g34.group, 3).count() == 27);
    CHECK(omega_set(g34.group, 1).count() == 9);

    Caps tight;
    tight.regular_pair_cap = 10;
    CHECK_THROWS_AS(is_regular(g34.group, tight), cap_exceeded);
}

TEST_CASE("subgroup enumeration") {
    auto c9 = build_cyclic(9);
    CHECK(enumerate_subgroups(c9).size() == 3);

    auto v4 = build_abelian({3, 3});
    auto subs = enumerate_subgroups(v4);
    CHECK(subs.size() == 6);  // 1, four C_3, G

    auto ut = build_unitriangular(3, 3);
    auto all = enumerate_subgroups(ut);

    // independent oracle: close every subset of size <= 2
    std::set<std::vector<Element>> oracle;
    oracle.insert(trivial_subgroup(ut).member_list());
    for (Element a = 0; a < ut.order(); ++a) {
        oracle.insert(generated_subgroup(ut, {a}).member_list());
        for (Element b = a + 1; b < ut.order(); ++b)
            oracle.insert(generated_subgroup(ut, {a, b}).member_list());
    }
    CHECK(all.size() == oracle.size());

    // output invariants: verified subgroups, pairwise distinct, sorted,
    // contains the trivial and whole subgroups
    std::set<std::vector<Element>> seen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(verify_subgroup(all[i]));
        CHECK(seen.insert(all[i].member_list()).second);
        if (i) CHECK(all[i - 1].order() <= all[i].order());
    }
    CHECK(all.front().order() == 1);
    CHECK(all.back().order() == ut.order());

    CHECK(enumerate_subgroups(ut, SubgroupFilter::proper_only).size() == all.size() - 1);
    auto maxs = enumerate_subgroups(ut, SubgroupFilter::maximal_only);
    CHECK(maxs.size() == 4);  // index-3 subgroups of the extraspecial group
    for (const auto& m : maxs) CHECK(m.order() == 9);

    Caps tight;
    tight.subgroup_enum_order = 8;
    CHECK_THROWS_WITH_AS(enumerate_subgroups(c9, SubgroupFilter::all, tight),
                         doctest::Contains("subgroup_enum_order cap 8"), cap_exceeded);
}

TEST_CASE("normal subgroup enumeration") {
    auto ut = build_unitriangular(3, 3);
    auto normals = enumerate_normal_subgroups(ut);
    for (const auto& n : normals) CHECK(is_normal(ut, n));
    // oracle: filter the full lattice by normality
    std::size_t expected = 0;
    for (const auto& h : enumerate_subgroups(ut))
        if (is_normal(ut, h)) ++expected;
    CHECK(normals.size() == expected);

    // all subgroups of an abelian group are normal
    auto ab = build_abelian({9, 3});
    CHECK(enumerate_normal_subgroups(ab).size() == enumerate_subgroups(ab).size());

    // normal enumeration reaches past the full enumeration cap
    auto g55 = construct_example1(5, 5);
    auto big_normals = enumerate_normal_subgroups(g55.group);
    CHECK(big_normals.size() >= 4);
    for (const auto& n : big_normals) CHECK(is_normal(g55.group, n));
}
