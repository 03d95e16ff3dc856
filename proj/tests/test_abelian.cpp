#include "doctest.h"

#include "rdeg/abelian.hpp"

#include <map>
#include <numeric>
#include <set>

using namespace rdeg;

TEST_CASE("group construction normalizes to the invariant chain") {
    CHECK(FiniteAbelianGroup::from_cyclic_orders({2, 3}).invariant_factors() ==
          std::vector<std::int64_t>{6});
    CHECK(FiniteAbelianGroup::from_cyclic_orders({6, 2}).invariant_factors() ==
          std::vector<std::int64_t>{2, 6});
    CHECK(FiniteAbelianGroup::trivial().order() == 1);
    CHECK(FiniteAbelianGroup::trivial().invariant_factors().empty());
    CHECK(FiniteAbelianGroup::from_cyclic_orders({4, 6}).invariant_factors() ==
          std::vector<std::int64_t>{2, 12});
    CHECK_THROWS_AS(FiniteAbelianGroup::from_cyclic_orders({1}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteAbelianGroup::from_cyclic_orders({0, 5}), std::invalid_argument);
}

TEST_CASE("divisibility chain invariant") {
    for (std::uint64_t n = 1; n <= 120; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            const auto& f = g.invariant_factors();
            std::uint64_t prod = 1;
            for (std::size_t i = 0; i < f.size(); ++i) {
                CHECK(f[i] >= 2);
                if (i + 1 < f.size()) CHECK(f[i + 1] % f[i] == 0);
                prod *= static_cast<std::uint64_t>(f[i]);
            }
            CHECK(prod == g.order());
        }
    }
}

TEST_CASE("primary decomposition") {
    auto g = FiniteAbelianGroup::from_cyclic_orders({2, 6});
    auto pd = g.primary_decomposition();
    REQUIRE(pd.size() == 2);
    CHECK(pd[2] == std::vector<unsigned>{1, 1});
    CHECK(pd[3] == std::vector<unsigned>{1});

    auto g2 = FiniteAbelianGroup::from_cyclic_orders({12});
    auto pd2 = g2.primary_decomposition();
    CHECK(pd2[2] == std::vector<unsigned>{2});
    CHECK(pd2[3] == std::vector<unsigned>{1});

    CHECK(FiniteAbelianGroup::trivial().primary_decomposition().empty());
}

TEST_CASE("primary decomposition round-trips") {
    for (std::uint64_t n = 1; n <= 200; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            CHECK(recombine_primary(g.primary_decomposition()) == g);
        }
    }
}

TEST_CASE("element orders") {
    auto g = FiniteAbelianGroup::from_cyclic_orders({6, 8});
    CHECK(g.invariant_factors() == std::vector<std::int64_t>{2, 24});
    CHECK(g.element_order(g.identity()) == 1);
    // Image of (3, 2) from the 6 x 8 presentation: (1, 18) has order lcm(2, 4).
    CHECK(g.element_order({1, 18}) == 4);
    auto chain = FiniteAbelianGroup::from_cyclic_orders({6, 12});
    CHECK(chain.element_order({3, 2}) == 6);
    auto z81 = FiniteAbelianGroup::cyclic(81);
    CHECK(z81.element_order({1}) == 81);
    CHECK(FiniteAbelianGroup::trivial().element_order({}) == 1);
}

TEST_CASE("order statistics sum to the group order") {
    for (std::uint64_t n = 1; n <= 200; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            std::map<std::int64_t, std::uint64_t> by_order;
            for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
                ++by_order[g.element_order(g.element_at(idx))];
            }
            std::uint64_t total = 0;
            for (auto [d, c] : by_order) {
                CHECK(static_cast<std::uint64_t>(g.order()) % d == 0);
                total += c;
            }
            CHECK(total == g.order());
        }
    }
}

TEST_CASE("scaled element order law") {
    for (std::uint64_t n = 2; n <= 80; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
                auto x = g.element_at(idx);
                std::int64_t ox = g.element_order(x);
                for (std::int64_t k = 1; k <= 6; ++k) {
                    CHECK(g.element_order(g.scale(k, x)) == ox / std::gcd(ox, k));
                }
            }
        }
    }
}

TEST_CASE("generated subgroups") {
    auto z5 = FiniteAbelianGroup::cyclic(5);
    CHECK(subgroup_generated(z5, {{1}}).is_full());

    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto h = subgroup_generated(z6, {{2}});
    CHECK(h.order() == 3);
    CHECK(h.invariant_factors() == std::vector<std::int64_t>{3});
    CHECK(h.member_indices() == std::vector<std::uint64_t>{0, 2, 4});

    CHECK(trivial_subgroup(z6).order() == 1);
    CHECK(trivial_subgroup(FiniteAbelianGroup::trivial()).order() == 1);
}

TEST_CASE("subgroup invariant factors match their member statistics") {
    // The SNF route must agree with a reconstruction from element orders.
    for (std::uint64_t n = 2; n <= 100; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
                auto h = subgroup_generated(g, {g.element_at(idx)});
                CHECK(h.order() == h.member_indices().size());
                // A one-generator subgroup is cyclic of the generator's order.
                std::int64_t ord = g.element_order(g.element_at(idx));
                if (ord == 1) {
                    CHECK(h.invariant_factors().empty());
                } else {
                    CHECK(h.invariant_factors() == std::vector<std::int64_t>{ord});
                }
            }
        }
    }
    // A non-cyclic two-generator case.
    auto g = FiniteAbelianGroup::from_cyclic_orders({4, 4});
    auto h = subgroup_generated(g, {{2, 0}, {0, 2}});
    CHECK(h.order() == 4);
    CHECK(h.invariant_factors() == std::vector<std::int64_t>{2, 2});
}

TEST_CASE("subgroup structure without materialization") {
    auto big = FiniteAbelianGroup::from_cyclic_orders({2, 30030});  // order 60060
    CHECK_FALSE(big.enumerable());
    auto h = subgroup_generated(big, {{0, 2}});
    CHECK_FALSE(h.materialized());
    CHECK(h.order() == 15015);
    CHECK(h.invariant_factors() == std::vector<std::int64_t>{15015});
}

TEST_CASE("cyclic subgroup inventory") {
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto subs = cyclic_subgroups_of_order(z6, 3);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].member_indices() == std::vector<std::uint64_t>{0, 2, 4});

    auto v4 = FiniteAbelianGroup::from_cyclic_orders({2, 2});
    CHECK(cyclic_subgroups_of_order(v4, 2).size() == 3);

    CHECK(cyclic_subgroups_of_order(FiniteAbelianGroup::cyclic(4), 3).empty());
}

TEST_CASE("coset representatives") {
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto h3 = subgroup_generated(z6, {{2}});
    auto reps = coset_representatives(z6, h3);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0] == GroupElement{0});
    CHECK(reps[1] == GroupElement{3});

    auto full = full_subgroup(z6);
    auto one = coset_representatives(z6, full);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == GroupElement{0});

    auto z4 = FiniteAbelianGroup::cyclic(4);
    auto h2 = subgroup_generated(z4, {{2}});
    auto two = coset_representatives(z4, h2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == GroupElement{0});
    CHECK(two[1] == GroupElement{1});
}

TEST_CASE("coset representatives cover the group exactly") {
    for (std::uint64_t n = 2; n <= 200; n += 3) {
        for (const auto& g : abelian_groups_of_order(n)) {
            for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
                auto h = subgroup_generated(g, {g.element_at(idx)});
                auto reps = coset_representatives(g, h);
                CHECK(reps.size() == g.order() / h.order());
                std::set<std::uint64_t> covered;
                for (const auto& r : reps) {
                    for (auto m : h.member_indices()) {
                        covered.insert(g.index_add(g.index_of(r), m));
                    }
                }
                CHECK(covered.size() == g.order());
            }
        }
    }
}

TEST_CASE("coprime transversals are the complement subgroup") {
    for (std::uint64_t n = 2; n <= 150; ++n) {
        for (const auto& g : abelian_groups_of_order(n)) {
            for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
                auto h = subgroup_generated(g, {g.element_at(idx)});
                std::uint64_t r = h.order(), s = g.order() / r;
                if (std::gcd(r, s) != 1) continue;
                auto reps = coset_representatives(g, h);
                // Each representative has order dividing s, and together they
                // form the unique order-s subgroup.
                auto complement = subgroup_generated(g, reps);
                CHECK(complement.order() == s);
                for (const auto& rep : reps) {
                    CHECK(static_cast<std::int64_t>(s) % g.element_order(rep) == 0);
                    CHECK(complement.contains(rep));
                }
            }
        }
    }
}

TEST_CASE("group literal parsing") {
    CHECK(parse_cyclic_orders("2,6") == std::vector<std::int64_t>{2, 6});
    CHECK(parse_cyclic_orders(" 8 , 2 ") == std::vector<std::int64_t>{8, 2});
    CHECK_THROWS(parse_cyclic_orders(""));
}
