#include <doctest.h>

#include <random>

#include "dihlab/abgroup.hpp"

using namespace dihlab;

TEST_CASE("parse and canonical form") {
    auto g = AbelianGroupStructure::parse("3,3");
    CHECK(g.invariant_factors() == std::vector<Integer>{3, 3});
    CHECK(AbelianGroupStructure::parse("1").is_trivial());
    auto h = AbelianGroupStructure::parse("15,5");
    CHECK(h.invariant_factors() == std::vector<Integer>{5, 15});
    CHECK(h.render() == "15,5");
    // paper-style mixed notation regroups: 300,20,4,4
    auto big = AbelianGroupStructure::parse("300,20,4,4");
    CHECK(big.order() == 96000);
    CHECK(big.p_part(5).render() == "25,5");
    CHECK(big.p_part(2).render() == "4,4,4,4");
    CHECK(big.p_part(3).render() == "3");
    CHECK_THROWS_AS(AbelianGroupStructure::parse("3,x"), std::invalid_argument);
    CHECK_THROWS_AS(AbelianGroupStructure::parse("0"), std::invalid_argument);
    CHECK_THROWS_AS(AbelianGroupStructure::parse(""), std::invalid_argument);
}

TEST_CASE("p_part and p_rank") {
    auto g = AbelianGroupStructure::parse("15,5");
    CHECK(g.p_part(3).render() == "3");
    CHECK(g.p_rank(5) == 2);
    CHECK(AbelianGroupStructure::parse("3,3").p_rank(3) == 2);
    CHECK(AbelianGroupStructure().p_rank(3) == 0);
    CHECK(AbelianGroupStructure().p_part(7).is_trivial());
}

TEST_CASE("isomorphism and products") {
    auto g = AbelianGroupStructure::parse("3,3");
    CHECK(g == AbelianGroupStructure::parse("3,3"));
    auto p44 = AbelianGroupStructure::parse("4,4");
    CHECK(p44.direct_product(p44).render() == "4,4,4,4");
    CHECK(AbelianGroupStructure().direct_product(g) == g);
}

TEST_CASE("structure properties") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        std::vector<Integer> orders;
        size_t k = 1 + rng() % 4;
        for (size_t j = 0; j < k; ++j) orders.push_back(static_cast<long>(2 + rng() % 60));
        auto g = AbelianGroupStructure::from_cyclic_orders(orders);
        // parse(render) is the identity on canonical forms
        CHECK(AbelianGroupStructure::parse(g.render()) == g);
        // order is preserved by regrouping
        Integer n = 1;
        for (const auto& d : orders) n *= d;
        CHECK(g.order() == n);
        // divisibility chain
        const auto& f = g.invariant_factors();
        for (size_t j = 0; j + 1 < f.size(); ++j) CHECK(f[j + 1] % f[j] == 0);
        // products: order multiplies, p_part commutes
        std::vector<Integer> orders2 = {static_cast<long>(2 + rng() % 40)};
        auto h = AbelianGroupStructure::from_cyclic_orders(orders2);
        auto prod = g.direct_product(h);
        CHECK(prod.order() == g.order() * h.order());
        for (long p : {2L, 3L, 5L}) {
            CHECK(prod.p_part(p) == g.p_part(p).direct_product(h.p_part(p)));
            CHECK(g.p_rank(p) == g.p_part(p).p_rank(p));
        }
    }
}

TEST_CASE("prime power renderer") {
    CHECK(AbelianGroupStructure::parse("9,3").render_prime_power() == "3^2,3");
    CHECK(AbelianGroupStructure().render_prime_power() == "1");
}
