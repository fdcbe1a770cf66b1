#include <doctest.h>

#include <random>

#include "dihlab/cubicform.hpp"
#include "dihlab/quadform.hpp"

using namespace dihlab;

TEST_CASE("hessian covariant") {
    auto h = hessian({1, 0, -1, 0});  // x^3 - x y^2
    CHECK(h.p == 3);
    CHECK(h.q == 0);
    CHECK(h.r == 1);
    auto h2 = hessian({1, 0, 0, -1});  // x^3 - y^3: P = b^2-3ac = 0, Q = bc-9ad = 9, R = 0
    CHECK(h2.p == 0);
    CHECK(h2.q == 9);
    CHECK(h2.r == 0);
    // Q^2 - 4PR = -3 disc on random forms
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100000; ++i) {
        BinaryCubicForm f{static_cast<long long>(rng() % 41) - 20,
                          static_cast<long long>(rng() % 41) - 20,
                          static_cast<long long>(rng() % 41) - 20,
                          static_cast<long long>(rng() % 41) - 20};
        auto hh = hessian(f);
        CHECK(hh.q * hh.q - 4 * hh.p * hh.r == -3 * f.disc());
    }
}

TEST_CASE("discriminant is a unimodular invariant") {
    std::mt19937_64 rng(43);
    int tested = 0;
    while (tested < 500) {
        BinaryCubicForm f{static_cast<long long>(rng() % 11) - 5,
                          static_cast<long long>(rng() % 11) - 5,
                          static_cast<long long>(rng() % 11) - 5,
                          static_cast<long long>(rng() % 11) - 5};
        if (f.disc() == 0) continue;
        ++tested;
        BinaryCubicForm g = f;
        for (int k = 0; k < 20; ++k) {
            switch (rng() % 3) {
                case 0: g = transform(g, 1, static_cast<long long>(rng() % 5) - 2, 0, 1); break;
                case 1: g = transform(g, 1, 0, static_cast<long long>(rng() % 5) - 2, 1); break;
                default: g = transform(g, 0, 1, -1, 0); break;
            }
            CHECK(g.disc() == f.disc());
        }
    }
}

TEST_CASE("canonical representative is a class invariant") {
    std::mt19937_64 rng(47);
    for (BinaryCubicForm f :
         {BinaryCubicForm{1, 0, -1, -1}, BinaryCubicForm{1, 1, -2, -1}, BinaryCubicForm{1, 3, 3, 3},
          BinaryCubicForm{1, 0, -4, -1}, BinaryCubicForm{2, 1, -3, -1}}) {
        if (!is_irreducible_form(f)) continue;
        BinaryCubicForm can = canonical_class_representative(f);
        for (int i = 0; i < 100; ++i) {
            BinaryCubicForm g = f;
            for (int k = 0; k < 8; ++k) {
                switch (rng() % 3) {
                    case 0: g = transform(g, 1, static_cast<long long>(rng() % 5) - 2, 0, 1); break;
                    case 1: g = transform(g, 1, 0, static_cast<long long>(rng() % 5) - 2, 1); break;
                    default: g = transform(g, 0, 1, -1, 0); break;
                }
            }
            CHECK(canonical_class_representative(g) == can);
        }
    }
}

TEST_CASE("field counts at small discriminants") {
    auto neg = enumerate_fields(25, DiscSign::negative);
    REQUIRE(neg.size() == 1);
    CHECK(neg[0].disc == -23);  // x^3 - x - 1
    CHECK(neg[0].n_fields == 1);
    CHECK(is_irreducible_form(neg[0].representatives[0]));
    CHECK(is_maximal_form(neg[0].representatives[0]));

    // no cubic field of discriminant -4 or 5
    CubicFieldTable t(100);
    CHECK(t.count(-4) == 0);
    CHECK(t.count(5) == 0);
    CHECK(t.count(-23) == 1);
    CHECK(t.count(49) == 1);   // cyclic field of conductor 7
    CHECK(t.count(81) == 1);
    CHECK(t.r3(-23) == 1);
    CHECK(t.r3(5) == 0);
    CHECK(r3_from_count(-23) == 1);
}

TEST_CASE("maximality filter") {
    CHECK(is_maximal_form({1, 0, -1, -1}));        // disc -23
    CHECK_FALSE(is_maximal_form({1, 0, -9, -27})); // index-3 subring, disc -23 * 3^6
    CHECK_FALSE(is_maximal_form({2, 0, -2, -2}));  // imprimitive
    CHECK(is_maximal_form({1, 0, 0, 2}));          // Z[cbrt(2)], disc -108
}

TEST_CASE("enumeration classes are duplicate-free") {
    for (auto sign : {DiscSign::negative, DiscSign::positive}) {
        auto fields = enumerate_fields(2000, sign);
        for (const auto& fc : fields) {
            for (const auto& rep : fc.representatives) {
                CHECK(is_irreducible_form(rep));
                CHECK(canonical_class_representative(rep) == rep);
            }
            for (size_t i = 0; i < fc.representatives.size(); ++i)
                for (size_t j = i + 1; j < fc.representatives.size(); ++j)
                    CHECK_FALSE(fc.representatives[i] == fc.representatives[j]);
        }
    }
}

TEST_CASE("cross-oracle against quadratic forms, |d| <= 2000") {
    CubicFieldTable table(2000);
    for (long long d = -2000; d <= 2000; ++d) {
        if (d == 0 || d == 1 || !is_fundamental_discriminant(d)) continue;
        CHECK(table.r3(d) == p_rank(d, 3));
    }
}

TEST_CASE("count sanity against published totals") {
    // cubic field counts up to 10^6, both signs
    auto neg = enumerate_fields(1000000, DiscSign::negative);
    long long nneg = 0;
    for (const auto& fc : neg) nneg += fc.n_fields;
    CHECK(nneg == 182417);
    auto pos = enumerate_fields(1000000, DiscSign::positive);
    long long npos = 0;
    for (const auto& fc : pos) npos += fc.n_fields;
    CHECK(npos == 54600);
}
