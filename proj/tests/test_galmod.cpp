#include <doctest.h>

#include <algorithm>
#include <random>

#include "dihlab/galmod.hpp"

using namespace dihlab;
using W = GroupRingWord;

namespace {

MatI64 ident(size_t k) {
    MatI64 m(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < k; ++i) m[i][i] = 1;
    return m;
}

PGroupModule cyclic_permutation_module() {
    MatI64 s = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
    return PGroupModule(3, 1, 1, {3, 3, 3}, s, ident(3));
}

}  // namespace

TEST_CASE("construction validates the relations") {
    CHECK_THROWS_AS(PGroupModule(3, 1, 1, {3}, {{2}}, {{1}}), std::invalid_argument);  // sigma^3 != 1
    CHECK_NOTHROW(PGroupModule(3, 2, 2, {3}, {{1}}, {{2}}));  // sigma = 1, tau = -1 is valid
    CHECK_THROWS_AS(PGroupModule(3, 2, 1, {3}, {{1}}, {{1}}),
                    std::invalid_argument);  // r = 1 has order 1, not 2
    CHECK_THROWS_AS(PGroupModule(3, 2, 2, {6}, {{1}}, {{1}}),
                    std::invalid_argument);  // order not a p-power
    CHECK_THROWS_AS(PGroupModule(3, 2, 2, {9, 3}, {{1, 1}, {0, 1}}, ident(2)),
                    std::invalid_argument);  // entry 1 in a (9 <- 3) slot is not well defined
    // tau^2 != 1
    CHECK_THROWS_AS(PGroupModule(3, 2, 2, {9}, {{1}}, {{2}}), std::invalid_argument);
}

TEST_CASE("apply / kernel / image on the cyclic permutation module") {
    PGroupModule m = cyclic_permutation_module();
    CHECK(m.apply(W::zero(), m.full_subgroup()).is_trivial());
    Subgroup nu_img = m.image(W::sigma_power_sum(3));
    CHECK(nu_img.order() == 3);  // the diagonal
    CHECK(nu_img.contains(std::vector<long long>{1, 1, 1}));
    Subgroup one_minus = m.image(W::one() - W::sigma());
    CHECK(one_minus.order() == 9);
    CHECK(one_minus.contains({1, 2, 0}));       // coordinates summing to 0
    CHECK_FALSE(one_minus.contains({1, 0, 0}));
    CHECK(m.kernel(W::one() - W::one()).order() == 27);
    CHECK(m.fixed_subgroup().order() == 3);
    CHECK(m.fixed_subgroup().structure().render() == "3");
}

TEST_CASE("rank-nullity against brute force") {
    PGroupModule m = cyclic_permutation_module();
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        W w = W::scalar(static_cast<long long>(rng() % 7) - 3) +
              W::sigma().times(static_cast<long long>(rng() % 7) - 3) +
              (W::sigma() * W::sigma()).times(static_cast<long long>(rng() % 7) - 3);
        MatI64 wm = m.word_matrix(w);
        Subgroup ker = m.kernel_matrix(wm), img = m.image_matrix(wm);
        CHECK(ker.order() * img.order() == m.order());
        size_t bk = 0;
        std::vector<std::vector<long long>> imgs;
        for (const auto& x : m.elements()) {
            auto y = m.apply_matrix(wm, x);
            if (std::all_of(y.begin(), y.end(), [](long long v) { return v == 0; })) ++bk;
            imgs.push_back(y);
        }
        std::sort(imgs.begin(), imgs.end());
        imgs.erase(std::unique(imgs.begin(), imgs.end()), imgs.end());
        CHECK(ker.order() == Integer(static_cast<unsigned long>(bk)));
        CHECK(img.order() == Integer(static_cast<unsigned long>(imgs.size())));
    }
}

TEST_CASE("eigenspaces") {
    // (Z/9), tau = -1: A(1) = A, A(0) = 1
    PGroupModule neg(3, 2, 2, {9}, {{1}}, {{8}});
    auto pm = neg.plus_minus();
    CHECK(pm.first.is_trivial());
    CHECK(pm.second.order() == 9);
    PGroupModule pos(3, 2, 2, {9}, {{1}}, {{1}});
    auto pm2 = pos.plus_minus();
    CHECK(pm2.first.order() == 9);
    CHECK(pm2.second.is_trivial());
    // the D3 module (Z/3)^2
    PGroupModule d3(3, 2, 2, {3, 3}, {{1, 1}, {0, 1}}, {{1, 0}, {0, 2}});
    auto pm3 = d3.plus_minus();
    CHECK(pm3.first.order() * pm3.second.order() == 9);
    CHECK_THROWS_AS(cyclic_permutation_module().plus_minus(), std::invalid_argument);
}

TEST_CASE("idempotents are orthogonal and complete, m = 4") {
    // F_{4*5}: p = 5, m = 4, r = 2 on (Z/25)^4 permuted cyclically by tau
    MatI64 t(4, std::vector<long long>(4, 0));
    t[1][0] = t[2][1] = t[3][2] = t[0][3] = 1;
    // sigma trivial keeps the relations valid for any r
    PGroupModule m(5, 4, 2, {25, 25, 25, 25}, ident(4), t);
    Integer prod = 1;
    for (unsigned j = 0; j < 4; ++j) prod *= m.eigenspace(j).order();
    CHECK(prod == m.order());
    // e_i e_j = 0, sum e_j = 1
    auto mul = [&](const MatI64& a, const MatI64& b) {
        MatI64 r(4, std::vector<long long>(4, 0));
        for (int i = 0; i < 4; ++i)
            for (int k2 = 0; k2 < 4; ++k2)
                for (int j = 0; j < 4; ++j) r[i][j] = (r[i][j] + a[i][k2] * b[k2][j]) % 25;
        return r;
    };
    MatI64 sum(4, std::vector<long long>(4, 0));
    for (unsigned i = 0; i < 4; ++i) {
        MatI64 ei = m.idempotent_matrix(i);
        CHECK(mul(ei, ei) == ei);
        for (unsigned j = 0; j < 4; ++j) {
            if (i == j) continue;
            CHECK(mul(ei, m.idempotent_matrix(j)) == MatI64(4, std::vector<long long>(4, 0)));
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) sum[a][b] = (sum[a][b] + ei[a][b]) % 25;
    }
    CHECK(sum == ident(4));
}

TEST_CASE("dihedral image decomposition") {
    // trivial module
    PGroupModule triv(3, 2, 2, {}, {}, {});
    auto c0 = check_dihedral_decomposition(triv);
    CHECK(c0.contained);
    CHECK(c0.equal);
    // containment holds on every valid module; equality on the arithmetic shapes
    PGroupModule d3(3, 2, 2, {3, 3}, {{1, 1}, {0, 1}}, {{1, 0}, {0, 2}});
    auto c1 = check_dihedral_decomposition(d3);
    CHECK(c1.contained);
    CHECK(c1.equal);
    // permutation module with a plus-swap tau: containment only
    MatI64 s = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
    MatI64 t = {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    PGroupModule perm(3, 2, 2, {3, 3, 3}, s, t);
    auto c2 = check_dihedral_decomposition(perm);
    CHECK(c2.contained);
    CHECK_FALSE(c2.equal);
    // Z[zeta_3]/9 with conjugation: the equality direction genuinely fails
    PGroupModule zeta(3, 2, 2, {9, 9}, {{0, 8}, {1, 8}}, {{1, 8}, {0, 8}});
    auto c3 = check_dihedral_decomposition(zeta);
    CHECK(c3.contained);
    CHECK_FALSE(c3.equal);
    // 500 random valid modules: containment never fails
    std::mt19937_64 rng(57);
    for (int i = 0; i < 250; ++i)
        CHECK(verify_dihedral_decomposition(random_dihedral_module(3, rng)));
    for (int i = 0; i < 250; ++i)
        CHECK(verify_dihedral_decomposition(random_dihedral_module(5, rng)));
}

TEST_CASE("twisted exactness") {
    // identity sequence 1 -> A -> A -> 1 -> 1
    PGroupModule a(3, 2, 2, {3, 3}, {{1, 1}, {0, 1}}, {{1, 0}, {0, 2}});
    PGroupModule triv(3, 2, 2, {}, {}, {});
    MatI64 id2 = ident(2);
    MatI64 to_triv(0, std::vector<long long>{});
    CHECK(verify_twisted_exactness(a, a, triv, id2, to_triv));

    // constructed sequence of order 27 with the twist on the quotient
    MatI64 s = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
    MatI64 t = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    PGroupModule b(3, 2, 2, {3, 3, 3}, s, t);
    Subgroup kn = b.kernel(W::sigma_power_sum(3));
    auto r = b.restrict_to(kn);
    auto q = b.quotient_by(kn);
    MatI64 tau_c = q.module.tau_matrix();
    for (size_t i = 0; i < tau_c.size(); ++i)
        for (auto& x : tau_c[i]) x = (q.module.orders()[i] - x) % q.module.orders()[i];
    PGroupModule c_tw(3, 2, 2, q.module.orders(), q.module.sigma_matrix(), tau_c);
    CHECK(verify_twisted_exactness(r.module, b, c_tw, r.inclusion, q.projection));

    // corrupted pi: equivariant but no longer surjective
    MatI64 pi_bad = q.projection;
    for (size_t i = 0; i < pi_bad.size(); ++i)
        for (auto& x : pi_bad[i]) x = (x * 3) % c_tw.orders()[i];
    CHECK_FALSE(verify_twisted_exactness(r.module, b, c_tw, r.inclusion, pi_bad));

    // un-twisted quotient tau: the equivariance check reports it distinctly
    CHECK_THROWS_AS(verify_twisted_exactness(r.module, b, q.module, r.inclusion, q.projection),
                    EquivarianceError);
}

TEST_CASE("structure prediction") {
    // (Z/3)^2 with unipotent sigma: A^nu = 1, n = 2 -> (3,3)
    PGroupModule m1(3, 1, 1, {3, 3}, {{1, 1}, {0, 1}}, ident(2));
    auto g1 = gras_analyze(m1);
    CHECK(g1.n == 2);
    CHECK(g1.nu_trivial);
    CHECK(g1.predicted.render() == "3,3");
    CHECK(g1.predicted == m1.structure());

    // (Z/3)^3 cyclic: A^nu != 1, n = 3 = p -> (3,3,3)
    auto g2 = gras_analyze(cyclic_permutation_module());
    CHECK(g2.n == 3);
    CHECK_FALSE(g2.nu_trivial);
    CHECK(g2.glue_depth == 0);
    CHECK(g2.predicted.render() == "3,3,3");

    // (Z/9), sigma = mult by 4: A^nu != 1, n = 2 < p -> (9)
    PGroupModule m3(3, 1, 1, {9}, {{4}}, {{1}});
    auto g3 = gras_analyze(m3);
    CHECK(g3.n == 2);
    CHECK_FALSE(g3.nu_trivial);
    CHECK(g3.glue_depth == 1);
    CHECK(g3.predicted.render() == "9");

    // glued (9,3) module: n = 3 = p with A^nu != 1 but structure (9,3); the
    // glue depth separates it from the elementary (3,3,3) shape above
    PGroupModule m4(3, 1, 1, {9, 3}, {{1, 3}, {1, 1}}, ident(2));
    auto g4 = gras_analyze(m4);
    CHECK(g4.n == 3);
    CHECK_FALSE(g4.nu_trivial);
    CHECK(g4.glue_depth == 1);
    CHECK(g4.predicted == m4.structure());
    CHECK(g4.predicted.render() == "9,3");

    // precondition #A^G = p
    PGroupModule flat(3, 1, 1, {3, 3}, ident(2), ident(2));
    CHECK_THROWS_AS(gras_analyze(flat), std::invalid_argument);

    // random modules: prediction equals the actual structure, #A = p^n
    std::mt19937_64 rng(61);
    for (long p : {3L, 5L}) {
        for (int i = 0; i < 150; ++i) {
            PGroupModule m = random_sigma_module_with_prime_fixed(p, rng);
            auto g = gras_analyze(m);
            CHECK(g.predicted == m.structure());
            CHECK(m.order() == ipow(to_integer(p), g.n));
        }
    }
}

TEST_CASE("restriction and quotient are order-complementary") {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 50; ++i) {
        PGroupModule b = random_dihedral_module(3, rng);
        Subgroup s = b.image(W::sigma_power_sum(3));  // sigma,tau-stable
        auto r = b.restrict_to(s);
        auto q = b.quotient_by(s);
        CHECK(r.module.order() == s.order());
        CHECK(r.module.order() * q.module.order() == b.order());
        CHECK(r.module.structure() == s.structure());
    }
}

TEST_CASE("small dihedral family is valid and within the order bound") {
    auto fam = small_dihedral_modules(3, 81);
    CHECK(fam.size() > 500);
    for (const auto& m : fam) CHECK(m.order() <= 81);
}
