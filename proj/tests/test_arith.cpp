#include <doctest.h>

#include <random>

#include "dihlab/arith.hpp"

using namespace dihlab;

namespace {

// independent oracle: resultant as the Sylvester determinant, fraction-free
Integer sylvester_resultant(const IntPolynomial& a, const IntPolynomial& b) {
    int m = a.degree(), n = b.degree();
    if (m < 0 || n < 0) return 0;
    int size = m + n;
    if (size == 0) return 1;
    std::vector<std::vector<Integer>> s(size, std::vector<Integer>(size, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[i][i + j] = a.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[n + i][i + j] = b.coeff(n - j);
    // Bareiss
    Integer denom = 1;
    int sign = 1;
    for (int k = 0; k < size - 1; ++k) {
        if (s[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < size; ++i)
                if (s[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(s[k], s[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < size; ++i)
            for (int j = k + 1; j < size; ++j) {
                Integer num = s[i][j] * s[k][k] - s[i][k] * s[k][j];
                if (num % denom != 0) throw std::logic_error("bareiss inexact");
                s[i][j] = num / denom;
            }
        denom = s[k][k];
    }
    return sign * s[size - 1][size - 1];
}

// independent oracle: Legendre symbol by counting squares
int legendre_by_squares(long a, long p) {
    long r = ((a % p) + p) % p;
    if (r == 0) return 0;
    for (long x = 1; x < p; ++x)
        if (x * x % p == r) return 1;
    return -1;
}

}  // namespace

TEST_CASE("kronecker symbol") {
    CHECK(kronecker(5, 1) == 1);
    CHECK(kronecker(-23, 7) == legendre_by_squares(-23, 7));
    CHECK(kronecker(-103, 3) == legendre_by_squares(-103, 3));
    // multiplicativity in both arguments
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        long a = static_cast<long>(rng() % 400) - 200;
        long b = static_cast<long>(rng() % 400) - 200;
        long n = static_cast<long>(rng() % 200) - 100;
        long m = static_cast<long>(rng() % 200) - 100;
        CHECK(kronecker(Integer(a) * b, n) == kronecker(a, n) * kronecker(b, n));
        CHECK(kronecker(a, Integer(n) * m) == kronecker(a, n) * kronecker(a, m));
    }
}

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));        // Carmichael
    CHECK(is_prime(Integer("1000000007")));
    CHECK(is_prime(Integer("170141183460469231731687303715884105727")));  // 2^127 - 1
    CHECK_FALSE(is_prime(Integer("170141183460469231731687303715884105725")));
}

TEST_CASE("factorize") {
    auto f = factorize(12);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].prime == 2);
    CHECK(f.factors[0].exponent == 2);
    CHECK(f.factors[1].prime == 3);
    CHECK(f.complete);

    auto g = factorize(97583);
    CHECK(g.complete);
    // trial-division oracle
    {
        long n = 97583;
        std::vector<std::pair<long, unsigned>> expect;
        for (long d = 2; d * d <= n; ++d) {
            unsigned e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            if (e) expect.emplace_back(d, e);
        }
        if (n > 1) expect.emplace_back(n, 1);
        REQUIRE(g.factors.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) {
            CHECK(g.factors[i].prime == expect[i].first);
            CHECK(g.factors[i].exponent == expect[i].second);
        }
    }

    // two large primes with a tiny budget: partial with composite cofactor
    Integer p1("4000000000000000000000000000000000000037");
    Integer p2("4000000000000000000000000000000000000087");
    EffortBudget tiny{100, 10};
    auto h = factorize(p1 * p2, tiny);
    CHECK_FALSE(h.complete);
    CHECK(h.cofactor > 1);
    CHECK(h.reassemble_abs() == p1 * p2);

    CHECK_THROWS_AS(factorize(0), std::invalid_argument);

    // reassembly identity on random inputs
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        long long n = static_cast<long long>(rng() % 4'000'000'000LL) + 2;
        auto fr = factorize(to_integer(n));
        CHECK(fr.reassemble_abs() == to_integer(n));
    }
}

TEST_CASE("is_squarefree") {
    CHECK(is_squarefree(12) == Tri::no);
    CHECK(is_squarefree(97583) == Tri::yes);
    CHECK(is_squarefree(1) == Tri::yes);
    CHECK(is_squarefree(-4) == Tri::no);
    CHECK_THROWS_AS(is_squarefree(0), std::invalid_argument);
    // never contradicts a complete factorization
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        long long n = static_cast<long long>(rng() % 10'000'000) + 2;
        auto f = factorize(to_integer(n));
        REQUIRE(f.complete);
        bool sq = true;
        for (const auto& e : f.factors) sq = sq && e.exponent < 2;
        CHECK((is_squarefree(to_integer(n)) == Tri::yes) == sq);
    }
}

TEST_CASE("squarefree part") {
    CHECK(squarefree_part(12) == 3);       // 12 = 3 * 2^2
    CHECK(squarefree_part(-963) == -107);  // -963 = -107 * 3^2
    CHECK(squarefree_part(8) == 2);
    CHECK(squarefree_part(7) == 7);
    std::mt19937_64 rng(14);
    for (int i = 0; i < 200; ++i) {
        long long n = static_cast<long long>(rng() % 1'000'000) + 2;
        Integer s = squarefree_part(to_integer(n));
        CHECK(is_squarefree(s) == Tri::yes);
        CHECK(is_perfect_square(to_integer(n) / s));
    }
}

TEST_CASE("polynomial discriminants") {
    IntPolynomial f({1, 29, 0, 1});  // x^3 + 29x + 1
    CHECK(poly_discriminant(f) == -97583);
    CHECK(poly_discriminant(IntPolynomial({0, 1, 1})) == 1);  // x^2 + x
    // quintic family at b = 1: disc = 103^2
    IntPolynomial q({1, 1, -3, 3, -2, 1});
    CHECK(poly_discriminant(q) == 10609);
    CHECK_THROWS_AS(poly_discriminant(IntPolynomial({1, 2})), std::invalid_argument);

    // closed form -4a^3 - 27 against the subresultant route
    for (long a = -50; a <= 50; ++a) {
        IntPolynomial g({1, a, 0, 1});
        CHECK(poly_discriminant(g) == -4 * Integer(a) * a * a - 27);
    }
}

TEST_CASE("resultant matches the Sylvester determinant") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 300; ++i) {
        int da = 1 + static_cast<int>(rng() % 5), db = 1 + static_cast<int>(rng() % 4);
        std::vector<Integer> ca(da + 1), cb(db + 1);
        for (auto& c : ca) c = static_cast<long>(rng() % 21) - 10;
        for (auto& c : cb) c = static_cast<long>(rng() % 21) - 10;
        if (ca.back() == 0) ca.back() = 1;
        if (cb.back() == 0) cb.back() = 1;
        IntPolynomial a(ca), b(cb);
        CHECK(resultant(a, b) == sylvester_resultant(a, b));
    }
}

TEST_CASE("irreducibility") {
    long wit = 0;
    CHECK(is_irreducible(IntPolynomial({1, 29, 0, 1})) == Tri::yes);
    CHECK(is_irreducible(IntPolynomial({-1, 0, 0, 1})) == Tri::no);  // x^3 - 1
    CHECK(is_irreducible(IntPolynomial({1, 1, -3, 3, -2, 1}), &wit) == Tri::yes);
    CHECK(wit > 0);  // a mod-p witness was found and recorded
    CHECK(is_irreducible(IntPolynomial({2, 1})) == Tri::yes);  // degree 1
    CHECK_THROWS_AS(is_irreducible(IntPolynomial({1})), std::invalid_argument);
    CHECK_THROWS_AS(is_irreducible(IntPolynomial({1, 0, 0, 0, 0, 0, 1})), std::invalid_argument);
    // x^4 + 4 factors as (x^2-2x+2)(x^2+2x+2), no rational root: stays unknown
    CHECK(is_irreducible(IntPolynomial({4, 0, 0, 0, 1})) == Tri::unknown);
}
