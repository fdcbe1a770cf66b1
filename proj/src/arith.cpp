#include "dihlab/arith.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace dihlab {

int kronecker(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

bool mr_composite_witness(const Integer& n, const Integer& a, const Integer& d, unsigned long r) {
    if (a % n == 0) return false;
    Integer x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return false;
    for (unsigned long i = 0; i + 1 < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;
}

}  // namespace

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    static const std::array<long, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (long p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Integer d = n - 1;
    unsigned long r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    Integer limit64 = Integer(1) << 64;
    if (n < limit64) {
        // This witness set is deterministic for all n < 3.3e24.
        for (long p : small)
            if (mr_composite_witness(n, p, d, r)) return false;
        return true;
    }
    static gmp_randclass& rng = *[] {
        auto* g = new gmp_randclass(gmp_randinit_mt);
        g->seed(0x5eedUL);
        return g;
    }();
    for (int i = 0; i < 40; ++i) {
        Integer a = 2 + rng.get_z_range(n - 3);
        if (mr_composite_witness(n, a, d, r)) return false;
    }
    return true;
}

Integer Factorization::reassemble_abs() const {
    Integer m = cofactor;
    for (const auto& f : factors) m *= ipow(f.prime, f.exponent);
    return m;
}

namespace {

Integer rho_split(const Integer& n, unsigned long& rounds) {
    // Floyd cycle with deterministic polynomial increments.
    for (Integer c = 1; rounds > 0; ++c) {
        Integer x = 2, y = 2, d = 1;
        while (d == 1 && rounds > 0) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Integer diff = abs(x - y);
            if (diff == 0) break;  // cycle without factor, restart with new c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            --rounds;
        }
        if (d > 1 && d < n) return d;
    }
    return 0;
}

}  // namespace

Factorization factorize(const Integer& n, const EffortBudget& budget) {
    if (n == 0) throw std::invalid_argument("factorize: zero input");
    Factorization out;
    out.sign = sgn(n);
    Integer m = abs(n);
    std::vector<FactorEntry> found;

    auto strip = [&](unsigned long p) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e) found.push_back({Integer(static_cast<long>(p)), e});
    };

    strip(2);
    strip(3);
    for (unsigned long d = 5; d <= budget.trial_limit && m > 1; d += 6) {
        if (Integer(d) * d > m) break;
        strip(d);
        strip(d + 2);
    }
    if (m > 1 && Integer(budget.trial_limit) * budget.trial_limit >= m) {
        // Trial division ran past sqrt(m), so the remainder is prime.
        found.push_back({m, 1});
        m = 1;
    }

    unsigned long rounds = budget.rho_rounds;
    std::vector<Integer> pending;
    if (m > 1) pending.push_back(m);
    while (!pending.empty()) {
        Integer q = pending.back();
        pending.pop_back();
        if (is_prime(q)) {
            found.push_back({q, 1});
            continue;
        }
        if (is_perfect_square(q)) {
            Integer r = isqrt(q);
            pending.push_back(r);
            pending.push_back(r);
            continue;
        }
        Integer g = rounds > 0 ? rho_split(q, rounds) : Integer(0);
        if (g == 0) {
            out.cofactor *= q;
            out.complete = false;
            continue;
        }
        pending.push_back(g);
        pending.push_back(q / g);
    }

    std::sort(found.begin(), found.end(),
              [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
    for (const auto& f : found) {
        if (!out.factors.empty() && out.factors.back().prime == f.prime)
            out.factors.back().exponent += f.exponent;
        else
            out.factors.push_back(f);
    }
    return out;
}

Tri is_squarefree(const Integer& n, const EffortBudget& budget) {
    if (n == 0) throw std::invalid_argument("is_squarefree: zero input");
    Integer m = abs(n);
    if (m == 1) return Tri::yes;
    if (is_perfect_square(m)) return Tri::no;
    Factorization f = factorize(m, budget);
    for (const auto& e : f.factors)
        if (e.exponent >= 2) return Tri::no;
    if (f.complete) return Tri::yes;
    if (is_perfect_square(f.cofactor)) return Tri::no;
    for (const auto& e : f.factors)
        if (f.cofactor % e.prime == 0) return Tri::no;
    return Tri::unknown;
}

Integer squarefree_part(const Integer& n, const EffortBudget& budget) {
    Factorization f = factorize(n, budget);
    if (!f.complete) throw std::runtime_error("squarefree_part: factorization incomplete");
    Integer k = 1;
    for (const auto& e : f.factors)
        if (e.exponent % 2 == 1) k *= e.prime;
    return f.sign < 0 ? -k : k;
}

std::vector<Integer> divisors(const Integer& n, const EffortBudget& budget) {
    Factorization f = factorize(n, budget);
    if (!f.complete) throw std::runtime_error("divisors: factorization incomplete");
    std::vector<Integer> ds = {1};
    for (const auto& e : f.factors) {
        size_t base = ds.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e.exponent; ++k) {
            pk *= e.prime;
            for (size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
        }
        if (ds.size() > 2'000'000) throw std::runtime_error("divisors: too many divisors");
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// ---------------------------------------------------------------------------
// polynomials

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::from_string(const std::string& s) {
    std::istringstream in(s);
    std::vector<Integer> c;
    std::string tok;
    while (in >> tok) c.emplace_back(tok);
    return IntPolynomial(std::move(c));
}

const Integer& IntPolynomial::coeff(int i) const {
    static const Integer zero = 0;
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return zero;
    return coeffs_[static_cast<size_t>(i)];
}

const Integer& IntPolynomial::leading() const {
    if (coeffs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

IntPolynomial IntPolynomial::derivative() const {
    std::vector<Integer> d;
    for (size_t i = 1; i < coeffs_.size(); ++i) d.push_back(Integer(static_cast<long>(i)) * coeffs_[i]);
    return IntPolynomial(std::move(d));
}

Integer IntPolynomial::content() const {
    Integer g = 0;
    for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

Integer IntPolynomial::eval(const Integer& x) const {
    Integer r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
}

Integer IntPolynomial::eval_homogeneous(const Integer& x, const Integer& y) const {
    Integer r = 0, ypow = 1;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        r = r * x + *it * ypow;
        ypow *= y;
    }
    return r;
}

std::string IntPolynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Integer& c = coeff(i);
        if (c == 0) continue;
        if (!first) out << (c > 0 ? " + " : " - ");
        else if (c < 0) out << "-";
        first = false;
        Integer a = abs(c);
        if (a != 1 || i == 0) out << a.get_str();
        if (i >= 1) {
            if (a != 1) out << "*";
            out << "x";
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

namespace {

IntPolynomial scale(const IntPolynomial& p, const Integer& c) {
    std::vector<Integer> v = p.coeffs();
    for (auto& x : v) x *= c;
    return IntPolynomial(std::move(v));
}

IntPolynomial divexact_poly(const IntPolynomial& p, const Integer& c) {
    std::vector<Integer> v = p.coeffs();
    for (auto& x : v) {
        if (x % c != 0) throw std::logic_error("inexact polynomial division");
        x /= c;
    }
    return IntPolynomial(std::move(v));
}

// Pseudo-remainder: lc(B)^{degA-degB+1} A  mod  B.
IntPolynomial prem(IntPolynomial a, const IntPolynomial& b) {
    const Integer d = b.leading();
    int e = a.degree() - b.degree() + 1;
    while (!a.is_zero() && a.degree() >= b.degree()) {
        int shift = a.degree() - b.degree();
        Integer lead = a.leading();
        std::vector<Integer> next(std::max(a.degree(), b.degree() + shift) + 1, Integer(0));
        for (int i = 0; i <= a.degree(); ++i) next[static_cast<size_t>(i)] = d * a.coeff(i);
        for (int i = 0; i <= b.degree(); ++i) next[static_cast<size_t>(i + shift)] -= lead * b.coeff(i);
        a = IntPolynomial(std::move(next));
        --e;
    }
    for (; e > 0; --e) a = scale(a, d);
    return a;
}

}  // namespace

Integer resultant(const IntPolynomial& a0, const IntPolynomial& b0) {
    if (a0.is_zero() || b0.is_zero()) return 0;
    IntPolynomial a = a0, b = b0;
    Integer ca = a.content(), cb = b.content();
    a = divexact_poly(a, ca);
    b = divexact_poly(b, cb);
    Integer t = ipow(ca, static_cast<unsigned long>(b.degree())) *
                ipow(cb, static_cast<unsigned long>(a.degree()));
    int s = 1;
    if (a.degree() < b.degree()) {
        if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
        std::swap(a, b);
    }
    Integer g = 1, h = 1;
    while (b.degree() > 0) {
        int delta = a.degree() - b.degree();
        if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
        IntPolynomial r = prem(a, b);
        a = b;
        Integer denom = g * ipow(h, static_cast<unsigned long>(delta));
        b = divexact_poly(r, denom);
        if (b.is_zero()) return 0;
        g = a.leading();
        if (delta > 0) {
            Integer num = ipow(g, static_cast<unsigned long>(delta));
            Integer den = ipow(h, static_cast<unsigned long>(delta - 1));
            if (num % den != 0) throw std::logic_error("subresultant: inexact h update");
            h = num / den;
        }
    }
    // deg b == 0 here
    Integer lb = b.leading();
    Integer num = ipow(lb, static_cast<unsigned long>(a.degree()));
    Integer den = ipow(h, static_cast<unsigned long>(std::max(a.degree() - 1, 0)));
    if (num % den != 0) throw std::logic_error("subresultant: inexact final division");
    return s * t * (num / den);
}

Integer poly_discriminant(const IntPolynomial& f) {
    int n = f.degree();
    if (n < 2) throw std::invalid_argument("poly_discriminant: degree must be >= 2");
    Integer r = resultant(f, f.derivative());
    if (r % f.leading() != 0) throw std::logic_error("poly_discriminant: inexact division by lc");
    Integer d = r / f.leading();
    return (n % 4 == 2 || n % 4 == 3) ? -d : d;  // (-1)^{n(n-1)/2}
}

// ---------------------------------------------------------------------------
// irreducibility

namespace {

using PolyP = std::vector<long>;  // dense mod-p polynomial, ascending

PolyP trim(PolyP v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

PolyP mulmod(const PolyP& a, const PolyP& b, const PolyP& f, long p) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    // reduce mod f (monic-ized)
    long inv_lead = 1;
    {
        long lead = f.back(), t = 1;
        for (long e = p - 2; e > 0; e >>= 1) {  // Fermat inverse
            if (e & 1) t = t * lead % p;
            lead = lead * lead % p;
        }
        inv_lead = t;
    }
    size_t df = f.size() - 1;
    for (size_t i = r.size(); i-- > df;) {
        long c = r[i] % p;
        if (c == 0) continue;
        long q = c * inv_lead % p;
        for (size_t j = 0; j < f.size(); ++j)
            r[i - df + j] = ((r[i - df + j] - q * f[j]) % p + p) % p;
    }
    r.resize(df);
    for (auto& c : r) c = ((c % p) + p) % p;
    return trim(r);
}

PolyP x_pow_mod(Integer e, const PolyP& f, long p) {
    PolyP result = {1}, base = {0, 1};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mulmod(result, base, f, p);
        base = mulmod(base, base, f, p);
        e >>= 1;
    }
    return result;
}

PolyP gcd_mod(PolyP a, PolyP b, long p) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        long lead = b.back(), t = 1;
        for (long e = p - 2; e > 0; e >>= 1) {
            if (e & 1) t = t * lead % p;
            lead = lead * lead % p;
        }
        while (a.size() >= b.size() && !a.empty()) {
            long q = a.back() * t % p;
            size_t shift = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j)
                a[shift + j] = ((a[shift + j] - q * b[j]) % p + p) % p;
            a = trim(std::move(a));
        }
        std::swap(a, b);
    }
    return a;
}

bool irreducible_mod_p(const IntPolynomial& f, long p) {
    size_t n = static_cast<size_t>(f.degree());
    PolyP fp(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        Integer c = f.coeff(static_cast<int>(i)) % p;
        fp[i] = c.get_si() < 0 ? c.get_si() + p : c.get_si();
    }
    if (fp.back() == 0) return false;  // degree dropped
    // f irreducible over F_p  iff  x^{p^n} = x mod f  and
    // gcd(x^{p^{n/r}} - x, f) = 1 for every prime r | n.
    PolyP xq = x_pow_mod(ipow(Integer(p), static_cast<unsigned long>(n)), fp, p);
    PolyP x = mulmod({0, 1}, {1}, fp, p);
    if (trim(xq) != trim(x)) return false;
    std::vector<unsigned long> prime_divs;
    unsigned long m = n;
    for (unsigned long r = 2; r * r <= m; ++r)
        while (m % r == 0) {
            prime_divs.push_back(r);
            m /= r;
        }
    if (m > 1) prime_divs.push_back(m);
    std::sort(prime_divs.begin(), prime_divs.end());
    prime_divs.erase(std::unique(prime_divs.begin(), prime_divs.end()), prime_divs.end());
    for (unsigned long r : prime_divs) {
        PolyP xr = x_pow_mod(ipow(Integer(p), n / r), fp, p);
        // xr - x
        PolyP diff = xr;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = ((diff[1] - 1) % p + p) % p;
        PolyP g = gcd_mod(diff, fp, p);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace

Tri is_irreducible(const IntPolynomial& f, long* witness) {
    if (witness) *witness = 0;
    int n = f.degree();
    if (n < 1 || n > 5) throw std::invalid_argument("is_irreducible: degree must be in [1,5]");
    if (f.content() != 1) throw std::invalid_argument("is_irreducible: content must be 1");
    if (n == 1) return Tri::yes;
    if (f.coeff(0) == 0) return Tri::no;  // root 0

    bool root_test_done = false;
    try {
        std::vector<Integer> ps = divisors(f.coeff(0));
        std::vector<Integer> qs = divisors(f.leading());
        for (const auto& p : ps)
            for (const auto& q : qs) {
                Integer g;
                mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
                if (g != 1) continue;
                if (f.eval_homogeneous(p, q) == 0 || f.eval_homogeneous(-p, q) == 0)
                    return Tri::no;
            }
        root_test_done = true;
    } catch (const std::runtime_error&) {
        if (n <= 3) throw;  // cubic case must be decided exactly
    }
    if (n <= 3) return Tri::yes;

    static const long small_primes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,
                                        37,  41,  43,  47,  53,  59,  61,  67,  71,  73,  79,
                                        83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137,
                                        139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
                                        197, 199};
    for (long p : small_primes) {
        if (f.leading() % p == 0) continue;
        if (irreducible_mod_p(f, p)) {
            if (witness) *witness = p;
            return Tri::yes;
        }
    }
    (void)root_test_done;
    return Tri::unknown;
}

}  // namespace dihlab
