#include "dihlab/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "dihlab/arith.hpp"

namespace dihlab {

namespace {

using i128 = __int128;

long long checked_ll(i128 v) {
    if (v > i128(0x7fffffffffffffffLL) || v < -i128(0x7fffffffffffffffLL))
        throw std::overflow_error("quadform: intermediate exceeds int64");
    return static_cast<long long>(v);
}

long long llsqrt(long long n) {
    if (n < 0) throw std::invalid_argument("llsqrt of negative");
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

long long gcd3(long long a, long long b, long long c) {
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c));
}

// u*a + v*b = g
long long xgcd(long long a, long long b, long long& u, long long& v) {
    long long u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (b != 0) {
        long long q = a / b;
        long long t = a - q * b;
        a = b;
        b = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    if (a < 0) {
        a = -a;
        u0 = -u0;
        v0 = -v0;
    }
    u = u0;
    v = v0;
    return a;
}

unsigned long long form_key(const QuadraticForm& f) {
    return (static_cast<unsigned long long>(static_cast<unsigned int>(static_cast<int>(f.a)))
            << 32) |
           static_cast<unsigned int>(static_cast<int>(f.b));
}

long long mod_floor(long long x, long long m) {
    long long r = x % m;
    return r < 0 ? r + m : r;
}

bool is_reduced_neg(const QuadraticForm& f) {
    if (!(std::llabs(f.b) <= f.a && f.a <= f.c)) return false;
    if ((std::llabs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

bool is_reduced_pos(const QuadraticForm& f, long long d) {
    if (f.b <= 0) return false;
    if (f.b * f.b >= d) return false;
    long long t = 2 * std::llabs(f.a);
    if ((t + f.b) * (t + f.b) <= d) return false;         // sqrt(d) - b < 2|a|
    if (t > f.b && (t - f.b) * (t - f.b) >= d) return false;  // 2|a| < sqrt(d) + b
    return true;
}

QuadraticForm reduce_neg(QuadraticForm f) {
    if (f.a < 0) throw std::invalid_argument("reduce: expected positive definite form");
    long long d = f.disc();
    for (int guard = 0; guard < 10000; ++guard) {
        // normalize b into (-a, a]
        i128 q = (i128(f.b) + f.a);
        q = q >= 0 ? q / (2 * f.a) : -((-q + 2 * f.a - 1) / (2 * f.a));
        if (q != 0) {
            f.b = checked_ll(i128(f.b) - 2 * q * f.a);
            f.c = checked_ll((i128(f.b) * f.b - d) / (4 * f.a));
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if ((f.a == f.c || f.a == std::llabs(f.b)) && f.b < 0) f.b = -f.b;
        return f;
    }
    throw std::logic_error("reduce_neg: did not terminate");
}

QuadraticForm rho_pos(const QuadraticForm& f, long long d, long long s0) {
    long long absc = std::llabs(f.c);
    long long r;
    if (absc > s0) {
        r = mod_floor(-f.b, 2 * absc);  // into (-|c|, |c|]
        if (r > absc) r -= 2 * absc;
    } else {
        r = s0 - mod_floor(s0 + f.b, 2 * absc);  // into (sqrt(d) - 2|c|, sqrt(d))
    }
    long long c2 = checked_ll((i128(r) * r - d) / (4 * f.c));
    return {f.c, r, c2};
}

QuadraticForm reduce_pos(QuadraticForm f, long long d) {
    long long s0 = llsqrt(d);
    // normalize b with respect to a
    long long absa = std::llabs(f.a);
    if (absa == 0) throw std::invalid_argument("reduce: degenerate form");
    long long b2;
    if (absa > s0) {
        b2 = mod_floor(f.b, 2 * absa);
        if (b2 > absa) b2 -= 2 * absa;
    } else {
        b2 = s0 - mod_floor(s0 - f.b, 2 * absa);
    }
    if (b2 != f.b) {
        f.b = b2;
        f.c = checked_ll((i128(b2) * b2 - d) / (4 * f.a));
    }
    for (int guard = 0; guard < 100000; ++guard) {
        if (is_reduced_pos(f, d)) return f;
        f = rho_pos(f, d, s0);
    }
    throw std::logic_error("reduce_pos: did not terminate");
}

}  // namespace

long long QuadraticForm::disc() const {
    return checked_ll(i128(b) * b - 4 * i128(a) * c);
}

bool QuadraticForm::is_primitive() const { return gcd3(a, b, c) == 1; }

bool is_reduced(const QuadraticForm& f) {
    long long d = f.disc();
    return d < 0 ? (f.a > 0 && is_reduced_neg(f)) : is_reduced_pos(f, d);
}

QuadraticForm reduce(QuadraticForm f) {
    long long d = f.disc();
    if (d == 0 || llsqrt(std::llabs(d)) * llsqrt(std::llabs(d)) == d)
        throw std::invalid_argument("reduce: square discriminant");
    if (!f.is_primitive()) throw std::invalid_argument("reduce: imprimitive form");
    return d < 0 ? reduce_neg(f) : reduce_pos(f, d);
}

QuadraticForm principal_form(long long d) {
    long long delta = mod_floor(d, 2);
    return {1, delta, checked_ll((i128(delta) * delta - d) / 4)};
}

QuadraticForm compose(const QuadraticForm& f0, const QuadraticForm& g0) {
    if (f0.disc() != g0.disc()) throw std::invalid_argument("compose: discriminant mismatch");
    if (!f0.is_primitive() || !g0.is_primitive())
        throw std::invalid_argument("compose: imprimitive form");
    long long d = f0.disc();
    QuadraticForm f = reduce(f0), g = reduce(g0);
    if (d > 0) {
        long long s0 = llsqrt(d);
        if (f.a < 0) f = rho_pos(f, d, s0);
        if (g.a < 0) g = rho_pos(g, d, s0);
    }
    if (f.a > g.a) std::swap(f, g);
    long long a1 = f.a, b1 = f.b;
    long long a2 = g.a, b2 = g.b, c2 = g.c;
    long long s = (b1 + b2) / 2;
    long long n = b2 - s;
    long long y1, dd;
    if (a2 % a1 == 0) {
        y1 = 0;
        dd = a1;
    } else {
        long long u, v;
        dd = xgcd(a2, a1, u, v);
        y1 = u;
    }
    long long x2, y2, d1;
    if (s % dd == 0) {
        y2 = -1;
        x2 = 0;
        d1 = dd;
    } else {
        long long u, v;
        d1 = xgcd(s, dd, u, v);
        x2 = u;
        y2 = -v;
    }
    long long v1 = a1 / d1;
    long long v2 = a2 / d1;
    i128 r128 = (i128(y1) * y2 % v1) * n - i128(x2) * (c2 % v1);
    long long r = mod_floor(static_cast<long long>(r128 % v1), v1);
    i128 a3 = i128(v1) * v2;
    i128 b3 = i128(b2) + 2 * i128(v2) * r;
    // normalize b into (-a3, a3] before deriving c, so everything stays small
    i128 q = b3 + a3;
    q = q >= 0 ? q / (2 * a3) : -((-q + 2 * a3 - 1) / (2 * a3));
    b3 -= 2 * q * a3;
    i128 c3 = (b3 * b3 - d) / (4 * a3);
    QuadraticForm h{checked_ll(a3), checked_ll(b3), checked_ll(c3)};
    return reduce(h);
}

bool is_fundamental_discriminant(long long d) {
    if (d == 0 || d == 1) return false;
    auto sqfree = [](long long n) {
        Tri t = is_squarefree(to_integer(n));
        if (t == Tri::unknown) throw std::runtime_error("squarefree test inconclusive");
        return t == Tri::yes;
    };
    long long m4 = mod_floor(d, 4);
    if (m4 == 1) return sqfree(d);
    if (m4 != 0) return false;
    long long m = d / 4;
    long long mm4 = mod_floor(m, 4);
    return (mm4 == 2 || mm4 == 3) && sqfree(m);
}

// ---------------------------------------------------------------------------
// class group assembly

namespace {

constexpr long long kHardCap = 1'099'511'627'776LL;  // 2^40, int64 safety margin

struct ClassData {
    long long d = 0;
    std::vector<QuadraticForm> reps;
    std::unordered_map<unsigned long long, int> class_of;
    int identity = 0;

    int lookup(const QuadraticForm& f) const {
        auto it = class_of.find(form_key(f));
        if (it == class_of.end()) throw std::logic_error("class lookup miss");
        return it->second;
    }
    int mul(int i, int j) const { return lookup(compose(reps[i], reps[j])); }
    int pw(int i, Integer e) const {
        int acc = identity, base = i;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }
};

std::vector<QuadraticForm> enumerate_reduced_neg(long long d) {
    std::vector<QuadraticForm> out;
    long long amax = llsqrt((-d) / 3);
    int parity = static_cast<int>(mod_floor(d, 2));
    for (long long a = 1; a <= amax; ++a) {
        for (long long b = parity; b <= a; b += 2) {
            i128 t = i128(b) * b - d;
            if (t % (4 * a) != 0) continue;
            long long c = checked_ll(t / (4 * a));
            if (c < a) continue;
            if (gcd3(a, b, c) != 1) continue;
            out.push_back({a, b, c});
            if (b != 0 && b != a && a != c) out.push_back({a, -b, c});
        }
    }
    return out;
}

std::vector<QuadraticForm> enumerate_reduced_pos(long long d) {
    std::vector<QuadraticForm> out;
    long long s0 = llsqrt(d);
    for (long long b = (d % 2 == 0) ? 2 : 1; b <= s0; b += 2) {
        long long nn = (d - b * b) / 4;
        if (nn <= 0) continue;
        for (long long u = 1; u * u <= nn; ++u) {
            if (nn % u != 0) continue;
            long long pair[2] = {u, nn / u};
            int variants = (pair[0] == pair[1]) ? 1 : 2;
            for (int k = 0; k < variants; ++k) {
                long long A = pair[k], C = pair[1 - k];
                long long t = 2 * A;
                if ((t + b) * (t + b) <= d) continue;
                if (t > b && (t - b) * (t - b) >= d) continue;
                if (gcd3(A, b, C) != 1) continue;
                out.push_back({A, b, -C});
                out.push_back({-A, b, C});
            }
        }
    }
    return out;
}

ClassData build_class_data(long long d, const ClassGroupOptions& opts) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("class_group: not a fundamental discriminant");
    long long lim = opts.extended ? kHardCap : opts.bound;
    if (std::llabs(d) > lim)
        throw std::invalid_argument(
            opts.extended ? "class_group: discriminant exceeds hard cap"
                          : "class_group: discriminant exceeds bound (use extended mode)");
    ClassData cd;
    cd.d = d;
    if (d < 0) {
        cd.reps = enumerate_reduced_neg(d);
        for (size_t i = 0; i < cd.reps.size(); ++i)
            cd.class_of[form_key(cd.reps[i])] = static_cast<int>(i);
    } else {
        std::vector<QuadraticForm> all = enumerate_reduced_pos(d);
        std::unordered_map<unsigned long long, int> seen;
        seen.reserve(all.size() * 2);
        for (const auto& f : all) seen[form_key(f)] = -1;
        long long s0 = llsqrt(d);
        for (const auto& f : all) {
            if (seen[form_key(f)] >= 0) continue;
            int id = static_cast<int>(cd.reps.size());
            cd.reps.push_back(f);
            QuadraticForm cur = f;
            do {
                auto it = seen.find(form_key(cur));
                if (it == seen.end() || it->second >= 0)
                    throw std::logic_error("rho cycle left the reduced set");
                it->second = id;
                cur = rho_pos(cur, d, s0);
            } while (!(cur == f));
        }
        cd.class_of = std::move(seen);
    }
    cd.identity = cd.lookup(reduce(principal_form(d)));
    return cd;
}

// Structure of a finite abelian group given by (size, identity, pow), via
// order statistics: counting x with x^{q^j} = 1 pins the q-part exactly.
template <typename Pw>
AbelianGroupStructure structure_from_table(size_t n, int identity, Pw&& pw) {
    Integer h(static_cast<unsigned long>(n));
    if (n == 1) return {};
    Factorization hf = factorize(h);
    if (!hf.complete) throw std::runtime_error("class number too hard to factor");
    std::vector<Integer> cyclic;
    for (const auto& pe : hf.factors) {
        const Integer& q = pe.prime;
        unsigned e = pe.exponent;
        Integer m = h / ipow(q, e);
        std::vector<long> exact(e + 1, 0);
        for (size_t i = 0; i < n; ++i) {
            int z = pw(static_cast<int>(i), m);
            unsigned j = 0;
            while (z != identity) {
                z = pw(z, q);
                ++j;
            }
            ++exact[j];
        }
        std::vector<unsigned> ranks;  // ranks[j-1] = #factors with exponent >= j
        Integer prev = exact[0];
        Integer cum = prev;
        for (unsigned j = 1; j <= e; ++j) {
            cum += exact[j];
            Integer ratio = cum / prev;
            if (ratio * prev != cum) throw std::logic_error("order statistics not a group");
            unsigned r = 0;
            Integer t = ratio;
            while (t > 1) {
                if (t % q != 0) throw std::logic_error("order statistics: non-q ratio");
                t /= q;
                ++r;
            }
            ranks.push_back(r);
            prev = cum;
        }
        for (unsigned i = 1; i <= (ranks.empty() ? 0u : ranks[0]); ++i) {
            unsigned exp = 0;
            for (unsigned j = 0; j < ranks.size(); ++j)
                if (ranks[j] >= i) exp = j + 1;
            cyclic.push_back(ipow(q, exp));
        }
    }
    return AbelianGroupStructure::from_cyclic_orders(cyclic);
}

std::optional<QuadraticForm> prime_form(long long d, long long p) {
    for (long long b = 0; b < 2 * p; ++b) {
        i128 t = i128(b) * b - d;
        if (t % (4 * p) != 0) continue;
        QuadraticForm f{p, b, checked_ll(t / (4 * p))};
        if (!f.is_primitive()) continue;
        return f;
    }
    return std::nullopt;
}

}  // namespace

Integer FormClassGroup::class_number() const {
    return Integer(static_cast<unsigned long>(reps_.size()));
}

int FormClassGroup::index_of(const QuadraticForm& f) const {
    if (f.disc() != d_) throw std::invalid_argument("index_of: discriminant mismatch");
    QuadraticForm r = reduce(f);
    auto it = class_of_.find(form_key(r));
    if (it == class_of_.end()) throw std::logic_error("index_of: unknown reduced form");
    return it->second;
}

int FormClassGroup::mul(int i, int j) const {
    QuadraticForm r = compose(reps_[static_cast<size_t>(i)], reps_[static_cast<size_t>(j)]);
    return class_of_.at(form_key(r));
}

int FormClassGroup::pow(int i, const Integer& e) const {
    int acc = identity_, base = i;
    Integer k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = mul(acc, base);
        base = mul(base, base);
        k >>= 1;
    }
    return acc;
}

FormClassGroup class_group(long long d, const ClassGroupOptions& opts) {
    ClassData cd = build_class_data(d, opts);
    FormClassGroup g;
    g.d_ = d;
    g.reps_ = cd.reps;
    g.class_of_ = cd.class_of;
    g.identity_ = cd.identity;

    size_t h = cd.reps.size();
    auto pw = [&cd](int i, const Integer& e) { return cd.pw(i, e); };
    g.structure_ = structure_from_table(h, cd.identity, pw);

    // generators by prime-form saturation
    {
        std::vector<char> in(h, 0);
        in[static_cast<size_t>(cd.identity)] = 1;
        size_t covered = 1;
        Integer hh(static_cast<unsigned long>(h));
        std::vector<Integer> hdivs = divisors(hh);
        auto absorb = [&](int gidx) {
            if (in[static_cast<size_t>(gidx)]) return;
            Integer ord = hh;
            for (const auto& e : hdivs)
                if (cd.pw(gidx, e) == cd.identity) {
                    ord = e;
                    break;
                }
            g.generators_.emplace_back(cd.reps[static_cast<size_t>(gidx)], ord);
            std::vector<int> elems;
            elems.reserve(covered);
            for (size_t i = 0; i < h; ++i)
                if (in[i]) elems.push_back(static_cast<int>(i));
            int cur = gidx;
            while (!in[static_cast<size_t>(cur)]) {
                for (int s : elems) in[static_cast<size_t>(cd.mul(s, cur))] = 1;
                cur = cd.mul(cur, gidx);
            }
            covered = 0;
            for (size_t i = 0; i < h; ++i) covered += in[i] ? 1 : 0;
        };
        for (long long p = 2; covered < h && p < 10000; ++p) {
            if (!is_prime(to_integer(p))) continue;
            auto f = prime_form(d, p);
            if (!f) continue;
            absorb(cd.lookup(reduce(*f)));
        }
        for (size_t i = 0; covered < h && i < h; ++i) absorb(static_cast<int>(i));
    }

    if (d < 0) {
        g.ordinary_ = g.structure_;
    } else {
        long long b0 = mod_floor(d, 2);
        QuadraticForm t{-1, b0, checked_ll((d - i128(b0) * b0) / 4)};
        int tidx = cd.lookup(reduce(t));
        if (tidx == cd.identity) {
            g.ordinary_ = g.structure_;
        } else {
            std::vector<int> coset_rep(h);
            std::vector<int> comp(h, -1);
            std::vector<int> quots;
            for (size_t i = 0; i < h; ++i)
                coset_rep[i] = std::min(static_cast<int>(i), cd.mul(static_cast<int>(i), tidx));
            for (size_t i = 0; i < h; ++i)
                if (coset_rep[i] == static_cast<int>(i)) {
                    comp[i] = static_cast<int>(quots.size());
                    quots.push_back(static_cast<int>(i));
                }
            auto qmul = [&](int i, int j) {
                return comp[static_cast<size_t>(
                    coset_rep[static_cast<size_t>(cd.mul(quots[static_cast<size_t>(i)],
                                                         quots[static_cast<size_t>(j)]))])];
            };
            int qid = comp[static_cast<size_t>(coset_rep[static_cast<size_t>(cd.identity)])];
            auto qpw = [&](int i, Integer e) {
                int acc = qid, base = i;
                while (e > 0) {
                    if (mpz_odd_p(e.get_mpz_t())) acc = qmul(acc, base);
                    base = qmul(base, base);
                    e >>= 1;
                }
                return acc;
            };
            g.ordinary_ = structure_from_table(quots.size(), qid, qpw);
        }
    }
    return g;
}

unsigned p_rank(long long d, long p, const ClassGroupOptions& opts) {
    if (p < 3 || !is_prime(to_integer(p))) throw std::invalid_argument("p_rank: odd prime required");
    ClassData cd = build_class_data(d, opts);
    size_t count = 0;
    for (size_t i = 0; i < cd.reps.size(); ++i)
        if (cd.pw(static_cast<int>(i), p) == cd.identity) ++count;
    unsigned r = 0;
    size_t t = count;
    while (t > 1) {
        if (t % static_cast<size_t>(p) != 0)
            throw std::logic_error("p_rank: torsion count is not a power of p");
        t /= static_cast<size_t>(p);
        ++r;
    }
    return r;
}

}  // namespace dihlab
