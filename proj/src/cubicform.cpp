#include "dihlab/cubicform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "dihlab/arith.hpp"

namespace dihlab {

namespace {

using i128 = __int128;

long long checked_ll(i128 v) {
    if (v > i128(0x7fffffffffffffffLL) || v < -i128(0x7fffffffffffffffLL))
        throw std::overflow_error("cubicform: intermediate exceeds int64");
    return static_cast<long long>(v);
}

long long llsqrt(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

i128 eval128(const BinaryCubicForm& f, i128 x, i128 y) {
    return f.a * x * x * x + f.b * x * x * y + f.c * x * y * y + f.d * y * y * y;
}

int sign128(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

struct Mat2 {
    long long m11 = 1, m12 = 0, m21 = 0, m22 = 1;
};

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {checked_ll(i128(a.m11) * b.m11 + i128(a.m12) * b.m21),
            checked_ll(i128(a.m11) * b.m12 + i128(a.m12) * b.m22),
            checked_ll(i128(a.m21) * b.m11 + i128(a.m22) * b.m21),
            checked_ll(i128(a.m21) * b.m12 + i128(a.m22) * b.m22)};
}

long long mod_floor(long long x, long long m) {
    long long r = x % m;
    return r < 0 ? r + m : r;
}

}  // namespace

long long BinaryCubicForm::disc() const {
    i128 v = 18 * i128(a) * b * c * d + i128(b) * b * c * c - 4 * i128(a) * c * c * c -
             4 * i128(b) * b * b * d - 27 * i128(a) * a * d * d;
    return checked_ll(v);
}

long long BinaryCubicForm::content() const {
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::gcd(std::llabs(c), std::llabs(d)));
}

bool BinaryCubicForm::operator<(const BinaryCubicForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return d < o.d;
}

HessianCoefficients hessian(const BinaryCubicForm& f) {
    return {checked_ll(i128(f.b) * f.b - 3 * i128(f.a) * f.c),
            checked_ll(i128(f.b) * f.c - 9 * i128(f.a) * f.d),
            checked_ll(i128(f.c) * f.c - 3 * i128(f.b) * f.d)};
}

BinaryCubicForm transform(const BinaryCubicForm& f, long long m11, long long m12, long long m21,
                          long long m22) {
    i128 a = f.a, b = f.b, c = f.c, d = f.d;
    i128 p = m11, q = m12, r = m21, s = m22;
    i128 a2 = a * p * p * p + b * p * p * r + c * p * r * r + d * r * r * r;
    i128 b2 = 3 * a * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (2 * p * r * s + q * r * r) +
              3 * d * r * r * s;
    i128 c2 = 3 * a * p * q * q + b * (2 * p * q * s + q * q * r) + c * (p * s * s + 2 * q * r * s) +
              3 * d * r * s * s;
    i128 d2 = a * q * q * q + b * q * q * s + c * q * s * s + d * s * s * s;
    return {checked_ll(a2), checked_ll(b2), checked_ll(c2), checked_ll(d2)};
}

// ---------------------------------------------------------------------------
// irreducibility

namespace {

bool has_projective_root_mod(const BinaryCubicForm& f, long long p) {
    auto val = [&](long long x, long long y) {
        long long a = mod_floor(f.a, p), b = mod_floor(f.b, p), cc = mod_floor(f.c, p),
                  d = mod_floor(f.d, p);
        return (((a * x % p) * x % p) * x + ((b * x % p) * x % p) * y + ((cc * x % p) * y % p) * y +
                ((d * y % p) * y % p) * y) %
               p;
    };
    if (val(1, 0) == 0) return true;
    for (long long t = 0; t < p; ++t)
        if (val(t, 1) == 0) return true;
    return false;
}

std::vector<long long> small_divisors(long long n) {
    n = std::llabs(n);
    std::vector<long long> lo, hi;
    for (long long u = 1; u * u <= n; ++u) {
        if (n % u) continue;
        lo.push_back(u);
        if (u != n / u) hi.push_back(n / u);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

}  // namespace

bool is_irreducible_form(const BinaryCubicForm& f) {
    if (f.a == 0 || f.d == 0) return false;  // root (0:1) or (1:0)
    static const long long screen[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (long long p : screen)
        if (!has_projective_root_mod(f, p)) return true;
    // rational root (u:v), gcd(u,v)=1  =>  u | d, v | a
    for (long long u : small_divisors(f.d))
        for (long long v : small_divisors(f.a)) {
            if (std::gcd(u, v) != 1) continue;
            if (eval128(f, u, v) == 0 || eval128(f, -u, v) == 0) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// canonical representatives, positive discriminant (reduced Hessian)

namespace {

i128 qeval(const HessianCoefficients& h, i128 x, i128 y) {
    return h.p * x * x + h.q * x * y + h.r * y * y;
}

// 2 * bilinear form
i128 qbil2(const HessianCoefficients& h, i128 x1, i128 y1, i128 x2, i128 y2) {
    return 2 * h.p * x1 * x2 + h.q * (x1 * y2 + y1 * x2) + 2 * h.r * y1 * y2;
}

// Reduce a positive definite (P,Q,R) to -P < Q <= P <= R (Q >= 0 when P = R),
// tracking M with H o M reduced.
std::pair<HessianCoefficients, Mat2> reduce_posdef(HessianCoefficients h) {
    Mat2 m;
    for (int guard = 0; guard < 100000; ++guard) {
        // translate Q into (-P, P]
        i128 t128 = i128(h.p) - h.q;
        i128 twop = 2 * i128(h.p);
        i128 t = t128 >= 0 ? t128 / twop : -((-t128 + twop - 1) / twop);
        if (t != 0) {
            long long tl = checked_ll(t);
            h.r = checked_ll(i128(h.p) * tl * tl + i128(h.q) * tl + h.r);
            h.q = checked_ll(i128(h.q) + 2 * i128(h.p) * tl);
            m = mat_mul(m, {1, tl, 0, 1});
        }
        if (h.r < h.p) {
            h = {h.r, -h.q, h.p};
            m = mat_mul(m, {0, -1, 1, 0});
            continue;
        }
        break;
    }
    if (h.p == h.r && h.q < 0) {
        h = {h.r, -h.q, h.p};
        m = mat_mul(m, {0, -1, 1, 0});
    }
    if (!(-h.p < h.q && h.q <= h.p && h.p <= h.r))
        throw std::logic_error("posdef reduction failed");
    return {h, m};
}

// All A in GL2(Z) with H o A loose-reduced (|Q'| <= P' <= R'), H loose-reduced.
std::vector<Mat2> loose_automorphs(const HessianCoefficients& h) {
    std::vector<Mat2> out;
    for (long long u = -1; u <= 1; ++u)
        for (long long v = -1; v <= 1; ++v) {
            if (u == 0 && v == 0) continue;
            if (qeval(h, u, v) != h.p) continue;
            // det((u,v),(x,y)) = u*y - v*x = eps, second column solves H(w)=R
            long long al, be;
            long long g = std::gcd(std::llabs(u), std::llabs(v));
            if (g != 1) continue;
            // find (x0,y0) with u*y0 - v*x0 = 1
            {
                long long uu = u, vv = v;
                long long s0 = 1, s1 = 0, t0 = 0, t1 = 1;
                while (vv != 0) {
                    long long q = uu / vv;
                    long long tmp = uu - q * vv;
                    uu = vv;
                    vv = tmp;
                    tmp = s0 - q * s1;
                    s0 = s1;
                    s1 = tmp;
                    tmp = t0 - q * t1;
                    t0 = t1;
                    t1 = tmp;
                }
                // s0*u + t0*v = uu = +-1
                if (uu < 0) {
                    s0 = -s0;
                    t0 = -t0;
                }
                // want u*y0 - v*x0 = 1: take y0 = s0, x0 = -t0
                al = -t0;
                be = s0;
            }
            for (int eps = -1; eps <= 1; eps += 2) {
                i128 x0 = i128(eps) * al, y0 = i128(eps) * be;
                // H(x0 + k u, y0 + k v) = R: P' k^2 + B k + C = 0 with P' = H(u,v) = P
                i128 A = h.p;
                i128 B = qbil2(h, u, v, x0, y0);
                i128 C = qeval(h, x0, y0) - h.r;
                i128 disc = B * B - 4 * A * C;
                if (disc < 0) continue;
                long long sq = llsqrt(checked_ll(disc));
                if (i128(sq) * sq != disc) continue;
                for (int pm = -1; pm <= 1; pm += 2) {
                    i128 num = -B + pm * i128(sq);
                    if (num % (2 * A) != 0) continue;
                    i128 k = num / (2 * A);
                    long long wx = checked_ll(x0 + k * u), wy = checked_ll(y0 + k * v);
                    i128 qq = qbil2(h, u, v, wx, wy);
                    if (qq > h.p || qq < -h.p) continue;
                    Mat2 cand{u, wx, v, wy};
                    bool dup = false;
                    for (const auto& e : out)
                        if (e.m11 == cand.m11 && e.m12 == cand.m12 && e.m21 == cand.m21 &&
                            e.m22 == cand.m22)
                            dup = true;
                    if (!dup) out.push_back(cand);
                    if (sq == 0) break;  // pm = -1 duplicates pm = +1
                }
            }
        }
    return out;
}

BinaryCubicForm canonical_pos(const BinaryCubicForm& f) {
    auto [hr, m0] = reduce_posdef(hessian(f));
    bool have = false;
    BinaryCubicForm best{};
    for (const Mat2& a : loose_automorphs(hr)) {
        Mat2 m = mat_mul(m0, a);
        BinaryCubicForm g = transform(f, m.m11, m.m12, m.m21, m.m22);
        if (g.a <= 0) continue;  // the negated candidate appears separately
        if (!have || g < best) {
            best = g;
            have = true;
        }
    }
    if (!have) throw std::logic_error("canonical_pos: no candidate with positive lead");
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// canonical representatives, negative discriminant (reduced quadratic factor)
//
// F = (e x + g y)(x^2 + s x y + t y^2) over R with the quadratic factor
// positive definite; F is reduced when |s| < 1 < t.  For irreducible F the
// boundary cases cannot occur, and the inequalities are decided exactly:
// with a > 0,   s < 1  <=>  F(a-b, a) > 0,   s > -1  <=>  F(-(a+b), a) < 0,
//               t > 1  <=>  d * F(-d, a) < 0.

namespace {

bool mathews_reduced(const BinaryCubicForm& f) {
    if (f.a <= 0) return false;
    if (sign128(eval128(f, f.a - f.b, f.a)) <= 0) return false;
    if (sign128(eval128(f, -(f.a + f.b), f.a)) >= 0) return false;
    return sign128(i128(f.d) * eval128(f, -f.d, f.a)) < 0;
}

BinaryCubicForm negate(const BinaryCubicForm& f) { return {-f.a, -f.b, -f.c, -f.d}; }

BinaryCubicForm canonical_neg(BinaryCubicForm f) {
    if (f.a == 0) {
        // move a nonzero value into the leading slot (irreducible => d != 0)
        f = transform(f, 0, 1, -1, 0);
    }
    if (f.a < 0) f = negate(f);
    for (int guard = 0; guard < 100000; ++guard) {
        // translate s into (-1, 1)
        for (int g2 = 0; g2 < 100000; ++g2) {
            if (sign128(eval128(f, f.a - f.b, f.a)) < 0)  // s > 1
                f = transform(f, 1, -1, 0, 1);
            else if (sign128(eval128(f, -(f.a + f.b), f.a)) > 0)  // s < -1
                f = transform(f, 1, 1, 0, 1);
            else
                break;
        }
        if (sign128(i128(f.d) * eval128(f, -f.d, f.a)) < 0) break;  // t > 1: reduced
        f = transform(f, 0, 1, -1, 0);                              // swap the two slots
        if (f.a < 0) f = negate(f);
    }
    if (!mathews_reduced(f)) throw std::logic_error("canonical_neg: reduction failed");
    BinaryCubicForm flip{f.a, -f.b, f.c, -f.d};
    return std::min(f, flip);
}

}  // namespace

BinaryCubicForm canonical_class_representative(const BinaryCubicForm& f) {
    long long d = f.disc();
    if (d == 0) throw std::invalid_argument("canonical form: zero discriminant");
    if (!is_irreducible_form(f)) throw std::invalid_argument("canonical form: reducible form");
    return d > 0 ? canonical_pos(f) : canonical_neg(f);
}

// ---------------------------------------------------------------------------
// maximality (index test at each p with p^2 | disc)

bool is_maximal_form(const BinaryCubicForm& f) {
    if (f.content() != 1) return false;
    Integer d = to_integer(f.disc());
    Factorization fd = factorize(abs(d));
    if (!fd.complete) throw std::runtime_error("is_maximal_form: discriminant too hard to factor");
    for (const auto& pe : fd.factors) {
        if (pe.exponent < 2) continue;
        long long p = pe.prime.get_si();
        // multiple roots of F mod p; move each to (1:0) and test p^2 | a'
        std::vector<std::pair<long long, long long>> roots;
        if (mod_floor(f.a, p) == 0) roots.emplace_back(1, 0);
        for (long long t = 0; t < p; ++t) {
            i128 v = eval128(f, t, 1);
            long long m = static_cast<long long>(((v % p) + p) % p);
            if (m == 0) roots.emplace_back(t, 1);
        }
        for (auto [u, v] : roots) {
            // integer lift with gcd(u, v) = 1
            while (std::gcd(u, v) != 1) u += p;
            // complete to det-1 matrix (u, x0; v, y0)
            long long uu = u, vv = v, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (vv != 0) {
                long long q = uu / vv, tmp = uu - q * vv;
                uu = vv;
                vv = tmp;
                tmp = s0 - q * s1;
                s0 = s1;
                s1 = tmp;
                tmp = t0 - q * t1;
                t0 = t1;
                t1 = tmp;
            }
            if (uu < 0) {
                s0 = -s0;
                t0 = -t0;
            }
            long long x0 = -t0, y0 = s0;  // u*y0 - v*x0 = 1
            BinaryCubicForm g = transform(f, u, x0, v, y0);
            if (mod_floor(g.a, p) != 0) throw std::logic_error("maximality: lost root");
            if (mod_floor(g.b, p) != 0) continue;  // simple root, nothing to test
            if (mod_floor(g.a, p * p) == 0) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct FormHash {
    size_t operator()(const BinaryCubicForm& f) const {
        auto mix = [](size_t h, long long v) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        };
        size_t h = 0;
        h = mix(h, f.a);
        h = mix(h, f.b);
        h = mix(h, f.c);
        h = mix(h, f.d);
        return h;
    }
};

// Positive discriminants: loop (a, b, P, Q) over the reduced-Hessian region,
// derive c and d from the congruences 3a | b^2 - P and 9a | bc - Q.
void enumerate_pos(long long bound, std::unordered_set<BinaryCubicForm, FormHash>& classes) {
    // Reduced-Hessian region: the syzygy 4P^3 = G(1,0)^2 + 27 D a^2 together
    // with P^2 <= PR <= D gives a^2 <= 4P/27 and b^2 <= 4P/3.
    long long pmax = llsqrt(bound);
    double x = static_cast<double>(bound);
    long long amax = static_cast<long long>(0.38491 * std::pow(x, 0.25)) + 1;
    long long bmax_all = static_cast<long long>(1.15471 * std::pow(x, 0.25)) + 1;
    for (long long a = 1; a <= amax; ++a) {
        for (long long b = -bmax_all; b <= bmax_all; ++b) {
            long long pmin = std::max((27 * a * a + 3) / 4, (3 * b * b + 3) / 4);
            pmin = std::max(pmin, 1LL);
            long long pstart = pmin + mod_floor(b * b - pmin, 3 * a);
            for (long long P = pstart; P <= pmax; P += 3 * a) {
                if (4 * P < 27 * a * a || 4 * P < 3 * b * b) continue;
                long long c = (b * b - P) / (3 * a);
                i128 bc = i128(b) * c;
                long long r0 = static_cast<long long>(((bc % (9 * a)) + 9 * a) % (9 * a));
                long long q0 = -P + mod_floor(r0 + P, 9 * a);
                for (long long Q = q0; Q <= P; Q += 9 * a) {
                    i128 dd128 = (bc - Q) / (9 * a);
                    long long d = checked_ll(dd128);
                    i128 R = i128(c) * c - 3 * i128(b) * d;
                    if (R < P) continue;
                    BinaryCubicForm F{a, b, c, d};
                    i128 disc = 18 * i128(a) * b * c * d + i128(b) * b * c * c -
                                4 * i128(a) * c * c * c - 4 * i128(b) * b * b * d -
                                27 * i128(a) * a * d * d;
                    if (disc <= 0 || disc > bound) continue;
                    if (F.content() != 1) continue;
                    if (!is_irreducible_form(F)) continue;
                    classes.insert(canonical_pos(F));
                }
            }
        }
    }
}

// Negative discriminants: coefficient box from the reduced quadratic factor
// (|s| < 1 < t), d restricted by the discriminant window.
void enumerate_neg(long long bound, std::unordered_set<BinaryCubicForm, FormHash>& classes) {
    double x = static_cast<double>(bound);
    long long amax = static_cast<long long>(std::sqrt(2.0 * std::sqrt(x / 3.0))) + 1;
    for (long long a = 1; a <= amax; ++a) {
        double gmax_d = std::sqrt(std::max(2.0 * std::sqrt(x / 3.0) - a * a, 0.0));
        long long gmax = static_cast<long long>(gmax_d) + 1;
        long long bmax = a + gmax;
        double tmax = (1.0 + std::cbrt(16.0 * x / (std::pow(static_cast<double>(a), 4.0)))) / 4.0;
        long long cmax = static_cast<long long>(a * tmax + gmax) + 2;
        for (long long b = -bmax; b <= bmax; ++b) {
            for (long long c = -cmax; c <= cmax; ++c) {
                // -X <= D(d) < 0 with D quadratic in d, negative leading term
                i128 B = 18 * i128(a) * b * c - 4 * i128(b) * b * b;
                i128 C = i128(b) * b * c * c - 4 * i128(a) * c * c * c;
                i128 rad = B * B + 108 * i128(a) * a * (C + bound);
                if (rad < 0) continue;
                long long sq = llsqrt(checked_ll(rad));
                i128 den = 54 * i128(a) * a;
                long long dlo = checked_ll((B - sq) / den - 2);
                long long dhi = checked_ll((B + sq) / den + 2);
                for (long long d = dlo; d <= dhi; ++d) {
                    if (d == 0) continue;
                    i128 disc = 18 * i128(a) * b * c * d + i128(b) * b * c * c -
                                4 * i128(a) * c * c * c - 4 * i128(b) * b * b * d -
                                27 * i128(a) * a * d * d;
                    if (disc >= 0 || -disc > bound) continue;
                    BinaryCubicForm F{a, b, c, d};
                    if (!mathews_reduced(F)) continue;
                    if (F.content() != 1) continue;
                    if (!is_irreducible_form(F)) continue;
                    BinaryCubicForm flip{a, -b, c, -d};
                    classes.insert(std::min(F, flip));
                }
            }
        }
    }
}

}  // namespace

std::vector<FieldCount> enumerate_fields(long long bound, DiscSign sign,
                                         const CubicEnumOptions& opts) {
    if (bound < 1 || bound > opts.max_bound)
        throw std::invalid_argument("enumerate_fields: bound out of range");
    std::unordered_set<BinaryCubicForm, FormHash> classes;
    if (sign == DiscSign::positive)
        enumerate_pos(bound, classes);
    else
        enumerate_neg(bound, classes);
    std::map<long long, FieldCount> by_disc;
    for (const auto& f : classes) {
        if (!is_maximal_form(f)) continue;
        long long d = f.disc();
        auto& fc = by_disc[d];
        fc.disc = d;
        fc.n_fields += 1;
        fc.representatives.push_back(f);
    }
    std::vector<FieldCount> out;
    out.reserve(by_disc.size());
    for (auto& [d, fc] : by_disc) {
        std::sort(fc.representatives.begin(), fc.representatives.end());
        out.push_back(std::move(fc));
    }
    std::sort(out.begin(), out.end(),
              [](const FieldCount& a, const FieldCount& b) {
                  return std::llabs(a.disc) < std::llabs(b.disc);
              });
    return out;
}

CubicFieldTable::CubicFieldTable(long long bound, const CubicEnumOptions& opts) : bound_(bound) {
    for (auto sign : {DiscSign::negative, DiscSign::positive})
        for (const auto& fc : enumerate_fields(bound, sign, opts)) counts_[fc.disc] = fc.n_fields;
}

int CubicFieldTable::count(long long d) const {
    if (std::llabs(d) > bound_) throw std::invalid_argument("CubicFieldTable: out of range");
    auto it = counts_.find(d);
    return it == counts_.end() ? 0 : it->second;
}

unsigned CubicFieldTable::r3(long long d) const {
    long long n = count(d);
    long long m = 2 * n + 1;
    unsigned r = 0;
    while (m % 3 == 0) {
        m /= 3;
        ++r;
    }
    if (m != 1) throw std::logic_error("r3: field count is not (3^r - 1)/2");
    return r;
}

unsigned r3_from_count(long long d, const CubicEnumOptions& opts) {
    CubicFieldTable table(std::llabs(d), opts);
    return table.r3(d);
}

}  // namespace dihlab
