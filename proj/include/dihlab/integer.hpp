#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace dihlab {

// All exact arithmetic in the library runs on GMP integers. Enumeration
// kernels (quadratic/cubic forms) keep int64 coordinates internally and are
// bound-checked on entry; everything crossing a module boundary is exact.
using Integer = mpz_class;

// gmpxx has no long long constructor; long is 64-bit on every target we build.
inline Integer to_integer(long long v) { return Integer(static_cast<long>(v)); }

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline long ipow_ll(long base, unsigned e) {
    long r = 1;
    while (e--) r *= base;
    return r;
}

// p-adic valuation of n (n != 0).
inline unsigned long valuation(Integer n, const Integer& p) {
    unsigned long v = 0;
    n = abs(n);
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline bool is_perfect_square(const Integer& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool fits_long(const Integer& n) { return n.fits_slong_p(); }

inline std::string to_string(const Integer& n) { return n.get_str(); }

}  // namespace dihlab
