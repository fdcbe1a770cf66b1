#pragma once

#include <map>
#include <vector>

#include "dihlab/integer.hpp"

namespace dihlab {

// Integral binary cubic form a x^3 + b x^2 y + c x y^2 + d y^3.
struct BinaryCubicForm {
    long long a = 0, b = 0, c = 0, d = 0;

    long long disc() const;  // 18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2
    long long content() const;
    bool operator==(const BinaryCubicForm& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator<(const BinaryCubicForm& o) const;
};

// Hessian covariant (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd);
// Q^2 - 4PR = -3 disc(F).
struct HessianCoefficients {
    long long p = 0, q = 0, r = 0;
};
HessianCoefficients hessian(const BinaryCubicForm& f);

// GL2(Z) substitution x -> m11 x + m12 y, y -> m21 x + m22 y.
BinaryCubicForm transform(const BinaryCubicForm& f, long long m11, long long m12, long long m21,
                          long long m22);

// No rational linear factor (requires a primitive form).
bool is_irreducible_form(const BinaryCubicForm& f);

// Unique representative of the GL2(Z) class of an irreducible form.  For
// positive discriminant the class is pinned through the reduced Hessian, for
// negative discriminant through the reduced positive-definite quadratic
// factor; the leftover finite symmetry is broken lexicographically.
BinaryCubicForm canonical_class_representative(const BinaryCubicForm& f);

// Maximality of the associated cubic ring at every prime (the cubic-ring
// index test at each p with p^2 | disc).
bool is_maximal_form(const BinaryCubicForm& f);

enum class DiscSign { negative, positive };

struct FieldCount {
    long long disc = 0;
    int n_fields = 0;
    std::vector<BinaryCubicForm> representatives;
};

struct CubicEnumOptions {
    long long max_bound = 1'000'000;
};

// Cubic fields with 0 < |disc| <= bound of the requested sign, counted per
// discriminant: canonical representatives of irreducible maximal classes.
// Discriminants with no field are omitted.
std::vector<FieldCount> enumerate_fields(long long bound, DiscSign sign,
                                         const CubicEnumOptions& opts = {});

// Count table indexable by discriminant, built once per bound.
class CubicFieldTable {
  public:
    CubicFieldTable(long long bound, const CubicEnumOptions& opts = {});
    long long bound() const { return bound_; }
    int count(long long d) const;
    // r3 with  count(d) = (3^r3 - 1)/2,  d a fundamental discriminant.
    unsigned r3(long long d) const;

  private:
    long long bound_;
    std::map<long long, int> counts_;
};

// Single-discriminant convenience (runs a fresh enumeration up to |d|).
unsigned r3_from_count(long long d, const CubicEnumOptions& opts = {});

}  // namespace dihlab
