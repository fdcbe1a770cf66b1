#pragma once

#include <unordered_map>
#include <vector>

#include "dihlab/abgroup.hpp"
#include "dihlab/integer.hpp"

namespace dihlab {

// Integral binary quadratic form a x^2 + b x y + c y^2.  Coordinates are
// int64; every entry point checks the discriminant against the configured
// bound, which keeps all intermediates within __int128.
struct QuadraticForm {
    long long a = 0, b = 0, c = 0;

    long long disc() const;
    bool is_primitive() const;
    bool operator==(const QuadraticForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

// d < 0: the unique reduced representative (|b| <= a <= c, and b >= 0 when
// |b| = a or a = c).  d > 0: a reduced form on the cycle of f, i.e. with
// 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b.
QuadraticForm reduce(QuadraticForm f);

bool is_reduced(const QuadraticForm& f);

// Gauss composition; the result is reduced.  Both forms must be primitive
// with equal discriminants.
QuadraticForm compose(const QuadraticForm& f, const QuadraticForm& g);

QuadraticForm principal_form(long long d);
inline QuadraticForm inverse(const QuadraticForm& f) { return {f.a, -f.b, f.c}; }

bool is_fundamental_discriminant(long long d);

struct ClassGroupOptions {
    long long bound = 10'000'000;  // default |d| limit
    bool extended = false;         // allow |d| up to the int64-safety cap (slow)
};

// Form class group of discriminant d.  For d > 0 the enumerated group is the
// narrow class group (cycles of reduced indefinite forms); the ordinary
// quotient is computed alongside.  p-ranks at odd p agree for both.
class FormClassGroup {
  public:
    long long disc() const { return d_; }
    Integer class_number() const;  // narrow class number for d > 0
    const AbelianGroupStructure& structure() const { return structure_; }
    const AbelianGroupStructure& ordinary_structure() const { return ordinary_; }
    const std::vector<std::pair<QuadraticForm, Integer>>& generators() const {
        return generators_;
    }

    size_t size() const { return reps_.size(); }
    const std::vector<QuadraticForm>& representatives() const { return reps_; }
    int identity() const { return identity_; }
    int index_of(const QuadraticForm& f) const;  // class index of any form of disc d
    int mul(int i, int j) const;
    int pow(int i, const Integer& e) const;

  private:
    friend FormClassGroup class_group(long long, const ClassGroupOptions&);
    long long d_ = 0;
    std::vector<QuadraticForm> reps_;
    std::unordered_map<unsigned long long, int> class_of_;  // reduced form -> class
    int identity_ = 0;
    AbelianGroupStructure structure_;
    AbelianGroupStructure ordinary_;
    std::vector<std::pair<QuadraticForm, Integer>> generators_;
};

FormClassGroup class_group(long long d, const ClassGroupOptions& opts = {});

// p-rank of Cl(d) for odd p, via the p-torsion count (log_p #{x : x^p = 1}).
// Identical for the narrow and ordinary groups at odd p.
unsigned p_rank(long long d, long p, const ClassGroupOptions& opts = {});

}  // namespace dihlab
