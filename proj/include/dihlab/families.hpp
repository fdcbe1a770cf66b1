#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dihlab/arith.hpp"

namespace dihlab {

enum class FamilyKind { cubic, quintic, cyclic_cubic };

std::string family_name(FamilyKind kind);
std::optional<FamilyKind> family_from_name(const std::string& name);

struct FamilyCandidate {
    FamilyKind family;
    Integer parameter;
    IntPolynomial polynomial;
    Integer d = 0;          // quadratic-resolvent discriminant
    Tri squarefree = Tri::unknown;
    bool fundamental = false;  // d squarefree and = 1 mod 4
    long p = 3;
    long irreducibility_witness = 0;  // mod-p witness when one was needed
};

// x^3 + a x + 1 with d = -4a^3 - 27; rejects reducible parameters (a = 0, -2).
FamilyCandidate cubic_family(const Integer& a);

// x^5 - 2x^4 + (b+2)x^3 - (2b+1)x^2 + bx + 1; disc = d^2 with the sign of d
// chosen so d = 1 mod 4.
FamilyCandidate quintic_family(const Integer& b);

// b odd, a = (b^2 - 3)/2, x^3 - a x^2 - (a+3)x - 1; square discriminant.
FamilyCandidate cyclic_cubic_family(const Integer& b);

struct ScanFilters {
    bool squarefree_only = false;  // keep candidates with squarefree d
};

std::vector<FamilyCandidate> scan(FamilyKind kind, const Integer& from, const Integer& to,
                                  const ScanFilters& filters = {}, unsigned threads = 1);

}  // namespace dihlab
