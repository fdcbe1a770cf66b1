#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dihlab/integer.hpp"

namespace dihlab {

// Kronecker symbol (a|n), standard conventions: (a|1) = 1, (a|-1) = sign of a,
// (a|2) = 0, +-1 depending on a mod 8.
int kronecker(const Integer& a, const Integer& n);

// Deterministic below 2^64 (fixed Miller-Rabin witness set), otherwise
// Miller-Rabin with bases drawn from a fixed-seed generator.
bool is_prime(const Integer& n);

// Explicit effort knobs so factorization results are reproducible.
struct EffortBudget {
    unsigned long trial_limit = 1'000'000;  // trial division bound
    unsigned long rho_rounds = 2'000'000;   // total Brent-rho iterations
};

struct FactorEntry {
    Integer prime;
    unsigned exponent;
};

struct Factorization {
    int sign = 1;
    std::vector<FactorEntry> factors;  // sorted by prime, primes verified
    Integer cofactor = 1;              // composite remainder, 1 when complete
    bool complete = true;

    Integer reassemble_abs() const;  // product of prime^exp times cofactor
};

Factorization factorize(const Integer& n, const EffortBudget& budget = {});

enum class Tri { yes, no, unknown };

// Never returns a wrong definite answer: `unknown` when the budget runs out.
Tri is_squarefree(const Integer& n, const EffortBudget& budget = {});

// Squarefree part: the signed product of the primes with odd exponent, so
// that n = part * square (throws if the factorization does not complete).
Integer squarefree_part(const Integer& n, const EffortBudget& budget = {});

std::vector<Integer> divisors(const Integer& n, const EffortBudget& budget = {});

// Integer polynomial, coefficients in ascending degree order.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Integer> coeffs);

    static IntPolynomial from_string(const std::string& space_separated);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const Integer& coeff(int i) const;
    const Integer& leading() const;
    const std::vector<Integer>& coeffs() const { return coeffs_; }

    IntPolynomial derivative() const;
    Integer content() const;
    Integer eval(const Integer& x) const;
    // Homogeneous evaluation y^deg * f(x/y).
    Integer eval_homogeneous(const Integer& x, const Integer& y) const;

    std::string to_string() const;  // human-readable, variable x

    bool operator==(const IntPolynomial& o) const { return coeffs_ == o.coeffs_; }

  private:
    std::vector<Integer> coeffs_;  // empty = zero polynomial
};

// Resultant via the subresultant PRS (fully exact).
Integer resultant(const IntPolynomial& a, const IntPolynomial& b);

// (-1)^{n(n-1)/2} Res(f, f') / lc(f); degree >= 2 required.
Integer poly_discriminant(const IntPolynomial& f);

// Degree <= 3: decided exactly by the rational-root test.  Degree 4-5: `yes`
// on an irreducible reduction mod some prime p <= 200 not dividing the
// leading coefficient, `no` on a rational root, `unknown` otherwise.
// The witnessing prime (if any) is reported through `witness`.
Tri is_irreducible(const IntPolynomial& f, long* witness = nullptr);

}  // namespace dihlab
