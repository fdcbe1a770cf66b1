#pragma once

#include <string>
#include <vector>

#include "dihlab/integer.hpp"

namespace dihlab {

// Canonical description of a finite abelian group: invariant factors
// d_1 | d_2 | ... | d_k, all >= 2, stored ascending.  The empty list is the
// trivial group.  Inputs given as arbitrary cyclic orders are regrouped via
// the prime-power multiset.
class AbelianGroupStructure {
  public:
    AbelianGroupStructure() = default;  // trivial group

    static AbelianGroupStructure from_invariant_factors(std::vector<Integer> factors);
    static AbelianGroupStructure from_cyclic_orders(const std::vector<Integer>& orders);
    // Grammar: comma-separated positive integers ("300,20,4,4"), "1" = trivial.
    static AbelianGroupStructure parse(const std::string& text);

    const std::vector<Integer>& invariant_factors() const { return factors_; }
    bool is_trivial() const { return factors_.empty(); }
    Integer order() const;
    AbelianGroupStructure p_part(const Integer& p) const;
    unsigned p_rank(const Integer& p) const;
    AbelianGroupStructure direct_product(const AbelianGroupStructure& other) const;

    std::string render() const;              // descending, e.g. "15,5"; trivial = "1"
    std::string render_prime_power() const;  // e.g. "3^2,3"

    bool operator==(const AbelianGroupStructure& o) const { return factors_ == o.factors_; }
    bool operator!=(const AbelianGroupStructure& o) const { return !(*this == o); }

  private:
    std::vector<Integer> factors_;  // ascending divisibility chain
};

}  // namespace dihlab
