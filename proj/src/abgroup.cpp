#include "dihlab/abgroup.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dihlab/arith.hpp"

namespace dihlab {

AbelianGroupStructure AbelianGroupStructure::from_invariant_factors(std::vector<Integer> factors) {
    std::erase_if(factors, [](const Integer& d) { return d == 1; });
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i] < 2) throw std::invalid_argument("invariant factor < 2");
        if (i > 0 && factors[i] % factors[i - 1] != 0)
            throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
    AbelianGroupStructure g;
    g.factors_ = std::move(factors);
    return g;
}

AbelianGroupStructure AbelianGroupStructure::from_cyclic_orders(const std::vector<Integer>& orders) {
    // exponents per prime, one column per cyclic summand of that prime power
    std::map<Integer, std::vector<unsigned long>> exps;
    for (const Integer& n : orders) {
        if (n <= 0) throw std::invalid_argument("cyclic order must be positive");
        if (n == 1) continue;
        Factorization f = factorize(n);
        if (!f.complete) throw std::runtime_error("cyclic order too hard to factor");
        for (const auto& e : f.factors) exps[e.prime].push_back(e.exponent);
    }
    size_t k = 0;
    for (auto& [p, v] : exps) {
        std::sort(v.begin(), v.end(), std::greater<>());
        k = std::max(k, v.size());
    }
    std::vector<Integer> factors(k, Integer(1));
    for (auto& [p, v] : exps)
        for (size_t i = 0; i < v.size(); ++i) factors[i] *= ipow(p, v[i]);
    std::reverse(factors.begin(), factors.end());  // ascending chain
    AbelianGroupStructure g;
    g.factors_ = std::move(factors);
    return g;
}

AbelianGroupStructure AbelianGroupStructure::parse(const std::string& text) {
    std::vector<Integer> orders;
    std::string tok;
    std::istringstream in(text);
    bool any = false;
    while (std::getline(in, tok, ',')) {
        size_t b = tok.find_first_not_of(" \t");
        size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw std::invalid_argument("empty token in group structure");
        tok = tok.substr(b, e - b + 1);
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("non-integer token in group structure: " + tok);
        Integer n(tok);
        if (n <= 0) throw std::invalid_argument("group order token must be positive");
        orders.push_back(n);
        any = true;
    }
    if (!any) throw std::invalid_argument("empty group structure");
    return from_cyclic_orders(orders);
}

Integer AbelianGroupStructure::order() const {
    Integer n = 1;
    for (const auto& d : factors_) n *= d;
    return n;
}

AbelianGroupStructure AbelianGroupStructure::p_part(const Integer& p) const {
    std::vector<Integer> parts;
    for (const auto& d : factors_) {
        Integer q = ipow(p, valuation(d, p));
        if (q > 1) parts.push_back(q);
    }
    AbelianGroupStructure g;
    g.factors_ = std::move(parts);  // chain is preserved by taking p-parts
    return g;
}

unsigned AbelianGroupStructure::p_rank(const Integer& p) const {
    unsigned r = 0;
    for (const auto& d : factors_)
        if (d % p == 0) ++r;
    return r;
}

AbelianGroupStructure AbelianGroupStructure::direct_product(const AbelianGroupStructure& other) const {
    std::vector<Integer> orders = factors_;
    orders.insert(orders.end(), other.factors_.begin(), other.factors_.end());
    return from_cyclic_orders(orders);
}

std::string AbelianGroupStructure::render() const {
    if (factors_.empty()) return "1";
    std::ostringstream out;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        if (it != factors_.rbegin()) out << ",";
        out << it->get_str();
    }
    return out.str();
}

std::string AbelianGroupStructure::render_prime_power() const {
    if (factors_.empty()) return "1";
    std::vector<std::pair<Integer, unsigned long>> pps;  // (prime, exponent), factor order
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        Factorization f = factorize(*it);
        for (const auto& e : f.factors) pps.emplace_back(e.prime, e.exponent);
    }
    std::stable_sort(pps.begin(), pps.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    });
    std::ostringstream out;
    for (size_t i = 0; i < pps.size(); ++i) {
        if (i) out << ",";
        out << pps[i].first.get_str();
        if (pps[i].second > 1) out << "^" << pps[i].second;
    }
    return out.str();
}

}  // namespace dihlab
