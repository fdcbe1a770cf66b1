#include "dihlab/families.hpp"

#include <future>
#include <stdexcept>

namespace dihlab {

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::cubic: return "cubic";
        case FamilyKind::quintic: return "quintic";
        case FamilyKind::cyclic_cubic: return "cyclic-cubic";
    }
    return "?";
}

std::optional<FamilyKind> family_from_name(const std::string& name) {
    if (name == "cubic") return FamilyKind::cubic;
    if (name == "quintic") return FamilyKind::quintic;
    if (name == "cyclic-cubic" || name == "cyclic_cubic") return FamilyKind::cyclic_cubic;
    return std::nullopt;
}

namespace {

void classify_d(FamilyCandidate& c) {
    c.squarefree = is_squarefree(c.d);
    long md = static_cast<long>(mpz_fdiv_ui(c.d.get_mpz_t(), 4));
    c.fundamental = (c.squarefree == Tri::yes) && md == 1;
}

}  // namespace

FamilyCandidate cubic_family(const Integer& a) {
    FamilyCandidate c;
    c.family = FamilyKind::cubic;
    c.parameter = a;
    c.p = 3;
    c.polynomial = IntPolynomial({Integer(1), a, Integer(0), Integer(1)});
    long wit = 0;
    if (is_irreducible(c.polynomial, &wit) != Tri::yes)
        throw std::invalid_argument("cubic family: x^3 + ax + 1 is reducible for a = " +
                                    to_string(a));
    c.irreducibility_witness = wit;
    c.d = -4 * a * a * a - 27;
    classify_d(c);
    return c;
}

FamilyCandidate quintic_family(const Integer& b) {
    FamilyCandidate c;
    c.family = FamilyKind::quintic;
    c.parameter = b;
    c.p = 5;
    c.polynomial =
        IntPolynomial({Integer(1), b, -(2 * b + 1), b + 2, Integer(-2), Integer(1)});
    long wit = 0;
    Tri irr = is_irreducible(c.polynomial, &wit);
    if (irr == Tri::no)
        throw std::invalid_argument("quintic family: reducible for b = " + to_string(b));
    if (irr == Tri::unknown)
        throw std::invalid_argument("quintic family: no irreducibility witness for b = " +
                                    to_string(b));
    c.irreducibility_witness = wit;
    Integer disc = poly_discriminant(c.polynomial);
    if (!is_perfect_square(disc))
        throw std::logic_error("quintic family: discriminant is not a perfect square");
    Integer root = isqrt(disc);
    // choose the sign with d = 1 mod 4
    c.d = (mpz_fdiv_ui(root.get_mpz_t(), 4) == 1) ? root : -root;
    if (mpz_fdiv_ui(c.d.get_mpz_t(), 4) != 1)
        throw std::logic_error("quintic family: neither sign of d is 1 mod 4");
    classify_d(c);
    return c;
}

FamilyCandidate cyclic_cubic_family(const Integer& b) {
    if (mpz_even_p(b.get_mpz_t())) throw std::invalid_argument("cyclic cubic family: b must be odd");
    FamilyCandidate c;
    c.family = FamilyKind::cyclic_cubic;
    c.parameter = b;
    c.p = 3;
    Integer a = (b * b - 3) / 2;
    c.polynomial = IntPolynomial({Integer(-1), -(a + 3), -a, Integer(1)});
    long wit = 0;
    if (is_irreducible(c.polynomial, &wit) != Tri::yes)
        throw std::invalid_argument("cyclic cubic family: reducible for b = " + to_string(b));
    c.irreducibility_witness = wit;
    Integer disc = poly_discriminant(c.polynomial);
    if (!is_perfect_square(disc))
        throw std::logic_error("cyclic cubic family: discriminant is not a perfect square");
    c.d = disc;  // the square discriminant itself
    c.squarefree = is_squarefree(isqrt(disc));
    c.fundamental = false;  // square discriminant, never a quadratic fundamental d
    return c;
}

std::vector<FamilyCandidate> scan(FamilyKind kind, const Integer& from, const Integer& to,
                                  const ScanFilters& filters, unsigned threads) {
    std::vector<Integer> params;
    for (Integer v = from; v <= to; ++v) {
        if (kind == FamilyKind::cyclic_cubic && mpz_even_p(v.get_mpz_t())) continue;
        params.push_back(v);
    }
    auto make = [kind](const Integer& v) -> std::optional<FamilyCandidate> {
        try {
            switch (kind) {
                case FamilyKind::cubic: return cubic_family(v);
                case FamilyKind::quintic: return quintic_family(v);
                case FamilyKind::cyclic_cubic: return cyclic_cubic_family(v);
            }
        } catch (const std::invalid_argument&) {
            return std::nullopt;  // reducible parameter, skipped
        }
        return std::nullopt;
    };
    std::vector<std::optional<FamilyCandidate>> results(params.size());
    if (threads <= 1 || params.size() < 4) {
        for (size_t i = 0; i < params.size(); ++i) results[i] = make(params[i]);
    } else {
        std::vector<std::future<void>> futs;
        size_t chunk = (params.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            size_t lo = t * chunk, hi = std::min(params.size(), lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (size_t i = lo; i < hi; ++i) results[i] = make(params[i]);
            }));
        }
        for (auto& f : futs) f.get();
    }
    std::vector<FamilyCandidate> out;
    for (auto& r : results) {
        if (!r) continue;
        if (filters.squarefree_only && r->squarefree != Tri::yes) continue;
        out.push_back(std::move(*r));
    }
    return out;
}

}  // namespace dihlab
