#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dihlab/abgroup.hpp"
#include "dihlab/arith.hpp"
#include "dihlab/quadform.hpp"

namespace dihlab {

enum class Verdict { pass, fail, conjecture_consistent, conjecture_violated, not_applicable };
std::string verdict_name(Verdict v);

// One row of a verification dataset: a dihedral extension L/F of degree 2p
// with quadratic subfield k and degree-p subfield K, class structures as
// ingested, unit ranks, and the optional unit-index / capitulation data.
struct DihedralInstance {
    long p = 3;
    std::string label;
    std::string base_field = "Q";  // "Q" or "quad(D)" with D the discriminant of F
    std::optional<long long> d;    // disc of k over Q (only meaningful when F = Q)
    std::optional<IntPolynomial> poly_K;
    std::optional<AbelianGroupStructure> cl_k, cl_K, cl_L;
    Integer h_F = 1;
    long lambda_F = 0;
    long lambda_k = 0;
    std::optional<long> e;    // p^e = (E_F : N E_K)
    std::optional<long> rho;  // p^rho = size of the capitulation kernel
    std::optional<char> case_flag;  // 'A' / 'B'
};

struct DerivedParameters {
    long a = 0;  // 1 + lambda(k) - lambda(F)
    bool q_integral = true;
    std::optional<Integer> q;        // p^a h_L h_F^2 / (h_k h_K^2)
    std::optional<unsigned> mu;      // v_p(h_L)
    std::optional<long> rho_minus_e; // 2 v_p(h_K) + v_p(h_k) - mu
};

DerivedParameters derive_parameters(const DihedralInstance& inst);

// e from the explicit column, else 0 when the base field has torsion unit
// group with no p-part (F = Q, or imaginary quadratic other than disc -3).
std::optional<long> effective_e(const DihedralInstance& inst);

struct CheckResult {
    Verdict verdict = Verdict::not_applicable;
    std::string detail;
};

CheckResult check_lower_bound(const DihedralInstance& inst);
CheckResult check_upper_bound(const DihedralInstance& inst);
CheckResult check_pp_structure(const DihedralInstance& inst);
CheckResult check_prime_to_p(const DihedralInstance& inst);
// q integrality and rho >= 1, i.e. the class number formula constraints.
CheckResult check_class_number_formula(const DihedralInstance& inst);
// Recomputes Cl(d) with quadratic forms and compares p-parts (F = Q rows).
CheckResult check_disc_consistency(const DihedralInstance& inst,
                                   const ClassGroupOptions& opts = {});

// (p,p) classification table: predicted Cl_p(L) per case and the part-c
// Cl_p(K) prediction from mu - 1 = a(p-1) + b.
std::optional<AbelianGroupStructure> predict_clL_pp(long p, unsigned mu, char case_flag);
std::optional<AbelianGroupStructure> predict_clK_pp(long p, unsigned mu, long rho_minus_e);

// Reflection inequality r3+ <= r3- <= r3+ + 1 for k+ = Q(sqrt m),
// k- = Q(sqrt -3m), via quadratic-form class groups.
CheckResult check_scholz(long long m, const ClassGroupOptions& opts = {});

struct RowReport {
    DihedralInstance inst;
    DerivedParameters derived;
    std::vector<std::pair<std::string, CheckResult>> checks;
    bool hard_fail = false;
};

struct VerificationReport {
    std::vector<RowReport> rows;
    bool ok() const;  // no hard fails on proven checks
    size_t hard_fail_count() const;
    std::string to_json() const;
    std::string to_tsv() const;
};

// CSV schema (header required):
//   p,label,base_field,d,poly_K,cl_k,cl_K,cl_L,h_F,lambda_F,lambda_k,e,rho,case
// cl_* use the group grammar ("300,20,4,4", "1" trivial) and are quoted;
// poly_K is space-separated ascending coefficients; empty cells for optional
// fields; lines starting with '#' are comments.  Throws std::runtime_error
// with row/column diagnostics on malformed input.
std::vector<DihedralInstance> parse_dataset_csv(std::istream& in);

struct VerifyOptions {
    bool check_discs = true;
    ClassGroupOptions class_group_options;
    unsigned threads = 1;
};

VerificationReport verify_instances(const std::vector<DihedralInstance>& rows,
                                    const VerifyOptions& opts = {});
VerificationReport verify_dataset(std::istream& in, const VerifyOptions& opts = {});

}  // namespace dihlab
