#include "dihlab/verifier.hpp"

#include <future>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace dihlab {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::conjecture_consistent: return "conjecture-consistent";
        case Verdict::conjecture_violated: return "conjecture-violated";
        case Verdict::not_applicable: return "not-applicable";
    }
    return "?";
}

namespace {

std::optional<long long> base_field_disc(const std::string& base) {
    if (base == "Q") return std::nullopt;
    if (base.rfind("quad(", 0) == 0 && base.back() == ')') {
        return std::stoll(base.substr(5, base.size() - 6));
    }
    throw std::invalid_argument("unknown base_field tag: " + base);
}

unsigned vp(const Integer& n, long p) {
    if (n == 0) throw std::invalid_argument("vp of zero");
    return static_cast<unsigned>(valuation(n, to_integer(p)));
}

}  // namespace

std::optional<long> effective_e(const DihedralInstance& inst) {
    if (inst.e) return inst.e;
    if (inst.base_field == "Q") return 0;
    auto dF = base_field_disc(inst.base_field);
    if (dF && *dF < 0 && !(inst.p == 3 && *dF == -3)) return 0;
    return std::nullopt;
}

DerivedParameters derive_parameters(const DihedralInstance& inst) {
    DerivedParameters out;
    out.a = 1 + inst.lambda_k - inst.lambda_F;
    if (!inst.cl_k || !inst.cl_K || !inst.cl_L) return out;
    Integer h_k = inst.cl_k->order();
    Integer h_K = inst.cl_K->order();
    Integer h_L = inst.cl_L->order();
    Integer num = h_L * inst.h_F * inst.h_F;
    Integer den = h_k * h_K * h_K;
    if (out.a >= 0)
        num *= ipow(to_integer(inst.p), static_cast<unsigned long>(out.a));
    else
        den *= ipow(to_integer(inst.p), static_cast<unsigned long>(-out.a));
    out.q_integral = (num % den == 0);
    if (out.q_integral) out.q = num / den;
    out.mu = vp(h_L, inst.p);
    out.rho_minus_e =
        2 * static_cast<long>(vp(h_K, inst.p)) + static_cast<long>(vp(h_k, inst.p)) -
        static_cast<long>(*out.mu);
    return out;
}

CheckResult check_class_number_formula(const DihedralInstance& inst) {
    if (!inst.cl_k || !inst.cl_K || !inst.cl_L)
        return {Verdict::not_applicable, "needs cl_k, cl_K and cl_L"};
    DerivedParameters d = derive_parameters(inst);
    if (!d.q_integral)
        return {Verdict::fail, "unit index q = p^a h_L h_F^2 / (h_k h_K^2) is not integral"};
    std::ostringstream msg;
    msg << "q = " << d.q->get_str();
    auto e = effective_e(inst);
    if (e) {
        long rho = *d.rho_minus_e + *e;
        msg << ", rho = " << rho;
        if (rho < 1) {
            msg << " violates rho >= 1";
            return {Verdict::fail, msg.str()};
        }
        if (inst.rho && *inst.rho != rho) {
            msg << " but dataset says rho = " << *inst.rho;
            return {Verdict::fail, msg.str()};
        }
    } else {
        msg << ", rho - e = " << *d.rho_minus_e;
        if (*d.rho_minus_e + (inst.lambda_F + 1) < 1)
            return {Verdict::fail, msg.str() + " admits no rho >= 1"};
    }
    return {Verdict::pass, msg.str()};
}

CheckResult check_lower_bound(const DihedralInstance& inst) {
    if (!inst.cl_k || !inst.cl_K) return {Verdict::not_applicable, "needs cl_k and cl_K"};
    long rk = inst.cl_k->p_rank(to_integer(inst.p));
    long rK = inst.cl_K->p_rank(to_integer(inst.p));
    auto e = effective_e(inst);
    std::ostringstream msg;
    if (!e) {
        long e_min = std::max(0L, rk - 1 - rK);
        long e_cap = inst.lambda_F + 1;
        msg << "e unknown; r_p(k)-1-e <= r_p(K) needs e >= " << e_min << ", admissible range [0,"
            << e_cap << "]";
        if (e_min > e_cap) return {Verdict::fail, msg.str() + " -- no admissible e"};
        return {Verdict::not_applicable, msg.str()};
    }
    msg << rk << " - 1 - " << *e << " <= " << rK;
    if (rk - 1 - *e <= rK) return {Verdict::pass, msg.str()};
    return {Verdict::fail, msg.str() + " violated"};
}

CheckResult check_upper_bound(const DihedralInstance& inst) {
    if (!inst.cl_k || !inst.cl_K) return {Verdict::not_applicable, "needs cl_k and cl_K"};
    long rk = inst.cl_k->p_rank(to_integer(inst.p));
    long rK = inst.cl_K->p_rank(to_integer(inst.p));
    long bound = (inst.p - 1) / 2 * (rk - 1);
    AbelianGroupStructure pp = AbelianGroupStructure::parse(
        std::to_string(inst.p) + "," + std::to_string(inst.p));
    bool proven = inst.p == 3 || rk == 1 || inst.cl_k->p_part(to_integer(inst.p)) == pp ||
                  (inst.base_field == "Q" && inst.lambda_k == 0);
    bool ok = rK <= bound;
    std::ostringstream msg;
    msg << "r_p(K) = " << rK << " vs (p-1)/2 (r_p(k)-1) = " << bound
        << (proven ? " (proven case)" : " (conjecture)");
    if (proven) return {ok ? Verdict::pass : Verdict::fail, msg.str()};
    return {ok ? Verdict::conjecture_consistent : Verdict::conjecture_violated, msg.str()};
}

namespace {

AbelianGroupStructure power_shape(long p, unsigned high, unsigned n_high, unsigned low,
                                  unsigned n_low) {
    std::vector<Integer> f;
    for (unsigned i = 0; i < n_high; ++i)
        if (high > 0) f.push_back(ipow(to_integer(p), high));
    for (unsigned i = 0; i < n_low; ++i)
        if (low > 0) f.push_back(ipow(to_integer(p), low));
    return AbelianGroupStructure::from_cyclic_orders(f);
}

}  // namespace

std::optional<AbelianGroupStructure> predict_clL_pp(long p, unsigned mu, char case_flag) {
    unsigned pm1 = static_cast<unsigned>(p - 1);
    if (mu > static_cast<unsigned>(p)) {
        unsigned alpha = mu / pm1, beta = mu % pm1;
        return power_shape(p, alpha + 1, beta, alpha, pm1 - beta);
    }
    if (mu == static_cast<unsigned>(p)) {
        if (case_flag == 'A') return power_shape(p, 2, 1, 1, static_cast<unsigned>(p) - 2);
        return power_shape(p, 1, static_cast<unsigned>(p), 0, 0);
    }
    if (mu < 2) return std::nullopt;
    if (case_flag == 'A') return power_shape(p, 1, mu, 0, 0);
    return power_shape(p, 2, 1, 1, mu - 2);
}

std::optional<AbelianGroupStructure> predict_clK_pp(long p, unsigned mu, long rho_minus_e) {
    unsigned pm1 = static_cast<unsigned>(p - 1);
    if (mu < 1) return std::nullopt;
    unsigned a = (mu - 1) / pm1, b = (mu - 1) % pm1;
    if (rho_minus_e == 1) {
        if (b % 2 != 0) return std::nullopt;  // b must be even when rho - e is odd
        return power_shape(p, a + 1, b / 2, a, (pm1 - b) / 2);
    }
    if (rho_minus_e == 2) {
        if (b % 2 != 1) return std::nullopt;
        return power_shape(p, a + 1, (b + 1) / 2, a, (pm1 - 1 - b) / 2);
    }
    return std::nullopt;
}

CheckResult check_pp_structure(const DihedralInstance& inst) {
    if (!inst.cl_k) return {Verdict::not_applicable, "needs cl_k"};
    Integer p = to_integer(inst.p);
    AbelianGroupStructure pp = AbelianGroupStructure::parse(
        std::to_string(inst.p) + "," + std::to_string(inst.p));
    if (!(inst.cl_k->p_part(p) == pp))
        return {Verdict::not_applicable, "Cl_p(k) is not (p,p)"};
    if (!inst.cl_K || !inst.cl_L)
        return {Verdict::not_applicable, "needs cl_K and cl_L"};
    DerivedParameters der = derive_parameters(inst);
    unsigned mu = *der.mu;
    long rme = *der.rho_minus_e;
    std::ostringstream msg;
    msg << "mu = " << mu << ", rho - e = " << rme;
    if (mu < 2) return {Verdict::fail, msg.str() + "; mu >= 2 violated"};
    if (rme != 1 && rme != 2)
        return {Verdict::fail, msg.str() + "; rho - e must be 1 or 2 when Cl_p(k) = (p,p)"};
    auto e = effective_e(inst);
    if (e) {
        long rho = rme + *e;
        if ((static_cast<long>(mu) - rho) % 2 != 0)
            return {Verdict::fail, msg.str() + "; mu and rho have different parity"};
    }
    // part b: match Cl_p(L) against the case columns
    AbelianGroupStructure actual_L = inst.cl_L->p_part(p);
    char inferred = 0;
    if (mu > static_cast<unsigned>(inst.p)) {
        auto pred = predict_clL_pp(inst.p, mu, 'A');
        if (!(actual_L == *pred))
            return {Verdict::fail,
                    msg.str() + "; Cl_p(L) = " + actual_L.render() + " != predicted " +
                        pred->render()};
        msg << "; case indistinguishable (mu > p)";
        if (inst.case_flag) inferred = *inst.case_flag;
    } else {
        auto predA = predict_clL_pp(inst.p, mu, 'A');
        auto predB = predict_clL_pp(inst.p, mu, 'B');
        if (predA && actual_L == *predA) inferred = 'A';
        else if (predB && actual_L == *predB) inferred = 'B';
        if (!inferred)
            return {Verdict::fail, msg.str() + "; Cl_p(L) = " + actual_L.render() +
                                       " matches neither case A " +
                                       (predA ? predA->render() : std::string("-")) +
                                       " nor case B " +
                                       (predB ? predB->render() : std::string("-"))};
        msg << "; case " << inferred << " (from structure)";
        if (inst.case_flag && *inst.case_flag != inferred)
            return {Verdict::fail, msg.str() + " but dataset says case " + *inst.case_flag};
    }
    // part c: Cl_p(K) from mu - 1 = a(p-1) + b
    auto predK = predict_clK_pp(inst.p, mu, rme);
    if (!predK)
        return {Verdict::fail, msg.str() + "; (mu, rho-e) admit no Cl_p(K) column"};
    AbelianGroupStructure actual_K = inst.cl_K->p_part(p);
    if (!(actual_K == *predK))
        return {Verdict::fail, msg.str() + "; Cl_p(K) = " + actual_K.render() +
                                   " != predicted " + predK->render()};
    msg << "; Cl_p(L), Cl_p(K) match";
    return {Verdict::pass, msg.str()};
}

CheckResult check_prime_to_p(const DihedralInstance& inst) {
    if (!inst.cl_k || !inst.cl_K || !inst.cl_L)
        return {Verdict::not_applicable, "needs cl_k, cl_K and cl_L"};
    Integer prod = inst.cl_k->order() * inst.cl_K->order() * inst.cl_L->order();
    Factorization f = factorize(prod);
    if (!f.complete) return {Verdict::not_applicable, "class numbers too hard to factor"};
    std::ostringstream msg;
    for (const auto& pe : f.factors) {
        const Integer& l = pe.prime;
        if (l == inst.p) continue;
        if (inst.h_F % l == 0) {
            msg << "l=" << l.get_str() << " skipped (divides h_F); ";
            continue;
        }
        AbelianGroupStructure lhs = inst.cl_L->p_part(l);
        AbelianGroupStructure rhs = inst.cl_k->p_part(l)
                                        .direct_product(inst.cl_K->p_part(l))
                                        .direct_product(inst.cl_K->p_part(l));
        if (!(lhs == rhs))
            return {Verdict::fail, "l = " + l.get_str() + ": Cl_l(L) = " + lhs.render() +
                                       " != Cl_l(k) x Cl_l(K)^2 = " + rhs.render()};
        msg << "l=" << l.get_str() << " ok; ";
    }
    std::string s = msg.str();
    if (s.empty()) s = "no primes l != p divide the class numbers";
    return {Verdict::pass, s};
}

CheckResult check_disc_consistency(const DihedralInstance& inst, const ClassGroupOptions& opts) {
    if (!inst.d || !inst.cl_k) return {Verdict::not_applicable, "no discriminant"};
    if (inst.base_field != "Q") return {Verdict::not_applicable, "d refers to a base other than Q"};
    if (std::llabs(*inst.d) > opts.bound && !opts.extended)
        return {Verdict::not_applicable, "discriminant beyond enumeration bound"};
    FormClassGroup g = class_group(*inst.d, opts);
    Integer p = to_integer(inst.p);
    AbelianGroupStructure expect = g.ordinary_structure().p_part(p);
    AbelianGroupStructure got = inst.cl_k->p_part(p);
    if (expect == got)
        return {Verdict::pass, "Cl(" + std::to_string(*inst.d) + ") p-part = " + expect.render()};
    return {Verdict::fail, "computed p-part " + expect.render() + " != dataset " + got.render()};
}

CheckResult check_scholz(long long m, const ClassGroupOptions& opts) {
    if (m <= 1) throw std::invalid_argument("check_scholz: m must exceed 1");
    if (is_squarefree(to_integer(m)) != Tri::yes)
        throw std::invalid_argument("check_scholz: m must be squarefree");
    long long d_plus = (m % 4 == 1) ? m : 4 * m;
    Integer n0 = squarefree_part(to_integer(-3) * to_integer(m));
    long long n0l = n0.get_si();
    long long d_minus = ((n0l % 4 + 4) % 4 == 1) ? n0l : 4 * n0l;
    unsigned rp = p_rank(d_plus, 3, opts);
    unsigned rm = p_rank(d_minus, 3, opts);
    std::ostringstream msg;
    msg << "m=" << m << ": r3+(" << d_plus << ") = " << rp << ", r3-(" << d_minus << ") = " << rm;
    if (rp <= rm && rm <= rp + 1) return {Verdict::pass, msg.str()};
    return {Verdict::fail, msg.str() + " violates r3+ <= r3- <= r3+ + 1"};
}

// ---------------------------------------------------------------------------
// dataset verification

namespace {

CheckResult check_callahan(const DihedralInstance& inst) {
    // r_3(K) = r_3(k) - 1 for complex quadratic k over Q; conjecture-style.
    if (inst.p != 3 || inst.base_field != "Q" || inst.lambda_k != 0 || !inst.cl_k || !inst.cl_K)
        return {Verdict::not_applicable, ""};
    long rk = inst.cl_k->p_rank(to_integer(3));
    long rK = inst.cl_K->p_rank(to_integer(3));
    std::ostringstream msg;
    msg << "r_3(K) = " << rK << " vs r_3(k) - 1 = " << rk - 1;
    return {rK == rk - 1 ? Verdict::conjecture_consistent : Verdict::conjecture_violated,
            msg.str()};
}

RowReport verify_row(const DihedralInstance& inst, const VerifyOptions& opts) {
    RowReport r;
    r.inst = inst;
    r.derived = derive_parameters(inst);
    r.checks.emplace_back("class_number_formula", check_class_number_formula(inst));
    r.checks.emplace_back("lower_bound", check_lower_bound(inst));
    r.checks.emplace_back("upper_bound", check_upper_bound(inst));
    r.checks.emplace_back("pp_structure", check_pp_structure(inst));
    r.checks.emplace_back("prime_to_p", check_prime_to_p(inst));
    if (opts.check_discs)
        r.checks.emplace_back("disc_consistency",
                              check_disc_consistency(inst, opts.class_group_options));
    r.checks.emplace_back("callahan", check_callahan(inst));
    for (const auto& [name, res] : r.checks)
        if (res.verdict == Verdict::fail) r.hard_fail = true;
    return r;
}

}  // namespace

bool VerificationReport::ok() const { return hard_fail_count() == 0; }

size_t VerificationReport::hard_fail_count() const {
    size_t n = 0;
    for (const auto& r : rows) n += r.hard_fail ? 1 : 0;
    return n;
}

std::string VerificationReport::to_json() const {
    nlohmann::json out;
    out["rows"] = nlohmann::json::array();
    size_t conj_violations = 0;
    for (const auto& r : rows) {
        nlohmann::json jr;
        jr["label"] = r.inst.label;
        jr["p"] = r.inst.p;
        jr["base_field"] = r.inst.base_field;
        nlohmann::json der;
        der["a"] = r.derived.a;
        if (r.derived.q) der["q"] = r.derived.q->get_str();
        der["q_integral"] = r.derived.q_integral;
        if (r.derived.mu) der["mu"] = *r.derived.mu;
        if (r.derived.rho_minus_e) der["rho_minus_e"] = *r.derived.rho_minus_e;
        jr["derived"] = der;
        nlohmann::json checks;
        for (const auto& [name, res] : r.checks) {
            if (res.verdict == Verdict::not_applicable && name == "callahan") continue;
            checks[name] = {{"verdict", verdict_name(res.verdict)}, {"detail", res.detail}};
            if (res.verdict == Verdict::conjecture_violated) ++conj_violations;
        }
        jr["checks"] = checks;
        jr["hard_fail"] = r.hard_fail;
        out["rows"].push_back(jr);
    }
    out["summary"] = {{"rows", rows.size()},
                      {"hard_fails", hard_fail_count()},
                      {"conjecture_violations", conj_violations}};
    return out.dump(2);
}

std::string VerificationReport::to_tsv() const {
    std::ostringstream out;
    out << "label\tp\tq\tmu\trho_minus_e\tverdicts\n";
    for (const auto& r : rows) {
        out << r.inst.label << "\t" << r.inst.p << "\t"
            << (r.derived.q ? r.derived.q->get_str() : "-") << "\t"
            << (r.derived.mu ? std::to_string(*r.derived.mu) : "-") << "\t"
            << (r.derived.rho_minus_e ? std::to_string(*r.derived.rho_minus_e) : "-") << "\t";
        bool first = true;
        for (const auto& [name, res] : r.checks) {
            if (res.verdict == Verdict::not_applicable) continue;
            if (!first) out << ",";
            out << name << "=" << verdict_name(res.verdict);
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw std::runtime_error("dataset line " + std::to_string(lineno) + ": unterminated quote");
    fields.push_back(cur);
    return fields;
}

const std::vector<std::string> kSchema = {"p",    "label",    "base_field", "d",     "poly_K",
                                          "cl_k", "cl_K",     "cl_L",       "h_F",   "lambda_F",
                                          "lambda_k", "e",    "rho",        "case"};

}  // namespace

std::vector<DihedralInstance> parse_dataset_csv(std::istream& in) {
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    std::vector<DihedralInstance> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line, lineno);
        if (!header_seen) {
            if (fields != kSchema)
                throw std::runtime_error("dataset line " + std::to_string(lineno) +
                                         ": header does not match the schema");
            header_seen = true;
            continue;
        }
        if (fields.size() != kSchema.size())
            throw std::runtime_error("dataset line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(kSchema.size()) + " columns, got " +
                                     std::to_string(fields.size()));
        auto col = [&](const char* name) -> const std::string& {
            for (size_t i = 0; i < kSchema.size(); ++i)
                if (kSchema[i] == name) return fields[i];
            throw std::logic_error("bad column name");
        };
        DihedralInstance inst;
        try {
            inst.p = std::stol(col("p"));
            if (inst.p < 3 || !is_prime(to_integer(inst.p)))
                throw std::invalid_argument("p must be an odd prime");
            inst.label = col("label");
            inst.base_field = col("base_field").empty() ? "Q" : col("base_field");
            base_field_disc(inst.base_field);  // validates the tag
            if (!col("d").empty()) inst.d = std::stoll(col("d"));
            if (!col("poly_K").empty()) inst.poly_K = IntPolynomial::from_string(col("poly_K"));
            if (!col("cl_k").empty()) inst.cl_k = AbelianGroupStructure::parse(col("cl_k"));
            if (!col("cl_K").empty()) inst.cl_K = AbelianGroupStructure::parse(col("cl_K"));
            if (!col("cl_L").empty()) inst.cl_L = AbelianGroupStructure::parse(col("cl_L"));
            if (!col("h_F").empty()) inst.h_F = Integer(col("h_F"));
            if (inst.h_F <= 0) throw std::invalid_argument("h_F must be positive");
            if (inst.h_F % inst.p == 0)
                throw std::invalid_argument("h_F must be coprime to p");
            if (!col("lambda_F").empty()) inst.lambda_F = std::stol(col("lambda_F"));
            if (!col("lambda_k").empty()) inst.lambda_k = std::stol(col("lambda_k"));
            if (inst.lambda_F < 0 || inst.lambda_k < 0)
                throw std::invalid_argument("unit ranks must be non-negative");
            if (!col("e").empty()) inst.e = std::stol(col("e"));
            if (!col("rho").empty()) {
                inst.rho = std::stol(col("rho"));
                if (*inst.rho < 1) throw std::invalid_argument("rho must be >= 1");
            }
            if (!col("case").empty()) {
                if (col("case") != "A" && col("case") != "B")
                    throw std::invalid_argument("case must be A or B");
                inst.case_flag = col("case")[0];
            }
        } catch (const std::exception& ex) {
            throw std::runtime_error("dataset line " + std::to_string(lineno) + ": " + ex.what());
        }
        rows.push_back(std::move(inst));
    }
    if (!header_seen) throw std::runtime_error("dataset: missing header");
    return rows;
}

VerificationReport verify_instances(const std::vector<DihedralInstance>& rows,
                                    const VerifyOptions& opts) {
    VerificationReport rep;
    rep.rows.resize(rows.size());
    if (opts.threads <= 1 || rows.size() < 2) {
        for (size_t i = 0; i < rows.size(); ++i) rep.rows[i] = verify_row(rows[i], opts);
        return rep;
    }
    std::vector<std::future<void>> futs;
    size_t chunk = (rows.size() + opts.threads - 1) / opts.threads;
    for (unsigned t = 0; t < opts.threads; ++t) {
        size_t lo = t * chunk, hi = std::min(rows.size(), lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (size_t i = lo; i < hi; ++i) rep.rows[i] = verify_row(rows[i], opts);
        }));
    }
    for (auto& f : futs) f.get();
    return rep;
}

VerificationReport verify_dataset(std::istream& in, const VerifyOptions& opts) {
    return verify_instances(parse_dataset_csv(in), opts);
}

}  // namespace dihlab
