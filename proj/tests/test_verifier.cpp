#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dihlab/verifier.hpp"

using namespace dihlab;

namespace {

DihedralInstance quintic_b19() {
    DihedralInstance r;
    r.p = 5;
    r.label = "quintic_b19";
    r.cl_k = AbelianGroupStructure::parse("15,5");
    r.cl_K = AbelianGroupStructure::parse("20,4");
    r.cl_L = AbelianGroupStructure::parse("300,20,4,4");
    r.e = 0;
    return r;
}

DihedralInstance cubic_row(const char* clK, const char* clL) {
    DihedralInstance r;
    r.p = 3;
    r.cl_k = AbelianGroupStructure::parse("3,3");
    r.cl_K = AbelianGroupStructure::parse(clK);
    r.cl_L = AbelianGroupStructure::parse(clL);
    r.e = 0;
    return r;
}

const char* kDatasetPath = DIHLAB_SOURCE_DIR "/data/paper_tables.csv";

}  // namespace

TEST_CASE("derive_parameters") {
    auto d = derive_parameters(quintic_b19());
    CHECK(d.a == 1);
    REQUIRE(d.q);
    CHECK(*d.q == 1);
    CHECK(*d.mu == 3);
    CHECK(*d.rho_minus_e == 1);

    auto c = derive_parameters(cubic_row("3", "3,3,3"));
    CHECK(*c.rho_minus_e == 1);  // rho = 1 with e = 0

    // trivial instance: q = p^a
    DihedralInstance t;
    t.p = 7;
    t.cl_k = AbelianGroupStructure();
    t.cl_K = AbelianGroupStructure();
    t.cl_L = AbelianGroupStructure();
    auto dt = derive_parameters(t);
    CHECK(*dt.q == 7);
    CHECK(*dt.mu == 0);

    // reassembly: h_L = p^-a q h_k (h_K / h_F)^2 exactly
    auto inst = quintic_b19();
    auto der = derive_parameters(inst);
    Integer lhs = inst.cl_L->order() * ipow(to_integer(inst.p), static_cast<unsigned long>(der.a)) *
                  inst.h_F * inst.h_F;
    Integer rhs = *der.q * inst.cl_k->order() * inst.cl_K->order() * inst.cl_K->order();
    CHECK(lhs == rhs);
}

TEST_CASE("lower bound") {
    DihedralInstance q39;
    q39.p = 5;
    q39.cl_k = AbelianGroupStructure::parse("20,20");
    q39.cl_K = AbelianGroupStructure::parse("55,5");
    q39.e = 0;
    CHECK(check_lower_bound(q39).verdict == Verdict::pass);  // 1 <= 2

    DihedralInstance a10 = cubic_row("3", "9,3");
    CHECK(check_lower_bound(a10).verdict == Verdict::pass);

    DihedralInstance bad;
    bad.p = 5;
    bad.cl_k = AbelianGroupStructure::parse("5,5,5");
    bad.cl_K = AbelianGroupStructure();
    bad.e = 0;
    CHECK(check_lower_bound(bad).verdict == Verdict::fail);  // 3 - 1 - 0 > 0

    // e unknown: admissible range reported
    bad.e.reset();
    bad.base_field = "quad(5)";
    bad.lambda_F = 1;
    auto res = check_lower_bound(bad);
    CHECK(res.verdict == Verdict::not_applicable);
    CHECK(res.detail.find("e >= 2") != std::string::npos);
}

TEST_CASE("upper bound") {
    DihedralInstance q39;
    q39.p = 5;
    q39.cl_k = AbelianGroupStructure::parse("20,20");
    q39.cl_K = AbelianGroupStructure::parse("55,5");
    CHECK(check_upper_bound(q39).verdict == Verdict::pass);  // (p,p) case, bound attained

    for (auto [clK, clL] : {std::pair{"3", "3,3,3"}, {"9", "27,9"}, {"243", "729,243"}}) {
        auto r = cubic_row(clK, clL);
        CHECK(check_upper_bound(r).verdict == Verdict::pass);  // p = 3 proven
    }

    DihedralInstance synth;
    synth.p = 7;
    synth.base_field = "quad(8)";
    synth.lambda_F = 1;
    synth.lambda_k = 1;
    synth.cl_k = AbelianGroupStructure::parse("7,7");  // hmm (p,p) would be proven
    synth.cl_k = AbelianGroupStructure::parse("49,7");
    synth.cl_K = AbelianGroupStructure::parse("7,7,7,7");
    CHECK(check_upper_bound(synth).verdict == Verdict::conjecture_violated);  // 4 > 3
}

TEST_CASE("(p,p) structure classification") {
    // cubic a = 10: mu = 3 = p, case A, Cl_3(K) = (3)
    auto a10 = cubic_row("3", "9,3");
    auto r10 = check_pp_structure(a10);
    CHECK(r10.verdict == Verdict::pass);
    CHECK(r10.detail.find("case A") != std::string::npos);
    // cubic a = 29: case B
    auto a29 = cubic_row("3", "3,3,3");
    auto r29 = check_pp_structure(a29);
    CHECK(r29.verdict == Verdict::pass);
    CHECK(r29.detail.find("case B") != std::string::npos);
    // cubic a = 94: mu = 7 > p, indistinguishable
    auto a94 = cubic_row("27", "81,27");
    auto r94 = check_pp_structure(a94);
    CHECK(r94.verdict == Verdict::pass);
    CHECK(r94.detail.find("indistinguishable") != std::string::npos);
    // quintic b = 19: mu = 3 < p = 5, case B shape (25,5)
    auto q = quintic_b19();
    auto rq = check_pp_structure(q);
    CHECK(rq.verdict == Verdict::pass);
    CHECK(rq.detail.find("case B") != std::string::npos);
    // mismatched (p,p) row is flagged with both predictions
    auto badrow = cubic_row("3", "27,3");  // mu = 4 but (27,3) is not F(4) = (9,9)
    CHECK(check_pp_structure(badrow).verdict == Verdict::fail);
    // wrong Cl_p(K)
    auto badK = cubic_row("9", "9,3");  // part c predicts (3)
    CHECK(check_pp_structure(badK).verdict == Verdict::fail);
    // dataset case flag inconsistent with the structure
    auto flagged = cubic_row("3", "9,3");
    flagged.case_flag = 'B';
    CHECK(check_pp_structure(flagged).verdict == Verdict::fail);
}

TEST_CASE("pp predictions satisfy both rank bounds") {
    // internal consistency: predicted Cl_p(K) obeys the lower and upper bound
    // with r_p(k) = 2, for every synthetic (mu, rho, e)
    for (long p : {3L, 5L, 7L}) {
        for (unsigned mu = 2; mu <= 12; ++mu) {
            for (long rme : {1L, 2L}) {
                for (long e : {0L, 1L}) {
                    if (rme == 2 && e != 0) continue;  // rho <= 2 forces (rho,e) = (2,0)
                    long rho = rme + e;
                    if (rho < 1 || rho > 2) continue;
                    if ((static_cast<long>(mu) - rho) % 2 != 0) continue;  // parity
                    auto clK = predict_clK_pp(p, mu, rme);
                    if (!clK) continue;
                    long rK = clK->p_rank(to_integer(p));
                    CHECK(2 - 1 - e <= rK);                // lower bound
                    CHECK(rK <= (p - 1) / 2);              // upper bound with r_p(k) = 2
                }
            }
        }
    }
}

TEST_CASE("prime-to-p factorization") {
    auto q19 = quintic_b19();
    CHECK(check_prime_to_p(q19).verdict == Verdict::pass);  // l = 2, 3 per the tables
    DihedralInstance q39;
    q39.p = 5;
    q39.cl_k = AbelianGroupStructure::parse("20,20");
    q39.cl_K = AbelianGroupStructure::parse("55,5");
    q39.cl_L = AbelianGroupStructure::parse("1100,220,5,5");
    CHECK(check_prime_to_p(q39).verdict == Verdict::pass);  // l = 2, 11
    // corrupt the 11-part of Cl(L)
    q39.cl_L = AbelianGroupStructure::parse("100,220,5,5");
    CHECK(check_prime_to_p(q39).verdict == Verdict::fail);
    // trivial everywhere
    DihedralInstance t = cubic_row("3", "3,3,3");
    CHECK(check_prime_to_p(t).verdict == Verdict::pass);
}

TEST_CASE("scholz reflection") {
    CHECK(check_scholz(2).verdict == Verdict::pass);   // both ranks 0
    CHECK(check_scholz(79).verdict == Verdict::pass);
    for (long long m = 2; m <= 150; ++m) {
        if (is_squarefree(to_integer(m)) != Tri::yes) continue;
        CHECK(check_scholz(m).verdict == Verdict::pass);
    }
    CHECK_THROWS_AS(check_scholz(12), std::invalid_argument);
    CHECK_THROWS_AS(check_scholz(1), std::invalid_argument);
}

TEST_CASE("bundled dataset verifies") {
    std::ifstream in(kDatasetPath);
    REQUIRE(in.good());
    auto rep = verify_dataset(in, {});
    CHECK(rep.ok());
    REQUIRE(rep.rows.size() == 23);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.hard_fail);
        // rho - e = 1 and q = 1 on the fully specified F = Q rows
        if (row.inst.cl_L) {
            REQUIRE(row.derived.q);
            CHECK(*row.derived.q == 1);
        }
        // e known implies rho = rho_minus_e + e >= 1
        auto e = effective_e(row.inst);
        if (e && row.derived.rho_minus_e) CHECK(*row.derived.rho_minus_e + *e >= 1);
    }
}

TEST_CASE("dataset parsing errors carry diagnostics") {
    {
        std::istringstream bad("p,label\n3,x\n");
        CHECK_THROWS_WITH_AS(parse_dataset_csv(bad),
                             doctest::Contains("header"), std::runtime_error);
    }
    {
        std::istringstream bad(
            "p,label,base_field,d,poly_K,cl_k,cl_K,cl_L,h_F,lambda_F,lambda_k,e,rho,case\n"
            "4,x,Q,,,,,,1,0,0,,,\n");
        CHECK_THROWS_WITH_AS(parse_dataset_csv(bad), doctest::Contains("line 2"),
                             std::runtime_error);
    }
    {
        // empty file with header: empty report, success
        std::istringstream empty(
            "p,label,base_field,d,poly_K,cl_k,cl_K,cl_L,h_F,lambda_F,lambda_k,e,rho,case\n");
        auto rep = verify_instances(parse_dataset_csv(empty), {});
        CHECK(rep.ok());
        CHECK(rep.rows.empty());
    }
}

TEST_CASE("corrupted class number is caught") {
    // h_L multiplied by p: q stays integral but rho drops to 0
    auto bad = quintic_b19();
    bad.cl_L = AbelianGroupStructure::parse("1500,20,4,4");
    CHECK(check_class_number_formula(bad).verdict == Verdict::fail);
    // h_K multiplied by p: q non-integral
    auto bad2 = quintic_b19();
    bad2.cl_K = AbelianGroupStructure::parse("100,4");
    CHECK(check_class_number_formula(bad2).verdict == Verdict::fail);
}

TEST_CASE("json report round-trips") {
    std::ifstream in(kDatasetPath);
    auto rep = verify_dataset(in, {});
    auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j["summary"]["rows"] == rep.rows.size());
    CHECK(j["summary"]["hard_fails"] == 0);
    REQUIRE(j["rows"].size() == rep.rows.size());
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(j["rows"][i]["label"] == rep.rows[i].inst.label);
        for (const auto& [name, res] : rep.rows[i].checks) {
            if (res.verdict == Verdict::not_applicable && name == "callahan") continue;
            CHECK(j["rows"][i]["checks"][name]["verdict"] == verdict_name(res.verdict));
        }
    }
}

TEST_CASE("disc consistency check") {
    auto a29 = cubic_row("3", "3,3,3");
    a29.d = -97583;
    CHECK(check_disc_consistency(a29).verdict == Verdict::pass);
    a29.cl_k = AbelianGroupStructure::parse("3,3,3");
    CHECK(check_disc_consistency(a29).verdict == Verdict::fail);
    a29.d = -1721475527;  // beyond the default bound
    CHECK(check_disc_consistency(a29).verdict == Verdict::not_applicable);
}
