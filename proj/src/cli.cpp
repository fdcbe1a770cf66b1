#include "dihlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dihlab/cubicform.hpp"
#include "dihlab/families.hpp"
#include "dihlab/galmod.hpp"
#include "dihlab/quadform.hpp"
#include "dihlab/verifier.hpp"

namespace dihlab {

namespace {

struct GlobalFlags {
    unsigned long seed = 0;
    unsigned threads = 1;
    std::string format = "tsv";
};

int cmd_classgroup(long long disc, long p, bool narrow, bool extended, long long bound,
                   const GlobalFlags& g, std::ostream& out) {
    ClassGroupOptions opts;
    opts.extended = extended;
    if (bound > 0) opts.bound = bound;
    FormClassGroup cg = class_group(disc, opts);
    const AbelianGroupStructure& s = narrow ? cg.structure() : cg.ordinary_structure();
    AbelianGroupStructure shown = (p > 0) ? s.p_part(to_integer(p)) : s;
    if (g.format == "json") {
        nlohmann::json j;
        j["disc"] = disc;
        j["narrow"] = narrow;
        j["h"] = cg.class_number().get_str();
        j["structure"] = shown.render();
        j["generators"] = nlohmann::json::array();
        for (const auto& [f, ord] : cg.generators())
            j["generators"].push_back({{"a", f.a}, {"b", f.b}, {"c", f.c}, {"order", ord.get_str()}});
        out << j.dump(2) << "\n";
    } else {
        out << shown.render() << "\n";
    }
    return 0;
}

int cmd_cubicfields(long long bound, const std::string& sign, long long single_disc,
                    const GlobalFlags& g, std::ostream& out) {
    if (single_disc != 0) {
        long long b = std::llabs(single_disc);
        auto list = enumerate_fields(b, single_disc < 0 ? DiscSign::negative : DiscSign::positive);
        int count = 0;
        for (const auto& fc : list)
            if (fc.disc == single_disc) count = fc.n_fields;
        if (g.format == "json")
            out << nlohmann::json({{"disc", single_disc}, {"count", count}}).dump() << "\n";
        else
            out << single_disc << "\t" << count << "\n";
        return 0;
    }
    auto list = enumerate_fields(bound, sign == "pos" ? DiscSign::positive : DiscSign::negative);
    if (g.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& fc : list) j.push_back({{"disc", fc.disc}, {"count", fc.n_fields}});
        out << j.dump() << "\n";
    } else {
        for (const auto& fc : list) out << fc.disc << "\t" << fc.n_fields << "\n";
    }
    return 0;
}

int cmd_scholz(long long single_m, long long max_m, const GlobalFlags& g, std::ostream& out) {
    std::vector<long long> ms;
    if (single_m > 1) {
        ms.push_back(single_m);
    } else {
        for (long long m = 2; m <= max_m; ++m)
            if (is_squarefree(to_integer(m)) == Tri::yes) ms.push_back(m);
    }
    ClassGroupOptions opts;
    int violations = 0;
    nlohmann::json jrows = nlohmann::json::array();
    for (long long m : ms) {
        CheckResult res = check_scholz(m, opts);
        if (res.verdict != Verdict::pass) ++violations;
        if (g.format == "json")
            jrows.push_back({{"m", m}, {"verdict", verdict_name(res.verdict)}, {"detail", res.detail}});
        else
            out << m << "\t" << verdict_name(res.verdict) << "\t" << res.detail << "\n";
    }
    if (g.format == "json")
        out << nlohmann::json({{"rows", jrows}, {"violations", violations}}).dump(2) << "\n";
    else
        out << "# checked " << ms.size() << " values, violations " << violations << "\n";
    return violations ? 1 : 0;
}

int cmd_family(const std::string& kind_name, const std::string& range, bool squarefree_only,
               const GlobalFlags& g, std::ostream& out) {
    auto kind = family_from_name(kind_name);
    if (!kind) throw CLI::ValidationError("family", "unknown family " + kind_name);
    size_t dots = range.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("range", "expected A..B");
    Integer lo(range.substr(0, dots)), hi(range.substr(dots + 2));
    ScanFilters filters;
    filters.squarefree_only = squarefree_only;
    auto rows = scan(*kind, lo, hi, filters, g.threads);
    auto tri_name = [](Tri t) {
        return t == Tri::yes ? "yes" : (t == Tri::no ? "no" : "unknown");
    };
    if (g.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : rows) {
            std::ostringstream poly;
            for (size_t i = 0; i < c.polynomial.coeffs().size(); ++i)
                poly << (i ? " " : "") << c.polynomial.coeffs()[i].get_str();
            j.push_back({{"family", family_name(c.family)},
                         {"parameter", c.parameter.get_str()},
                         {"d", c.d.get_str()},
                         {"poly", poly.str()},
                         {"squarefree", tri_name(c.squarefree)},
                         {"fundamental", c.fundamental}});
        }
        out << j.dump(2) << "\n";
    } else {
        out << "family,parameter,d,poly,squarefree,fundamental\n";
        for (const auto& c : rows) {
            std::ostringstream poly;
            for (size_t i = 0; i < c.polynomial.coeffs().size(); ++i)
                poly << (i ? " " : "") << c.polynomial.coeffs()[i].get_str();
            out << family_name(c.family) << "," << c.parameter.get_str() << "," << c.d.get_str()
                << ",\"" << poly.str() << "\"," << tri_name(c.squarefree) << ","
                << (c.fundamental ? "yes" : "no") << "\n";
        }
    }
    return 0;
}

int cmd_verify(const std::string& path, bool no_disc_check, bool extended, const GlobalFlags& g,
               std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "verify: cannot open dataset " << path << "\n";
        return 2;
    }
    VerifyOptions opts;
    opts.check_discs = !no_disc_check;
    opts.class_group_options.extended = extended;
    opts.threads = g.threads;
    VerificationReport rep;
    try {
        rep = verify_dataset(in, opts);
    } catch (const std::runtime_error& ex) {
        err << "verify: " << ex.what() << "\n";
        return 2;
    }
    out << (g.format == "json" ? rep.to_json() + "\n" : rep.to_tsv());
    return rep.ok() ? 0 : 1;
}

int cmd_gras_selftest(long p, int trials, unsigned long seed, const GlobalFlags& g,
                      std::ostream& out) {
    std::mt19937_64 rng(seed);
    int bad = 0;
    for (int i = 0; i < trials; ++i) {
        PGroupModule m = random_sigma_module_with_prime_fixed(p, rng);
        GrasAnalysis a = gras_analyze(m);
        AbelianGroupStructure actual = m.structure();
        bool ok = a.predicted == actual && m.order() == ipow(to_integer(p), a.n);
        if (!ok) {
            ++bad;
            out << "counterexample (trial " << i << "): orders";
            for (long long d : m.orders()) out << " " << d;
            out << ", sigma:";
            for (const auto& row : m.sigma_matrix()) {
                out << " [";
                for (long long v : row) out << v << " ";
                out << "]";
            }
            out << " predicted " << a.predicted.render() << " actual " << actual.render() << "\n";
        }
    }
    if (g.format == "json")
        out << nlohmann::json({{"p", p}, {"trials", trials}, {"failures", bad}}).dump() << "\n";
    else
        out << "p=" << p << " trials=" << trials << " failures=" << bad
            << (bad ? " FAIL" : " ok") << "\n";
    return bad ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"class-group laboratory for dihedral extensions"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalFlags g;
    app.add_option("--seed", g.seed, "seed for randomized subcommands");
    app.add_option("--threads", g.threads, "worker threads for batch subcommands");
    app.add_option("--format", g.format, "output format (tsv|json)")
        ->check(CLI::IsMember({"tsv", "json"}));

    auto* cg = app.add_subcommand("classgroup", "class group of a quadratic discriminant");
    long long cg_disc = 0, cg_bound = 0;
    long cg_p = 0;
    bool cg_narrow = false, cg_extended = false;
    cg->add_option("--disc", cg_disc, "fundamental discriminant")->required();
    cg->add_option("--p", cg_p, "report only the p-part");
    cg->add_flag("--narrow", cg_narrow, "narrow class group (d > 0)");
    cg->add_flag("--extended", cg_extended, "allow |d| beyond the default bound (slow)");
    cg->add_option("--bound", cg_bound, "override the default |d| bound");

    auto* cf = app.add_subcommand("cubicfields", "count cubic fields by discriminant");
    long long cf_bound = 1000, cf_disc = 0;
    std::string cf_sign = "neg";
    cf->add_option("--bound", cf_bound, "enumerate |disc| <= bound");
    cf->add_option("--sign", cf_sign, "neg|pos")->check(CLI::IsMember({"neg", "pos"}));
    cf->add_option("--disc", cf_disc, "count fields for one discriminant");

    auto* sc = app.add_subcommand("scholz", "reflection inequality r3+ <= r3- <= r3+ + 1");
    long long sc_m = 0, sc_max = 0;
    sc->add_option("--m", sc_m, "single squarefree m > 1");
    sc->add_option("--max", sc_max, "check every squarefree 1 < m <= max");

    auto* fam = app.add_subcommand("family", "generate polynomial family candidates");
    std::string fam_kind, fam_range, fam_emit = "csv";
    bool fam_sqfree = false;
    fam->add_option("kind", fam_kind, "cubic|quintic|cyclic-cubic")->required();
    fam->add_option("--range", fam_range, "parameter range A..B")->required();
    fam->add_option("--emit", fam_emit, "csv output")->check(CLI::IsMember({"csv"}));
    fam->add_flag("--squarefree-only", fam_sqfree, "keep only squarefree d");

    auto* ver = app.add_subcommand("verify", "verify a dihedral-instance dataset");
    std::string ver_path;
    bool ver_nodisc = false, ver_extended = false;
    ver->add_option("--dataset", ver_path, "CSV dataset path")->required();
    ver->add_flag("--no-disc-check", ver_nodisc, "skip recomputing Cl(d) for rows with d");
    ver->add_flag("--extended", ver_extended, "allow large discriminants in the d-check");

    auto* gs = app.add_subcommand("gras-selftest", "structure-prediction self test");
    long gs_p = 3;
    int gs_trials = 100;
    gs->add_option("--p", gs_p, "odd prime");
    gs->add_option("--trials", gs_trials, "number of random modules");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (cg->parsed()) return cmd_classgroup(cg_disc, cg_p, cg_narrow, cg_extended, cg_bound, g, out);
        if (cf->parsed()) return cmd_cubicfields(cf_bound, cf_sign, cf_disc, g, out);
        if (sc->parsed()) {
            if (sc_m <= 1 && sc_max <= 1) {
                err << "scholz: provide --m or --max\n";
                return 2;
            }
            return cmd_scholz(sc_m, sc_max, g, out);
        }
        if (fam->parsed()) return cmd_family(fam_kind, fam_range, fam_sqfree, g, out);
        if (ver->parsed()) return cmd_verify(ver_path, ver_nodisc, ver_extended, g, out, err);
        if (gs->parsed()) return cmd_gras_selftest(gs_p, gs_trials, g.seed, g, out);
    } catch (const CLI::Error& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace dihlab
