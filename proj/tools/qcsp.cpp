// Command-line front end: solving, encoding, and batch verification.
//
// Exit codes: 0 = TRUE / SAT / all checks passed, 1 = FALSE / UNSAT / some
// check failed, 2 = usage, parse, or capacity error. Reports are plain text,
// one line per check, and byte-identical for identical configurations.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcsp/encoders.hpp"
#include "qcsp/game.hpp"
#include "qcsp/induced.hpp"
#include "qcsp/pi2.hpp"
#include "qcsp/qphi.hpp"
#include "qcsp/quadruple.hpp"
#include "qcsp/suites.hpp"

namespace {

using namespace qcsp;

constexpr const char* kEncoderVersion = "1";

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PlaySet read_restriction_file(const std::string& path, const Domain& dom) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    PlaySet out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        Tuple t;
        for (const auto& tok : toks) {
            try {
                t.push_back(dom.parse(tok));
            } catch (const std::exception& e) {
                throw parse_error(path, lineno, e.what());
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

int emit_report(const std::vector<CheckLine>& lines, std::uint64_t seed, const std::string& suite) {
    std::cout << "# suite=" << suite << " seed=" << seed << " checks=" << lines.size() << "\n";
    for (const auto& l : lines) {
        std::cout << l.name << " " << (l.pass ? "PASS" : "FAIL");
        if (!l.note.empty()) std::cout << " " << l.note;
        std::cout << "\n";
    }
    return all_pass(lines) ? 0 : 1;
}

int cmd_solve(const std::string& path, bool want_strategy, const std::string& restrict_path,
              bool pi2, bool verbose) {
    QcspInstance inst = read_qcsp_file(path);
    bool value;
    if (!restrict_path.empty()) {
        PlaySet s = read_restriction_file(restrict_path, inst.dom);
        value = eval_restricted(inst, s);
        if (verbose) std::cerr << "restriction set: " << s.size() << " plays\n";
    } else if (pi2) {
        Pi2Result res = solve_pi2_style(inst);
        value = res.value;
        if (verbose && !value) {
            std::cerr << "losing universal play:";
            for (int a : res.losing_play) std::cerr << " " << inst.dom.format(a);
            std::cerr << "\n";
        }
    } else {
        EvalResult res = eval_qcsp(inst, want_strategy);
        value = res.value;
        if (want_strategy && res.strategy) {
            for (const auto& e : res.strategy->entries) {
                for (std::size_t p = 0; p < e.table.size(); ++p) {
                    Tuple prefix = decode_tuple(p, inst.dom.size(), e.universals_before);
                    std::cout << "strategy " << e.var << " " << inst.dom.format_tuple(prefix)
                              << " -> " << inst.dom.format(e.table[p]) << "\n";
                }
            }
        }
    }
    std::cout << (value ? "TRUE" : "FALSE") << "\n";
    return value ? 0 : 1;
}

int cmd_csp(const std::string& path) {
    QcspInstance inst = read_qcsp_file(path);
    if (inst.universal_count() != 0)
        throw std::invalid_argument("csp: instance has universal variables; use solve");
    CspInstance csp;
    csp.dom = inst.dom;
    csp.nvars = static_cast<int>(inst.prefix.size());
    for (const auto& c : inst.constraints) {
        CspConstraint cc;
        cc.rel = std::make_shared<Relation>(inst.lib.rel(c.rel));
        for (const auto& v : c.vars) cc.scope.push_back(inst.var_position(v));
        csp.cons.push_back(std::move(cc));
    }
    auto sol = solve_csp(csp);
    if (!sol) {
        std::cout << "UNSAT\n";
        return 1;
    }
    std::cout << "SAT\n";
    for (std::size_t i = 0; i < inst.prefix.size(); ++i)
        std::cout << inst.prefix[i].second << " = " << inst.dom.format((*sol)[i]) << "\n";
    return 0;
}

int cmd_induced(const std::string& rel_path, const std::string& rel_name, const std::string& outdir,
                std::uint64_t seed) {
    RelLibrary lib = read_rel_file(rel_path);
    const Relation& r = lib.rel(rel_name);
    int n = induced_levels(r);
    InducedInstance ind = build_induced(r, n);

    std::filesystem::create_directories(outdir);
    RelLibrary out_lib;
    out_lib.dom = ind.dom;
    for (int m = 0; m <= n; ++m) out_lib.add("S" + std::to_string(m), *ind.s_tables[static_cast<std::size_t>(m)]);
    write_rel_file((std::filesystem::path(outdir) / "induced.rel").string(), out_lib);

    std::ofstream q(std::filesystem::path(outdir) / "induced.qcsp");
    q << "# source=" << rel_path << " relation=" << rel_name << " seed=" << seed << "\n";
    q << "domain " << ind.dom.size() << "\n";
    q << "use induced.rel\n";
    q << "prefix";
    for (int i = 1; i <= ind.dom.size(); ++i) q << " A z" << i;
    for (const auto& v : ind.vars) q << " E " << v.name;
    q << "\n";
    for (const auto& c : ind.cons) {
        q << "cons S" << c.level;
        for (int vid : c.var_path) q << " " << ind.vars[static_cast<std::size_t>(vid)].name;
        for (int i = 0; i < c.level; ++i) q << " z" << c.path[static_cast<std::size_t>(i)];
        q << "\n";
    }
    std::cout << "induced instance: " << ind.vars.size() << " variables, " << ind.cons.size()
              << " constraints, levels 0.." << n << "\n";
    std::cout << "wrote " << outdir << "/induced.qcsp and induced.rel\n";
    return 0;
}

int cmd_reduce(const std::string& kind, const std::string& input, const std::string& outdir,
               std::uint64_t seed) {
    std::filesystem::create_directories(outdir);
    QcspInstance inst;
    std::string encoder;
    if (kind == "q3cnf") {
        QBoolFormula f = read_qdimacs_file(input);
        inst = encode_q3cnf_complement(f);
        encoder = "q3cnf-complement";
    } else if (kind == "pi2-1in3") {
        OneInThreeInstance f = read_one_in_three_file(input);
        inst = encode_pi2_1in3(f);
        encoder = "pi2-1in3";
    } else {
        throw std::invalid_argument("reduce: kind must be q3cnf or pi2-1in3");
    }
    std::string qcsp_path = (std::filesystem::path(outdir) / "encoded.qcsp").string();
    write_qcsp_file(qcsp_path, "encoded.rel", inst);
    std::ofstream manifest(std::filesystem::path(outdir) / "manifest.txt");
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(read_whole_file(input))));
    manifest << "source=" << input << " fnv1a64=" << hex << " encoder=" << encoder << "/"
             << kEncoderVersion << " seed=" << seed << "\n";
    std::cout << "wrote " << qcsp_path << " (+ encoded.rel, manifest.txt)\n";
    return 0;
}

int cmd_tphi(const std::string& input, const std::string& outdir) {
    QBoolFormula f = read_qdimacs_file(input);
    if (f.mode != QBoolFormula::Mode::Dnf)
        throw std::invalid_argument("tphi: input must use the 'p dnf' header");
    auto [cv0, cv1] = canonical_v_relations();
    Relation t = q_phi_operator(f, cv0, cv1);
    Domain dom = gamma4_domain();
    std::cout << "tphi result (" << t.count() << " tuples):\n";
    for (const auto& tuple : t.tuples()) std::cout << "  " << dom.format_tuple(tuple) << "\n";
    Relation diag(dom, 2), full(dom, 2);
    for (int a : {1, 2}) {
        diag.add({a, a});
        for (int b : {1, 2}) full.add({a, b});
    }
    if (t == diag)
        std::cout << "verdict: diagonal on {+,-} (No-instance shape)\n";
    else if (t == full)
        std::cout << "verdict: full square on {+,-} (Yes-instance shape)\n";
    else
        std::cout << "verdict: neither canonical shape\n";
    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        RelLibrary lib;
        lib.dom = dom;
        lib.add("TPHI", t);
        write_rel_file((std::filesystem::path(outdir) / "tphi.rel").string(), lib);
    }
    return 0;
}

int cmd_mighty(const std::string& kind_name, const std::string& rel_path) {
    MightyKind kind = mighty_kind_from_name(kind_name);
    RelLibrary lib = read_rel_file(rel_path);
    MightyTuple t;
    t.kind = kind;
    std::vector<std::string> needed;
    switch (kind) {
        case MightyKind::I:
        case MightyKind::IPrime: needed = {"Q", "D", "B", "C", "Delta"}; break;
        case MightyKind::II:
        case MightyKind::IV: needed = {"Q", "D", "B", "C"}; break;
        case MightyKind::III: needed = {"Q", "B", "C"}; break;
        case MightyKind::V: needed = {"Q", "D"}; break;
        case MightyKind::VPrime: needed = {"Q", "D", "Delta"}; break;
    }
    for (const auto& name : needed) {
        auto it = lib.params.find(name);
        if (it == lib.params.end())
            throw std::invalid_argument("mighty: file must define the parameterized relation '" +
                                        name + "'");
        t.parts.emplace(name, it->second);
    }
    MightyReport rep = check_mighty(t);
    for (const auto& c : rep.conditions) {
        std::cout << "cond" << c.index << " " << (c.pass ? "PASS" : "FAIL");
        if (!c.witness.empty()) std::cout << " " << c.witness;
        std::cout << "\n";
    }
    return rep.all_pass ? 0 : 1;
}

int cmd_poly(const std::string& rel_path) {
    if (rel_path.empty()) return emit_report(run_polymorphism_suite(), 0, "polymorphism");
    RelLibrary lib = read_rel_file(rel_path);
    if (lib.dom.size() != 6)
        throw std::invalid_argument("poly: the built-in operation lives on a 6-element domain");
    FiniteOperation g = g_operation();
    std::vector<CheckLine> lines;
    for (const auto& [name, r] : lib.rels) {
        PolymorphismReport rep = check_polymorphism(g, r);
        lines.push_back({"g-preserves-" + name, rep.preserves,
                         rep.preserves ? "" : "violating image found"});
    }
    return emit_report(lines, 0, "polymorphism-file");
}

int cmd_verify(const std::string& suite, int samples, std::uint64_t seed, int max_vars) {
    std::vector<CheckLine> lines;
    if (suite == "polymorphism") {
        lines = run_polymorphism_suite();
        lines.push_back(run_delta1_check());
    } else if (suite == "equivalence") {
        lines = run_equivalence_suite(samples, 0, seed);
    } else if (suite == "tphi") {
        lines = run_tphi_suite(max_vars, 2);
    } else if (suite == "mighty") {
        lines = run_mighty_suite();
    } else if (suite == "claims") {
        // the derivation log doubles as the claim battery
        Domain d(2);
        MightyTuple t = tuple_II_from_classification(Relation::diagonal(d), Relation::full(d, 1),
                                                     Mask(0b01), Mask(0b10));
        Quadruple q{t.part("Q"),
                    make_param(d, ParamSignature{2, 0, 0, 1},
                               [&](std::size_t, std::size_t, std::size_t) {
                                   return Relation::full(d, 1);
                               }),
                    t.part("B"), t.part("C")};
        DerivationResult res = derive_II_from_III(q);
        for (std::size_t i = 0; i < res.rounds.size(); ++i)
            lines.push_back({"claim-" + std::to_string(i) + "-" + res.rounds[i].claim, true,
                             "sumD=" + std::to_string(res.rounds[i].sum_d) +
                                 " sumC=" + std::to_string(res.rounds[i].sum_c)});
        bool final_ok = true;
        for (QProp p : props_ii_kappa())
            final_ok = final_ok && check_quadruple_property(res.quadruple, p).pass;
        lines.push_back({"claims-final-ii-kappa", final_ok, ""});
    } else {
        throw std::invalid_argument(
            "verify: suite must be one of equivalence|polymorphism|mighty|tphi|claims");
    }
    return emit_report(lines, seed, suite);
}

int cmd_bench() {
    using clock = std::chrono::steady_clock;
    auto time_ms = [&](auto&& fn) {
        auto start = clock::now();
        fn();
        return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };
    double t1 = time_ms([] { run_factorial_suite(); });
    std::cout << "factorial-repetition(all 16+512 relations): " << t1 << " ms\n";
    double t2 = time_ms([] {
        OneInThreeInstance f;
        f.nvars = 3;
        f.universals = 2;
        f.clauses = {{1, 2, 3}, {2, 3, 1}};
        eval_qcsp(encode_pi2_1in3(f));
    });
    std::cout << "pi2-encoding game evaluation (m=2, n=3, s=2): " << t2 << " ms\n";
    double t3 = time_ms([] { run_tphi_suite(2, 1); });
    std::cout << "tphi exhaustive sweep (2 vars, 1 term): " << t3 << " ms\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-domain quantified constraint satisfaction toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 7;
    int max_positions_opt = 0;
    bool verbose = false;
    app.add_option("--seed", seed, "seed for randomized corpora");
    app.add_option("--max-positions", max_positions_opt, "cap on relation arity (radix positions)");
    app.add_flag("-v,--verbose", verbose, "extra diagnostics on stderr");

    std::string solve_path, restrict_path;
    bool want_strategy = false, pi2 = false;
    auto* solve = app.add_subcommand("solve", "evaluate a .qcsp sentence");
    solve->add_option("file", solve_path)->required();
    solve->add_flag("--strategy", want_strategy, "print a winning Skolem table when TRUE");
    solve->add_option("--restrict", restrict_path, "restriction-set file of universal plays");
    solve->add_flag("--pi2", pi2, "use the optimal-move solver (6-element language only)");

    std::string csp_path;
    auto* csp = app.add_subcommand("csp", "solve an existential .qcsp as a CSP");
    csp->add_option("file", csp_path)->required();

    std::string ind_path, ind_rel, ind_out = "out";
    auto* induced = app.add_subcommand("induced", "emit the induced CSP of a source relation");
    induced->add_option("file", ind_path)->required();
    induced->add_option("relation", ind_rel)->required();
    induced->add_option("--out", ind_out, "output directory");

    std::string red_kind, red_input, red_out = "out";
    auto* reduce = app.add_subcommand("reduce", "run a hardness encoder");
    reduce->add_option("kind", red_kind, "q3cnf | pi2-1in3")->required();
    reduce->add_option("input", red_input)->required();
    reduce->add_option("--out", red_out, "output directory");

    std::string tphi_input, tphi_out;
    auto* tphi = app.add_subcommand("tphi", "apply the chain operator to a DNF instance");
    tphi->add_option("input", tphi_input)->required();
    tphi->add_option("--out", tphi_out, "directory for the result relation");

    std::string mighty_kind, mighty_path;
    auto* mighty = app.add_subcommand("mighty", "verify a certificate tuple");
    auto* mighty_check = mighty->add_subcommand("check", "check the conditions of a tuple kind");
    mighty_check->add_option("kind", mighty_kind, "I | I' | II | III | IV | V | V'")->required();
    mighty_check->add_option("file", mighty_path)->required();

    std::string poly_path;
    auto* poly = app.add_subcommand("poly", "polymorphism checks for the 6-element operation");
    poly->add_option("--rel", poly_path, "relation file (defaults to the built-in language)");

    std::string verify_suite;
    int samples = 100, max_vars = 2;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", verify_suite, "equivalence|polymorphism|mighty|tphi|claims")
        ->required();
    verify->add_option("--samples", samples, "sample count for randomized suites");
    verify->add_option("--max-vars", max_vars, "variable bound for exhaustive suites");

    auto* bench = app.add_subcommand("bench", "time a few representative workloads");

    try {
        app.parse(argc, argv);
        if (max_positions_opt > 0) qcsp::set_max_positions(max_positions_opt);
        if (solve->parsed()) return cmd_solve(solve_path, want_strategy, restrict_path, pi2, verbose);
        if (csp->parsed()) return cmd_csp(csp_path);
        if (induced->parsed()) return cmd_induced(ind_path, ind_rel, ind_out, seed);
        if (reduce->parsed()) return cmd_reduce(red_kind, red_input, red_out, seed);
        if (tphi->parsed()) return cmd_tphi(tphi_input, tphi_out);
        if (mighty->parsed()) {
            if (!mighty_check->parsed()) throw std::invalid_argument("mighty: expected 'check'");
            return cmd_mighty(mighty_kind, mighty_path);
        }
        if (poly->parsed()) return cmd_poly(poly_path);
        if (verify->parsed()) return cmd_verify(verify_suite, samples, seed, max_vars);
        if (bench->parsed()) return cmd_bench();
        throw std::invalid_argument("no subcommand");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
