#pragma once

// The verification batteries behind the CLI `verify` subcommand and the
// acceptance runner: each returns one line per check so reports can be
// diffed byte for byte across runs with the same configuration.

#include <string>
#include <vector>

#include "qcsp/encoders.hpp"
#include "qcsp/game.hpp"
#include "qcsp/gamma.hpp"
#include "qcsp/induced.hpp"
#include "qcsp/pi2.hpp"
#include "qcsp/qphi.hpp"
#include "qcsp/quadruple.hpp"
#include "qcsp/rng.hpp"
#include "qcsp/vprime_steps.hpp"

namespace qcsp {

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string note;
};

inline bool all_pass(const std::vector<CheckLine>& lines) {
    for (const auto& l : lines)
        if (!l.pass) return false;
    return true;
}

// g against the six relations and the six constants: 12 exhaustive checks.
inline std::vector<CheckLine> run_polymorphism_suite() {
    std::vector<CheckLine> out;
    FiniteOperation g = g_operation();
    auto check = [&](const std::string& name, const Relation& r) {
        PolymorphismReport rep = check_polymorphism(g, r);
        std::string note;
        if (!rep.preserves) {
            note = "image " + r.domain().format_tuple(rep.witness_image) + " escapes";
        }
        out.push_back({"g-preserves-" + name, rep.preserves, note});
    };
    for (const auto& [name, r] : gamma6().rels) check(name, r);
    for (const auto& [name, r] : gamma6_constants().rels) check(name, r);
    return out;
}

// The derivation of DELTA1 from DELTA0 and ONEIN3 evaluates to the exact
// table.
inline CheckLine run_delta1_check() {
    RelLibrary lib = gamma6();
    QcFormula f;
    f.free_vars = {"x", "y"};
    f.quantified = {{Quant::Exists, "u1"}, {Quant::Exists, "u2"}, {Quant::Exists, "u3"}};
    f.atoms = {{"DELTA0", {"x", "u1"}},
               {"ONEIN3", {"y", "u1", "u2"}},
               {"ONEIN3", {"u2", "u2", "u3"}}};
    bool ok = eval_qc_formula(f, lib) == lib.rel("DELTA1");
    return {"delta1-derivation", ok, ok ? "" : "formula image differs from the table"};
}

// Items 1/3/5/6 of the equivalence between the game and its induced CSP
// forms, on seeded random source relations.
inline std::vector<CheckLine> run_equivalence_suite(int samples2, int samples3, std::uint64_t seed) {
    std::vector<CheckLine> out;
    SplitMix64 rng(seed);
    for (int i = 0; i < samples2; ++i) {
        Relation r = random_relation(Domain(2), 5, rng);
        EquivalenceReport rep = check_equivalence_lemma(r, 2);
        out.push_back({"equivalence-a2-n2-" + std::to_string(i), rep.agree,
                       rep.agree ? "" : "items disagree"});
    }
    for (int i = 0; i < samples3; ++i) {
        Relation r = random_relation(Domain(3), 3, rng);
        EquivalenceReport rep = check_equivalence_lemma(r, 1);
        out.push_back({"equivalence-a3-n1-" + std::to_string(i), rep.agree,
                       rep.agree ? "" : "items disagree"});
    }
    return out;
}

namespace suite_detail {

template <class F>
void enumerate_three_literal_formulas(int max_vars, int max_clauses, QBoolFormula::Mode mode, F&& f) {
    for (int n = 1; n <= max_vars; ++n) {
        std::vector<BoolLiteral> lits;
        for (int v = 1; v <= n; ++v)
            for (int b = 0; b <= 1; ++b) lits.push_back({v, b});
        std::size_t nl = lits.size();
        for (int s = 1; s <= max_clauses; ++s) {
            std::size_t total = 1;
            for (int i = 0; i < 3 * s; ++i) total *= nl;
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t c = code;
                QBoolFormula g;
                g.mode = mode;
                g.nvars = n;
                for (int t = 0; t < s; ++t) {
                    std::array<BoolLiteral, 3> cl;
                    for (int j = 0; j < 3; ++j) {
                        cl[static_cast<std::size_t>(j)] = lits[c % nl];
                        c /= nl;
                    }
                    g.clauses.push_back(cl);
                }
                for (int pmask = 0; pmask < (1 << n); ++pmask) {
                    g.prefix.clear();
                    for (int v = 0; v < n; ++v)
                        g.prefix.push_back((pmask >> v & 1) ? Quant::Forall : Quant::Exists);
                    f(g);
                }
            }
        }
    }
}

}  // namespace suite_detail

// The canonical chain-operator dichotomy: the closure is the {+,-} diagonal
// exactly on the No-instances and the full {+,-} square on the
// Yes-instances. One line per (variables, terms) group.
inline std::vector<CheckLine> run_tphi_suite(int max_vars, int max_terms) {
    auto [cv0, cv1] = canonical_v_relations();
    Domain dom = gamma4_domain();
    Relation diag(dom, 2), full(dom, 2);
    for (int a : {1, 2}) {
        diag.add({a, a});
        for (int b : {1, 2}) full.add({a, b});
    }
    std::vector<CheckLine> out;
    for (int n = 1; n <= max_vars; ++n)
        for (int s = 1; s <= max_terms; ++s) {
            long cases = 0, mismatches = 0;
            suite_detail::enumerate_three_literal_formulas(
                n, s, QBoolFormula::Mode::Dnf, [&](const QBoolFormula& f) {
                    if (f.nvars != n || static_cast<int>(f.clauses.size()) != s) return;
                    ++cases;
                    Relation got = q_phi_operator(f, cv0, cv1);
                    if (got != (qbf_truth(f) ? full : diag)) ++mismatches;
                });
            out.push_back({"tphi-n" + std::to_string(n) + "-s" + std::to_string(s), mismatches == 0,
                           std::to_string(cases) + " instances, " + std::to_string(mismatches) +
                               " mismatches"});
        }
    return out;
}

// Exhaustive equivalence of the 4-element complement encoder with the
// negated QBF truth, grouped per (variables, clauses).
inline std::vector<CheckLine> run_q3cnf_suite(int max_vars, int max_clauses) {
    std::vector<CheckLine> out;
    for (int n = 1; n <= max_vars; ++n)
        for (int s = 1; s <= max_clauses; ++s) {
            long cases = 0, mismatches = 0;
            suite_detail::enumerate_three_literal_formulas(
                n, s, QBoolFormula::Mode::Cnf, [&](const QBoolFormula& f) {
                    if (f.nvars != n || static_cast<int>(f.clauses.size()) != s) return;
                    ++cases;
                    if (eval_qcsp(encode_q3cnf_complement(f)).value != !qbf_truth(f)) ++mismatches;
                });
            out.push_back({"q3cnf-n" + std::to_string(n) + "-s" + std::to_string(s), mismatches == 0,
                           std::to_string(cases) + " instances, " + std::to_string(mismatches) +
                               " mismatches"});
        }

    // the worked three-clause example: a true source sentence, so the
    // complement encoding must come out false
    QBoolFormula f;
    f.mode = QBoolFormula::Mode::Cnf;
    f.nvars = 3;
    f.prefix = {Quant::Exists, Quant::Forall, Quant::Exists};
    f.clauses = {{BoolLiteral{1, 1}, BoolLiteral{2, 0}, BoolLiteral{3, 1}},
                 {BoolLiteral{1, 0}, BoolLiteral{2, 1}, BoolLiteral{3, 0}},
                 {BoolLiteral{1, 1}, BoolLiteral{2, 0}, BoolLiteral{3, 0}}};
    bool ok = qbf_truth(f) && !eval_qcsp(encode_q3cnf_complement(f)).value;
    out.push_back({"q3cnf-worked-example", ok, ok ? "encodes to FALSE" : "wrong verdict"});
    return out;
}

// Exhaustive equivalence of the 6-element encoder on Pi2 ONE-IN-THREE
// instances with two universal variables.
inline std::vector<CheckLine> run_pi2_encoder_suite(int max_n, int max_s) {
    std::vector<CheckLine> out;
    int m = 2;
    for (int n = m; n <= max_n; ++n)
        for (int s = 1; s <= max_s; ++s) {
            long cases = 0, mismatches = 0;
            std::size_t clause_space = 1;
            for (int i = 0; i < 3 * s; ++i) clause_space *= static_cast<std::size_t>(n);
            for (std::size_t code = 0; code < clause_space; ++code) {
                std::size_t c = code;
                OneInThreeInstance inst;
                inst.nvars = n;
                inst.universals = m;
                for (int t = 0; t < s; ++t) {
                    std::array<int, 3> cl{};
                    for (int j = 0; j < 3; ++j) {
                        cl[static_cast<std::size_t>(j)] = static_cast<int>(c % static_cast<std::size_t>(n)) + 1;
                        c /= static_cast<std::size_t>(n);
                    }
                    inst.clauses.push_back(cl);
                }
                ++cases;
                if (eval_qcsp(encode_pi2_1in3(inst)).value != one_in_three_truth(inst)) ++mismatches;
            }
            out.push_back({"pi2-encoder-n" + std::to_string(n) + "-s" + std::to_string(s),
                           mismatches == 0,
                           std::to_string(cases) + " instances, " + std::to_string(mismatches) +
                               " mismatches"});
        }
    return out;
}

// Agreement of the optimal-move solver with the game solver on seeded
// 6-element-language instances.
inline std::vector<CheckLine> run_pi2_agreement_suite(int samples, std::uint64_t seed) {
    std::vector<CheckLine> out;
    RelLibrary g = gamma6();
    SplitMix64 rng(seed);
    std::vector<std::string> names;
    for (const auto& [n, r] : g.rels) names.push_back(n);
    for (int i = 0; i < samples; ++i) {
        QcspInstance inst;
        inst.dom = g.dom;
        inst.lib = g;
        int u = static_cast<int>(rng.below(3));
        int e = 1 + static_cast<int>(rng.below(2));
        std::vector<std::pair<Quant, std::string>> pool;
        for (int k = 0; k < u; ++k) pool.emplace_back(Quant::Forall, "u" + std::to_string(k));
        for (int k = 0; k < e; ++k) pool.emplace_back(Quant::Exists, "e" + std::to_string(k));
        while (!pool.empty()) {
            std::size_t k = rng.below(pool.size());
            inst.prefix.push_back(pool[k]);
            pool.erase(pool.begin() + static_cast<long>(k));
        }
        int ncons = 1 + static_cast<int>(rng.below(3));
        for (int k = 0; k < ncons; ++k) {
            const std::string& rn = names[rng.below(names.size())];
            QcspConstraint qc;
            qc.rel = rn;
            for (int j = 0; j < g.rel(rn).arity(); ++j)
                qc.vars.push_back(inst.prefix[rng.below(inst.prefix.size())].second);
            inst.constraints.push_back(std::move(qc));
        }
        bool agree = solve_pi2_style(inst).value == eval_qcsp(inst).value;
        out.push_back({"pi2-agreement-" + std::to_string(i), agree, agree ? "" : "solvers disagree"});
    }
    return out;
}

// The factorial repetition identity over every binary relation of the
// 2- and 3-element domains.
inline std::vector<CheckLine> run_factorial_suite() {
    std::vector<CheckLine> out;
    for (int n : {2, 3}) {
        Domain d(n);
        long N = (n == 2 ? 2 : 6) * n * n;
        std::size_t tables = std::size_t(1) << (n * n);
        long failures = 0;
        for (std::size_t bits = 0; bits < tables; ++bits) {
            Relation r(d, 2);
            for (std::size_t i = 0; i < std::size_t(n) * std::size_t(n); ++i)
                if (bits >> i & 1) r.set_index(i);
            Relation s = repeat(r, N);
            if (compose(s, s) != s) ++failures;
        }
        out.push_back({"factorial-repetition-a" + std::to_string(n), failures == 0,
                       std::to_string(tables) + " relations, " + std::to_string(failures) +
                           " failures"});
    }
    return out;
}

// The certificate pipeline: classification datasets into kind II, the
// derivation loop into II+kappa, the kind-I construction, and the primed
// variants.
inline std::vector<CheckLine> run_mighty_suite() {
    std::vector<CheckLine> out;
    auto guard = [&](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };

    guard("classification-a2", [&] {
        Domain d(2);
        MightyTuple t = tuple_II_from_classification(Relation::diagonal(d), Relation::full(d, 1),
                                                     Mask(0b01), Mask(0b10));
        MightyReport rep = check_mighty(t);
        out.push_back({"classification-a2", rep.all_pass,
                       std::to_string(rep.conditions.size()) + " conditions"});

        Quadruple q{t.part("Q"),
                    make_param(d, ParamSignature{2, 0, 0, 1},
                               [&](std::size_t, std::size_t, std::size_t) {
                                   return Relation::full(d, 1);
                               }),
                    t.part("B"), t.part("C")};
        DerivationResult res = derive_II_from_III(q);
        out.push_back({"derive-ii-from-iii-a2", true,
                       std::to_string(res.rounds.size()) + " claim applications"});
        MightyTuple one = tuple_I_from_quadruple(res.quadruple);
        MightyReport irep = check_mighty(one);
        out.push_back({"tuple-i-from-quadruple-a2", irep.all_pass,
                       std::to_string(irep.conditions.size()) + " conditions"});
        MightyTuple prime = tuple_to_prime(one);
        out.push_back({"tuple-i-prime-a2", check_mighty(prime).all_pass, ""});
    });

    guard("classification-gamma4", [&] {
        Domain d = gamma4_domain();
        Relation sigma(d, 2);
        sigma.add({1, 1});
        sigma.add({2, 2});
        Relation dset = Relation::from_tuples(d, 1, {{1}, {2}});
        MightyTuple t = tuple_II_from_classification(sigma, dset, 0b1011, 0b0111);
        MightyReport rep = check_mighty(t);
        out.push_back({"classification-gamma4", rep.all_pass,
                       std::to_string(rep.conditions.size()) + " conditions"});
    });

    guard("vprime-pipeline-a2", [&] {
        Domain d(2);
        ParamRelation q = make_param(d, ParamSignature{2, 0, 2, 2},
                                     [&](std::size_t, std::size_t, std::size_t ai) {
                                         Tuple a = decode_tuple(ai, 2, 2);
                                         if (a[0] == a[1]) return Relation::full(d, 2);
                                         return Relation::from_tuples(d, 2, {{1, 2}, {2, 1}});
                                     });
        MightyTuple v;
        v.kind = MightyKind::V;
        v.parts = {{"Q", q}, {"D", make_param(d, ParamSignature{2, 0, 0, 1},
                                              [&](std::size_t, std::size_t, std::size_t) {
                                                  return Relation::full(d, 1);
                                              })}};
        out.push_back({"mighty-v-sample", check_mighty(v).all_pass, ""});
        MightyTuple vp = tuple_to_prime(v);
        out.push_back({"tuple-v-prime-a2", check_mighty(vp).all_pass, ""});
        MightyTuple one = symmetric_vprime_even_case(vp);
        out.push_back({"vprime-even-case-a2", check_mighty(one).all_pass, ""});
    });

    return out;
}

// Restricted-play properties plus arc-consistency soundness on seeded
// corpora.
inline std::vector<CheckLine> run_restricted_suite(int game_samples, int csp_samples,
                                                   std::uint64_t seed) {
    std::vector<CheckLine> out;
    SplitMix64 rng(seed);
    Domain dom(2);
    for (int i = 0; i < game_samples; ++i) {
        RelLibrary lib;
        lib.dom = dom;
        lib.add("A", random_relation(dom, 2, rng));
        lib.add("B", random_relation(dom, 3, rng));
        int u = 1 + static_cast<int>(rng.below(3));
        int e = 1 + static_cast<int>(rng.below(2));
        QcspInstance inst;
        inst.dom = dom;
        inst.lib = lib;
        std::vector<std::pair<Quant, std::string>> pool;
        for (int k = 0; k < u; ++k) pool.emplace_back(Quant::Forall, "u" + std::to_string(k));
        for (int k = 0; k < e; ++k) pool.emplace_back(Quant::Exists, "e" + std::to_string(k));
        while (!pool.empty()) {
            std::size_t k = rng.below(pool.size());
            inst.prefix.push_back(pool[k]);
            pool.erase(pool.begin() + static_cast<long>(k));
        }
        for (int k = 0; k < 2; ++k) {
            const std::string rn = rng.coin() ? "A" : "B";
            QcspConstraint qc;
            qc.rel = rn;
            for (int j = 0; j < lib.rel(rn).arity(); ++j)
                qc.vars.push_back(inst.prefix[rng.below(inst.prefix.size())].second);
            inst.constraints.push_back(std::move(qc));
        }

        bool game = eval_qcsp(inst).value;
        PlaySet full;
        for (std::size_t p = 0; p < unchecked_positions(2, u); ++p)
            full.push_back(decode_tuple(p, 2, u));
        bool ok = eval_restricted(inst, full) == game;
        PlaySet s1, s2;
        for (const auto& t : full) {
            bool in2 = rng.coin();
            bool in1 = in2 && rng.coin();
            if (in2) s2.push_back(t);
            if (in1) s1.push_back(t);
        }
        bool r1 = eval_restricted(inst, s1);
        bool r2 = eval_restricted(inst, s2);
        if (!r1 && r2) ok = false;           // anti-monotone in the play set
        if (game && !(r1 && r2)) ok = false; // true instances stay true
        out.push_back({"restricted-" + std::to_string(i), ok, ok ? "" : "restriction property failed"});
    }
    int failures_seen = 0;
    for (int i = 0; i < csp_samples; ++i) {
        Domain d2(2);
        CspInstance inst;
        inst.dom = d2;
        inst.nvars = 3;
        int ncons = 2 + static_cast<int>(rng.below(3));
        for (int k = 0; k < ncons; ++k) {
            int arity = 1 + static_cast<int>(rng.below(2));
            CspConstraint cc;
            cc.rel = std::make_shared<Relation>(random_relation(d2, arity, rng));
            for (int j = 0; j < arity; ++j)
                cc.scope.push_back(static_cast<int>(rng.below(3)));
            inst.cons.push_back(std::move(cc));
        }
        bool ok = true;
        if (!arc_consistency(inst).ok) {
            ++failures_seen;
            ok = !solve_csp(inst).has_value();
        }
        if (!ok) {
            out.push_back({"ac-soundness", false, "failure with a satisfiable instance at sample " +
                                                      std::to_string(i)});
            return out;
        }
    }
    out.push_back({"ac-soundness", true, std::to_string(csp_samples) + " instances, " +
                                             std::to_string(failures_seen) + " propagation failures"});
    return out;
}

}  // namespace qcsp
