#pragma once

// Seeded corpus generators and naive evaluators used as oracles.

#include <map>
#include <string>
#include <vector>

#include "qcsp/csp.hpp"
#include "qcsp/formula.hpp"
#include "qcsp/qcsp_instance.hpp"
#include "qcsp/rng.hpp"

namespace testsupport {

using namespace qcsp;

// Plain all-assignments recursion, no memoization, no pruning, no CSP
// dispatch: the ground-truth oracle for the game solvers.
inline bool naive_game_eval(const QcspInstance& inst) {
    inst.validate();
    int n = static_cast<int>(inst.prefix.size());
    std::map<std::string, int> val;
    auto matrix = [&]() {
        for (const auto& c : inst.constraints) {
            Tuple t;
            for (const auto& v : c.vars) t.push_back(val.at(v));
            if (!inst.lib.rel(c.rel).contains(t)) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == n) return matrix();
        const auto& [q, name] = inst.prefix[static_cast<std::size_t>(i)];
        for (int a = 1; a <= inst.dom.size(); ++a) {
            val[name] = a;
            bool v = self(self, i + 1);
            if (q == Quant::Forall && !v) return false;
            if (q == Quant::Exists && v) return true;
        }
        return q == Quant::Forall;
    };
    return rec(rec, 0);
}

// Same idea for formulas: enumerate free assignments, recurse over the
// quantified variables directly.
inline Relation naive_eval_formula(const QcFormula& f, const RelLibrary& lib) {
    std::map<std::string, int> val;
    auto matrix = [&]() {
        for (const auto& atom : f.atoms) {
            Tuple t;
            for (const auto& v : atom.vars) t.push_back(val.at(v));
            if (!lib.rel(atom.rel).contains(t)) return false;
        }
        return true;
    };
    int q = static_cast<int>(f.quantified.size());
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == q) return matrix();
        const auto& [quant, name] = f.quantified[static_cast<std::size_t>(i)];
        for (int a = 1; a <= lib.dom.size(); ++a) {
            val[name] = a;
            bool v = self(self, i + 1);
            if (quant == Quant::Forall && !v) return false;
            if (quant == Quant::Exists && v) return true;
        }
        return quant == Quant::Forall;
    };
    int t = static_cast<int>(f.free_vars.size());
    Relation out(lib.dom, t);
    for (std::size_t idx = 0; idx < out.positions(); ++idx) {
        Tuple tv = decode_tuple(idx, lib.dom.size(), t);
        for (int i = 0; i < t; ++i) val[f.free_vars[static_cast<std::size_t>(i)]] = tv[static_cast<std::size_t>(i)];
        if (rec(rec, 0)) out.set_index(idx);
    }
    return out;
}

inline bool naive_csp_sat(const CspInstance& inst) {
    inst.validate();
    std::vector<int> val(static_cast<std::size_t>(inst.nvars), 0);
    auto check = [&]() {
        for (const auto& c : inst.cons) {
            Tuple t(static_cast<std::size_t>(c.rel->arity()));
            std::size_t open = 0;
            std::vector<bool> done(t.size(), false);
            for (auto [coord, v] : c.pins) {
                t[static_cast<std::size_t>(coord - 1)] = v;
                done[static_cast<std::size_t>(coord - 1)] = true;
            }
            for (std::size_t i = 0; i < t.size(); ++i)
                if (!done[i]) t[i] = val[static_cast<std::size_t>(c.scope[open++])];
            if (!c.rel->contains(t)) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == inst.nvars) return check();
        Mask dom = inst.initial_domain(i);
        for (int a = 1; a <= inst.dom.size(); ++a) {
            if (!(dom >> (a - 1) & 1)) continue;
            val[static_cast<std::size_t>(i)] = a;
            if (self(self, i + 1)) return true;
        }
        return false;
    };
    return rec(rec, 0);
}

// Random instance over a fixed library: a shuffled quantifier prefix and
// uniformly drawn constraint scopes.
inline QcspInstance random_instance(const RelLibrary& lib, SplitMix64& rng, int universals,
                                    int existentials, int ncons) {
    QcspInstance inst;
    inst.dom = lib.dom;
    inst.lib = lib;
    std::vector<std::pair<Quant, std::string>> pool;
    for (int i = 0; i < universals; ++i) pool.emplace_back(Quant::Forall, "u" + std::to_string(i));
    for (int i = 0; i < existentials; ++i) pool.emplace_back(Quant::Exists, "e" + std::to_string(i));
    while (!pool.empty()) {
        std::size_t k = rng.below(pool.size());
        inst.prefix.push_back(pool[k]);
        pool.erase(pool.begin() + static_cast<long>(k));
    }
    std::vector<std::string> rel_names;
    for (const auto& [n, r] : lib.rels) rel_names.push_back(n);
    for (int c = 0; c < ncons; ++c) {
        const std::string& rn = rel_names[rng.below(rel_names.size())];
        QcspConstraint qc;
        qc.rel = rn;
        int arity = lib.rel(rn).arity();
        for (int i = 0; i < arity; ++i)
            qc.vars.push_back(inst.prefix[rng.below(inst.prefix.size())].second);
        inst.constraints.push_back(std::move(qc));
    }
    return inst;
}

inline CspInstance random_csp(const Domain& dom, SplitMix64& rng, int nvars, int ncons,
                              int max_arity = 3) {
    CspInstance inst;
    inst.dom = dom;
    inst.nvars = nvars;
    for (int c = 0; c < ncons; ++c) {
        int arity = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_arity)));
        CspConstraint cc;
        cc.rel = std::make_shared<Relation>(random_relation(dom, arity, rng));
        for (int i = 0; i < arity; ++i) cc.scope.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(nvars))));
        inst.cons.push_back(std::move(cc));
    }
    return inst;
}

}  // namespace testsupport
