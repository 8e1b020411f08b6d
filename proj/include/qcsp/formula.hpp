#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qcsp/detail/engine.hpp"
#include "qcsp/rel_io.hpp"

namespace qcsp {

// A quantified conjunctive formula: ordered free variables, quantified
// variables in evaluation order, and a conjunction of relation atoms.
struct QcAtom {
    std::string rel;
    std::vector<std::string> vars;
};

struct QcFormula {
    std::vector<std::string> free_vars;
    std::vector<std::pair<Quant, std::string>> quantified;
    std::vector<QcAtom> atoms;
};

// The relation over the free variables defined by the formula, computed by
// quantifier recursion over the finite domain.
inline Relation eval_qc_formula(const QcFormula& f, const RelLibrary& lib) {
    std::map<std::string, int> index;
    std::vector<Quant> quants;
    for (const auto& v : f.free_vars) {
        if (!index.emplace(v, static_cast<int>(quants.size())).second)
            throw std::invalid_argument("duplicate variable '" + v + "'");
        quants.push_back(Quant::Exists);  // placeholder; free slots are pinned below
    }
    int nfree = static_cast<int>(quants.size());
    for (const auto& [q, v] : f.quantified) {
        if (!index.emplace(v, static_cast<int>(quants.size())).second)
            throw std::invalid_argument("duplicate variable '" + v + "'");
        quants.push_back(q);
    }

    std::vector<detail::GameEngine::Cons> cons;
    for (const auto& atom : f.atoms) {
        detail::GameEngine::Cons c;
        c.rel = std::make_shared<Relation>(lib.rel(atom.rel));
        for (const auto& v : atom.vars) {
            auto it = index.find(v);
            if (it == index.end())
                throw std::invalid_argument("atom variable '" + v + "' is not free or quantified");
            c.scope.push_back(it->second);
        }
        cons.push_back(std::move(c));
    }

    detail::GameEngine engine(lib.dom, std::move(quants), std::move(cons));
    Relation out(lib.dom, nfree);
    std::vector<int> prefix(static_cast<std::size_t>(nfree));
    for (std::size_t idx = 0; idx < out.positions(); ++idx) {
        Tuple t = decode_tuple(idx, lib.dom.size(), nfree);
        for (int i = 0; i < nfree; ++i) prefix[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)];
        if (engine.eval_with_prefix(prefix)) out.set_index(idx);
    }
    return out;
}

}  // namespace qcsp
