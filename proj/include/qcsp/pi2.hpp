#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/game.hpp"
#include "qcsp/gamma.hpp"

namespace qcsp {

// True iff every constraint relation of the instance equals one of the six
// relations of the 6-element language or a derived OR chain (compared by
// table, not by name). The chains count as part of the language since they
// are q-defined from OR2, so the binary operation g preserves them too.
inline bool is_gamma6_instance(const QcspInstance& inst) {
    if (inst.dom.size() != 6) return false;
    static const RelLibrary g = gamma6();
    static std::map<int, Relation> or_cache;
    static std::mutex or_mutex;
    std::set<std::string> used;
    for (const auto& c : inst.constraints) used.insert(c.rel);
    for (const auto& name : used) {
        const Relation& r = inst.lib.rel(name);
        bool match = false;
        for (const auto& [gn, gr] : g.rels)
            if (r == gr) {
                match = true;
                break;
            }
        if (!match && r.arity() >= 4) {
            std::lock_guard<std::mutex> lock(or_mutex);
            auto it = or_cache.find(r.arity());
            if (it == or_cache.end()) it = or_cache.emplace(r.arity(), or_n(r.arity() - 1)).first;
            match = (r == it->second);
        }
        if (!match) return false;
    }
    return true;
}

struct MoveResult {
    bool has_move = false;
    int value = 0;        // chosen value, when has_move
    Mask candidates = 0;  // the set D of values for which the pinned instance is satisfiable
};

namespace detail {

// Shared structure for repeated move computations on one instance.
struct Pi2Context {
    const QcspInstance* inst = nullptr;
    CspInstance csp;  // unrestricted skeleton, one variable per prefix position
};

inline Pi2Context make_pi2_context(const QcspInstance& inst) {
    Pi2Context ctx;
    ctx.inst = &inst;
    ctx.csp.dom = inst.dom;
    ctx.csp.nvars = static_cast<int>(inst.prefix.size());
    for (const auto& c : inst.constraints) {
        CspConstraint cc;
        cc.rel = std::make_shared<Relation>(inst.lib.rel(c.rel));
        for (const auto& v : c.vars) cc.scope.push_back(inst.var_position(v));
        ctx.csp.cons.push_back(std::move(cc));
    }
    return ctx;
}

inline MoveResult optimal_move_in(const Pi2Context& ctx, CspSolver& solver,
                                  const std::vector<int>& partial) {
    const QcspInstance& inst = *ctx.inst;
    int n = static_cast<int>(inst.prefix.size());
    int pos = static_cast<int>(partial.size());
    if (pos >= n || inst.prefix[static_cast<std::size_t>(pos)].first != Quant::Exists)
        throw std::invalid_argument("optimal_move: partial must end right before an existential variable");
    for (int v : partial)
        if (v < 1 || v > 6) throw std::invalid_argument("optimal_move: partial value out of domain");

    std::vector<Mask> base(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i < pos)
            base[static_cast<std::size_t>(i)] = Mask(1) << (partial[static_cast<std::size_t>(i)] - 1);
        else if (i > pos && inst.prefix[static_cast<std::size_t>(i)].first == Quant::Forall)
            base[static_cast<std::size_t>(i)] = Mask(1) << (g6::v1 - 1);  // later universals -> 1
        else
            base[static_cast<std::size_t>(i)] = full_mask(6);
    }

    MoveResult res;
    for (int d = 1; d <= 6; ++d) {
        std::vector<Mask> domains = base;
        domains[static_cast<std::size_t>(pos)] = Mask(1) << (d - 1);
        int wiped = -1;
        if (solver.propagate(domains, -1, wiped) && solver.search(domains))
            res.candidates |= Mask(1) << (d - 1);
    }

    int count = __builtin_popcountll(res.candidates);
    if (count == 0) return res;
    res.has_move = true;
    if (count == 1) {
        res.value = __builtin_ctzll(res.candidates) + 1;
        return res;
    }
    for (int c : {g6::v2, g6::p0, g6::p1})
        if (res.candidates >> (c - 1) & 1) {
            res.value = c;
            return res;
        }
    throw std::logic_error("optimal_move: candidate set misses {2,0',1'} with several options");
}

}  // namespace detail

// Optimal move for the existential player on a 6-element-language instance,
// computed with the CSP solver as the NP oracle: the partial play pins the
// first partial.size() prefix variables, every later universal variable is
// sent to 1, and the move variable is tried on each value. If several values
// work, some value in {2,0',1'} is guaranteed and the least in the order
// 2 < 0' < 1' is returned for reproducibility.
inline MoveResult optimal_move(const QcspInstance& inst, const std::vector<int>& partial) {
    inst.validate();
    if (!is_gamma6_instance(inst))
        throw std::invalid_argument("optimal_move: instance is not over the 6-element language");
    detail::Pi2Context ctx = detail::make_pi2_context(inst);
    detail::CspSolver solver(ctx.csp);
    return detail::optimal_move_in(ctx, solver, partial);
}

struct Pi2Result {
    bool value = false;
    Tuple losing_play;  // first universal play that falsifies the matrix, when false
};

// Decides a 6-element-language instance by enumerating all universal plays
// in lexicographic order and answering each with optimal moves; true iff
// every play ends with the quantifier-free part satisfied.
inline Pi2Result solve_pi2_style(const QcspInstance& inst) {
    inst.validate();
    if (!is_gamma6_instance(inst))
        throw std::invalid_argument("solve_pi2_style: instance is not over the 6-element language");
    int n = static_cast<int>(inst.prefix.size());
    int u = inst.universal_count();
    std::size_t plays = unchecked_positions(6, u);
    if (plays > (std::size_t(1) << 22))
        throw capacity_error("pi2 enumeration over " + std::to_string(plays) + " universal plays");

    detail::Pi2Context ctx = detail::make_pi2_context(inst);
    detail::CspSolver solver(ctx.csp);

    Pi2Result out;
    for (std::size_t p = 0; p < plays; ++p) {
        Tuple play = decode_tuple(p, 6, u);
        std::vector<int> partial;
        int seen = 0;
        bool dead = false;
        for (int i = 0; i < n && !dead; ++i) {
            if (inst.prefix[static_cast<std::size_t>(i)].first == Quant::Forall) {
                partial.push_back(play[static_cast<std::size_t>(seen++)]);
            } else {
                MoveResult mv = detail::optimal_move_in(ctx, solver, partial);
                if (!mv.has_move) {
                    dead = true;
                    break;
                }
                partial.push_back(mv.value);
            }
        }
        if (!dead) {
            for (const auto& c : inst.constraints) {
                Tuple t;
                for (const auto& v : c.vars)
                    t.push_back(partial[static_cast<std::size_t>(inst.var_position(v))]);
                if (!inst.lib.rel(c.rel).contains(t)) {
                    dead = true;
                    break;
                }
            }
        }
        if (dead) {
            out.losing_play = play;
            return out;
        }
    }
    out.value = true;
    return out;
}

}  // namespace qcsp
