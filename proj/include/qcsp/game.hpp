#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qcsp/detail/engine.hpp"
#include "qcsp/qcsp_instance.hpp"

namespace qcsp {

// Skolem tables: for each existential variable, its value as a function of
// the universal moves played before it, tabulated over all play prefixes.
struct StrategyEntry {
    std::string var;
    int universals_before = 0;
    std::vector<int> table;  // indexed by the radix encoding of the play prefix
};

struct Strategy {
    std::vector<StrategyEntry> entries;  // in prefix order of the existential variables
};

struct EvalResult {
    bool value = false;
    std::optional<Strategy> strategy;
};

namespace detail {

inline GameEngine engine_for(const QcspInstance& inst) {
    inst.validate();
    std::vector<Quant> quants;
    quants.reserve(inst.prefix.size());
    for (const auto& [q, v] : inst.prefix) quants.push_back(q);
    std::vector<GameEngine::Cons> cons;
    for (const auto& c : inst.constraints) {
        GameEngine::Cons gc;
        gc.rel = std::make_shared<Relation>(inst.lib.rel(c.rel));
        for (const auto& v : c.vars) gc.scope.push_back(inst.var_position(v));
        cons.push_back(std::move(gc));
    }
    return GameEngine(inst.dom, std::move(quants), std::move(cons));
}

}  // namespace detail

// Ground-truth two-player evaluation: true iff the existential player has a
// winning strategy. With want_strategy, a witnessing Skolem table is
// extracted by replaying every universal play and always picking the least
// value that keeps the game won; the chosen value depends only on the play
// prefix, so the tables are well defined.
inline EvalResult eval_qcsp(const QcspInstance& inst, bool want_strategy = false) {
    detail::GameEngine engine = detail::engine_for(inst);
    EvalResult res;
    res.value = engine.eval_with_prefix({});
    if (!want_strategy || !res.value) return res;

    int n = static_cast<int>(inst.prefix.size());
    std::vector<int> universal_pos;
    for (int i = 0; i < n; ++i)
        if (inst.prefix[static_cast<std::size_t>(i)].first == Quant::Forall) universal_pos.push_back(i);
    int u = static_cast<int>(universal_pos.size());
    std::size_t plays = unchecked_positions(inst.dom.size(), u);
    if (plays > (std::size_t(1) << 20))
        throw capacity_error("strategy extraction over " + std::to_string(plays) + " universal plays");

    Strategy strat;
    std::vector<int> entry_of(static_cast<std::size_t>(n), -1);
    int before = 0;
    for (int i = 0; i < n; ++i) {
        if (inst.prefix[static_cast<std::size_t>(i)].first == Quant::Exists) {
            StrategyEntry e;
            e.var = inst.prefix[static_cast<std::size_t>(i)].second;
            e.universals_before = before;
            e.table.assign(unchecked_positions(inst.dom.size(), before), 0);
            entry_of[static_cast<std::size_t>(i)] = static_cast<int>(strat.entries.size());
            strat.entries.push_back(std::move(e));
        } else {
            ++before;
        }
    }

    for (std::size_t p = 0; p < plays; ++p) {
        Tuple play = decode_tuple(p, inst.dom.size(), u);
        std::vector<int> prefix;
        prefix.reserve(static_cast<std::size_t>(n));
        int seen_universals = 0;
        std::size_t play_prefix_idx = 0;
        for (int i = 0; i < n; ++i) {
            if (inst.prefix[static_cast<std::size_t>(i)].first == Quant::Forall) {
                int a = play[static_cast<std::size_t>(seen_universals)];
                prefix.push_back(a);
                ++seen_universals;
                play_prefix_idx = play_prefix_idx * static_cast<std::size_t>(inst.dom.size()) +
                                  static_cast<std::size_t>(a - 1);
                continue;
            }
            StrategyEntry& e = strat.entries[static_cast<std::size_t>(entry_of[static_cast<std::size_t>(i)])];
            int& slot = e.table[play_prefix_idx];
            if (slot == 0) {
                for (int a = 1; a <= inst.dom.size(); ++a) {
                    prefix.push_back(a);
                    if (engine.eval_with_prefix(prefix)) {
                        slot = a;
                        prefix.pop_back();
                        break;
                    }
                    prefix.pop_back();
                }
                if (slot == 0) throw std::logic_error("winning game lost during strategy extraction");
            }
            prefix.push_back(slot);
        }
    }
    res.strategy = std::move(strat);
    return res;
}

// Replays a strategy against every universal play; true iff the matrix is
// satisfied each time.
inline bool replay_strategy(const QcspInstance& inst, const Strategy& strat) {
    inst.validate();
    int n = static_cast<int>(inst.prefix.size());
    int u = inst.universal_count();
    std::size_t plays = unchecked_positions(inst.dom.size(), u);
    for (std::size_t p = 0; p < plays; ++p) {
        Tuple play = decode_tuple(p, inst.dom.size(), u);
        std::map<std::string, int> value;
        int seen = 0;
        std::size_t prefix_idx = 0;
        std::size_t next_entry = 0;
        for (int i = 0; i < n; ++i) {
            const auto& [q, name] = inst.prefix[static_cast<std::size_t>(i)];
            if (q == Quant::Forall) {
                int a = play[static_cast<std::size_t>(seen++)];
                value[name] = a;
                prefix_idx = prefix_idx * static_cast<std::size_t>(inst.dom.size()) +
                             static_cast<std::size_t>(a - 1);
            } else {
                const StrategyEntry& e = strat.entries[next_entry++];
                value[name] = e.table[prefix_idx];
            }
        }
        for (const auto& c : inst.constraints) {
            Tuple t;
            for (const auto& v : c.vars) t.push_back(value.at(v));
            if (!inst.lib.rel(c.rel).contains(t)) return false;
        }
    }
    return true;
}

// Restriction sets are explicit lists of universal plays.
using PlaySet = std::vector<Tuple>;

// Truth of the relativized sentence in which the universal player is
// confined to plays extending to a member of s: satisfiability of the
// Skolem-table CSP whose variables are the existential variables indexed by
// the play prefixes occurring in s.
inline bool eval_restricted(const QcspInstance& inst, const PlaySet& s) {
    inst.validate();
    int u = inst.universal_count();
    for (const auto& t : s) {
        if (static_cast<int>(t.size()) != u)
            throw std::invalid_argument("restriction tuple length != number of universal variables");
        if (!tuple_in_range(t, inst.dom.size()))
            throw std::invalid_argument("restriction tuple entry out of domain");
    }
    if (s.empty()) return true;

    int n = static_cast<int>(inst.prefix.size());
    // map (existential position, play prefix) -> CSP variable
    std::map<std::pair<int, Tuple>, int> var_of;
    CspInstance csp;
    csp.dom = inst.dom;
    auto var_id = [&](int pos, const Tuple& prefix) {
        auto key = std::make_pair(pos, prefix);
        auto it = var_of.find(key);
        if (it != var_of.end()) return it->second;
        int id = csp.nvars++;
        var_of.emplace(key, id);
        return id;
    };

    for (const auto& play : s) {
        std::map<std::string, std::pair<bool, int>> binding;  // name -> (is_const, value or var)
        int seen = 0;
        Tuple prefix;
        for (int i = 0; i < n; ++i) {
            const auto& [q, name] = inst.prefix[static_cast<std::size_t>(i)];
            if (q == Quant::Forall) {
                int a = play[static_cast<std::size_t>(seen++)];
                prefix.push_back(a);
                binding[name] = {true, a};
            } else {
                binding[name] = {false, var_id(i, prefix)};
            }
        }
        for (const auto& c : inst.constraints) {
            CspConstraint cc;
            cc.rel = std::make_shared<Relation>(inst.lib.rel(c.rel));
            for (std::size_t k = 0; k < c.vars.size(); ++k) {
                auto [is_const, v] = binding.at(c.vars[k]);
                if (is_const)
                    cc.pins.emplace_back(static_cast<int>(k) + 1, v);
                else
                    cc.scope.push_back(v);
            }
            csp.cons.push_back(std::move(cc));
        }
    }
    return solve_csp(csp).has_value();
}

// All tuples of A^n with at most k switches (adjacent unequal pairs).
inline PlaySet switch_bounded_set(int n, int k, const Domain& dom) {
    if (n < 1) throw std::invalid_argument("switch_bounded_set: n must be >= 1");
    if (k < 0) throw std::invalid_argument("switch_bounded_set: k must be >= 0");
    PlaySet out;
    Tuple cur(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int pos, int switches) -> void {
        if (pos == n) {
            out.push_back(cur);
            return;
        }
        for (int a = 1; a <= dom.size(); ++a) {
            int s = switches;
            if (pos > 0 && cur[static_cast<std::size_t>(pos - 1)] != a) ++s;
            if (s > k) continue;
            cur[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, s);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Diagnostic only: grows a play set in lexicographic order until the
// relativized sentence goes false, never claiming minimality. Returns the
// set reached (all plays, if the instance is true).
inline PlaySet greedy_losing_set(const QcspInstance& inst) {
    int u = inst.universal_count();
    std::size_t plays = unchecked_positions(inst.dom.size(), u);
    if (plays > (std::size_t(1) << 16))
        throw capacity_error("greedy restriction search over " + std::to_string(plays) + " plays");
    PlaySet s;
    for (std::size_t p = 0; p < plays; ++p) {
        s.push_back(decode_tuple(p, inst.dom.size(), u));
        if (!eval_restricted(inst, s)) return s;
    }
    return s;
}

}  // namespace qcsp
