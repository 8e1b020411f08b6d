#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcsp/csp.hpp"
#include "qcsp/relation.hpp"

namespace qcsp {

enum class Quant { Exists, Forall };

namespace detail {

// Two-player evaluation of a prenex conjunctive sentence over a finite
// domain: variables in quantifier order, matrix a conjunction of relation
// atoms. The recursion checks each constraint as soon as its scope is fully
// assigned, memoizes on (position, values of the variables that still matter)
// and, once only existential variables remain, hands the residue to the CSP
// solver. Branching is restricted to one representative per class of values
// the constraints cannot tell apart.
class GameEngine {
public:
    struct Cons {
        std::shared_ptr<const Relation> rel;
        std::vector<int> scope;  // variable indices in quantifier order
    };

    GameEngine(Domain dom, std::vector<Quant> quants, std::vector<Cons> cons)
        : dom_(std::move(dom)), quants_(std::move(quants)), cons_(std::move(cons)) {
        n_ = static_cast<int>(quants_.size());
        for (const auto& c : cons_) {
            if (!c.rel) throw std::invalid_argument("engine: constraint without relation");
            if (static_cast<int>(c.scope.size()) != c.rel->arity())
                throw std::invalid_argument("engine: scope does not match arity");
            for (int v : c.scope)
                if (v < 0 || v >= n_) throw std::invalid_argument("engine: scope variable out of range");
        }
        assign_.assign(static_cast<std::size_t>(n_), 0);
        build_last_pos();
        build_live_sets();
        build_classes();
        build_tail();
    }

    const Domain& domain() const { return dom_; }
    int size() const { return n_; }
    Quant quant(int pos) const { return quants_[static_cast<std::size_t>(pos)]; }

    // Truth of the sentence with the first prefix.size() variables pinned.
    bool eval_with_prefix(const std::vector<int>& prefix) {
        if (static_cast<int>(prefix.size()) > n_)
            throw std::invalid_argument("engine: prefix longer than variable list");
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            assign_[i] = prefix[i];
            if (!check_done_at(static_cast<int>(i))) return false;
        }
        return run(static_cast<int>(prefix.size()));
    }

    // Class representative used for a value at a given variable.
    int representative(int pos, int value) const {
        const auto& cls = classes_[static_cast<std::size_t>(pos)];
        int cid = cls[static_cast<std::size_t>(value - 1)];
        for (int a = 1; a <= dom_.size(); ++a)
            if (cls[static_cast<std::size_t>(a - 1)] == cid) return a;
        return value;
    }

private:
    void build_last_pos() {
        last_pos_.assign(cons_.size(), -1);
        cons_at_.assign(static_cast<std::size_t>(n_) + 1, {});
        for (std::size_t ci = 0; ci < cons_.size(); ++ci) {
            int last = -1;
            for (int v : cons_[ci].scope) last = std::max(last, v);
            last_pos_[ci] = last;
            if (last < 0) {
                // variable-free atom: decide it now
                if (cons_[ci].rel->empty()) trivially_false_ = true;
            } else {
                cons_at_[static_cast<std::size_t>(last)].push_back(static_cast<int>(ci));
            }
        }
    }

    void build_live_sets() {
        live_.assign(static_cast<std::size_t>(n_) + 1, {});
        for (int pos = 1; pos <= n_; ++pos) {
            std::vector<bool> alive(static_cast<std::size_t>(n_), false);
            for (std::size_t ci = 0; ci < cons_.size(); ++ci) {
                if (last_pos_[ci] < pos) continue;
                for (int v : cons_[ci].scope)
                    if (v < pos) alive[static_cast<std::size_t>(v)] = true;
            }
            for (int v = 0; v < pos; ++v)
                if (alive[static_cast<std::size_t>(v)]) live_[static_cast<std::size_t>(pos)].push_back(v);
        }
    }

    void build_classes() {
        std::vector<ConsView> views;
        views.reserve(cons_.size());
        for (const auto& c : cons_) {
            CspConstraint cc{c.rel, c.scope, {}};
            views.push_back(make_view(cc));
        }
        classes_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v)
            classes_[static_cast<std::size_t>(v)] = value_class_ids(dom_, views, v);
        reps_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            std::vector<bool> seen(static_cast<std::size_t>(dom_.size()), false);
            for (int a = 1; a <= dom_.size(); ++a) {
                int cid = classes_[static_cast<std::size_t>(v)][static_cast<std::size_t>(a - 1)];
                if (!seen[static_cast<std::size_t>(cid)]) {
                    seen[static_cast<std::size_t>(cid)] = true;
                    reps_[static_cast<std::size_t>(v)].push_back(a);
                }
            }
        }
    }

    void build_tail() {
        tail_start_ = n_;
        while (tail_start_ > 0 && quants_[static_cast<std::size_t>(tail_start_ - 1)] == Quant::Exists)
            --tail_start_;
    }

    bool check_done_at(int pos) {
        for (int ci : cons_at_[static_cast<std::size_t>(pos)]) {
            const auto& c = cons_[static_cast<std::size_t>(ci)];
            Tuple t(c.scope.size());
            for (std::size_t i = 0; i < c.scope.size(); ++i)
                t[i] = assign_[static_cast<std::size_t>(c.scope[i])];
            if (!c.rel->contains(t)) return false;
        }
        return true;
    }

    bool solve_tail(int pos) {
        if (pos >= n_) return true;
        CspInstance inst;
        inst.dom = dom_;
        inst.nvars = n_ - pos;
        for (std::size_t ci = 0; ci < cons_.size(); ++ci) {
            if (last_pos_[ci] < pos) continue;
            const auto& c = cons_[ci];
            CspConstraint cc;
            cc.rel = c.rel;
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                int v = c.scope[i];
                if (v < pos)
                    cc.pins.emplace_back(static_cast<int>(i) + 1, assign_[static_cast<std::size_t>(v)]);
                else
                    cc.scope.push_back(v - pos);
            }
            inst.cons.push_back(std::move(cc));
        }
        return solve_csp(inst).has_value();
    }

    bool run(int pos) {
        if (trivially_false_) return false;
        if (pos >= n_) return true;

        std::string key = memo_key(pos);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() > (std::size_t(1) << 24))
            throw capacity_error("game memo table exceeded 2^24 entries");

        bool result;
        if (pos >= tail_start_) {
            result = solve_tail(pos);
        } else {
            bool is_forall = quants_[static_cast<std::size_t>(pos)] == Quant::Forall;
            result = is_forall;
            for (int a : reps_[static_cast<std::size_t>(pos)]) {
                assign_[static_cast<std::size_t>(pos)] = a;
                bool value = check_done_at(pos) && run(pos + 1);
                if (is_forall && !value) {
                    result = false;
                    break;
                }
                if (!is_forall && value) {
                    result = true;
                    break;
                }
            }
        }
        memo_.emplace(std::move(key), result);
        return result;
    }

    std::string memo_key(int pos) const {
        const auto& live = live_[static_cast<std::size_t>(pos)];
        std::string key;
        key.reserve(live.size() + 2);
        key.push_back(static_cast<char>(pos & 0xff));
        key.push_back(static_cast<char>((pos >> 8) & 0xff));
        for (int v : live) key.push_back(static_cast<char>(assign_[static_cast<std::size_t>(v)]));
        return key;
    }

    Domain dom_;
    std::vector<Quant> quants_;
    std::vector<Cons> cons_;
    int n_ = 0;
    bool trivially_false_ = false;
    std::vector<int> assign_;
    std::vector<int> last_pos_;
    std::vector<std::vector<int>> cons_at_;
    std::vector<std::vector<int>> live_;
    std::vector<std::vector<int>> classes_;
    std::vector<std::vector<int>> reps_;
    int tail_start_ = 0;
    std::unordered_map<std::string, bool> memo_;
};

}  // namespace detail
}  // namespace qcsp
