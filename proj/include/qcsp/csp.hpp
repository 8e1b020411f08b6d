#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/relation.hpp"

namespace qcsp {

// A constraint is a relation applied to a scope of variables; coordinates may
// additionally be pinned to fixed values, which lets callers reuse one big
// shared table instead of materializing restrictions of it.
struct CspConstraint {
    std::shared_ptr<const Relation> rel;
    std::vector<int> scope;                    // variable ids, one per unpinned coordinate
    std::vector<std::pair<int, int>> pins;     // (1-based coordinate, value)
};

struct CspInstance {
    Domain dom;
    int nvars = 0;
    std::vector<std::string> names;            // optional display names
    std::vector<CspConstraint> cons;
    std::vector<Mask> restrictions;            // optional initial domains; empty = all full

    Mask initial_domain(int v) const {
        if (restrictions.empty()) return full_mask(dom.size());
        return restrictions[static_cast<std::size_t>(v)];
    }

    void validate() const {
        for (const auto& c : cons) {
            if (!c.rel) throw std::invalid_argument("constraint without relation");
            if (c.rel->domain_size() != dom.size())
                throw std::invalid_argument("constraint domain mismatch");
            if (static_cast<int>(c.scope.size() + c.pins.size()) != c.rel->arity())
                throw std::invalid_argument("constraint scope does not match relation arity");
            std::vector<bool> pinned(static_cast<std::size_t>(c.rel->arity()) + 1, false);
            for (auto [coord, val] : c.pins) {
                if (coord < 1 || coord > c.rel->arity()) throw std::invalid_argument("pin out of range");
                if (pinned[static_cast<std::size_t>(coord)]) throw std::invalid_argument("duplicate pin");
                pinned[static_cast<std::size_t>(coord)] = true;
                if (val < 1 || val > dom.size()) throw std::invalid_argument("pin value out of range");
            }
            for (int v : c.scope)
                if (v < 0 || v >= nvars) throw std::invalid_argument("scope variable out of range");
        }
        if (!restrictions.empty() && static_cast<int>(restrictions.size()) != nvars)
            throw std::invalid_argument("restriction count mismatch");
    }
};

namespace detail {

// Scope coordinates of a constraint in table order: pinned ones carry the
// fixed value, open ones the variable id.
struct ConsView {
    const Relation* rel;
    std::vector<int> coord_var;    // per coordinate: variable id or -1 if pinned
    std::vector<int> coord_fix;    // per coordinate: pinned value or 0
    std::shared_ptr<const std::vector<Tuple>> rows;  // decoded tuple list, in table order
    bool has_open = false;
};

inline ConsView make_view(const CspConstraint& c) {
    ConsView v;
    v.rel = c.rel.get();
    int r = c.rel->arity();
    v.coord_var.assign(static_cast<std::size_t>(r), -1);
    v.coord_fix.assign(static_cast<std::size_t>(r), 0);
    for (auto [coord, val] : c.pins) v.coord_fix[static_cast<std::size_t>(coord - 1)] = val;
    std::size_t next = 0;
    for (int i = 0; i < r; ++i)
        if (!v.coord_fix[static_cast<std::size_t>(i)]) {
            v.coord_var[static_cast<std::size_t>(i)] = c.scope[next++];
            v.has_open = true;
        }
    v.rows = c.rel->rows();
    return v;
}

// One pass over the rows: for every open coordinate, the set of values that
// appear in some row compatible with the pins and the current domains.
inline bool constraint_supports(const ConsView& view, const std::vector<Mask>& dom_masks,
                                std::vector<Mask>& out_support) {
    int r = view.rel->arity();
    out_support.assign(static_cast<std::size_t>(r), 0);
    bool any = false;
    for (const Tuple& t : *view.rows) {
        bool ok = true;
        for (int i = 0; i < r && ok; ++i) {
            int fix = view.coord_fix[static_cast<std::size_t>(i)];
            int val = t[static_cast<std::size_t>(i)];
            if (fix)
                ok = (val == fix);
            else
                ok = (dom_masks[static_cast<std::size_t>(view.coord_var[static_cast<std::size_t>(i)])] >>
                          (val - 1) &
                      1);
        }
        if (!ok) continue;
        any = true;
        for (int i = 0; i < r; ++i)
            if (!view.coord_fix[static_cast<std::size_t>(i)])
                out_support[static_cast<std::size_t>(i)] |= Mask(1) << (t[static_cast<std::size_t>(i)] - 1);
    }
    return any;
}

// Values of a variable that no constraint can tell apart: the common
// refinement of the column classes of every constraint coordinate where the
// variable occurs. Branching only on class representatives is sound because
// swapping equivalent values in any solution yields a solution.
inline std::vector<int> value_class_ids(const Domain& dom, const std::vector<ConsView>& views, int var) {
    int ds = dom.size();
    std::vector<int> cls(static_cast<std::size_t>(ds), 0);
    for (const auto& view : views) {
        int r = view.rel->arity();
        std::shared_ptr<const std::vector<std::vector<int>>> cc;
        for (int i = 0; i < r; ++i) {
            if (view.coord_var[static_cast<std::size_t>(i)] != var) continue;
            if (!cc) cc = view.rel->column_classes();
            const std::vector<int>& col = (*cc)[static_cast<std::size_t>(i)];
            // refine, renumbering classes by first occurrence
            std::vector<int> remap(static_cast<std::size_t>(ds) * static_cast<std::size_t>(ds), -1);
            std::vector<int> next_cls(static_cast<std::size_t>(ds));
            int k = 0;
            for (int a = 0; a < ds; ++a) {
                std::size_t key = static_cast<std::size_t>(cls[static_cast<std::size_t>(a)]) *
                                      static_cast<std::size_t>(ds) +
                                  static_cast<std::size_t>(col[static_cast<std::size_t>(a)]);
                if (remap[key] < 0) remap[key] = k++;
                next_cls[static_cast<std::size_t>(a)] = remap[key];
            }
            cls = std::move(next_cls);
        }
    }
    return cls;
}

class CspSolver {
public:
    explicit CspSolver(const CspInstance& inst) : inst_(inst) {
        inst.validate();
        views_.reserve(inst.cons.size());
        for (const auto& c : inst.cons) views_.push_back(make_view(c));
        var_cons_.resize(static_cast<std::size_t>(inst.nvars));
        for (std::size_t ci = 0; ci < inst.cons.size(); ++ci)
            for (int v : inst.cons[ci].scope)
                var_cons_[static_cast<std::size_t>(v)].push_back(static_cast<int>(ci));
    }

    // Largest 1-consistent reduction below `domains`, in place. Constraints
    // to recheck initially: all (seed_var < 0) or those on seed_var.
    bool propagate(std::vector<Mask>& domains, int seed_var, int& wiped_var) {
        std::deque<int> queue;
        std::vector<bool> queued(views_.size(), false);
        auto push = [&](int ci) {
            if (!queued[static_cast<std::size_t>(ci)]) {
                queued[static_cast<std::size_t>(ci)] = true;
                queue.push_back(ci);
            }
        };
        if (seed_var < 0)
            for (std::size_t ci = 0; ci < views_.size(); ++ci) push(static_cast<int>(ci));
        else
            for (int ci : var_cons_[static_cast<std::size_t>(seed_var)]) push(ci);

        std::vector<Mask> support;
        while (!queue.empty()) {
            int ci = queue.front();
            queue.pop_front();
            queued[static_cast<std::size_t>(ci)] = false;
            const auto& view = views_[static_cast<std::size_t>(ci)];
            bool any = constraint_supports(view, domains, support);
            int r = view.rel->arity();
            if (!any && !view.has_open) {
                // no open coordinate to wipe: the constraint itself fails
                wiped_var = -1;
                return false;
            }
            for (int i = 0; i < r; ++i) {
                int var = view.coord_var[static_cast<std::size_t>(i)];
                if (var < 0) continue;
                Mask cur = domains[static_cast<std::size_t>(var)];
                Mask nw = any ? (cur & support[static_cast<std::size_t>(i)]) : 0;
                if (nw == cur) continue;
                domains[static_cast<std::size_t>(var)] = nw;
                if (!nw) {
                    wiped_var = var;
                    return false;
                }
                for (int cj : var_cons_[static_cast<std::size_t>(var)]) push(cj);
            }
        }
        return true;
    }

    bool search(std::vector<Mask>& domains) {
        ensure_classes();
        int best = -1;
        int best_size = 1 << 30;
        for (int v = 0; v < inst_.nvars; ++v) {
            int sz = __builtin_popcountll(domains[static_cast<std::size_t>(v)]);
            if (sz > 1 && sz < best_size) {
                best = v;
                best_size = sz;
            }
        }
        if (best < 0) return true;

        Mask dom = domains[static_cast<std::size_t>(best)];
        std::vector<bool> tried(static_cast<std::size_t>(inst_.dom.size()), false);
        for (int a = 1; a <= inst_.dom.size(); ++a) {
            if (!(dom >> (a - 1) & 1)) continue;
            int cid = classes_[static_cast<std::size_t>(best)][static_cast<std::size_t>(a - 1)];
            if (tried[static_cast<std::size_t>(cid)]) continue;
            tried[static_cast<std::size_t>(cid)] = true;

            std::vector<Mask> next = domains;
            next[static_cast<std::size_t>(best)] = Mask(1) << (a - 1);
            int wiped = -1;
            if (!propagate(next, best, wiped)) continue;
            if (search(next)) {
                domains = next;
                return true;
            }
        }
        return false;
    }

private:
    void ensure_classes() {
        if (!classes_.empty()) return;
        classes_.resize(static_cast<std::size_t>(inst_.nvars));
        for (int v = 0; v < inst_.nvars; ++v)
            classes_[static_cast<std::size_t>(v)] = value_class_ids(inst_.dom, views_, v);
    }

    const CspInstance& inst_;
    std::vector<ConsView> views_;
    std::vector<std::vector<int>> var_cons_;
    std::vector<std::vector<int>> classes_;
};

}  // namespace detail

struct ArcResult {
    bool ok = false;
    std::vector<Mask> domains;
    int wiped_var = -1;  // a variable whose domain emptied, when !ok (-1: empty constraint)
};

// Largest 1-consistent reduction below the initial domains; fails exactly
// when some domain (or an arity-0 constraint) empties.
inline ArcResult arc_consistency(const CspInstance& inst) {
    detail::CspSolver solver(inst);
    ArcResult res;
    res.domains.resize(static_cast<std::size_t>(inst.nvars));
    for (int v = 0; v < inst.nvars; ++v) {
        res.domains[static_cast<std::size_t>(v)] = inst.initial_domain(v);
        if (!res.domains[static_cast<std::size_t>(v)]) {
            res.wiped_var = v;
            return res;
        }
    }
    res.ok = solver.propagate(res.domains, -1, res.wiped_var);
    if (!res.ok) res.domains.clear();
    return res;
}

// Backtracking search with arc-consistency propagation at every node.
// Variable and value orders are fixed, so the result is deterministic.
inline std::optional<std::vector<int>> solve_csp(const CspInstance& inst) {
    detail::CspSolver solver(inst);
    std::vector<Mask> domains(static_cast<std::size_t>(inst.nvars));
    for (int v = 0; v < inst.nvars; ++v) {
        domains[static_cast<std::size_t>(v)] = inst.initial_domain(v);
        if (!domains[static_cast<std::size_t>(v)]) return std::nullopt;
    }
    int wiped = -1;
    if (!solver.propagate(domains, -1, wiped)) return std::nullopt;
    if (!solver.search(domains)) return std::nullopt;
    std::vector<int> assignment(static_cast<std::size_t>(inst.nvars));
    for (int v = 0; v < inst.nvars; ++v)
        assignment[static_cast<std::size_t>(v)] =
            static_cast<int>(__builtin_ctzll(domains[static_cast<std::size_t>(v)])) + 1;
    return assignment;
}

}  // namespace qcsp
