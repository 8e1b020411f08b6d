#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qcsp/game.hpp"
#include "qcsp/qcsp_instance.hpp"

namespace qcsp {

// The source relation of an induced instance has arity 2n+1 with coordinate
// layout R(y0, y1, ..., yn, x1, ..., xn).
inline int induced_levels(const Relation& r) {
    if (r.arity() % 2 == 0) throw std::invalid_argument("source relation arity must be odd (2n+1)");
    return (r.arity() - 1) / 2;
}

namespace detail {

// Membership test for R(y0..yn, x1..xm, tail...) where the trailing n-m
// x-coordinates are filled from `xtail`.
inline bool source_contains(const Relation& r, int n, const std::vector<int>& ys,
                            const std::vector<int>& xs, const std::vector<int>& xtail) {
    Tuple t;
    t.reserve(static_cast<std::size_t>(2 * n + 1));
    for (int v : ys) t.push_back(v);
    for (int v : xs) t.push_back(v);
    for (int v : xtail) t.push_back(v);
    return r.contains(t);
}

}  // namespace detail

// W-relation at level m: the set of (y0..ym, x1..xm) from which the
// existential player survives one more universal move x answered by a full
// block of existential moves, with every remaining x-coordinate equal to x.
inline Relation w_relation(const Relation& r, int m) {
    int n = induced_levels(r);
    if (m < 0 || m > n) throw std::invalid_argument("w_relation: level out of range");
    int ds = r.domain_size();
    if (m == n) return r;
    Relation out(r.domain(), 2 * m + 1);
    std::size_t tail_count = unchecked_positions(ds, n - m);
    for (std::size_t idx = 0; idx < out.positions(); ++idx) {
        Tuple head = decode_tuple(idx, ds, 2 * m + 1);
        std::vector<int> ys(head.begin(), head.begin() + m + 1);
        std::vector<int> xs(head.begin() + m + 1, head.end());
        bool all_x = true;
        for (int x = 1; x <= ds && all_x; ++x) {
            bool found = false;
            for (std::size_t ti = 0; ti < tail_count && !found; ++ti) {
                Tuple ytail = decode_tuple(ti, ds, n - m);
                std::vector<int> ys_full = ys;
                ys_full.insert(ys_full.end(), ytail.begin(), ytail.end());
                std::vector<int> xtail(static_cast<std::size_t>(n - m), x);
                found = detail::source_contains(r, n, ys_full, xs, xtail);
            }
            all_x = found;
        }
        if (all_x) out.set_index(idx);
    }
    return out;
}

// S-relation at level m: as w_relation but the universal player moves twice,
//   forall x exists y_{m+1} forall x' exists y_{m+2} ... y_n,
// with the x-part (x1..xm, x, x', ..., x').
inline Relation s_relation(const Relation& r, int m) {
    int n = induced_levels(r);
    if (m < 0 || m > n) throw std::invalid_argument("s_relation: level out of range");
    if (m >= n - 1) return w_relation(r, m);
    int ds = r.domain_size();
    Relation out(r.domain(), 2 * m + 1);
    std::size_t tail2 = unchecked_positions(ds, n - m - 1);
    for (std::size_t idx = 0; idx < out.positions(); ++idx) {
        Tuple head = decode_tuple(idx, ds, 2 * m + 1);
        std::vector<int> ys(head.begin(), head.begin() + m + 1);
        std::vector<int> xs(head.begin() + m + 1, head.end());
        bool all_x = true;
        for (int x = 1; x <= ds && all_x; ++x) {
            bool found_y1 = false;
            for (int y1 = 1; y1 <= ds && !found_y1; ++y1) {
                bool all_xp = true;
                for (int xp = 1; xp <= ds && all_xp; ++xp) {
                    bool found = false;
                    for (std::size_t ti = 0; ti < tail2 && !found; ++ti) {
                        Tuple ytail = decode_tuple(ti, ds, n - m - 1);
                        std::vector<int> ys_full = ys;
                        ys_full.push_back(y1);
                        ys_full.insert(ys_full.end(), ytail.begin(), ytail.end());
                        std::vector<int> xfull = {x};
                        xfull.insert(xfull.end(), static_cast<std::size_t>(n - m - 1), xp);
                        found = detail::source_contains(r, n, ys_full, xs, xfull);
                    }
                    all_xp = found;
                }
                found_y1 = all_xp;
            }
            all_x = found_y1;
        }
        if (all_x) out.set_index(idx);
    }
    return out;
}

// The strengthened pair at level m:
//   W~ = conjunction of the W-relations of all levels i <= m on nested prefixes,
//   S~ = the S-relation at level m plus the W-relations below it.
inline std::pair<Relation, Relation> tilde_relations(const Relation& r, int m) {
    int n = induced_levels(r);
    if (m < 0 || m > n) throw std::invalid_argument("tilde_relations: level out of range");
    int ds = r.domain_size();
    std::vector<Relation> w;
    for (int i = 0; i <= m; ++i) w.push_back(w_relation(r, i));
    Relation s = s_relation(r, m);

    auto nested_ok = [&](const Tuple& head, int upto) {
        // check W-levels 0..upto on the nested prefixes of (y0..ym, x1..xm)
        for (int i = 0; i <= upto; ++i) {
            Tuple sub;
            sub.reserve(static_cast<std::size_t>(2 * i + 1));
            for (int j = 0; j <= i; ++j) sub.push_back(head[static_cast<std::size_t>(j)]);
            for (int j = 0; j < i; ++j) sub.push_back(head[static_cast<std::size_t>(m + 1 + j)]);
            if (!w[static_cast<std::size_t>(i)].contains(sub)) return false;
        }
        return true;
    };

    Relation wt(r.domain(), 2 * m + 1);
    Relation st(r.domain(), 2 * m + 1);
    for (std::size_t idx = 0; idx < wt.positions(); ++idx) {
        Tuple head = decode_tuple(idx, ds, 2 * m + 1);
        if (nested_ok(head, m)) wt.set_index(idx);
        if (s.test_index(idx) && nested_ok(head, m - 1)) st.set_index(idx);
    }
    return {wt, st};
}

// One variable per Skolem-table entry y_m^{a1..am} and one constraint per
// tree node; the z-variables stay external parameters.
struct InducedVar {
    int level = 0;
    Tuple path;  // (a1..am)
    std::string name;
};

struct InducedConstraint {
    int level = 0;
    std::vector<int> var_path;  // variable ids of y0, y1^{a1}, ..., ym^{a1..am}
    Tuple path;
};

struct InducedInstance {
    Domain dom;
    int n = 0;
    std::shared_ptr<const Relation> source;
    std::vector<std::shared_ptr<const Relation>> s_tables;  // level -> S-relation
    std::vector<InducedVar> vars;
    std::vector<InducedConstraint> cons;

    int var_index(int level, const Tuple& path) const {
        std::size_t off = 0;
        for (int i = 0; i < level; ++i) off += unchecked_positions(dom.size(), i);
        return static_cast<int>(off + encode_tuple(path, dom.size()));
    }
};

inline std::string induced_var_name(int level, const Tuple& path) {
    std::string s = "y" + std::to_string(level);
    if (level > 0) {
        s += "_";
        for (int a : path) s += std::to_string(a);
    }
    return s;
}

inline InducedInstance build_induced(const Relation& r, int n) {
    if (induced_levels(r) != n) throw std::invalid_argument("build_induced: arity(r) != 2n+1");
    int ds = r.domain_size();
    std::size_t var_count = 0;
    for (int m = 0; m <= n; ++m) {
        var_count += unchecked_positions(ds, m);
        if (var_count > (std::size_t(1) << 20))
            throw capacity_error("induced instance with more than 2^20 variables");
    }

    InducedInstance out;
    out.dom = r.domain();
    out.n = n;
    out.source = std::make_shared<Relation>(r);
    for (int m = 0; m <= n; ++m) out.s_tables.push_back(std::make_shared<Relation>(s_relation(r, m)));

    for (int m = 0; m <= n; ++m)
        for (std::size_t pi = 0; pi < unchecked_positions(ds, m); ++pi) {
            Tuple path = decode_tuple(pi, ds, m);
            out.vars.push_back({m, path, induced_var_name(m, path)});
        }
    for (int m = 0; m <= n; ++m)
        for (std::size_t pi = 0; pi < unchecked_positions(ds, m); ++pi) {
            Tuple path = decode_tuple(pi, ds, m);
            InducedConstraint c;
            c.level = m;
            c.path = path;
            for (int i = 0; i <= m; ++i)
                c.var_path.push_back(out.var_index(i, Tuple(path.begin(), path.begin() + i)));
            out.cons.push_back(std::move(c));
        }
    return out;
}

// The instance for one concrete choice of the z-parameters: constraints
// share the S-tables, only the trailing x-coordinates get pinned to
// (z_{a1}, ..., z_{am}).
inline CspInstance materialize_induced(const InducedInstance& ind, const Tuple& z) {
    if (static_cast<int>(z.size()) != ind.dom.size())
        throw std::invalid_argument("materialize_induced: z must have length |A|");
    CspInstance csp;
    csp.dom = ind.dom;
    csp.nvars = static_cast<int>(ind.vars.size());
    for (const auto& v : ind.vars) csp.names.push_back(v.name);
    for (const auto& c : ind.cons) {
        CspConstraint cc;
        cc.rel = ind.s_tables[static_cast<std::size_t>(c.level)];
        cc.scope = c.var_path;
        for (int i = 0; i < c.level; ++i)
            cc.pins.emplace_back(c.level + 2 + i,
                                 z[static_cast<std::size_t>(c.path[static_cast<std::size_t>(i)] - 1)]);
        csp.cons.push_back(std::move(cc));
    }
    return csp;
}

// Plain (item-3 style) induced CSP over the source relation: one constraint
// per leaf path, x-part pinned to the path itself or to z-selected values.
inline CspInstance leaf_induced(const InducedInstance& ind, const Tuple* z) {
    CspInstance csp;
    csp.dom = ind.dom;
    csp.nvars = static_cast<int>(ind.vars.size());
    int ds = ind.dom.size();
    for (std::size_t pi = 0; pi < unchecked_positions(ds, ind.n); ++pi) {
        Tuple path = decode_tuple(pi, ds, ind.n);
        CspConstraint cc;
        cc.rel = ind.source;
        for (int i = 0; i <= ind.n; ++i)
            cc.scope.push_back(ind.var_index(i, Tuple(path.begin(), path.begin() + i)));
        for (int i = 0; i < ind.n; ++i) {
            int a = path[static_cast<std::size_t>(i)];
            int value = z ? (*z)[static_cast<std::size_t>(a - 1)] : a;
            cc.pins.emplace_back(ind.n + 2 + i, value);
        }
        csp.cons.push_back(std::move(cc));
    }
    return csp;
}

struct EquivalenceReport {
    bool item1 = false;  // game truth
    bool item3 = false;  // plain induced CSP
    bool item5 = false;  // z-parameterized leaf instance, all z
    bool item6 = false;  // S-strengthened z-parameterized instance, all z
    bool agree = false;
};

// Evaluates four of the equivalent formulations independently and reports
// whether they agree (they must; any disagreement is an implementation bug).
inline EquivalenceReport check_equivalence_lemma(const Relation& r, int n) {
    EquivalenceReport rep;
    int ds = r.domain_size();

    // item 1: exists y0 forall x1 exists y1 ... forall xn exists yn R(...)
    QcspInstance game;
    game.dom = r.domain();
    game.lib.dom = r.domain();
    game.lib.add("R", r);
    QcspConstraint c;
    c.rel = "R";
    game.prefix.emplace_back(Quant::Exists, "y0");
    c.vars.push_back("y0");
    std::vector<std::string> xs;
    for (int i = 1; i <= n; ++i) {
        game.prefix.emplace_back(Quant::Forall, "x" + std::to_string(i));
        game.prefix.emplace_back(Quant::Exists, "y" + std::to_string(i));
        c.vars.push_back("y" + std::to_string(i));
        xs.push_back("x" + std::to_string(i));
    }
    for (const auto& x : xs) c.vars.push_back(x);
    game.constraints.push_back(std::move(c));
    rep.item1 = eval_qcsp(game).value;

    InducedInstance ind = build_induced(r, n);
    rep.item3 = solve_csp(leaf_induced(ind, nullptr)).has_value();

    rep.item5 = true;
    rep.item6 = true;
    for (std::size_t zi = 0; zi < unchecked_positions(ds, ds); ++zi) {
        Tuple z = decode_tuple(zi, ds, ds);
        if (rep.item5 && !solve_csp(leaf_induced(ind, &z)).has_value()) rep.item5 = false;
        if (rep.item6 && !solve_csp(materialize_induced(ind, z)).has_value()) rep.item6 = false;
        if (!rep.item5 && !rep.item6) break;
    }
    rep.agree = (rep.item1 == rep.item3 && rep.item3 == rep.item5 && rep.item5 == rep.item6);
    return rep;
}

// A z-parameterized reduction: per variable, a family of unary relations
// indexed by the z-tuple.
struct PReduction {
    std::vector<std::string> var_names;
    std::vector<std::vector<Mask>> domains;  // [var][z index]
    std::vector<std::size_t> failed_z;       // z indices whose reduction wiped out
    bool ok = false;
};

// Runs arc consistency independently for every z; records the maximal
// 1-consistent reduction per z and the set of z where a domain emptied.
inline PReduction param_arc_consistency(const InducedInstance& ind) {
    PReduction out;
    int ds = ind.dom.size();
    std::size_t zn = unchecked_positions(ds, ds);
    for (const auto& v : ind.vars) out.var_names.push_back(v.name);
    out.domains.assign(ind.vars.size(), std::vector<Mask>(zn, 0));
    for (std::size_t zi = 0; zi < zn; ++zi) {
        Tuple z = decode_tuple(zi, ds, ds);
        ArcResult ar = arc_consistency(materialize_induced(ind, z));
        if (!ar.ok) {
            out.failed_z.push_back(zi);
            continue;
        }
        for (std::size_t v = 0; v < ind.vars.size(); ++v) out.domains[v][zi] = ar.domains[v];
    }
    out.ok = out.failed_z.empty();
    return out;
}

}  // namespace qcsp
