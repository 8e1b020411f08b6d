#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcsp/formula.hpp"
#include "qcsp/induced.hpp"

namespace qcsp {

// A witness that S is a universal subset of W: one relation R' of arity
// t+s such that S(y) = forall x1..xs R'(y, x1..xs) and
// W(y) = forall x R'(y, x, ..., x).
struct UWitness {
    Relation rprime;
    Relation s;
    Relation w;
    int trailing = 0;  // s >= 1

    int t() const { return rprime.arity() - trailing; }
};

inline bool verify_universal_subset(const UWitness& wit) {
    if (wit.trailing < 1) throw std::invalid_argument("witness needs at least one trailing coordinate");
    if (wit.rprime.arity() != wit.s.arity() + wit.trailing || wit.s.arity() != wit.w.arity())
        throw std::invalid_argument("witness arities are inconsistent");
    int ds = wit.rprime.domain_size();
    int t = wit.t();
    std::size_t heads = unchecked_positions(ds, t);
    std::size_t tails = unchecked_positions(ds, wit.trailing);
    for (std::size_t hi = 0; hi < heads; ++hi) {
        Tuple head = decode_tuple(hi, ds, t);
        bool all_distinct = true;
        for (std::size_t ti = 0; ti < tails && all_distinct; ++ti) {
            Tuple full = head;
            Tuple tail = decode_tuple(ti, ds, wit.trailing);
            full.insert(full.end(), tail.begin(), tail.end());
            all_distinct = wit.rprime.contains(full);
        }
        if (all_distinct != wit.s.test_index(hi)) return false;

        bool all_equal = true;
        for (int x = 1; x <= ds && all_equal; ++x) {
            Tuple full = head;
            full.insert(full.end(), static_cast<std::size_t>(wit.trailing), x);
            all_equal = wit.rprime.contains(full);
        }
        if (all_equal != wit.w.test_index(hi)) return false;
    }
    return true;
}

// The explicit witness for the S-in-W relationship of the level-m relations
// of a source relation R:
//   Q(y0..ym, x1..xm, x, x^1..x^{|A|}) =
//     exists y_{m+1} for every a in A
//       (exists y_{m+2}..y_n  R(y0..yn, x1..xm, x, x^a, ..., x^a)).
inline UWitness s_in_w_witness(const Relation& r, int m) {
    int n = induced_levels(r);
    if (m < 0 || m > n) throw std::invalid_argument("s_in_w_witness: level out of range");
    int ds = r.domain_size();
    int t = 2 * m + 1;
    int trailing = ds + 1;
    Relation q(r.domain(), t + trailing);
    std::size_t tails = unchecked_positions(ds, n - m - 1 >= 0 ? n - m - 1 : 0);
    for (std::size_t idx = 0; idx < q.positions(); ++idx) {
        Tuple full = decode_tuple(idx, ds, q.arity());
        std::vector<int> ys(full.begin(), full.begin() + m + 1);
        std::vector<int> xs(full.begin() + m + 1, full.begin() + t);
        int x = full[static_cast<std::size_t>(t)];
        std::vector<int> xsup(full.begin() + t + 1, full.end());  // x^1..x^{|A|}
        if (m == n) {
            // degenerate: no quantified y-block, R itself decides
            std::vector<int> xfull = xs;
            if (detail::source_contains(r, n, ys, xfull, {})) q.set_index(idx);
            continue;
        }
        bool found_y1 = false;
        for (int y1 = 1; y1 <= ds && !found_y1; ++y1) {
            bool all_a = true;
            for (int a = 1; a <= ds && all_a; ++a) {
                bool found = false;
                for (std::size_t ti = 0; ti < tails && !found; ++ti) {
                    Tuple ytail = decode_tuple(ti, ds, n - m - 1);
                    std::vector<int> ys_full = ys;
                    ys_full.push_back(y1);
                    ys_full.insert(ys_full.end(), ytail.begin(), ytail.end());
                    std::vector<int> xfull = {x};
                    xfull.insert(xfull.end(), static_cast<std::size_t>(n - m - 1),
                                 xsup[static_cast<std::size_t>(a - 1)]);
                    found = detail::source_contains(r, n, ys_full, xs, xfull);
                }
                all_a = found;
            }
            found_y1 = all_a;
        }
        if (found_y1) q.set_index(idx);
    }
    return UWitness{std::move(q), s_relation(r, m), w_relation(r, m), trailing};
}

// Composition of witnesses along a conjunctive formula with existential
// variables: if every atom i comes with a witness S_i in W_i, the formula
// applied to the W's and to the S's is again witnessed, by
//   R(y, x1..xk) = exists u  (for every atom i and every map phi: [s_i] -> [k]
//                               R_i(z_i, x_phi(1)..x_phi(s_i)))
//                            and (for every atom i, W_i(z_i)),
// with k = |A|.
inline UWitness compose_witnesses(const QcFormula& formula,
                                  const std::map<std::string, UWitness>& parts) {
    if (!formula.quantified.empty())
        for (const auto& [q, v] : formula.quantified)
            if (q != Quant::Exists)
                throw std::invalid_argument("compose_witnesses: only existential quantifiers allowed");
    if (parts.empty()) throw std::invalid_argument("compose_witnesses: no parts");
    int ds = parts.begin()->second.rprime.domain_size();
    Domain dom = parts.begin()->second.rprime.domain();
    int k = ds;

    RelLibrary wlib, slib;
    wlib.dom = dom;
    slib.dom = dom;
    for (const auto& [name, wit] : parts) {
        wlib.add(name, wit.w);
        slib.add(name, wit.s);
    }
    Relation w = eval_qc_formula(formula, wlib);
    Relation s = eval_qc_formula(formula, slib);

    int t = static_cast<int>(formula.free_vars.size());
    int ell = static_cast<int>(formula.quantified.size());
    std::map<std::string, int> var_slot;
    for (int i = 0; i < t; ++i) var_slot[formula.free_vars[static_cast<std::size_t>(i)]] = i;
    for (int i = 0; i < ell; ++i) var_slot[formula.quantified[static_cast<std::size_t>(i)].second] = t + i;

    Relation rprime(dom, t + k);
    std::size_t head_count = unchecked_positions(ds, t);
    std::size_t xcount = unchecked_positions(ds, k);
    std::size_t ucount = unchecked_positions(ds, ell);
    for (std::size_t hi = 0; hi < head_count; ++hi) {
        Tuple head = decode_tuple(hi, ds, t);
        for (std::size_t xi = 0; xi < xcount; ++xi) {
            Tuple xvals = decode_tuple(xi, ds, k);
            bool exists_u = false;
            for (std::size_t ui = 0; ui < ucount && !exists_u; ++ui) {
                Tuple uvals = decode_tuple(ui, ds, ell);
                std::vector<int> slot_val(static_cast<std::size_t>(t + ell));
                for (int i = 0; i < t; ++i) slot_val[static_cast<std::size_t>(i)] = head[static_cast<std::size_t>(i)];
                for (int i = 0; i < ell; ++i) slot_val[static_cast<std::size_t>(t + i)] = uvals[static_cast<std::size_t>(i)];
                bool ok = true;
                for (const auto& atom : formula.atoms) {
                    const UWitness& part = parts.at(atom.rel);
                    Tuple zvals;
                    for (const auto& v : atom.vars) zvals.push_back(slot_val[static_cast<std::size_t>(var_slot.at(v))]);
                    // every selection of part.trailing x-variables
                    std::size_t maps = unchecked_positions(k, part.trailing);
                    for (std::size_t mi = 0; mi < maps && ok; ++mi) {
                        Tuple phi = decode_tuple(mi, k, part.trailing);
                        Tuple full = zvals;
                        for (int j = 0; j < part.trailing; ++j)
                            full.push_back(xvals[static_cast<std::size_t>(phi[static_cast<std::size_t>(j)] - 1)]);
                        ok = part.rprime.contains(full);
                    }
                    if (!ok) break;
                    Tuple wt = zvals;
                    ok = part.w.contains(wt);
                    if (!ok) break;
                }
                exists_u = ok;
            }
            if (exists_u) {
                Tuple full = head;
                full.insert(full.end(), xvals.begin(), xvals.end());
                rprime.add(full);
            }
        }
    }
    UWitness out{std::move(rprime), std::move(s), std::move(w), k};
    if (!verify_universal_subset(out))
        throw std::logic_error("compose_witnesses: composed witness failed verification");
    return out;
}

}  // namespace qcsp
