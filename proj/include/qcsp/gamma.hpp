#pragma once

#include <string>
#include <vector>

#include "qcsp/formula.hpp"
#include "qcsp/operation.hpp"
#include "qcsp/param_relation.hpp"
#include "qcsp/rel_io.hpp"

namespace qcsp {

// 4-element domain {+,-,0,1} -> 1..4.
inline Domain gamma4_domain() { return Domain(4, {"+", "-", "0", "1"}); }

// 6-element domain with fixed label order 0,1,2,0',1',2' -> 1..6, so that
// emitted files are bit-exact reproducible.
inline Domain gamma6_domain() { return Domain(6, {"0", "1", "2", "0p", "1p", "2p"}); }

namespace g6 {
// Elements of the 6-element domain by label.
inline constexpr int v0 = 1, v1 = 2, v2 = 3, p0 = 4, p1 = 5, p2 = 6;
}  // namespace g6

// R0(y1,y2,x) = (y1,y2 in {+,-}) and (x = 0 -> y1 = y2); R1 likewise with 1.
// The library is {R0, R1, {+}, {-}}.
inline RelLibrary gamma4() {
    RelLibrary lib;
    lib.dom = gamma4_domain();
    const int plus = 1, minus = 2, zero = 3, one = 4;
    for (int control : {zero, one}) {
        Relation r(lib.dom, 3);
        for (int y1 : {plus, minus})
            for (int y2 : {plus, minus})
                for (int x = 1; x <= 4; ++x)
                    if (x != control || y1 == y2) r.add({y1, y2, x});
        lib.add(control == zero ? "R0" : "R1", std::move(r));
    }
    lib.add("PLUS", Relation::from_tuples(lib.dom, 1, {{plus}}));
    lib.add("MINUS", Relation::from_tuples(lib.dom, 1, {{minus}}));
    return lib;
}

// The six relations of the 6-element language. AND2 and OR2 behave as the
// boolean operations when the first two coordinates are in {0,1} and are
// free whenever one of them is not; ONEIN3 is 1IN3 on {0',1'} plus the
// all-2' tuple; DELTA0, DELTA1 and EPSILON are the implication filters
// (x=1 -> y != 1'), (x=1 -> y != 0') and (x=0 -> y != 2').
inline RelLibrary gamma6() {
    using namespace g6;
    RelLibrary lib;
    lib.dom = gamma6_domain();

    auto boolean_gate = [&](bool conj) {
        Relation r(lib.dom, 3);
        for (int a = 1; a <= 6; ++a)
            for (int b = 1; b <= 6; ++b)
                for (int c = 1; c <= 6; ++c) {
                    bool a_bool = a == v0 || a == v1;
                    bool b_bool = b == v0 || b == v1;
                    if (!a_bool || !b_bool) {
                        r.add({a, b, c});
                        continue;
                    }
                    bool av = a == v1, bv = b == v1;
                    bool cv = conj ? (av && bv) : (av || bv);
                    if (c == (cv ? v1 : v0)) r.add({a, b, c});
                }
        return r;
    };
    lib.add("AND2", boolean_gate(true));
    lib.add("OR2", boolean_gate(false));

    lib.add("ONEIN3", Relation::from_tuples(lib.dom, 3,
                                            {{p2, p2, p2}, {p1, p0, p0}, {p0, p1, p0}, {p0, p0, p1}}));

    auto filter = [&](int trigger, int banned) {
        Relation r(lib.dom, 2);
        for (int x = 1; x <= 6; ++x)
            for (int y : {p0, p1, p2})
                if (x != trigger || y != banned) r.add({x, y});
        return r;
    };
    lib.add("DELTA0", filter(v1, p1));
    lib.add("DELTA1", filter(v1, p0));
    lib.add("EPSILON", filter(v0, p2));
    return lib;
}

// The six singleton unary relations, used by the polymorphism checks only.
inline RelLibrary gamma6_constants() {
    RelLibrary lib;
    lib.dom = gamma6_domain();
    for (int a = 1; a <= 6; ++a)
        lib.add("CONST_" + lib.dom.format(a), Relation::from_tuples(lib.dom, 1, {{a}}));
    return lib;
}

// The binary operation g on the 6-element domain, cases applied top-down:
//   g(x,y) = x  if y = 1
//   g(x,y) = x  if x = y
//   g(x,y) = y  if y in {0',1'}
//   g(x,y) = x  if x in {0',1'} and y = 2'
//   g(x,y) = 2  otherwise
// The overlapping cases agree (x = y = 1 matches the first two with the
// same result), so the top-down order is safe.
inline FiniteOperation g_operation() {
    using namespace g6;
    Domain dom = gamma6_domain();
    std::vector<int> table;
    table.reserve(36);
    for (int x = 1; x <= 6; ++x)
        for (int y = 1; y <= 6; ++y) {
            int out;
            if (y == v1)
                out = x;
            else if (x == y)
                out = x;
            else if (y == p0 || y == p1)
                out = y;
            else if ((x == p0 || x == p1) && y == p2)
                out = x;
            else
                out = v2;
            table.push_back(out);
        }
    return FiniteOperation(dom, 2, std::move(table));
}

// OR of arity n+1 chained from OR2:
//   OR_{n+1}(x1..x_{n+1}, y) = exists y', OR_n(x1..x_n, y') and OR2(y', x_{n+1}, y).
inline Relation or_n(int n) {
    if (n < 2) throw std::invalid_argument("or_n: n must be >= 2");
    RelLibrary lib = gamma6();
    Relation acc = lib.rel("OR2");
    for (int k = 3; k <= n; ++k) {
        RelLibrary step;
        step.dom = lib.dom;
        step.add("PREV", acc);
        step.add("OR2", lib.rel("OR2"));
        QcFormula f;
        for (int i = 1; i <= k; ++i) f.free_vars.push_back("x" + std::to_string(i));
        f.free_vars.push_back("y");
        f.quantified = {{Quant::Exists, "yp"}};
        QcAtom prev{"PREV", {}};
        for (int i = 1; i < k; ++i) prev.vars.push_back("x" + std::to_string(i));
        prev.vars.push_back("yp");
        f.atoms.push_back(prev);
        f.atoms.push_back({"OR2", {"yp", "x" + std::to_string(k), "y"}});
        acc = eval_qc_formula(f, step);
    }
    return acc;
}

// The x-parameterized relations V0, V1 on {+,-,0,1}: the base tables of R0
// and R1 with the controlling coordinate moved into the alpha group.
inline std::pair<ParamRelation, ParamRelation> canonical_v_relations() {
    RelLibrary lib = gamma4();
    ParamSignature sig{0, 0, 1, 2};
    ParamRelation v0(project(lib.rel("R0"), {3, 1, 2}), sig);
    ParamRelation v1(project(lib.rel("R1"), {3, 1, 2}), sig);
    return {v0, v1};
}

}  // namespace qcsp
