#pragma once

#include <string>

#include "qcsp/gamma.hpp"
#include "qcsp/qbool.hpp"
#include "qcsp/qcsp_instance.hpp"

namespace qcsp {

// The 6-element encoding of a Pi2 ONE-IN-THREE instance
//   forall x1..xm exists x_{m+1}..x_n  /\ ONEIN3(...)
// as the sentence
//   forall x_i^0 x_i^1 (i<=m)  exists x_1..x_n z_1..z_m z
//     /\_i<=m  DELTA0(x_i^0, x_i) and DELTA1(x_i^1, x_i)
//     /\_i<=m  AND2(x_i^0, x_i^1, z_i)
//     OR_m(z_1..z_m, z)
//     /\_i<=n  EPSILON(z, x_i)
//     /\_l     ONEIN3(x_il, x_jl, x_kl).
// Each z_i records whether the universal pair (x_i^0, x_i^1) was played
// dishonestly; the OR runs over exactly these m bits. Letting the OR range
// over unconstrained extra variables would hand the existential player a
// free escape (set one of them to 1, freeing EPSILON and allowing the
// all-2' assignment) and break the equivalence with the source instance.
inline QcspInstance encode_pi2_1in3(const OneInThreeInstance& f) {
    f.validate();
    int m = f.universals;
    int n = f.nvars;
    if (m < 2)
        throw std::invalid_argument("encode_pi2_1in3: need at least two universal variables (pad with dummies)");

    QcspInstance inst;
    inst.dom = gamma6_domain();
    inst.lib = gamma6();
    std::string or_name = "OR" + std::to_string(m);
    if (m == 2)
        or_name = "OR2";
    else
        inst.lib.add(or_name, or_n(m));

    auto xv = [](int i) { return "x" + std::to_string(i); };
    auto zv = [](int i) { return "z" + std::to_string(i); };

    for (int i = 1; i <= m; ++i) {
        inst.prefix.emplace_back(Quant::Forall, xv(i) + "_0");
        inst.prefix.emplace_back(Quant::Forall, xv(i) + "_1");
    }
    for (int i = 1; i <= n; ++i) inst.prefix.emplace_back(Quant::Exists, xv(i));
    for (int i = 1; i <= m; ++i) inst.prefix.emplace_back(Quant::Exists, zv(i));
    inst.prefix.emplace_back(Quant::Exists, "z");

    for (int i = 1; i <= m; ++i) {
        inst.constraints.push_back({"DELTA0", {xv(i) + "_0", xv(i)}});
        inst.constraints.push_back({"DELTA1", {xv(i) + "_1", xv(i)}});
    }
    for (int i = 1; i <= m; ++i) inst.constraints.push_back({"AND2", {xv(i) + "_0", xv(i) + "_1", zv(i)}});
    QcspConstraint orc;
    orc.rel = or_name;
    for (int i = 1; i <= m; ++i) orc.vars.push_back(zv(i));
    orc.vars.push_back("z");
    inst.constraints.push_back(std::move(orc));
    for (int i = 1; i <= n; ++i) inst.constraints.push_back({"EPSILON", {"z", xv(i)}});
    for (const auto& cl : f.clauses)
        inst.constraints.push_back({"ONEIN3", {xv(cl[0]), xv(cl[1]), xv(cl[2])}});
    inst.validate();
    return inst;
}

}  // namespace qcsp
