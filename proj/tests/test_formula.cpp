#include <gtest/gtest.h>

#include "qcsp/formula.hpp"
#include "qcsp/gamma.hpp"
#include "support/gen.hpp"

using namespace qcsp;

namespace {

TEST(EvalQcFormula, Delta1DerivedFromDelta0AndOneInThree) {
    RelLibrary lib = gamma6();
    QcFormula f;
    f.free_vars = {"x", "y"};
    f.quantified = {{Quant::Exists, "u1"}, {Quant::Exists, "u2"}, {Quant::Exists, "u3"}};
    f.atoms = {{"DELTA0", {"x", "u1"}},
               {"ONEIN3", {"y", "u1", "u2"}},
               {"ONEIN3", {"u2", "u2", "u3"}}};
    EXPECT_EQ(eval_qc_formula(f, lib), lib.rel("DELTA1"));
}

TEST(EvalQcFormula, NoAtomsGivesFullUnary) {
    RelLibrary lib;
    lib.dom = Domain(3);
    QcFormula f;
    f.free_vars = {"x"};
    EXPECT_EQ(eval_qc_formula(f, lib), Relation::full(lib.dom, 1));
}

TEST(EvalQcFormula, UnknownRelationRejected) {
    RelLibrary lib;
    lib.dom = Domain(2);
    QcFormula f;
    f.free_vars = {"x"};
    f.atoms = {{"NOPE", {"x"}}};
    EXPECT_THROW(eval_qc_formula(f, lib), std::invalid_argument);
}

TEST(EvalQcFormula, Or3BehavesAsBooleanOrOnBooleans) {
    Relation or3 = or_n(3);
    EXPECT_EQ(or3.arity(), 4);
    using namespace g6;
    for (int a : {v0, v1})
        for (int b : {v0, v1})
            for (int c : {v0, v1}) {
                bool want = (a == v1) || (b == v1) || (c == v1);
                for (int y = 1; y <= 6; ++y)
                    EXPECT_EQ(or3.contains({a, b, c, y}), y == (want ? v1 : v0));
            }
    // any of the leading inputs outside {0,1} frees the output entirely
    for (int y = 1; y <= 6; ++y) {
        EXPECT_TRUE(or3.contains({v2, v0, v1, y}));
        EXPECT_TRUE(or3.contains({p1, v0, v0, y}));
    }
    EXPECT_EQ(or_n(2), gamma6().rel("OR2"));
}

TEST(EvalQcFormula, AgreesWithNaiveEnumeratorOnRandomCorpus) {
    SplitMix64 rng(21);
    int cases = 0;
    while (cases < 500) {
        int ds = 2 + static_cast<int>(rng.below(2));  // |A| in {2,3}
        Domain dom(ds);
        RelLibrary lib;
        lib.dom = dom;
        int nrels = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < nrels; ++i)
            lib.add("R" + std::to_string(i), random_relation(dom, 1 + static_cast<int>(rng.below(3)), rng));

        int total_vars = 1 + static_cast<int>(rng.below(5));
        int nfree = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(total_vars)));
        QcFormula f;
        std::vector<std::string> names;
        for (int i = 0; i < total_vars; ++i) names.push_back("w" + std::to_string(i));
        for (int i = 0; i < nfree; ++i) f.free_vars.push_back(names[static_cast<std::size_t>(i)]);
        for (int i = nfree; i < total_vars; ++i)
            f.quantified.emplace_back(rng.coin() ? Quant::Forall : Quant::Exists,
                                      names[static_cast<std::size_t>(i)]);
        int natoms = 1 + static_cast<int>(rng.below(3));
        for (int a = 0; a < natoms; ++a) {
            std::string rn = "R" + std::to_string(rng.below(static_cast<std::uint64_t>(nrels)));
            QcAtom atom;
            atom.rel = rn;
            for (int i = 0; i < lib.rel(rn).arity(); ++i)
                atom.vars.push_back(names[rng.below(names.size())]);
            f.atoms.push_back(std::move(atom));
        }
        ASSERT_EQ(eval_qc_formula(f, lib), testsupport::naive_eval_formula(f, lib));
        ++cases;
    }
}

}  // namespace
