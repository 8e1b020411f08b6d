#include <gtest/gtest.h>

#include "qcsp/encoders.hpp"
#include "qcsp/game.hpp"
#include "qcsp/qphi.hpp"

using namespace qcsp;

namespace {

QBoolFormula worked_example() {
    // exists x1 forall x2 exists x3
    //   (x1 | ~x2 | x3) & (~x1 | x2 | ~x3) & (x1 | ~x2 | ~x3)
    QBoolFormula f;
    f.mode = QBoolFormula::Mode::Cnf;
    f.nvars = 3;
    f.prefix = {Quant::Exists, Quant::Forall, Quant::Exists};
    f.clauses = {{BoolLiteral{1, 1}, BoolLiteral{2, 0}, BoolLiteral{3, 1}},
                 {BoolLiteral{1, 0}, BoolLiteral{2, 1}, BoolLiteral{3, 0}},
                 {BoolLiteral{1, 1}, BoolLiteral{2, 0}, BoolLiteral{3, 0}}};
    return f;
}

TEST(EncodeQ3CnfComplement, WorkedExampleEncodesToFalse) {
    QBoolFormula f = worked_example();
    ASSERT_TRUE(qbf_truth(f));  // the source sentence is true
    QcspInstance inst = encode_q3cnf_complement(f);
    EXPECT_FALSE(eval_qcsp(inst).value);  // so its complement encoding is false
}

TEST(EncodeQ3CnfComplement, FullyUniversalUnsatisfiableMatrix) {
    // forall x1: (x1 | x1 | x1) & (~x1 | ~x1 | ~x1) is unsatisfiable, so the
    // complement encoding must be true
    QBoolFormula f;
    f.mode = QBoolFormula::Mode::Cnf;
    f.nvars = 1;
    f.prefix = {Quant::Forall};
    f.clauses = {{BoolLiteral{1, 1}, BoolLiteral{1, 1}, BoolLiteral{1, 1}},
                 {BoolLiteral{1, 0}, BoolLiteral{1, 0}, BoolLiteral{1, 0}}};
    ASSERT_FALSE(qbf_truth(f));
    EXPECT_TRUE(eval_qcsp(encode_q3cnf_complement(f)).value);
}

TEST(EncodeQ3CnfComplement, ExhaustiveEquivalenceUpTo2Vars) {
    // every 3-CNF with <= 2 variables, <= 2 clauses, all prefixes:
    // encoded truth = NOT(qbf truth). The 3-variable sweep runs in the
    // acceptance suite.
    int checked = 0;
    for (int n = 1; n <= 2; ++n) {
        std::vector<std::pair<int, int>> lits;
        for (int v = 1; v <= n; ++v)
            for (int b = 0; b <= 1; ++b) lits.emplace_back(v, b);
        std::size_t nl = lits.size();
        for (int s = 1; s <= 2; ++s) {
            std::size_t total = 1;
            for (int i = 0; i < 3 * s; ++i) total *= nl;
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t c = code;
                QBoolFormula f;
                f.mode = QBoolFormula::Mode::Cnf;
                f.nvars = n;
                for (int t = 0; t < s; ++t) {
                    std::array<BoolLiteral, 3> cl;
                    for (int j = 0; j < 3; ++j) {
                        auto [var, bit] = lits[c % nl];
                        c /= nl;
                        cl[static_cast<std::size_t>(j)] = BoolLiteral{var, bit};
                    }
                    f.clauses.push_back(cl);
                }
                for (int pmask = 0; pmask < (1 << n); ++pmask) {
                    f.prefix.clear();
                    for (int v = 0; v < n; ++v)
                        f.prefix.push_back((pmask >> v & 1) ? Quant::Forall : Quant::Exists);
                    bool encoded = eval_qcsp(encode_q3cnf_complement(f)).value;
                    ASSERT_EQ(encoded, !qbf_truth(f))
                        << "n=" << n << " s=" << s << " code=" << code << " pmask=" << pmask;
                    ++checked;
                }
            }
        }
    }
    EXPECT_EQ(checked, 2 * (8 + 64) + 4 * (64 + 4096));
}

TEST(EncodeQ3CnfComplement, RejectsDnf) {
    QBoolFormula f = worked_example().complement();
    EXPECT_THROW(encode_q3cnf_complement(f), std::invalid_argument);
}

TEST(EncodePi2OneInThree, TinyExamples) {
    // m=2, n=3, clause 1IN3(x1,x2,x3): false at x1=x2=1
    OneInThreeInstance a;
    a.nvars = 3;
    a.universals = 2;
    a.clauses = {{1, 2, 3}};
    ASSERT_FALSE(one_in_three_truth(a));
    EXPECT_FALSE(eval_qcsp(encode_pi2_1in3(a)).value);

    // m=2, n=2, clause 1IN3(x1,x2,x2): false at x1=x2=0
    OneInThreeInstance b;
    b.nvars = 2;
    b.universals = 2;
    b.clauses = {{1, 2, 2}};
    ASSERT_FALSE(one_in_three_truth(b));
    EXPECT_FALSE(eval_qcsp(encode_pi2_1in3(b)).value);

    EXPECT_THROW(encode_pi2_1in3(OneInThreeInstance{2, 1, {{1, 2, 2}}}), std::invalid_argument);
}

TEST(EncodePi2OneInThree, ShapeArithmetic) {
    OneInThreeInstance f;
    f.nvars = 3;
    f.universals = 2;
    f.clauses = {{1, 2, 3}, {3, 3, 1}};
    QcspInstance psi = encode_pi2_1in3(f);
    int m = f.universals, n = f.nvars;
    int s = static_cast<int>(f.clauses.size());
    EXPECT_EQ(psi.universal_count(), 2 * m);
    EXPECT_EQ(static_cast<int>(psi.prefix.size()), 2 * m + n + m + 1);
    EXPECT_EQ(static_cast<int>(psi.constraints.size()), 2 * m + m + 1 + n + s);
}

TEST(EncodePi2OneInThree, SatisfiableInstanceEncodesToTrue) {
    // forall x1 x2 exists x3: exactly-one over (x1, x2, x3) is false, but
    // over (x1, x1, x2)... pick a clause set that is a Yes-instance:
    // 1IN3(x3, x4, x4) with x3 existential says x3=1, x4=0 regardless of
    // the universals; make universals dummy via an always-winnable clause.
    OneInThreeInstance f;
    f.nvars = 4;
    f.universals = 2;
    f.clauses = {{3, 4, 4}};
    ASSERT_TRUE(one_in_three_truth(f));
    EXPECT_TRUE(eval_qcsp(encode_pi2_1in3(f)).value);
}

}  // namespace
