#include <gtest/gtest.h>

#include "qcsp/qphi.hpp"
#include "qcsp/rng.hpp"

using namespace qcsp;

namespace {

QBoolFormula single_term_dnf(Quant q) {
    // Q x1 (x1=1 and x1=1 and x1=1)
    QBoolFormula f;
    f.mode = QBoolFormula::Mode::Dnf;
    f.nvars = 1;
    f.prefix = {q};
    f.clauses = {{BoolLiteral{1, 1}, BoolLiteral{1, 1}, BoolLiteral{1, 1}}};
    return f;
}

Relation diag_pm() {
    Domain d = gamma4_domain();
    Relation r(d, 2);
    r.add({1, 1});
    r.add({2, 2});
    return r;
}

Relation full_pm() {
    Domain d = gamma4_domain();
    Relation r(d, 2);
    for (int a : {1, 2})
        for (int b : {1, 2}) r.add({a, b});
    return r;
}

TEST(QPhiOperator, CanonicalSingleVariableInstances) {
    auto [cv0, cv1] = canonical_v_relations();
    // No-instance: forall x1, term needs x1 = 1
    EXPECT_EQ(q_phi_operator(single_term_dnf(Quant::Forall), cv0, cv1), diag_pm());
    // Yes-instance: exists x1
    EXPECT_EQ(q_phi_operator(single_term_dnf(Quant::Exists), cv0, cv1), full_pm());
}

TEST(QPhiOperator, CanonicalDichotomyExhaustiveTiny) {
    // every DNF with <= 2 variables and <= 2 terms, all prefixes:
    // T(V0,V1) is {(+,+),(-,-)} exactly on the No-instances and the full
    // {+,-} square on the Yes-instances
    auto [cv0, cv1] = canonical_v_relations();
    Relation diag = diag_pm(), full = full_pm();
    int checked = 0;
    for (int n = 1; n <= 2; ++n) {
        std::vector<std::pair<int, int>> lits;  // (var, bit)
        for (int v = 1; v <= n; ++v)
            for (int b = 0; b <= 1; ++b) lits.emplace_back(v, b);
        std::size_t nl = lits.size();
        std::size_t terms_1 = nl * nl * nl;
        for (int s = 1; s <= 2; ++s) {
            std::size_t total = 1;
            for (int i = 0; i < 3 * s; ++i) total *= nl;
            (void)terms_1;
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t c = code;
                QBoolFormula f;
                f.mode = QBoolFormula::Mode::Dnf;
                f.nvars = n;
                for (int t = 0; t < s; ++t) {
                    std::array<BoolLiteral, 3> term;
                    for (int j = 0; j < 3; ++j) {
                        auto [var, bit] = lits[c % nl];
                        c /= nl;
                        term[static_cast<std::size_t>(j)] = BoolLiteral{var, bit};
                    }
                    f.clauses.push_back(term);
                }
                for (int pmask = 0; pmask < (1 << n); ++pmask) {
                    f.prefix.clear();
                    for (int v = 0; v < n; ++v)
                        f.prefix.push_back((pmask >> v & 1) ? Quant::Forall : Quant::Exists);
                    Relation got = q_phi_operator(f, cv0, cv1);
                    ASSERT_EQ(got, qbf_truth(f) ? full : diag)
                        << "n=" << n << " s=" << s << " code=" << code << " pmask=" << pmask;
                    ++checked;
                }
            }
        }
    }
    EXPECT_EQ(checked, 2 * (8 + 64) + 4 * (64 + 4096));
}

TEST(QPhiOperator, OutputSymmetricAndTransitive) {
    auto [cv0, cv1] = canonical_v_relations();
    SplitMix64 rng(61);
    for (int i = 0; i < 30; ++i) {
        QBoolFormula f;
        f.mode = QBoolFormula::Mode::Dnf;
        f.nvars = 2;
        f.prefix = {rng.coin() ? Quant::Forall : Quant::Exists,
                    rng.coin() ? Quant::Forall : Quant::Exists};
        for (int t = 0; t < 2; ++t) {
            std::array<BoolLiteral, 3> term;
            for (int j = 0; j < 3; ++j)
                term[static_cast<std::size_t>(j)] =
                    BoolLiteral{1 + static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))};
            f.clauses.push_back(term);
        }
        Relation t = q_phi_operator(f, cv0, cv1);
        EXPECT_TRUE(is_symmetric(t));
        EXPECT_TRUE(is_transitive(t));
    }
}

TEST(QPhiOperator, MonotoneInRelationArguments) {
    // enlarging either argument never shrinks the output
    auto [cv0, cv1] = canonical_v_relations();
    SplitMix64 rng(62);
    QBoolFormula f;
    f.mode = QBoolFormula::Mode::Dnf;
    f.nvars = 2;
    f.prefix = {Quant::Forall, Quant::Exists};
    f.clauses = {{BoolLiteral{1, 1}, BoolLiteral{2, 0}, BoolLiteral{1, 1}},
                 {BoolLiteral{2, 1}, BoolLiteral{2, 1}, BoolLiteral{1, 0}}};
    for (int i = 0; i < 20; ++i) {
        // grow cv0 by a few random tuples
        ParamRelation grown0 = cv0, grown1 = cv1;
        {
            Relation base = grown0.base();
            for (int k = 0; k < 3; ++k) base.set_index(rng.below(base.positions()));
            grown0 = ParamRelation(base, grown0.sig());
        }
        {
            Relation base = grown1.base();
            for (int k = 0; k < 3; ++k) base.set_index(rng.below(base.positions()));
            grown1 = ParamRelation(base, grown1.sig());
        }
        Relation small = q_phi_operator(f, cv0, cv1);
        EXPECT_TRUE(small.is_subset_of(q_phi_operator(f, grown0, cv1)));
        EXPECT_TRUE(small.is_subset_of(q_phi_operator(f, cv0, grown1)));
        EXPECT_TRUE(small.is_subset_of(q_phi_operator(f, grown0, grown1)));
    }
}

TEST(QPhiOperator, RejectsBadSignatures) {
    auto [cv0, cv1] = canonical_v_relations();
    QBoolFormula f = single_term_dnf(Quant::Forall);
    ParamRelation zful(Relation(gamma4_domain(), 7), ParamSignature{4, 0, 1, 2});
    EXPECT_THROW(q_phi_operator(f, zful, cv1), std::invalid_argument);
    QBoolFormula cnf = f;
    cnf.mode = QBoolFormula::Mode::Cnf;
    EXPECT_THROW(q_phi_operator(cnf, cv0, cv1), std::invalid_argument);
    QBoolFormula empty = f;
    empty.clauses.clear();
    EXPECT_THROW(q_phi_operator(empty, cv0, cv1), std::invalid_argument);
}

}  // namespace
