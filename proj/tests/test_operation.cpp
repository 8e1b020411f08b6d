#include <gtest/gtest.h>

#include "qcsp/gamma.hpp"
#include "qcsp/operation.hpp"

using namespace qcsp;
using namespace qcsp::g6;

namespace {

TEST(GOperation, AnchorValues) {
    FiniteOperation g = g_operation();
    for (int x = 1; x <= 6; ++x) EXPECT_EQ(g.apply({x, v1}), x);  // g(x,1) = x
    EXPECT_EQ(g.apply({v1, v0}), v2);                             // g(1,0) = 2
    EXPECT_EQ(g.apply({v0, p2}), v2);                             // g(0,2') = 2
    EXPECT_EQ(g.apply({v1, p2}), v2);                             // g(1,2') = 2
    EXPECT_EQ(g.apply({p0, p2}), p0);                             // g(0',2') = 0'
}

TEST(GOperation, CaseOverlapsAgree) {
    // (1,1) matches both "y = 1" and "x = y"; both give 1.
    FiniteOperation g = g_operation();
    EXPECT_EQ(g.apply({v1, v1}), v1);
    // (0',0') matches "x = y" and "y in {0',1'}"; both give 0'.
    EXPECT_EQ(g.apply({p0, p0}), p0);
}

TEST(GOperation, RangeProperties) {
    FiniteOperation g = g_operation();
    for (int x = 1; x <= 6; ++x)
        for (int y = 1; y <= 6; ++y) {
            int out = g.apply({x, y});
            // either the first argument or an element of {0',1',2}
            EXPECT_TRUE(out == x || out == p0 || out == p1 || out == v2);
        }
    // g returns 1 only on (1,1); it returns 2' only when the first argument
    // is 2' and the case list hands it through, i.e. on (2',1) and (2',2').
    for (int x = 1; x <= 6; ++x)
        for (int y = 1; y <= 6; ++y) {
            int out = g.apply({x, y});
            EXPECT_EQ(out == v1, x == v1 && y == v1);
            EXPECT_EQ(out == p2, x == p2 && (y == v1 || y == p2));
        }
}

TEST(GOperation, PrimedSubdomainReturnsLastNonTwoPrime) {
    FiniteOperation g = g_operation();
    for (int x : {p0, p1, p2})
        for (int y : {p0, p1, p2}) {
            int out = g.apply({x, y});
            int want = (y != p2) ? y : (x != p2 ? x : p2);
            EXPECT_EQ(out, want);
            EXPECT_TRUE(out == p0 || out == p1 || out == p2);  // preserves {0',1',2'}
        }
}

TEST(CheckPolymorphism, GPreservesGamma6AndConstants) {
    FiniteOperation g = g_operation();
    for (const auto& [name, r] : gamma6().rels) {
        PolymorphismReport rep = check_polymorphism(g, r);
        EXPECT_TRUE(rep.preserves) << name;
    }
    for (const auto& [name, r] : gamma6_constants().rels)
        EXPECT_TRUE(check_polymorphism(g, r).preserves) << name;
}

TEST(CheckPolymorphism, FullSquareAlwaysPreserved) {
    FiniteOperation g = g_operation();
    EXPECT_TRUE(check_polymorphism(g, Relation::full(gamma6_domain(), 2)).preserves);
}

TEST(CheckPolymorphism, MinViolatesSwapWithWitness) {
    Domain d(2, {"0", "1"});
    std::vector<int> table = {1, 1, 1, 2};  // min on {0,1} as elements {1,2}
    FiniteOperation op(d, 2, std::move(table));
    Relation r = Relation::from_tuples(d, 2, {{1, 2}, {2, 1}});
    PolymorphismReport rep = check_polymorphism(op, r);
    EXPECT_FALSE(rep.preserves);
    ASSERT_EQ(rep.witness_rows.size(), 2u);
    EXPECT_EQ(rep.witness_image, (Tuple{1, 1}));
    // the report is independent of tuple listing order by construction:
    // rows are scanned in table order, which is canonical
    EXPECT_THROW(check_polymorphism(op, Relation::full(Domain(3), 2)), std::invalid_argument);
}

TEST(CheckPolymorphism, IndependentOfTupleListingOrder) {
    // building the same relation in two insertion orders produces identical
    // tables, hence identical verdicts
    Domain d(3);
    Relation a(d, 2), b(d, 2);
    a.add({1, 2});
    a.add({2, 3});
    b.add({2, 3});
    b.add({1, 2});
    EXPECT_EQ(a, b);
    FiniteOperation first(d, 1, {1, 2, 3});
    EXPECT_EQ(check_polymorphism(first, a).preserves, check_polymorphism(first, b).preserves);
}

}  // namespace
