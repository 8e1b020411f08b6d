#include <gtest/gtest.h>

#include "qcsp/gamma.hpp"

using namespace qcsp;
using namespace qcsp::g6;

namespace {

TEST(Gamma4, TableShapes) {
    RelLibrary lib = gamma4();
    const int plus = 1, minus = 2, zero = 3;
    EXPECT_EQ(lib.rel("R0").count(), 14u);  // 2*2*3 free + 2 forced-equal
    EXPECT_EQ(lib.rel("R1").count(), 14u);
    EXPECT_FALSE(lib.rel("R0").contains({plus, minus, zero}));
    EXPECT_TRUE(lib.rel("R0").contains({plus, minus, plus}));
    EXPECT_TRUE(lib.rel("PLUS").contains({plus}));
    EXPECT_TRUE(lib.rel("MINUS").contains({minus}));
    EXPECT_EQ(lib.rel("PLUS").count(), 1u);
}

TEST(Gamma6, TableShapes) {
    RelLibrary lib = gamma6();
    EXPECT_EQ(lib.rel("ONEIN3").count(), 4u);
    EXPECT_TRUE(lib.rel("ONEIN3").contains({p2, p2, p2}));
    EXPECT_TRUE(lib.rel("ONEIN3").contains({p1, p0, p0}));

    // the boolean corner of AND2
    const Relation& a = lib.rel("AND2");
    for (int x : {v0, v1})
        for (int y : {v0, v1})
            for (int c = 1; c <= 6; ++c) {
                bool want = (c == ((x == v1 && y == v1) ? v1 : v0));
                EXPECT_EQ(a.contains({x, y, c}), want);
            }
    for (int c = 1; c <= 6; ++c) EXPECT_TRUE(a.contains({v2, v0, c}));

    EXPECT_EQ(lib.rel("DELTA0").count(), 17u);  // {1}x{0',2'} plus 5x3
    EXPECT_TRUE(lib.rel("DELTA0").contains({v1, p0}));
    EXPECT_FALSE(lib.rel("DELTA0").contains({v1, p1}));
    EXPECT_EQ(lib.rel("DELTA1").count(), 17u);
    EXPECT_FALSE(lib.rel("DELTA1").contains({v1, p0}));
    EXPECT_EQ(lib.rel("EPSILON").count(), 17u);
    EXPECT_FALSE(lib.rel("EPSILON").contains({v0, p2}));
    for (const auto& [name, r] : lib.rels)
        for (const auto& t : r.tuples())
            if (name == "DELTA0" || name == "DELTA1" || name == "EPSILON")
                EXPECT_TRUE(t[1] == p0 || t[1] == p1 || t[1] == p2);
}

TEST(CanonicalV, MatchesR0R1WithAlphaParameter) {
    auto [cv0, cv1] = canonical_v_relations();
    const int plus = 1, minus = 2, zero = 3, one = 4;
    EXPECT_EQ(cv0.sig().a, 1);
    EXPECT_EQ(cv0.sig().v, 2);
    // (+,-) in V0^1 but not in V0^0
    EXPECT_TRUE(cv0.instantiate(std::nullopt, std::nullopt, Tuple{one}).as_relation().contains({plus, minus}));
    EXPECT_FALSE(cv0.instantiate(std::nullopt, std::nullopt, Tuple{zero}).as_relation().contains({plus, minus}));
    // V0^forall = {(+,+),(-,-)}
    Relation vf = cv0.q_forall().as_relation();
    Relation want(cv0.domain(), 2);
    want.add({plus, plus});
    want.add({minus, minus});
    EXPECT_EQ(vf, want);
    // V1 mirrors V0 with the controlling value flipped
    EXPECT_TRUE(cv1.instantiate(std::nullopt, std::nullopt, Tuple{zero}).as_relation().contains({plus, minus}));
    EXPECT_FALSE(cv1.instantiate(std::nullopt, std::nullopt, Tuple{one}).as_relation().contains({plus, minus}));
}

TEST(OrN, CapacityGuard) {
    EXPECT_THROW(or_n(1), std::invalid_argument);
}

}  // namespace
