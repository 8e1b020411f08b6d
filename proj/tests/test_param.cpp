#include <gtest/gtest.h>

#include "qcsp/param_relation.hpp"
#include "qcsp/rng.hpp"

using namespace qcsp;

namespace {

// Q over |A|=2 with signature z=2, delta=0, alpha=1, value=2, from an
// explicit slice table.
ParamRelation sample_q() {
    Domain d(2);
    return make_param(d, ParamSignature{2, 0, 1, 2}, [&](std::size_t zi, std::size_t, std::size_t ai) {
        Relation s(d, 2);
        // rows keyed by (zi, ai) so instantiation can be checked by lookup
        if (ai == 0) s.add({1, 1});
        if (ai == 1) {
            s.add({1, 1});
            s.add({2, 2});
        }
        if (zi == 3) s.add({2, 1});
        return s;
    });
}

TEST(ParamRelation, SignatureMustSum) {
    Domain d(2);
    EXPECT_THROW(ParamRelation(Relation(d, 3), ParamSignature{2, 0, 1, 2}), std::invalid_argument);
}

TEST(Instantiate, FullInstantiationSelectsRow) {
    ParamRelation q = sample_q();
    Relation got = q.instantiate(Tuple{1, 2}, Tuple{}, Tuple{1}).as_relation();
    // zi = encode(1,2) = 1, ai = 0 -> {(1,1)}
    Relation want(q.domain(), 2);
    want.add({1, 1});
    EXPECT_EQ(got, want);

    Relation got2 = q.instantiate(Tuple{2, 2}, Tuple{}, Tuple{2}).as_relation();
    Relation want2(q.domain(), 2);
    want2.add({1, 1});
    want2.add({2, 2});
    want2.add({2, 1});
    EXPECT_EQ(got2, want2);
}

TEST(Instantiate, NothingReturnsInputUnchanged) {
    ParamRelation q = sample_q();
    EXPECT_EQ(q.instantiate(std::nullopt, std::nullopt, std::nullopt), q);
}

TEST(Instantiate, PartialLeavesParams) {
    ParamRelation q = sample_q();
    ParamRelation fixed_z = q.instantiate(Tuple{1, 1}, std::nullopt, std::nullopt);
    EXPECT_EQ(fixed_z.sig().z, 0);
    EXPECT_EQ(fixed_z.sig().a, 1);
    EXPECT_EQ(fixed_z.slice(0, 0, 1), q.slice(0, 0, 1));
    EXPECT_THROW(q.instantiate(Tuple{1}, std::nullopt, std::nullopt), std::invalid_argument);
    EXPECT_THROW(fixed_z.as_relation(), std::invalid_argument);
}

TEST(QForall, IntersectionOfConstantSlices) {
    // |A|=2, m=1: Q^1 = {(1,1)}, Q^2 = {(1,1),(2,2)} -> Q^forall = {(1,1)}
    Domain d(2);
    ParamRelation q = make_param(d, ParamSignature{0, 0, 1, 2}, [&](std::size_t, std::size_t, std::size_t ai) {
        Relation s(d, 2);
        s.add({1, 1});
        if (ai == 1) s.add({2, 2});
        return s;
    });
    Relation want(d, 2);
    want.add({1, 1});
    EXPECT_EQ(q.q_forall().as_relation(), want);
    // m = 1: both interpretations coincide
    EXPECT_EQ(q.q_forall(), q.q_forallforall());
}

TEST(QForall, AlphaIndependentIsIdentity) {
    Domain d(2);
    SplitMix64 rng(3);
    Relation fixed = random_relation(d, 2, rng);
    ParamRelation q = make_param(d, ParamSignature{0, 0, 2, 2},
                                 [&](std::size_t, std::size_t, std::size_t) { return fixed; });
    EXPECT_EQ(q.q_forall().as_relation(), fixed);
    EXPECT_EQ(q.q_forallforall().as_relation(), fixed);
}

TEST(QForallForall, KillsOnEmptySlice) {
    Domain d(2);
    ParamRelation q = make_param(d, ParamSignature{0, 0, 2, 2}, [&](std::size_t, std::size_t, std::size_t ai) {
        Relation s = Relation::full(d, 2);
        if (ai == 1) s = Relation(d, 2);  // alpha = (1,2) slice empty
        return s;
    });
    EXPECT_TRUE(q.q_forallforall().as_relation().empty());
}

TEST(QForallForall, SubsetOfQForallOnRandomCorpus) {
    Domain d(3);
    SplitMix64 rng(4);
    for (int i = 0; i < 50; ++i) {
        Relation base = random_relation(d, 4, rng);
        ParamRelation q(base, ParamSignature{0, 0, 2, 2});
        EXPECT_TRUE(q.q_forallforall().base().is_subset_of(q.q_forall().base()));
    }
    ParamRelation no_alpha(Relation(d, 2), ParamSignature{0, 0, 0, 2});
    EXPECT_THROW(no_alpha.q_forall(), std::invalid_argument);
}

}  // namespace
