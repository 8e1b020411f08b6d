#include <gtest/gtest.h>

#include "qcsp/gamma.hpp"
#include "qcsp/induced.hpp"
#include "support/gen.hpp"

using namespace qcsp;

namespace {

// Oracle for the W/S relations: evaluate their defining sentences with the
// formula evaluator, which runs on the shared game engine rather than the
// dedicated recursions in w_relation / s_relation.
Relation w_oracle(const Relation& r, int m) {
    int n = induced_levels(r);
    RelLibrary lib;
    lib.dom = r.domain();
    lib.add("R", r);
    QcFormula f;
    for (int i = 0; i <= m; ++i) f.free_vars.push_back("y" + std::to_string(i));
    for (int i = 1; i <= m; ++i) f.free_vars.push_back("x" + std::to_string(i));
    f.quantified.emplace_back(Quant::Forall, "x");
    for (int i = m + 1; i <= n; ++i) f.quantified.emplace_back(Quant::Exists, "y" + std::to_string(i));
    QcAtom atom{"R", {}};
    for (int i = 0; i <= n; ++i) atom.vars.push_back("y" + std::to_string(i));
    for (int i = 1; i <= m; ++i) atom.vars.push_back("x" + std::to_string(i));
    for (int i = m; i < n; ++i) atom.vars.push_back("x");
    f.atoms.push_back(atom);
    return eval_qc_formula(f, lib);
}

Relation s_oracle(const Relation& r, int m) {
    int n = induced_levels(r);
    if (m >= n - 1) return w_oracle(r, m);
    RelLibrary lib;
    lib.dom = r.domain();
    lib.add("R", r);
    QcFormula f;
    for (int i = 0; i <= m; ++i) f.free_vars.push_back("y" + std::to_string(i));
    for (int i = 1; i <= m; ++i) f.free_vars.push_back("x" + std::to_string(i));
    f.quantified.emplace_back(Quant::Forall, "x");
    f.quantified.emplace_back(Quant::Exists, "y" + std::to_string(m + 1));
    f.quantified.emplace_back(Quant::Forall, "xp");
    for (int i = m + 2; i <= n; ++i) f.quantified.emplace_back(Quant::Exists, "y" + std::to_string(i));
    QcAtom atom{"R", {}};
    for (int i = 0; i <= n; ++i) atom.vars.push_back("y" + std::to_string(i));
    for (int i = 1; i <= m; ++i) atom.vars.push_back("x" + std::to_string(i));
    atom.vars.push_back("x");
    for (int i = m + 1; i < n; ++i) atom.vars.push_back("xp");
    f.atoms.push_back(atom);
    return eval_qc_formula(f, lib);
}

TEST(WRelation, CopycatSourceHasFullLevelZero) {
    // n = 1, R(y0, y1, x1) = "y1 = x1": the existential player copies x
    Domain d(3);
    Relation r(d, 3);
    for (int y0 = 1; y0 <= 3; ++y0)
        for (int v = 1; v <= 3; ++v) r.add({y0, v, v});
    EXPECT_EQ(w_relation(r, 0), Relation::full(d, 1));
    EXPECT_EQ(w_relation(r, 1), r);  // m = n returns the source unchanged
    EXPECT_EQ(s_relation(r, 0), w_relation(r, 0));  // n = 1: definitions coincide
    EXPECT_THROW(w_relation(r, 2), std::invalid_argument);
}

TEST(WRelation, AgreesWithGameOracleOnRandomCorpus) {
    SplitMix64 rng(71);
    for (int i = 0; i < 25; ++i) {
        Domain d(2);
        Relation r = random_relation(d, 5, rng);  // n = 2
        for (int m = 0; m <= 2; ++m) {
            ASSERT_EQ(w_relation(r, m), w_oracle(r, m)) << "w m=" << m;
            ASSERT_EQ(s_relation(r, m), s_oracle(r, m)) << "s m=" << m;
        }
    }
    // one |A| = 3, n = 2 sample for the domain-size axis
    Domain d3(3);
    Relation r3 = random_relation(d3, 5, rng);
    EXPECT_EQ(w_relation(r3, 1), w_oracle(r3, 1));
    EXPECT_EQ(s_relation(r3, 0), s_oracle(r3, 0));
}

TEST(SRelation, SubsetOfWAndBoundaryCases) {
    SplitMix64 rng(72);
    Domain d(2);
    for (int i = 0; i < 40; ++i) {
        Relation r = random_relation(d, 5, rng);  // n = 2
        for (int m = 0; m <= 2; ++m)
            ASSERT_TRUE(s_relation(r, m).is_subset_of(w_relation(r, m)));
        ASSERT_EQ(s_relation(r, 1), w_relation(r, 1));  // m = n-1 coincide
    }
}

TEST(TildeRelations, DefinitionsAndInclusions) {
    SplitMix64 rng(73);
    Domain d(2);
    for (int i = 0; i < 30; ++i) {
        Relation r = random_relation(d, 5, rng);
        auto [wt0, st0] = tilde_relations(r, 0);
        EXPECT_EQ(wt0, w_relation(r, 0));
        EXPECT_EQ(st0, s_relation(r, 0));
        for (int m = 0; m <= 2; ++m) {
            auto [wt, st] = tilde_relations(r, m);
            ASSERT_TRUE(wt.is_subset_of(w_relation(r, m)));
            ASSERT_TRUE(st.is_subset_of(wt));
            ASSERT_TRUE(st.is_subset_of(s_relation(r, m)));
        }
    }
}

TEST(BuildInduced, TreeShape) {
    Domain d(2);
    SplitMix64 rng(74);
    Relation r = random_relation(d, 5, rng);  // n = 2
    InducedInstance ind = build_induced(r, 2);
    EXPECT_EQ(ind.vars.size(), 7u);  // 1 + 2 + 4
    EXPECT_EQ(ind.cons.size(), ind.vars.size());
    EXPECT_EQ(ind.vars[0].name, "y0");
    EXPECT_EQ(ind.vars[1].name, "y1_1");
    EXPECT_EQ(ind.vars[6].name, "y2_22");

    Relation r0 = random_relation(d, 1, rng);  // n = 0
    InducedInstance ind0 = build_induced(r0, 0);
    EXPECT_EQ(ind0.vars.size(), 1u);
    EXPECT_EQ(ind0.cons.size(), 1u);
    EXPECT_EQ(*ind0.s_tables[0], r0);

    EXPECT_THROW(build_induced(r, 1), std::invalid_argument);
}

TEST(CheckEquivalenceLemma, RandomCorpusAgrees) {
    SplitMix64 rng(75);
    for (int i = 0; i < 30; ++i) {
        Domain d(2);
        Relation r = random_relation(d, 5, rng);
        EquivalenceReport rep = check_equivalence_lemma(r, 2);
        ASSERT_TRUE(rep.agree) << "sample " << i;
    }
    for (int i = 0; i < 10; ++i) {
        Domain d(3);
        Relation r = random_relation(d, 3, rng);
        EquivalenceReport rep = check_equivalence_lemma(r, 1);
        ASSERT_TRUE(rep.agree) << "sample3 " << i;
    }
}

TEST(CheckEquivalenceLemma, FullAndEmptySource) {
    Domain d(2);
    EquivalenceReport full = check_equivalence_lemma(Relation::full(d, 5), 2);
    EXPECT_TRUE(full.agree);
    EXPECT_TRUE(full.item1 && full.item3 && full.item5 && full.item6);
    EquivalenceReport empty = check_equivalence_lemma(Relation(d, 5), 2);
    EXPECT_TRUE(empty.agree);
    EXPECT_FALSE(empty.item1 || empty.item3 || empty.item5 || empty.item6);
}

TEST(ParamArcConsistency, SoundnessAndFullSource) {
    Domain d(2);
    SplitMix64 rng(76);
    int failures_seen = 0;
    for (int i = 0; i < 40; ++i) {
        Relation r = random_relation(d, 3, rng, 1, 4);  // sparse, n = 1
        InducedInstance ind = build_induced(r, 1);
        PReduction red = param_arc_consistency(ind);
        for (std::size_t zi : red.failed_z) {
            ++failures_seen;
            Tuple z = decode_tuple(zi, 2, 2);
            ASSERT_FALSE(solve_csp(materialize_induced(ind, z)).has_value());
        }
    }
    EXPECT_GT(failures_seen, 0);

    Relation full = Relation::full(d, 5);
    PReduction red = param_arc_consistency(build_induced(full, 2));
    EXPECT_TRUE(red.ok);
    for (const auto& per_var : red.domains)
        for (Mask m : per_var) EXPECT_EQ(m, full_mask(2));
}

TEST(ParamArcConsistency, SuccessImpliesSolutionsOnGamma6DefinableSources) {
    // sources q-defined over the 6-element language: arc consistency
    // succeeding for every z means the induced instance has a solution for
    // every z
    RelLibrary g = gamma6();
    SplitMix64 rng(77);
    std::vector<std::string> names;
    for (const auto& [n, r] : g.rels) names.push_back(n);
    int tested = 0;
    for (int i = 0; i < 3; ++i) {
        QcFormula f;
        f.free_vars = {"y0", "y1", "x1"};
        int natoms = 1 + static_cast<int>(rng.below(2));
        for (int a = 0; a < natoms; ++a) {
            const std::string& rn = names[rng.below(names.size())];
            QcAtom atom;
            atom.rel = rn;
            for (int k = 0; k < g.rel(rn).arity(); ++k)
                atom.vars.push_back(f.free_vars[rng.below(3)]);
            f.atoms.push_back(std::move(atom));
        }
        Relation r = eval_qc_formula(f, g);
        InducedInstance ind = build_induced(r, 1);
        PReduction red = param_arc_consistency(ind);  // full sweep over all z
        if (!red.ok) continue;
        ++tested;
        // solver confirmation on a deterministic z subsample
        std::size_t zn = unchecked_positions(6, 6);
        for (std::size_t zi = 0; zi < zn; zi += 61) {
            Tuple z = decode_tuple(zi, 6, 6);
            ASSERT_TRUE(solve_csp(materialize_induced(ind, z)).has_value());
        }
    }
    EXPECT_GT(tested, 0);
}

TEST(ParamArcConsistency, MonotoneUnderDomainShrinking) {
    Domain d(2);
    SplitMix64 rng(78);
    for (int i = 0; i < 20; ++i) {
        Relation r = random_relation(d, 3, rng);
        InducedInstance ind = build_induced(r, 1);
        for (std::size_t zi = 0; zi < 4; ++zi) {
            Tuple z = decode_tuple(zi, 2, 2);
            CspInstance base = materialize_induced(ind, z);
            ArcResult full = arc_consistency(base);
            CspInstance shrunk = base;
            shrunk.restrictions.assign(static_cast<std::size_t>(base.nvars), full_mask(2));
            shrunk.restrictions[static_cast<std::size_t>(rng.below(
                static_cast<std::uint64_t>(base.nvars)))] = Mask(1) << rng.below(2);
            ArcResult part = arc_consistency(shrunk);
            if (!full.ok || !part.ok) continue;
            for (int v = 0; v < base.nvars; ++v)
                ASSERT_EQ(part.domains[static_cast<std::size_t>(v)] &
                              ~full.domains[static_cast<std::size_t>(v)],
                          0u);
        }
    }
}

}  // namespace
