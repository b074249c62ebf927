#include "support.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

TEST(PrimitiveRelation, M7RowOne) {
    const auto rel = primitive_relation(load("m7.mat"), 1);
    EXPECT_EQ(rel.trace.pivots, (std::vector<Index>{1, 5, 6}));
    EXPECT_EQ(rel.gamma, terms({{P(2), 1}, {P(3), 1}, {P(4), 1}, {N(5), 2}, {N(6), 1}, {P(7), 1}}));
    EXPECT_EQ(rel.degree_sum(), 7);
    // a_{1,j} = beta_1j; level 2 after substituting e_5^+
    EXPECT_EQ(rel.trace.a_table.at({1, 2}), -1);
    EXPECT_EQ(rel.trace.a_table.at({1, 5}), 2);
    EXPECT_EQ(rel.trace.a_table.at({2, 6}), -1);
    EXPECT_EQ(rel.trace.a_table.at({2, 7}), 2);
    EXPECT_EQ(rel.trace.a_table.at({3, 7}), 1);
}

TEST(PrimitiveRelation, M7RowTwo) {
    const auto rel = primitive_relation(load("m7.mat"), 2);
    EXPECT_EQ(rel.gamma, terms({{N(4), 2}, {N(5), 1}, {P(6), 1}, {P(7), 1}}));
    EXPECT_EQ(relation_text(rel), "e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+");
}

TEST(PrimitiveRelation, LastRowIsEmpty) {
    MatrixGen gen(21);
    for (int k = 0; k < 30; ++k) {
        const auto m = gen.next(1, 8, -5, 5);
        const auto rel = primitive_relation(m, m.height());
        EXPECT_TRUE(rel.gamma.empty());
        EXPECT_EQ(relation_text(rel), ray_symbol(P(m.height())) + " + " + ray_symbol(N(m.height())) + " = 0");
    }
}

TEST(PrimitiveRelation, OutOfRange) {
    EXPECT_THROW(primitive_relation(BottMatrix(3), 0), std::out_of_range);
    EXPECT_THROW(primitive_relation(BottMatrix(3), 4), std::out_of_range);
}

TEST(AllRelations, M7MatchesWorkedList) {
    const auto rels = all_relations(load("m7.mat"));
    ASSERT_EQ(rels.size(), 7u);
    const std::vector<std::string> text = {
        "e_1^+ + e_1^- = e_2^+ + e_3^+ + e_4^+ + 2 e_5^- + e_6^- + e_7^+",
        "e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+",
        "e_3^+ + e_3^- = e_5^+ + e_7^+",
        "e_4^+ + e_4^- = e_5^+ + 2 e_6^- + e_7^-",
        "e_5^+ + e_5^- = e_6^+ + 2 e_7^-",
        "e_6^+ + e_6^- = e_7^+",
        "e_7^+ + e_7^- = 0",
    };
    for (Index i = 0; i < 7; ++i) EXPECT_EQ(relation_text(rels[i]), text[i]);
}

TEST(AllRelations, M7WithNonzeroBeta36) {
    // beta_36 = -1 forces e_6^+ into relation 3; everything else is unchanged
    const auto printed = all_relations(load("m7_printed.mat"));
    const auto fixture = all_relations(load("m7.mat"));
    EXPECT_EQ(relation_text(printed[2]), "e_3^+ + e_3^- = e_5^+ + e_6^+ + e_7^+");
    for (Index i : {0, 1, 3, 4, 5, 6}) EXPECT_EQ(printed[i].gamma, fixture[i].gamma);
    PrimitiveRelation shortened = printed[2];
    shortened.gamma = terms({{P(5), 1}, {P(7), 1}});
    EXPECT_FALSE(satisfies_lattice_identity(load("m7_printed.mat"), shortened));
    EXPECT_TRUE(satisfies_lattice_identity(load("m7.mat"), shortened));
}

TEST(AllRelations, IdentityAndHirzebruch) {
    for (const auto& rel : all_relations(BottMatrix::identity(6))) EXPECT_TRUE(rel.gamma.empty());
    const auto h2 = all_relations(hirzebruch(-2));
    EXPECT_EQ(h2[0].gamma, terms({{P(2), 2}}));
    EXPECT_TRUE(h2[1].gamma.empty());
    const auto h_pos = all_relations(hirzebruch(3));
    EXPECT_EQ(h_pos[0].gamma, terms({{N(2), 3}}));
    EXPECT_EQ(h_pos[0].trace.pivots, (std::vector<Index>{1, 2}));
}

TEST(CurveClass, FromRelation) {
    const auto rels = all_relations(load("m7.mat"));
    EXPECT_EQ(rels[0].curve_class(7), curve({1, -1, -1, -1, 0, 0, -1}));
    EXPECT_EQ(rels[6].curve_class(7), curve({0, 0, 0, 0, 0, 0, 1}));
}

TEST(RelationWall, M7RowOne) {
    const auto m = load("m7.mat");
    const auto w = relation_wall(m, 1);
    EXPECT_EQ(w.omitted(), 1u);
    EXPECT_EQ(cone_generators(w.flanking_cone(Sign::plus)),
              (std::vector<RayId>{P(1), P(2), P(3), P(4), N(5), N(6), P(7)}));
    EXPECT_EQ(cone_generators(w.flanking_cone(Sign::minus)),
              (std::vector<RayId>{N(1), P(2), P(3), P(4), N(5), N(6), P(7)}));
    EXPECT_EQ(wall_curve_class(m, w), primitive_relation(m, 1).curve_class(7));
}

TEST(RelationWall, IdentityAndHirzebruch) {
    const auto id = BottMatrix::identity(4);
    for (Index i = 1; i <= 4; ++i) {
        const auto w = relation_wall(id, i);
        EXPECT_EQ(w.omitted(), i);
        for (Index j = 1; j <= 4; ++j)
            if (j != i) {
                EXPECT_EQ(w.sign(j), Sign::plus);
            }
    }
    const auto m = hirzebruch(-1);
    const auto w = relation_wall(m, 1);
    EXPECT_EQ(w.sign(2), Sign::plus);
    EXPECT_EQ(wall_curve_class(m, w), curve({1, -1}));
}

TEST(RelationProperties, AgreeWithBruteForceCone) {
    MatrixGen gen(31);
    for (int k = 0; k < 150; ++k) {
        const auto m = gen.next(1, 7, -5, 5);
        for (Index i = 1; i <= m.height(); ++i) {
            const auto rel = primitive_relation(m, i);
            const auto expected = brute_force_relation(m, i);
            ASSERT_EQ(rel.gamma.size(), expected.size());
            for (std::size_t t = 0; t < expected.size(); ++t) {
                EXPECT_EQ(rel.gamma[t].ray, expected[t].first);
                EXPECT_EQ(rel.gamma[t].c, expected[t].second);
            }
        }
    }
}

TEST(RelationProperties, TraceInvariants) {
    MatrixGen gen(37);
    for (int k = 0; k < 300; ++k) {
        const auto m = gen.next(1, 8, -5, 5);
        for (const auto& rel : all_relations(m)) {
            const auto& piv = rel.trace.pivots;
            ASSERT_EQ(piv.front(), rel.i);
            for (std::size_t t = 1; t < piv.size(); ++t) ASSERT_LT(piv[t - 1], piv[t]);
            ASSERT_LE(piv.back(), m.height());
            ASSERT_EQ(rel.trace.a_table, recurrence_table(m, rel.i, piv));
            ASSERT_TRUE(satisfies_lattice_identity(m, rel));
            Index last = rel.i;
            for (const auto& t : rel.gamma) {
                ASSERT_GT(t.c, 0);
                ASSERT_GT(t.ray.index, last);  // sorted, one ray per index, all > i
                last = t.ray.index;
            }
            const auto w = relation_wall(m, rel);
            ASSERT_EQ(wall_curve_class(m, w), rel.curve_class(m.height()));
        }
    }
}

TEST(RelationProperties, ClassesFormABasis) {
    MatrixGen gen(41);
    for (int k = 0; k < 100; ++k) {
        const auto m = gen.next(1, 8, -5, 5);
        std::vector<std::vector<Integer>> rows;
        for (const auto& rel : all_relations(m)) {
            std::vector<Integer> row;
            for (const auto& v : rel.curve_class(m.height()).ints) row.push_back(numerator(v));
            rows.push_back(std::move(row));
        }
        // unimodular, so a Z-basis and not just a Q-basis
        const Integer det = linalg::determinant(rows);
        ASSERT_TRUE(det == 1 || det == -1);
    }
}

TEST(RelationProperties, WallClassesAreNonnegativeIntegerCombinations) {
    MatrixGen gen(43);
    for (int k = 0; k < 40; ++k) {
        const auto m = gen.next(1, 6, -4, 4);
        linalg::RatMatrix basis;
        for (const auto& rel : all_relations(m)) basis.push_back(rel.curve_class(m.height()).ints);
        for (const auto& w : enumerate_walls(m)) {
            const auto x = linalg::solve_columns(basis, wall_curve_class(w).ints);
            ASSERT_TRUE(x);
            for (const auto& v : *x) {
                ASSERT_TRUE(is_integral(v));
                ASSERT_GE(v, 0);
            }
        }
    }
}

TEST(RelationProperties, LargeEntriesStayExact) {
    const Integer big("1000000000000000000000");
    const auto m = BottMatrix::from_entries(4, {{1, 2, big}, {2, 3, -big}, {3, 4, big}, {1, 3, 1}, {2, 4, -1}});
    for (const auto& rel : all_relations(m)) {
        EXPECT_TRUE(satisfies_lattice_identity(m, rel));
        EXPECT_EQ(wall_curve_class(m, relation_wall(m, rel)), rel.curve_class(4));
    }
}
