/// @file
/// Primitive relations r(P_i) of a Bott tower.
///
/// The primitive collections are exactly P_i = {rho_i^+, rho_i^-}. Each
/// relation is produced by the pivot reduction: start from
///   e_i^+ + e_i^- = -sum_{j>i} beta_ij e_j^+
/// and repeatedly rewrite the leftmost e_j^+ carrying a negative coefficient
/// through -e_j^+ = e_j^- + sum_{k>j} beta_jk e_k^+. Pivots only move right,
/// so the loop terminates after at most r - i substitutions.

#pragma once

#include "bottkit/core.hpp"
#include "bottkit/fan.hpp"

#include <map>

namespace bottkit {

/// Pivot sequence I_i = {j_1 = i, j_2, ..., j_m} and the a-table.
///
/// a(1, j) = beta_ij for j > i. For levels k >= 2, a(k, j) (j > j_k) is the
/// coefficient of e_j^+ after the k-th substitution, which satisfies
///   a(2, j) = beta_{i j_2} beta_{j_2 j} - beta_ij,
///   a(k, j) = -a(k-1, j_k) beta_{j_k j} + a(k-1, j).
struct ReductionTrace {
    std::vector<Index> pivots;
    std::map<std::pair<Index, Index>, Integer> a_table;  // (level, column) -> value

    bool operator==(const ReductionTrace&) const = default;
};

struct RelationTerm {
    RayId ray;
    Integer c;  // strictly positive

    bool operator==(const RelationTerm&) const = default;
};

/// e_i^+ + e_i^- = sum_{(rho, c) in gamma} c u_rho, gamma sorted by index.
struct PrimitiveRelation {
    Index i = 1;
    std::vector<RelationTerm> gamma;
    ReductionTrace trace;

    /// sum of c over gamma; equals K . r(P_i) + 2
    Integer degree_sum() const {
        Integer s = 0;
        for (const auto& t : gamma) s += t.c;
        return s;
    }

    /// c for the given ray, 0 if the ray is not in gamma.
    Integer coefficient(RayId ray) const {
        for (const auto& t : gamma)
            if (t.ray == ray) return t.c;
        return 0;
    }

    /// Intersection numbers with D_{rho_j^+}: 1 at i, -c where rho_j^+ is in gamma.
    CurveClass curve_class(Index r) const {
        CurveClass cls{std::vector<Rational>(r)};
        cls.ints.at(i - 1) = 1;
        for (const auto& t : gamma)
            if (t.ray.sign == Sign::plus) cls.ints.at(t.ray.index - 1) = -t.c;
        return cls;
    }

    bool operator==(const PrimitiveRelation&) const = default;
};

/// Exact check of u_{rho_i^+} + u_{rho_i^-} - sum c u_rho = 0.
inline bool satisfies_lattice_identity(const BottMatrix& m, const PrimitiveRelation& rel) {
    const Index r = m.height();
    std::vector<Integer> sum = ray_coords(m, {rel.i, Sign::minus});
    sum[rel.i - 1] += 1;
    for (const auto& t : rel.gamma) {
        const auto u = ray_coords(m, t.ray);
        for (Index k = 0; k < r; ++k) sum[k] -= t.c * u[k];
    }
    return std::all_of(sum.begin(), sum.end(), [](const Integer& v) { return v == 0; });
}

inline PrimitiveRelation primitive_relation(const BottMatrix& m, Index i) {
    const Index r = m.height();
    if (i < 1 || i > r) throw std::out_of_range("relation index out of range");

    PrimitiveRelation rel;
    rel.i = i;
    rel.trace.pivots.push_back(i);

    // coef[j-1]: current coefficient of e_j^+; minus_coef[j-1]: of e_j^- (pivots only)
    std::vector<Integer> coef(r), minus_coef(r);
    for (Index j = i + 1; j <= r; ++j) {
        coef[j - 1] = -m.beta(i, j);
        rel.trace.a_table[{1, j}] = m.beta(i, j);
    }

    Index scan = i + 1;
    while (true) {
        Index pivot = 0;
        for (Index j = scan; j <= r; ++j)
            if (coef[j - 1] < 0) {
                pivot = j;
                break;
            }
        if (pivot == 0) break;

        rel.trace.pivots.push_back(pivot);
        const Index level = rel.trace.pivots.size();
        const Integer t = -coef[pivot - 1];
        minus_coef[pivot - 1] = t;
        coef[pivot - 1] = 0;
        for (Index k = pivot + 1; k <= r; ++k) {
            coef[k - 1] += t * m.beta(pivot, k);
            rel.trace.a_table[{level, k}] = coef[k - 1];
        }
        scan = pivot + 1;
    }

    for (Index j = i + 1; j <= r; ++j) {
        if (minus_coef[j - 1] != 0)
            rel.gamma.push_back({{j, Sign::minus}, minus_coef[j - 1]});
        else if (coef[j - 1] != 0)
            rel.gamma.push_back({{j, Sign::plus}, coef[j - 1]});
    }

    for (const auto& term : rel.gamma) ensure(term.c > 0, "primitive relation coefficient not positive");
    ensure(satisfies_lattice_identity(m, rel), "primitive relation fails the lattice identity");
    return rel;
}

inline std::vector<PrimitiveRelation> all_relations(const BottMatrix& m) {
    std::vector<PrimitiveRelation> out;
    out.reserve(m.height());
    for (Index i = 1; i <= m.height(); ++i) out.push_back(primitive_relation(m, i));
    return out;
}

/// Signs of the wall tau_i: minus exactly on I_i \ {i}.
inline std::vector<Sign> relation_wall_signs(Index r, const PrimitiveRelation& rel) {
    std::vector<Sign> signs(r, Sign::plus);
    for (Index j : rel.trace.pivots)
        if (j != rel.i) signs.at(j - 1) = Sign::minus;
    return signs;
}

/// The wall tau_i whose invariant curve has class r(P_i). Its relation is
/// solved independently by the fan module and checked against the relation.
inline Wall relation_wall(const BottMatrix& m, const PrimitiveRelation& rel) {
    Wall w = solve_wall(m, rel.i, relation_wall_signs(m.height(), rel));
    ensure(wall_curve_class(w) == rel.curve_class(m.height()),
           "wall class of tau_i differs from r(P_i)");
    return w;
}

inline Wall relation_wall(const BottMatrix& m, Index i) {
    return relation_wall(m, primitive_relation(m, i));
}

/// "e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+"
inline std::string relation_text(const PrimitiveRelation& rel) {
    std::string s = ray_symbol({rel.i, Sign::plus}) + " + " + ray_symbol({rel.i, Sign::minus}) + " = ";
    if (rel.gamma.empty()) return s + "0";
    for (std::size_t k = 0; k < rel.gamma.size(); ++k) {
        if (k) s += " + ";
        if (rel.gamma[k].c != 1) s += rel.gamma[k].c.str() + " ";
        s += ray_symbol(rel.gamma[k].ray);
    }
    return s;
}

}  // namespace bottkit
