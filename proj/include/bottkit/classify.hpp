/// @file
/// Fano / weak Fano / log Fano classification and Mori-ray typing.
///
/// Every verdict is computed twice: from row conditions on the matrix
/// entries alone, and from the primitive-relation degree sums. The two
/// routes must agree row by row; a disagreement raises InternalError.

#pragma once

#include "bottkit/core.hpp"
#include "bottkit/divisors.hpp"
#include "bottkit/relations.hpp"

#include <optional>

namespace bottkit {

/// Outcome of the row conditions for row i. A label names the witnessing
/// subcase ("(i)", "(ii)", "(ii)(a)".."(ii)(d)"); nullopt means the condition fails.
struct RowConditions {
    Index i = 1;
    std::optional<std::string> n1;
    std::optional<std::string> n2;
    Integer degree_sum;  // sum of c_j over gamma_{P_i}

    bool operator==(const RowConditions&) const = default;
};

struct FanoReport {
    std::vector<RowConditions> rows;
    bool is_fano = true;
    bool is_weak_fano = true;
    bool locally_rigid = true;  // holds whenever the tower is Fano

    bool operator==(const FanoReport&) const = default;
};

namespace detail {

class RowView {
public:
    RowView(const BottMatrix& m, Index i) : m_(m), i_(i) {}

    Integer b(Index j) const { return m_.beta(i_, j); }
    // A_{m,j} = beta_im beta_mj - beta_ij
    Integer a(Index mid, Index j) const { return m_.beta(i_, mid) * m_.beta(mid, j) - m_.beta(i_, j); }

    bool zero_between(Index lo, Index hi, Index skip = 0) const {
        for (Index j = lo + 1; j < hi; ++j)
            if (j != skip && b(j) != 0) return false;
        return true;
    }

private:
    const BottMatrix& m_;
    Index i_;
};

inline std::optional<std::string> condition_n1(const BottMatrix& m, Index i) {
    const Index r = m.height();
    const RowView row(m, i);
    std::vector<Index> pos, neg;
    for (Index j = i + 1; j <= r; ++j) {
        if (row.b(j) > 0) pos.push_back(j);
        if (row.b(j) < 0) neg.push_back(j);
    }
    if (pos.empty()) {
        if (neg.size() == 0 || (neg.size() == 1 && row.b(neg[0]) == -1)) return "(i)";
        return std::nullopt;
    }
    for (Index mid = i + 1; mid <= r; ++mid) {
        if (row.b(mid) != 1 || !row.zero_between(i, mid)) continue;
        bool tail = true;
        for (Index j = mid + 1; j <= r && tail; ++j) tail = row.b(j) == m.beta(mid, j);
        if (tail) return "(ii)";
    }
    return std::nullopt;
}

inline std::optional<std::string> condition_n2(const BottMatrix& m, Index i) {
    const Index r = m.height();
    const RowView row(m, i);
    std::vector<Index> pos, neg;
    for (Index j = i + 1; j <= r; ++j) {
        if (row.b(j) > 0) pos.push_back(j);
        if (row.b(j) < 0) neg.push_back(j);
    }
    if (pos.empty()) {
        if (neg.empty()) return "(i)";
        if (neg.size() == 1 && (row.b(neg[0]) == -1 || row.b(neg[0]) == -2)) return "(i)";
        if (neg.size() == 2 && row.b(neg[0]) == -1 && row.b(neg[1]) == -1) return "(i)";
        return std::nullopt;
    }

    auto a_zero_after = [&](Index mid, Index from, Index to, Index skip = 0) {
        for (Index j = from; j <= to; ++j)
            if (j != skip && row.a(mid, j) != 0) return false;
        return true;
    };

    // (a)
    for (Index mid = i + 1; mid <= r; ++mid)
        if ((row.b(mid) == 1 || row.b(mid) == 2) && row.zero_between(i, mid) &&
            a_zero_after(mid, mid + 1, r))
            return "(ii)(a)";
    // (b)
    for (Index m1 = i + 1; m1 <= r; ++m1)
        for (Index m2 = m1 + 1; m2 <= r; ++m2)
            if (row.b(m1) == -1 && row.b(m2) == 1 && row.zero_between(i, m2, m1) &&
                a_zero_after(m2, m2 + 1, r))
                return "(ii)(b)";
    // (c)
    for (Index m1 = i + 1; m1 <= r; ++m1)
        for (Index m2 = m1 + 1; m2 <= r; ++m2)
            if (row.b(m1) == 1 && row.a(m1, m2) == 1 && row.zero_between(i, m1) &&
                a_zero_after(m1, m1 + 1, r, m2))
                return "(ii)(c)";
    // (d)
    for (Index m1 = i + 1; m1 <= r; ++m1)
        for (Index m2 = m1 + 1; m2 <= r; ++m2) {
            if (row.b(m1) != 1 || row.a(m1, m2) != -1 || !row.zero_between(i, m1) ||
                !a_zero_after(m1, m1 + 1, m2 - 1))
                continue;
            bool tail = true;
            for (Index j = m2 + 1; j <= r && tail; ++j) tail = m.beta(m2, j) + row.a(m1, j) == 0;
            if (tail) return "(ii)(d)";
        }
    return std::nullopt;
}

}  // namespace detail

/// Row conditions N_i^1 / N_i^2 on the matrix entries only.
inline RowConditions row_conditions(const BottMatrix& m, Index i) {
    return {i, detail::condition_n1(m, i), detail::condition_n2(m, i), 0};
}

inline FanoReport classify_fano(const BottMatrix& m, const std::vector<PrimitiveRelation>& relations) {
    FanoReport report;
    for (Index i = 1; i <= m.height(); ++i) {
        RowConditions row = row_conditions(m, i);
        row.degree_sum = relations.at(i - 1).degree_sum();
        if (row.n1.has_value() != (row.degree_sum <= 1))
            throw InternalError("row " + std::to_string(i) + ": condition N1 disagrees with degree sum " +
                                row.degree_sum.str());
        if (row.n2.has_value() != (row.degree_sum <= 2))
            throw InternalError("row " + std::to_string(i) + ": condition N2 disagrees with degree sum " +
                                row.degree_sum.str());
        report.is_fano = report.is_fano && row.n1.has_value();
        report.is_weak_fano = report.is_weak_fano && row.n2.has_value();
        report.rows.push_back(std::move(row));
    }
    ensure(!report.is_fano || report.is_weak_fano, "Fano but not weak Fano");
    report.locally_rigid = report.is_fano;
    return report;
}

inline FanoReport classify_fano(const BottMatrix& m) { return classify_fano(m, all_relations(m)); }

struct LogFanoReport {
    std::vector<Rational> k;  // k_i = d_i - 2 + sum c_j
    bool is_log_fano = false;
    bool floor_ok = false;    // every coefficient of D lies in [0, 1)
    std::string reason;       // empty when log Fano

    bool operator==(const LogFanoReport&) const = default;
};

inline LogFanoReport log_fano_certificate(const std::vector<PrimitiveRelation>& relations,
                                          const Divisor& d) {
    const Index r = relations.size();
    if (d.height() != r) throw std::invalid_argument("divisor height mismatch");
    LogFanoReport report;
    report.floor_ok = true;
    for (Sign s : {Sign::plus, Sign::minus})
        for (Index j = 1; j <= r && report.floor_ok; ++j) {
            const Rational& a = d.coeff({j, s});
            if (a < 0 || a >= 1) {
                report.floor_ok = false;
                report.reason = "coefficient of D_" + to_string(RayId{j, s}) + " is " + a.str() +
                                ", outside [0, 1)";
            }
        }
    bool all_negative = true;
    for (const auto& rel : relations) {
        Rational k = relation_degree(rel, d) - 2 + Rational(rel.degree_sum());
        if (k >= 0) {
            if (all_negative && report.reason.empty())
                report.reason = "k_" + std::to_string(rel.i) + " = " + k.str() + " is not negative";
            all_negative = false;
        }
        report.k.push_back(std::move(k));
    }
    report.is_log_fano = report.floor_ok && all_negative;
    return report;
}

inline LogFanoReport log_fano_certificate(const BottMatrix& m, const Divisor& d) {
    return log_fano_certificate(all_relations(m), d);
}

struct RayType {
    Index i = 1;
    bool is_extremal = true;  // every r(P_i) spans an extremal ray
    bool is_mori = false;

    bool operator==(const RayType&) const = default;
};

/// Mori iff gamma is empty or a single ray with c = 1; cross-checked against
/// K . r(P_i) = -2 + sum c_j < 0.
inline std::vector<RayType> ray_types(const std::vector<PrimitiveRelation>& relations) {
    std::vector<RayType> out;
    for (const auto& rel : relations) {
        const bool shape = rel.gamma.empty() || (rel.gamma.size() == 1 && rel.gamma[0].c == 1);
        const bool sign = -2 + rel.degree_sum() < 0;
        if (shape != sign)
            throw InternalError("relation " + std::to_string(rel.i) +
                                ": Mori shape test disagrees with the sign of K.r(P_i)");
        out.push_back({rel.i, true, shape});
    }
    return out;
}

inline std::vector<RayType> ray_types(const BottMatrix& m) { return ray_types(all_relations(m)); }

}  // namespace bottkit
