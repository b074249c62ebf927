/// @file
/// Small dense exact linear algebra over Integer / Rational.
///
/// Matrices are row-major std::vector<std::vector<T>>. Nothing here knows about
/// Bott towers; the fan oracle and the tests use these routines as an
/// independent route to the same quantities the structural code computes.

#pragma once

#include "bottkit/core.hpp"

#include <optional>

namespace bottkit::linalg {

using IntMatrix = std::vector<std::vector<Integer>>;
using RatMatrix = std::vector<std::vector<Rational>>;

/// Fraction-free (Bareiss) determinant of a square integer matrix.
inline Integer determinant(IntMatrix a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto& v : a[i]) out[i].emplace_back(v);
    return out;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RatMatrix& a) {
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t p = row;
        while (p < rows && a[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[row], a[p]);
        const Rational inv = 1 / a[row][col];
        for (auto& v : a[row]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RatMatrix a) { return row_reduce(a).size(); }

/// Solves sum_k x_k * columns[k] = target; nullopt if inconsistent or not unique.
inline std::optional<std::vector<Rational>> solve_columns(const RatMatrix& columns,
                                                          const std::vector<Rational>& target) {
    const std::size_t n = columns.size();
    const std::size_t dim = target.size();
    RatMatrix aug(dim, std::vector<Rational>(n + 1));
    for (std::size_t k = 0; k < n; ++k) {
        if (columns[k].size() != dim) throw std::invalid_argument("column dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) aug[i][k] = columns[k][i];
    }
    for (std::size_t i = 0; i < dim; ++i) aug[i][n] = target[i];
    const auto pivots = row_reduce(aug);
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;  // inconsistent
    if (pivots.size() != n) return std::nullopt;                     // underdetermined
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][n];
    return x;
}

/// Exact feasibility test: is target a nonnegative combination of generators?
///
/// Phase-one simplex with Bland's rule on a rational tableau; terminates
/// without cycling and never rounds.
inline bool in_cone(const RatMatrix& generators, const std::vector<Rational>& target) {
    const std::size_t n = generators.size();
    const std::size_t m = target.size();
    // Columns: n structural, then m artificials; last column is the rhs.
    RatMatrix t(m, std::vector<Rational>(n + m + 1));
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = target[i] < 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (generators[k].size() != m) throw std::invalid_argument("generator dimension mismatch");
            t[i][k] = flip ? -generators[k][i] : generators[k][i];
        }
        t[i][n + i] = 1;
        t[i][n + m] = flip ? -target[i] : target[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Objective: minimise the sum of artificials. Reduced costs of the
    // structural columns are -(sum of their rows).
    std::vector<Rational> cost(n + m + 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k <= n + m; ++k)
            if (k < n || k == n + m) cost[k] -= t[i][k];

    while (true) {
        std::size_t enter = n + m;
        for (std::size_t k = 0; k < n + m; ++k)
            if (cost[k] < 0) {
                enter = k;
                break;
            }
        if (enter == n + m) break;  // optimal

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            const Rational ratio = t[i][n + m] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break;  // unbounded cannot happen for phase one; treat as optimal

        const Rational inv = 1 / t[leave][enter];
        for (auto& v : t[leave]) v *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t k = 0; k <= n + m; ++k) t[i][k] -= f * t[leave][k];
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t k = 0; k <= n + m; ++k) cost[k] -= f * t[leave][k];
        }
        basis[leave] = enter;
    }
    // Remaining infeasibility is -cost[rhs].
    return cost[n + m] == 0;
}

}  // namespace bottkit::linalg
