// Shared test helpers: fixtures, generators, and independent oracles.
//
// The oracles here deliberately avoid the library's algorithms: relations
// are found by searching all maximal cones with plain Gauss-Jordan solves,
// plus-basis coordinates by cancelling the minus coefficients with a
// character, and determinants by cofactor expansion.

#pragma once

#include "bottkit/bottkit.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace testing_support {

using namespace bottkit;

inline std::string fixture_path(const std::string& name) { return std::string(BOTTKIT_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline BottMatrix load(const std::string& name) { return parse_matrix(read_fixture(name)); }

inline BottMatrix hirzebruch(long b) { return BottMatrix::from_entries(2, {{1, 2, Integer(b)}}); }

inline RayId P(Index i) { return {i, Sign::plus}; }
inline RayId N(Index i) { return {i, Sign::minus}; }

/// Uniform random matrices with a fixed seed.
class MatrixGen {
public:
    explicit MatrixGen(std::uint64_t seed) : rng_(seed) {}

    BottMatrix next(Index r_min, Index r_max, long lo, long hi) {
        const Index r = std::uniform_int_distribution<Index>(r_min, r_max)(rng_);
        return next(r, lo, hi);
    }

    BottMatrix next(Index r, long lo, long hi) {
        std::uniform_int_distribution<long> entry(lo, hi);
        BottMatrix m(r);
        for (Index i = 1; i < r; ++i)
            for (Index j = i + 1; j <= r; ++j) m = m.with_beta(i, j, entry(rng_));
        return m;
    }

    Divisor divisor(Index r, long lo, long hi, long den = 1) {
        std::uniform_int_distribution<long> num(lo, hi);
        Divisor d(r);
        for (Index j = 1; j <= r; ++j) {
            d.set(P(j), Rational(num(rng_), den));
            d.set(N(j), Rational(num(rng_), den));
        }
        return d;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Every matrix with all strict-upper entries in [lo, hi], in lexicographic order.
template <class F>
void for_each_matrix(Index r, long lo, long hi, F&& f) {
    const Index n = r * (r - 1) / 2;
    std::vector<long> v(n, lo);
    while (true) {
        BottMatrix m(r);
        Index k = 0;
        for (Index i = 1; i < r; ++i)
            for (Index j = i + 1; j <= r; ++j) m = m.with_beta(i, j, v[k++]);
        f(m);
        Index pos = n;
        while (pos > 0 && v[pos - 1] == hi) v[--pos] = lo;
        if (pos == 0) return;
        ++v[pos - 1];
    }
}

// ---------------------------------------------------------------------------
// Oracles

/// Solves A x = b for square A by Gauss-Jordan; nullopt if singular.
inline std::optional<std::vector<Rational>> gauss_solve(std::vector<std::vector<Rational>> a,
                                                        std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (std::size_t k = 0; k < n; ++k) b[k] /= a[k][k];
    return b;
}

inline Integer cofactor_det(const std::vector<std::vector<Integer>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Integer det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c] == 0) continue;
        std::vector<std::vector<Integer>> minor;
        for (std::size_t row = 1; row < n; ++row) {
            std::vector<Integer> line;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) line.push_back(a[row][k]);
            minor.push_back(std::move(line));
        }
        det += (c % 2 ? -1 : 1) * a[0][c] * cofactor_det(minor);
    }
    return det;
}

/// Ray generator straight from the definition.
inline std::vector<Integer> ray_vector(const BottMatrix& m, RayId id) {
    std::vector<Integer> u(m.height());
    u[id.index - 1] = id.sign == Sign::plus ? 1 : -1;
    if (id.sign == Sign::minus)
        for (Index j = id.index + 1; j <= m.height(); ++j) u[j - 1] = -m.beta(id.index, j);
    return u;
}

/// u_i^+ + u_i^- written in the unique maximal cone where all coordinates are
/// nonnegative; returns the (ray, c) pairs with c > 0, sorted by index.
inline std::vector<std::pair<RayId, Integer>> brute_force_relation(const BottMatrix& m, Index i) {
    const Index r = m.height();
    std::vector<Rational> target(r);
    {
        auto plus = ray_vector(m, P(i)), minus = ray_vector(m, N(i));
        for (Index k = 0; k < r; ++k) target[k] = Rational(plus[k] + minus[k]);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
        std::vector<RayId> gens;
        for (Index j = 1; j <= r; ++j) gens.push_back({j, (mask >> (j - 1)) & 1 ? Sign::minus : Sign::plus});
        std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
        for (Index c = 0; c < r; ++c) {
            const auto u = ray_vector(m, gens[c]);
            for (Index row = 0; row < r; ++row) a[row][c] = Rational(u[row]);
        }
        const auto x = gauss_solve(a, target);
        if (!x) continue;
        bool ok = true;
        for (const auto& v : *x) ok = ok && v >= 0;
        if (!ok) continue;
        std::vector<std::pair<RayId, Integer>> out;
        for (Index c = 0; c < r; ++c)
            if ((*x)[c] != 0) {
                if (!is_integral((*x)[c])) throw std::logic_error("non-integral coordinate in unimodular cone");
                out.push_back({gens[c], numerator((*x)[c])});
            }
        return out;
    }
    throw std::logic_error("no cone contains u_i^+ + u_i^-");
}

/// Plus-basis coordinates by adding div(chi^v) with v chosen to cancel every
/// minus coefficient: <v, u_j^-> = -a_{j-}; then g_j = a_{j+} + v_j.
inline PlusDivisor plus_coordinates(const BottMatrix& m, const Divisor& d) {
    const Index r = m.height();
    std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r));
    std::vector<Rational> rhs(r);
    for (Index j = 1; j <= r; ++j) {
        const auto u = ray_vector(m, N(j));
        for (Index k = 0; k < r; ++k) a[j - 1][k] = Rational(u[k]);
        rhs[j - 1] = -d.coeff(N(j));
    }
    const auto v = gauss_solve(a, rhs);
    if (!v) throw std::logic_error("minus rays are not a basis");
    PlusDivisor g(r);
    for (Index j = 1; j <= r; ++j) g.g[j - 1] = d.coeff(P(j)) + (*v)[j - 1];
    return g;
}

/// a-table from the written recurrences, independent of the reduction loop.
inline std::map<std::pair<Index, Index>, Integer> recurrence_table(const BottMatrix& m, Index i,
                                                                   const std::vector<Index>& pivots) {
    const Index r = m.height();
    std::map<std::pair<Index, Index>, Integer> t;
    for (Index j = i + 1; j <= r; ++j) t[{1, j}] = m.beta(i, j);
    if (pivots.size() >= 2) {
        const Index j2 = pivots[1];
        for (Index j = j2 + 1; j <= r; ++j) t[{2, j}] = m.beta(i, j2) * m.beta(j2, j) - m.beta(i, j);
    }
    for (Index k = 3; k <= pivots.size(); ++k) {
        const Index jk = pivots[k - 1];
        for (Index j = jk + 1; j <= r; ++j) t[{k, j}] = -t.at({k - 1, jk}) * m.beta(jk, j) + t.at({k - 1, j});
    }
    return t;
}

inline std::vector<RelationTerm> terms(std::initializer_list<std::pair<RayId, long>> list) {
    std::vector<RelationTerm> out;
    for (const auto& [ray, c] : list) out.push_back({ray, Integer(c)});
    return out;
}

inline PlusDivisor plus(std::initializer_list<long> g) {
    std::vector<Rational> v;
    for (long x : g) v.emplace_back(x);
    return PlusDivisor(std::move(v));
}

inline CurveClass curve(std::initializer_list<long> ints) {
    CurveClass c;
    for (long x : ints) c.ints.emplace_back(x);
    return c;
}

}  // namespace testing_support

// Readable failure messages; gtest finds these by argument-dependent lookup.
namespace bottkit {

inline void PrintTo(RayId id, std::ostream* os) { *os << to_string(id); }
inline void PrintTo(const Integer& v, std::ostream* os) { *os << v.str(); }
inline void PrintTo(const Rational& v, std::ostream* os) { *os << v.str(); }
inline void PrintTo(const CurveClass& c, std::ostream* os) { *os << to_string(c); }
inline void PrintTo(const PlusDivisor& d, std::ostream* os) { *os << "plus" << detail::vector_text(d.g); }
inline void PrintTo(const Divisor& d, std::ostream* os) { *os << divisor_text(d); }
inline void PrintTo(const RelationTerm& t, std::ostream* os) { *os << t.c.str() << " " << to_string(t.ray); }
inline void PrintTo(const BottMatrix& m, std::ostream* os) { *os << to_text(m); }

}  // namespace bottkit
