/// @file
/// The fan of a Bott tower: ray generators, maximal cones and walls, exact
/// wall relations, and the brute-force wall oracle for nef/ample/Mori checks.
///
/// Maximal cones are sign vectors (one sign per index). A wall omits one
/// index i; its two flanking maximal cones take sign + resp. - at i.

#pragma once

#include "bottkit/core.hpp"
#include "bottkit/linalg.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <set>

namespace bottkit {

inline constexpr Index default_oracle_cap = 16;

/// Cap from BOTTKIT_ORACLE_CAP when set to a positive integer, else the default.
inline Index oracle_cap_from_env() {
    if (const char* env = std::getenv("BOTTKIT_ORACLE_CAP")) {
        Integer v;
        if (detail::parse_integer(env, v) && v >= 1 && v <= 62) return v.convert_to<Index>();
    }
    return default_oracle_cap;
}

/// The fan is too large for exhaustive wall enumeration under the configured cap.
class OracleCapExceeded : public std::runtime_error {
public:
    OracleCapExceeded(Index r, Index cap)
        : std::runtime_error("oracle inapplicable: r=" + std::to_string(r) +
                             " exceeds the wall-enumeration cap " + std::to_string(cap)),
          r_(r), cap_(cap) {}
    Index height() const noexcept { return r_; }
    Index cap() const noexcept { return cap_; }

private:
    Index r_, cap_;
};

struct Ray {
    RayId id;
    std::vector<Integer> coords;  // primitive generator in Z^r

    bool operator==(const Ray&) const = default;
};

/// u_rho for a single ray: e_i^+ is the standard basis vector,
/// e_i^- = -e_i^+ - sum_{j>i} beta_ij e_j^+.
inline std::vector<Integer> ray_coords(const BottMatrix& m, RayId id) {
    const Index r = m.height();
    if (id.index < 1 || id.index > r) throw std::out_of_range("ray index out of range");
    std::vector<Integer> u(r);
    if (id.sign == Sign::plus) {
        u[id.index - 1] = 1;
    } else {
        u[id.index - 1] = -1;
        for (Index j = id.index + 1; j <= r; ++j) u[j - 1] = -m.beta(id.index, j);
    }
    return u;
}

/// e_1^+ .. e_r^+, then e_1^- .. e_r^-.
inline std::vector<Ray> build_rays(const BottMatrix& m) {
    std::vector<Ray> rays;
    rays.reserve(2 * m.height());
    for (Sign s : {Sign::plus, Sign::minus})
        for (Index i = 1; i <= m.height(); ++i) rays.push_back({{i, s}, ray_coords(m, {i, s})});
    return rays;
}

/// Generators of the maximal cone with the given sign vector (1 entry per index).
inline std::vector<RayId> cone_generators(const std::vector<Sign>& signs) {
    std::vector<RayId> out;
    for (Index j = 1; j <= signs.size(); ++j) out.push_back({j, signs[j - 1]});
    return out;
}

/// Numerical class of a torus-invariant curve, as its intersection numbers with
/// D_{rho_1^+}, ..., D_{rho_r^+} (a basis of Pic).
struct CurveClass {
    std::vector<Rational> ints;

    Index height() const noexcept { return ints.size(); }
    const Rational& operator[](Index j) const { return ints.at(j - 1); }  // 1-based

    auto operator<=>(const CurveClass&) const = default;
};

/// Pairing of a plus-basis divisor class with a curve class.
inline Rational intersect(const PlusDivisor& d, const CurveClass& c) {
    if (d.height() != c.height()) throw std::invalid_argument("height mismatch in intersection");
    Rational sum = 0;
    for (Index j = 0; j < c.ints.size(); ++j) sum += d.g[j] * c.ints[j];
    return sum;
}

/// Divides an integral class by the gcd of its entries.
inline CurveClass primitive(const CurveClass& c) {
    Integer g = 0;
    for (const auto& v : c.ints) {
        if (!is_integral(v)) throw std::invalid_argument("primitive() needs an integral class");
        g = gcd(g, numerator(v));
    }
    if (g <= 1) return c;
    CurveClass out = c;
    for (auto& v : out.ints) v /= g;
    return out;
}

inline std::string to_string(const CurveClass& c) {
    std::string s = "(";
    for (Index k = 0; k < c.ints.size(); ++k) s += (k ? ", " : "") + c.ints[k].str();
    return s + ")";
}

/// An (r-1)-cone in canonical form, with its solved wall relation
///   u_{rho_i^+} + u_{rho_i^-} + sum_{j != i} b_j u_{rho_j^{s_j}} = 0.
class Wall {
public:
    Wall(Index omitted, std::vector<Sign> signs, std::vector<Integer> b)
        : omitted_(omitted), signs_(std::move(signs)), b_(std::move(b)) {}

    Index height() const noexcept { return signs_.size(); }
    Index omitted() const noexcept { return omitted_; }

    /// Sign of the shared generator at index j (j != omitted).
    Sign sign(Index j) const {
        check(j);
        return signs_[j - 1];
    }
    const Integer& relation_b(Index j) const {
        check(j);
        return b_[j - 1];
    }

    std::vector<RayId> shared_rays() const {
        std::vector<RayId> out;
        for (Index j = 1; j <= height(); ++j)
            if (j != omitted_) out.push_back({j, signs_[j - 1]});
        return out;
    }

    /// Sign vector of a flanking maximal cone: `at_omitted` at the omitted index.
    std::vector<Sign> flanking_cone(Sign at_omitted) const {
        auto s = signs_;
        s[omitted_ - 1] = at_omitted;
        return s;
    }

    bool operator==(const Wall&) const = default;

private:
    void check(Index j) const {
        if (j < 1 || j > height() || j == omitted_)
            throw std::out_of_range("wall index " + std::to_string(j) + " is not a shared index");
    }

    Index omitted_;
    std::vector<Sign> signs_;  // signs_[omitted-1] is a placeholder (plus)
    std::vector<Integer> b_;   // b_[omitted-1] is 0
};

/// Solves the wall relation exactly.
///
/// The shared generators together with any generator at the omitted index
/// are triangular in the lattice coordinates (ray j is +-1 at position j and
/// zero before it), so forward substitution over positions 1..r determines
/// each b_j; at position `omitted` there is no unknown and the residual must
/// vanish. Each division is rational and integrality is checked, not assumed.
inline Wall solve_wall(const BottMatrix& m, Index omitted, std::vector<Sign> signs) {
    const Index r = m.height();
    if (omitted < 1 || omitted > r) throw std::out_of_range("omitted index out of range");
    if (signs.size() != r) throw std::invalid_argument("sign vector must have length r");
    signs[omitted - 1] = Sign::plus;

    std::vector<std::vector<Integer>> u(r);
    for (Index j = 1; j <= r; ++j)
        if (j != omitted) u[j - 1] = ray_coords(m, {j, signs[j - 1]});

    // target = -(e_i^+ + e_i^-) = sum_{j>i} beta_ij e_j^+
    std::vector<Integer> target(r);
    for (Index j = omitted + 1; j <= r; ++j) target[j - 1] = m.beta(omitted, j);

    std::vector<Integer> b(r);
    for (Index k = 1; k <= r; ++k) {
        Integer residual = target[k - 1];
        for (Index j = 1; j < k; ++j)
            if (j != omitted && b[j - 1] != 0) residual -= b[j - 1] * u[j - 1][k - 1];
        if (k == omitted) {
            ensure(residual == 0, "wall relation inconsistent at the omitted index");
            continue;
        }
        const Integer& diag = u[k - 1][k - 1];
        ensure(diag != 0, "shared generators are not independent");
        const Rational q(residual, diag);
        ensure(is_integral(q), "wall relation is not integral");
        b[k - 1] = numerator(q);
    }

    // substitute back
    const auto minus = ray_coords(m, {omitted, Sign::minus});
    for (Index k = 1; k <= r; ++k) {
        Integer sum = minus[k - 1] + (k == omitted ? 1 : 0);
        for (Index j = 1; j <= k; ++j)
            if (j != omitted && b[j - 1] != 0) sum += b[j - 1] * u[j - 1][k - 1];
        ensure(sum == 0, "wall relation does not vanish");
    }
    return Wall(omitted, std::move(signs), std::move(b));
}

inline Index wall_count(Index r) { return r << (r - 1); }

/// Visits every wall in canonical order: omitted index ascending, then the
/// signs of the remaining indices as a binary counter (plus = 0, minus = 1,
/// the smallest remaining index most significant).
inline void for_each_wall(const BottMatrix& m, Index cap, const std::function<void(const Wall&)>& visit) {
    const Index r = m.height();
    if (r > cap) throw OracleCapExceeded(r, cap);
    const std::uint64_t patterns = std::uint64_t{1} << (r - 1);
    for (Index omitted = 1; omitted <= r; ++omitted) {
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            std::vector<Sign> signs(r, Sign::plus);
            Index bit = r - 1;
            for (Index j = 1; j <= r; ++j) {
                if (j == omitted) continue;
                --bit;
                if ((mask >> bit) & 1U) signs[j - 1] = Sign::minus;
            }
            visit(solve_wall(m, omitted, std::move(signs)));
        }
    }
}

inline std::vector<Wall> enumerate_walls(const BottMatrix& m, Index cap = default_oracle_cap) {
    std::vector<Wall> walls;
    if (m.height() <= cap) walls.reserve(wall_count(m.height()));
    for_each_wall(m, cap, [&](const Wall& w) { walls.push_back(w); });
    return walls;
}

/// (D_{rho_j^+} . V(tau))_j read off the wall relation.
inline CurveClass wall_curve_class(const Wall& w) {
    CurveClass c{std::vector<Rational>(w.height())};
    for (Index j = 1; j <= w.height(); ++j) {
        if (j == w.omitted())
            c.ints[j - 1] = 1;
        else if (w.sign(j) == Sign::plus)
            c.ints[j - 1] = w.relation_b(j);
    }
    return c;
}

inline CurveClass wall_curve_class(const BottMatrix& m, const Wall& w) {
    if (w.height() != m.height()) throw std::invalid_argument("wall does not belong to this fan");
    return wall_curve_class(w);
}

/// D . V(tau) over all 2r ray coefficients.
inline Rational wall_degree(const Wall& w, const Divisor& d) {
    const Index i = w.omitted();
    Rational sum = d.coeff({i, Sign::plus}) + d.coeff({i, Sign::minus});
    for (Index j = 1; j <= w.height(); ++j)
        if (j != i && w.relation_b(j) != 0) sum += Rational(w.relation_b(j)) * d.coeff({j, w.sign(j)});
    return sum;
}

struct OracleReport {
    std::size_t walls = 0;
    std::vector<CurveClass> classes;       // distinct primitive wall classes, sorted
    std::vector<CurveClass> wall_classes;  // distinct wall classes as found, sorted
    bool is_nef = true;
    bool is_ample = true;
};

/// Brute force over every wall: distinct primitive curve classes and the
/// toric Kleiman test for D.
inline OracleReport oracle_report(const BottMatrix& m, const Divisor& d,
                                  Index cap = default_oracle_cap) {
    if (d.height() != m.height()) throw std::invalid_argument("divisor height mismatch");
    OracleReport report;
    std::set<CurveClass> classes, raw;
    for_each_wall(m, cap, [&](const Wall& w) {
        ++report.walls;
        auto cls = wall_curve_class(w);
        classes.insert(primitive(cls));
        raw.insert(std::move(cls));
        const Rational deg = wall_degree(w, d);
        if (deg < 0) report.is_nef = false;
        if (deg <= 0) report.is_ample = false;
    });
    report.classes.assign(classes.begin(), classes.end());
    report.wall_classes.assign(raw.begin(), raw.end());
    return report;
}

/// Extremal rays of the cone spanned by pairwise non-proportional classes:
/// those not in the cone of the others (exact LP per class).
inline std::vector<CurveClass> extremal_classes(const std::vector<CurveClass>& classes) {
    std::vector<CurveClass> out;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        linalg::RatMatrix others;
        others.reserve(classes.size() - 1);
        for (std::size_t l = 0; l < classes.size(); ++l)
            if (l != k) others.push_back(classes[l].ints);
        if (!linalg::in_cone(others, classes[k].ints)) out.push_back(classes[k]);
    }
    return out;
}

}  // namespace bottkit
