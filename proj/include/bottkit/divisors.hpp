/// @file
/// Divisor classes: change of basis to {D_{rho_j^+}}, the relation degrees
/// d_i = D . r(P_i) (nef/ample test), canonical divisors and the nef-cone
/// generators dual to the primitive relations.

#pragma once

#include "bottkit/core.hpp"
#include "bottkit/fan.hpp"
#include "bottkit/relations.hpp"

namespace bottkit {

/// Lower unitriangular h with D_{rho_i^-} ~ sum_{j <= i} h(i, j) D_{rho_j^+}.
///
///   h(i, i) = 1,  h(i, j) = -sum_{k=j}^{i-1} beta_{ki} h(k, j)  for j < i.
///
/// The weights are beta_{ki} with k < i: the coefficient of D_{rho_k^-} in
/// div(chi^{e_i^+}) is <e_k^-, e_i^+> = -beta_{ki}.
class HTable {
public:
    explicit HTable(const BottMatrix& m) : r_(m.height()), h_(r_ * r_) {
        for (Index i = 1; i <= r_; ++i) {
            at(i, i) = 1;
            for (Index j = 1; j < i; ++j) {
                Integer s = 0;
                for (Index k = j; k < i; ++k) s -= m.beta(k, i) * at(k, j);
                at(i, j) = s;
            }
        }
    }

    Index height() const noexcept { return r_; }

    /// h(i, j); zero above the diagonal.
    const Integer& operator()(Index i, Index j) const {
        if (i < 1 || j < 1 || i > r_ || j > r_) throw std::out_of_range("h-table index out of range");
        return h_[(i - 1) * r_ + (j - 1)];
    }

    bool operator==(const HTable&) const = default;

private:
    Integer& at(Index i, Index j) { return h_[(i - 1) * r_ + (j - 1)]; }

    Index r_;
    std::vector<Integer> h_;
};

inline HTable h_table(const BottMatrix& m) { return HTable(m); }

/// g_i = a_{rho_i^+} + sum_{j >= i} a_{rho_j^-} h(j, i).
inline PlusDivisor to_plus_basis(const HTable& h, const Divisor& d) {
    const Index r = h.height();
    if (d.height() != r) throw std::invalid_argument("divisor height mismatch");
    PlusDivisor g(r);
    for (Index i = 1; i <= r; ++i) {
        Rational v = d.coeff({i, Sign::plus});
        for (Index j = i; j <= r; ++j) {
            const Rational& a = d.coeff({j, Sign::minus});
            if (a != 0) v += a * Rational(h(j, i));
        }
        g.g[i - 1] = std::move(v);
    }
    return g;
}

inline PlusDivisor to_plus_basis(const BottMatrix& m, const Divisor& d) {
    return to_plus_basis(h_table(m), d);
}

struct NefCertificate {
    std::vector<Rational> d;
    bool is_nef = true;
    bool is_ample = true;

    bool operator==(const NefCertificate&) const = default;
};

/// d_i = a_{rho_i^+} + a_{rho_i^-} - sum_{(rho, c) in gamma_i} c a_rho.
inline Rational relation_degree(const PrimitiveRelation& rel, const Divisor& d) {
    Rational v = d.coeff({rel.i, Sign::plus}) + d.coeff({rel.i, Sign::minus});
    for (const auto& t : rel.gamma) v -= Rational(t.c) * d.coeff(t.ray);
    return v;
}

inline NefCertificate relation_degrees(const std::vector<PrimitiveRelation>& relations,
                                       const Divisor& d) {
    if (relations.size() != d.height()) throw std::invalid_argument("divisor height mismatch");
    NefCertificate cert;
    for (const auto& rel : relations) {
        Rational v = relation_degree(rel, d);
        if (v < 0) cert.is_nef = false;
        if (v <= 0) cert.is_ample = false;
        cert.d.push_back(std::move(v));
    }
    return cert;
}

inline NefCertificate relation_degrees(const BottMatrix& m, const Divisor& d) {
    return relation_degrees(all_relations(m), d);
}

inline NefCertificate relation_degrees(const std::vector<PrimitiveRelation>& relations,
                                       const PlusDivisor& d) {
    return relation_degrees(relations, embed(d));
}

/// D_1 = D_{rho_1^+};  D_m = sum_{k in J_m} c_m^{(k)} D_k + D_{rho_m^+}, where
/// J_m = {k < m : rho_m^+ in gamma_k}. Returned in the plus basis; the
/// dual-basis property D_m . r(P_i) = delta_mi is checked before returning.
inline std::vector<PlusDivisor> nef_generators(const std::vector<PrimitiveRelation>& relations) {
    const Index r = relations.size();
    std::vector<PlusDivisor> gens;
    gens.reserve(r);
    for (Index m = 1; m <= r; ++m) {
        PlusDivisor dm = PlusDivisor::unit(r, m);
        for (Index k = 1; k < m; ++k) {
            const Integer c = relations[k - 1].coefficient({m, Sign::plus});
            if (c != 0) dm += Rational(c) * gens[k - 1];
        }
        gens.push_back(std::move(dm));
    }
    for (Index m = 1; m <= r; ++m)
        for (Index i = 1; i <= r; ++i)
            ensure(intersect(gens[m - 1], relations[i - 1].curve_class(r)) == (m == i ? 1 : 0),
                   "nef generators are not dual to the primitive relations");
    return gens;
}

inline std::vector<PlusDivisor> nef_generators(const BottMatrix& m) {
    return nef_generators(all_relations(m));
}

/// Indices k in J_m, i.e. the D_k terms in the recursive form of D_m.
inline std::vector<Index> nef_generator_terms(const std::vector<PrimitiveRelation>& relations, Index m) {
    std::vector<Index> out;
    for (Index k = 1; k < m; ++k)
        if (relations[k - 1].coefficient({m, Sign::plus}) != 0) out.push_back(k);
    return out;
}

struct CanonicalData {
    Divisor anticanonical;          // -K = sum of all D_rho
    std::vector<Divisor> relative;  // -K_{pi_i} = D_{rho_i^+} + D_{rho_i^-}
};

inline CanonicalData canonical_data(const BottMatrix& m) {
    const Index r = m.height();
    CanonicalData out{Divisor::anticanonical(r), {}};
    for (Index i = 1; i <= r; ++i) {
        Divisor d(r);
        d.set({i, Sign::plus}, 1).set({i, Sign::minus}, 1);
        out.relative.push_back(std::move(d));
    }
    return out;
}

}  // namespace bottkit
