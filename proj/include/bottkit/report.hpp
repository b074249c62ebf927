/// @file
/// Full analysis reports: assembly, oracle cross-check, text and JSON forms,
/// and the divisor syntax accepted on the command line.

#pragma once

#include "bottkit/classify.hpp"
#include "bottkit/core.hpp"
#include "bottkit/divisors.hpp"
#include "bottkit/fan.hpp"
#include "bottkit/relations.hpp"

#include <json.hpp>

#include <optional>
#include <set>

namespace bottkit {

inline constexpr const char* analysis_schema = "bottkit.analysis/1";

// ---------------------------------------------------------------------------
// Divisor syntax

/// Bad --divisor / --plus-divisor text, or an index out of range.
class DivisorSyntaxError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline RayId parse_ray_id(std::string_view text, Index r) {
    if (text.size() < 2 || (text.back() != '+' && text.back() != '-'))
        throw DivisorSyntaxError("bad ray '" + std::string(text) + "': expected <index>+ or <index>-");
    Integer idx;
    const auto digits = text.substr(0, text.size() - 1);
    if (!detail::all_digits(digits) || !detail::parse_integer(digits, idx))
        throw DivisorSyntaxError("bad ray index in '" + std::string(text) + "'");
    if (idx < 1 || idx > r)
        throw DivisorSyntaxError("ray index " + idx.str() + " out of range [1, " + std::to_string(r) + "]");
    return {idx.convert_to<Index>(), text.back() == '+' ? Sign::plus : Sign::minus};
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// "1+:a,1-:b,...": unlisted rays have coefficient 0; each ray at most once.
inline Divisor parse_divisor(std::string_view text, Index r) {
    Divisor d(r);
    std::set<RayId> seen;
    if (detail::trim(text).empty()) return d;
    for (auto term : detail::split(text, ',')) {
        term = detail::trim(term);
        const auto colon = term.find(':');
        if (colon == std::string_view::npos)
            throw DivisorSyntaxError("bad divisor term '" + std::string(term) + "': expected <ray>:<coefficient>");
        const RayId ray = parse_ray_id(detail::trim(term.substr(0, colon)), r);
        Rational value;
        if (!parse_rational(detail::trim(term.substr(colon + 1)), value))
            throw DivisorSyntaxError("bad coefficient in '" + std::string(term) + "'");
        if (!seen.insert(ray).second)
            throw DivisorSyntaxError("ray " + to_string(ray) + " listed twice");
        d.set(ray, value);
    }
    return d;
}

/// "g1,...,gr": exactly r rational coordinates in the plus basis.
inline PlusDivisor parse_plus_divisor(std::string_view text, Index r) {
    const auto parts = detail::split(text, ',');
    if (parts.size() != r)
        throw DivisorSyntaxError("plus divisor needs " + std::to_string(r) + " coordinates, got " +
                                 std::to_string(parts.size()));
    PlusDivisor d(r);
    for (Index k = 0; k < r; ++k)
        if (!parse_rational(detail::trim(parts[k]), d.g[k]))
            throw DivisorSyntaxError("bad coordinate '" + std::string(parts[k]) + "'");
    return d;
}

inline std::string divisor_text(const Divisor& d) {
    std::string s;
    for (Sign sign : {Sign::plus, Sign::minus})
        for (Index j = 1; j <= d.height(); ++j) {
            const Rational& a = d.coeff({j, sign});
            if (a == 0) continue;
            if (!s.empty()) s += ",";
            s += to_string(RayId{j, sign}) + ":" + a.str();
        }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Analysis report

struct OracleComparison {
    std::size_t walls = 0;
    std::size_t distinct_classes = 0;
    std::vector<CurveClass> extremal;  // extremal rays of the wall-class cone
    bool anticanonical_nef = false;
    bool anticanonical_ample = false;
    std::vector<std::string> mismatches;

    bool agrees() const { return mismatches.empty(); }
    bool operator==(const OracleComparison&) const = default;
};

struct AnalysisReport {
    BottMatrix matrix{1};
    std::vector<Ray> rays;
    std::vector<PrimitiveRelation> relations;
    std::vector<CurveClass> mori_generators;  // class of r(P_i), i = 1..r
    std::vector<PlusDivisor> nef_generators;  // D_m in the plus basis
    FanoReport fano;
    std::vector<RayType> ray_types;
    std::optional<OracleComparison> oracle;

    bool operator==(const AnalysisReport&) const = default;
};

/// Runs the wall oracle and compares everything it can see with the fast path:
/// -K nef/ample, the extremal rays of the wall-class cone against {r(P_i)},
/// nonnegative integer coordinates of every wall class in that basis, and
/// nefness of each D_m.
inline OracleComparison compare_with_oracle(const BottMatrix& m,
                                            const std::vector<PrimitiveRelation>& relations,
                                            const std::vector<PlusDivisor>& nef_gens, Index cap) {
    const Index r = m.height();
    OracleComparison cmp;
    const Divisor minus_k = Divisor::anticanonical(r);
    const OracleReport oracle = oracle_report(m, minus_k, cap);
    cmp.walls = oracle.walls;
    cmp.distinct_classes = oracle.classes.size();
    cmp.anticanonical_nef = oracle.is_nef;
    cmp.anticanonical_ample = oracle.is_ample;

    const NefCertificate fast = relation_degrees(relations, minus_k);
    if (fast.is_nef != oracle.is_nef) cmp.mismatches.push_back("-K nef verdict differs from oracle");
    if (fast.is_ample != oracle.is_ample) cmp.mismatches.push_back("-K ample verdict differs from oracle");

    cmp.extremal = extremal_classes(oracle.classes);
    std::set<CurveClass> fast_rays, oracle_rays(cmp.extremal.begin(), cmp.extremal.end());
    linalg::RatMatrix basis;
    for (const auto& rel : relations) {
        auto cls = rel.curve_class(r);
        basis.push_back(cls.ints);
        fast_rays.insert(primitive(cls));
    }
    if (fast_rays != oracle_rays) cmp.mismatches.push_back("Mori cone generators differ from oracle extremal rays");

    for (const auto& cls : oracle.wall_classes) {
        const auto coords = linalg::solve_columns(basis, cls.ints);
        bool ok = coords.has_value();
        if (ok)
            for (const auto& x : *coords) ok = ok && is_integral(x) && x >= 0;
        if (!ok) cmp.mismatches.push_back("wall class " + to_string(cls) +
                                          " is not a nonnegative integer combination of r(P_i)");
    }

    for (Index k = 0; k < nef_gens.size(); ++k)
        for (const auto& cls : oracle.wall_classes)
            if (intersect(nef_gens[k], cls) < 0) {
                cmp.mismatches.push_back("D_" + std::to_string(k + 1) + " is negative on wall class " +
                                         to_string(cls));
                break;
            }
    return cmp;
}

struct AnalyzeOptions {
    bool oracle = false;
    Index oracle_cap = default_oracle_cap;
};

inline AnalysisReport analyze(const BottMatrix& m, const AnalyzeOptions& opts = {}) {
    AnalysisReport rep;
    rep.matrix = m;
    rep.rays = build_rays(m);
    rep.relations = all_relations(m);
    for (const auto& rel : rep.relations) {
        rep.mori_generators.push_back(rel.curve_class(m.height()));
        (void)relation_wall(m, rel);  // checks the wall class against the relation
    }
    rep.nef_generators = nef_generators(rep.relations);
    rep.fano = classify_fano(m, rep.relations);
    rep.ray_types = ray_types(rep.relations);
    if (opts.oracle) rep.oracle = compare_with_oracle(m, rep.relations, rep.nef_generators, opts.oracle_cap);
    return rep;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

inline std::string vector_text(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].str();
    return s + ")";
}

inline std::string vector_text(const std::vector<Integer>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].str();
    return s + ")";
}

inline std::string index_set_text(const std::vector<Index>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v[k]);
    return s + "}";
}

}  // namespace detail

/// "D_5 = D_3 + D_4 + D_{rho_5^+}"
inline std::string nef_generator_text(const std::vector<PrimitiveRelation>& relations, Index m) {
    std::string s = "D_" + std::to_string(m) + " = ";
    for (Index k : nef_generator_terms(relations, m)) {
        const Integer c = relations[k - 1].coefficient({m, Sign::plus});
        if (c != 1) s += c.str() + " ";
        s += "D_" + std::to_string(k) + " + ";
    }
    return s + "D_{rho_" + std::to_string(m) + "^+}";
}

inline std::string render_text(const AnalysisReport& rep) {
    const Index r = rep.matrix.height();
    std::ostringstream out;
    out << "Bott tower of height " << r << "\n\nmatrix:\n";
    for (Index i = 1; i <= r; ++i) {
        out << " ";
        for (Index j = 1; j <= r; ++j) out << " " << rep.matrix.entry(i, j);
        out << "\n";
    }
    out << "\nrays:\n";
    for (const auto& ray : rep.rays)
        out << "  " << ray_symbol(ray.id) << " = " << detail::vector_text(ray.coords) << "\n";

    out << "\nprimitive relations:\n";
    for (const auto& rel : rep.relations)
        out << "  r(P_" << rel.i << "): " << relation_text(rel)
            << "    I_" << rel.i << " = " << detail::index_set_text(rel.trace.pivots) << "\n";

    out << "\nMori cone generators (D_{rho_j^+} . r(P_i), j = 1.." << r << "):\n";
    for (Index i = 1; i <= r; ++i)
        out << "  r(P_" << i << ") = " << to_string(rep.mori_generators[i - 1]) << "\n";

    out << "\nnef cone generators (plus basis):\n";
    for (Index m = 1; m <= r; ++m)
        out << "  " << nef_generator_text(rep.relations, m) << " = "
            << detail::vector_text(rep.nef_generators[m - 1].g) << "\n";

    out << "\nFano classification:\n";
    for (const auto& row : rep.fano.rows)
        out << "  row " << row.i << ": N1 " << row.n1.value_or("fails") << ", N2 "
            << row.n2.value_or("fails") << ", sum c = " << row.degree_sum << "\n";
    auto yes = [](bool b) { return b ? "yes" : "no"; };
    out << "  Fano: " << yes(rep.fano.is_fano) << ", weak Fano: " << yes(rep.fano.is_weak_fano)
        << ", locally rigid: " << yes(rep.fano.locally_rigid) << "\n";
    out << "  contractible: every r(P_i) (primitive collections are pairwise disjoint)\n";

    out << "\nray types:\n";
    for (const auto& t : rep.ray_types)
        out << "  r(P_" << t.i << "): extremal, " << (t.is_mori ? "Mori" : "not Mori") << "\n";

    if (rep.oracle) {
        const auto& o = *rep.oracle;
        out << "\noracle: " << o.walls << " walls, " << o.distinct_classes
            << " distinct primitive classes, " << o.extremal.size() << " extremal rays\n";
        out << "  -K nef: " << yes(o.anticanonical_nef) << ", -K ample: " << yes(o.anticanonical_ample) << "\n";
        if (o.agrees())
            out << "  agrees with the primitive-relation computation\n";
        else
            for (const auto& msg : o.mismatches) out << "  MISMATCH: " << msg << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

template <class T>
nlohmann::json strings(const std::vector<T>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

inline Integer integer_from(const nlohmann::json& j) {
    Integer v;
    if (!json_integer(j, v)) throw std::invalid_argument("expected an integer string, got " + j.dump());
    return v;
}

inline Rational rational_from(const nlohmann::json& j) {
    Rational v;
    if (!j.is_string() || !parse_rational(j.get<std::string>(), v))
        throw std::invalid_argument("expected a rational string, got " + j.dump());
    return v;
}

inline std::vector<Rational> rationals_from(const nlohmann::json& a) {
    std::vector<Rational> out;
    for (const auto& x : a) out.push_back(rational_from(x));
    return out;
}

inline nlohmann::json matrix_json(const BottMatrix& m) {
    nlohmann::json beta = nlohmann::json::array();
    for (Index i = 1; i < m.height(); ++i)
        for (Index j = i + 1; j <= m.height(); ++j)
            if (m.beta(i, j) != 0) beta.push_back({i, j, m.beta(i, j).str()});
    return {{"r", m.height()}, {"beta", beta}};
}

inline nlohmann::json optional_label(const std::optional<std::string>& s) {
    return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json to_json(const AnalysisReport& rep) {
    using nlohmann::json;
    const Index r = rep.matrix.height();
    json j;
    j["schema"] = analysis_schema;
    j["matrix"] = detail::matrix_json(rep.matrix);

    j["rays"] = json::array();
    for (const auto& ray : rep.rays)
        j["rays"].push_back({{"ray", to_string(ray.id)}, {"coords", detail::strings(ray.coords)}});

    j["relations"] = json::array();
    for (const auto& rel : rep.relations) {
        json gamma = json::array();
        for (const auto& t : rel.gamma) gamma.push_back({{"ray", to_string(t.ray)}, {"c", t.c.str()}});
        json table = json::array();
        for (const auto& [key, value] : rel.trace.a_table)
            table.push_back({{"level", key.first}, {"column", key.second}, {"value", value.str()}});
        j["relations"].push_back({{"i", rel.i},
                                  {"text", relation_text(rel)},
                                  {"gamma", gamma},
                                  {"pivots", rel.trace.pivots},
                                  {"a_table", table}});
    }

    j["mori_generators"] = json::array();
    for (const auto& c : rep.mori_generators) j["mori_generators"].push_back(detail::strings(c.ints));

    j["nef_generators"] = json::array();
    for (Index m = 1; m <= rep.nef_generators.size(); ++m)
        j["nef_generators"].push_back({{"m", m},
                                       {"text", nef_generator_text(rep.relations, m)},
                                       {"plus", detail::strings(rep.nef_generators[m - 1].g)}});

    json rows = json::array();
    for (const auto& row : rep.fano.rows)
        rows.push_back({{"i", row.i},
                        {"n1", detail::optional_label(row.n1)},
                        {"n2", detail::optional_label(row.n2)},
                        {"degree_sum", row.degree_sum.str()}});
    j["fano"] = {{"rows", rows},
                 {"is_fano", rep.fano.is_fano},
                 {"is_weak_fano", rep.fano.is_weak_fano},
                 {"locally_rigid", rep.fano.locally_rigid}};

    j["ray_types"] = json::array();
    for (const auto& t : rep.ray_types)
        j["ray_types"].push_back({{"i", t.i}, {"extremal", t.is_extremal}, {"mori", t.is_mori}});

    j["contractible"] = true;

    if (rep.oracle) {
        const auto& o = *rep.oracle;
        json extremal = json::array();
        for (const auto& c : o.extremal) extremal.push_back(detail::strings(c.ints));
        j["oracle"] = {{"walls", o.walls},
                       {"distinct_classes", o.distinct_classes},
                       {"extremal", extremal},
                       {"anticanonical_nef", o.anticanonical_nef},
                       {"anticanonical_ample", o.anticanonical_ample},
                       {"mismatches", o.mismatches},
                       {"agrees", o.agrees()}};
    }
    (void)r;
    return j;
}

inline AnalysisReport report_from_json(const nlohmann::json& j) {
    if (j.value("schema", std::string{}) != analysis_schema)
        throw std::invalid_argument("unsupported report schema");
    AnalysisReport rep;
    rep.matrix = detail::parse_matrix_json(j.at("matrix").dump());
    const Index r = rep.matrix.height();

    for (const auto& ray : j.at("rays")) {
        Ray out{parse_ray_id(ray.at("ray").get<std::string>(), r), {}};
        for (const auto& v : ray.at("coords")) out.coords.push_back(detail::integer_from(v));
        rep.rays.push_back(std::move(out));
    }
    for (const auto& rj : j.at("relations")) {
        PrimitiveRelation rel;
        rel.i = rj.at("i").get<Index>();
        for (const auto& t : rj.at("gamma"))
            rel.gamma.push_back({parse_ray_id(t.at("ray").get<std::string>(), r), detail::integer_from(t.at("c"))});
        rel.trace.pivots = rj.at("pivots").get<std::vector<Index>>();
        for (const auto& e : rj.at("a_table"))
            rel.trace.a_table[{e.at("level").get<Index>(), e.at("column").get<Index>()}] =
                detail::integer_from(e.at("value"));
        rep.relations.push_back(std::move(rel));
    }
    for (const auto& c : j.at("mori_generators")) rep.mori_generators.push_back({detail::rationals_from(c)});
    for (const auto& d : j.at("nef_generators"))
        rep.nef_generators.emplace_back(detail::rationals_from(d.at("plus")));

    const auto& fano = j.at("fano");
    for (const auto& row : fano.at("rows")) {
        RowConditions rc;
        rc.i = row.at("i").get<Index>();
        if (!row.at("n1").is_null()) rc.n1 = row.at("n1").get<std::string>();
        if (!row.at("n2").is_null()) rc.n2 = row.at("n2").get<std::string>();
        rc.degree_sum = detail::integer_from(row.at("degree_sum"));
        rep.fano.rows.push_back(std::move(rc));
    }
    rep.fano.is_fano = fano.at("is_fano").get<bool>();
    rep.fano.is_weak_fano = fano.at("is_weak_fano").get<bool>();
    rep.fano.locally_rigid = fano.at("locally_rigid").get<bool>();

    for (const auto& t : j.at("ray_types"))
        rep.ray_types.push_back({t.at("i").get<Index>(), t.at("extremal").get<bool>(), t.at("mori").get<bool>()});

    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        OracleComparison cmp;
        cmp.walls = o.at("walls").get<std::size_t>();
        cmp.distinct_classes = o.at("distinct_classes").get<std::size_t>();
        for (const auto& c : o.at("extremal")) cmp.extremal.push_back({detail::rationals_from(c)});
        cmp.anticanonical_nef = o.at("anticanonical_nef").get<bool>();
        cmp.anticanonical_ample = o.at("anticanonical_ample").get<bool>();
        cmp.mismatches = o.at("mismatches").get<std::vector<std::string>>();
        rep.oracle = std::move(cmp);
    }
    return rep;
}

}  // namespace bottkit
