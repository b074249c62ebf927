/// @file
/// Exact arithmetic, the Bott matrix type, divisor types and matrix file I/O.
///
/// Indices in the public interface are 1-based throughout: ray e_i^+ has
/// index i, and beta(i, j) is defined for 1 <= i < j <= r.

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace bottkit {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Index = std::size_t;

/// Malformed input; carries the 1-based line and column of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Two independent computations disagreed, or a postcondition failed.
/// Always an implementation bug, never an input problem.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void ensure(bool condition, const char* what) {
    if (!condition) throw InternalError(what);
}

// ---------------------------------------------------------------------------
// Rays and signs

enum class Sign : unsigned char { plus, minus };

inline constexpr Sign opposite(Sign s) noexcept {
    return s == Sign::plus ? Sign::minus : Sign::plus;
}

inline constexpr char sign_char(Sign s) noexcept { return s == Sign::plus ? '+' : '-'; }

struct RayId {
    Index index = 1;
    Sign sign = Sign::plus;

    auto operator<=>(const RayId&) const = default;
};

/// Compact form used in divisor syntax and JSON: "3+", "5-".
inline std::string to_string(RayId id) {
    return std::to_string(id.index) + sign_char(id.sign);
}

/// Notation used in human-readable reports: "e_3^+".
inline std::string ray_symbol(RayId id) {
    return "e_" + std::to_string(id.index) + "^" + sign_char(id.sign);
}

// ---------------------------------------------------------------------------
// Number parsing and formatting

namespace detail {

inline bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

inline bool parse_integer(std::string_view text, Integer& out) {
    std::string_view digits = text;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!all_digits(digits)) return false;
    out = Integer(std::string(digits));
    if (negative) out = -out;
    return true;
}

}  // namespace detail

/// Parses "[+-]digits[/digits]"; returns false on anything else (including a zero denominator).
inline bool parse_rational(std::string_view text, Rational& out) {
    const auto slash = text.find('/');
    Integer num;
    if (slash == std::string_view::npos) {
        if (!detail::parse_integer(text, num)) return false;
        out = Rational(num);
        return true;
    }
    const std::string_view den_text = text.substr(slash + 1);
    if (!detail::parse_integer(text.substr(0, slash), num) || !detail::all_digits(den_text))
        return false;
    const Integer den(std::string{den_text});
    if (den == 0) return false;
    out = Rational(num, den);
    return true;
}

inline std::string to_string(const Integer& v) { return v.str(); }
inline std::string to_string(const Rational& v) { return v.str(); }

inline bool is_integral(const Rational& v) { return denominator(v) == 1; }

// ---------------------------------------------------------------------------
// BottMatrix

/// Upper unitriangular integer matrix defining a Bott tower of height r.
///
/// Only the strictly upper entries beta(i, j), 1 <= i < j <= r, are stored.
class BottMatrix {
public:
    explicit BottMatrix(Index r) : r_(r), upper_(r == 0 ? 0 : r * (r - 1) / 2) {
        if (r < 1) throw std::invalid_argument("Bott matrix height must be at least 1");
    }

    /// rows[k] holds the r-1-k entries beta(k+1, k+2..r); exactly r-1 rows.
    BottMatrix(Index r, const std::vector<std::vector<Integer>>& rows) : BottMatrix(r) {
        if (rows.size() != r - 1)
            throw std::invalid_argument("expected " + std::to_string(r - 1) + " rows, got " +
                                        std::to_string(rows.size()));
        for (Index i = 1; i < r; ++i) {
            const auto& row = rows[i - 1];
            if (row.size() != r - i)
                throw std::invalid_argument("row " + std::to_string(i) + ": expected " +
                                            std::to_string(r - i) + " entries, got " +
                                            std::to_string(row.size()));
            for (Index j = i + 1; j <= r; ++j) upper_[slot(i, j)] = row[j - i - 1];
        }
    }

    static BottMatrix identity(Index r) { return BottMatrix(r); }

    /// Builds from (i, j, beta_ij) triples; unspecified entries are zero.
    static BottMatrix from_entries(Index r,
                                   const std::vector<std::tuple<Index, Index, Integer>>& entries) {
        BottMatrix m(r);
        for (const auto& [i, j, v] : entries) {
            if (!(1 <= i && i < j && j <= r))
                throw std::invalid_argument("entry (" + std::to_string(i) + "," +
                                            std::to_string(j) +
                                            ") is not strictly upper triangular for r=" +
                                            std::to_string(r));
            m.upper_[m.slot(i, j)] = v;
        }
        return m;
    }

    Index height() const noexcept { return r_; }

    /// beta(i, j) for 1 <= i < j <= r.
    const Integer& beta(Index i, Index j) const {
        if (!(1 <= i && i < j && j <= r_))
            throw std::out_of_range("beta(" + std::to_string(i) + "," + std::to_string(j) +
                                    ") outside strict upper triangle");
        return upper_[slot(i, j)];
    }

    /// Full matrix entry: 1 on the diagonal, 0 below it.
    Integer entry(Index i, Index j) const {
        if (i == j) return 1;
        if (i > j) return 0;
        return beta(i, j);
    }

    /// Copy with one strictly-upper entry replaced.
    BottMatrix with_beta(Index i, Index j, Integer value) const {
        BottMatrix m = *this;
        (void)m.beta(i, j);
        m.upper_[m.slot(i, j)] = std::move(value);
        return m;
    }

    bool operator==(const BottMatrix&) const = default;

private:
    // row-major packing of the strict upper triangle
    Index slot(Index i, Index j) const noexcept {
        return (i - 1) * r_ - (i - 1) * i / 2 + (j - i - 1);
    }

    Index r_;
    std::vector<Integer> upper_;
};

/// Text form: r on the first line, then rows 1..r-1 of strict upper entries.
inline std::string to_text(const BottMatrix& m) {
    std::string out = std::to_string(m.height()) + "\n";
    for (Index i = 1; i < m.height(); ++i) {
        for (Index j = i + 1; j <= m.height(); ++j) {
            if (j > i + 1) out += ' ';
            out += m.beta(i, j).str();
        }
        out += '\n';
    }
    return out;
}

/// JSON alternative: {"r": n, "beta": [[i, j, value], ...]} listing nonzero entries.
inline nlohmann::json to_json(const BottMatrix& m) {
    nlohmann::json beta = nlohmann::json::array();
    for (Index i = 1; i < m.height(); ++i)
        for (Index j = i + 1; j <= m.height(); ++j)
            if (m.beta(i, j) != 0) {
                const Integer& v = m.beta(i, j);
                // plain JSON numbers while they fit, strings beyond that
                nlohmann::json value;
                if (v >= -(Integer(1) << 53) && v <= (Integer(1) << 53))
                    value = v.convert_to<long long>();
                else
                    value = v.str();
                beta.push_back({i, j, value});
            }
    return {{"r", m.height()}, {"beta", beta}};
}

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        tokens.push_back({line.substr(start, pos - start), start + 1});
    }
    return tokens;
}

inline BottMatrix parse_matrix_text(std::string_view text) {
    // Lines after stripping '#' comments; blank lines are skipped but keep their numbers.
    struct Line {
        std::size_t number;
        std::vector<Token> tokens;
    };
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = split_tokens(line);
        if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
        if (end == text.size()) break;
        pos = end + 1;
    }

    if (lines.empty()) throw ParseError(1, 1, "empty input: expected the height r");
    const Line& header = lines.front();
    if (header.tokens.size() != 1)
        throw ParseError(header.number, header.tokens[1].column,
                         "first line must contain only the height r");
    Integer r_value;
    if (!parse_integer(header.tokens[0].text, r_value))
        throw ParseError(header.number, header.tokens[0].column,
                         "height is not an integer: '" + std::string(header.tokens[0].text) + "'");
    if (r_value < 1)
        throw ParseError(header.number, header.tokens[0].column,
                         "height r must be at least 1, got " + r_value.str());
    if (r_value > 4096)
        throw ParseError(header.number, header.tokens[0].column,
                         "height r=" + r_value.str() + " is unreasonably large");
    const Index r = r_value.convert_to<Index>();

    std::vector<std::vector<Integer>> rows;
    for (Index i = 1; i < r; ++i) {
        if (i >= lines.size()) {
            const std::size_t last = lines.back().number;
            throw ParseError(last + 1, 1,
                             "row " + std::to_string(i) + ": missing (expected " +
                                 std::to_string(r - 1) + " rows for r=" + std::to_string(r) + ")");
        }
        const Line& line = lines[i];
        const std::size_t expected = r - i;
        if (line.tokens.size() != expected) {
            const std::size_t column = line.tokens.size() > expected
                                           ? line.tokens[expected].column
                                           : line.tokens.back().column;
            throw ParseError(line.number, column,
                             "row " + std::to_string(i) + ": expected " + std::to_string(expected) +
                                 (expected == 1 ? " entry" : " entries") + ", got " +
                                 std::to_string(line.tokens.size()));
        }
        std::vector<Integer> row;
        row.reserve(expected);
        for (const Token& tok : line.tokens) {
            Integer v;
            if (!parse_integer(tok.text, v))
                throw ParseError(line.number, tok.column,
                                 "row " + std::to_string(i) + ": not an integer: '" +
                                     std::string(tok.text) + "'");
            row.push_back(std::move(v));
        }
        rows.push_back(std::move(row));
    }
    if (lines.size() > r) {
        const Line& extra = lines[r];
        throw ParseError(extra.number, extra.tokens.front().column,
                         "unexpected extra line: r=" + std::to_string(r) + " takes " +
                             std::to_string(r - 1) + " rows");
    }
    return BottMatrix(r, rows);
}

inline bool json_integer(const nlohmann::json& v, Integer& out) {
    if (v.is_number_integer()) {
        out = Integer(v.get<long long>());
        return true;
    }
    if (v.is_string()) return parse_integer(v.get<std::string>(), out);
    return false;
}

inline BottMatrix parse_matrix_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line/column
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(line, column, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("r"))
        throw ParseError(1, 1, "JSON matrix must be an object with key \"r\"");
    Integer r_value;
    if (!json_integer(doc["r"], r_value)) throw ParseError(1, 1, "\"r\" must be an integer");
    if (r_value < 1) throw ParseError(1, 1, "height r must be at least 1, got " + r_value.str());
    if (r_value > 4096) throw ParseError(1, 1, "height r=" + r_value.str() + " is unreasonably large");
    const Index r = r_value.convert_to<Index>();

    std::vector<std::tuple<Index, Index, Integer>> entries;
    if (doc.contains("beta")) {
        const auto& beta = doc["beta"];
        if (!beta.is_array()) throw ParseError(1, 1, "\"beta\" must be an array of [i, j, value]");
        std::vector<std::pair<Index, Index>> seen;
        for (std::size_t k = 0; k < beta.size(); ++k) {
            const auto& t = beta[k];
            const std::string where = "beta[" + std::to_string(k) + "]";
            Integer i, j, v;
            if (!t.is_array() || t.size() != 3 || !json_integer(t[0], i) ||
                !json_integer(t[1], j) || !json_integer(t[2], v))
                throw ParseError(1, 1, where + ": expected [i, j, value] with integers");
            if (!(1 <= i && i < j && j <= r_value))
                throw ParseError(1, 1, where + ": (" + i.str() + "," + j.str() +
                                           ") is not strictly upper triangular for r=" +
                                           r_value.str());
            const std::pair<Index, Index> key{i.convert_to<Index>(), j.convert_to<Index>()};
            if (std::find(seen.begin(), seen.end(), key) != seen.end())
                throw ParseError(1, 1, where + ": duplicate entry (" + i.str() + "," + j.str() + ")");
            seen.push_back(key);
            entries.emplace_back(key.first, key.second, std::move(v));
        }
    }
    return BottMatrix::from_entries(r, entries);
}

}  // namespace detail

/// Parses either the text format or the JSON alternative (detected by a leading '{').
inline BottMatrix parse_matrix(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return detail::parse_matrix_json(text);
    return detail::parse_matrix_text(text);
}

// ---------------------------------------------------------------------------
// Divisors

/// Torus-invariant Q-divisor sum a_rho D_rho over all 2r rays.
class Divisor {
public:
    explicit Divisor(Index r) : plus_(r), minus_(r) {}

    /// -K: coefficient 1 on every ray.
    static Divisor anticanonical(Index r) {
        Divisor d(r);
        std::fill(d.plus_.begin(), d.plus_.end(), Rational(1));
        std::fill(d.minus_.begin(), d.minus_.end(), Rational(1));
        return d;
    }

    static Divisor prime(Index r, RayId ray) { return Divisor(r).set(ray, 1); }

    Index height() const noexcept { return plus_.size(); }

    const Rational& coeff(RayId ray) const { return side(ray.sign).at(checked(ray)); }

    Divisor& set(RayId ray, Rational value) {
        side(ray.sign).at(checked(ray)) = std::move(value);
        return *this;
    }

    Divisor& add(RayId ray, const Rational& value) {
        side(ray.sign).at(checked(ray)) += value;
        return *this;
    }

    friend Divisor operator+(Divisor a, const Divisor& b) {
        if (a.height() != b.height()) throw std::invalid_argument("divisor heights differ");
        for (Index k = 0; k < a.height(); ++k) {
            a.plus_[k] += b.plus_[k];
            a.minus_[k] += b.minus_[k];
        }
        return a;
    }

    friend Divisor operator*(const Rational& s, Divisor d) {
        for (auto& v : d.plus_) v *= s;
        for (auto& v : d.minus_) v *= s;
        return d;
    }

    bool is_zero() const {
        auto zero = [](const Rational& v) { return v == 0; };
        return std::all_of(plus_.begin(), plus_.end(), zero) &&
               std::all_of(minus_.begin(), minus_.end(), zero);
    }

    bool operator==(const Divisor&) const = default;

private:
    Index checked(RayId ray) const {
        if (ray.index < 1 || ray.index > height())
            throw std::out_of_range("ray index " + std::to_string(ray.index) +
                                    " outside [1, " + std::to_string(height()) + "]");
        return ray.index - 1;
    }
    std::vector<Rational>& side(Sign s) { return s == Sign::plus ? plus_ : minus_; }
    const std::vector<Rational>& side(Sign s) const { return s == Sign::plus ? plus_ : minus_; }

    std::vector<Rational> plus_;
    std::vector<Rational> minus_;
};

/// Divisor class written in the basis {D_{rho_j^+}}.
struct PlusDivisor {
    std::vector<Rational> g;

    PlusDivisor() = default;
    explicit PlusDivisor(Index r) : g(r) {}
    explicit PlusDivisor(std::vector<Rational> coords) : g(std::move(coords)) {}

    static PlusDivisor unit(Index r, Index m) {
        PlusDivisor d(r);
        d.g.at(m - 1) = 1;
        return d;
    }

    Index height() const noexcept { return g.size(); }
    const Rational& operator[](Index j) const { return g.at(j - 1); }  // 1-based

    PlusDivisor& operator+=(const PlusDivisor& other) {
        if (other.g.size() != g.size()) throw std::invalid_argument("divisor heights differ");
        for (Index k = 0; k < g.size(); ++k) g[k] += other.g[k];
        return *this;
    }

    friend PlusDivisor operator+(PlusDivisor a, const PlusDivisor& b) { return a += b; }

    friend PlusDivisor operator*(const Rational& s, PlusDivisor d) {
        for (auto& v : d.g) v *= s;
        return d;
    }

    bool operator==(const PlusDivisor&) const = default;
};

/// Zero-extension of a plus-basis class to a divisor over all 2r rays.
inline Divisor embed(const PlusDivisor& d) {
    Divisor out(d.height());
    for (Index j = 1; j <= d.height(); ++j) out.set({j, Sign::plus}, d[j]);
    return out;
}

}  // namespace bottkit
