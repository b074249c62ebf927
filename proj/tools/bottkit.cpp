// bottkit: command-line front end.
//
// Exit codes
//   analyze  0 ok, 2 input error, 3 oracle mismatch, 4 oracle cap exceeded
//   check    0 verdict true, 1 verdict false, 2 input error, 3 oracle mismatch, 4 cap exceeded
//   census   0 ok, 2 input error or budget exceeded, 3 oracle mismatch
//   oracle   0 ok, 2 input error, 4 cap exceeded
// Internal inconsistencies exit with 5.

#include "bottkit/bottkit.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using bottkit::Index;

enum Exit : int { ok = 0, verdict_false = 1, input_error = 2, mismatch = 3, cap_exceeded = 4, internal = 5 };

std::string read_input(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    buf << in.rdbuf();
    return buf.str();
}

struct Common {
    std::string path;
    bool json = false;
    bool oracle = false;
    Index oracle_cap = bottkit::oracle_cap_from_env();
};

struct DivisorFlags {
    std::string divisor;
    std::string plus_divisor;
    bool log_fano = false;
    bool require_ample = false;
};

bottkit::Divisor resolve_divisor(const DivisorFlags& f, const bottkit::BottMatrix& m) {
    const Index r = m.height();
    if (!f.divisor.empty()) return bottkit::parse_divisor(f.divisor, r);
    if (!f.plus_divisor.empty()) return bottkit::embed(bottkit::parse_plus_divisor(f.plus_divisor, r));
    return f.log_fano ? bottkit::Divisor(r) : bottkit::Divisor::anticanonical(r);
}

std::string vec(const std::vector<bottkit::Rational>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].str();
    return s + ")";
}

nlohmann::json strings(const std::vector<bottkit::Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

int cmd_analyze(const Common& c) {
    const auto m = bottkit::parse_matrix(read_input(c.path));
    const auto rep = bottkit::analyze(m, {c.oracle, c.oracle_cap});
    if (c.json)
        std::cout << bottkit::to_json(rep).dump(2) << "\n";
    else
        std::cout << bottkit::render_text(rep);
    return rep.oracle && !rep.oracle->agrees() ? mismatch : ok;
}

int cmd_check(const Common& c, const DivisorFlags& f) {
    using namespace bottkit;
    if (!f.divisor.empty() && !f.plus_divisor.empty())
        throw DivisorSyntaxError("--divisor and --plus-divisor are mutually exclusive");
    const auto m = parse_matrix(read_input(c.path));
    const auto relations = all_relations(m);
    const Divisor d = resolve_divisor(f, m);
    const Index r = m.height();

    const NefCertificate cert = relation_degrees(relations, d);
    std::optional<LogFanoReport> log;
    if (f.log_fano) log = log_fano_certificate(relations, d);

    bool verdict = f.log_fano ? log->is_log_fano : (f.require_ample ? cert.is_ample : cert.is_nef);

    // The oracle judges D itself, or -(K + D) under --log-fano.
    std::optional<OracleReport> oracle;
    bool disagrees = false;
    if (c.oracle) {
        Divisor target = d;
        if (f.log_fano) target = Divisor::anticanonical(r) + Rational(-1) * d;
        oracle = oracle_report(m, target, c.oracle_cap);
        if (f.log_fano) {
            bool all_neg = true;
            for (const auto& k : log->k) all_neg = all_neg && k < 0;
            disagrees = oracle->is_ample != all_neg;
        } else {
            disagrees = oracle->is_nef != cert.is_nef || oracle->is_ample != cert.is_ample;
        }
    }

    if (c.json) {
        nlohmann::json j{{"schema", "bottkit.check/1"},
                         {"divisor", divisor_text(d)},
                         {"d", strings(cert.d)},
                         {"nef", cert.is_nef},
                         {"ample", cert.is_ample}};
        if (log)
            j["log_fano"] = {{"k", strings(log->k)},
                             {"floor_ok", log->floor_ok},
                             {"is_log_fano", log->is_log_fano},
                             {"reason", log->reason}};
        if (oracle)
            j["oracle"] = {{"walls", oracle->walls}, {"nef", oracle->is_nef}, {"ample", oracle->is_ample},
                           {"agrees", !disagrees}};
        j["verdict"] = verdict;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "D = " << divisor_text(d) << "\n";
        std::cout << "d = " << vec(cert.d) << "\n";
        std::cout << "nef: " << (cert.is_nef ? "true" : "false") << "\n";
        std::cout << "ample: " << (cert.is_ample ? "true" : "false") << "\n";
        if (log) {
            std::cout << "k = " << vec(log->k) << "\n";
            std::cout << "coefficients in [0, 1): " << (log->floor_ok ? "true" : "false") << "\n";
            std::cout << "log Fano: " << (log->is_log_fano ? "true" : "false") << "\n";
            if (!log->reason.empty()) std::cout << "reason: " << log->reason << "\n";
        }
        if (oracle) {
            std::cout << "oracle (" << oracle->walls << " walls" << (f.log_fano ? ", on -(K+D)" : "")
                      << "): nef " << (oracle->is_nef ? "true" : "false") << ", ample "
                      << (oracle->is_ample ? "true" : "false") << (disagrees ? "  MISMATCH" : "") << "\n";
        }
    }
    if (disagrees) return mismatch;
    return verdict ? ok : verdict_false;
}

int cmd_census(bottkit::CensusOptions opt, bool json) {
    const auto res = bottkit::run_census(opt);
    if (json)
        std::cout << bottkit::to_json(res).dump(2) << "\n";
    else
        std::cout << bottkit::render_text(res);
    return res.oracle_mismatches.empty() ? ok : mismatch;
}

int cmd_oracle(const Common& c, const DivisorFlags& f) {
    using namespace bottkit;
    const auto m = parse_matrix(read_input(c.path));
    const Divisor d = resolve_divisor(f, m);
    const auto rep = oracle_report(m, d, c.oracle_cap);
    const auto extremal = extremal_classes(rep.classes);
    if (c.json) {
        nlohmann::json j{{"schema", "bottkit.oracle/1"}, {"walls", rep.walls}, {"divisor", divisor_text(d)},
                         {"nef", rep.is_nef}, {"ample", rep.is_ample}};
        j["classes"] = nlohmann::json::array();
        for (const auto& cls : rep.classes) j["classes"].push_back(strings(cls.ints));
        j["extremal"] = nlohmann::json::array();
        for (const auto& cls : extremal) j["extremal"].push_back(strings(cls.ints));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "walls: " << rep.walls << "\n";
        std::cout << "distinct primitive wall classes: " << rep.classes.size() << "\n";
        for (const auto& cls : rep.classes) std::cout << "  " << to_string(cls) << "\n";
        std::cout << "extremal rays:\n";
        for (const auto& cls : extremal) std::cout << "  " << to_string(cls) << "\n";
        std::cout << "D = " << divisor_text(d) << "\n";
        std::cout << "nef: " << (rep.is_nef ? "true" : "false") << ", ample: " << (rep.is_ample ? "true" : "false")
                  << "\n";
    }
    return ok;
}

void add_common(CLI::App* sub, Common& c, bool oracle_flag) {
    sub->add_option("matrix", c.path, "matrix file (text or JSON), '-' for stdin")->required();
    sub->add_flag("--json", c.json, "machine-readable output");
    if (oracle_flag) sub->add_flag("--oracle", c.oracle, "cross-check against the brute-force wall oracle");
    sub->add_option("--oracle-cap", c.oracle_cap, "largest r the oracle enumerates (default 16, env BOTTKIT_ORACLE_CAP)")
        ->check(CLI::Range(1, 62));
}

void add_divisor(CLI::App* sub, DivisorFlags& f) {
    sub->add_option("--divisor", f.divisor, "divisor as 1+:a,1-:b,... (rational coefficients)");
    sub->add_option("--plus-divisor", f.plus_divisor, "divisor class as g1,...,gr in the plus basis");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bott tower toolkit: primitive relations, nef and Mori cones, Fano classification"};
    app.require_subcommand(1);

    Common common;
    DivisorFlags div;
    bottkit::CensusOptions census;
    bool census_json = false;

    auto* analyze = app.add_subcommand("analyze", "full report for one matrix");
    add_common(analyze, common, true);

    auto* check = app.add_subcommand("check", "nef/ample or log Fano test for one divisor");
    add_common(check, common, true);
    add_divisor(check, div);
    check->add_flag("--log-fano", div.log_fano, "test the pair (X, D) for log Fano (D defaults to 0)");
    check->add_flag("--require-ample", div.require_ample, "verdict is ampleness instead of nefness");

    auto* cens = app.add_subcommand("census", "Fano classification over a box of matrices");
    cens->add_option("--r", census.r, "tower height")->required()->check(CLI::Range(1, 64));
    cens->add_option("--lo", census.lo, "smallest entry")->required();
    cens->add_option("--hi", census.hi, "largest entry")->required();
    cens->add_option("--jobs", census.jobs, "worker threads")->check(CLI::Range(1, 256));
    cens->add_option("--samples", census.samples, "sample matrices printed per class");
    cens->add_option("--oracle-sample", census.oracle_stride, "run the wall oracle on every N-th matrix (0 = off)");
    cens->add_option("--oracle-cap", census.oracle_cap, "largest r the oracle enumerates")->check(CLI::Range(1, 62));
    cens->add_option("--budget", census.budget, "maximum number of matrices");
    cens->add_flag("--json", census_json, "machine-readable output");
    census.oracle_cap = bottkit::oracle_cap_from_env();

    auto* oracle = app.add_subcommand("oracle", "brute-force wall enumeration for one divisor (default -K)");
    add_common(oracle, common, false);
    add_divisor(oracle, div);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*analyze) return cmd_analyze(common);
        if (*check) return cmd_check(common, div);
        if (*cens) return cmd_census(census, census_json);
        if (*oracle) return cmd_oracle(common, div);
    } catch (const bottkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return input_error;
    } catch (const bottkit::OracleCapExceeded& e) {
        std::cerr << e.what() << "\n";
        return cap_exceeded;
    } catch (const bottkit::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}
