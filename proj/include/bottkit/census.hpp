/// @file
/// Exhaustive Fano census over a box of matrices.

#pragma once

#include "bottkit/classify.hpp"
#include "bottkit/core.hpp"
#include "bottkit/fan.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <exception>
#include <thread>

namespace bottkit {

inline constexpr const char* census_schema = "bottkit.census/1";
inline constexpr std::uint64_t default_census_budget = 10'000'000;

enum class FanoClass : unsigned char { fano, weak_not_fano, neither };

inline const char* class_name(FanoClass c) {
    switch (c) {
        case FanoClass::fano: return "fano";
        case FanoClass::weak_not_fano: return "weak_fano_not_fano";
        case FanoClass::neither: return "neither";
    }
    return "?";
}

struct CensusOptions {
    Index r = 2;
    long lo = -1;
    long hi = 1;
    unsigned jobs = 1;
    std::size_t samples = 0;          // sample matrices kept per class
    std::uint64_t oracle_stride = 0;  // 0: no oracle; k: every k-th matrix
    std::uint64_t budget = default_census_budget;
    Index oracle_cap = default_oracle_cap;
};

struct CensusResult {
    Index r = 0;
    long lo = 0;
    long hi = 0;
    std::uint64_t total = 0;
    std::array<std::uint64_t, 3> counts{};  // indexed by FanoClass
    std::array<std::vector<BottMatrix>, 3> samples;
    std::uint64_t oracle_checked = 0;
    std::vector<std::string> oracle_mismatches;

    std::uint64_t count(FanoClass c) const { return counts[static_cast<int>(c)]; }
    const std::vector<BottMatrix>& sample(FanoClass c) const { return samples[static_cast<int>(c)]; }

    bool operator==(const CensusResult&) const = default;
};

class CensusBudgetExceeded : public std::runtime_error {
public:
    CensusBudgetExceeded(const Integer& size, std::uint64_t budget)
        : std::runtime_error("census of " + size.str() + " matrices exceeds the budget of " +
                             std::to_string(budget) + "; narrow [lo, hi] or lower r") {}
};

/// Number of matrices with every strict-upper entry in [lo, hi].
inline Integer census_size(Index r, long lo, long hi) {
    if (r < 1) throw std::invalid_argument("census height must be at least 1");
    if (lo > hi) throw std::invalid_argument("census bounds need lo <= hi");
    Integer width = Integer(hi) - lo + 1;
    Integer size = 1;
    for (Index k = 0; k < r * (r - 1) / 2; ++k) size *= width;
    return size;
}

/// The index-th matrix of the box, entries in row-major order with the first
/// entry (beta_12) most significant.
inline BottMatrix census_matrix(Index r, long lo, long hi, std::uint64_t index) {
    const std::uint64_t width = static_cast<std::uint64_t>(hi - lo) + 1;
    const Index n = r * (r - 1) / 2;
    std::vector<std::pair<Index, Index>> slots;
    slots.reserve(n);
    for (Index i = 1; i < r; ++i)
        for (Index j = i + 1; j <= r; ++j) slots.emplace_back(i, j);
    BottMatrix m(r);
    for (Index k = n; k-- > 0;) {
        m = m.with_beta(slots[k].first, slots[k].second, Integer(lo + static_cast<long>(index % width)));
        index /= width;
    }
    return m;
}

inline FanoClass census_class(const FanoReport& rep) {
    if (rep.is_fano) return FanoClass::fano;
    return rep.is_weak_fano ? FanoClass::weak_not_fano : FanoClass::neither;
}

namespace detail {

inline CensusResult census_slice(const CensusOptions& opt, std::uint64_t begin, std::uint64_t end) {
    CensusResult out;
    const Divisor minus_k = Divisor::anticanonical(opt.r);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        const BottMatrix m = census_matrix(opt.r, opt.lo, opt.hi, idx);
        const FanoReport rep = classify_fano(m);
        const FanoClass cls = census_class(rep);
        auto& bucket = out.samples[static_cast<int>(cls)];
        if (bucket.size() < opt.samples) bucket.push_back(m);
        ++out.counts[static_cast<int>(cls)];
        if (opt.oracle_stride != 0 && idx % opt.oracle_stride == 0 && opt.r <= opt.oracle_cap) {
            const OracleReport o = oracle_report(m, minus_k, opt.oracle_cap);
            ++out.oracle_checked;
            if (o.is_nef != rep.is_weak_fano || o.is_ample != rep.is_fano)
                out.oracle_mismatches.push_back("matrix #" + std::to_string(idx) + ": " + to_text(m));
        }
    }
    out.total = end - begin;
    return out;
}

// Slices arrive in index order, so keeping the first samples seen is
// independent of the worker count.
inline void merge_into(CensusResult& acc, CensusResult&& part, std::size_t keep) {
    acc.total += part.total;
    for (int c = 0; c < 3; ++c) {
        acc.counts[c] += part.counts[c];
        for (auto& m : part.samples[c])
            if (acc.samples[c].size() < keep) acc.samples[c].push_back(std::move(m));
    }
    acc.oracle_checked += part.oracle_checked;
    for (auto& s : part.oracle_mismatches) acc.oracle_mismatches.push_back(std::move(s));
}

}  // namespace detail

inline CensusResult run_census(const CensusOptions& opt) {
    const Integer size = census_size(opt.r, opt.lo, opt.hi);
    if (size > opt.budget) throw CensusBudgetExceeded(size, opt.budget);
    const auto total = size.convert_to<std::uint64_t>();

    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(std::min<std::uint64_t>(total, 256))));
    std::vector<CensusResult> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto bound = [&](unsigned w) { return total / jobs * w + std::min<std::uint64_t>(w, total % jobs); };

    if (jobs == 1) {
        parts[0] = detail::census_slice(opt, 0, total);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                try {
                    parts[w] = detail::census_slice(opt, bound(w), bound(w + 1));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    CensusResult result;
    result.r = opt.r;
    result.lo = opt.lo;
    result.hi = opt.hi;
    for (auto& p : parts) detail::merge_into(result, std::move(p), opt.samples);
    return result;
}

inline std::string render_text(const CensusResult& res) {
    std::ostringstream out;
    out << "census r=" << res.r << " entries in [" << res.lo << ", " << res.hi << "]: " << res.total
        << " matrices\n";
    for (FanoClass c : {FanoClass::fano, FanoClass::weak_not_fano, FanoClass::neither}) {
        out << "  " << class_name(c) << ": " << res.count(c) << "\n";
        for (const auto& m : res.sample(c)) {
            out << "    sample:";
            for (Index i = 1; i < m.height(); ++i)
                for (Index j = i + 1; j <= m.height(); ++j) out << " " << m.beta(i, j);
            out << "\n";
        }
    }
    if (res.oracle_checked) {
        out << "  oracle checked " << res.oracle_checked << ", mismatches " << res.oracle_mismatches.size() << "\n";
        for (const auto& s : res.oracle_mismatches) out << "    MISMATCH " << s << "\n";
    }
    return out.str();
}

inline nlohmann::json to_json(const CensusResult& res) {
    nlohmann::json j;
    j["schema"] = census_schema;
    j["r"] = res.r;
    j["lo"] = res.lo;
    j["hi"] = res.hi;
    j["total"] = res.total;
    nlohmann::json counts, samples;
    for (FanoClass c : {FanoClass::fano, FanoClass::weak_not_fano, FanoClass::neither}) {
        counts[class_name(c)] = res.count(c);
        samples[class_name(c)] = nlohmann::json::array();
        for (const auto& m : res.sample(c)) samples[class_name(c)].push_back(to_json(m));
    }
    j["counts"] = counts;
    j["samples"] = samples;
    j["oracle"] = {{"checked", res.oracle_checked}, {"mismatches", res.oracle_mismatches}};
    return j;
}

}  // namespace bottkit
