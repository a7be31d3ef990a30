#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "citedist/citation_distance.hpp"
#include "citedist/distance.hpp"
#include "citedist/types.hpp"

namespace citedist {

class CorpusStore;

enum class DistanceMode { Exact, Capped };

struct WeightConfig {
    /// Distances up to n are down-weighted linearly.
    std::uint32_t n = 6;
    /// c-index slope.
    double alpha = 1.0;
    int window_length = 5;
    /// Capped runs search only n levels; enough for x, not for c / N_w / D_f.
    DistanceMode mode = DistanceMode::Exact;
};

/**
 * An x-index value held exactly as `units / denom`.
 *
 * With the piecewise-linear weight every citation contributes d/n or 1, so an
 * integer numerator over n represents any sum of weights without rounding.
 * For n = 0 the denominator is 1 and x is the plain citation count.
 */
class XScore {
public:
    XScore() = default;
    explicit XScore(std::uint64_t units, std::uint32_t denom = 1);

    /// Nearest representable value; used for transcribed report values.
    static XScore from_value(double value, std::uint32_t denom);

    std::uint64_t units() const { return units_; }
    std::uint32_t denom() const { return denom_; }
    double value() const { return static_cast<double>(units_) / static_cast<double>(denom_); }
    /// Half-up rounding to 2 decimals, as printed in reports.
    std::string to_string_2dp() const;

    XScore& operator+=(const XScore& other);
    friend XScore operator+(XScore a, const XScore& b) { return a += b; }
    friend bool operator==(const XScore&, const XScore&) = default;

private:
    std::uint64_t units_ = 0;
    std::uint32_t denom_ = 1;
};

/// Denominator used for a given threshold n.
inline std::uint32_t x_denominator(std::uint32_t n) { return n == 0 ? 1 : n; }

/// Citation weight: d/n for 0 <= d <= n, 1 beyond n or for INFINITE; 1 for
/// every d when n = 0 (0/0 taken as 1). EXCEEDS_CAP(k) weighs 1 when k >= n
/// and is rejected otherwise.
double weight(Distance d, std::uint32_t n);

/// Pluggable monotone map into [0, 1]; the default is `weight(d, n)`.
using WeightFunction = std::function<double(Distance)>;

/// Sum of weights over one year's distance counts for one scholar (or paper).
XScore x_increment(const DistanceCounts& counts, std::uint32_t n);
double x_increment(const DistanceCounts& counts, const WeightFunction& weight_fn);

/// Running x-index of one scholar.
struct ScholarIndexState {
    AuthorId scholar = 0;
    int year = 0;
    XScore x;
    int first_year = 0;

    friend bool operator==(const ScholarIndexState&, const ScholarIndexState&) = default;
};

/// State before any citation: x = 0, year = first_year - 1.
ScholarIndexState initial_state(AuthorId scholar, int first_year, std::uint32_t n);

/// x(y) = x(y-1) + delta. Throws SequenceError unless year == state.year + 1.
ScholarIndexState update_x(const ScholarIndexState& state, int year, XScore delta);

/**
 * Running x-index for every author of a corpus, advanced one year at a time
 * from the year ledgers. Only the current year's ledger is needed per step.
 */
class IndexStateStore {
public:
    IndexStateStore() = default;
    IndexStateStore(std::size_t authors, int year, std::uint32_t n);

    int year() const { return year_; }
    std::uint32_t n() const { return n_; }
    XScore x(AuthorId a) const { return XScore(units_[a], x_denominator(n_)); }
    std::size_t size() const { return units_.size(); }
    std::span<const std::uint64_t> units() const { return units_; }
    std::vector<std::uint64_t>& mutable_units() { return units_; }

    /// Applies the ledger for year()+1; throws SequenceError otherwise.
    void apply(const YearLedger& ledger);

private:
    int year_ = 0;
    std::uint32_t n_ = 6;
    std::vector<std::uint64_t> units_;
};

/// c-index. Distances are sorted descending with INFINITE above every
/// finite value and min(alpha*v, INFINITE) = alpha*v. Empty input gives 0.
double c_index(std::span<const Distance> distances, double alpha = 1.0);
/// Same, over counts (no sort needed).
double c_index(const DistanceCounts& counts, double alpha = 1.0);

/// Largest h with at least h papers cited at least h times.
std::uint32_t h_index(std::span<const std::uint64_t> citations);
/// Largest g <= #papers whose g most cited papers total at least g^2 citations.
std::uint32_t g_index(std::span<const std::uint64_t> citations);

struct IndexRecord {
    AuthorId scholar = 0;
    int year = 0;
    std::uint64_t q = 0;
    std::uint32_t h = 0;
    std::uint32_t g = 0;
    double c = 0;
    std::uint64_t n_w = 0;
    XScore x;

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

/// Citations per authored paper up to `year` (zeros included for papers
/// published by then), from the same ledgers that feed Q.
std::vector<std::uint64_t> per_paper_counts(const CorpusStore& store, const DistanceLedger& ledger,
                                            AuthorId scholar, int year);

/// One scholar's indices at `year`. Throws IncompleteStateError when the
/// ledger does not reach `year` and PreconditionError for capped ledgers.
IndexRecord scholar_snapshot(AuthorId scholar, int year, const DistanceLedger& ledger,
                             std::span<const std::uint64_t> paper_counts, const WeightConfig& cfg);

/// Paper-level x-index (the same weighting applied to the paper's citations).
XScore paper_x(const DistanceLedger& ledger, PaperIndex paper, int year, std::uint32_t n);

/// Records for every scholar with a paper published by `year` or a citation
/// received by then, ascending scholar id.
std::vector<IndexRecord> index_table(const CorpusStore& store, const DistanceLedger& ledger, int year,
                                     const WeightConfig& cfg);

std::string index_table_csv_header();
std::string index_table_csv_row(const IndexRecord& rec, const CorpusStore& store);

} // namespace citedist
