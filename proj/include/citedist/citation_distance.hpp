#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citedist/distance.hpp"
#include "citedist/types.hpp"

namespace citedist {

class CorpusStore;
class CollabNetwork;
struct CitationEvent;

/**
 * Multiset of citation distances stored as counts: one slot per finite
 * distance, plus an infinite bucket and an over-cap bucket (distances only
 * known to exceed a search cap).
 */
struct DistanceCounts {
    std::vector<std::uint64_t> finite;
    std::uint64_t infinite = 0;
    std::uint64_t over_cap = 0;
    /// Cap behind over_cap entries (meaningful when over_cap > 0).
    std::uint32_t cap = 0;

    void add(Distance d, std::uint64_t count = 1);
    void merge(const DistanceCounts& other);
    std::uint64_t total() const;
    std::uint64_t at(std::uint32_t d) const { return d < finite.size() ? finite[d] : 0; }
    /// Largest finite distance with a non-zero count.
    std::optional<std::uint32_t> max_finite() const;
    bool empty() const { return total() == 0; }

    friend bool operator==(const DistanceCounts&, const DistanceCounts&) = default;
};

/// Distance of one citation: minimum collaboration distance between any
/// cited and any citing author on the citing year's network.
/// Throws PreconditionError when the network is not for the event's year.
Distance citation_distance(const CollabNetwork& net, const CitationEvent& event,
                           std::optional<std::uint32_t> cap = {});

struct DistanceConfig {
    int window_length = 5;
    /// Unset: exact distances (needed for c-index, N_w, D_f).
    std::optional<std::uint32_t> cap;
    /// Skip citing years whose window would start before the corpus.
    bool strict_window = false;
    unsigned jobs = 1;
};

struct EventDistance {
    PaperIndex cited = 0;
    PaperIndex citing = 0;
    Distance distance;
};

/// Distances for every citation event of `year` on `net` (the year's network),
/// ordered as CorpusStore::citations_in_year. Work fans out over cfg.jobs threads.
std::vector<EventDistance> year_event_distances(const CorpusStore& store, const CollabNetwork& net,
                                                int year, const DistanceConfig& cfg);

/// One year's increment: counts per cited scholar (full counting), per cited
/// paper, and over all events.
struct YearLedger {
    int year = 0;
    std::optional<std::uint32_t> cap;
    /// True when the year was skipped under strict windowing.
    bool skipped = false;
    DistanceCounts events;
    std::map<AuthorId, DistanceCounts> scholars;
    std::map<PaperIndex, DistanceCounts> papers;

    friend bool operator==(const YearLedger&, const YearLedger&) = default;
};

/// Credits every event to each author of the cited paper and to the cited paper.
YearLedger credit_events(const CorpusStore& store, int year, std::span<const EventDistance> events,
                         std::optional<std::uint32_t> cap);

/// Builds the year's network and ledger increment in one step.
YearLedger batch_year_distances(const CorpusStore& store, int year, const DistanceConfig& cfg);

/// First citing year processed under strict windowing.
int first_full_window_year(const CorpusStore& store, int window_length);

/// Per-year ledgers for a contiguous range of years.
class DistanceLedger {
public:
    /// Years must be appended in order without gaps.
    void append(YearLedger year);
    bool empty() const { return years_.empty(); }
    int first_year() const { return years_.begin()->first; }
    int last_year() const { return years_.rbegin()->first; }
    const YearLedger* year(int y) const;
    const std::map<int, YearLedger>& years() const { return years_; }

    /// Scholar counts accumulated over all ledger years <= through_year.
    DistanceCounts scholar_counts(AuthorId scholar, int through_year) const;
    DistanceCounts paper_counts(PaperIndex paper, int through_year) const;
    /// Infinite-distance citations of a scholar (N_w).
    std::uint64_t infinite_count(AuthorId scholar, int through_year) const;
    /// Maximum finite distance of a scholar's citations (D_f).
    std::optional<std::uint32_t> max_finite_distance(AuthorId scholar, int through_year) const;

private:
    std::map<int, YearLedger> years_;
};

struct HistogramBin {
    std::string label; ///< distance, "INF" or ">k"
    double proportion = 0;
};

struct YearHistogram {
    int year = 0;
    std::uint64_t total = 0;
    std::vector<HistogramBin> bins;
    /// Share of citations with finite distance <= max_bin.
    double share_within = 0;
};

struct DistanceHistogram {
    std::vector<YearHistogram> years;
    std::vector<std::string> notices;
};

/// Per-year normalized event-distance distribution. Years without citations
/// are omitted with a notice.
DistanceHistogram distance_histogram(const DistanceLedger& ledger, std::span<const int> years,
                                     std::uint32_t max_bin = 12);

/// CSV `year,d,proportion`.
void write_histogram_csv(const DistanceHistogram& hist, std::ostream& out);

/// Line-delimited persistence: a header record, then one record per scholar
/// and per paper (`{"kind":"scholar","id":..,"finite":[..],"inf":..,"over_cap":..}`).
void write_year_ledger(const YearLedger& ledger, const CorpusStore& store, std::ostream& out);
YearLedger read_year_ledger(std::istream& in, const CorpusStore& store);

} // namespace citedist
