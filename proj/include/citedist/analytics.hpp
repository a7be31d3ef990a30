#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "citedist/indices.hpp"

namespace citedist {

class CorpusStore;
class CollabNetwork;

enum class IndexKind { Q, H, G, C, Nw, X };

double index_value(const IndexRecord& rec, IndexKind kind);
std::string_view index_name(IndexKind kind);
/// Accepts "Q", "h", "g", "c", "N_w"/"nw", "x" (case-insensitive).
std::optional<IndexKind> parse_index_kind(std::string_view name);

// --- c == N_w degeneracy -----------------------------------------------------

struct QBinStat {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0; ///< exclusive
    std::size_t scholars = 0;
    std::size_t degenerate = 0; ///< scholars with c == N_w
    double ratio = 0;
};

/// Default Q bin edges: [50,200), [200,400), [400,600), [600,800), [800,1000).
std::vector<std::uint64_t> default_q_edges();

/// Per Q bin, how many scholars have a c-index equal to their N_w.
std::vector<QBinStat> c_equals_nw_stats(std::span<const IndexRecord> records, std::span<const std::uint64_t> edges);

// --- repeated citations --------------------------------------------------------

struct HeatmapConfig {
    /// Lower edges of repeat-count bins; the last bin is open-ended.
    std::vector<std::uint64_t> repeat_edges{0, 1, 2, 3, 4, 5, 10, 20, 50};
    /// Finite distance columns run 1..max_distance; then ">max" and INF.
    std::uint32_t max_distance = 12;
};

struct RepeatedCitationMatrix {
    std::vector<std::string> repeat_labels;
    std::vector<std::string> distance_labels;
    /// pairs[r][d]: scholar pairs whose repeat count falls in bin r and whose
    /// collaboration distance falls in column d.
    std::vector<std::vector<std::uint64_t>> pairs;
    /// Same cells, summing the pairs' total citations.
    std::vector<std::vector<std::uint64_t>> citations;

    std::uint64_t total_pairs() const;
    std::uint64_t total_citations() const;
};

/// Undirected scholar-pair citation counts over citing years [from, to];
/// repeat count = total - 1, binned against the pair's distance in `net`.
/// A citation links every (cited author, citing author) pair of distinct
/// scholars once.
RepeatedCitationMatrix repeated_citation_matrix(const CorpusStore& store, int from, int to,
                                                const CollabNetwork& net, const HeatmapConfig& cfg = {});

// --- cohorts -------------------------------------------------------------------

struct CohortSelection {
    std::uint64_t q_min = 0;
    std::uint64_t q_max = 0; ///< inclusive
    std::optional<std::uint32_t> h;
    std::optional<std::uint32_t> g;
    std::optional<double> c;
    std::optional<std::uint64_t> n_w;
    std::size_t sample_size = 20;
    std::uint64_t seed = 0;
};

class CohortError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool satisfies(const IndexRecord& rec, const CohortSelection& sel);

/// Uniform sample without replacement among qualifying records (visited in
/// scholar-id order), reproducible from the seed. Throws CohortError when
/// fewer than sample_size records qualify.
std::vector<IndexRecord> select_cohort(std::span<const IndexRecord> records, const CohortSelection& sel);

// --- closeness -----------------------------------------------------------------

/// Population standard deviation (divides by N).
double population_stddev(std::span<const double> values);

/// |a - b| <= k * s; with s == 0 every pair is close.
bool is_close(double a, double b, double s, double k = 0.1);

struct PairCloseness {
    AuthorId first = 0;
    AuthorId second = 0;
    bool close_a = false;
    bool close_b = false;
};

struct ClosenessResult {
    IndexKind index_a = IndexKind::C;
    IndexKind index_b = IndexKind::X;
    double s_a = 0;
    double s_b = 0;
    double k = 0.1;
    std::vector<PairCloseness> pairs;

    /// Counts ordered (Close,Close), (Close,Not), (Not,Close), (Not,Not).
    std::array<std::size_t, 4> cell_counts() const;
};

/// Classifies every unordered cohort pair on both indices. Cohort must have >= 2 records.
ClosenessResult classify_closeness(std::span<const IndexRecord> cohort, IndexKind index_a, IndexKind index_b,
                                   double k = 0.1);

// --- ranking -------------------------------------------------------------------

struct RankEntry {
    AuthorId scholar = 0;
    double value = 0;
    std::uint64_t q = 0;
    std::size_t position = 0; ///< 1-based
};

/// Descending by index value, ties by Q descending then scholar id ascending.
std::vector<RankEntry> rank(std::span<const IndexRecord> records, IndexKind kind);

// --- scatter -------------------------------------------------------------------

struct ScatterPoint {
    AuthorId scholar = 0;
    std::uint64_t q = 0;
    double x = 0;
};

/// Samples scholars with 0 < Q < q_max for the x-versus-Q plot.
std::vector<ScatterPoint> x_vs_q_scatter(std::span<const IndexRecord> records, std::uint64_t q_max,
                                         std::size_t sample_size, std::uint64_t seed);

/// Deterministic uniform draw in [0, bound) (rejection sampling over mt19937_64).
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, std::uint64_t seed);

} // namespace citedist
