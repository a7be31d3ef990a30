#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "citedist/types.hpp"

namespace citedist {

struct CorpusConfig {
    int min_year = 1000;
    int max_year = 9999;
};

/// One raw input record before interning.
struct PaperRecord {
    std::string id;
    int year = 0;
    std::vector<std::string> authors;
    std::vector<std::string> references;
};

/// Parses one canonical line (`{"id":..,"year":..,"authors":[..],"references":[..]}`).
/// Author names are trimmed, empty names dropped and duplicates collapsed.
/// Returns nullopt and fills `error` for malformed input.
std::optional<PaperRecord> parse_canonical_line(std::string_view line, std::string* error = nullptr);

/// Maps one DBLP-Citation-network V12 object line (`authors` as objects with
/// `id`/`name`) to the canonical record. Leading `[`/`,` and a trailing `]`
/// from the array-per-file export layout are tolerated.
std::optional<PaperRecord> parse_dblp_v12_line(std::string_view line, std::string* error = nullptr);

enum class InputFormat { Canonical, DblpV12 };

struct IngestProblem {
    std::size_t line = 0;
    std::string reason;
};

/// Validation report produced by parse_records.
struct IngestSummary {
    std::size_t papers = 0;
    std::size_t authors = 0;
    std::size_t citations = 0;
    std::size_t dangling_references = 0;
    std::size_t duplicate_papers = 0;
    std::size_t skipped_lines = 0;
    std::size_t out_of_range = 0;
    std::size_t self_references = 0;
    /// First problems encountered (capped), with 1-based line numbers.
    std::vector<IngestProblem> problems;

    std::string to_json() const;
};

struct YearCount {
    int year = 0;
    std::size_t papers = 0;
    std::size_t citations = 0;

    friend bool operator==(const YearCount&, const YearCount&) = default;
};

/// A resolved directed citation: `citing` references `cited`.
/// The author spans point into the owning CorpusStore.
struct CitationEvent {
    PaperIndex cited = 0;
    PaperIndex citing = 0;
    int citing_year = 0;
    std::span<const AuthorId> cited_authors;
    std::span<const AuthorId> citing_authors;
};

/**
 * Immutable, interned paper corpus.
 *
 * Papers keep input order (first occurrence wins on duplicate ids). Author
 * ids are dense and assigned by first appearance. References to papers that
 * are not in the corpus are kept as dangling strings and never produce
 * citation events.
 */
class CorpusStore {
public:
    std::size_t paper_count() const { return paper_ids_.size(); }
    std::size_t author_count() const { return author_names_.size(); }
    /// Resolved citation events (forward edges).
    std::size_t citation_count() const { return references_.size(); }

    const std::string& paper_id(PaperIndex p) const { return paper_ids_[p]; }
    int paper_year(PaperIndex p) const { return paper_years_[p]; }
    std::span<const AuthorId> authors_of(PaperIndex p) const;
    /// Resolved references of `p`, deduplicated, in input order.
    std::span<const PaperIndex> references_of(PaperIndex p) const;
    std::span<const std::string> dangling_of(PaperIndex p) const;
    /// Citing papers of `p`, ordered by (year, index).
    std::span<const PaperIndex> cited_by(PaperIndex p) const;

    const std::string& author_name(AuthorId a) const { return author_names_[a]; }
    std::optional<AuthorId> find_author(const std::string& name) const;
    std::optional<PaperIndex> find_paper(const std::string& id) const;
    /// Papers (co)authored by `a`, ascending index.
    std::span<const PaperIndex> papers_of_author(AuthorId a) const;
    /// Earliest publication year of `a`.
    int author_first_year(AuthorId a) const { return author_first_year_[a]; }

    int first_year() const { return first_year_; }
    int last_year() const { return last_year_; }
    /// Papers published in `year`, ascending index; empty outside the corpus.
    std::span<const PaperIndex> papers_in_year(int year) const;

    /// (year, papers published, citation events whose citing year is `year`)
    /// for every year in [from, to]; empty when from > to.
    std::vector<YearCount> yearly_counts(int from, int to) const;
    /// All resolved citation events with citing_year == year.
    std::vector<CitationEvent> citations_in_year(int year) const;

    const IngestSummary& summary() const { return summary_; }

    /// Canonical line-delimited serialization; re-parsing it rebuilds the
    /// same interned tables.
    void write_canonical(std::ostream& out) const;
    /// SHA-256 (hex) of write_canonical's output.
    std::string content_hash() const;

private:
    friend CorpusStore parse_records(std::istream&, const CorpusConfig&, InputFormat);

    std::vector<std::string> paper_ids_;
    std::vector<int> paper_years_;
    std::vector<std::size_t> author_offsets_{0};
    std::vector<AuthorId> paper_authors_;
    std::vector<std::size_t> reference_offsets_{0};
    std::vector<PaperIndex> references_;
    std::vector<std::size_t> dangling_offsets_{0};
    std::vector<std::string> dangling_;
    std::vector<std::size_t> cited_by_offsets_;
    std::vector<PaperIndex> cited_by_;

    std::vector<std::string> author_names_;
    std::unordered_map<std::string, AuthorId> author_lookup_;
    std::unordered_map<std::string, PaperIndex> paper_lookup_;
    std::vector<std::size_t> author_paper_offsets_;
    std::vector<PaperIndex> author_papers_;
    std::vector<int> author_first_year_;

    int first_year_ = 0;
    int last_year_ = -1;
    std::vector<std::size_t> year_offsets_;
    std::vector<PaperIndex> year_papers_;

    IngestSummary summary_;
};

/**
 * Reads line-delimited records and builds a fully indexed store.
 *
 * Malformed lines are skipped and counted, duplicate paper ids keep the first
 * occurrence, records outside [min_year, max_year] are dropped and counted.
 * Throws IngestError when the stream is unreadable and EmptyCorpusError when
 * no valid record remains.
 */
CorpusStore parse_records(std::istream& in, const CorpusConfig& config = {},
                          InputFormat format = InputFormat::Canonical);

/// parse_records over a file; IngestError names the path when it cannot be opened.
CorpusStore load_corpus(const std::string& path, const CorpusConfig& config = {},
                        InputFormat format = InputFormat::Canonical);

} // namespace citedist
