#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "citedist/citation_distance.hpp"
#include "citedist/corpus.hpp"
#include "citedist/indices.hpp"

namespace citedist {

/// Settings read from a plain `key = value` file (`#` starts a comment).
struct RunConfig {
    CorpusConfig corpus;
    int window_length = 5;
    std::uint32_t n = 6;
    double alpha = 1.0;
    DistanceMode mode = DistanceMode::Exact;
    bool strict_window = false;
    bool retain_ledgers = true;
    unsigned jobs = 1;
    std::optional<int> first_year;
    double closeness_k = 0.1;
};

/// Throws PreconditionError on unknown keys or malformed values.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text of the settings that shape run artifacts (hash input).
std::string run_config_text(const RunConfig& cfg);

WeightConfig weight_config(const RunConfig& cfg);
DistanceConfig distance_config(const RunConfig& cfg);

/**
 * On-disk staging area:
 *
 *     <root>/corpus.jsonl          canonical corpus snapshot
 *     <root>/ingest.json           validation summary + corpus hash
 *     <root>/config.txt            default config (optional)
 *     <root>/runs/<hash>/          one directory per (config, corpus)
 *         manifest.json
 *         ledgers/<year>.jsonl     per-year distance ledgers
 *         states/<year>.jsonl      per-year x-index snapshots (commit marker)
 *     <root>/reports/              report CSVs and manifests
 */
class Workspace {
public:
    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path corpus_path() const { return root_ / "corpus.jsonl"; }
    std::filesystem::path config_path() const { return root_ / "config.txt"; }
    std::filesystem::path reports_dir() const { return root_ / "reports"; }

    /// Parses `input`, writes the snapshot and summary, returns the store.
    CorpusStore ingest(const std::filesystem::path& input, InputFormat format, const CorpusConfig& cfg);
    /// Throws IncompleteStateError when nothing was ingested.
    CorpusStore load_corpus(const CorpusConfig& cfg) const;
    /// Config file of the workspace, defaults when absent.
    RunConfig default_config() const;

private:
    std::filesystem::path root_;
};

struct RunSummary {
    int first_year = 0;
    int last_year = 0;
    std::vector<int> computed;
    std::vector<int> reused;
};

/**
 * Year-by-year pipeline for one config: build the windowed network, batch the year's citation
 * distances, advance x. Each year commits by writing its state snapshot, so an
 * interrupted run resumes at the first year without one.
 */
class Pipeline {
public:
    Pipeline(const Workspace& ws, const CorpusStore& store, RunConfig cfg);

    const std::string& run_hash() const { return hash_; }
    std::filesystem::path run_dir() const;
    int first_year() const { return first_year_; }
    /// Last year with a committed state, if any.
    std::optional<int> last_completed_year() const;

    RunSummary run(int to_year, bool force, std::ostream& log);

    /// Ledgers [first_year, through_year]; IncompleteStateError if any is missing.
    DistanceLedger load_ledgers(int through_year) const;
    YearLedger load_ledger(int year) const;
    IndexStateStore load_state(int year) const;

    std::filesystem::path ledger_path(int year) const;
    std::filesystem::path state_path(int year) const;

private:
    void write_manifest() const;
    void write_state(const IndexStateStore& state) const;

    const Workspace& ws_;
    const CorpusStore& store_;
    RunConfig cfg_;
    std::string corpus_hash_;
    std::string hash_;
    int first_year_ = 0;
};

} // namespace citedist
