#include "citedist/indices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "citedist/corpus.hpp"
#include "citedist/util.hpp"

namespace citedist {

XScore::XScore(std::uint64_t units, std::uint32_t denom) : units_(units), denom_(denom)
{
    if (denom == 0)
        throw PreconditionError("x-index denominator must be positive");
}

XScore XScore::from_value(double value, std::uint32_t denom)
{
    if (value < 0)
        throw PreconditionError("x-index cannot be negative");
    return XScore(static_cast<std::uint64_t>(std::llround(value * denom)), denom);
}

std::string XScore::to_string_2dp() const
{
    // round(units * 100 / denom), halves up, in integers.
    const std::uint64_t hundredths = (units_ * 200 + denom_) / (2ull * denom_);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(hundredths / 100),
                  static_cast<unsigned long long>(hundredths % 100));
    return buf;
}

XScore& XScore::operator+=(const XScore& other)
{
    if (other.denom_ != denom_) {
        if (other.units_ == 0)
            return *this;
        if (units_ != 0)
            throw PreconditionError("adding x-index values with different thresholds");
        denom_ = other.denom_;
    }
    units_ += other.units_;
    return *this;
}

double weight(Distance d, std::uint32_t n)
{
    switch (d.kind()) {
    case Distance::Kind::Infinite:
        return 1.0;
    case Distance::Kind::ExceedsCap:
        if (d.cap() < n)
            throw PreconditionError("distance beyond cap " + std::to_string(d.cap()) +
                                    " cannot be weighted with n = " + std::to_string(n));
        return 1.0;
    case Distance::Kind::Finite:
        break;
    }
    if (n == 0 || d.hops() > n)
        return 1.0;
    return static_cast<double>(d.hops()) / static_cast<double>(n);
}

XScore x_increment(const DistanceCounts& counts, std::uint32_t n)
{
    if (counts.over_cap > 0 && counts.cap < n)
        throw PreconditionError("ledger cap " + std::to_string(counts.cap) + " is below n = " + std::to_string(n));
    if (n == 0)
        return XScore(counts.total(), 1);
    std::uint64_t units = n * (counts.infinite + counts.over_cap);
    for (std::size_t d = 0; d < counts.finite.size(); ++d)
        units += counts.finite[d] * std::min<std::uint64_t>(d, n);
    return XScore(units, n);
}

double x_increment(const DistanceCounts& counts, const WeightFunction& weight_fn)
{
    double sum = 0;
    for (std::size_t d = 0; d < counts.finite.size(); ++d) {
        if (counts.finite[d] > 0)
            sum += weight_fn(Distance::finite(static_cast<std::uint32_t>(d))) * static_cast<double>(counts.finite[d]);
    }
    if (counts.over_cap > 0)
        sum += weight_fn(Distance::exceeds_cap(counts.cap)) * static_cast<double>(counts.over_cap);
    if (counts.infinite > 0)
        sum += weight_fn(Distance::infinite()) * static_cast<double>(counts.infinite);
    return sum;
}

ScholarIndexState initial_state(AuthorId scholar, int first_year, std::uint32_t n)
{
    return {scholar, first_year - 1, XScore(0, x_denominator(n)), first_year};
}

ScholarIndexState update_x(const ScholarIndexState& state, int year, XScore delta)
{
    if (year != state.year + 1)
        throw SequenceError("x update for " + std::to_string(year) + " after state of " + std::to_string(state.year));
    ScholarIndexState next = state;
    next.year = year;
    next.x += delta;
    return next;
}

IndexStateStore::IndexStateStore(std::size_t authors, int year, std::uint32_t n)
    : year_(year), n_(n), units_(authors, 0)
{
}

void IndexStateStore::apply(const YearLedger& ledger)
{
    if (ledger.year != year_ + 1)
        throw SequenceError("state at " + std::to_string(year_) + " cannot take ledger of " +
                            std::to_string(ledger.year));
    // Validate first so a failed year leaves the store untouched.
    std::vector<std::pair<AuthorId, std::uint64_t>> deltas;
    deltas.reserve(ledger.scholars.size());
    for (const auto& [a, counts] : ledger.scholars) {
        if (a >= units_.size())
            throw PreconditionError("ledger scholar outside state store");
        deltas.emplace_back(a, x_increment(counts, n_).units());
    }
    for (const auto& [a, units] : deltas)
        units_[a] += units;
    year_ = ledger.year;
}

// ---------------------------------------------------------------------------

double c_index(std::span<const Distance> distances, double alpha)
{
    if (!(alpha > 0))
        throw PreconditionError("c-index slope must be positive");
    std::vector<Distance> sorted(distances.begin(), distances.end());
    for (const auto& d : sorted) {
        if (d.is_exceeds_cap())
            throw PreconditionError("c-index needs exact distances");
    }
    std::sort(sorted.begin(), sorted.end(), [](const Distance& a, const Distance& b) {
        if (a.is_infinite() || b.is_infinite())
            return a.is_infinite() && !b.is_infinite();
        return a.hops() > b.hops();
    });
    double best = 0;
    for (std::size_t v = 1; v <= sorted.size(); ++v) {
        const double line = alpha * static_cast<double>(v);
        const auto& d = sorted[v - 1];
        best = std::max(best, d.is_infinite() ? line : std::min(line, static_cast<double>(d.hops())));
    }
    return best;
}

double c_index(const DistanceCounts& counts, double alpha)
{
    if (!(alpha > 0))
        throw PreconditionError("c-index slope must be positive");
    if (counts.over_cap > 0)
        throw PreconditionError("c-index needs exact distances");
    // Within a run of equal distances the maximum of min(alpha*v, d) sits at
    // the run's last rank.
    double best = 0;
    std::uint64_t rank = counts.infinite;
    if (rank > 0)
        best = alpha * static_cast<double>(rank);
    for (std::size_t d = counts.finite.size(); d-- > 0;) {
        if (counts.finite[d] == 0)
            continue;
        rank += counts.finite[d];
        best = std::max(best, std::min(alpha * static_cast<double>(rank), static_cast<double>(d)));
    }
    return best;
}

std::uint32_t h_index(std::span<const std::uint64_t> citations)
{
    std::vector<std::uint64_t> sorted(citations.begin(), citations.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::uint32_t h = 0;
    while (h < sorted.size() && sorted[h] >= h + 1)
        ++h;
    return h;
}

std::uint32_t g_index(std::span<const std::uint64_t> citations)
{
    std::vector<std::uint64_t> sorted(citations.begin(), citations.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::uint64_t sum = 0;
    std::uint32_t g = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        sum += sorted[i];
        const std::uint64_t k = i + 1;
        if (sum >= k * k)
            g = static_cast<std::uint32_t>(k);
    }
    return g;
}

// ---------------------------------------------------------------------------

namespace {

void require_year(const DistanceLedger& ledger, int year)
{
    if (ledger.empty() || year > ledger.last_year())
        throw IncompleteStateError("no distance ledger for year " + std::to_string(year));
}

} // namespace

std::vector<std::uint64_t> per_paper_counts(const CorpusStore& store, const DistanceLedger& ledger,
                                            AuthorId scholar, int year)
{
    std::vector<std::uint64_t> out;
    for (PaperIndex p : store.papers_of_author(scholar)) {
        const auto cites = ledger.paper_counts(p, year).total();
        if (store.paper_year(p) <= year || cites > 0)
            out.push_back(cites);
    }
    return out;
}

IndexRecord scholar_snapshot(AuthorId scholar, int year, const DistanceLedger& ledger,
                             std::span<const std::uint64_t> paper_counts, const WeightConfig& cfg)
{
    require_year(ledger, year);
    IndexRecord rec;
    rec.scholar = scholar;
    rec.year = year;
    rec.x = XScore(0, x_denominator(cfg.n));
    DistanceCounts all;
    for (const auto& [y, slice] : ledger.years()) {
        if (y > year)
            break;
        if (auto it = slice.scholars.find(scholar); it != slice.scholars.end()) {
            rec.x += x_increment(it->second, cfg.n);
            all.merge(it->second);
        }
    }
    if (all.over_cap > 0)
        throw PreconditionError("scholar snapshot needs exact distances (ledger was capped)");
    rec.q = all.total();
    rec.n_w = all.infinite;
    rec.c = c_index(all, cfg.alpha);
    rec.h = h_index(paper_counts);
    rec.g = g_index(paper_counts);
    return rec;
}

XScore paper_x(const DistanceLedger& ledger, PaperIndex paper, int year, std::uint32_t n)
{
    XScore x(0, x_denominator(n));
    for (const auto& [y, slice] : ledger.years()) {
        if (y > year)
            break;
        if (auto it = slice.papers.find(paper); it != slice.papers.end())
            x += x_increment(it->second, n);
    }
    return x;
}

std::vector<IndexRecord> index_table(const CorpusStore& store, const DistanceLedger& ledger, int year,
                                     const WeightConfig& cfg)
{
    require_year(ledger, year);
    std::vector<DistanceCounts> scholars(store.author_count());
    std::vector<std::uint64_t> paper_totals(store.paper_count(), 0);
    for (const auto& [y, slice] : ledger.years()) {
        if (y > year)
            break;
        for (const auto& [a, counts] : slice.scholars)
            scholars[a].merge(counts);
        for (const auto& [p, counts] : slice.papers)
            paper_totals[p] += counts.total();
    }

    std::vector<IndexRecord> out;
    std::vector<std::uint64_t> papers;
    for (AuthorId a = 0; a < store.author_count(); ++a) {
        const auto& counts = scholars[a];
        if (store.author_first_year(a) > year && counts.empty())
            continue;
        if (counts.over_cap > 0)
            throw PreconditionError("index table needs exact distances (ledger was capped)");
        papers.clear();
        for (PaperIndex p : store.papers_of_author(a)) {
            if (store.paper_year(p) <= year || paper_totals[p] > 0)
                papers.push_back(paper_totals[p]);
        }
        IndexRecord rec;
        rec.scholar = a;
        rec.year = year;
        rec.q = counts.total();
        rec.n_w = counts.infinite;
        rec.c = c_index(counts, cfg.alpha);
        rec.h = h_index(papers);
        rec.g = g_index(papers);
        // Exact arithmetic: x over the pooled counts equals the sum of yearly increments.
        rec.x = x_increment(counts, cfg.n);
        out.push_back(rec);
    }
    return out;
}

std::string index_table_csv_header()
{
    return "scholar,year,Q,h,g,c,N_w,x";
}

std::string index_table_csv_row(const IndexRecord& rec, const CorpusStore& store)
{
    return csv_field(store.author_name(rec.scholar)) + ',' + std::to_string(rec.year) + ',' +
           std::to_string(rec.q) + ',' + std::to_string(rec.h) + ',' + std::to_string(rec.g) + ',' +
           format_number(rec.c) + ',' + std::to_string(rec.n_w) + ',' + rec.x.to_string_2dp();
}

} // namespace citedist
