#include "citedist/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "citedist/collab_graph.hpp"
#include "citedist/corpus.hpp"

namespace citedist {

double index_value(const IndexRecord& rec, IndexKind kind)
{
    switch (kind) {
    case IndexKind::Q: return static_cast<double>(rec.q);
    case IndexKind::H: return rec.h;
    case IndexKind::G: return rec.g;
    case IndexKind::C: return rec.c;
    case IndexKind::Nw: return static_cast<double>(rec.n_w);
    case IndexKind::X: return rec.x.value();
    }
    return 0;
}

std::string_view index_name(IndexKind kind)
{
    switch (kind) {
    case IndexKind::Q: return "Q";
    case IndexKind::H: return "h";
    case IndexKind::G: return "g";
    case IndexKind::C: return "c";
    case IndexKind::Nw: return "N_w";
    case IndexKind::X: return "x";
    }
    return "?";
}

std::optional<IndexKind> parse_index_kind(std::string_view name)
{
    std::string lower;
    for (char ch : name)
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "q") return IndexKind::Q;
    if (lower == "h") return IndexKind::H;
    if (lower == "g") return IndexKind::G;
    if (lower == "c") return IndexKind::C;
    if (lower == "n_w" || lower == "nw") return IndexKind::Nw;
    if (lower == "x") return IndexKind::X;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<std::uint64_t> default_q_edges()
{
    return {50, 200, 400, 600, 800, 1000};
}

std::vector<QBinStat> c_equals_nw_stats(std::span<const IndexRecord> records, std::span<const std::uint64_t> edges)
{
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw PreconditionError("Q bins need at least two ascending edges");
    std::vector<QBinStat> bins;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        bins.push_back({edges[i], edges[i + 1], 0, 0, 0});
    for (const auto& rec : records) {
        for (auto& bin : bins) {
            if (rec.q >= bin.lo && rec.q < bin.hi) {
                ++bin.scholars;
                if (rec.c == static_cast<double>(rec.n_w))
                    ++bin.degenerate;
                break;
            }
        }
    }
    for (auto& bin : bins)
        bin.ratio = bin.scholars ? static_cast<double>(bin.degenerate) / static_cast<double>(bin.scholars) : 0.0;
    return bins;
}

// ---------------------------------------------------------------------------

std::uint64_t RepeatedCitationMatrix::total_pairs() const
{
    std::uint64_t sum = 0;
    for (const auto& row : pairs)
        sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

std::uint64_t RepeatedCitationMatrix::total_citations() const
{
    std::uint64_t sum = 0;
    for (const auto& row : citations)
        sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

RepeatedCitationMatrix repeated_citation_matrix(const CorpusStore& store, int from, int to, const CollabNetwork& net,
                                                const HeatmapConfig& cfg)
{
    if (cfg.repeat_edges.empty() || cfg.repeat_edges.front() != 0 ||
        !std::is_sorted(cfg.repeat_edges.begin(), cfg.repeat_edges.end()))
        throw PreconditionError("repeat bins must be ascending and start at 0");

    std::unordered_map<std::uint64_t, std::uint64_t> pair_totals;
    for (int y = from; y <= to; ++y) {
        for (const auto& ev : store.citations_in_year(y)) {
            for (AuthorId m : ev.cited_authors) {
                for (AuthorId n : ev.citing_authors) {
                    if (m == n)
                        continue;
                    const auto lo = std::min(m, n);
                    const auto hi = std::max(m, n);
                    ++pair_totals[(static_cast<std::uint64_t>(lo) << 32) | hi];
                }
            }
        }
    }

    RepeatedCitationMatrix out;
    const auto& edges = cfg.repeat_edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i + 1 == edges.size())
            out.repeat_labels.push_back(std::to_string(edges[i]) + "+");
        else if (edges[i + 1] == edges[i] + 1)
            out.repeat_labels.push_back(std::to_string(edges[i]));
        else
            out.repeat_labels.push_back(std::to_string(edges[i]) + "-" + std::to_string(edges[i + 1] - 1));
    }
    for (std::uint32_t d = 1; d <= cfg.max_distance; ++d)
        out.distance_labels.push_back(std::to_string(d));
    out.distance_labels.push_back(">" + std::to_string(cfg.max_distance));
    out.distance_labels.push_back("INF");
    out.pairs.assign(edges.size(), std::vector<std::uint64_t>(out.distance_labels.size(), 0));
    out.citations = out.pairs;

    // Group pairs by their smaller author so each BFS serves many pairs.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(pair_totals.begin(), pair_totals.end());
    std::sort(sorted.begin(), sorted.end());
    DistanceSearch search;
    std::vector<AuthorId> partners;
    std::vector<std::span<const AuthorId>> groups;
    std::vector<Distance> dist;
    for (std::size_t i = 0; i < sorted.size();) {
        const auto a = static_cast<AuthorId>(sorted[i].first >> 32);
        std::size_t j = i;
        partners.clear();
        while (j < sorted.size() && static_cast<AuthorId>(sorted[j].first >> 32) == a) {
            partners.push_back(static_cast<AuthorId>(sorted[j].first & 0xFFFFFFFFu));
            ++j;
        }
        groups.clear();
        for (const auto& b : partners)
            groups.emplace_back(&b, 1);
        dist.assign(partners.size(), Distance{});
        const AuthorId source[] = {a};
        search.resolve_groups(net, source, groups, std::nullopt, dist);
        for (std::size_t k = 0; k < partners.size(); ++k) {
            const auto total = sorted[i + k].second;
            const auto repeats = total - 1;
            const auto row = static_cast<std::size_t>(
                std::upper_bound(edges.begin(), edges.end(), repeats) - edges.begin() - 1);
            std::size_t col;
            if (dist[k].is_infinite())
                col = out.distance_labels.size() - 1;
            else if (dist[k].hops() > cfg.max_distance)
                col = out.distance_labels.size() - 2;
            else
                col = dist[k].hops() == 0 ? 0 : dist[k].hops() - 1;
            ++out.pairs[row][col];
            out.citations[row][col] += total;
        }
        i = j;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range)
{
    // Reject the low tail so every residue is equally likely.
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold)
            return r % range;
    }
}

} // namespace

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, std::uint64_t seed)
{
    if (count > population)
        throw PreconditionError("sample larger than population");
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + bounded(rng, population - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

bool satisfies(const IndexRecord& rec, const CohortSelection& sel)
{
    return rec.q >= sel.q_min && rec.q <= sel.q_max && (!sel.h || rec.h == *sel.h) && (!sel.g || rec.g == *sel.g) &&
           (!sel.c || rec.c == *sel.c) && (!sel.n_w || rec.n_w == *sel.n_w);
}

std::vector<IndexRecord> select_cohort(std::span<const IndexRecord> records, const CohortSelection& sel)
{
    std::vector<IndexRecord> candidates;
    for (const auto& rec : records) {
        if (satisfies(rec, sel))
            candidates.push_back(rec);
    }
    if (candidates.size() < sel.sample_size)
        throw CohortError("cohort needs " + std::to_string(sel.sample_size) + " scholars but only " +
                          std::to_string(candidates.size()) + " satisfy the constraints (short by " +
                          std::to_string(sel.sample_size - candidates.size()) + ")");
    std::sort(candidates.begin(), candidates.end(),
              [](const IndexRecord& a, const IndexRecord& b) { return a.scholar < b.scholar; });
    std::vector<IndexRecord> out;
    for (auto i : sample_indices(candidates.size(), sel.sample_size, sel.seed))
        out.push_back(candidates[i]);
    return out;
}

// ---------------------------------------------------------------------------

double population_stddev(std::span<const double> values)
{
    if (values.empty())
        return 0;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    return std::sqrt(ss / n);
}

bool is_close(double a, double b, double s, double k)
{
    if (s == 0)
        return true;
    return std::fabs(a - b) <= k * s;
}

std::array<std::size_t, 4> ClosenessResult::cell_counts() const
{
    std::array<std::size_t, 4> cells{};
    for (const auto& p : pairs)
        ++cells[(p.close_a ? 0 : 2) + (p.close_b ? 0 : 1)];
    return cells;
}

ClosenessResult classify_closeness(std::span<const IndexRecord> cohort, IndexKind index_a, IndexKind index_b,
                                   double k)
{
    if (cohort.size() < 2)
        throw PreconditionError("closeness needs a cohort of at least two scholars");
    ClosenessResult out;
    out.index_a = index_a;
    out.index_b = index_b;
    out.k = k;
    std::vector<double> va, vb;
    for (const auto& rec : cohort) {
        va.push_back(index_value(rec, index_a));
        vb.push_back(index_value(rec, index_b));
    }
    out.s_a = population_stddev(va);
    out.s_b = population_stddev(vb);
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        for (std::size_t j = i + 1; j < cohort.size(); ++j) {
            out.pairs.push_back({cohort[i].scholar, cohort[j].scholar, is_close(va[i], va[j], out.s_a, k),
                                 is_close(vb[i], vb[j], out.s_b, k)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<RankEntry> rank(std::span<const IndexRecord> records, IndexKind kind)
{
    std::vector<RankEntry> out;
    out.reserve(records.size());
    for (const auto& rec : records)
        out.push_back({rec.scholar, index_value(rec, kind), rec.q, 0});
    std::sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.value != b.value)
            return a.value > b.value;
        if (a.q != b.q)
            return a.q > b.q;
        return a.scholar < b.scholar;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].position = i + 1;
    return out;
}

std::vector<ScatterPoint> x_vs_q_scatter(std::span<const IndexRecord> records, std::uint64_t q_max,
                                         std::size_t sample_size, std::uint64_t seed)
{
    std::vector<const IndexRecord*> pool;
    for (const auto& rec : records) {
        if (rec.q > 0 && rec.q < q_max)
            pool.push_back(&rec);
    }
    std::sort(pool.begin(), pool.end(), [](const IndexRecord* a, const IndexRecord* b) { return a->scholar < b->scholar; });
    std::vector<ScatterPoint> out;
    for (auto i : sample_indices(pool.size(), std::min(sample_size, pool.size()), seed))
        out.push_back({pool[i]->scholar, pool[i]->q, pool[i]->x.value()});
    return out;
}

} // namespace citedist
