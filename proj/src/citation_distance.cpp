#include "citedist/citation_distance.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "citedist/collab_graph.hpp"
#include "citedist/corpus.hpp"

namespace citedist {

void DistanceCounts::add(Distance d, std::uint64_t count)
{
    switch (d.kind()) {
    case Distance::Kind::Finite:
        if (finite.size() <= d.hops())
            finite.resize(d.hops() + 1, 0);
        finite[d.hops()] += count;
        break;
    case Distance::Kind::Infinite:
        infinite += count;
        break;
    case Distance::Kind::ExceedsCap:
        if (over_cap > 0 && cap != d.cap())
            throw PreconditionError("mixing distances from different caps");
        over_cap += count;
        cap = d.cap();
        break;
    }
}

void DistanceCounts::merge(const DistanceCounts& other)
{
    if (finite.size() < other.finite.size())
        finite.resize(other.finite.size(), 0);
    for (std::size_t d = 0; d < other.finite.size(); ++d)
        finite[d] += other.finite[d];
    infinite += other.infinite;
    if (other.over_cap > 0)
        add(Distance::exceeds_cap(other.cap), other.over_cap);
}

std::uint64_t DistanceCounts::total() const
{
    std::uint64_t sum = infinite + over_cap;
    for (auto c : finite)
        sum += c;
    return sum;
}

std::optional<std::uint32_t> DistanceCounts::max_finite() const
{
    for (std::size_t d = finite.size(); d-- > 0;) {
        if (finite[d] > 0)
            return static_cast<std::uint32_t>(d);
    }
    return std::nullopt;
}

Distance citation_distance(const CollabNetwork& net, const CitationEvent& event, std::optional<std::uint32_t> cap)
{
    if (net.window_end() != event.citing_year)
        throw PreconditionError("network for year " + std::to_string(net.window_end()) +
                                " used for a citation from " + std::to_string(event.citing_year));
    return shortest_distance(net, event.cited_authors, event.citing_authors, cap);
}

std::vector<EventDistance> year_event_distances(const CorpusStore& store, const CollabNetwork& net, int year,
                                                const DistanceConfig& cfg)
{
    if (net.window_end() != year)
        throw PreconditionError("network year does not match the citing year");
    const auto citing = store.papers_in_year(year);
    std::vector<std::size_t> offsets(citing.size() + 1, 0);
    for (std::size_t i = 0; i < citing.size(); ++i)
        offsets[i + 1] = offsets[i] + store.references_of(citing[i]).size();

    std::vector<EventDistance> out(offsets.back());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        DistanceSearch search;
        std::vector<std::span<const AuthorId>> groups;
        std::vector<Distance> dist;
        for (std::size_t i = next++; i < citing.size(); i = next++) {
            const PaperIndex p = citing[i];
            const auto refs = store.references_of(p);
            if (refs.empty())
                continue;
            groups.clear();
            for (PaperIndex r : refs)
                groups.push_back(store.authors_of(r));
            dist.assign(refs.size(), Distance{});
            search.resolve_groups(net, store.authors_of(p), groups, cfg.cap, dist);
            for (std::size_t k = 0; k < refs.size(); ++k)
                out[offsets[i] + k] = {refs[k], p, dist[k]};
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(citing.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
    }
    return out;
}

YearLedger credit_events(const CorpusStore& store, int year, std::span<const EventDistance> events,
                         std::optional<std::uint32_t> cap)
{
    YearLedger ledger;
    ledger.year = year;
    ledger.cap = cap;
    for (const auto& e : events) {
        ledger.events.add(e.distance);
        ledger.papers[e.cited].add(e.distance);
        for (AuthorId a : store.authors_of(e.cited))
            ledger.scholars[a].add(e.distance);
    }
    return ledger;
}

int first_full_window_year(const CorpusStore& store, int window_length)
{
    return store.first_year() + window_length - 1;
}

YearLedger batch_year_distances(const CorpusStore& store, int year, const DistanceConfig& cfg)
{
    if (cfg.strict_window && year < first_full_window_year(store, cfg.window_length)) {
        YearLedger skipped;
        skipped.year = year;
        skipped.cap = cfg.cap;
        skipped.skipped = true;
        return skipped;
    }
    const auto net = build_window(store, year, cfg.window_length);
    const auto events = year_event_distances(store, net, year, cfg);
    return credit_events(store, year, events, cfg.cap);
}

// ---------------------------------------------------------------------------

void DistanceLedger::append(YearLedger year)
{
    if (!years_.empty() && year.year != last_year() + 1)
        throw SequenceError("ledger year " + std::to_string(year.year) + " does not follow " +
                            std::to_string(last_year()));
    const int y = year.year;
    years_.emplace(y, std::move(year));
}

const YearLedger* DistanceLedger::year(int y) const
{
    auto it = years_.find(y);
    return it == years_.end() ? nullptr : &it->second;
}

DistanceCounts DistanceLedger::scholar_counts(AuthorId scholar, int through_year) const
{
    DistanceCounts out;
    for (const auto& [y, ledger] : years_) {
        if (y > through_year)
            break;
        if (auto it = ledger.scholars.find(scholar); it != ledger.scholars.end())
            out.merge(it->second);
    }
    return out;
}

DistanceCounts DistanceLedger::paper_counts(PaperIndex paper, int through_year) const
{
    DistanceCounts out;
    for (const auto& [y, ledger] : years_) {
        if (y > through_year)
            break;
        if (auto it = ledger.papers.find(paper); it != ledger.papers.end())
            out.merge(it->second);
    }
    return out;
}

std::uint64_t DistanceLedger::infinite_count(AuthorId scholar, int through_year) const
{
    const auto counts = scholar_counts(scholar, through_year);
    if (counts.over_cap > 0)
        throw PreconditionError("N_w needs exact distances; ledger was built with a cap");
    return counts.infinite;
}

std::optional<std::uint32_t> DistanceLedger::max_finite_distance(AuthorId scholar, int through_year) const
{
    const auto counts = scholar_counts(scholar, through_year);
    if (counts.over_cap > 0)
        throw PreconditionError("D_f needs exact distances; ledger was built with a cap");
    return counts.max_finite();
}

// ---------------------------------------------------------------------------

DistanceHistogram distance_histogram(const DistanceLedger& ledger, std::span<const int> years, std::uint32_t max_bin)
{
    DistanceHistogram out;
    for (int y : years) {
        const auto* year = ledger.year(y);
        if (!year)
            throw PreconditionError("no ledger for year " + std::to_string(y));
        const auto& counts = year->events;
        const auto total = counts.total();
        if (total == 0) {
            out.notices.push_back("year " + std::to_string(y) + " has no citations; omitted");
            continue;
        }
        YearHistogram h;
        h.year = y;
        h.total = total;
        const double denom = static_cast<double>(total);
        std::uint64_t within = 0;
        for (std::size_t d = 0; d < counts.finite.size(); ++d) {
            if (counts.finite[d] == 0)
                continue;
            h.bins.push_back({std::to_string(d), static_cast<double>(counts.finite[d]) / denom});
            if (d <= max_bin)
                within += counts.finite[d];
        }
        if (counts.over_cap > 0)
            h.bins.push_back({">" + std::to_string(counts.cap), static_cast<double>(counts.over_cap) / denom});
        if (counts.infinite > 0)
            h.bins.push_back({"INF", static_cast<double>(counts.infinite) / denom});
        h.share_within = static_cast<double>(within) / denom;
        out.years.push_back(std::move(h));
    }
    return out;
}

void write_histogram_csv(const DistanceHistogram& hist, std::ostream& out)
{
    out << "year,d,proportion\n";
    char buf[64];
    for (const auto& y : hist.years) {
        for (const auto& bin : y.bins) {
            std::snprintf(buf, sizeof buf, "%.6f", bin.proportion);
            out << y.year << ',' << bin.label << ',' << buf << '\n';
        }
    }
}

namespace {

nlohmann::ordered_json counts_json(const DistanceCounts& c, nlohmann::ordered_json j = nlohmann::ordered_json::object())
{
    j["finite"] = c.finite;
    j["inf"] = c.infinite;
    j["over_cap"] = c.over_cap;
    if (c.over_cap > 0)
        j["cap"] = c.cap;
    return j;
}

DistanceCounts counts_from_json(const nlohmann::json& j)
{
    DistanceCounts c;
    c.finite = j.at("finite").get<std::vector<std::uint64_t>>();
    c.infinite = j.at("inf").get<std::uint64_t>();
    c.over_cap = j.at("over_cap").get<std::uint64_t>();
    if (c.over_cap > 0)
        c.cap = j.at("cap").get<std::uint32_t>();
    return c;
}

} // namespace

void write_year_ledger(const YearLedger& ledger, const CorpusStore& store, std::ostream& out)
{
    nlohmann::ordered_json header;
    header["kind"] = "year";
    header["year"] = ledger.year;
    header["cap"] = ledger.cap ? nlohmann::ordered_json(*ledger.cap) : nlohmann::ordered_json(nullptr);
    header["skipped"] = ledger.skipped;
    header["events"] = counts_json(ledger.events);
    out << header.dump() << '\n';
    for (const auto& [a, counts] : ledger.scholars) {
        out << counts_json(counts, {{"kind", "scholar"}, {"id", store.author_name(a)}}).dump() << '\n';
    }
    for (const auto& [p, counts] : ledger.papers) {
        out << counts_json(counts, {{"kind", "paper"}, {"id", store.paper_id(p)}}).dump() << '\n';
    }
}

YearLedger read_year_ledger(std::istream& in, const CorpusStore& store)
{
    YearLedger ledger;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = nlohmann::json::parse(line);
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "year") {
            ledger.year = j.at("year").get<int>();
            if (!j.at("cap").is_null())
                ledger.cap = j.at("cap").get<std::uint32_t>();
            ledger.skipped = j.at("skipped").get<bool>();
            ledger.events = counts_from_json(j.at("events"));
            have_header = true;
        } else if (kind == "scholar") {
            const auto id = store.find_author(j.at("id").get<std::string>());
            if (!id)
                throw IncompleteStateError("ledger names unknown scholar " + j.at("id").dump());
            ledger.scholars[*id] = counts_from_json(j);
        } else if (kind == "paper") {
            const auto id = store.find_paper(j.at("id").get<std::string>());
            if (!id)
                throw IncompleteStateError("ledger names unknown paper " + j.at("id").dump());
            ledger.papers[*id] = counts_from_json(j);
        }
    }
    if (!have_header)
        throw IncompleteStateError("ledger file has no header record");
    return ledger;
}

} // namespace citedist
