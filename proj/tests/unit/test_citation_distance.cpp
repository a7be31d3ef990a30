#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "citedist/citation_distance.hpp"
#include "citedist/collab_graph.hpp"
#include "citedist/corpus.hpp"
#include "oracles.hpp"

using namespace citedist;

namespace {

CorpusStore parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_records(in);
}

Distance to_distance(const oracle::Dist& d)
{
    return d ? Distance::finite(static_cast<std::uint32_t>(*d)) : Distance::infinite();
}

std::vector<AuthorId> ids(const CorpusStore& store, std::initializer_list<const char*> names)
{
    std::vector<AuthorId> out;
    for (auto n : names)
        out.push_back(*store.find_author(n));
    return out;
}

} // namespace

TEST_CASE("citation distance: minimum over author pairs, self-citation, disjoint components")
{
    // Events built directly from author sets of the fixture's networks.
    const auto store = load_corpus(std::string(CITEDIST_FIXTURES) + "/seven_papers.jsonl");
    const auto net18 = build_window(store, 2018, 5);
    const auto net16 = build_window(store, 2016, 5);

    const auto cited5 = ids(store, {"5"});
    const auto citing92 = ids(store, {"9", "2"});
    CitationEvent ev{0, 0, 2018, cited5, citing92};
    CHECK(citation_distance(net18, ev) == Distance::finite(3));

    const auto cited23 = ids(store, {"2", "3"});
    const auto citing3 = ids(store, {"3"});
    CitationEvent self{0, 0, 2018, cited23, citing3};
    CHECK(citation_distance(net18, self) == Distance::finite(0));

    const auto cited1 = ids(store, {"1"});
    const auto citing7 = ids(store, {"7"});
    CitationEvent far{0, 0, 2016, cited1, citing7};
    CHECK(citation_distance(net16, far) == Distance::infinite());

    CitationEvent wrong_year{0, 0, 2017, cited1, citing7};
    CHECK_THROWS_AS(citation_distance(net16, wrong_year), PreconditionError);
}

TEST_CASE("year without citations gives an empty increment")
{
    const auto store = load_corpus(std::string(CITEDIST_FIXTURES) + "/seven_papers.jsonl");
    const auto ledger = batch_year_distances(store, 2018, {});
    CHECK(ledger.events.empty());
    CHECK(ledger.scholars.empty());
    CHECK(ledger.papers.empty());
}

TEST_CASE("self-citing pair credits distance 0 to every coauthor of the cited paper")
{
    const auto store = parse(R"({"id":"A","year":2000,"authors":["x","y","z"]}
{"id":"B","year":2001,"authors":["y","w"],"references":["A"]}
)");
    const auto ledger = batch_year_distances(store, 2001, {});
    CHECK(ledger.events.total() == 1);
    CHECK(ledger.events.at(0) == 1);
    REQUIRE(ledger.scholars.size() == 3);
    for (const auto& [a, counts] : ledger.scholars) {
        CHECK(counts.total() == 1);
        CHECK(counts.at(0) == 1);
    }
    CHECK(ledger.papers.at(*store.find_paper("A")).at(0) == 1);
}

TEST_CASE("batch distances equal the event-by-event oracle on random corpora")
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        oracle::CorpusSpec spec;
        spec.papers = 250;
        spec.authors = 150;
        spec.years = 8;
        spec.communities = 6;
        spec.cross_community = 0.05 * static_cast<double>(seed % 4);
        const auto papers = oracle::synthetic_papers(spec, seed);
        const auto store = parse(oracle::to_jsonl(papers));
        std::map<std::string, const oracle::Paper*> by_id;
        for (const auto& p : papers)
            by_id[p.id] = &p;

        for (int y = store.first_year(); y <= store.last_year(); ++y) {
            const oracle::WindowOracle win(papers, y, 5);
            const auto net = build_window(store, y, 5);
            DistanceConfig cfg;
            cfg.jobs = 1 + static_cast<unsigned>(seed % 3);
            const auto events = store.citations_in_year(y);
            const auto exact = year_event_distances(store, net, y, cfg);
            cfg.cap = 2;
            const auto capped = year_event_distances(store, net, y, cfg);
            REQUIRE(exact.size() == events.size());
            REQUIRE(capped.size() == events.size());

            for (std::size_t i = 0; i < events.size(); ++i) {
                const auto& cited = *by_id.at(store.paper_id(events[i].cited));
                const auto& citing = *by_id.at(store.paper_id(events[i].citing));
                const auto want = to_distance(win.citation(cited.authors, citing.authors));
                CHECK(exact[i].distance == want);
                CHECK(exact[i].distance == citation_distance(net, events[i]));
                const bool shared = std::any_of(cited.authors.begin(), cited.authors.end(), [&](const std::string& a) {
                    return std::find(citing.authors.begin(), citing.authors.end(), a) != citing.authors.end();
                });
                CHECK(shared == (want == Distance::finite(0)));
                if (want.is_finite() && want.hops() <= 2)
                    CHECK(capped[i].distance == want);
                else
                    CHECK((capped[i].distance.is_exceeds_cap() || capped[i].distance.is_infinite()));
                if (capped[i].distance.is_infinite())
                    CHECK(want.is_infinite());
            }

            // Ledger: full counting, coauthor consistency, conservation.
            const auto ledger = batch_year_distances(store, y, {});
            CHECK(ledger.events.total() == events.size());
            std::uint64_t expected_credits = 0;
            std::map<AuthorId, DistanceCounts> want_scholars;
            for (std::size_t i = 0; i < events.size(); ++i) {
                expected_credits += events[i].cited_authors.size();
                for (AuthorId a : events[i].cited_authors)
                    want_scholars[a].add(exact[i].distance);
            }
            std::uint64_t credits = 0;
            for (const auto& [a, counts] : ledger.scholars)
                credits += counts.total();
            CHECK(credits == expected_credits);
            REQUIRE(want_scholars.size() == ledger.scholars.size());
            for (const auto& [a, counts] : want_scholars) {
                const auto& got = ledger.scholars.at(a);
                CHECK(got.total() == counts.total());
                CHECK(got.infinite == counts.infinite);
                for (std::uint32_t d = 0; d < 64; ++d)
                    CHECK(got.at(d) == counts.at(d));
            }
        }
    }
}

TEST_CASE("strict windowing skips years before the first full window")
{
    oracle::CorpusSpec spec;
    spec.papers = 200;
    const auto store = parse(oracle::synthetic_corpus(spec, 5));
    DistanceConfig cfg;
    cfg.strict_window = true;
    const int full = first_full_window_year(store, 5);
    CHECK(full == store.first_year() + 4);
    const auto early = batch_year_distances(store, full - 1, cfg);
    CHECK(early.skipped);
    CHECK(early.events.empty());
    const auto later = batch_year_distances(store, full, cfg);
    CHECK_FALSE(later.skipped);
    CHECK(later.events.total() == store.citations_in_year(full).size());
}

TEST_CASE("distance ledger sequencing and derived fields")
{
    DistanceLedger ledger;
    YearLedger y1;
    y1.year = 2001;
    y1.scholars[0].add(Distance::finite(2));
    y1.scholars[0].add(Distance::infinite());
    YearLedger y2;
    y2.year = 2002;
    y2.scholars[0].add(Distance::finite(5));
    y2.scholars[0].add(Distance::infinite());
    ledger.append(y1);
    YearLedger gap;
    gap.year = 2004;
    CHECK_THROWS_AS(ledger.append(gap), SequenceError);
    ledger.append(y2);
    CHECK(ledger.scholar_counts(0, 2002).total() == 4);
    CHECK(ledger.infinite_count(0, 2002) == 2);
    CHECK(ledger.infinite_count(0, 2001) == 1);
    CHECK(*ledger.max_finite_distance(0, 2002) == 5);
    CHECK(*ledger.max_finite_distance(0, 2001) == 2);
    CHECK_FALSE(ledger.max_finite_distance(1, 2002).has_value());
}

TEST_CASE("histogram: direct normalization and notices")
{
    YearLedger y;
    y.year = 2010;
    y.events.add(Distance::finite(0), 2);
    y.events.add(Distance::finite(3));
    y.events.add(Distance::infinite());
    YearLedger empty;
    empty.year = 2011;
    DistanceLedger ledger;
    ledger.append(y);
    ledger.append(empty);

    const int years[] = {2010, 2011};
    const auto hist = distance_histogram(ledger, years, 12);
    REQUIRE(hist.years.size() == 1);
    REQUIRE(hist.years[0].bins.size() == 3);
    CHECK(hist.years[0].bins[0].label == "0");
    CHECK(hist.years[0].bins[0].proportion == doctest::Approx(0.5));
    CHECK(hist.years[0].bins[1].label == "3");
    CHECK(hist.years[0].bins[1].proportion == doctest::Approx(0.25));
    CHECK(hist.years[0].bins[2].label == "INF");
    CHECK(hist.years[0].bins[2].proportion == doctest::Approx(0.25));
    CHECK(hist.years[0].share_within == doctest::Approx(0.75));
    CHECK(hist.notices.size() == 1);

    std::ostringstream csv;
    write_histogram_csv(hist, csv);
    CHECK(csv.str() == "year,d,proportion\n2010,0,0.500000\n2010,3,0.250000\n2010,INF,0.250000\n");

    const int missing[] = {2012};
    CHECK_THROWS_AS(distance_histogram(ledger, missing, 12), PreconditionError);
}

TEST_CASE("histogram of uniform distances 0..25 is flat and sums to one")
{
    YearLedger y;
    y.year = 2000;
    for (std::uint32_t d = 0; d <= 25; ++d)
        y.events.add(Distance::finite(d), 4);
    DistanceLedger ledger;
    ledger.append(y);
    const int years[] = {2000};
    const auto hist = distance_histogram(ledger, years, 12);
    REQUIRE(hist.years[0].bins.size() == 26);
    double sum = 0;
    for (const auto& bin : hist.years[0].bins) {
        CHECK(bin.proportion == doctest::Approx(1.0 / 26));
        sum += bin.proportion;
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(hist.years[0].share_within == doctest::Approx(13.0 / 26));
}

TEST_CASE("year ledger round-trips through its file format")
{
    oracle::CorpusSpec spec;
    spec.papers = 300;
    const auto store = parse(oracle::synthetic_corpus(spec, 9));
    for (std::optional<std::uint32_t> cap : {std::optional<std::uint32_t>{}, std::optional<std::uint32_t>{3}}) {
        DistanceConfig cfg;
        cfg.cap = cap;
        const auto ledger = batch_year_distances(store, store.last_year(), cfg);
        std::stringstream buf;
        write_year_ledger(ledger, store, buf);
        const auto back = read_year_ledger(buf, store);
        CHECK(back == ledger);
    }
}
