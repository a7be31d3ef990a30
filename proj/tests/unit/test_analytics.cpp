#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "citedist/analytics.hpp"
#include "citedist/citation_distance.hpp"
#include "citedist/collab_graph.hpp"
#include "citedist/corpus.hpp"
#include "citedist/indices.hpp"
#include "oracles.hpp"
#include "reference_cohorts.hpp"

using namespace citedist;

namespace {

CorpusStore parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_records(in);
}

IndexRecord record(AuthorId id, std::uint64_t q, double c, std::uint64_t n_w)
{
    IndexRecord r;
    r.scholar = id;
    r.year = 2020;
    r.q = q;
    r.c = c;
    r.n_w = n_w;
    return r;
}

std::vector<IndexRecord> cohort_records(const reference::Cohort& cohort)
{
    std::vector<IndexRecord> out;
    for (const auto& row : cohort.rows) {
        IndexRecord r;
        r.scholar = static_cast<AuthorId>(row.id);
        r.year = 2020;
        r.q = row.q;
        r.h = row.h;
        r.g = row.g;
        r.c = row.c;
        r.n_w = row.n_w;
        r.x = XScore::from_value(row.x, 100);
        out.push_back(r);
    }
    return out;
}

std::string two_dp(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::vector<IndexRecord> random_records(std::uint64_t seed, std::size_t count)
{
    std::mt19937_64 rng(seed);
    std::vector<IndexRecord> out;
    for (std::size_t i = 0; i < count; ++i) {
        IndexRecord r;
        r.scholar = static_cast<AuthorId>(i);
        r.q = rng() % 400;
        r.h = static_cast<std::uint32_t>(rng() % 12);
        r.g = r.h + static_cast<std::uint32_t>(rng() % 6);
        r.n_w = rng() % 30;
        r.c = static_cast<double>(rng() % 30);
        r.x = XScore(rng() % (r.q * 6 + 1), 6);
        out.push_back(r);
    }
    return out;
}

} // namespace

TEST_CASE("c == N_w ratio per Q bin")
{
    std::vector<IndexRecord> recs;
    for (AuthorId i = 0; i < 10; ++i)
        recs.push_back(record(i, 250, 7, 7));         // degenerate
    recs.push_back(record(20, 60, 0, 0));             // degenerate at zero
    recs.push_back(record(21, 60, 3, 0));             // N_w = 0, c > 0
    recs.push_back(record(22, 60, 2, 5));
    recs.push_back(record(23, 10, 4, 4));             // below every bin
    recs.push_back(record(24, 1000, 4, 4));           // at the open upper edge

    const auto edges = default_q_edges();
    REQUIRE(edges == std::vector<std::uint64_t>{50, 200, 400, 600, 800, 1000});
    const auto bins = c_equals_nw_stats(recs, edges);
    REQUIRE(bins.size() == 5);
    CHECK(bins[0].lo == 50);
    CHECK(bins[0].hi == 200);
    CHECK(bins[0].scholars == 3);
    CHECK(bins[0].degenerate == 1);
    CHECK(bins[0].ratio == doctest::Approx(1.0 / 3));
    CHECK(bins[1].scholars == 10);
    CHECK(bins[1].ratio == 1.0);
    for (std::size_t i = 2; i < bins.size(); ++i) {
        CHECK(bins[i].scholars == 0);
        CHECK(bins[i].ratio == 0.0);
    }
    const std::uint64_t bad[] = {200, 50};
    CHECK_THROWS_AS(c_equals_nw_stats(recs, bad), PreconditionError);
}

TEST_CASE("heatmap: mutual citation repeats once, single citation repeats zero")
{
    const auto store = parse(R"({"id":"A","year":2000,"authors":["x"]}
{"id":"B","year":2000,"authors":["y"]}
{"id":"C","year":2001,"authors":["x","z"],"references":["B"]}
{"id":"D","year":2001,"authors":["y"],"references":["A"]}
{"id":"E","year":2001,"authors":["w"],"references":["A"]}
)");
    const auto net = build_window(store, 2001, 5);
    const auto m = repeated_citation_matrix(store, 2001, 2001, net);
    REQUIRE(m.repeat_labels.front() == "0");
    REQUIRE(m.distance_labels.back() == "INF");
    CHECK(m.distance_labels[m.distance_labels.size() - 2] == ">12");

    // Pairs: {x,y} twice (mutual), {z,y} once, {x,w} once; all disconnected.
    const auto inf = m.distance_labels.size() - 1;
    CHECK(m.pairs[1][inf] == 1);
    CHECK(m.citations[1][inf] == 2);
    CHECK(m.pairs[0][inf] == 2);
    CHECK(m.citations[0][inf] == 2);
    CHECK(m.total_pairs() == 3);
    CHECK(m.total_citations() == 4);

    const auto self = parse(R"({"id":"A","year":2000,"authors":["x","z"]}
{"id":"B","year":2001,"authors":["z","q"],"references":["A"]}
)");
    const auto net2 = build_window(self, 2001, 5);
    const auto m2 = repeated_citation_matrix(self, 2001, 2001, net2);
    // Pairs (x,z) d=1, (x,q) d=2, (z,q) d=1; the shared author z is skipped.
    CHECK(m2.pairs[0][0] == 2);
    CHECK(m2.pairs[0][1] == 1);
    CHECK(m2.total_pairs() == 3);
}

TEST_CASE("heatmap equals a brute-force recount on random corpora")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        oracle::CorpusSpec spec;
        spec.papers = 300;
        spec.authors = 120;
        spec.years = 6;
        spec.refs = 4;
        spec.communities = 5;
        spec.cross_community = 0.05;
        const auto papers = oracle::synthetic_papers(spec, seed);
        const auto store = parse(oracle::to_jsonl(papers));
        const int to = store.last_year();
        const int from = to - 2;
        const oracle::WindowOracle win(papers, to, 5);

        std::map<std::string, const oracle::Paper*> by_id;
        for (const auto& p : papers)
            by_id[p.id] = &p;
        std::map<std::pair<std::string, std::string>, std::uint64_t> totals;
        for (const auto& p : papers) {
            if (p.year < from || p.year > to)
                continue;
            const std::set<std::string> refs(p.references.begin(), p.references.end());
            for (const auto& r : refs) {
                auto it = by_id.find(r);
                if (it == by_id.end())
                    continue;
                for (const auto& m : it->second->authors)
                    for (const auto& n : p.authors)
                        if (m != n)
                            ++totals[{std::min(m, n), std::max(m, n)}];
            }
        }

        HeatmapConfig cfg;
        cfg.max_distance = 3;
        const auto net = build_window(store, to, 5);
        const auto m = repeated_citation_matrix(store, from, to, net, cfg);
        std::vector<std::vector<std::uint64_t>> pairs(cfg.repeat_edges.size(), std::vector<std::uint64_t>(5, 0));
        auto cites = pairs;
        std::uint64_t all = 0;
        for (const auto& [key, total] : totals) {
            std::size_t row = 0;
            for (std::size_t i = 0; i < cfg.repeat_edges.size(); ++i)
                if (total - 1 >= cfg.repeat_edges[i])
                    row = i;
            const auto d = win.citation({key.first}, {key.second});
            const std::size_t col = !d ? 4 : (*d > 3 ? 3 : static_cast<std::size_t>(*d - 1));
            ++pairs[row][col];
            cites[row][col] += total;
            all += total;
        }
        CHECK(m.pairs == pairs);
        CHECK(m.citations == cites);
        CHECK(m.total_pairs() == totals.size());
        CHECK(m.total_citations() == all);
    }
}

TEST_CASE("cohort selection honours constraints and is reproducible")
{
    const auto recs = random_records(3, 2000);
    CohortSelection sel;
    sel.q_min = 100;
    sel.q_max = 300;
    sel.h = 5;
    sel.sample_size = 15;
    sel.seed = 42;
    const auto a = select_cohort(recs, sel);
    REQUIRE(a.size() == 15);
    std::set<AuthorId> seen;
    for (const auto& r : a) {
        CHECK(satisfies(r, sel));
        CHECK(r.q >= 100);
        CHECK(r.q <= 300);
        CHECK(r.h == 5);
        seen.insert(r.scholar);
    }
    CHECK(seen.size() == a.size());
    CHECK(select_cohort(recs, sel) == a);
    sel.seed = 43;
    CHECK(select_cohort(recs, sel) != a);

    sel.sample_size = 0;
    CHECK(select_cohort(recs, sel).empty());

    sel.sample_size = 15;
    sel.h = 999;
    CHECK_THROWS_AS(select_cohort(recs, sel), CohortError);

    CohortSelection every;
    every.q_max = 1000;
    every.sample_size = recs.size();
    CHECK(select_cohort(recs, every).size() == recs.size());
}

TEST_CASE("sample indices are distinct, in range and seed-determined")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = sample_indices(50, 20, seed);
        REQUIRE(s.size() == 20);
        std::set<std::size_t> uniq(s.begin(), s.end());
        CHECK(uniq.size() == 20);
        CHECK(*uniq.rbegin() < 50);
        CHECK(sample_indices(50, 20, seed) == s);
    }
    CHECK(sample_indices(5, 5, 1).size() == 5);
}

TEST_CASE("closeness reproduces the reference cohorts")
{
    for (const auto* cohort : reference::all_cohorts()) {
        CAPTURE(cohort->fixed_index);
        const auto recs = cohort_records(*cohort);
        const auto kind = *parse_index_kind(cohort->fixed_index);
        const auto res = classify_closeness(recs, kind, IndexKind::X);
        CHECK(two_dp(res.s_a) == two_dp(cohort->s_fixed));
        CHECK(two_dp(res.s_b) == two_dp(cohort->s_x));
        CHECK(res.pairs.size() == 190);
        for (const auto& want : cohort->pairs) {
            CAPTURE(want.a);
            CAPTURE(want.b);
            const auto it = std::find_if(res.pairs.begin(), res.pairs.end(), [&](const PairCloseness& p) {
                return (p.first == static_cast<AuthorId>(want.a) && p.second == static_cast<AuthorId>(want.b)) ||
                       (p.first == static_cast<AuthorId>(want.b) && p.second == static_cast<AuthorId>(want.a));
            });
            REQUIRE(it != res.pairs.end());
            CHECK(it->close_a == want.close_fixed);
            CHECK(it->close_b == want.close_x);
        }
        const auto cells = res.cell_counts();
        CHECK(cells[0] + cells[1] + cells[2] + cells[3] == 190);
    }
}

TEST_CASE("closeness relation: reflexive, symmetric, identical values are close")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 100);
    for (int t = 0; t < 200; ++t) {
        const double a = u(rng), b = u(rng), s = u(rng) / 4;
        CHECK(is_close(a, a, s));
        CHECK(is_close(a, b, s) == is_close(b, a, s));
        CHECK(is_close(a, b, s) == (std::fabs(a - b) <= 0.1 * s));
        CHECK(is_close(a, b, 0.0));
    }
    const double vals[] = {3, 3, 3};
    CHECK(population_stddev(vals) == 0.0);
    const double two[] = {1, 3};
    CHECK(population_stddev(two) == doctest::Approx(1.0));

    std::vector<IndexRecord> same(4, record(0, 10, 5, 5));
    for (AuthorId i = 0; i < 4; ++i)
        same[i].scholar = i;
    const auto res = classify_closeness(same, IndexKind::C, IndexKind::Q);
    CHECK(res.cell_counts()[0] == 6);
    CHECK_THROWS_AS(classify_closeness(std::span<const IndexRecord>(same.data(), 1), IndexKind::C, IndexKind::X),
                    PreconditionError);
}

TEST_CASE("ranking reproduces reference ranks")
{
    for (const auto* cohort : reference::all_cohorts()) {
        CAPTURE(cohort->fixed_index);
        const auto recs = cohort_records(*cohort);
        const auto by_fixed = rank(recs, *parse_index_kind(cohort->fixed_index));
        const auto by_x = rank(recs, IndexKind::X);
        std::map<AuthorId, std::size_t> fixed_pos, x_pos;
        for (const auto& e : by_fixed)
            fixed_pos[e.scholar] = e.position;
        for (const auto& e : by_x)
            x_pos[e.scholar] = e.position;
        for (const auto& row : cohort->rows) {
            CAPTURE(row.id);
            CHECK(fixed_pos.at(static_cast<AuthorId>(row.id)) == static_cast<std::size_t>(row.rank_fixed));
            CHECK(x_pos.at(static_cast<AuthorId>(row.id)) == static_cast<std::size_t>(row.rank_x));
        }
    }
}

TEST_CASE("ranking: gapless, tie order, invariant under positive scaling")
{
    auto recs = random_records(11, 300);
    const auto base = rank(recs, IndexKind::X);
    REQUIRE(base.size() == recs.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].position == i + 1);
        if (i > 0) {
            const auto& p = base[i - 1];
            const auto& c = base[i];
            const bool ordered = p.value > c.value || (p.value == c.value && p.q > c.q) ||
                                 (p.value == c.value && p.q == c.q && p.scholar < c.scholar);
            CHECK(ordered);
        }
    }
    auto scaled = recs;
    for (auto& r : scaled)
        r.x = XScore(r.x.units() * 3, r.x.denom());
    const auto again = rank(scaled, IndexKind::X);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(again[i].scholar == base[i].scholar);

    std::vector<IndexRecord> flat;
    for (AuthorId i = 0; i < 5; ++i)
        flat.push_back(record(4 - i, 100, 1, 1));
    const auto f = rank(flat, IndexKind::C);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(f[i].scholar == static_cast<AuthorId>(i));
}

TEST_CASE("scatter: sampled points satisfy 0 <= x <= Q")
{
    oracle::CorpusSpec spec;
    spec.papers = 800;
    spec.authors = 300;
    const auto store = parse(oracle::synthetic_corpus(spec, 21));
    DistanceLedger ledger;
    for (int y = store.first_year(); y <= store.last_year(); ++y)
        ledger.append(batch_year_distances(store, y, {}));
    const auto table = index_table(store, ledger, store.last_year(), {});
    const auto pts = x_vs_q_scatter(table, 1000, 100, 5);
    CHECK(pts.size() <= 100);
    CHECK_FALSE(pts.empty());
    for (const auto& p : pts) {
        CHECK(p.q > 0);
        CHECK(p.q < 1000);
        CHECK(p.x >= 0);
        CHECK(p.x <= static_cast<double>(p.q));
    }
    CHECK(x_vs_q_scatter(table, 1000, 100, 5).size() == pts.size());
}

TEST_CASE("a scholar cited only by their own papers has x = 0")
{
    std::string text;
    for (int i = 0; i < 6; ++i) {
        text += R"({"id":"P)" + std::to_string(i) + R"(","year":)" + std::to_string(2000 + i) +
                R"(,"authors":["solo"],"references":[)";
        for (int j = 0; j < i; ++j)
            text += (j ? "," : "") + std::string("\"P") + std::to_string(j) + "\"";
        text += "]}\n";
    }
    const auto store = parse(text);
    DistanceLedger ledger;
    for (int y = store.first_year(); y <= store.last_year(); ++y)
        ledger.append(batch_year_distances(store, y, {}));
    const auto table = index_table(store, ledger, store.last_year(), {});
    REQUIRE(table.size() == 1);
    CHECK(table[0].q == 15);
    CHECK(table[0].x.units() == 0);
    const auto pts = x_vs_q_scatter(table, 1000, 10, 1);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == 0.0);
}
