#include "citedist/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "citedist/analytics.hpp"
#include "citedist/collab_graph.hpp"
#include "citedist/util.hpp"
#include "citedist/workspace.hpp"

namespace citedist {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kReportNames = {
    "network-stats", "distance-histogram", "index-table", "rank",
    "c-eq-nw",       "heatmap",            "scatter",     "closeness",
};

struct Options {
    std::string workspace;
    std::string config;
    std::optional<unsigned> jobs;

    // ingest
    std::string input;
    std::string format = "canonical";

    // run
    std::optional<int> to;
    bool force = false;

    // report
    std::string report;
    std::vector<int> years;
    std::optional<int> from;
    std::optional<int> net_year;
    std::string out;
    std::uint64_t seed = 0;
    std::string index = "x";
    std::string against = "c";
    std::uint64_t q_min = 0;
    std::optional<std::uint64_t> q_max;
    std::optional<std::uint32_t> h, g;
    std::optional<double> c;
    std::optional<std::uint64_t> nw;
    std::size_t sample = 0;
    std::optional<double> k;
    std::uint32_t max_bin = 12;
    std::vector<std::uint64_t> bins;
    bool diameter = false;
};

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

RunConfig resolve_config(const Workspace& ws, const Options& opt)
{
    RunConfig cfg = opt.config.empty() ? ws.default_config() : load_config(opt.config);
    if (opt.jobs)
        cfg.jobs = std::max(1u, *opt.jobs);
    return cfg;
}

/// A loaded workspace plus the pipeline for its effective config.
struct Session {
    Workspace ws;
    RunConfig cfg;
    CorpusStore store;
    Pipeline pipeline;

    Session(const Options& opt)
        : ws(opt.workspace), cfg(resolve_config(ws, opt)), store(ws.load_corpus(cfg.corpus)),
          pipeline(ws, store, cfg)
    {
    }

    int completed_year() const
    {
        auto last = pipeline.last_completed_year();
        if (!last)
            throw IncompleteStateError("no completed run for this config; run 'citedist run' first");
        return *last;
    }

    int require_year(std::optional<int> year) const
    {
        const int last = completed_year();
        const int y = year.value_or(last);
        if (y < pipeline.first_year())
            throw PreconditionError("year " + std::to_string(y) + " precedes the first run year " +
                                    std::to_string(pipeline.first_year()));
        if (y > last)
            throw IncompleteStateError("year " + std::to_string(y) + " not computed yet (last completed: " +
                                       std::to_string(last) + ")");
        return y;
    }

    std::vector<IndexRecord> records(int year) const
    {
        const auto ledger = pipeline.load_ledgers(year);
        auto recs = index_table(store, ledger, year, weight_config(cfg));
        const auto state = pipeline.load_state(year);
        for (const auto& rec : recs) {
            if (rec.x.units() != state.units()[rec.scholar])
                throw IncompleteStateError("x-index state for " + std::to_string(year) +
                                           " disagrees with the ledgers; rerun with --force");
        }
        return recs;
    }
};

/// Writes a report CSV plus its manifest, or the CSV to stdout for `--out -`.
void emit(const Session& s, const Options& opt, const std::string& tag, const std::string& csv,
          ordered_json params, std::ostream& out, const std::string& suffix = "")
{
    if (opt.out == "-") {
        out << csv;
        return;
    }
    fs::path path;
    if (opt.out.empty())
        path = s.ws.reports_dir() / (opt.report + "-" + tag + suffix + ".csv");
    else if (suffix.empty())
        path = opt.out;
    else
        path = fs::path(opt.out).replace_extension().string() + suffix + ".csv";
    write_file_atomic(path, csv);

    ordered_json m;
    m["report"] = opt.report;
    m["params"] = std::move(params);
    m["run_hash"] = s.pipeline.run_hash();
    m["corpus_hash"] = s.store.content_hash();
    m["config"] = run_config_text(s.cfg);
    m["csv_sha256"] = sha256_hex(csv);
    auto manifest = path;
    manifest.replace_extension(".manifest.json");
    write_file_atomic(manifest, m.dump(2) + "\n");
    out << "wrote " << path.string() << '\n';
}

std::string year_tag(std::span<const int> years)
{
    std::string tag;
    for (int y : years)
        tag += (tag.empty() ? "" : "_") + std::to_string(y);
    return tag;
}

// --- commands ----------------------------------------------------------------

int cmd_ingest(const Options& opt, std::ostream& out, std::ostream& err)
{
    Workspace ws(opt.workspace);
    const InputFormat format = opt.format == "dblp-v12" ? InputFormat::DblpV12 : InputFormat::Canonical;
    RunConfig cfg = opt.config.empty() ? ws.default_config() : load_config(opt.config);
    auto store = ws.ingest(opt.input, format, cfg.corpus);
    if (!opt.config.empty())
        write_file_atomic(ws.config_path(), read_file(opt.config));
    const auto& sum = store.summary();
    for (const auto& p : sum.problems)
        err << opt.input << ":" << p.line << ": " << p.reason << '\n';
    out << sum.papers << " papers, " << sum.authors << " authors, " << sum.citations << " citations ("
        << sum.dangling_references << " dangling references, " << sum.duplicate_papers << " duplicates, "
        << sum.skipped_lines << " skipped lines, " << sum.out_of_range << " out of range)\n";
    out << "years " << store.first_year() << "-" << store.last_year() << ", corpus "
        << store.content_hash().substr(0, 16) << '\n';
    return kExitOk;
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err)
{
    Session s(opt);
    const int to = opt.to.value_or(s.store.last_year());
    if (to < s.pipeline.first_year())
        throw PreconditionError("--to " + std::to_string(to) + " precedes the first year " +
                                std::to_string(s.pipeline.first_year()));
    const auto summary = s.pipeline.run(to, opt.force, err);
    out << "run " << s.pipeline.run_hash() << ": years " << summary.first_year << "-" << summary.last_year
        << ", computed " << summary.computed.size() << ", reused " << summary.reused.size() << '\n';
    return kExitOk;
}

int report_network_stats(const Options& opt, std::ostream& out)
{
    Session s(opt);
    std::vector<int> years = opt.years;
    if (years.empty())
        years.push_back(s.store.last_year());
    std::string csv = network_stats_csv_header() + '\n';
    for (int y : years)
        csv += network_stats_csv_row(network_report(build_window(s.store, y, s.cfg.window_length), opt.diameter)) +
               '\n';
    emit(s, opt, year_tag(years), csv, {{"years", years}, {"diameter", opt.diameter}}, out);
    return kExitOk;
}

int report_histogram(const Options& opt, std::ostream& out, std::ostream& err)
{
    Session s(opt);
    std::vector<int> years = opt.years;
    const int last = s.completed_year();
    if (years.empty())
        years.push_back(last);
    for (int y : years)
        s.require_year(y);
    const auto ledger = s.pipeline.load_ledgers(*std::max_element(years.begin(), years.end()));
    const auto hist = distance_histogram(ledger, years, opt.max_bin);
    for (const auto& notice : hist.notices)
        err << "note: " << notice << '\n';
    std::ostringstream csv;
    write_histogram_csv(hist, csv);
    emit(s, opt, year_tag(years), csv.str(), {{"years", years}, {"max_bin", opt.max_bin}}, out);
    for (const auto& yh : hist.years)
        out << yh.year << ": " << yh.total << " citations, " << fixed(100 * yh.share_within, 2)
            << "% within distance " << opt.max_bin << '\n';
    return kExitOk;
}

int report_index_table(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int year = s.require_year(opt.years.empty() ? std::nullopt : std::optional<int>(opt.years.front()));
    std::string csv = index_table_csv_header() + '\n';
    for (const auto& rec : s.records(year))
        csv += index_table_csv_row(rec, s.store) + '\n';
    emit(s, opt, std::to_string(year), csv, {{"year", year}}, out);
    return kExitOk;
}

IndexKind parse_kind(const std::string& name)
{
    auto kind = parse_index_kind(name);
    if (!kind)
        throw PreconditionError("unknown index '" + name + "' (expected Q, h, g, c, N_w or x)");
    return *kind;
}

int report_rank(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int year = s.require_year(opt.years.empty() ? std::nullopt : std::optional<int>(opt.years.front()));
    const auto kind = parse_kind(opt.index);
    const auto recs = s.records(year);
    std::string csv = "rank,scholar," + std::string(index_name(kind)) + ",Q\n";
    for (const auto& e : rank(recs, kind))
        csv += std::to_string(e.position) + ',' + csv_field(s.store.author_name(e.scholar)) + ',' +
               (kind == IndexKind::X ? XScore::from_value(e.value, x_denominator(s.cfg.n)).to_string_2dp()
                                     : format_number(e.value)) +
               ',' + std::to_string(e.q) + '\n';
    emit(s, opt, std::to_string(year), csv, {{"year", year}, {"index", index_name(kind)}}, out);
    return kExitOk;
}

int report_c_eq_nw(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int year = s.require_year(opt.years.empty() ? std::nullopt : std::optional<int>(opt.years.front()));
    const auto edges = opt.bins.empty() ? default_q_edges() : opt.bins;
    const auto stats = c_equals_nw_stats(s.records(year), edges);
    std::string csv = "q_lo,q_hi,scholars,c_eq_nw,ratio\n";
    for (const auto& b : stats)
        csv += std::to_string(b.lo) + ',' + std::to_string(b.hi) + ',' + std::to_string(b.scholars) + ',' +
               std::to_string(b.degenerate) + ',' + fixed(b.ratio, 4) + '\n';
    emit(s, opt, std::to_string(year), csv, {{"year", year}, {"edges", edges}}, out);
    return kExitOk;
}

int report_heatmap(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int to = opt.years.empty() ? s.store.last_year() : opt.years.front();
    const int from = opt.from.value_or(to - s.cfg.window_length + 1);
    if (from > to)
        throw PreconditionError("--from must not exceed the end year");
    const int net_year = opt.net_year.value_or(to);
    HeatmapConfig hcfg;
    hcfg.max_distance = opt.max_bin;
    if (!opt.bins.empty())
        hcfg.repeat_edges = opt.bins;
    const auto net = build_window(s.store, net_year, s.cfg.window_length);
    const auto m = repeated_citation_matrix(s.store, from, to, net, hcfg);
    std::string csv = "repeats,distance,pairs,citations\n";
    for (std::size_t r = 0; r < m.repeat_labels.size(); ++r)
        for (std::size_t d = 0; d < m.distance_labels.size(); ++d)
            csv += m.repeat_labels[r] + ',' + m.distance_labels[d] + ',' + std::to_string(m.pairs[r][d]) + ',' +
                   std::to_string(m.citations[r][d]) + '\n';
    const auto tag = std::to_string(from) + "-" + std::to_string(to);
    emit(s, opt, tag, csv,
         {{"from", from}, {"to", to}, {"network_year", net_year}, {"repeat_edges", hcfg.repeat_edges},
          {"max_distance", hcfg.max_distance}},
         out);
    out << m.total_pairs() << " scholar pairs, " << m.total_citations() << " citations\n";
    return kExitOk;
}

int report_scatter(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int year = s.require_year(opt.years.empty() ? std::nullopt : std::optional<int>(opt.years.front()));
    const auto q_max = opt.q_max.value_or(1000);
    const auto sample = opt.sample ? opt.sample : 500;
    std::string csv = "scholar,Q,x\n";
    for (const auto& p : x_vs_q_scatter(s.records(year), q_max, sample, opt.seed))
        csv += csv_field(s.store.author_name(p.scholar)) + ',' + std::to_string(p.q) + ',' +
               XScore::from_value(p.x, x_denominator(s.cfg.n)).to_string_2dp() + '\n';
    emit(s, opt, std::to_string(year), csv, {{"year", year}, {"q_max", q_max}, {"sample", sample}, {"seed", opt.seed}},
         out);
    return kExitOk;
}

int report_closeness(const Options& opt, std::ostream& out)
{
    Session s(opt);
    const int year = s.require_year(opt.years.empty() ? std::nullopt : std::optional<int>(opt.years.front()));
    const auto kind_a = parse_kind(opt.against);
    const auto kind_b = parse_kind(opt.index);
    CohortSelection sel;
    sel.q_min = opt.q_min;
    sel.q_max = opt.q_max.value_or(std::numeric_limits<std::uint64_t>::max());
    sel.h = opt.h;
    sel.g = opt.g;
    sel.c = opt.c;
    sel.n_w = opt.nw;
    sel.sample_size = opt.sample ? opt.sample : 20;
    sel.seed = opt.seed;
    const double k = opt.k.value_or(s.cfg.closeness_k);

    const auto cohort = select_cohort(s.records(year), sel);
    const auto result = classify_closeness(cohort, kind_a, kind_b, k);
    const auto rank_a = rank(cohort, kind_a);
    const auto rank_b = rank(cohort, kind_b);
    auto position = [](const std::vector<RankEntry>& r, AuthorId a) {
        return std::find_if(r.begin(), r.end(), [a](const RankEntry& e) { return e.scholar == a; })->position;
    };

    const std::string na(index_name(kind_a)), nb(index_name(kind_b));
    std::string csv = "scholar,Q,h,g,c,N_w,x,rank_" + na + ",rank_" + nb + '\n';
    for (const auto& rec : cohort)
        csv += csv_field(s.store.author_name(rec.scholar)) + ',' + std::to_string(rec.q) + ',' +
               std::to_string(rec.h) + ',' + std::to_string(rec.g) + ',' + format_number(rec.c) + ',' +
               std::to_string(rec.n_w) + ',' + rec.x.to_string_2dp() + ',' +
               std::to_string(position(rank_a, rec.scholar)) + ',' + std::to_string(position(rank_b, rec.scholar)) +
               '\n';
    std::string pairs = "first,second," + na + "," + nb + '\n';
    for (const auto& p : result.pairs)
        pairs += csv_field(s.store.author_name(p.first)) + ',' + csv_field(s.store.author_name(p.second)) + ',' +
                 (p.close_a ? "Close" : "Not") + ',' + (p.close_b ? "Close" : "Not") + '\n';

    const auto cells = result.cell_counts();
    ordered_json params = {{"year", year},
                           {"q_min", sel.q_min},
                           {"q_max", opt.q_max ? ordered_json(*opt.q_max) : ordered_json(nullptr)},
                           {"sample", sel.sample_size},
                           {"seed", sel.seed},
                           {"k", k},
                           {"index_a", na},
                           {"index_b", nb},
                           {"s_a", result.s_a},
                           {"s_b", result.s_b},
                           {"cells", cells}};
    emit(s, opt, std::to_string(year), csv, params, out);
    emit(s, opt, std::to_string(year), pairs, params, out, "-pairs");
    out << "s_" << na << " = " << fixed(result.s_a, 2) << ", s_" << nb << " = " << fixed(result.s_b, 2) << '\n';
    out << "Close/Close " << cells[0] << ", Close/Not " << cells[1] << ", Not/Close " << cells[2] << ", Not/Not "
        << cells[3] << '\n';
    return kExitOk;
}

int cmd_report(const Options& opt, std::ostream& out, std::ostream& err)
{
    if (opt.report == "network-stats")
        return report_network_stats(opt, out);
    if (opt.report == "distance-histogram")
        return report_histogram(opt, out, err);
    if (opt.report == "index-table")
        return report_index_table(opt, out);
    if (opt.report == "rank")
        return report_rank(opt, out);
    if (opt.report == "c-eq-nw")
        return report_c_eq_nw(opt, out);
    if (opt.report == "heatmap")
        return report_heatmap(opt, out);
    if (opt.report == "scatter")
        return report_scatter(opt, out);
    if (opt.report == "closeness")
        return report_closeness(opt, out);
    err << "unknown report '" << opt.report << "'; available:";
    for (const auto& name : kReportNames)
        err << ' ' << name;
    err << '\n';
    return kExitUsage;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err)
{
    Session s(opt);
    std::size_t failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        (ok ? out : err) << (ok ? "ok    " : "FAIL  ") << what << '\n';
        failures += !ok;
    };

    std::ostringstream snapshot;
    s.store.write_canonical(snapshot);
    check(snapshot.str() == read_file(s.ws.corpus_path()), "corpus snapshot round-trips");
    std::size_t reverse = 0;
    for (PaperIndex p = 0; p < s.store.paper_count(); ++p)
        reverse += s.store.cited_by(p).size();
    check(reverse == s.store.citation_count(), "reverse citation index matches references");

    const auto last = s.pipeline.last_completed_year();
    if (!last) {
        out << "no completed run for this config\n";
        return failures ? kExitData : kExitOk;
    }
    IndexStateStore replay(s.store.author_count(), s.pipeline.first_year() - 1, s.cfg.n);
    for (int y = s.pipeline.first_year(); y <= *last; ++y) {
        if (!fs::exists(s.pipeline.ledger_path(y))) {
            out << "ledger " << y << " evicted; stopping replay\n";
            break;
        }
        const auto ledger = s.pipeline.load_ledger(y);
        const auto events = s.store.citations_in_year(y);
        if (!ledger.skipped) {
            check(ledger.events.total() == events.size(), "ledger " + std::to_string(y) + " covers every citation");
            std::uint64_t credits = 0, expected = 0;
            for (const auto& [a, counts] : ledger.scholars)
                credits += counts.total();
            for (const auto& ev : events)
                expected += ev.cited_authors.size();
            check(credits == expected, "ledger " + std::to_string(y) + " credits every cited author");
        }
        replay.apply(ledger);
        const auto state = s.pipeline.load_state(y);
        check(std::equal(state.units().begin(), state.units().end(), replay.units().begin()),
              "state " + std::to_string(y) + " equals the replayed ledgers");
    }
    return failures ? kExitData : kExitOk;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Collaboration-distance citation indices"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-w,--workspace", opt.workspace, "Workspace directory")->required();
        sub->add_option("--config", opt.config, "Config file (key = value)");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate a corpus and snapshot it into the workspace");
    ingest->add_option("input", opt.input, "Corpus file (JSON lines)")->required();
    ingest->add_option("--format", opt.format, "canonical or dblp-v12")
        ->check(CLI::IsMember({"canonical", "dblp-v12"}));
    add_common(ingest);

    auto* run = app.add_subcommand("run", "Compute distance ledgers and x-index states year by year");
    add_common(run);
    run->add_option("--to", opt.to, "Last year to compute (default: last corpus year)");
    run->add_option("--jobs", opt.jobs, "Worker threads");
    run->add_flag("--force", opt.force, "Discard earlier results for this config");

    auto* report = app.add_subcommand("report", "Write a report CSV");
    report->add_option("name", opt.report, "Report name")->required();
    add_common(report);
    report->add_option("--year", opt.years, "Year(s); heatmap: end year");
    report->add_option("--from", opt.from, "Heatmap: first citing year");
    report->add_option("--network-year", opt.net_year, "Heatmap: network year");
    report->add_option("--out", opt.out, "Output CSV path, '-' for stdout");
    report->add_option("--seed", opt.seed, "Sampling seed");
    report->add_option("--index", opt.index, "Index to rank or compare (default x)");
    report->add_option("--against", opt.against, "Closeness: reference index (default c)");
    report->add_option("--q-min", opt.q_min, "Cohort: minimum Q");
    report->add_option("--q-max", opt.q_max, "Cohort/scatter: maximum Q");
    report->add_option("--h-index", opt.h, "Cohort: required h");
    report->add_option("--g-index", opt.g, "Cohort: required g");
    report->add_option("--c-index", opt.c, "Cohort: required c");
    report->add_option("--nw", opt.nw, "Cohort: required N_w");
    report->add_option("--sample", opt.sample, "Sample size");
    report->add_option("--k", opt.k, "Closeness threshold factor");
    report->add_option("--max-bin", opt.max_bin, "Largest distance with its own bin");
    report->add_option("--bins", opt.bins, "Bin edges (Q bins or repeat bins)");
    report->add_flag("--diameter", opt.diameter, "Include largest-component diameter");

    auto* validate = app.add_subcommand("validate", "Check workspace consistency");
    add_common(validate);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(opt, out, err);
        if (run->parsed())
            return cmd_run(opt, out, err);
        if (report->parsed())
            return cmd_report(opt, out, err);
        return cmd_validate(opt, out, err);
    } catch (const IncompleteStateError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIncomplete;
    } catch (const IngestError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const CohortError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed workspace file: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace citedist
