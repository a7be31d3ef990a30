#include "citedist/workspace.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "citedist/util.hpp"

namespace citedist {

namespace fs = std::filesystem;

namespace {

std::string trim_copy(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& value)
{
    std::istringstream in(value);
    T out{};
    in >> out;
    if (!in || !in.eof())
        throw PreconditionError("config: bad value '" + value + "' for '" + key + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw PreconditionError("config: bad boolean '" + value + "' for '" + key + "'");
}

} // namespace

RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim_copy(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim_copy(line.substr(0, eq));
        const auto value = trim_copy(line.substr(eq + 1));
        if (key == "min_year")
            cfg.corpus.min_year = parse_value<int>(key, value);
        else if (key == "max_year")
            cfg.corpus.max_year = parse_value<int>(key, value);
        else if (key == "window_length")
            cfg.window_length = parse_value<int>(key, value);
        else if (key == "n")
            cfg.n = parse_value<std::uint32_t>(key, value);
        else if (key == "alpha")
            cfg.alpha = parse_value<double>(key, value);
        else if (key == "distance_mode") {
            if (value == "exact")
                cfg.mode = DistanceMode::Exact;
            else if (value == "capped")
                cfg.mode = DistanceMode::Capped;
            else
                throw PreconditionError("config: distance_mode must be 'exact' or 'capped'");
        } else if (key == "strict_window")
            cfg.strict_window = parse_bool(key, value);
        else if (key == "retain_ledgers")
            cfg.retain_ledgers = parse_bool(key, value);
        else if (key == "jobs")
            cfg.jobs = parse_value<unsigned>(key, value);
        else if (key == "first_year")
            cfg.first_year = parse_value<int>(key, value);
        else if (key == "closeness_k")
            cfg.closeness_k = parse_value<double>(key, value);
        else
            throw PreconditionError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (cfg.window_length < 1)
        throw PreconditionError("config: window_length must be >= 1");
    if (!(cfg.alpha > 0))
        throw PreconditionError("config: alpha must be positive");
    if (cfg.jobs == 0)
        cfg.jobs = 1;
    return cfg;
}

RunConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot read config file '" + path.string() + "'");
    return parse_config(in);
}

std::string run_config_text(const RunConfig& cfg)
{
    std::ostringstream out;
    out << "distance_mode = " << (cfg.mode == DistanceMode::Exact ? "exact" : "capped") << '\n';
    if (cfg.first_year)
        out << "first_year = " << *cfg.first_year << '\n';
    out << "max_year = " << cfg.corpus.max_year << '\n';
    out << "min_year = " << cfg.corpus.min_year << '\n';
    out << "n = " << cfg.n << '\n';
    out << "strict_window = " << (cfg.strict_window ? "true" : "false") << '\n';
    out << "window_length = " << cfg.window_length << '\n';
    return out.str();
}

WeightConfig weight_config(const RunConfig& cfg)
{
    return {cfg.n, cfg.alpha, cfg.window_length, cfg.mode};
}

DistanceConfig distance_config(const RunConfig& cfg)
{
    DistanceConfig out;
    out.window_length = cfg.window_length;
    if (cfg.mode == DistanceMode::Capped)
        out.cap = cfg.n;
    out.strict_window = cfg.strict_window;
    out.jobs = cfg.jobs;
    return out;
}

// ---------------------------------------------------------------------------

CorpusStore Workspace::ingest(const fs::path& input, InputFormat format, const CorpusConfig& cfg)
{
    auto store = citedist::load_corpus(input.string(), cfg, format);
    fs::create_directories(root_);
    std::ostringstream snapshot;
    store.write_canonical(snapshot);
    const auto text = snapshot.str();
    write_file_atomic(corpus_path(), text);

    auto summary = nlohmann::ordered_json::parse(store.summary().to_json());
    summary["source"] = input.string();
    summary["corpus_hash"] = sha256_hex(text);
    summary["first_year"] = store.first_year();
    summary["last_year"] = store.last_year();
    write_file_atomic(root_ / "ingest.json", summary.dump(2) + "\n");
    return store;
}

CorpusStore Workspace::load_corpus(const CorpusConfig& cfg) const
{
    if (!fs::exists(corpus_path()))
        throw IncompleteStateError("workspace " + root_.string() + " has no corpus; run 'ingest' first");
    return citedist::load_corpus(corpus_path().string(), cfg);
}

RunConfig Workspace::default_config() const
{
    if (fs::exists(config_path()))
        return load_config(config_path());
    return {};
}

// ---------------------------------------------------------------------------

Pipeline::Pipeline(const Workspace& ws, const CorpusStore& store, RunConfig cfg)
    : ws_(ws), store_(store), cfg_(std::move(cfg)), corpus_hash_(store.content_hash())
{
    first_year_ = cfg_.first_year.value_or(store_.first_year());
    auto key = run_config_text(cfg_);
    key += "first_year_effective = " + std::to_string(first_year_) + "\n";
    key += "corpus = " + corpus_hash_ + "\n";
    hash_ = sha256_hex(key).substr(0, 16);
}

fs::path Pipeline::run_dir() const
{
    return ws_.root() / "runs" / hash_;
}

fs::path Pipeline::ledger_path(int year) const
{
    return run_dir() / "ledgers" / (std::to_string(year) + ".jsonl");
}

fs::path Pipeline::state_path(int year) const
{
    return run_dir() / "states" / (std::to_string(year) + ".jsonl");
}

std::optional<int> Pipeline::last_completed_year() const
{
    std::optional<int> last;
    for (int y = first_year_; fs::exists(state_path(y)); ++y)
        last = y;
    return last;
}

void Pipeline::write_manifest() const
{
    nlohmann::ordered_json m;
    m["run_hash"] = hash_;
    m["corpus_hash"] = corpus_hash_;
    m["config"] = run_config_text(cfg_);
    m["first_year"] = first_year_;
    m["window_length"] = cfg_.window_length;
    m["n"] = cfg_.n;
    write_file_atomic(run_dir() / "manifest.json", m.dump(2) + "\n");
}

void Pipeline::write_state(const IndexStateStore& state) const
{
    std::ostringstream out;
    const auto units = state.units();
    std::size_t nonzero = 0;
    for (auto u : units)
        nonzero += u > 0;
    nlohmann::ordered_json header;
    header["kind"] = "state";
    header["year"] = state.year();
    header["n"] = state.n();
    header["scholars"] = nonzero;
    out << header.dump() << '\n';
    for (AuthorId a = 0; a < units.size(); ++a) {
        if (units[a] == 0)
            continue;
        nlohmann::ordered_json rec;
        rec["id"] = store_.author_name(a);
        rec["x_units"] = units[a];
        rec["x"] = XScore(units[a], x_denominator(state.n())).to_string_2dp();
        out << rec.dump() << '\n';
    }
    write_file_atomic(state_path(state.year()), out.str());
}

IndexStateStore Pipeline::load_state(int year) const
{
    std::ifstream in(state_path(year));
    if (!in)
        throw IncompleteStateError("no x-index state for year " + std::to_string(year) + "; run the pipeline first");
    IndexStateStore state(store_.author_count(), year, cfg_.n);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = nlohmann::json::parse(line);
        if (header) {
            if (j.at("year").get<int>() != year || j.at("n").get<std::uint32_t>() != cfg_.n)
                throw IncompleteStateError("state file for " + std::to_string(year) + " does not match the run");
            header = false;
            continue;
        }
        const auto id = store_.find_author(j.at("id").get<std::string>());
        if (!id)
            throw IncompleteStateError("state names unknown scholar " + j.at("id").dump());
        state.mutable_units()[*id] = j.at("x_units").get<std::uint64_t>();
    }
    return state;
}

YearLedger Pipeline::load_ledger(int year) const
{
    std::ifstream in(ledger_path(year));
    if (!in)
        throw IncompleteStateError("no distance ledger for year " + std::to_string(year) +
                                   (cfg_.retain_ledgers ? "; run the pipeline first" : " (ledgers are evicted)"));
    return read_year_ledger(in, store_);
}

DistanceLedger Pipeline::load_ledgers(int through_year) const
{
    DistanceLedger ledger;
    for (int y = first_year_; y <= through_year; ++y)
        ledger.append(load_ledger(y));
    return ledger;
}

RunSummary Pipeline::run(int to_year, bool force, std::ostream& log)
{
    using clock = std::chrono::steady_clock;
    if (force)
        fs::remove_all(run_dir());
    fs::create_directories(run_dir());
    write_manifest();

    RunSummary summary;
    summary.first_year = first_year_;
    summary.last_year = to_year;

    int year = first_year_;
    IndexStateStore state(store_.author_count(), first_year_ - 1, cfg_.n);
    if (auto done = last_completed_year()) {
        for (int y = first_year_; y <= std::min(*done, to_year); ++y)
            summary.reused.push_back(y);
        year = *done + 1;
        if (year <= to_year)
            state = load_state(*done);
    }

    const auto dcfg = distance_config(cfg_);
    for (; year <= to_year; ++year) {
        const auto start = clock::now();
        auto ledger = batch_year_distances(store_, year, dcfg);
        std::ostringstream buf;
        write_year_ledger(ledger, store_, buf);
        write_file_atomic(ledger_path(year), buf.str());
        state.apply(ledger);
        write_state(state);
        if (!cfg_.retain_ledgers && year > first_year_)
            fs::remove(ledger_path(year - 1));
        summary.computed.push_back(year);
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start).count();
        log << "year " << year << ": " << ledger.events.total() << " citations"
            << (ledger.skipped ? " (skipped: incomplete window)" : "") << ", " << ms << " ms\n";
    }
    return summary;
}

} // namespace citedist
