#include "citedist/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "citedist/util.hpp"

namespace citedist {

namespace {

constexpr std::size_t kMaxProblems = 50;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

void add_author(std::vector<std::string>& authors, std::string_view raw)
{
    auto name = trim(raw);
    if (name.empty())
        return;
    if (std::find(authors.begin(), authors.end(), name) == authors.end())
        authors.emplace_back(name);
}

bool fail(std::string* error, std::string message)
{
    if (error)
        *error = std::move(message);
    return false;
}

// Accepts JSON strings and integers as identifiers (DBLP exports use both).
bool id_from_json(const nlohmann::json& value, std::string& out)
{
    if (value.is_string()) {
        out = value.get<std::string>();
        return true;
    }
    if (value.is_number_integer()) {
        out = std::to_string(value.get<long long>());
        return true;
    }
    return false;
}

bool read_year(const nlohmann::json& obj, int& year, std::string* error)
{
    auto it = obj.find("year");
    if (it == obj.end())
        return fail(error, "missing field 'year'");
    if (!it->is_number_integer())
        return fail(error, "field 'year' is not an integer");
    const auto value = it->get<long long>();
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
        return fail(error, "field 'year' out of integer range");
    year = static_cast<int>(value);
    return true;
}

bool read_references(const nlohmann::json& obj, std::vector<std::string>& refs, std::string* error)
{
    auto it = obj.find("references");
    if (it == obj.end() || it->is_null())
        return true;
    if (!it->is_array())
        return fail(error, "field 'references' is not an array");
    refs.reserve(it->size());
    for (const auto& ref : *it) {
        std::string id;
        if (!id_from_json(ref, id))
            return fail(error, "reference is not a string");
        refs.push_back(std::move(id));
    }
    return true;
}

} // namespace

std::optional<PaperRecord> parse_canonical_line(std::string_view line, std::string* error)
{
    auto obj = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        fail(error, "not a JSON object");
        return std::nullopt;
    }
    PaperRecord rec;
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
        fail(error, "missing or non-string field 'id'");
        return std::nullopt;
    }
    rec.id = id->get<std::string>();
    if (trim(rec.id).empty()) {
        fail(error, "empty 'id'");
        return std::nullopt;
    }
    if (!read_year(obj, rec.year, error))
        return std::nullopt;
    auto authors = obj.find("authors");
    if (authors == obj.end() || !authors->is_array()) {
        fail(error, "missing or non-array field 'authors'");
        return std::nullopt;
    }
    for (const auto& a : *authors) {
        if (!a.is_string()) {
            fail(error, "author is not a string");
            return std::nullopt;
        }
        add_author(rec.authors, a.get<std::string>());
    }
    if (rec.authors.empty()) {
        fail(error, "no authors");
        return std::nullopt;
    }
    if (!read_references(obj, rec.references, error))
        return std::nullopt;
    return rec;
}

std::optional<PaperRecord> parse_dblp_v12_line(std::string_view line, std::string* error)
{
    line = trim(line);
    if (!line.empty() && (line.front() == '[' || line.front() == ','))
        line = trim(line.substr(1));
    if (!line.empty() && (line.back() == ']' || line.back() == ','))
        line = trim(line.substr(0, line.size() - 1));
    if (line.empty()) {
        fail(error, "");
        return std::nullopt;
    }
    auto obj = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        fail(error, "not a JSON object");
        return std::nullopt;
    }
    PaperRecord rec;
    auto id = obj.find("id");
    if (id == obj.end() || !id_from_json(*id, rec.id) || trim(rec.id).empty()) {
        fail(error, "missing field 'id'");
        return std::nullopt;
    }
    if (!read_year(obj, rec.year, error))
        return std::nullopt;
    auto authors = obj.find("authors");
    if (authors == obj.end() || !authors->is_array()) {
        fail(error, "missing or non-array field 'authors'");
        return std::nullopt;
    }
    for (const auto& a : *authors) {
        std::string key;
        if (a.is_string()) {
            key = a.get<std::string>();
        } else if (a.is_object()) {
            // Prefer the dataset's author id; fall back to the printed name.
            auto aid = a.find("id");
            if (aid == a.end() || !id_from_json(*aid, key) || trim(key).empty()) {
                auto name = a.find("name");
                if (name != a.end() && name->is_string())
                    key = name->get<std::string>();
            }
        }
        add_author(rec.authors, key);
    }
    if (rec.authors.empty()) {
        fail(error, "no authors");
        return std::nullopt;
    }
    if (!read_references(obj, rec.references, error))
        return std::nullopt;
    return rec;
}

std::string IngestSummary::to_json() const
{
    nlohmann::ordered_json out;
    out["papers"] = papers;
    out["authors"] = authors;
    out["citations"] = citations;
    out["dangling_references"] = dangling_references;
    out["duplicate_papers"] = duplicate_papers;
    out["skipped_lines"] = skipped_lines;
    out["out_of_range"] = out_of_range;
    out["self_references"] = self_references;
    auto list = nlohmann::ordered_json::array();
    for (const auto& p : problems)
        list.push_back({{"line", p.line}, {"reason", p.reason}});
    out["problems"] = std::move(list);
    return out.dump();
}

std::span<const AuthorId> CorpusStore::authors_of(PaperIndex p) const
{
    return {paper_authors_.data() + author_offsets_[p], author_offsets_[p + 1] - author_offsets_[p]};
}

std::span<const PaperIndex> CorpusStore::references_of(PaperIndex p) const
{
    return {references_.data() + reference_offsets_[p],
            reference_offsets_[p + 1] - reference_offsets_[p]};
}

std::span<const std::string> CorpusStore::dangling_of(PaperIndex p) const
{
    return {dangling_.data() + dangling_offsets_[p], dangling_offsets_[p + 1] - dangling_offsets_[p]};
}

std::span<const PaperIndex> CorpusStore::cited_by(PaperIndex p) const
{
    return {cited_by_.data() + cited_by_offsets_[p], cited_by_offsets_[p + 1] - cited_by_offsets_[p]};
}

std::span<const PaperIndex> CorpusStore::papers_of_author(AuthorId a) const
{
    return {author_papers_.data() + author_paper_offsets_[a],
            author_paper_offsets_[a + 1] - author_paper_offsets_[a]};
}

std::optional<AuthorId> CorpusStore::find_author(const std::string& name) const
{
    auto it = author_lookup_.find(name);
    if (it == author_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::optional<PaperIndex> CorpusStore::find_paper(const std::string& id) const
{
    auto it = paper_lookup_.find(id);
    if (it == paper_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::span<const PaperIndex> CorpusStore::papers_in_year(int year) const
{
    if (year < first_year_ || year > last_year_)
        return {};
    const auto slot = static_cast<std::size_t>(year - first_year_);
    return {year_papers_.data() + year_offsets_[slot], year_offsets_[slot + 1] - year_offsets_[slot]};
}

std::vector<YearCount> CorpusStore::yearly_counts(int from, int to) const
{
    std::vector<YearCount> out;
    for (int y = from; y <= to; ++y) {
        YearCount row{y, 0, 0};
        for (PaperIndex p : papers_in_year(y)) {
            ++row.papers;
            row.citations += references_of(p).size();
        }
        out.push_back(row);
    }
    return out;
}

std::vector<CitationEvent> CorpusStore::citations_in_year(int year) const
{
    std::vector<CitationEvent> out;
    for (PaperIndex citing : papers_in_year(year)) {
        for (PaperIndex cited : references_of(citing))
            out.push_back({cited, citing, year, authors_of(cited), authors_of(citing)});
    }
    return out;
}

void CorpusStore::write_canonical(std::ostream& out) const
{
    for (PaperIndex p = 0; p < paper_count(); ++p) {
        nlohmann::ordered_json rec;
        rec["id"] = paper_ids_[p];
        rec["year"] = paper_years_[p];
        auto authors = nlohmann::ordered_json::array();
        for (AuthorId a : authors_of(p))
            authors.push_back(author_names_[a]);
        rec["authors"] = std::move(authors);
        auto refs = nlohmann::ordered_json::array();
        for (PaperIndex r : references_of(p))
            refs.push_back(paper_ids_[r]);
        for (const auto& d : dangling_of(p))
            refs.push_back(d);
        rec["references"] = std::move(refs);
        out << rec.dump() << '\n';
    }
}

std::string CorpusStore::content_hash() const
{
    std::ostringstream buf;
    write_canonical(buf);
    return sha256_hex(buf.str());
}

CorpusStore parse_records(std::istream& in, const CorpusConfig& config, InputFormat format)
{
    if (!in)
        throw IngestError("input stream is not readable");

    CorpusStore store;
    IngestSummary& summary = store.summary_;
    std::vector<std::vector<std::string>> raw_refs;

    auto note = [&](std::size_t line, std::string reason) {
        if (summary.problems.size() < kMaxProblems)
            summary.problems.push_back({line, std::move(reason)});
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        std::string error;
        auto rec = format == InputFormat::Canonical ? parse_canonical_line(line, &error)
                                                    : parse_dblp_v12_line(line, &error);
        if (!rec) {
            if (format == InputFormat::DblpV12 && error.empty())
                continue; // bare array bracket
            ++summary.skipped_lines;
            note(line_no, error);
            continue;
        }
        if (rec->year < config.min_year || rec->year > config.max_year) {
            ++summary.out_of_range;
            note(line_no, "year " + std::to_string(rec->year) + " outside valid range");
            continue;
        }
        const auto index = static_cast<PaperIndex>(store.paper_ids_.size());
        if (!store.paper_lookup_.emplace(rec->id, index).second) {
            ++summary.duplicate_papers;
            note(line_no, "duplicate paper id '" + rec->id + "'");
            continue;
        }
        store.paper_ids_.push_back(rec->id);
        store.paper_years_.push_back(rec->year);
        for (const auto& name : rec->authors) {
            auto [it, inserted] = store.author_lookup_.emplace(
                name, static_cast<AuthorId>(store.author_names_.size()));
            if (inserted)
                store.author_names_.push_back(name);
            store.paper_authors_.push_back(it->second);
        }
        store.author_offsets_.push_back(store.paper_authors_.size());
        raw_refs.push_back(std::move(rec->references));
    }
    if (in.bad())
        throw IngestError("read failure after line " + std::to_string(line_no));
    if (store.paper_ids_.empty())
        throw EmptyCorpusError("no valid records in input");

    const std::size_t papers = store.paper_ids_.size();
    const std::size_t authors = store.author_names_.size();

    // Resolve references; `seen[r] == p` marks r as already referenced by p.
    std::vector<PaperIndex> seen(papers, std::numeric_limits<PaperIndex>::max());
    for (PaperIndex p = 0; p < papers; ++p) {
        const auto dangling_begin = store.dangling_.size();
        for (auto& ref : raw_refs[p]) {
            if (ref == store.paper_ids_[p]) {
                ++summary.self_references;
                continue;
            }
            auto it = store.paper_lookup_.find(ref);
            if (it == store.paper_lookup_.end()) {
                auto first = store.dangling_.begin() + static_cast<std::ptrdiff_t>(dangling_begin);
                if (std::find(first, store.dangling_.end(), ref) == store.dangling_.end())
                    store.dangling_.push_back(std::move(ref));
                continue;
            }
            if (seen[it->second] == p)
                continue;
            seen[it->second] = p;
            store.references_.push_back(it->second);
        }
        store.reference_offsets_.push_back(store.references_.size());
        store.dangling_offsets_.push_back(store.dangling_.size());
        raw_refs[p] = {};
    }

    // Reverse citation index, ordered by citing (year, index).
    store.cited_by_offsets_.assign(papers + 1, 0);
    for (PaperIndex r : store.references_)
        ++store.cited_by_offsets_[r + 1];
    for (std::size_t i = 0; i < papers; ++i)
        store.cited_by_offsets_[i + 1] += store.cited_by_offsets_[i];
    store.cited_by_.resize(store.references_.size());
    {
        auto cursor = store.cited_by_offsets_;
        for (PaperIndex p = 0; p < papers; ++p)
            for (PaperIndex r : store.references_of(p))
                store.cited_by_[cursor[r]++] = p;
    }
    for (PaperIndex p = 0; p < papers; ++p) {
        auto first = store.cited_by_.begin() + static_cast<std::ptrdiff_t>(store.cited_by_offsets_[p]);
        auto last = store.cited_by_.begin() + static_cast<std::ptrdiff_t>(store.cited_by_offsets_[p + 1]);
        std::sort(first, last, [&](PaperIndex a, PaperIndex b) {
            return std::pair(store.paper_years_[a], a) < std::pair(store.paper_years_[b], b);
        });
    }

    // Per-year buckets.
    const auto [min_it, max_it] = std::minmax_element(store.paper_years_.begin(), store.paper_years_.end());
    store.first_year_ = *min_it;
    store.last_year_ = *max_it;
    const auto span_years = static_cast<std::size_t>(store.last_year_ - store.first_year_ + 1);
    store.year_offsets_.assign(span_years + 1, 0);
    for (int y : store.paper_years_)
        ++store.year_offsets_[static_cast<std::size_t>(y - store.first_year_) + 1];
    for (std::size_t i = 0; i < span_years; ++i)
        store.year_offsets_[i + 1] += store.year_offsets_[i];
    store.year_papers_.resize(papers);
    {
        auto cursor = store.year_offsets_;
        for (PaperIndex p = 0; p < papers; ++p)
            store.year_papers_[cursor[static_cast<std::size_t>(store.paper_years_[p] - store.first_year_)]++] = p;
    }

    // Author -> papers, first publication year.
    store.author_paper_offsets_.assign(authors + 1, 0);
    for (AuthorId a : store.paper_authors_)
        ++store.author_paper_offsets_[a + 1];
    for (std::size_t i = 0; i < authors; ++i)
        store.author_paper_offsets_[i + 1] += store.author_paper_offsets_[i];
    store.author_papers_.resize(store.paper_authors_.size());
    store.author_first_year_.assign(authors, std::numeric_limits<int>::max());
    {
        auto cursor = store.author_paper_offsets_;
        for (PaperIndex p = 0; p < papers; ++p) {
            for (AuthorId a : store.authors_of(p)) {
                store.author_papers_[cursor[a]++] = p;
                store.author_first_year_[a] = std::min(store.author_first_year_[a], store.paper_years_[p]);
            }
        }
    }

    summary.papers = papers;
    summary.authors = authors;
    summary.citations = store.references_.size();
    summary.dangling_references = store.dangling_.size();
    return store;
}

CorpusStore load_corpus(const std::string& path, const CorpusConfig& config, InputFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IngestError("cannot open input file '" + path + "'");
    return parse_records(in, config, format);
}

} // namespace citedist
