#include "citedist/collab_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

#include "citedist/corpus.hpp"
#include "citedist/util.hpp"

namespace citedist {

CollabNetwork CollabNetwork::from_edges(int window_end, int window_length, std::size_t id_space,
                                        std::vector<AuthorId> nodes,
                                        std::vector<std::pair<AuthorId, AuthorId>> edges)
{
    CollabNetwork net;
    net.window_end_ = window_end;
    net.window_length_ = window_length;
    net.present_.assign(id_space, false);

    for (auto& [a, b] : edges) {
        if (a > b)
            std::swap(a, b);
    }
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto mark = [&](AuthorId a) {
        if (a >= id_space)
            throw PreconditionError("author id " + std::to_string(a) + " outside network id space");
        net.present_[a] = true;
    };
    for (AuthorId a : nodes)
        mark(a);
    for (const auto& [a, b] : edges) {
        mark(a);
        mark(b);
    }
    for (AuthorId a = 0; a < id_space; ++a) {
        if (net.present_[a])
            net.nodes_.push_back(a);
    }

    // Edges are sorted, so filling in order yields ascending neighbour lists.
    net.offsets_.assign(id_space + 1, 0);
    for (const auto& [a, b] : edges) {
        ++net.offsets_[a + 1];
        ++net.offsets_[b + 1];
    }
    for (std::size_t i = 0; i < id_space; ++i)
        net.offsets_[i + 1] += net.offsets_[i];
    net.adjacency_.resize(edges.size() * 2);
    {
        auto cursor = net.offsets_;
        for (const auto& [a, b] : edges) {
            net.adjacency_[cursor[a]++] = b;
            net.adjacency_[cursor[b]++] = a;
        }
    }

    net.component_.assign(id_space, kNoComponent);
    std::vector<AuthorId> queue;
    std::uint32_t label = 0;
    for (AuthorId root : net.nodes_) {
        if (net.component_[root] != kNoComponent)
            continue;
        net.component_[root] = label;
        queue.assign(1, root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (AuthorId v : net.neighbors(queue[head])) {
                if (net.component_[v] == kNoComponent) {
                    net.component_[v] = label;
                    queue.push_back(v);
                }
            }
        }
        ++label;
    }
    net.component_count_ = label;
    return net;
}

std::span<const AuthorId> CollabNetwork::neighbors(AuthorId a) const
{
    if (a >= present_.size())
        return {};
    return {adjacency_.data() + offsets_[a], offsets_[a + 1] - offsets_[a]};
}

std::vector<std::pair<AuthorId, AuthorId>> CollabNetwork::edges() const
{
    std::vector<std::pair<AuthorId, AuthorId>> out;
    out.reserve(edge_count());
    for (AuthorId a : nodes_) {
        for (AuthorId b : neighbors(a)) {
            if (a < b)
                out.emplace_back(a, b);
        }
    }
    return out;
}

CollabNetwork build_window(const CorpusStore& store, int year, int window_length)
{
    if (window_length < 1)
        throw PreconditionError("window length must be >= 1");
    std::vector<AuthorId> nodes;
    std::vector<std::pair<AuthorId, AuthorId>> edges;
    for (int y = year - window_length + 1; y <= year; ++y) {
        for (PaperIndex p : store.papers_in_year(y)) {
            auto authors = store.authors_of(p);
            nodes.insert(nodes.end(), authors.begin(), authors.end());
            for (std::size_t i = 0; i < authors.size(); ++i)
                for (std::size_t j = i + 1; j < authors.size(); ++j)
                    edges.emplace_back(authors[i], authors[j]);
        }
    }
    return CollabNetwork::from_edges(year, window_length, store.author_count(), std::move(nodes),
                                     std::move(edges));
}

// ---------------------------------------------------------------------------
// Distance search

void DistanceSearch::prepare(std::size_t id_space)
{
    if (mark_a_.size() < id_space) {
        mark_a_.resize(id_space, 0);
        mark_b_.resize(id_space, 0);
        mark_target_.resize(id_space, 0);
    }
}

std::uint32_t DistanceSearch::next_epoch()
{
    if (epoch_ == std::numeric_limits<std::uint32_t>::max()) {
        std::fill(mark_a_.begin(), mark_a_.end(), 0);
        std::fill(mark_b_.begin(), mark_b_.end(), 0);
        std::fill(mark_target_.begin(), mark_target_.end(), 0);
        epoch_ = 0;
    }
    return ++epoch_;
}

namespace {

std::vector<AuthorId> sorted_unique(std::span<const AuthorId> ids)
{
    std::vector<AuthorId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool intersects(const std::vector<AuthorId>& sorted, std::span<const AuthorId> ids)
{
    return std::any_of(ids.begin(), ids.end(),
                       [&](AuthorId a) { return std::binary_search(sorted.begin(), sorted.end(), a); });
}

std::vector<std::uint32_t> component_set(const CollabNetwork& net, std::span<const AuthorId> present)
{
    std::vector<std::uint32_t> comps;
    comps.reserve(present.size());
    for (AuthorId a : present)
        comps.push_back(net.component_of(a));
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
    return comps;
}

} // namespace

Distance DistanceSearch::shortest(const CollabNetwork& net, std::span<const AuthorId> sources,
                                  std::span<const AuthorId> targets, std::optional<std::uint32_t> cap)
{
    if (sources.empty() || targets.empty())
        throw PreconditionError("shortest distance needs non-empty author sets");

    const auto src = sorted_unique(sources);
    if (intersects(src, targets))
        return Distance::finite(0);

    front_a_.clear();
    front_b_.clear();
    for (AuthorId a : src)
        if (net.contains(a))
            front_a_.push_back(a);
    for (AuthorId a : sorted_unique(targets))
        if (net.contains(a))
            front_b_.push_back(a);
    if (front_a_.empty() || front_b_.empty())
        return Distance::infinite();

    const auto comps = component_set(net, front_a_);
    const bool connected = std::any_of(front_b_.begin(), front_b_.end(), [&](AuthorId a) {
        return std::binary_search(comps.begin(), comps.end(), net.component_of(a));
    });
    if (!connected)
        return Distance::infinite();
    if (cap && *cap == 0)
        return Distance::exceeds_cap(0);

    prepare(net.id_space());
    const auto epoch = next_epoch();
    for (AuthorId a : front_a_)
        mark_a_[a] = epoch;
    for (AuthorId b : front_b_)
        mark_b_[b] = epoch;

    std::uint32_t depth_a = 0;
    std::uint32_t depth_b = 0;
    for (;;) {
        if (cap && depth_a + depth_b >= *cap)
            return Distance::exceeds_cap(*cap);
        // Expanding the smaller front keeps the search balanced.
        const bool expand_a = front_a_.size() <= front_b_.size();
        auto& front = expand_a ? front_a_ : front_b_;
        auto& own = expand_a ? mark_a_ : mark_b_;
        const auto& other = expand_a ? mark_b_ : mark_a_;
        next_.clear();
        bool met = false;
        for (AuthorId u : front) {
            for (AuthorId v : net.neighbors(u)) {
                if (own[v] == epoch)
                    continue;
                if (other[v] == epoch) {
                    met = true;
                    break;
                }
                own[v] = epoch;
                next_.push_back(v);
            }
            if (met)
                break;
        }
        ++(expand_a ? depth_a : depth_b);
        // The first level on which the fronts touch fixes the distance.
        if (met)
            return Distance::finite(depth_a + depth_b);
        if (next_.empty())
            return Distance::infinite();
        front.swap(next_);
    }
}

void DistanceSearch::resolve_groups(const CollabNetwork& net, std::span<const AuthorId> sources,
                                    std::span<const std::span<const AuthorId>> groups,
                                    std::optional<std::uint32_t> cap, std::span<Distance> out)
{
    if (sources.empty())
        throw PreconditionError("resolve_groups needs a non-empty source set");
    if (out.size() != groups.size())
        throw PreconditionError("resolve_groups output size mismatch");

    const auto src = sorted_unique(sources);
    front_a_.clear();
    for (AuthorId a : src)
        if (net.contains(a))
            front_a_.push_back(a);
    const auto comps = component_set(net, front_a_);

    prepare(net.id_space());
    const auto epoch = next_epoch();

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto group = groups[i];
        if (group.empty())
            throw PreconditionError("resolve_groups got an empty target group");
        if (intersects(src, group)) {
            out[i] = Distance::finite(0);
            continue;
        }
        bool reachable = false;
        for (AuthorId m : group) {
            if (net.contains(m) && std::binary_search(comps.begin(), comps.end(), net.component_of(m))) {
                mark_target_[m] = epoch;
                reachable = true;
            }
        }
        if (!reachable) {
            out[i] = Distance::infinite();
            continue;
        }
        pending.push_back(i);
    }
    if (pending.empty())
        return;

    for (AuthorId a : front_a_)
        mark_a_[a] = epoch;
    std::vector<char> resolved(groups.size(), 0);
    std::uint32_t depth = 0;
    while (!pending.empty()) {
        if (front_a_.empty()) {
            for (std::size_t i : pending)
                out[i] = Distance::infinite();
            return;
        }
        if (cap && depth >= *cap) {
            for (std::size_t i : pending)
                out[i] = Distance::exceeds_cap(*cap);
            return;
        }
        ++depth;
        next_.clear();
        for (AuthorId u : front_a_) {
            for (AuthorId v : net.neighbors(u)) {
                if (mark_a_[v] == epoch)
                    continue;
                mark_a_[v] = epoch;
                next_.push_back(v);
                if (mark_target_[v] != epoch)
                    continue;
                for (std::size_t i : pending) {
                    if (!resolved[i] && std::find(groups[i].begin(), groups[i].end(), v) != groups[i].end()) {
                        resolved[i] = 1;
                        out[i] = Distance::finite(depth);
                    }
                }
            }
        }
        std::erase_if(pending, [&](std::size_t i) { return resolved[i] != 0; });
        front_a_.swap(next_);
    }
}

Distance shortest_distance(const CollabNetwork& net, std::span<const AuthorId> sources,
                           std::span<const AuthorId> targets, std::optional<std::uint32_t> cap)
{
    thread_local DistanceSearch search;
    return search.shortest(net, sources, targets, cap);
}

// ---------------------------------------------------------------------------
// Statistics

namespace {
// Exact degree sums; products of squared degrees overflow 64 bits on large graphs.
__extension__ typedef __int128 wide_int;
} // namespace

std::optional<double> assortativity(const CollabNetwork& net)
{
    if (net.edge_count() == 0)
        throw PreconditionError("assortativity needs at least one edge");
    // Sums over both ends of every edge, in remaining degrees (degree - 1).
    wide_int ends = 0, sum = 0, sum_sq = 0, sum_prod = 0;
    for (AuthorId u : net.nodes()) {
        const wide_int ru = net.degree(u) - 1;
        for (AuthorId v : net.neighbors(u)) {
            const wide_int rv = net.degree(v) - 1;
            ++ends;
            sum += ru;
            sum_sq += ru * ru;
            sum_prod += ru * rv;
        }
    }
    const wide_int variance = ends * sum_sq - sum * sum;
    if (variance == 0)
        return std::nullopt;
    const wide_int covariance = ends * sum_prod - sum * sum;
    return static_cast<double>(static_cast<long double>(covariance) / static_cast<long double>(variance));
}

double avg_clustering(const CollabNetwork& net)
{
    if (net.node_count() == 0)
        throw PreconditionError("clustering needs at least one node");
    double total = 0;
    for (AuthorId u : net.nodes()) {
        const auto nu = net.neighbors(u);
        if (nu.size() < 2)
            continue;
        std::size_t links = 0; // each triangle at u is seen twice
        for (AuthorId v : nu) {
            const auto nv = net.neighbors(v);
            auto i = nu.begin();
            auto j = nv.begin();
            while (i != nu.end() && j != nv.end()) {
                if (*i < *j) {
                    ++i;
                } else if (*j < *i) {
                    ++j;
                } else {
                    ++links;
                    ++i;
                    ++j;
                }
            }
        }
        const double d = static_cast<double>(nu.size());
        total += static_cast<double>(links) / (d * (d - 1));
    }
    return total / static_cast<double>(net.node_count());
}

std::vector<ComponentInfo> connected_components(const CollabNetwork& net)
{
    std::vector<ComponentInfo> comps(net.component_count());
    for (AuthorId a : net.nodes()) {
        auto& c = comps[net.component_of(a)];
        if (c.members.empty())
            c.smallest_author = a;
        c.members.push_back(a);
        c.edges += net.degree(a);
    }
    const double total_nodes = static_cast<double>(net.node_count());
    const double total_edges = static_cast<double>(net.edge_count());
    for (auto& c : comps) {
        c.nodes = c.members.size();
        c.edges /= 2;
        c.node_share = total_nodes > 0 ? 100.0 * static_cast<double>(c.nodes) / total_nodes : 0.0;
        c.edge_share = total_edges > 0 ? 100.0 * static_cast<double>(c.edges) / total_edges : 0.0;
    }
    std::sort(comps.begin(), comps.end(), [](const ComponentInfo& x, const ComponentInfo& y) {
        if (x.nodes != y.nodes)
            return x.nodes > y.nodes;
        return x.smallest_author < y.smallest_author;
    });
    return comps;
}

std::uint32_t component_diameter(const CollabNetwork& net, const ComponentInfo& component)
{
    constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(net.id_space(), kUnseen);
    std::vector<AuthorId> queue;
    std::uint32_t diameter = 0;
    for (AuthorId root : component.members) {
        for (AuthorId a : queue)
            dist[a] = kUnseen;
        queue.assign(1, root);
        dist[root] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const AuthorId u = queue[head];
            diameter = std::max(diameter, dist[u]);
            for (AuthorId v : net.neighbors(u)) {
                if (dist[v] == kUnseen) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return diameter;
}

NetworkStats network_report(const CollabNetwork& net, bool with_diameter)
{
    NetworkStats stats;
    stats.year = net.window_end();
    stats.nodes = net.node_count();
    stats.edges = net.edge_count();
    stats.average_degree = stats.nodes > 0 ? 2.0 * static_cast<double>(stats.edges) / static_cast<double>(stats.nodes) : 0.0;
    if (stats.edges > 0)
        stats.assortativity = assortativity(net);
    if (stats.nodes > 0)
        stats.avg_clustering = avg_clustering(net);
    auto comps = connected_components(net);
    if (with_diameter && !comps.empty())
        stats.diameter = component_diameter(net, comps.front());
    if (comps.size() > 2)
        comps.resize(2);
    stats.components = std::move(comps);
    return stats;
}

std::string network_stats_csv_header()
{
    return "year,nodes,edges,average_degree,assortativity,avg_clustering,"
           "cc1_nodes,cc1_node_pct,cc1_edges,cc1_edge_pct,"
           "cc2_nodes,cc2_node_pct,cc2_edges,cc2_edge_pct,diameter";
}

std::string network_stats_csv_row(const NetworkStats& stats)
{
    char buf[128];
    std::string row = std::to_string(stats.year) + ',' + std::to_string(stats.nodes) + ',' +
                      std::to_string(stats.edges) + ',';
    std::snprintf(buf, sizeof buf, "%.4f", stats.average_degree);
    row += buf;
    row += ',';
    if (stats.assortativity) {
        std::snprintf(buf, sizeof buf, "%.4f", *stats.assortativity);
        row += buf;
    } else {
        row += "UNDEFINED";
    }
    std::snprintf(buf, sizeof buf, ",%.4f", stats.avg_clustering);
    row += buf;
    for (std::size_t i = 0; i < 2; ++i) {
        ComponentInfo c;
        if (i < stats.components.size())
            c = stats.components[i];
        std::snprintf(buf, sizeof buf, ",%zu,%.2f,%zu,%.2f", c.nodes, c.node_share, c.edges, c.edge_share);
        row += buf;
    }
    row += ',';
    if (stats.diameter)
        row += std::to_string(*stats.diameter);
    return row;
}

void write_edge_list(const CollabNetwork& net, const CorpusStore& store, std::ostream& out)
{
    for (const auto& [a, b] : net.edges())
        out << csv_field(store.author_name(a)) << ',' << csv_field(store.author_name(b)) << '\n';
}

} // namespace citedist
