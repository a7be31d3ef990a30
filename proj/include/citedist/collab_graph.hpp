#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citedist/distance.hpp"
#include "citedist/types.hpp"

namespace citedist {

class CorpusStore;

/**
 * Undirected, unweighted co-authorship network for one time window.
 *
 * Adjacency is stored as sorted neighbour lists in a single CSR array indexed
 * by the corpus-wide author id, so ids from the corpus can be used directly.
 * Connected-component labels are computed at build time.
 */
class CollabNetwork {
public:
    static constexpr std::uint32_t kNoComponent = 0xFFFFFFFFu;

    CollabNetwork() = default;

    /// Builds a network over ids [0, id_space). `nodes` lists present authors
    /// (edge endpoints are added automatically); self-loops and parallel
    /// edges are dropped.
    static CollabNetwork from_edges(int window_end, int window_length, std::size_t id_space,
                                    std::vector<AuthorId> nodes,
                                    std::vector<std::pair<AuthorId, AuthorId>> edges);

    int window_end() const { return window_end_; }
    int window_length() const { return window_length_; }
    std::size_t id_space() const { return present_.size(); }

    /// Present authors, ascending.
    std::span<const AuthorId> nodes() const { return nodes_; }
    bool contains(AuthorId a) const { return a < present_.size() && present_[a]; }
    std::span<const AuthorId> neighbors(AuthorId a) const;
    std::uint32_t degree(AuthorId a) const { return static_cast<std::uint32_t>(neighbors(a).size()); }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return adjacency_.size() / 2; }

    /// Component label of `a`, or kNoComponent when absent.
    std::uint32_t component_of(AuthorId a) const { return contains(a) ? component_[a] : kNoComponent; }
    std::size_t component_count() const { return component_count_; }

    /// All edges (a < b), lexicographic.
    std::vector<std::pair<AuthorId, AuthorId>> edges() const;

private:
    int window_end_ = 0;
    int window_length_ = 0;
    std::vector<bool> present_;
    std::vector<AuthorId> nodes_;
    std::vector<std::size_t> offsets_{0};
    std::vector<AuthorId> adjacency_;
    std::vector<std::uint32_t> component_;
    std::size_t component_count_ = 0;
};

/// Co-authorship network of papers published in [y - window_length + 1, y].
CollabNetwork build_window(const CorpusStore& store, int year, int window_length = 5);

/**
 * Reusable BFS scratch space. Marking arrays are epoch-stamped so repeated
 * queries cost only what they touch. Not thread-safe; use one per thread.
 */
class DistanceSearch {
public:
    /// Level-synchronous bidirectional BFS between two author sets.
    /// Returns 0 when the sets intersect, INFINITE when no pair is connected,
    /// and EXCEEDS_CAP(cap) when the cap is reached before the fronts meet.
    Distance shortest(const CollabNetwork& net, std::span<const AuthorId> sources,
                      std::span<const AuthorId> targets, std::optional<std::uint32_t> cap = {});

    /// Multi-source BFS from `sources`; writes into `out[i]` the minimum
    /// distance from `sources` to any author of `groups[i]`. Stops as soon as
    /// every group is resolved, the cap is hit or the search is exhausted.
    void resolve_groups(const CollabNetwork& net, std::span<const AuthorId> sources,
                        std::span<const std::span<const AuthorId>> groups,
                        std::optional<std::uint32_t> cap, std::span<Distance> out);

private:
    void prepare(std::size_t id_space);
    std::uint32_t next_epoch();

    std::vector<std::uint32_t> mark_a_;
    std::vector<std::uint32_t> mark_b_;
    std::vector<std::uint32_t> mark_target_;
    std::uint32_t epoch_ = 0;
    std::vector<AuthorId> front_a_, front_b_, next_;
};

/// Set-to-set collaboration distance (throws PreconditionError on an empty set).
Distance shortest_distance(const CollabNetwork& net, std::span<const AuthorId> sources,
                           std::span<const AuthorId> targets, std::optional<std::uint32_t> cap = {});

struct ComponentInfo {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double node_share = 0; ///< percent of network nodes
    double edge_share = 0; ///< percent of network edges
    AuthorId smallest_author = 0;
    std::vector<AuthorId> members; ///< ascending
};

/// Degree assortativity from the remaining-degree joint distribution.
/// nullopt when the remaining-degree variance is zero. Throws on an edgeless net.
std::optional<double> assortativity(const CollabNetwork& net);

/// Mean local clustering, degree < 2 contributing 0. Throws on an empty net.
double avg_clustering(const CollabNetwork& net);

/// Components ordered by node count descending, ties by smallest author id.
std::vector<ComponentInfo> connected_components(const CollabNetwork& net);

/// Longest shortest path inside the given component (BFS from every member).
std::uint32_t component_diameter(const CollabNetwork& net, const ComponentInfo& component);

struct NetworkStats {
    int year = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double average_degree = 0;
    std::optional<double> assortativity;
    double avg_clustering = 0;
    /// First and second largest components (fewer when the network has fewer).
    std::vector<ComponentInfo> components;
    std::optional<std::uint32_t> diameter;
};

NetworkStats network_report(const CollabNetwork& net, bool with_diameter = false);

/// CSV header/row in the order: nodes, edges, average degree, assortativity,
/// clustering, 1st component nodes/edges, 2nd component nodes/edges, diameter.
std::string network_stats_csv_header();
std::string network_stats_csv_row(const NetworkStats& stats);

/// `author_a,author_b` lines using the corpus author names.
void write_edge_list(const CollabNetwork& net, const CorpusStore& store, std::ostream& out);

} // namespace citedist
