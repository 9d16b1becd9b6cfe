#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace tgirg {

using VertexId = std::uint32_t;
using Distance = std::uint32_t;

inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

/// Immutable undirected simple graph in compressed adjacency form.
/// Neighbor lists are sorted ascending; self-loops and duplicates are dropped.
class Graph {
public:
    Graph() = default;
    Graph(std::size_t num_vertices, std::vector<std::pair<VertexId, VertexId>> edges);

    std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const { return neighbors_.size() / 2; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(VertexId u, VertexId v) const;

    /// All edges as (u, v) with u < v, lexicographically sorted.
    std::vector<std::pair<VertexId, VertexId>> edge_list() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<VertexId> neighbors_;
};

struct ComponentLabeling {
    std::vector<std::uint32_t> label;  ///< component id per vertex
    std::vector<std::size_t> sizes;    ///< indexed by component id
    std::uint32_t largest = 0;         ///< id of the largest component (lowest id on ties)

    std::size_t count() const { return sizes.size(); }
};

/// Unweighted single-source distances; kUnreachable for other components.
std::vector<Distance> bfs_distances(const Graph& g, VertexId source);

/// Reusable BFS scratch space for repeated queries on one graph.
class BfsWorkspace {
public:
    explicit BfsWorkspace(std::size_t num_vertices);

    /// Runs BFS from source; returns the eccentricity within its component.
    Distance run(const Graph& g, VertexId source);
    /// BFS that stops exploring beyond max_depth; returns the distance to target or kUnreachable.
    Distance bounded_distance(const Graph& g, VertexId source, VertexId target, Distance max_depth);

    Distance distance(VertexId v) const { return dist_[v]; }
    /// Vertices reached by the last run, in BFS order (ties by ascending id).
    std::span<const VertexId> order() const { return order_; }
    const std::vector<Distance>& distances() const { return dist_; }

private:
    void reset();

    std::vector<Distance> dist_;
    std::vector<VertexId> order_;
};

ComponentLabeling components(const Graph& g);

/// Distance in the k-th graph power: ceil(dist_G(u, v) / k), kUnreachable if disconnected.
Distance power_distance(const Graph& g, VertexId u, VertexId v, Distance k);

/// Shortest u-v path (inclusive) preferring lower-id predecessors; empty if disconnected.
std::vector<VertexId> shortest_path(const Graph& g, VertexId u, VertexId v);

}  // namespace tgirg
