#include "tgirg/graph.hpp"

#include <algorithm>

#include "tgirg/errors.hpp"

namespace tgirg {

Graph::Graph(std::size_t num_vertices, std::vector<std::pair<VertexId, VertexId>> edges) {
    std::vector<std::size_t> degree(num_vertices, 0);
    for (auto& [u, v] : edges) {
        if (u >= num_vertices || v >= num_vertices) throw InvalidInput("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });

    for (const auto& [u, v] : edges) {
        ++degree[u];
        ++degree[v];
    }
    offsets_.assign(num_vertices + 1, 0);
    for (std::size_t v = 0; v < num_vertices; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < num_vertices; ++v)
        std::sort(neighbors_.begin() + offsets_[v], neighbors_.begin() + offsets_[v + 1]);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<VertexId, VertexId>> Graph::edge_list() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(num_edges());
    for (VertexId u = 0; u < num_vertices(); ++u)
        for (VertexId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

BfsWorkspace::BfsWorkspace(std::size_t num_vertices) : dist_(num_vertices, kUnreachable) {
    order_.reserve(num_vertices);
}

void BfsWorkspace::reset() {
    for (VertexId v : order_) dist_[v] = kUnreachable;
    order_.clear();
}

Distance BfsWorkspace::run(const Graph& g, VertexId source) {
    if (source >= g.num_vertices()) throw InvalidInput("bfs: source vertex out of range");
    reset();
    dist_[source] = 0;
    order_.push_back(source);
    for (std::size_t head = 0; head < order_.size(); ++head) {
        const VertexId x = order_[head];
        const Distance next = dist_[x] + 1;
        for (VertexId y : g.neighbors(x)) {
            if (dist_[y] != kUnreachable) continue;
            dist_[y] = next;
            order_.push_back(y);
        }
    }
    return dist_[order_.back()];
}

Distance BfsWorkspace::bounded_distance(const Graph& g, VertexId source, VertexId target, Distance max_depth) {
    if (source >= g.num_vertices() || target >= g.num_vertices())
        throw InvalidInput("bfs: vertex out of range");
    reset();
    dist_[source] = 0;
    order_.push_back(source);
    if (source == target) return 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
        const VertexId x = order_[head];
        if (dist_[x] >= max_depth) break;
        const Distance next = dist_[x] + 1;
        for (VertexId y : g.neighbors(x)) {
            if (dist_[y] != kUnreachable) continue;
            if (y == target) {
                dist_[y] = next;
                order_.push_back(y);
                return next;
            }
            dist_[y] = next;
            order_.push_back(y);
        }
    }
    return kUnreachable;
}

std::vector<Distance> bfs_distances(const Graph& g, VertexId source) {
    BfsWorkspace ws(g.num_vertices());
    ws.run(g, source);
    return ws.distances();
}

ComponentLabeling components(const Graph& g) {
    ComponentLabeling out;
    constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
    out.label.assign(g.num_vertices(), kNone);
    std::vector<VertexId> queue;
    for (VertexId s = 0; s < g.num_vertices(); ++s) {
        if (out.label[s] != kNone) continue;
        const auto id = static_cast<std::uint32_t>(out.sizes.size());
        queue.assign(1, s);
        out.label[s] = id;
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (VertexId y : g.neighbors(queue[head]))
                if (out.label[y] == kNone) {
                    out.label[y] = id;
                    queue.push_back(y);
                }
        out.sizes.push_back(queue.size());
        if (out.sizes[id] > out.sizes[out.largest]) out.largest = id;
    }
    return out;
}

Distance power_distance(const Graph& g, VertexId u, VertexId v, Distance k) {
    if (k < 1) throw InvalidInput("power_distance: k must be at least 1");
    const auto dist = bfs_distances(g, u);
    if (v >= dist.size()) throw InvalidInput("power_distance: vertex out of range");
    if (dist[v] == kUnreachable) return kUnreachable;
    return (dist[v] + k - 1) / k;
}

std::vector<VertexId> shortest_path(const Graph& g, VertexId u, VertexId v) {
    const auto dist = bfs_distances(g, v);
    if (u >= dist.size() || v >= dist.size()) throw InvalidInput("shortest_path: vertex out of range");
    if (dist[u] == kUnreachable) return {};
    // Walk downhill from u towards v, taking the lowest-id neighbor one step closer.
    std::vector<VertexId> path{u};
    VertexId cur = u;
    while (cur != v) {
        for (VertexId y : g.neighbors(cur))
            if (dist[y] + 1 == dist[cur]) {
                cur = y;
                break;
            }
        path.push_back(cur);
    }
    return path;
}

}  // namespace tgirg
