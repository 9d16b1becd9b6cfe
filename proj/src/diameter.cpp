#include "tgirg/diameter.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

#include "json.hpp"
#include "tgirg/parallel.hpp"

namespace tgirg {
namespace {

/// Hands BFS workspaces to concurrent workers.
class WorkspacePool {
public:
    explicit WorkspacePool(std::size_t n) : n_(n) {}

    std::unique_ptr<BfsWorkspace> acquire() {
        std::lock_guard lock(mutex_);
        if (free_.empty()) return std::make_unique<BfsWorkspace>(n_);
        auto ws = std::move(free_.back());
        free_.pop_back();
        return ws;
    }
    void release(std::unique_ptr<BfsWorkspace> ws) {
        std::lock_guard lock(mutex_);
        free_.push_back(std::move(ws));
    }

private:
    std::size_t n_;
    std::mutex mutex_;
    std::vector<std::unique_ptr<BfsWorkspace>> free_;
};

DiameterResult skeleton(const ComponentLabeling& comps) {
    DiameterResult r;
    r.largest = comps.largest;
    for (std::size_t s : comps.sizes) r.components.push_back({s, 0});
    return r;
}

void finish(DiameterResult& r) {
    for (const auto& c : r.components) r.overall = std::max(r.overall, c.diameter);
}

/// Lowest-id vertex at maximum distance in the last BFS.
VertexId farthest(const BfsWorkspace& ws) {
    const auto order = ws.order();
    const Distance ecc = ws.distance(order.back());
    VertexId best = order.back();
    for (auto it = order.rbegin(); it != order.rend() && ws.distance(*it) == ecc; ++it) best = std::min(best, *it);
    return best;
}

Distance ifub_component(const Graph& g, VertexId root, BfsWorkspace& ws, std::size_t& runs) {
    ws.run(g, root);
    ++runs;
    const VertexId a = farthest(ws);
    Distance lb = ws.run(g, a);
    ++runs;
    const VertexId b = farthest(ws);

    // Midpoint of a shortest a-b path, walking back from b through lowest-id predecessors.
    VertexId mid = b;
    for (Distance dist = lb; dist > lb / 2; --dist) {
        for (VertexId y : g.neighbors(mid))
            if (ws.distance(y) == dist - 1) {
                mid = y;
                break;
            }
    }
    const Distance ecc_mid = ws.run(g, mid);
    ++runs;
    lb = std::max(lb, ecc_mid);
    Distance ub = 2 * ecc_mid;

    std::vector<std::vector<VertexId>> fringes(ecc_mid + 1);
    for (VertexId v : ws.order()) fringes[ws.distance(v)].push_back(v);
    for (auto& f : fringes) std::sort(f.begin(), f.end());

    for (Distance i = ecc_mid; ub > lb && i > 0; --i) {
        Distance fringe_max = 0;
        for (VertexId v : fringes[i]) {
            fringe_max = std::max(fringe_max, ws.run(g, v));
            ++runs;
            if (fringe_max == 2 * i) return fringe_max;
        }
        lb = std::max(lb, fringe_max);
        if (lb > 2 * (i - 1)) return lb;
        ub = 2 * (i - 1);
    }
    return lb;
}

}  // namespace

DiameterResult exact_diameter(const Graph& g) {
    const auto comps = components(g);
    DiameterResult r = skeleton(comps);
    const std::size_t n = g.num_vertices();
    std::vector<Distance> ecc(n, 0);
    WorkspacePool pool(n);
    constexpr std::size_t kChunk = 64;
    parallel_for((n + kChunk - 1) / kChunk, [&](std::size_t chunk) {
        auto ws = pool.acquire();
        for (std::size_t v = chunk * kChunk; v < std::min(n, (chunk + 1) * kChunk); ++v)
            ecc[v] = ws->run(g, static_cast<VertexId>(v));
        pool.release(std::move(ws));
    });
    r.bfs_runs = n;
    for (std::size_t v = 0; v < n; ++v) {
        auto& c = r.components[comps.label[v]];
        c.diameter = std::max(c.diameter, ecc[v]);
    }
    finish(r);
    return r;
}

DiameterResult ifub_diameter(const Graph& g) {
    const auto comps = components(g);
    DiameterResult r = skeleton(comps);
    std::vector<VertexId> root(comps.count(), 0);
    std::vector<std::uint8_t> seen(comps.count(), 0);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (!seen[comps.label[v]]) {
            seen[comps.label[v]] = 1;
            root[comps.label[v]] = v;
        }
    std::vector<std::size_t> runs(comps.count(), 0);
    WorkspacePool pool(g.num_vertices());
    parallel_for(comps.count(), [&](std::size_t c) {
        if (comps.sizes[c] < 2) return;
        auto ws = pool.acquire();
        r.components[c].diameter = ifub_component(g, root[c], *ws, runs[c]);
        pool.release(std::move(ws));
    });
    for (std::size_t k : runs) r.bfs_runs += k;
    finish(r);
    return r;
}

Distance double_sweep_lower(const Graph& g) {
    if (g.num_vertices() == 0) return 0;
    BfsWorkspace ws(g.num_vertices());
    ws.run(g, 0);
    return ws.run(g, farthest(ws));
}

std::string diameter_json(const DiameterResult& r) {
    nlohmann::ordered_json j;
    j["overall"] = r.overall;
    j["components"] = nlohmann::ordered_json::array();
    for (const auto& c : r.components) j["components"].push_back({{"size", c.size}, {"diameter", c.diameter}});
    j["bfs_runs"] = r.bfs_runs;
    return j.dump();
}

}  // namespace tgirg
