#include "tgirg/router.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "tgirg/parallel.hpp"

namespace tgirg {

std::vector<BoxIndex> segment_shadow(const Tessellation& tess, std::span<const double> pos_a, double w_a,
                                     std::span<const double> pos_b, double w_b) {
    const int d = tess.dim();
    if (static_cast<int>(pos_a.size()) != d || static_cast<int>(pos_b.size()) != d)
        throw InvalidInput("segment_shadow: dimension mismatch");
    const double side = tess.side();
    std::array<double, kMaxTessellationDim> delta{};
    for (int k = 0; k < d; ++k) {
        double step = pos_b[k] - pos_a[k];
        if (step > side / 2)
            step -= side;
        else if (step < -side / 2)
            step += side;
        else if (step == -side / 2)
            step = side / 2;
        delta[k] = step;
    }
    auto weight_at = [&](double t) { return w_a + t * (w_b - w_a); };

    std::vector<double> events{0.0, 1.0};
    const int la = tess.weight_level(w_a), lb = tess.weight_level(w_b);
    for (int l = std::min(la, lb) + 1; l <= std::max(la, lb); ++l) {
        const double t = (std::exp2(0.5 * d * l) - w_a) / (w_b - w_a);
        if (t > 0.0 && t < 1.0) events.push_back(t);
    }
    std::sort(events.begin(), events.end());
    const std::size_t level_events = events.size();
    for (std::size_t i = 0; i + 1 < level_events; ++i) {
        const double t0 = events[i], t1 = events[i + 1];
        const int level = tess.weight_level(weight_at(0.5 * (t0 + t1)));
        if (level >= tess.rho0()) continue;
        const double cell = tess.box_side(level);
        for (int k = 0; k < d; ++k) {
            if (delta[k] == 0.0) continue;
            const double x0 = pos_a[k] + t0 * delta[k], x1 = pos_a[k] + t1 * delta[k];
            const auto first = static_cast<std::int64_t>(std::ceil(std::min(x0, x1) / cell));
            const auto last = static_cast<std::int64_t>(std::floor(std::max(x0, x1) / cell));
            for (std::int64_t m = first; m <= last; ++m) {
                const double t = (static_cast<double>(m) * cell - pos_a[k]) / delta[k];
                if (t > t0 && t < t1) events.push_back(t);
            }
        }
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    std::vector<BoxIndex> out;
    std::array<double, kMaxTessellationDim> buf{};
    auto emit_at = [&](double t) {
        for (int k = 0; k < d; ++k) {
            double x = std::fmod(pos_a[k] + t * delta[k], side);
            if (x < 0) x += side;
            if (x >= side) x -= side;
            buf[k] = x;
        }
        const BoxIndex b = tess.box_of(std::span<const double>(buf.data(), d), weight_at(t));
        if (out.empty() || out.back() != b) out.push_back(b);
    };
    out.push_back(tess.box_of(pos_a, w_a));
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        emit_at(0.5 * (events[i] + events[i + 1]));
        if (i + 2 < events.size()) emit_at(events[i + 1]);
    }
    const BoxIndex end = tess.box_of(pos_b, w_b);
    if (out.back() != end) out.push_back(end);
    return out;
}

BoxShadow box_shadow(const Tessellation& tess, const GirgGraph& g, VertexId x, VertexId y) {
    if (x >= g.size() || y >= g.size() || !g.graph.has_edge(x, y)) throw InvalidInput("box_shadow requires an edge");
    const auto& a = g.vertices[x];
    const auto& b = g.vertices[y];
    return {x, y, segment_shadow(tess, a.pos, a.weight, b.pos, b.weight)};
}

VertexId crossing_anchor(const BoxOccupancy& occ, const GirgGraph& g, VertexId x, VertexId y, BoxIndex box) {
    const auto members = occ.vertices_in(box);
    if (members.empty()) throw InvalidInput("crossing anchor requested in an inactive box");
    for (VertexId z : members)
        if (z == x || z == y || g.graph.has_edge(z, x) || g.graph.has_edge(z, y)) return z;
    throw LemmaViolation("no vertex of the crossed box connects to the edge {" + std::to_string(x) + ", " +
                         std::to_string(y) + "}");
}

VertexId crossing_anchor(const Tessellation& tess, const GirgGraph& g, VertexId x, VertexId y, BoxIndex box) {
    return crossing_anchor(BoxOccupancy(tess, g), g, x, y, box);
}

CrossingSurvey survey_crossings(const Tessellation& tess, const GirgGraph& g, std::size_t max_edges) {
    CrossingSurvey s;
    const BoxOccupancy occ(tess, g);
    auto edges = g.graph.edge_list();
    if (max_edges && edges.size() > max_edges) edges.resize(max_edges);
    for (const auto& [x, y] : edges) {
        ++s.edges;
        const auto& a = g.vertices[x];
        const auto& b = g.vertices[y];
        const auto shadow = segment_shadow(tess, a.pos, a.weight, b.pos, b.weight);
        for (std::size_t i = 0; i < shadow.size(); ++i) {
            if (i && !tess.gplus_adjacent(shadow[i - 1], shadow[i])) ++s.shadow_breaks;
            if (!occ.is_active(shadow[i])) continue;
            ++s.instances;
            try {
                crossing_anchor(occ, g, x, y, shadow[i]);
            } catch (const LemmaViolation& e) {
                if (!s.failures++) s.first_failure = std::string(e.what()) + " in box " + tess.format(shadow[i]);
            }
        }
    }
    return s;
}

std::size_t ConfinedWalk::length() const {
    std::size_t total = 0;
    for (Distance h : hops) total += h;
    return total;
}

Distance ConfinedWalk::max_hop() const { return hops.empty() ? 0 : *std::max_element(hops.begin(), hops.end()); }

Router::Router(const Tessellation& tess, const GirgGraph& g)
    : tess_(&tess), g_(&g), occ_(tess, g), builder_(tess, occ_.activity()) {}

VertexId Router::anchor_on_boundary(const Region& r, VertexId from, VertexId to, std::uint32_t hole) const {
    const auto& a = g_->vertices[from];
    const auto& b = g_->vertices[to];
    for (BoxIndex box : segment_shadow(*tess_, a.pos, a.weight, b.pos, b.weight)) {
        if (!r.in_s(box)) continue;
        if (r.hole_label[box] != hole)
            throw LemmaViolation("edge shadow reached the boundary of a different hole at " + tess_->format(box));
        return crossing_anchor(occ_, *g_, from, to, box);
    }
    throw LemmaViolation("edge shadow never meets the visible boundary");
}

void Router::trace_boundary(const Region& r, std::uint32_t hole, BoxIndex from, BoxIndex to,
                            std::vector<VertexId>& out) const {
    if (from == to) return;
    std::unordered_map<BoxIndex, BoxIndex> parent{{from, from}};
    std::vector<BoxIndex> queue{from}, nbrs;
    bool found = false;
    for (std::size_t head = 0; head < queue.size() && !found; ++head) {
        tess_->b_neighbors(queue[head], nbrs);
        for (BoxIndex x : nbrs) {
            if (!r.in_s(x) || r.hole_label[x] != hole || parent.count(x)) continue;
            parent.emplace(x, queue[head]);
            if (x == to) {
                found = true;
                break;
            }
            queue.push_back(x);
        }
    }
    if (!found) throw LemmaViolation("visible boundary of a hole is not B-connected");
    std::vector<BoxIndex> chain;
    for (BoxIndex b = parent.at(to); b != from; b = parent.at(b)) chain.push_back(b);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(occ_.vertices_in(*it).front());
}

ConfinedWalk Router::construct_confined_walk(VertexId u, VertexId v) const {
    const GirgGraph& g = *g_;
    if (u >= g.size() || v >= g.size()) throw InvalidInput("walk endpoints out of range");
    ConfinedWalk walk;
    walk.source = u;
    walk.target = v;
    const auto path = shortest_path(g.graph, u, v);
    if (path.empty()) throw NoPath("vertices " + std::to_string(u) + " and " + std::to_string(v) + " are disconnected");
    walk.shortest = static_cast<Distance>(path.size() - 1);

    Region r = builder_.compute(occ_.box_of_vertex(u), occ_.box_of_vertex(v), false);
    walk.w_size = r.w_set.size();
    walk.s_size = r.s_set.size();
    walk.region_size = walk.w_size + walk.s_size;
    auto box = [&](VertexId x) { return occ_.box_of_vertex(x); };
    if (std::any_of(path.begin(), path.end(), [&](VertexId x) { return !r.in_ws(box(x)); })) label_holes(*tess_, r);

    std::vector<VertexId> seq{u};
    for (std::size_t j = 1; j < path.size(); ++j) {
        if (r.in_ws(box(path[j]))) {
            seq.push_back(path[j]);
            continue;
        }
        ++walk.excursions;
        const std::size_t i = j - 1;
        std::size_t e = j;
        while (!r.in_ws(box(path[e]))) ++e;

        std::uint32_t hole = r.hole_label[box(path[j])];
        VertexId anchor = anchor_on_boundary(r, path[j], path[i], hole);
        seq.push_back(anchor);
        for (std::size_t l = j; l + 1 < e; ++l) {
            const std::uint32_t next = r.hole_label[box(path[l + 1])];
            if (next == hole) continue;
            ++walk.hole_jumps;
            const VertexId leave = anchor_on_boundary(r, path[l], path[l + 1], hole);
            trace_boundary(r, hole, box(anchor), box(leave), seq);
            seq.push_back(leave);
            anchor = anchor_on_boundary(r, path[l + 1], path[l], next);
            seq.push_back(anchor);
            hole = next;
        }
        const VertexId exit = anchor_on_boundary(r, path[e - 1], path[e], hole);
        trace_boundary(r, hole, box(anchor), box(exit), seq);
        seq.push_back(exit);
        seq.push_back(path[e]);
        j = e;
    }

    // Drop repeats and loops, then jump ahead over vertices an edge already skips.
    std::unordered_map<VertexId, std::size_t> last;
    for (std::size_t i = 0; i < seq.size(); ++i) last[seq[i]] = i;
    std::vector<VertexId> simple;
    for (std::size_t i = 0; i < seq.size(); i = last[seq[i]] + 1) simple.push_back(seq[i]);
    constexpr std::size_t kLookahead = 256;
    for (std::size_t i = 0; i < simple.size();) {
        walk.vertices.push_back(simple[i]);
        std::size_t next = i + 1;
        for (std::size_t k = std::min(simple.size() - 1, i + kLookahead); k > i + 1; --k)
            if (g.graph.has_edge(simple[i], simple[k])) {
                next = k;
                break;
            }
        i = next;
    }

    BfsWorkspace ws(g.size());
    for (std::size_t i = 0; i < walk.vertices.size(); ++i) {
        walk.boxes.push_back(box(walk.vertices[i]));
        if (!i) continue;
        const VertexId a = walk.vertices[i - 1], b = walk.vertices[i];
        const Distance hop = g.graph.has_edge(a, b) ? 1 : ws.bounded_distance(g.graph, a, b, 3);
        if (hop == kUnreachable) throw LemmaViolation("consecutive walk vertices are more than 3 hops apart");
        walk.hops.push_back(hop);
    }
    return walk;
}

WalkValidation Router::validate(const ConfinedWalk& walk) const {
    WalkValidation out;
    auto fail = [&](std::string why) {
        if (out.ok) out.problem = std::move(why);
        out.ok = false;
    };
    const GirgGraph& g = *g_;
    if (walk.vertices.empty() || walk.vertices.front() != walk.source || walk.vertices.back() != walk.target) {
        fail("walk does not join its endpoints");
        return out;
    }
    if (walk.hops.size() + 1 != walk.vertices.size() || walk.boxes.size() != walk.vertices.size()) {
        fail("walk arrays have inconsistent lengths");
        return out;
    }
    const Region r = builder_.compute(occ_.box_of_vertex(walk.source), occ_.box_of_vertex(walk.target), false);
    BfsWorkspace ws(g.size());
    for (std::size_t i = 0; i < walk.vertices.size(); ++i) {
        const VertexId x = walk.vertices[i];
        const BoxIndex b = tess_->box_of(g.vertices[x]);
        if (b != walk.boxes[i]) fail("recorded box differs for vertex " + std::to_string(x));
        if (!r.in_ws(b)) fail("vertex " + std::to_string(x) + " lies outside W u S in " + tess_->format(b));
        if (!i) continue;
        const Distance hop = ws.bounded_distance(g.graph, walk.vertices[i - 1], x, 3);
        if (hop == kUnreachable) {
            fail("step " + std::to_string(i) + " exceeds 3 hops");
            continue;
        }
        out.max_hop = std::max(out.max_hop, hop);
        if (hop != walk.hops[i - 1]) fail("step " + std::to_string(i) + " records a wrong hop distance");
    }
    const auto dist = bfs_distances(g.graph, walk.source)[walk.target];
    if (dist != walk.shortest) fail("recorded shortest distance is wrong");
    if (walk.length() < dist) fail("walk shorter than the shortest path");
    return out;
}

std::vector<DistanceRegionRow> verify_distance_vs_region(const Router& router,
                                                         std::span<const std::pair<VertexId, VertexId>> pairs) {
    const auto& g = router.graph();
    const auto& occ = router.occupancy();
    std::vector<DistanceRegionRow> rows(pairs.size());
    std::vector<std::uint8_t> keep(pairs.size(), 0);
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [u, v] = pairs[i];
        if (u == v) return;
        const auto dist = bfs_distances(g.graph, u)[v];
        if (dist == kUnreachable) return;
        const Region r = router.regions().compute(occ.box_of_vertex(u), occ.box_of_vertex(v), false);
        rows[i] = {u, v, dist, r.w_set.size(), r.s_set.size(),
                   static_cast<double>(dist) / static_cast<double>(r.w_set.size() + r.s_set.size())};
        keep[i] = 1;
    });
    std::vector<DistanceRegionRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (keep[i]) out.push_back(rows[i]);
    return out;
}

void write_walk_dump(std::ostream& out, const Router& router, const ConfinedWalk& walk) {
    const Region r = router.regions().compute(router.occupancy().box_of_vertex(walk.source),
                                              router.occupancy().box_of_vertex(walk.target), false);
    for (std::size_t i = 0; i < walk.vertices.size(); ++i) {
        if (i) out << "hop " << walk.hops[i - 1] << '\n';
        const BoxIndex b = walk.boxes[i];
        out << "vertex " << walk.vertices[i] << ' ' << router.tessellation().format(b) << ' '
            << (r.in_w(b) ? "W" : r.in_s(b) ? "S" : "OUT") << '\n';
    }
}

}  // namespace tgirg
