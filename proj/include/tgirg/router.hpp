#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tgirg/regions.hpp"
#include "tgirg/sampler.hpp"
#include "tgirg/tessellation.hpp"

namespace tgirg {

/// Boxes met by the straight segment joining two vertices in position x weight space.
struct BoxShadow {
    VertexId x = 0;
    VertexId y = 0;
    std::vector<BoxIndex> boxes;  ///< from box_of(x) to box_of(y), no consecutive repeats
};

/// Shadow of the segment (pos_a, w_a) -> (pos_b, w_b). Each coordinate follows the shorter
/// arc of the torus (ties go in the positive direction); the weight varies linearly.
std::vector<BoxIndex> segment_shadow(const Tessellation& tess, std::span<const double> pos_a, double w_a,
                                     std::span<const double> pos_b, double w_b);

/// Shadow of an existing edge; throws InvalidInput if {x, y} is not an edge.
BoxShadow box_shadow(const Tessellation& tess, const GirgGraph& g, VertexId x, VertexId y);

/// Lowest-id vertex of `box` that equals or neighbors x or y.
/// Throws LemmaViolation if there is none, InvalidInput if the box is empty.
VertexId crossing_anchor(const BoxOccupancy& occ, const GirgGraph& g, VertexId x, VertexId y, BoxIndex box);
VertexId crossing_anchor(const Tessellation& tess, const GirgGraph& g, VertexId x, VertexId y, BoxIndex box);

struct CrossingSurvey {
    std::size_t edges = 0;
    std::size_t instances = 0;  ///< (edge, active box in its shadow) pairs checked
    std::size_t failures = 0;
    std::size_t shadow_breaks = 0;  ///< consecutive shadow boxes that were not G+-adjacent
    std::string first_failure;
};

/// Checks anchors for up to max_edges edges (all edges if 0), taken in edge-list order.
CrossingSurvey survey_crossings(const Tessellation& tess, const GirgGraph& g, std::size_t max_edges = 0);

/// A u-v walk through boxes of W u S whose consecutive vertices are at distance <= 3.
struct ConfinedWalk {
    VertexId source = 0;
    VertexId target = 0;
    std::vector<VertexId> vertices;
    std::vector<BoxIndex> boxes;   ///< box of each vertex
    std::vector<Distance> hops;    ///< graph distance between consecutive vertices
    Distance shortest = 0;         ///< dist_G(u, v)
    std::size_t region_size = 0;   ///< |W u S|
    std::size_t w_size = 0;
    std::size_t s_size = 0;
    std::size_t excursions = 0;    ///< maximal stretches of the BFS path outside W u S
    std::size_t hole_jumps = 0;    ///< path edges joining two different holes

    /// Sum of hops: a certified upper bound on dist_G(u, v).
    std::size_t length() const;
    Distance max_hop() const;
};

struct WalkValidation {
    bool ok = true;
    Distance max_hop = 0;
    std::string problem;
};

/// Walk construction and checking on one graph and tessellation.
class Router {
public:
    Router(const Tessellation& tess, const GirgGraph& g);

    /// Throws NoPath if u and v are disconnected, LemmaViolation if an anchor or a
    /// boundary connection is missing.
    ConfinedWalk construct_confined_walk(VertexId u, VertexId v) const;

    /// Re-derives every hop by bounded BFS and checks box membership in W u S.
    WalkValidation validate(const ConfinedWalk& walk) const;

    const Tessellation& tessellation() const { return *tess_; }
    const GirgGraph& graph() const { return *g_; }
    const BoxOccupancy& occupancy() const { return occ_; }
    const RegionBuilder& regions() const { return builder_; }

private:
    VertexId anchor_on_boundary(const Region& r, VertexId from, VertexId to, std::uint32_t hole) const;
    void trace_boundary(const Region& r, std::uint32_t hole, BoxIndex from, BoxIndex to,
                        std::vector<VertexId>& out) const;

    const Tessellation* tess_;
    const GirgGraph* g_;
    BoxOccupancy occ_;
    RegionBuilder builder_;
};

struct DistanceRegionRow {
    VertexId u = 0;
    VertexId v = 0;
    Distance distance = 0;
    std::size_t w_size = 0;
    std::size_t s_size = 0;
    double ratio = 0.0;  ///< distance / |W u S|
};

/// Exact distance against region size per pair; pairs with u == v or in different
/// components are skipped.
std::vector<DistanceRegionRow> verify_distance_vs_region(const Router& router,
                                                         std::span<const std::pair<VertexId, VertexId>> pairs);

/// `vertex <id> <box> <tag>` lines alternating with `hop <d>` lines.
void write_walk_dump(std::ostream& out, const Router& router, const ConfinedWalk& walk);

}  // namespace tgirg
