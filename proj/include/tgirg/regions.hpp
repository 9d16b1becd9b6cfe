#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tgirg/sampler.hpp"
#include "tgirg/tessellation.hpp"

namespace tgirg {

inline constexpr std::uint32_t kNoHole = 0xffffffffu;

/// Where a box sits relative to a region.
enum class Zone : std::uint8_t { Outside = 0, Inner = 1, Boundary = 2 };

/// Inactive expansion of a canonical box path and its active boundary.
struct Region {
    BoxIndex source = 0;
    BoxIndex target = 0;
    std::vector<BoxIndex> canonical_path;  ///< in path order
    std::vector<BoxIndex> l_prime;         ///< sorted
    std::vector<BoxIndex> w_set;           ///< sorted
    std::vector<BoxIndex> s_set;           ///< sorted
    std::vector<Zone> zone;                ///< per box: Inner for W, Boundary for S

    /// B-components of the complement of W; empty unless requested.
    std::vector<std::uint32_t> hole_label;  ///< per box, kNoHole inside W
    std::uint32_t hole_count = 0;

    bool in_w(BoxIndex b) const { return zone[b] == Zone::Inner; }
    bool in_s(BoxIndex b) const { return zone[b] == Zone::Boundary; }
    bool in_ws(BoxIndex b) const { return zone[b] != Zone::Outside; }
    bool has_holes() const { return !hole_label.empty(); }
    std::vector<BoxIndex> hole(std::uint32_t k) const;
};

/// Path in the parent tree through the lowest common ancestor. Singleton if b1 == b2.
std::vector<BoxIndex> canonical_path(const Tessellation& tess, BoxIndex b1, BoxIndex b2);

/// Region computation over a fixed activity pattern. The inactive G+ components are
/// labelled once, so many pairs can be evaluated cheaply and concurrently.
class RegionBuilder {
public:
    RegionBuilder(const Tessellation& tess, std::vector<std::uint8_t> activity);

    /// W takes L' plus every inactive G+ component meeting L' or G+-adjacent to it, so
    /// that each box bordering W is active.
    Region compute(BoxIndex b1, BoxIndex b2, bool with_holes = true) const;

    const Tessellation& tessellation() const { return *tess_; }
    const std::vector<std::uint8_t>& activity() const { return active_; }
    bool is_active(BoxIndex b) const { return active_[b] != 0; }
    std::uint32_t inactive_component(BoxIndex b) const { return component_[b]; }
    std::size_t inactive_component_count() const { return comp_start_.size() - 1; }
    std::size_t largest_inactive_component() const;

private:
    const Tessellation* tess_;
    std::vector<std::uint8_t> active_;
    std::vector<std::uint32_t> component_;  // kNoHole for active boxes
    std::vector<std::size_t> comp_start_;
    std::vector<BoxIndex> comp_items_;
};

/// Fills hole_label / hole_count: B-components of the boxes outside W.
void label_holes(const Tessellation& tess, Region& r);

Region compute_region(const Tessellation& tess, const GirgGraph& g, BoxIndex b1, BoxIndex b2);

/// G+-neighbors of C reachable from x by a B-path avoiding C, sorted.
/// Throws InvalidInput when C is empty or contains x.
std::vector<BoxIndex> visible_boundary(const Tessellation& tess, std::span<const BoxIndex> c_set, BoxIndex x);

/// True iff visible_boundary(c_set, x) induces a connected subgraph of B.
bool verify_boundary_connected(const Tessellation& tess, std::span<const BoxIndex> c_set, BoxIndex x);

/// True iff the boxes induce a connected subgraph of B (G+ when gplus is set).
bool induces_connected(const Tessellation& tess, std::span<const BoxIndex> boxes, bool gplus);

/// B-path from b1 to b2 through boxes G+-adjacent to b1, avoiding the edge {b1, b2}
/// unless it is itself a B edge. Throws InvalidInput if b1, b2 are not G+-adjacent.
std::vector<BoxIndex> local_shortcut_path(const Tessellation& tess, BoxIndex b1, BoxIndex b2);

/// G+-connected set of up to `size` boxes grown from a uniform start box by adding
/// uniform G+-neighbors of uniform members. Sorted.
std::vector<BoxIndex> random_gplus_connected_set(const Tessellation& tess, std::size_t size, Rng& rng);

/// `<box> <tag>` lines: L, LPRIME, W, S by most specific tag, then HOLE:<k> lines.
void write_region_dump(std::ostream& out, const Tessellation& tess, const Region& r);

}  // namespace tgirg
