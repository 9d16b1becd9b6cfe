#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgirg/geometry.hpp"
#include "tgirg/graph.hpp"

namespace tgirg {

struct GirgGraph;

/// Dense box handle; see Tessellation::encode / decode.
using BoxIndex = std::uint32_t;

inline constexpr int kMaxTessellationDim = 8;

/// Human-facing box identity. Indices are 1-based per axis; TOP carries no index.
struct BoxId {
    int level = 0;
    std::vector<int> index;

    bool is_top() const { return index.empty(); }
    friend auto operator<=>(const BoxId&, const BoxId&) = default;
};

/// Hierarchy of boxes over torus x [1, inf).
///
/// Level i (floor_level <= i < rho0) cuts the torus into cubes of side D_i = 2^i D0
/// and holds weights in [2^(d i/2), 2^(d (i+1)/2)); level rho0 is the single TOP box.
/// A positive floor_level turns the lowest level into towers whose weight range
/// starts at 1 (see coarsened()).
class Tessellation {
public:
    Tessellation(int d, int rho0, double d0, int floor_level = 0);

    /// rho0 = ceil(log2(side / d0_target)), D0 = side / 2^rho0. Validates params.
    static Tessellation build(const ModelParams& params);
    /// Same with an explicit target; only requires d0_target > 0.
    static Tessellation build(const ModelParams& params, double d0_target);

    /// Tessellation whose lowest level is `cutoff`; level-cutoff cells become towers.
    Tessellation coarsened(int cutoff) const;

    int dim() const { return d_; }
    int rho0() const { return rho0_; }
    int floor_level() const { return floor_; }
    double d0() const { return d0_; }
    double side() const { return side_; }

    double box_side(int level) const;
    double weight_floor(int level) const;
    double weight_ceiling(int level) const;
    std::size_t per_axis(int level) const { return std::size_t{1} << (rho0_ - level); }
    std::size_t level_size(int level) const;
    std::size_t size() const { return offsets_.back(); }

    BoxIndex top() const { return static_cast<BoxIndex>(size() - 1); }
    bool is_top(BoxIndex b) const { return b == top(); }
    int level(BoxIndex b) const;

    BoxIndex encode(const BoxId& id) const;
    BoxId decode(BoxIndex b) const;
    std::string format(BoxIndex b) const;
    BoxIndex parse(std::string_view text) const;

    using Coords = std::array<std::int64_t, kMaxTessellationDim>;
    /// 0-based per-axis coordinates of a non-TOP box.
    Coords coords(BoxIndex b) const;
    /// Box at `level` with 0-based coordinates, wrapped onto the torus.
    BoxIndex at(int level, const Coords& c) const;

    /// min(floor(2 log2 w / d), rho0), clamped below at floor_level.
    int weight_level(double w) const;
    BoxIndex box_of(std::span<const double> pos, double weight) const;
    BoxIndex box_of(const WeightedVertex& v) const { return box_of(v.pos, v.weight); }

    BoxIndex parent(BoxIndex b) const;
    std::vector<BoxIndex> children(BoxIndex b) const;

    std::vector<BoxIndex> b_neighbors(BoxIndex b) const;
    std::vector<BoxIndex> gplus_neighbors(BoxIndex b) const;
    /// Allocation-free variant; `out` is overwritten with sorted unique neighbors.
    void gplus_neighbors(BoxIndex b, std::vector<BoxIndex>& out) const;
    void b_neighbors(BoxIndex b, std::vector<BoxIndex>& out) const;

    bool b_adjacent(BoxIndex a, BoxIndex b) const;
    bool gplus_adjacent(BoxIndex a, BoxIndex b) const;

    /// Largest G+ degree; levels are translation invariant so one box per level suffices.
    std::size_t max_gplus_degree() const;

private:
    template <class Emit>
    void product(int level, const std::array<std::vector<std::int64_t>, kMaxTessellationDim>& choices, Emit&& emit) const;

    int d_;
    int rho0_;
    int floor_;
    double d0_;
    double side_;
    std::vector<std::size_t> offsets_;  // first index of each level, plus total
};

/// Per-edge generating cycles of the B cycle space: a triangle through the common
/// parent, or a quadrilateral through both parents.
std::vector<std::vector<BoxIndex>> gamma_generators(const Tessellation& tess);

/// True iff every pair of boxes on the cycle is G+-adjacent.
bool check_chordal_in_gplus(const Tessellation& tess, std::span<const BoxIndex> cycle);

/// GF(2) span test: does every fundamental cycle of the spanning forest `tree_parent`
/// (kNoParent at roots) lie in the span of `generators`? Each cycle lists its vertices once, in order.
inline constexpr std::uint32_t kNoParent = 0xffffffffu;
bool fundamental_cycles_in_span(std::size_t num_nodes, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                const std::vector<std::uint32_t>& tree_parent,
                                const std::vector<std::vector<std::uint32_t>>& generators);

/// Checks that gamma_generators spans the cycle space of B (tessellations of <= 200 boxes).
bool cycle_space_generation_check(const Tessellation& tess);

/// All undirected B edges (a < b).
std::vector<std::pair<BoxIndex, BoxIndex>> b_edges(const Tessellation& tess);

/// Vertex-to-box assignment with per-box vertex lists (ascending ids).
class BoxOccupancy {
public:
    BoxOccupancy(const Tessellation& tess, const GirgGraph& g);

    BoxIndex box_of_vertex(VertexId v) const { return box_of_[v]; }
    std::span<const VertexId> vertices_in(BoxIndex b) const {
        return {items_.data() + start_[b], items_.data() + start_[b + 1]};
    }
    bool is_active(BoxIndex b) const { return start_[b + 1] > start_[b]; }
    std::vector<std::uint8_t> activity() const;

private:
    std::vector<BoxIndex> box_of_;
    std::vector<std::size_t> start_;
    std::vector<VertexId> items_;
};

/// True iff at least one vertex of g maps to box b.
bool is_active(BoxIndex b, const GirgGraph& g, const Tessellation& tess);

}  // namespace tgirg
