#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tgirg/regions.hpp"
#include "tgirg/sampler.hpp"
#include "tgirg/tessellation.hpp"

namespace tgirg {

struct TowerOptions {
    int cutoff = 0;     ///< tower level i
    double eps = 0.1;   ///< rounded down so that the high-weight threshold is a power of 2^(d/2)
    double c3 = 4.0;    ///< stray components must have geometric diameter <= threshold^c3
};

/// Thresholds derived from TowerOptions for a given dimension.
struct TowerScale {
    int cutoff = 0;
    int high_level = 0;          ///< lowest box level counted as high weight
    double eps = 0.0;            ///< adjusted exponent: high_level / (cutoff + 1)
    double top_weight = 1.0;     ///< W = 2^(d (cutoff+1) / 2)
    double high_weight = 1.0;    ///< W^eps = 2^(d high_level / 2)
    double stray_diameter = 1.0; ///< (W^eps)^c3
};

TowerScale tower_scale(int d, const TowerOptions& opt);

/// A tower is a level-`cutoff` cell with weights [1, W).
struct TowerId {
    int cutoff = 0;
    std::vector<int> index;  ///< 1-based per axis
    friend auto operator<=>(const TowerId&, const TowerId&) = default;
};

/// All towers in row-major order (axis 0 fastest). Throws for cutoff outside [0, rho0).
std::vector<TowerId> towers(const Tessellation& tess, int cutoff);

/// Element of a vertex: its tower, or its own box when its weight is at least W.
/// Returned as an index of tess.coarsened(cutoff).
BoxIndex tower_of(const WeightedVertex& v, const Tessellation& tess, int cutoff);

struct TowerActivityReport {
    bool high_boxes_active = true;       ///< every box of F at or above the high level holds a vertex
    bool single_high_component = true;   ///< high-weight vertices of G_F share one component
    bool small_stray_components = true;  ///< other components stay within the stray diameter
    std::string inactive_box;                            ///< first empty high box
    std::pair<VertexId, VertexId> split_pair{0, 0};      ///< high-weight vertices in different components
    std::pair<VertexId, VertexId> stray_pair{0, 0};      ///< far-apart vertices of a stray component
    double stray_distance = 0.0;

    bool active() const { return high_boxes_active && single_high_component && small_stray_components; }
};

/// Tower activity with precomputed box occupancy of the fine tessellation.
class TowerEvaluator {
public:
    TowerEvaluator(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt);

    TowerActivityReport evaluate(const TowerId& t) const;
    /// Same, addressed by an index of the coarse tessellation at level cutoff.
    TowerActivityReport evaluate(BoxIndex element) const;

    const Tessellation& fine() const { return *tess_; }
    const Tessellation& coarse() const { return coarse_; }
    const TowerScale& scale() const { return scale_; }
    const BoxOccupancy& occupancy() const { return occ_; }

    /// Activity per coarse element: towers by the three conditions, higher boxes by
    /// vertex presence. Towers are evaluated concurrently.
    std::vector<std::uint8_t> element_activity() const;
    /// Reports for all towers in coarse index order.
    std::vector<TowerActivityReport> all_reports() const;

private:
    const Tessellation* tess_;
    const GirgGraph* g_;
    Tessellation coarse_;
    TowerScale scale_;
    BoxOccupancy occ_;
};

TowerActivityReport is_active_tower(const Tessellation& tess, const GirgGraph& g, const TowerId& t,
                                    const TowerOptions& opt);

/// Fraction of active towers per requested cutoff, pooled over the ensemble.
std::vector<double> tower_activity_rate(const Tessellation& tess, const std::vector<GirgGraph>& ensemble,
                                        const std::vector<int>& levels, const TowerOptions& opt);

/// Region machinery over elements (towers and boxes above the cutoff).
class CoarseRegions {
public:
    CoarseRegions(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt);
    CoarseRegions(const CoarseRegions&) = delete;
    CoarseRegions& operator=(const CoarseRegions&) = delete;

    const Tessellation& coarse() const { return evaluator_.coarse(); }
    const TowerEvaluator& evaluator() const { return evaluator_; }
    const RegionBuilder& builder() const { return builder_; }
    BoxIndex element_of(VertexId v) const;
    const GirgGraph& graph() const { return *g_; }
    Region compute(BoxIndex x1, BoxIndex x2, bool with_holes = false) const { return builder_.compute(x1, x2, with_holes); }

private:
    const GirgGraph* g_;
    TowerEvaluator evaluator_;
    RegionBuilder builder_;
};

Region compute_region_coarse(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt, BoxIndex x1,
                             BoxIndex x2);

/// Element of the coarse tessellation holding a box of the fine one.
BoxIndex element_of_box(const Tessellation& fine, const Tessellation& coarse, BoxIndex b);

struct HighWeightCrossingScan {
    std::size_t edges = 0;            ///< edges from W to outside W u S
    std::size_t counterexamples = 0;  ///< of those, shadows missing every high-weight box of S
    std::pair<VertexId, VertexId> first{0, 0};
};

/// Edges leaving W u S from W must cross a high-weight box inside an S element;
/// counts the edges of r that do not.
HighWeightCrossingScan scan_high_weight_crossings(const CoarseRegions& cr, const Region& r);

/// `level,tower_index,cond1,cond2,cond3,active` rows, one per tower (header not included).
void write_tower_rows(std::ostream& out, const TowerEvaluator& ev);

}  // namespace tgirg
