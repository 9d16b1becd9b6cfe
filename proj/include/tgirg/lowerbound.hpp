#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgirg/geometry.hpp"
#include "tgirg/graph.hpp"
#include "tgirg/sampler.hpp"

namespace tgirg {

/// Reflected M-ary Gray sequence over d digits; digit 0 changes fastest.
std::vector<std::vector<int>> gray_code(int M, int d);

/// Polyline through the centres of an M^d grid of cubes of side s, in Gray order.
struct GrayCurve {
    int M = 2;
    int d = 1;
    double side = 1.0;
    std::vector<double> origin;             ///< lower corner of the tessellated region
    std::vector<std::vector<int>> order;    ///< cube index vectors in visiting order
    std::vector<std::vector<double>> centers;

    double length() const { return side * static_cast<double>(centers.size() - 1); }
    /// Point at arc length a along the polyline, and the position of its cube in `order`.
    std::vector<double> point_at(double a, std::size_t* cube = nullptr) const;
};

GrayCurve gray_curve(std::span<const double> origin, int M, double s, int d);

struct GapEstimate {
    double sampled = 0.0;    ///< minimum over the sample points (an upper bound)
    double certified = 0.0;  ///< sampled minus the sampling mesh (a lower bound)
};

/// Smallest max-norm distance between curve points lying in cubes that are not
/// consecutive in the visiting order. Each half-segment (centre to face centre) is
/// sampled at `samples` evenly spaced points. Infinite when no such pair exists.
GapEstimate min_nonconsecutive_gap(const GrayCurve& curve, int samples = 65);

struct WitnessReport {
    bool success = false;
    int M = 0;
    double cube_side = 0.0;
    double inner_side = 0.0;                       ///< side of the snake region
    std::vector<std::vector<double>> ball_centers;  ///< on the torus
    std::vector<std::size_t> ball_cube;            ///< Gray position of each ball
    std::vector<std::size_t> ball_counts;          ///< qualifying vertices per ball
    std::vector<VertexId> path;                    ///< one vertex per ball when unique
    std::size_t shortcut_violations = 0;           ///< edges between balls in non-consecutive cubes
    std::size_t external_attachments = 0;          ///< edges from the path to other vertices
    std::size_t broken_links = 0;                  ///< consecutive balls without an edge
    std::string first_violation;
    Distance component_diameter = 0;
};

/// Checks the snake event around `center`: an inner cube of volume c1_prime * ln(n) is cut
/// into the finest Gray grid whose non-consecutive curve points stay 12 apart; unit
/// max-norm balls every 2 units of arc length must each hold exactly one vertex of
/// weight in [2^d, 3^d] forming an induced, unattached path. region_side (default
/// n^(1/(d (tau-1)))) bounds the probe; both sides must fit on the torus.
WitnessReport plant_witness_probe(const GirgGraph& g, std::span<const double> center, double c1_prime,
                                  double region_side = 0.0);

struct LowWeightComponent {
    std::uint32_t component = 0;
    std::size_t size = 0;
    Distance diameter = 0;
};

/// Among components whose vertices all have weight <= cap, one of largest diameter
/// (lowest component id on ties). cap <= 0 means 3^d.
std::optional<LowWeightComponent> scan_long_low_weight_component(const GirgGraph& g, double weight_cap = 0.0);

}  // namespace tgirg
