#include "tgirg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tgirg {

void ModelParams::validate() const {
    if (d < 1) throw InvalidInput("dimension d must be a positive integer");
    if (!(tau > 2.0)) throw InvalidInput("tau must exceed 2");
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
    if (!(n >= 1.0)) throw InvalidInput("torus volume n must be at least 1");
    if (!(d0_target > 0.0 && d0_target <= 0.5)) throw InvalidInput("d0_target must lie in (0, 1/2]");
    if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw InvalidInput("edge_prob must lie in (0, 1]");
}

double ModelParams::side() const { return torus_side(n, d); }

double torus_side(double n, int d) {
    if (d < 1) throw InvalidInput("dimension d must be a positive integer");
    if (d == 1) return n;
    const double side = std::pow(n, 1.0 / d);
    const double rounded = std::round(side);
    if (rounded > 0.0 && ipow(rounded, d) == n) return rounded;
    return side;
}

double torus_distance(std::span<const double> a, std::span<const double> b, double side) {
    if (a.size() != b.size()) throw InvalidInput("torus_distance: dimension mismatch");
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double gap = std::abs(a[k] - b[k]);
        best = std::max(best, std::min(gap, side - gap));
    }
    return best;
}

double volume_between(std::span<const double> a, std::span<const double> b, double side, int d) {
    return ipow(torus_distance(a, b, side), d);
}

double volume_between(const WeightedVertex& u, const WeightedVertex& v, const ModelParams& params) {
    return volume_between(u.pos, v.pos, params.side(), params.d);
}

bool threshold_connects(const WeightedVertex& u, const WeightedVertex& v, double side, int d) {
    return u.weight * v.weight >= volume_between(u.pos, v.pos, side, d);
}

bool threshold_connects(const WeightedVertex& u, const WeightedVertex& v, const ModelParams& params) {
    return threshold_connects(u, v, params.side(), params.d);
}

}  // namespace tgirg
