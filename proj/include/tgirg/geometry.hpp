#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tgirg/errors.hpp"

namespace tgirg {

/// Generation parameters of a threshold GIRG.
///
/// The torus is [0, n^(1/d))^d with volume n; vertices arrive by a Poisson
/// process of intensity lambda and carry Pareto weights with tail exponent tau.
struct ModelParams {
    int d = 2;
    double lambda = 1.0;
    double tau = 2.5;
    double n = 1024.0;
    double d0_target = 0.25;
    double edge_prob = 1.0;
    std::uint64_t seed = 0;

    /// Throws InvalidInput unless tau > 2, lambda > 0, n >= 1,
    /// 0 < d0_target <= 1/2 and 0 < edge_prob <= 1.
    void validate() const;

    double side() const;
};

using TorusPoint = std::vector<double>;

struct WeightedVertex {
    std::uint32_t id = 0;
    TorusPoint pos;
    double weight = 1.0;
};

/// n^(1/d), snapped to the nearest integer when that integer is an exact root.
double torus_side(double n, int d);

/// Max-norm distance on a torus of the given side.
double torus_distance(std::span<const double> a, std::span<const double> b, double side);

/// torus_distance(u, v)^d.
double volume_between(const WeightedVertex& u, const WeightedVertex& v, const ModelParams& params);
double volume_between(std::span<const double> a, std::span<const double> b, double side, int d);

/// The threshold rule w(u) w(v) >= V(u, v), inclusive.
bool threshold_connects(const WeightedVertex& u, const WeightedVertex& v, const ModelParams& params);
bool threshold_connects(const WeightedVertex& u, const WeightedVertex& v, double side, int d);

/// Integer power for small non-negative exponents; avoids std::pow on the hot path.
inline double ipow(double base, int exp) {
    double r = 1.0;
    while (exp-- > 0) r *= base;
    return r;
}

}  // namespace tgirg
