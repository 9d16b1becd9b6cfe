#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "tgirg/geometry.hpp"
#include "tgirg/graph.hpp"

namespace tgirg {

/// A sampled threshold GIRG. Vertex ids equal their index in `vertices`.
struct GirgGraph {
    ModelParams params;
    std::vector<WeightedVertex> vertices;
    Graph graph;

    std::size_t size() const { return vertices.size(); }
    double side() const { return params.side(); }
};

using Rng = std::mt19937_64;

/// Inverse-CDF Pareto weight: (1 - u)^(-1/(tau-1)), so P(W >= x) = x^(1-tau) for x >= 1.
double weight_from_uniform(double u, double tau);

/// Poisson(lambda n) many vertices, uniform on the torus, with i.i.d. Pareto weights.
std::vector<WeightedVertex> sample_vertices(const ModelParams& params, Rng& rng);

/// Pair-keyed retention decision for edge_prob < 1. Symmetric in (a, b).
bool retain_edge(std::uint64_t seed, VertexId a, VertexId b, double edge_prob);

/// Tests all pairs with the threshold rule.
GirgGraph build_edges_naive(std::vector<WeightedVertex> vertices, const ModelParams& params);

/// Same edge set as build_edges_naive, testing only pairs in neighboring cells of
/// per-weight-layer grids whose cell side covers the largest possible edge length.
GirgGraph build_edges_grid(std::vector<WeightedVertex> vertices, const ModelParams& params);

/// Samples vertices from an RNG seeded with params.seed and builds edges with the grid.
GirgGraph sample_girg(const ModelParams& params);

struct TailFit {
    double exponent = 0.0;    ///< estimated alpha in P(X >= x) ~ x^(-alpha)
    double x_min = 0.0;       ///< lower end of the fitted range
    std::size_t samples = 0;  ///< observations at or above x_min
};

/// Hill estimate of the tail exponent over the upper decade: observations at least
/// one tenth of the tenth-largest value.
TailFit fit_tail_exponent(std::span<const double> values);

/// Tail exponent of the degree distribution. Requires at least 10^4 vertices and
/// enough non-zero degrees; throws InsufficientData otherwise.
TailFit degree_tail_stats(const GirgGraph& g);

/// Plain-text export: header, one `v` line per vertex and one `e` line per edge.
void write_girg(std::ostream& out, const GirgGraph& g);
GirgGraph read_girg(std::istream& in);

}  // namespace tgirg
