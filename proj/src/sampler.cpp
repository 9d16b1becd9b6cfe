#include "tgirg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tgirg {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

struct EdgeRule {
    double side;
    int d;
    double edge_prob;
    std::uint64_t seed;

    bool operator()(const WeightedVertex& u, const WeightedVertex& v) const {
        return threshold_connects(u, v, side, d) && retain_edge(seed, u.id, v.id, edge_prob);
    }
};

GirgGraph assemble(std::vector<WeightedVertex> vertices, const ModelParams& params, EdgeList edges) {
    GirgGraph g;
    g.params = params;
    g.graph = Graph(vertices.size(), std::move(edges));
    g.vertices = std::move(vertices);
    return g;
}

void check_ids(const std::vector<WeightedVertex>& vertices) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id != i) throw InvalidInput("vertex ids must equal their index");
}

}  // namespace

double weight_from_uniform(double u, double tau) {
    return std::pow(1.0 - u, -1.0 / (tau - 1.0));
}

std::vector<WeightedVertex> sample_vertices(const ModelParams& params, Rng& rng) {
    params.validate();
    const double side = params.side();
    std::poisson_distribution<std::uint64_t> count_dist(params.lambda * params.n);
    const auto count = count_dist(rng);
    if (count >= std::numeric_limits<VertexId>::max()) throw InvalidInput("vertex count exceeds id range");

    std::vector<WeightedVertex> out(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto& v = out[i];
        v.id = static_cast<VertexId>(i);
        v.pos.resize(params.d);
        for (auto& c : v.pos) {
            c = uniform01(rng) * side;
            if (c >= side) c = std::nextafter(side, 0.0);
        }
        v.weight = weight_from_uniform(uniform01(rng), params.tau);
    }
    return out;
}

bool retain_edge(std::uint64_t seed, VertexId a, VertexId b, double edge_prob) {
    if (edge_prob >= 1.0) return true;
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    const std::uint64_t h = splitmix64(seed ^ splitmix64(key));
    return static_cast<double>(h >> 11) * 0x1.0p-53 < edge_prob;
}

GirgGraph build_edges_naive(std::vector<WeightedVertex> vertices, const ModelParams& params) {
    check_ids(vertices);
    const EdgeRule connects{params.side(), params.d, params.edge_prob, params.seed};
    EdgeList edges;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (connects(vertices[i], vertices[j]))
                edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    return assemble(std::move(vertices), params, std::move(edges));
}

GirgGraph build_edges_grid(std::vector<WeightedVertex> vertices, const ModelParams& params) {
    check_ids(vertices);
    const int d = params.d;
    const double side = params.side();
    const EdgeRule connects{side, d, params.edge_prob, params.seed};

    // Layer k holds weights in [2^k, 2^(k+1)).
    std::vector<std::vector<VertexId>> layers;
    std::vector<double> layer_max;
    for (const auto& v : vertices) {
        const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(std::log2(v.weight))));
        if (k >= layers.size()) {
            layers.resize(k + 1);
            layer_max.resize(k + 1, 0.0);
        }
        layers[k].push_back(v.id);
        layer_max[k] = std::max(layer_max[k], v.weight);
    }

    EdgeList edges;
    constexpr double kMaxCells = 1 << 22;
    std::vector<std::size_t> cell_start;
    std::vector<VertexId> cell_items;
    std::vector<std::size_t> cell_of;

    for (std::size_t a = 0; a < layers.size(); ++a) {
        if (layers[a].empty()) continue;
        for (std::size_t b = a; b < layers.size(); ++b) {
            if (layers[b].empty()) continue;
            const double reach = std::pow(layer_max[a] * layer_max[b], 1.0 / d) * (1.0 + 1e-9);
            auto per_axis = static_cast<std::size_t>(std::floor(side / reach));
            per_axis = std::min<std::size_t>(per_axis, static_cast<std::size_t>(std::pow(kMaxCells, 1.0 / d)));

            if (per_axis < 3) {
                for (VertexId u : layers[a])
                    for (VertexId v : layers[b])
                        if ((a != b || u < v) && connects(vertices[u], vertices[v]))
                            edges.emplace_back(std::min(u, v), std::max(u, v));
                continue;
            }

            // Counting sort of layer b into cells of side >= reach.
            const double cell_side = side / static_cast<double>(per_axis);
            const auto total_cells = static_cast<std::size_t>(ipow(static_cast<double>(per_axis), d));
            auto cell_index = [&](const TorusPoint& p) {
                std::size_t idx = 0;
                for (int k = d - 1; k >= 0; --k) {
                    auto c = static_cast<std::size_t>(p[k] / cell_side);
                    if (c >= per_axis) c = per_axis - 1;
                    idx = idx * per_axis + c;
                }
                return idx;
            };
            cell_start.assign(total_cells + 1, 0);
            cell_of.resize(layers[b].size());
            for (std::size_t i = 0; i < layers[b].size(); ++i) {
                cell_of[i] = cell_index(vertices[layers[b][i]].pos);
                ++cell_start[cell_of[i] + 1];
            }
            for (std::size_t c = 0; c < total_cells; ++c) cell_start[c + 1] += cell_start[c];
            cell_items.resize(layers[b].size());
            {
                std::vector<std::size_t> cursor(cell_start.begin(), cell_start.end() - 1);
                for (std::size_t i = 0; i < layers[b].size(); ++i) cell_items[cursor[cell_of[i]]++] = layers[b][i];
            }

            std::vector<long> base(d);
            std::vector<int> offset(d);
            for (VertexId u : layers[a]) {
                const auto& pu = vertices[u].pos;
                for (int k = 0; k < d; ++k) {
                    auto c = static_cast<long>(pu[k] / cell_side);
                    base[k] = std::min<long>(c, static_cast<long>(per_axis) - 1);
                }
                std::fill(offset.begin(), offset.end(), -1);
                while (true) {
                    std::size_t idx = 0;
                    for (int k = d - 1; k >= 0; --k) {
                        const long P = static_cast<long>(per_axis);
                        const long c = ((base[k] + offset[k]) % P + P) % P;
                        idx = idx * per_axis + static_cast<std::size_t>(c);
                    }
                    for (std::size_t s = cell_start[idx]; s < cell_start[idx + 1]; ++s) {
                        const VertexId v = cell_items[s];
                        if ((a != b || u < v) && connects(vertices[u], vertices[v]))
                            edges.emplace_back(std::min(u, v), std::max(u, v));
                    }
                    int k = 0;
                    while (k < d && offset[k] == 1) offset[k++] = -1;
                    if (k == d) break;
                    ++offset[k];
                }
            }
        }
    }
    return assemble(std::move(vertices), params, std::move(edges));
}

GirgGraph sample_girg(const ModelParams& params) {
    Rng rng(params.seed);
    return build_edges_grid(sample_vertices(params, rng), params);
}

TailFit fit_tail_exponent(std::span<const double> values) {
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values)
        if (v > 0.0) sorted.push_back(v);
    if (sorted.size() < 20) throw InsufficientData("tail fit needs at least 20 positive observations");
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    TailFit fit;
    fit.x_min = sorted[9] / 10.0;
    double log_sum = 0.0;
    for (double v : sorted) {
        if (v < fit.x_min) break;
        log_sum += std::log(v / fit.x_min);
        ++fit.samples;
    }
    if (fit.samples < 20 || log_sum <= 0.0) throw InsufficientData("upper decade holds too few distinct observations");
    fit.exponent = static_cast<double>(fit.samples) / log_sum;
    return fit;
}

TailFit degree_tail_stats(const GirgGraph& g) {
    if (g.size() < 10000) throw InsufficientData("degree tail fit needs at least 10^4 vertices");
    std::vector<double> degrees(g.size());
    for (VertexId v = 0; v < g.size(); ++v) degrees[v] = static_cast<double>(g.graph.degree(v));
    return fit_tail_exponent(degrees);
}

}  // namespace tgirg
