#include "tgirg/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace tgirg {

std::vector<std::vector<int>> gray_code(int M, int d) {
    if (M < 2 || d < 1) throw InvalidInput("gray code needs M >= 2 and d >= 1");
    const double total_d = std::pow(static_cast<double>(M), d);
    if (total_d > 1e8) throw SizeLimitExceeded("gray code too long");
    const auto total = static_cast<std::int64_t>(total_d);
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(total));
    for (std::int64_t r = 0; r < total; ++r) {
        std::vector<int> digits(d);
        std::int64_t scale = 1;
        for (int k = 0; k < d; ++k) {
            const auto a = static_cast<int>((r / scale) % M);
            const bool reflected = ((r / (scale * M)) % 2) == 1;
            digits[k] = reflected ? M - 1 - a : a;
            scale *= M;
        }
        out.push_back(std::move(digits));
    }
    return out;
}

std::vector<double> GrayCurve::point_at(double a, std::size_t* cube) const {
    const std::size_t n = centers.size();
    a = std::clamp(a, 0.0, length());
    if (n == 1) {
        if (cube) *cube = 0;
        return centers[0];
    }
    const auto q = std::min(static_cast<std::size_t>(a / side), n - 2);
    const double t = a - static_cast<double>(q) * side;
    std::vector<double> p(d);
    for (int k = 0; k < d; ++k) p[k] = centers[q][k] + (centers[q + 1][k] - centers[q][k]) * (t / side);
    if (cube) *cube = t <= side / 2 ? q : q + 1;
    return p;
}

GrayCurve gray_curve(std::span<const double> origin, int M, double s, int d) {
    if (!(s > 0.0)) throw InvalidInput("gray curve cube side must be positive");
    if (static_cast<int>(origin.size()) != d) throw InvalidInput("gray curve origin has the wrong dimension");
    GrayCurve c;
    c.M = M;
    c.d = d;
    c.side = s;
    c.origin.assign(origin.begin(), origin.end());
    c.order = gray_code(M, d);
    for (const auto& idx : c.order) {
        std::vector<double> p(d);
        for (int k = 0; k < d; ++k) p[k] = origin[k] + (idx[k] + 0.5) * s;
        c.centers.push_back(std::move(p));
    }
    return c;
}

GapEstimate min_nonconsecutive_gap(const GrayCurve& curve, int samples) {
    if (samples < 2) throw InvalidInput("gap sampling needs at least 2 points per half-segment");
    const std::size_t n = curve.centers.size();
    const int d = curve.d;
    // Sample points of the curve inside each cube: centre towards each neighbouring centre.
    std::vector<std::vector<double>> pts(n);
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t nb : {q - 1, q + 1}) {
            if (nb >= n) continue;  // wraps for q == 0
            for (int i = 0; i < samples; ++i) {
                const double f = 0.5 * i / (samples - 1);
                for (int k = 0; k < d; ++k)
                    pts[q].push_back(curve.centers[q][k] + f * (curve.centers[nb][k] - curve.centers[q][k]));
            }
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 2; b < n; ++b) {
            // Cube centres at max-norm distance D bound every pair below by D - s.
            double centre_gap = 0.0;
            for (int k = 0; k < d; ++k)
                centre_gap = std::max(centre_gap, std::abs(curve.centers[a][k] - curve.centers[b][k]));
            if (centre_gap - curve.side >= best) continue;
            for (std::size_t i = 0; i < pts[a].size(); i += d)
                for (std::size_t j = 0; j < pts[b].size(); j += d) {
                    double dist = 0.0;
                    for (int k = 0; k < d; ++k) dist = std::max(dist, std::abs(pts[a][i + k] - pts[b][j + k]));
                    best = std::min(best, dist);
                }
        }
    const double mesh = 0.5 * curve.side / (samples - 1);
    return {best, best - mesh};
}

namespace {

std::vector<double> wrap_point(std::vector<double> p, double side) {
    for (double& x : p) {
        x = std::fmod(x, side);
        if (x < 0) x += side;
        if (x >= side) x -= side;
    }
    return p;
}

}  // namespace

WitnessReport plant_witness_probe(const GirgGraph& g, std::span<const double> center, double c1_prime,
                                  double region_side) {
    const ModelParams& p = g.params;
    const int d = p.d;
    const double torus = g.side();
    if (static_cast<int>(center.size()) != d) throw InvalidInput("probe centre has the wrong dimension");
    if (!(c1_prime > 0.0)) throw InvalidInput("probe volume constant must be positive");
    const double inner = std::pow(c1_prime * std::log(p.n), 1.0 / d);
    if (region_side <= 0.0) region_side = std::max(std::pow(p.n, 1.0 / (d * (p.tau - 1.0))), inner);
    if (region_side > torus || inner > torus) throw InvalidInput("probe region exceeds the torus");
    if (inner > region_side) throw InvalidInput("probe snake region exceeds the probe region");

    WitnessReport rep;
    rep.inner_side = inner;
    std::vector<double> origin(d);
    for (int k = 0; k < d; ++k) origin[k] = center[k] - inner / 2;

    // Finest grid keeping non-consecutive curve points 12 apart.
    for (int M = 2; inner / M >= 4.0; ++M) {
        const double s = inner / M;
        if (std::pow(static_cast<double>(M), d) > 1e5) break;
        if (min_nonconsecutive_gap(gray_curve(origin, M, s, d)).certified >= 12.0) {
            rep.M = M;
            rep.cube_side = s;
        }
    }
    if (rep.M == 0) {
        rep.first_violation = "no Gray grid with 12-separation fits the probe region";
        return rep;
    }
    const GrayCurve curve = gray_curve(origin, rep.M, rep.cube_side, d);

    for (double a = 0.0; a <= curve.length() + 1e-9; a += 2.0) {
        std::size_t cube = 0;
        rep.ball_centers.push_back(wrap_point(curve.point_at(a, &cube), torus));
        rep.ball_cube.push_back(cube);
    }

    const double w_lo = ipow(2.0, d), w_hi = ipow(3.0, d);
    std::vector<VertexId> candidates;
    for (const auto& v : g.vertices)
        if (v.weight >= w_lo && v.weight <= w_hi && torus_distance(v.pos, center, torus) <= inner / 2 + 1.0)
            candidates.push_back(v.id);

    auto note = [&](const std::string& why) {
        if (rep.first_violation.empty()) rep.first_violation = why;
    };
    std::vector<VertexId> chosen;
    for (std::size_t b = 0; b < rep.ball_centers.size(); ++b) {
        std::size_t count = 0;
        VertexId pick = 0;
        for (VertexId v : candidates)
            if (torus_distance(g.vertices[v].pos, rep.ball_centers[b], torus) <= 0.5) {
                if (!count++) pick = v;
            }
        rep.ball_counts.push_back(count);
        if (count == 0) note("ball " + std::to_string(b) + " is empty");
        if (count > 1) note("ball " + std::to_string(b) + " holds " + std::to_string(count) + " vertices");
        chosen.push_back(pick);
    }
    if (!rep.first_violation.empty()) return rep;
    rep.path = chosen;

    const std::unordered_set<VertexId> on_path(chosen.begin(), chosen.end());
    if (on_path.size() != chosen.size()) {
        note("two balls share a vertex");
        return rep;
    }
    for (std::size_t i = 0; i + 1 < chosen.size(); ++i)
        if (!g.graph.has_edge(chosen[i], chosen[i + 1])) {
            ++rep.broken_links;
            note("balls " + std::to_string(i) + " and " + std::to_string(i + 1) + " are not joined");
        }
    for (std::size_t i = 0; i < chosen.size(); ++i)
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
            const std::size_t gap = rep.ball_cube[j] > rep.ball_cube[i] ? rep.ball_cube[j] - rep.ball_cube[i]
                                                                        : rep.ball_cube[i] - rep.ball_cube[j];
            if (gap >= 2 && g.graph.has_edge(chosen[i], chosen[j])) {
                ++rep.shortcut_violations;
                note("shortcut between balls " + std::to_string(i) + " and " + std::to_string(j));
            }
        }
    for (std::size_t i = 0; i < chosen.size(); ++i)
        for (VertexId y : g.graph.neighbors(chosen[i]))
            if (!on_path.count(y)) {
                ++rep.external_attachments;
                note("vertex " + std::to_string(y) + " attaches to ball " + std::to_string(i));
            }
    if (!rep.first_violation.empty()) return rep;

    BfsWorkspace ws(g.size());
    for (VertexId v : chosen) rep.component_diameter = std::max(rep.component_diameter, ws.run(g.graph, v));
    rep.success = true;
    return rep;
}

std::optional<LowWeightComponent> scan_long_low_weight_component(const GirgGraph& g, double weight_cap) {
    if (weight_cap <= 0.0) weight_cap = ipow(3.0, g.params.d);
    const auto comps = components(g.graph);
    std::vector<std::uint8_t> low(comps.count(), 1);
    for (const auto& v : g.vertices)
        if (v.weight > weight_cap) low[comps.label[v.id]] = 0;
    std::vector<Distance> diameter(comps.count(), 0);
    BfsWorkspace ws(g.size());
    for (VertexId v = 0; v < g.size(); ++v) {
        const auto c = comps.label[v];
        if (low[c] && comps.sizes[c] > 1) diameter[c] = std::max(diameter[c], ws.run(g.graph, v));
    }
    std::optional<LowWeightComponent> best;
    for (std::uint32_t c = 0; c < comps.count(); ++c)
        if (low[c] && (!best || diameter[c] > best->diameter)) best = LowWeightComponent{c, comps.sizes[c], diameter[c]};
    return best;
}

}  // namespace tgirg
