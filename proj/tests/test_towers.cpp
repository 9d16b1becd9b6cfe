#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "tgirg/towers.hpp"

using namespace tgirg;

namespace {

GirgGraph hand_graph(int d, double n, std::vector<std::pair<std::vector<double>, double>> pts) {
    ModelParams p;
    p.d = d;
    p.n = n;
    std::vector<WeightedVertex> vs;
    for (auto& [pos, w] : pts) {
        WeightedVertex v;
        v.id = static_cast<std::uint32_t>(vs.size());
        v.pos = pos;
        v.weight = w;
        vs.push_back(std::move(v));
    }
    return build_edges_naive(std::move(vs), p);
}

ModelParams params(int d, double tau, double lambda, double n, std::uint64_t seed) {
    ModelParams p;
    p.d = d;
    p.tau = tau;
    p.lambda = lambda;
    p.n = n;
    p.seed = seed;
    return p;
}

// Side 16 split into level-0 cells of side 2; towers at cutoff 1 have side 4.
// Heavy vertices (weight 1.5, level 1) chain across [0, 12); three unit-weight
// vertices near 0 form a separate component of diameter 1.6.
GirgGraph stray_instance(bool split_heavy) {
    std::vector<std::pair<std::vector<double>, double>> pts = {
        {{3.5}, 1.5}, {{7.5}, 1.5}, {{9.5}, 1.5}, {{0.2}, 1.0}, {{1.0}, 1.0}, {{1.8}, 1.0}};
    if (!split_heavy) pts.push_back({{5.5}, 1.5});
    return hand_graph(1, 16, pts);
}

}  // namespace

TEST_CASE("tower scale") {
    TowerOptions o;
    auto s = tower_scale(2, o);
    CHECK(s.high_level == 0);
    CHECK(s.top_weight == doctest::Approx(2.0));
    CHECK(s.high_weight == 1.0);
    o.cutoff = 9;
    s = tower_scale(2, o);
    CHECK(s.high_level == 1);
    CHECK(s.eps == doctest::Approx(0.1));
    CHECK(s.top_weight == doctest::Approx(1024.0));
    CHECK(s.high_weight == doctest::Approx(2.0));
    CHECK(s.stray_diameter == doctest::Approx(16.0));
    o.cutoff = 6;
    s = tower_scale(2, o);
    CHECK(s.high_level == 0);
    CHECK(s.eps == 0.0);

    TowerOptions bad;
    bad.eps = 0.0;
    CHECK_THROWS_AS(tower_scale(2, bad), InvalidInput);
    bad.eps = 1.5;
    CHECK_THROWS_AS(tower_scale(2, bad), InvalidInput);
    bad = {};
    bad.cutoff = -1;
    CHECK_THROWS_AS(tower_scale(2, bad), InvalidInput);
    bad = {};
    bad.c3 = 0.0;
    CHECK_THROWS_AS(tower_scale(2, bad), InvalidInput);
}

TEST_CASE("towers tile the space") {
    const Tessellation t2(2, 3, 0.5);
    const auto at0 = towers(t2, 0);
    CHECK(at0.size() == t2.level_size(0));
    for (std::size_t i = 0; i < at0.size(); ++i) {
        const auto b = t2.decode(t2.at(0, {}) + static_cast<BoxIndex>(i));
        CHECK(at0[i].index == b.index);
    }
    CHECK(t2.coarsened(0).size() == t2.size());
    CHECK_THROWS_AS(towers(t2, 3), InvalidInput);
    CHECK_THROWS_AS(towers(t2, -1), InvalidInput);

    const Tessellation t1(1, 5, 0.5);
    const auto at2 = towers(t1, 2);
    REQUIRE(at2.size() == 8);
    const Tessellation coarse = t1.coarsened(2);
    std::map<BoxIndex, int> below;
    for (BoxIndex b = 0; b < t1.size(); ++b) {
        const BoxIndex e = element_of_box(t1, coarse, b);
        if (t1.level(b) <= 2) {
            CHECK(coarse.level(e) == 2);
            ++below[e];
        } else {
            CHECK(coarse.format(e) == t1.format(b));
        }
    }
    CHECK(below.size() == 8);
    for (const auto& [e, count] : below) CHECK(count == 7);
}

TEST_CASE("vertices map to towers or high boxes") {
    const Tessellation t(1, 5, 0.5);
    WeightedVertex low;
    low.pos = {5.3};
    low.weight = 2.5;
    WeightedVertex high = low;
    high.weight = 3.0;
    const Tessellation c = t.coarsened(2);
    CHECK(c.format(tower_of(low, t, 2)) == "L2:3");
    CHECK(c.format(tower_of(high, t, 2)) == "L3:2");

    const auto p = params(2, 2.5, 1.0, 1024, 4);
    const GirgGraph g = sample_girg(p);
    const Tessellation fine = Tessellation::build(p);
    for (int cutoff = 0; cutoff < fine.rho0(); ++cutoff) {
        const Tessellation coarse = fine.coarsened(cutoff);
        const double top = tower_scale(2, {cutoff, 0.1, 4.0}).top_weight;
        for (const auto& v : g.vertices) {
            const BoxIndex e = tower_of(v, fine, cutoff);
            CHECK(e == element_of_box(fine, coarse, fine.box_of(v)));
            if (v.weight >= top) CHECK(coarse.level(e) > cutoff);
            else CHECK(coarse.level(e) == cutoff);
        }
    }
}

TEST_CASE("empty F fails the first condition") {
    const GirgGraph g = hand_graph(2, 64, {});
    const Tessellation t(2, 5, 0.25);
    const auto rep = is_active_tower(t, g, {0, {3, 3}}, {});
    CHECK_FALSE(rep.high_boxes_active);
    CHECK_FALSE(rep.active());
    CHECK_FALSE(rep.inactive_box.empty());
}

TEST_CASE("dense instance is active") {
    const auto p = params(1, 2.5, 200.0, 64, 11);
    const GirgGraph g = sample_girg(p);
    const Tessellation t = Tessellation::build(p);
    const TowerEvaluator ev(t, g, {});
    for (const auto& rep : ev.all_reports()) CHECK(rep.active());
    const auto rate = tower_activity_rate(t, {g}, {0, 1, 2}, {});
    for (double r : rate) CHECK(r == 1.0);
}

TEST_CASE("stray component witness") {
    const Tessellation t(1, 3, 2.0);
    TowerOptions o;
    o.cutoff = 1;
    o.eps = 0.5;
    o.c3 = 1.0;
    const GirgGraph g = stray_instance(false);
    auto rep = is_active_tower(t, g, {1, {2}}, o);
    CHECK(rep.high_boxes_active);
    CHECK(rep.single_high_component);
    CHECK_FALSE(rep.small_stray_components);
    CHECK_FALSE(rep.active());
    CHECK(rep.stray_pair == std::pair<VertexId, VertexId>{3, 5});
    CHECK(rep.stray_distance == doctest::Approx(1.6));

    o.c3 = 2.0;
    rep = is_active_tower(t, g, {1, {2}}, o);
    CHECK(rep.active());

    rep = is_active_tower(t, stray_instance(true), {1, {2}}, o);
    CHECK(rep.high_boxes_active);
    CHECK_FALSE(rep.single_high_component);
    CHECK(rep.split_pair == std::pair<VertexId, VertexId>{0, 1});
}

TEST_CASE("activity at cutoff 0 matches the Poisson closed form") {
    // F is three level-0 cells within distance 1, so activity means all three are occupied.
    const double lambda = 8.0, tau = 2.5, d0 = 0.25;
    std::vector<GirgGraph> ensemble;
    for (std::uint64_t s = 0; s < 20; ++s) ensemble.push_back(sample_girg(params(1, tau, lambda, 1024, 100 + s)));
    const Tessellation t = Tessellation::build(ensemble.front().params);
    REQUIRE(t.d0() == d0);
    const double occupied = 1.0 - std::exp(-lambda * d0 * (1.0 - std::pow(2.0, -(tau - 1) / 2)));
    const double expected = std::pow(occupied, 3);
    const auto rate = tower_activity_rate(t, ensemble, {0}, {});
    CHECK(rate[0] == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("element graph adjacency") {
    for (int d = 1; d <= 2; ++d)
        for (int rho0 = 2; rho0 <= 4; ++rho0)
            for (int cutoff = 0; cutoff < rho0; ++cutoff) {
                const Tessellation c = Tessellation(d, rho0, 0.5).coarsened(cutoff);
                for (BoxIndex a = 0; a < c.size(); ++a)
                    for (BoxIndex b = 0; b < c.size(); ++b) {
                        CHECK(c.gplus_adjacent(a, b) == c.gplus_adjacent(b, a));
                        CHECK(c.b_adjacent(a, b) == c.b_adjacent(b, a));
                        if (c.b_adjacent(a, b)) CHECK(c.gplus_adjacent(a, b));
                    }
            }
}

TEST_CASE("reports are deterministic") {
    const auto p = params(2, 2.5, 4.0, 1024, 9);
    const GirgGraph g = sample_girg(p);
    const Tessellation t = Tessellation::build(p);
    TowerOptions o;
    o.cutoff = 2;
    const TowerEvaluator a(t, g, o), b(t, g, o);
    CHECK(a.element_activity() == b.element_activity());
    const auto ra = a.all_reports();
    const auto ids = towers(t, 2);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto rb = is_active_tower(t, g, ids[i], o);
        CHECK(ra[i].active() == rb.active());
        CHECK(ra[i].inactive_box == rb.inactive_box);
        CHECK(ra[i].split_pair == rb.split_pair);
        CHECK(ra[i].stray_pair == rb.stray_pair);
    }
}

TEST_CASE("coarse regions") {
    const auto p = params(2, 2.5, 4.0, 1024, 2);
    const GirgGraph g = sample_girg(p);
    const Tessellation t = Tessellation::build(p);

    const CoarseRegions at0(t, g, {});
    const RegionBuilder plain(t, at0.evaluator().element_activity());
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const VertexId u = rng() % g.size(), v = rng() % g.size();
        CHECK(at0.element_of(u) == t.box_of(g.vertices[u]));
        const Region a = at0.compute(at0.element_of(u), at0.element_of(v));
        const Region b = plain.compute(t.box_of(g.vertices[u]), t.box_of(g.vertices[v]), false);
        CHECK(a.w_set == b.w_set);
        CHECK(a.s_set == b.s_set);
    }

    TowerOptions o;
    o.cutoff = 2;
    const CoarseRegions cr(t, g, o);
    const RegionBuilder full(cr.coarse(), std::vector<std::uint8_t>(cr.coarse().size(), 1));
    for (int i = 0; i < 20; ++i) {
        const VertexId u = rng() % g.size(), v = rng() % g.size();
        const Region r = full.compute(cr.element_of(u), cr.element_of(v));
        CHECK(r.w_set == r.l_prime);
    }
}

TEST_CASE("edges leaving W cross a high-weight box of S") {
    const auto p = params(2, 2.5, 32.0, 64, 3);
    const GirgGraph g = sample_girg(p);
    const Tessellation t = Tessellation::build(p);
    const CoarseRegions cr(t, g, {});
    std::mt19937_64 rng(5);
    std::size_t edges = 0, bad = 0;
    for (int i = 0; i < 20; ++i) {
        const VertexId u = rng() % g.size(), v = rng() % g.size();
        const auto scan = scan_high_weight_crossings(cr, cr.compute(cr.element_of(u), cr.element_of(v)));
        edges += scan.edges;
        bad += scan.counterexamples;
    }
    CHECK(edges > 0);
    CHECK(bad == 0);
}
