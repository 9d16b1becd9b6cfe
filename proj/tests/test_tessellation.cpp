#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tgirg/sampler.hpp"
#include "tgirg/tessellation.hpp"

using namespace tgirg;

namespace {

ModelParams params(int d, double n, double d0 = 0.5) {
    ModelParams p;
    p.d = d;
    p.n = n;
    p.d0_target = d0;
    return p;
}

BoxIndex box(const Tessellation& t, int level, std::vector<int> idx) { return t.encode({level, std::move(idx)}); }

// Closed arcs [a, a + la] and [b, b + lb] on a circle of length L: overlap length and contact.
struct ArcRelation {
    double overlap = 0.0;
    bool touch = false;
};

ArcRelation arcs(double a, double la, double b, double lb, double L) {
    ArcRelation r;
    for (double shift : {-L, 0.0, L}) {
        const double lo = std::max(a, b + shift), hi = std::min(a + la, b + lb + shift);
        if (lo <= hi + 1e-12) r.touch = true;
        r.overlap += std::max(0.0, hi - lo);
    }
    return r;
}

// Dimension of the intersection of two box closures in position x weight space, or -1.
int closure_dimension(const Tessellation& t, BoxIndex a, BoxIndex b) {
    const int la = t.level(a), lb = t.level(b);
    if (std::abs(la - lb) > 1) return -1;
    const int weight_dim = la == lb ? 1 : 0;
    int geo = 0;
    for (int k = 0; k < t.dim(); ++k) {
        const double sa = t.is_top(a) ? t.side() : t.box_side(la), sb = t.is_top(b) ? t.side() : t.box_side(lb);
        const double ca = t.is_top(a) ? 0.0 : t.coords(a)[k] * sa, cb = t.is_top(b) ? 0.0 : t.coords(b)[k] * sb;
        const ArcRelation r = arcs(ca, sa, cb, sb, t.side());
        if (!r.touch) return -1;
        geo += r.overlap > 1e-9;
    }
    return geo + weight_dim;
}

bool contains(const std::vector<BoxIndex>& v, BoxIndex b) { return std::find(v.begin(), v.end(), b) != v.end(); }

void exhaustive_adjacency(int d, int rho0) {
    const Tessellation t(d, rho0, 1.0, 0);
    for (BoxIndex a = 0; a < t.size(); ++a) {
        const auto bn = t.b_neighbors(a), gn = t.gplus_neighbors(a);
        REQUIRE(std::is_sorted(gn.begin(), gn.end()));
        for (BoxIndex b = 0; b < t.size(); ++b) {
            if (a == b) continue;
            const int dim = closure_dimension(t, a, b);
            INFO(t.format(a), " ", t.format(b));
            REQUIRE(contains(bn, b) == (dim == d));
            REQUIRE(contains(gn, b) == (dim >= 0));
            REQUIRE(t.b_adjacent(a, b) == (dim == d));
            REQUIRE(t.gplus_adjacent(a, b) == (dim >= 0));
            if (contains(bn, b)) REQUIRE(contains(gn, b));
        }
    }
}

}  // namespace

TEST_CASE("finest side and level count") {
    const auto a = Tessellation::build(params(1, 16));
    CHECK(a.rho0() == 5);
    CHECK(a.d0() == doctest::Approx(0.5));
    const auto b = Tessellation::build(params(2, 16));
    CHECK(b.rho0() == 3);
    CHECK(b.d0() == doctest::Approx(0.5));
    const auto c = Tessellation::build(params(1, 2));
    CHECK(c.rho0() == 2);
    CHECK(c.d0() == doctest::Approx(0.5));
    CHECK(Tessellation::build(params(2, 1024), 0.25).rho0() == 7);
    CHECK_THROWS_AS(Tessellation::build(params(1, 1), 1.0), InvalidInput);
    for (int level = 0; level <= b.rho0(); ++level)
        CHECK(b.level_size(level) == (level == b.rho0() ? 1u : std::size_t{1} << (2 * (b.rho0() - level))));
}

TEST_CASE("box of a vertex") {
    const auto t = Tessellation::build(params(1, 16));
    const BoxIndex b = t.box_of(std::vector{3.3}, 1.5);
    CHECK(t.decode(b) == BoxId{1, {4}});
    CHECK(t.format(b) == "L1:4");
    CHECK(t.parse("L1:4") == b);
    CHECK(t.level(t.box_of(std::vector{3.3}, 1.0)) == 0);
    CHECK(t.is_top(t.box_of(std::vector{3.3}, 6.0)));
    CHECK(t.format(t.top()) == "TOP");
    CHECK(t.level(t.box_of(std::vector{3.3}, 5.6)) == 4);
}

TEST_CASE("parents and children") {
    const Tessellation t1(1, 5, 0.5);
    CHECK(t1.parent(box(t1, 0, {3})) == box(t1, 1, {2}));
    const auto ch = t1.children(box(t1, 1, {2}));
    CHECK(ch == std::vector<BoxIndex>{box(t1, 0, {3}), box(t1, 0, {4})});
    CHECK(t1.parent(box(t1, 4, {2})) == t1.top());
    CHECK_THROWS_AS(t1.parent(t1.top()), InvalidInput);
    const Tessellation t2(2, 3, 0.5);
    CHECK(t2.parent(box(t2, 0, {1, 2})) == box(t2, 1, {1, 1}));
    CHECK(t2.children(t2.top()).size() == 4);
    CHECK(t2.children(box(t2, 2, {2, 1})).size() == 4);
    CHECK(t2.children(box(t2, 0, {2, 1})).empty());
}

TEST_CASE("B neighbors") {
    const Tessellation t(1, 5, 0.5);
    auto nb = t.b_neighbors(box(t, 1, {1}));
    std::vector<BoxIndex> expect{box(t, 1, {2}), box(t, 1, {16}), box(t, 2, {1}), box(t, 0, {1}), box(t, 0, {2})};
    std::sort(expect.begin(), expect.end());
    std::sort(nb.begin(), nb.end());
    CHECK(nb == expect);
    const Tessellation t2(2, 3, 0.5);
    auto top = t2.b_neighbors(t2.top());
    std::sort(top.begin(), top.end());
    CHECK(top == t2.children(t2.top()));
    // Two boxes per axis: both facet directions reach the same box once.
    const auto wrap = t.b_neighbors(box(t, 4, {1}));
    CHECK(std::count(wrap.begin(), wrap.end(), box(t, 4, {2})) == 1);
    CHECK_FALSE(contains(wrap, box(t, 4, {1})));
}

TEST_CASE("G+ neighbors") {
    const Tessellation t(2, 4, 1.0);
    const BoxIndex b = box(t, 1, {3, 3});
    const auto nb = t.gplus_neighbors(b);
    CHECK(std::count_if(nb.begin(), nb.end(), [&](BoxIndex x) { return t.level(x) == 1; }) == 8);
    for (BoxIndex x = 0; x < t.size(); ++x)
        if (std::abs(t.level(x) - t.level(b)) >= 2) CHECK_FALSE(t.gplus_adjacent(b, x));
    const Tessellation t1(1, 3, 1.0);
    for (BoxIndex a = 0; a < t1.size(); ++a) {
        const auto g = t1.gplus_neighbors(a);
        for (BoxIndex x : t1.b_neighbors(a)) CHECK(contains(g, x));
    }
    CHECK(t.max_gplus_degree() >= 8);
}

TEST_CASE("adjacency matches closure intersections") {
    for (int rho0 = 1; rho0 <= 4; ++rho0) {
        exhaustive_adjacency(1, rho0);
        exhaustive_adjacency(2, rho0);
    }
    exhaustive_adjacency(3, 2);
    exhaustive_adjacency(3, 3);
}

TEST_CASE("gamma generators") {
    const Tessellation t(1, 3, 1.0);
    const auto gens = gamma_generators(t);
    const auto has = [&](std::vector<BoxIndex> c) {
        for (auto g : gens) {
            std::sort(g.begin(), g.end());
            std::sort(c.begin(), c.end());
            if (g == c) return true;
        }
        return false;
    };
    CHECK(has({box(t, 0, {1}), box(t, 1, {1}), box(t, 0, {2})}));
    CHECK(has({box(t, 0, {2}), box(t, 1, {1}), box(t, 1, {2}), box(t, 0, {3})}));
    for (int d = 1; d <= 3; ++d)
        for (int rho0 = 1; rho0 <= 3; ++rho0) {
            const Tessellation s(d, rho0, 1.0);
            std::size_t same_level = 0;
            for (const auto& [a, b] : b_edges(s)) same_level += s.level(a) == s.level(b);
            const auto g = gamma_generators(s);
            CHECK(g.size() == same_level);
            for (const auto& c : g) CHECK(check_chordal_in_gplus(s, c));
        }
    const Tessellation big(2, 4, 1.0);
    CHECK_FALSE(check_chordal_in_gplus(big, std::vector{box(big, 0, {1, 1}), box(big, 0, {5, 1}), box(big, 0, {5, 5}),
                                                         box(big, 0, {1, 5})}));
}

TEST_CASE("cycle space generation") {
    CHECK(cycle_space_generation_check(Tessellation(1, 3, 1.0)));
    CHECK(cycle_space_generation_check(Tessellation(2, 2, 1.0)));
    CHECK_THROWS_AS(cycle_space_generation_check(Tessellation(2, 4, 1.0)), SizeLimitExceeded);
    // A path has no cycles; a triangle is spanned by itself and not by nothing.
    CHECK(fundamental_cycles_in_span(3, {{0, 1}, {1, 2}}, {kNoParent, 0, 1}, {}));
    CHECK(fundamental_cycles_in_span(3, {{0, 1}, {1, 2}, {0, 2}}, {kNoParent, 0, 0}, {{0, 1, 2}}));
    CHECK_FALSE(fundamental_cycles_in_span(3, {{0, 1}, {1, 2}, {0, 2}}, {kNoParent, 0, 0}, {}));
}

TEST_CASE("partition of sampled vertices") {
    auto p = params(2, 4096, 0.25);
    p.seed = 4;
    Rng rng(p.seed);
    GirgGraph g;
    g.params = p;
    g.vertices = sample_vertices(p, rng);
    const auto t = Tessellation::build(p);
    std::vector<std::size_t> per_box(t.size(), 0);
    for (const auto& v : g.vertices) {
        const BoxIndex b = t.box_of(v);
        REQUIRE(b < t.size());
        ++per_box[b];
        const int level = t.level(b);
        REQUIRE(v.weight >= t.weight_floor(level));
        if (!t.is_top(b)) {
            REQUIRE(v.weight < t.weight_ceiling(level));
            for (int k = 0; k < 2; ++k) REQUIRE(std::floor(v.pos[k] / t.box_side(level)) == t.coords(b)[k]);
        }
    }
    BoxOccupancy occ(t, g);
    std::size_t total = 0;
    for (BoxIndex b = 0; b < t.size(); ++b) {
        REQUIRE(occ.vertices_in(b).size() == per_box[b]);
        REQUIRE(occ.is_active(b) == (per_box[b] > 0));
        total += occ.vertices_in(b).size();
    }
    CHECK(total == g.size());
    const auto act = occ.activity();
    CHECK(is_active(occ.box_of_vertex(0), g, t));
    CHECK(std::count(act.begin(), act.end(), 1) == std::count_if(per_box.begin(), per_box.end(), [](auto c) { return c > 0; }));
}

TEST_CASE("vertices of adjacent boxes form a clique") {
    auto p = params(2, 2048, 0.25);
    p.tau = 2.5;
    p.lambda = 8;
    p.seed = 12;
    const GirgGraph g = sample_girg(p);
    const auto t = Tessellation::build(p);
    const BoxOccupancy occ(t, g);
    std::size_t pairs = 0;
    std::vector<BoxIndex> nb;
    for (BoxIndex a = 0; a < t.size() && pairs < 20000; ++a) {
        if (!occ.is_active(a)) continue;
        t.gplus_neighbors(a, nb);
        for (BoxIndex b : nb)
            if (b > a && occ.is_active(b)) {
                const VertexId x = occ.vertices_in(a)[0], y = occ.vertices_in(b)[0];
                REQUIRE(g.graph.has_edge(x, y));
                ++pairs;
            }
    }
    CHECK(pairs >= 10000);
}
