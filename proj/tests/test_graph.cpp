#include <doctest.h>

#include <numeric>
#include <random>

#include "tgirg/errors.hpp"
#include "tgirg/graph.hpp"

using namespace tgirg;

namespace {

Graph cycle(std::size_t n) {
    std::vector<std::pair<VertexId, VertexId>> e;
    for (VertexId i = 0; i < n; ++i) e.emplace_back(i, static_cast<VertexId>((i + 1) % n));
    return Graph(n, e);
}

Graph path(std::size_t n) {
    std::vector<std::pair<VertexId, VertexId>> e;
    for (VertexId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, e);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

TEST_CASE("adjacency is sorted, symmetric and simple") {
    const Graph g(4, {{2, 1}, {1, 2}, {0, 3}, {3, 3}, {0, 1}});
    CHECK(g.num_edges() == 3);
    CHECK(g.neighbors(1).size() == 2);
    CHECK(g.neighbors(1)[0] == 0);
    CHECK(g.neighbors(1)[1] == 2);
    CHECK(g.has_edge(3, 0));
    CHECK_FALSE(g.has_edge(3, 3));
    CHECK_THROWS_AS(Graph(2, {{0, 2}}), InvalidInput);
}

TEST_CASE("bfs distances") {
    CHECK(bfs_distances(path(3), 0) == std::vector<Distance>{0, 1, 2});
    const Graph isolated(3, {{1, 2}});
    const auto d = bfs_distances(isolated, 0);
    CHECK(d[1] == kUnreachable);
    CHECK(d[2] == kUnreachable);
    for (VertexId s = 0; s < 5; ++s) {
        const auto c = bfs_distances(cycle(5), s);
        CHECK(*std::max_element(c.begin(), c.end()) == 2);
    }
    CHECK_THROWS_AS(bfs_distances(path(3), 3), InvalidInput);
}

TEST_CASE("components") {
    const auto two = components(Graph(4, {{0, 1}, {2, 3}}));
    CHECK(two.count() == 2);
    CHECK(two.sizes[0] == 2);
    CHECK(two.sizes[1] == 2);
    CHECK(components(Graph(0, {})).count() == 0);
    const auto k4 = components(Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    CHECK(k4.count() == 1);
    CHECK(k4.sizes[0] == 4);
}

TEST_CASE("graph power distance") {
    CHECK(power_distance(path(7), 0, 6, 3) == 2);
    CHECK(power_distance(path(8), 0, 7, 3) == 3);
    CHECK(power_distance(path(8), 4, 4, 3) == 0);
    CHECK(power_distance(Graph(2, {}), 0, 1, 3) == kUnreachable);
    CHECK_THROWS_AS(power_distance(path(3), 0, 1, 0), InvalidInput);
}

TEST_CASE("shortest path and bounded search") {
    const auto p = shortest_path(cycle(6), 0, 3);
    REQUIRE(p.size() == 4);
    CHECK(p.front() == 0);
    CHECK(p.back() == 3);
    CHECK(p[1] == 1);
    BfsWorkspace ws(8);
    CHECK(ws.bounded_distance(path(8), 0, 3, 3) == 3);
    CHECK(ws.bounded_distance(path(8), 0, 4, 3) == kUnreachable);
}

TEST_CASE("random graphs agree with union-find and metric axioms") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + rng() % 60;
        const std::size_t m = rng() % (2 * n);
        std::vector<std::pair<VertexId, VertexId>> e;
        UnionFind uf(n);
        for (std::size_t i = 0; i < m; ++i) {
            const auto a = static_cast<VertexId>(rng() % n), b = static_cast<VertexId>(rng() % n);
            e.emplace_back(a, b);
            uf.unite(a, b);
        }
        const Graph g(n, e);
        const auto lab = components(g);
        std::size_t total = 0;
        for (auto s : lab.sizes) total += s;
        REQUIRE(total == n);
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = 0; b < n; ++b)
                REQUIRE((lab.label[a] == lab.label[b]) == (uf.find(a) == uf.find(b)));
        const auto u = static_cast<VertexId>(rng() % n), v = static_cast<VertexId>(rng() % n),
                   w = static_cast<VertexId>(rng() % n);
        const auto du = bfs_distances(g, u), dv = bfs_distances(g, v);
        REQUIRE(du[v] == dv[u]);
        if (du[v] != kUnreachable && dv[w] != kUnreachable) REQUIRE(du[w] <= du[v] + dv[w]);
    }
}
