#include "tgirg/towers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "tgirg/parallel.hpp"
#include "tgirg/router.hpp"

namespace tgirg {

TowerScale tower_scale(int d, const TowerOptions& opt) {
    if (opt.cutoff < 0) throw InvalidInput("tower cutoff must be non-negative");
    if (!(opt.eps > 0.0) || opt.eps > 1.0) throw InvalidInput("tower eps must lie in (0, 1]");
    if (!(opt.c3 > 0.0)) throw InvalidInput("tower c3 must be positive");
    TowerScale s;
    s.cutoff = opt.cutoff;
    s.high_level = static_cast<int>(std::floor((opt.cutoff + 1) * opt.eps + 1e-12));
    s.eps = static_cast<double>(s.high_level) / (opt.cutoff + 1);
    s.top_weight = std::exp2(0.5 * d * (opt.cutoff + 1));
    s.high_weight = std::exp2(0.5 * d * s.high_level);
    s.stray_diameter = std::pow(s.high_weight, opt.c3);
    return s;
}

std::vector<TowerId> towers(const Tessellation& tess, int cutoff) {
    if (cutoff < 0 || cutoff >= tess.rho0()) throw InvalidInput("tower cutoff must lie in [0, rho0)");
    std::vector<TowerId> out;
    const std::size_t count = tess.level_size(cutoff);
    for (std::size_t i = 0; i < count; ++i) {
        const auto b = tess.decode(static_cast<BoxIndex>(tess.at(cutoff, {}) + i));
        out.push_back({cutoff, b.index});
    }
    return out;
}

BoxIndex tower_of(const WeightedVertex& v, const Tessellation& tess, int cutoff) {
    return tess.coarsened(cutoff).box_of(v);
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

TowerEvaluator::TowerEvaluator(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt)
    : tess_(&tess), g_(&g), coarse_(tess.coarsened(opt.cutoff)), scale_(tower_scale(tess.dim(), opt)), occ_(tess, g) {
    if (tess.floor_level() != 0) throw InvalidInput("towers are built on a full tessellation");
}

TowerActivityReport TowerEvaluator::evaluate(const TowerId& t) const {
    if (t.cutoff != scale_.cutoff || static_cast<int>(t.index.size()) != tess_->dim())
        throw InvalidInput("tower id does not match the evaluator");
    return evaluate(coarse_.encode({t.cutoff, t.index}));
}

TowerActivityReport TowerEvaluator::evaluate(BoxIndex element) const {
    const int cutoff = scale_.cutoff;
    if (coarse_.level(element) != cutoff) throw InvalidInput("element is not a tower");
    const int d = tess_->dim();
    const auto centre = coarse_.coords(element);
    TowerActivityReport rep;

    std::vector<BoxIndex> cells;
    Tessellation::Coords c{};
    const std::size_t neighbourhood = static_cast<std::size_t>(ipow(3.0, d));
    for (std::size_t code = 0; code < neighbourhood; ++code) {
        std::size_t rest = code;
        for (int k = 0; k < d; ++k) {
            c[k] = centre[k] + static_cast<std::int64_t>(rest % 3) - 1;
            rest /= 3;
        }
        cells.push_back(tess_->at(cutoff, c));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    std::vector<VertexId> members;
    std::vector<BoxIndex> frontier = cells, next;
    for (int level = cutoff; level >= 0; --level) {
        for (BoxIndex b : frontier) {
            const auto in_box = occ_.vertices_in(b);
            if (in_box.empty() && level >= scale_.high_level && rep.high_boxes_active) {
                rep.high_boxes_active = false;
                rep.inactive_box = tess_->format(b);
            }
            members.insert(members.end(), in_box.begin(), in_box.end());
            if (level > 0)
                for (BoxIndex ch : tess_->children(b)) next.push_back(ch);
        }
        frontier.swap(next);
        next.clear();
    }
    std::sort(members.begin(), members.end());

    UnionFind uf(members.size());
    for (std::uint32_t i = 0; i < members.size(); ++i)
        for (VertexId y : g_->graph.neighbors(members[i])) {
            if (y <= members[i]) continue;
            const auto it = std::lower_bound(members.begin(), members.end(), y);
            if (it != members.end() && *it == y) uf.unite(i, static_cast<std::uint32_t>(it - members.begin()));
        }

    constexpr std::uint32_t kNone = 0xffffffffu;
    std::uint32_t main = kNone;
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        if (g_->vertices[members[i]].weight < scale_.high_weight) continue;
        const std::uint32_t root = uf.find(i);
        if (main == kNone) {
            main = root;
            rep.split_pair.first = members[i];
        } else if (root != main && rep.single_high_component) {
            rep.single_high_component = false;
            rep.split_pair.second = members[i];
        }
    }
    if (rep.single_high_component) rep.split_pair = {0, 0};

    std::vector<std::vector<std::uint32_t>> groups(members.size());
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        const std::uint32_t root = uf.find(i);
        if (root != main) groups[root].push_back(i);
    }
    const double side = tess_->side();
    for (const auto& group : groups) {
        for (std::size_t a = 0; a < group.size() && rep.small_stray_components; ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                const auto& va = g_->vertices[members[group[a]]];
                const auto& vb = g_->vertices[members[group[b]]];
                const double dist = torus_distance(va.pos, vb.pos, side);
                if (dist > scale_.stray_diameter) {
                    rep.small_stray_components = false;
                    rep.stray_pair = {va.id, vb.id};
                    rep.stray_distance = dist;
                    break;
                }
            }
        if (!rep.small_stray_components) break;
    }
    return rep;
}

std::vector<TowerActivityReport> TowerEvaluator::all_reports() const {
    const int cutoff = scale_.cutoff;
    const std::size_t count = coarse_.level_size(cutoff);
    const BoxIndex first = coarse_.at(cutoff, {});
    std::vector<TowerActivityReport> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = evaluate(static_cast<BoxIndex>(first + i)); });
    return out;
}

std::vector<std::uint8_t> TowerEvaluator::element_activity() const {
    std::vector<std::uint8_t> act(coarse_.size(), 0);
    const auto reports = all_reports();
    const BoxIndex first = coarse_.at(scale_.cutoff, {});
    for (std::size_t i = 0; i < reports.size(); ++i) act[first + i] = reports[i].active();
    for (BoxIndex e = static_cast<BoxIndex>(first + reports.size()); e < coarse_.size(); ++e) {
        const int level = coarse_.level(e);
        const BoxIndex fine = level == coarse_.rho0() ? tess_->top() : tess_->at(level, coarse_.coords(e));
        act[e] = occ_.is_active(fine);
    }
    return act;
}

TowerActivityReport is_active_tower(const Tessellation& tess, const GirgGraph& g, const TowerId& t,
                                    const TowerOptions& opt) {
    TowerOptions o = opt;
    o.cutoff = t.cutoff;
    return TowerEvaluator(tess, g, o).evaluate(t);
}

std::vector<double> tower_activity_rate(const Tessellation& tess, const std::vector<GirgGraph>& ensemble,
                                        const std::vector<int>& levels, const TowerOptions& opt) {
    std::vector<double> out;
    for (int level : levels) {
        TowerOptions o = opt;
        o.cutoff = level;
        std::size_t active = 0, total = 0;
        for (const auto& g : ensemble) {
            for (const auto& rep : TowerEvaluator(tess, g, o).all_reports()) {
                active += rep.active();
                ++total;
            }
        }
        out.push_back(total ? static_cast<double>(active) / static_cast<double>(total) : 0.0);
    }
    return out;
}

CoarseRegions::CoarseRegions(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt)
    : g_(&g), evaluator_(tess, g, opt), builder_(evaluator_.coarse(), evaluator_.element_activity()) {}

BoxIndex CoarseRegions::element_of(VertexId v) const { return evaluator_.coarse().box_of(g_->vertices.at(v)); }

Region compute_region_coarse(const Tessellation& tess, const GirgGraph& g, const TowerOptions& opt, BoxIndex x1,
                             BoxIndex x2) {
    const CoarseRegions cr(tess, g, opt);
    return cr.compute(x1, x2, true);
}

void write_tower_rows(std::ostream& out, const TowerEvaluator& ev) {
    const auto reports = ev.all_reports();
    const auto& coarse = ev.coarse();
    const BoxIndex first = coarse.at(ev.scale().cutoff, {});
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto id = coarse.decode(static_cast<BoxIndex>(first + i));
        out << id.level << ",\"";
        for (std::size_t k = 0; k < id.index.size(); ++k) out << (k ? "," : "") << id.index[k];
        const auto& r = reports[i];
        out << "\"," << r.high_boxes_active << ',' << r.single_high_component << ',' << r.small_stray_components << ','
            << r.active() << '\n';
    }
}

BoxIndex element_of_box(const Tessellation& fine, const Tessellation& coarse, BoxIndex b) {
    if (fine.is_top(b)) return coarse.top();
    const int level = fine.level(b), cutoff = coarse.floor_level();
    auto c = fine.coords(b);
    if (level >= cutoff) return coarse.at(level, c);
    for (int k = 0; k < fine.dim(); ++k) c[k] >>= (cutoff - level);
    return coarse.at(cutoff, c);
}

HighWeightCrossingScan scan_high_weight_crossings(const CoarseRegions& cr, const Region& r) {
    const Tessellation& fine = cr.evaluator().fine();
    const Tessellation& coarse = cr.coarse();
    const GirgGraph& g = cr.graph();
    const int high_level = cr.evaluator().scale().high_level;
    HighWeightCrossingScan scan;
    for (VertexId x = 0; x < g.size(); ++x) {
        if (!r.in_w(cr.element_of(x))) continue;
        for (VertexId y : g.graph.neighbors(x)) {
            if (r.in_ws(cr.element_of(y))) continue;
            ++scan.edges;
            const auto& vx = g.vertices[x];
            const auto& vy = g.vertices[y];
            bool crossed = false;
            for (BoxIndex b : segment_shadow(fine, vx.pos, vx.weight, vy.pos, vy.weight))
                if (fine.level(b) >= high_level && r.in_s(element_of_box(fine, coarse, b))) {
                    crossed = true;
                    break;
                }
            if (!crossed && scan.counterexamples++ == 0) scan.first = {x, y};
        }
    }
    return scan;
}

}  // namespace tgirg
