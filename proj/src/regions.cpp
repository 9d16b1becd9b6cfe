#include "tgirg/regions.hpp"

#include <algorithm>
#include <ostream>

#include "tgirg/sampler.hpp"

namespace tgirg {

std::vector<BoxIndex> Region::hole(std::uint32_t k) const {
    std::vector<BoxIndex> out;
    for (BoxIndex b = 0; b < hole_label.size(); ++b)
        if (hole_label[b] == k) out.push_back(b);
    return out;
}

std::vector<BoxIndex> canonical_path(const Tessellation& tess, BoxIndex b1, BoxIndex b2) {
    std::vector<BoxIndex> left{b1}, right{b2};
    while (left.back() != right.back()) {
        const int l1 = tess.level(left.back()), l2 = tess.level(right.back());
        if (l1 <= l2) left.push_back(tess.parent(left.back()));
        if (l2 <= l1) right.push_back(tess.parent(right.back()));
    }
    right.pop_back();
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
}

RegionBuilder::RegionBuilder(const Tessellation& tess, std::vector<std::uint8_t> activity)
    : tess_(&tess), active_(std::move(activity)), component_(tess.size(), kNoHole) {
    if (active_.size() != tess.size()) throw InvalidInput("activity bitmap does not match the tessellation");
    comp_start_.push_back(0);
    std::vector<BoxIndex> nbrs;
    for (BoxIndex s = 0; s < tess.size(); ++s) {
        if (active_[s] || component_[s] != kNoHole) continue;
        const auto id = static_cast<std::uint32_t>(comp_start_.size() - 1);
        std::size_t head = comp_items_.size();
        component_[s] = id;
        comp_items_.push_back(s);
        while (head < comp_items_.size()) {
            tess.gplus_neighbors(comp_items_[head++], nbrs);
            for (BoxIndex x : nbrs)
                if (!active_[x] && component_[x] == kNoHole) {
                    component_[x] = id;
                    comp_items_.push_back(x);
                }
        }
        comp_start_.push_back(comp_items_.size());
    }
}

std::size_t RegionBuilder::largest_inactive_component() const {
    std::size_t best = 0;
    for (std::size_t c = 0; c + 1 < comp_start_.size(); ++c) best = std::max(best, comp_start_[c + 1] - comp_start_[c]);
    return best;
}

Region RegionBuilder::compute(BoxIndex b1, BoxIndex b2, bool with_holes) const {
    const Tessellation& tess = *tess_;
    Region r;
    r.source = b1;
    r.target = b2;
    r.canonical_path = canonical_path(tess, b1, b2);
    r.zone.assign(tess.size(), Zone::Outside);

    std::vector<BoxIndex> nbrs;
    auto add_inner = [&](BoxIndex b, std::vector<BoxIndex>& list) {
        if (r.zone[b] == Zone::Inner) return;
        r.zone[b] = Zone::Inner;
        list.push_back(b);
    };
    for (BoxIndex b : r.canonical_path) {
        add_inner(b, r.l_prime);
        tess.gplus_neighbors(b, nbrs);
        for (BoxIndex x : nbrs) add_inner(x, r.l_prime);
    }
    std::sort(r.l_prime.begin(), r.l_prime.end());

    std::vector<std::uint32_t> picked;
    auto pick = [&](BoxIndex b) {
        if (!active_[b]) picked.push_back(component_[b]);
    };
    for (BoxIndex b : r.l_prime) {
        pick(b);
        tess.gplus_neighbors(b, nbrs);
        for (BoxIndex x : nbrs) pick(x);
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());

    r.w_set = r.l_prime;
    for (std::uint32_t c : picked)
        for (std::size_t i = comp_start_[c]; i < comp_start_[c + 1]; ++i) add_inner(comp_items_[i], r.w_set);
    std::sort(r.w_set.begin(), r.w_set.end());

    for (BoxIndex b : r.w_set) {
        tess.gplus_neighbors(b, nbrs);
        for (BoxIndex x : nbrs)
            if (r.zone[x] == Zone::Outside) {
                r.zone[x] = Zone::Boundary;
                r.s_set.push_back(x);
            }
    }
    std::sort(r.s_set.begin(), r.s_set.end());

    if (with_holes) label_holes(tess, r);
    return r;
}

void label_holes(const Tessellation& tess, Region& r) {
    r.hole_label.assign(tess.size(), kNoHole);
    r.hole_count = 0;
    std::vector<BoxIndex> queue, nbrs;
    for (BoxIndex s = 0; s < tess.size(); ++s) {
        if (r.zone[s] == Zone::Inner || r.hole_label[s] != kNoHole) continue;
        const std::uint32_t k = r.hole_count++;
        r.hole_label[s] = k;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            tess.b_neighbors(queue[head], nbrs);
            for (BoxIndex x : nbrs)
                if (r.zone[x] != Zone::Inner && r.hole_label[x] == kNoHole) {
                    r.hole_label[x] = k;
                    queue.push_back(x);
                }
        }
    }
}

Region compute_region(const Tessellation& tess, const GirgGraph& g, BoxIndex b1, BoxIndex b2) {
    return RegionBuilder(tess, BoxOccupancy(tess, g).activity()).compute(b1, b2);
}

std::vector<BoxIndex> visible_boundary(const Tessellation& tess, std::span<const BoxIndex> c_set, BoxIndex x) {
    if (c_set.empty()) throw InvalidInput("visible boundary of an empty set is undefined");
    std::vector<std::uint8_t> in_c(tess.size(), 0), seen(tess.size(), 0);
    for (BoxIndex b : c_set) in_c.at(b) = 1;
    if (in_c.at(x)) throw InvalidInput("viewpoint lies inside the set");

    std::vector<BoxIndex> queue{x}, nbrs, out;
    seen[x] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const BoxIndex b = queue[head];
        tess.gplus_neighbors(b, nbrs);
        if (std::any_of(nbrs.begin(), nbrs.end(), [&](BoxIndex y) { return in_c[y] != 0; })) out.push_back(b);
        tess.b_neighbors(b, nbrs);
        for (BoxIndex y : nbrs)
            if (!in_c[y] && !seen[y]) {
                seen[y] = 1;
                queue.push_back(y);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool induces_connected(const Tessellation& tess, std::span<const BoxIndex> boxes, bool gplus) {
    if (boxes.empty()) return true;
    std::vector<std::uint8_t> member(tess.size(), 0);
    for (BoxIndex b : boxes) member[b] = 1;
    std::vector<BoxIndex> queue{boxes.front()}, nbrs;
    member[boxes.front()] = 2;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        if (gplus)
            tess.gplus_neighbors(queue[head], nbrs);
        else
            tess.b_neighbors(queue[head], nbrs);
        for (BoxIndex y : nbrs)
            if (member[y] == 1) {
                member[y] = 2;
                queue.push_back(y);
            }
    }
    return std::all_of(boxes.begin(), boxes.end(), [&](BoxIndex b) { return member[b] == 2; });
}

bool verify_boundary_connected(const Tessellation& tess, std::span<const BoxIndex> c_set, BoxIndex x) {
    return induces_connected(tess, visible_boundary(tess, c_set, x), false);
}

namespace {

/// Facet steps moving `from` onto `to` one axis at a time (same level, Chebyshev offset <= 1).
void walk_coordinates(const Tessellation& tess, int level, Tessellation::Coords from, const Tessellation::Coords& to,
                      std::vector<BoxIndex>& path) {
    for (int k = 0; k < tess.dim(); ++k) {
        if (from[k] == to[k]) continue;
        from[k] = to[k];
        path.push_back(tess.at(level, from));
    }
}

}  // namespace

std::vector<BoxIndex> local_shortcut_path(const Tessellation& tess, BoxIndex b1, BoxIndex b2) {
    if (!tess.gplus_adjacent(b1, b2)) throw InvalidInput("local shortcut requires a G+ edge");
    if (tess.b_adjacent(b1, b2)) return {b1, b2};

    const int l1 = tess.level(b1), l2 = tess.level(b2);
    std::vector<BoxIndex> path{b1};
    if (l1 == l2) {
        walk_coordinates(tess, l1, tess.coords(b1), tess.coords(b2), path);
        return path;
    }
    const bool up = l1 < l2;
    const BoxIndex lo = up ? b1 : b2, hi = up ? b2 : b1;
    const int level = tess.level(lo);
    // The child of hi closest to lo: clamp each coordinate into hi's pair of children.
    const auto cl = tess.coords(lo), ch = tess.coords(hi);
    const auto P = static_cast<std::int64_t>(tess.per_axis(level));
    Tessellation::Coords child = cl;
    for (int k = 0; k < tess.dim(); ++k) {
        const std::int64_t m = ((cl[k] - 2 * ch[k]) % P + P) % P;
        if (m == 2)
            child[k] = 2 * ch[k] + 1;
        else if (m == P - 1)
            child[k] = 2 * ch[k];
    }
    std::vector<BoxIndex> tail{lo};
    walk_coordinates(tess, level, cl, child, tail);
    tail.push_back(hi);
    if (up) return tail;
    return {tail.rbegin(), tail.rend()};
}

void write_region_dump(std::ostream& out, const Tessellation& tess, const Region& r) {
    std::vector<std::uint8_t> tag(tess.size(), 0);
    for (BoxIndex b : r.w_set) tag[b] = 3;
    for (BoxIndex b : r.l_prime) tag[b] = 2;
    for (BoxIndex b : r.canonical_path) tag[b] = 1;
    for (BoxIndex b : r.s_set) tag[b] = 4;
    static constexpr const char* kTags[] = {"", "L", "LPRIME", "W", "S"};
    for (BoxIndex b = 0; b < tess.size(); ++b)
        if (tag[b]) out << tess.format(b) << ' ' << kTags[tag[b]] << '\n';
    for (BoxIndex b = 0; b < r.hole_label.size(); ++b)
        if (r.hole_label[b] != kNoHole) out << tess.format(b) << " HOLE:" << r.hole_label[b] << '\n';
}

std::vector<BoxIndex> random_gplus_connected_set(const Tessellation& tess, std::size_t size, Rng& rng) {
    if (size == 0 || tess.size() == 0) return {};
    std::vector<BoxIndex> members{static_cast<BoxIndex>(std::uniform_int_distribution<std::size_t>(0, tess.size() - 1)(rng))};
    std::vector<std::uint8_t> in(tess.size(), 0);
    in[members[0]] = 1;
    std::vector<BoxIndex> nb;
    for (std::size_t attempts = 0; members.size() < size && attempts < 64 * size; ++attempts) {
        const BoxIndex b = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        tess.gplus_neighbors(b, nb);
        if (nb.empty()) continue;
        const BoxIndex c = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
        if (in[c]) continue;
        in[c] = 1;
        members.push_back(c);
    }
    std::sort(members.begin(), members.end());
    return members;
}

}  // namespace tgirg
