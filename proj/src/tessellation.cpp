#include "tgirg/tessellation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include "tgirg/sampler.hpp"

namespace tgirg {
namespace {

std::int64_t wrap(std::int64_t c, std::int64_t period) { return ((c % period) + period) % period; }

/// Closure of fine cell `fine` (unit length) meets coarse cell [coarse*ratio, (coarse+1)*ratio]
/// on a circle of `period` fine cells.
bool touches(std::int64_t fine, std::int64_t coarse, std::int64_t ratio, std::int64_t period) {
    const std::int64_t m = wrap(fine - coarse * ratio, period);
    return m <= ratio || m == period - 1;
}

void sort_unique(std::vector<BoxIndex>& v, BoxIndex exclude) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::erase(v, exclude);
}

}  // namespace

Tessellation::Tessellation(int d, int rho0, double d0, int floor_level)
    : d_(d), rho0_(rho0), floor_(floor_level), d0_(d0), side_(std::ldexp(d0, rho0)) {
    if (d < 1 || d > kMaxTessellationDim) throw InvalidInput("tessellation dimension must lie in [1, 8]");
    if (rho0 < 1) throw InvalidInput("torus too small for the requested box side (rho0 < 1)");
    if (!(d0 > 0.0)) throw InvalidInput("D0 must be positive");
    if (floor_level < 0 || floor_level >= rho0) throw InvalidInput("floor level must lie in [0, rho0)");
    if (static_cast<double>(d) * rho0 > 31.0) throw InvalidInput("tessellation too large for 32-bit box indices");
    offsets_.push_back(0);
    for (int l = floor_; l <= rho0_; ++l) offsets_.push_back(offsets_.back() + level_size(l));
    if (offsets_.back() >= std::numeric_limits<BoxIndex>::max()) throw InvalidInput("tessellation too large");
}

Tessellation Tessellation::build(const ModelParams& params) {
    params.validate();
    return build(params, params.d0_target);
}

Tessellation Tessellation::build(const ModelParams& params, double d0_target) {
    if (!(d0_target > 0.0)) throw InvalidInput("d0_target must be positive");
    const double side = params.side();
    int rho0 = 0;
    while (std::ldexp(side, -rho0) > d0_target) ++rho0;
    if (rho0 < 1) throw InvalidInput("torus too small for the requested box side (rho0 < 1)");
    return Tessellation(params.d, rho0, std::ldexp(side, -rho0));
}

Tessellation Tessellation::coarsened(int cutoff) const {
    if (cutoff < 0 || cutoff >= rho0_) throw InvalidInput("tower cutoff must lie in [0, rho0)");
    return Tessellation(d_, rho0_, d0_, cutoff);
}

double Tessellation::box_side(int level) const { return std::ldexp(d0_, level); }

double Tessellation::weight_floor(int level) const {
    if (level <= floor_) return 1.0;
    return std::exp2(0.5 * d_ * level);
}

double Tessellation::weight_ceiling(int level) const {
    if (level >= rho0_) return std::numeric_limits<double>::infinity();
    return std::exp2(0.5 * d_ * (level + 1));
}

std::size_t Tessellation::level_size(int level) const {
    if (level >= rho0_) return 1;
    return std::size_t{1} << (d_ * (rho0_ - level));
}

int Tessellation::level(BoxIndex b) const {
    if (b >= size()) throw InvalidInput("box index out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), static_cast<std::size_t>(b));
    return floor_ + static_cast<int>(it - offsets_.begin()) - 1;
}

Tessellation::Coords Tessellation::coords(BoxIndex b) const {
    const int l = level(b);
    if (l == rho0_) throw InvalidInput("TOP has no coordinates");
    Coords c{};
    std::size_t rest = b - offsets_[l - floor_];
    const std::size_t P = per_axis(l);
    for (int k = 0; k < d_; ++k) {
        c[k] = static_cast<std::int64_t>(rest % P);
        rest /= P;
    }
    return c;
}

BoxIndex Tessellation::at(int level, const Coords& c) const {
    if (level == rho0_) return top();
    const auto P = static_cast<std::int64_t>(per_axis(level));
    std::size_t idx = 0;
    for (int k = d_ - 1; k >= 0; --k) idx = idx * P + static_cast<std::size_t>(wrap(c[k], P));
    return static_cast<BoxIndex>(offsets_[level - floor_] + idx);
}

BoxIndex Tessellation::encode(const BoxId& id) const {
    if (id.is_top()) {
        if (id.level != rho0_) throw InvalidInput("TOP must carry level rho0");
        return top();
    }
    if (id.level < floor_ || id.level >= rho0_ || static_cast<int>(id.index.size()) != d_)
        throw InvalidInput("box id level or dimension out of range");
    Coords c{};
    const auto P = static_cast<int>(per_axis(id.level));
    for (int k = 0; k < d_; ++k) {
        if (id.index[k] < 1 || id.index[k] > P) throw InvalidInput("box index out of range for its level");
        c[k] = id.index[k] - 1;
    }
    return at(id.level, c);
}

BoxId Tessellation::decode(BoxIndex b) const {
    BoxId id;
    id.level = level(b);
    if (id.level == rho0_) return id;
    const auto c = coords(b);
    for (int k = 0; k < d_; ++k) id.index.push_back(static_cast<int>(c[k]) + 1);
    return id;
}

std::string Tessellation::format(BoxIndex b) const {
    const auto id = decode(b);
    if (id.is_top()) return "TOP";
    std::string s = "L" + std::to_string(id.level) + ":";
    for (int k = 0; k < d_; ++k) {
        if (k) s += ',';
        s += std::to_string(id.index[k]);
    }
    return s;
}

BoxIndex Tessellation::parse(std::string_view text) const {
    if (text == "TOP") return top();
    auto fail = [&] { return InvalidInput("malformed box id '" + std::string(text) + "'"); };
    if (text.size() < 3 || text[0] != 'L') throw fail();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw fail();
    auto number = [&](std::string_view part) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size()) throw fail();
        return v;
    };
    BoxId id;
    id.level = number(text.substr(1, colon - 1));
    auto rest = text.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        id.index.push_back(number(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return encode(id);
}

int Tessellation::weight_level(double w) const {
    const auto raw = std::floor(2.0 * std::log2(w) / d_);
    const int l = raw >= rho0_ ? rho0_ : static_cast<int>(raw);
    return std::max(l, floor_);
}

BoxIndex Tessellation::box_of(std::span<const double> pos, double weight) const {
    if (static_cast<int>(pos.size()) != d_) throw InvalidInput("box_of: dimension mismatch");
    const int l = weight_level(weight);
    if (l == rho0_) return top();
    const double D = box_side(l);
    const auto P = static_cast<std::int64_t>(per_axis(l));
    Coords c{};
    for (int k = 0; k < d_; ++k) {
        auto v = static_cast<std::int64_t>(std::floor(pos[k] / D));
        c[k] = std::clamp<std::int64_t>(v, 0, P - 1);
    }
    return at(l, c);
}

BoxIndex Tessellation::parent(BoxIndex b) const {
    const int l = level(b);
    if (l == rho0_) throw InvalidInput("TOP has no parent");
    if (l + 1 == rho0_) return top();
    auto c = coords(b);
    for (int k = 0; k < d_; ++k) c[k] /= 2;
    return at(l + 1, c);
}

std::vector<BoxIndex> Tessellation::children(BoxIndex b) const {
    const int l = level(b);
    std::vector<BoxIndex> out;
    if (l == floor_) return out;
    if (l == rho0_) {
        for (std::size_t i = 0; i < level_size(l - 1); ++i)
            out.push_back(static_cast<BoxIndex>(offsets_[l - 1 - floor_] + i));
        return out;
    }
    const auto base = coords(b);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d_); ++mask) {
        Coords c{};
        for (int k = 0; k < d_; ++k) c[k] = 2 * base[k] + static_cast<std::int64_t>((mask >> k) & 1);
        out.push_back(at(l - 1, c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class Emit>
void Tessellation::product(int level, const std::array<std::vector<std::int64_t>, kMaxTessellationDim>& choices,
                           Emit&& emit) const {
    std::array<std::size_t, kMaxTessellationDim> pick{};
    Coords c{};
    while (true) {
        for (int k = 0; k < d_; ++k) c[k] = choices[k][pick[k]];
        emit(at(level, c));
        int k = 0;
        while (k < d_ && ++pick[k] == choices[k].size()) pick[k++] = 0;
        if (k == d_) return;
    }
}

void Tessellation::gplus_neighbors(BoxIndex b, std::vector<BoxIndex>& out) const {
    out.clear();
    const int l = level(b);
    if (l == rho0_) {
        if (rho0_ - 1 >= floor_)
            for (std::size_t i = 0; i < level_size(rho0_ - 1); ++i)
                out.push_back(static_cast<BoxIndex>(offsets_[rho0_ - 1 - floor_] + i));
        return;
    }
    const auto c = coords(b);
    const auto P = static_cast<std::int64_t>(per_axis(l));
    std::array<std::vector<std::int64_t>, kMaxTessellationDim> choices;
    auto emit = [&](BoxIndex x) { out.push_back(x); };

    for (int k = 0; k < d_; ++k) choices[k] = {wrap(c[k] - 1, P), c[k], wrap(c[k] + 1, P)};
    product(l, choices, emit);

    if (l + 1 == rho0_) {
        out.push_back(top());
    } else {
        const std::int64_t Pc = P / 2;
        for (int k = 0; k < d_; ++k) {
            choices[k].clear();
            for (std::int64_t j = c[k] / 2 - 1; j <= c[k] / 2 + 1; ++j)
                if (touches(c[k], wrap(j, Pc), 2, P)) choices[k].push_back(wrap(j, Pc));
        }
        product(l + 1, choices, emit);
    }

    if (l > floor_) {
        const std::int64_t Pf = P * 2;
        for (int k = 0; k < d_; ++k) {
            choices[k].clear();
            for (std::int64_t j = 2 * c[k] - 1; j <= 2 * c[k] + 2; ++j) choices[k].push_back(wrap(j, Pf));
        }
        product(l - 1, choices, emit);
    }
    sort_unique(out, b);
}

std::vector<BoxIndex> Tessellation::gplus_neighbors(BoxIndex b) const {
    std::vector<BoxIndex> out;
    gplus_neighbors(b, out);
    return out;
}

void Tessellation::b_neighbors(BoxIndex b, std::vector<BoxIndex>& out) const {
    out = children(b);
    const int l = level(b);
    if (l == rho0_) return;
    out.push_back(parent(b));
    const auto c = coords(b);
    const auto P = static_cast<std::int64_t>(per_axis(l));
    for (int k = 0; k < d_; ++k)
        for (std::int64_t step : {-1, 1}) {
            auto n = c;
            n[k] = wrap(c[k] + step, P);
            out.push_back(at(l, n));
        }
    sort_unique(out, b);
}

std::vector<BoxIndex> Tessellation::b_neighbors(BoxIndex b) const {
    std::vector<BoxIndex> out;
    b_neighbors(b, out);
    return out;
}

bool Tessellation::b_adjacent(BoxIndex a, BoxIndex b) const {
    if (a == b) return false;
    const int la = level(a), lb = level(b);
    if (la != lb) {
        if (la < lb) return lb - la == 1 && parent(a) == b;
        return la - lb == 1 && parent(b) == a;
    }
    if (la == rho0_) return false;
    const auto ca = coords(a), cb = coords(b);
    const auto P = static_cast<std::int64_t>(per_axis(la));
    int differing = 0;
    for (int k = 0; k < d_; ++k) {
        if (ca[k] == cb[k]) continue;
        const auto m = wrap(ca[k] - cb[k], P);
        if (m != 1 && m != P - 1) return false;
        ++differing;
    }
    return differing == 1;
}

bool Tessellation::gplus_adjacent(BoxIndex a, BoxIndex b) const {
    if (a == b) return false;
    int la = level(a), lb = level(b);
    if (la > lb) {
        std::swap(a, b);
        std::swap(la, lb);
    }
    if (lb - la > 1) return false;
    if (lb == rho0_) return true;
    const auto ca = coords(a), cb = coords(b);
    const auto P = static_cast<std::int64_t>(per_axis(la));
    const std::int64_t ratio = std::int64_t{1} << (lb - la);
    for (int k = 0; k < d_; ++k)
        if (!touches(ca[k], cb[k], ratio, P)) return false;
    return true;
}

std::size_t Tessellation::max_gplus_degree() const {
    std::size_t best = 0;
    std::vector<BoxIndex> buf;
    for (int l = floor_; l <= rho0_; ++l) {
        gplus_neighbors(static_cast<BoxIndex>(offsets_[l - floor_]), buf);
        best = std::max(best, buf.size());
    }
    return best;
}

std::vector<std::pair<BoxIndex, BoxIndex>> b_edges(const Tessellation& tess) {
    std::vector<std::pair<BoxIndex, BoxIndex>> out;
    std::vector<BoxIndex> buf;
    for (BoxIndex b = 0; b < tess.size(); ++b) {
        tess.b_neighbors(b, buf);
        for (BoxIndex x : buf)
            if (b < x) out.emplace_back(b, x);
    }
    return out;
}

std::vector<std::vector<BoxIndex>> gamma_generators(const Tessellation& tess) {
    std::vector<std::vector<BoxIndex>> out;
    for (const auto& [a, b] : b_edges(tess)) {
        if (tess.level(a) != tess.level(b)) continue;
        const BoxIndex pa = tess.parent(a), pb = tess.parent(b);
        if (pa == pb)
            out.push_back({a, pa, b});
        else
            out.push_back({a, pa, pb, b});
    }
    return out;
}

bool check_chordal_in_gplus(const Tessellation& tess, std::span<const BoxIndex> cycle) {
    for (std::size_t i = 0; i < cycle.size(); ++i)
        for (std::size_t j = i + 1; j < cycle.size(); ++j)
            if (cycle[i] != cycle[j] && !tess.gplus_adjacent(cycle[i], cycle[j])) return false;
    return true;
}

bool fundamental_cycles_in_span(std::size_t num_nodes, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                const std::vector<std::uint32_t>& tree_parent,
                                const std::vector<std::vector<std::uint32_t>>& generators) {
    using Bits = std::vector<std::uint64_t>;
    const std::size_t words = (edges.size() + 63) / 64;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> edge_index;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [a, b] = edges[i];
        edge_index[{std::min(a, b), std::max(a, b)}] = i;
    }
    auto flip = [&](Bits& bits, std::uint32_t a, std::uint32_t b) {
        const auto it = edge_index.find({std::min(a, b), std::max(a, b)});
        if (it == edge_index.end()) throw InvalidInput("cycle uses an edge outside the graph");
        bits[it->second / 64] ^= std::uint64_t{1} << (it->second % 64);
    };

    // Row-reduced basis keyed by pivot bit.
    std::vector<std::pair<std::size_t, Bits>> basis;
    auto pivot_of = [&](const Bits& bits) -> std::size_t {
        for (std::size_t w = 0; w < words; ++w)
            if (bits[w]) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits[w]));
        return SIZE_MAX;
    };
    auto reduce = [&](Bits bits) {
        for (const auto& [pivot, row] : basis)
            if ((bits[pivot / 64] >> (pivot % 64)) & 1)
                for (std::size_t w = 0; w < words; ++w) bits[w] ^= row[w];
        return bits;
    };
    for (const auto& cycle : generators) {
        Bits bits(words, 0);
        for (std::size_t i = 0; i < cycle.size(); ++i) flip(bits, cycle[i], cycle[(i + 1) % cycle.size()]);
        bits = reduce(std::move(bits));
        const auto pivot = pivot_of(bits);
        if (pivot == SIZE_MAX) continue;
        for (auto& [p, row] : basis)
            if ((row[pivot / 64] >> (pivot % 64)) & 1)
                for (std::size_t w = 0; w < words; ++w) row[w] ^= bits[w];
        basis.emplace_back(pivot, std::move(bits));
    }

    auto depth = [&](std::uint32_t v) {
        std::size_t k = 0;
        while (tree_parent[v] != kNoParent) {
            v = tree_parent[v];
            ++k;
        }
        return k;
    };
    if (tree_parent.size() != num_nodes) throw InvalidInput("tree_parent size mismatch");
    for (const auto& [a, b] : edges) {
        if (tree_parent[a] == b || tree_parent[b] == a) continue;
        Bits bits(words, 0);
        flip(bits, a, b);
        std::uint32_t x = a, y = b;
        std::size_t dx = depth(x), dy = depth(y);
        while (x != y) {
            if (dx >= dy) {
                if (tree_parent[x] == kNoParent) return false;  // different trees: not a cycle
                flip(bits, x, tree_parent[x]);
                x = tree_parent[x];
                --dx;
            } else {
                flip(bits, y, tree_parent[y]);
                y = tree_parent[y];
                --dy;
            }
        }
        if (pivot_of(reduce(std::move(bits))) != SIZE_MAX) return false;
    }
    return true;
}

bool cycle_space_generation_check(const Tessellation& tess) {
    if (tess.size() > 200) throw SizeLimitExceeded("cycle-space check limited to 200 boxes");
    std::vector<std::uint32_t> parent(tess.size(), kNoParent);
    for (BoxIndex b = 0; b < tess.size(); ++b)
        if (!tess.is_top(b)) parent[b] = tess.parent(b);
    return fundamental_cycles_in_span(tess.size(), b_edges(tess), parent, gamma_generators(tess));
}

BoxOccupancy::BoxOccupancy(const Tessellation& tess, const GirgGraph& g) : box_of_(g.size()), start_(tess.size() + 1, 0) {
    for (const auto& v : g.vertices) {
        box_of_[v.id] = tess.box_of(v);
        ++start_[box_of_[v.id] + 1];
    }
    for (std::size_t b = 0; b < tess.size(); ++b) start_[b + 1] += start_[b];
    items_.resize(g.size());
    std::vector<std::size_t> cursor(start_.begin(), start_.end() - 1);
    for (VertexId v = 0; v < g.size(); ++v) items_[cursor[box_of_[v]]++] = v;
}

std::vector<std::uint8_t> BoxOccupancy::activity() const {
    std::vector<std::uint8_t> out(start_.size() - 1);
    for (std::size_t b = 0; b + 1 < start_.size(); ++b) out[b] = start_[b + 1] > start_[b];
    return out;
}

bool is_active(BoxIndex b, const GirgGraph& g, const Tessellation& tess) {
    return std::any_of(g.vertices.begin(), g.vertices.end(), [&](const auto& v) { return tess.box_of(v) == b; });
}

}  // namespace tgirg
