#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mws/graph.hpp"
#include "mws/mutex_watershed.hpp"
#include "mws/oracle.hpp"

namespace mws {

// (Z, Y, X) extents; voxels are indexed row-major with x fastest.
struct Shape {
    std::size_t z = 1, y = 1, x = 1;

    std::size_t size() const noexcept { return z * y * x; }
    std::size_t index(std::size_t zz, std::size_t yy, std::size_t xx) const noexcept { return (zz * y + yy) * x + xx; }
    std::array<std::size_t, 3> coords(std::size_t i) const noexcept { return {i / (y * x), (i / x) % y, i % x}; }
    std::array<std::size_t, 3> extents() const noexcept { return {z, y, x}; }

    friend bool operator==(const Shape&, const Shape&) = default;
};

struct Offset {
    std::array<int, 3> delta{0, 0, 0}; // (dz, dy, dx)
    Polarity polarity = Polarity::attractive;
    std::array<int, 3> stride{1, 1, 1}; // (sz, sy, sx)

    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Ordered neighbourhood definition; entry c corresponds to affinity
/// channel c.
class OffsetPattern {
public:
    OffsetPattern() = default;

    explicit OffsetPattern(std::vector<Offset> entries) : entries_(std::move(entries)) {
        std::set<std::tuple<int, int, int, Polarity>> seen;
        for (const Offset& o : entries_) {
            if (o.delta == std::array<int, 3>{0, 0, 0}) throw InputError("pattern: zero offset");
            for (int s : o.stride)
                if (s < 1) throw InputError("pattern: strides must be >= 1");
            if (!seen.insert({o.delta[0], o.delta[1], o.delta[2], o.polarity}).second)
                throw InputError("pattern: duplicate offset with the same polarity");
        }
    }

    std::span<const Offset> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const Offset& operator[](std::size_t c) const { return entries_.at(c); }

    std::size_t count(Polarity p) const {
        return static_cast<std::size_t>(
            std::count_if(entries_.begin(), entries_.end(), [p](const Offset& o) { return o.polarity == p; }));
    }

    friend bool operator==(const OffsetPattern&, const OffsetPattern&) = default;

private:
    std::vector<Offset> entries_;
};

/// In-plane pattern: the two direct (attractive) neighbours, a sparse ring
/// of eight repulsive offsets at radius ~9 and four long-range ones at
/// distance 27. Repulsive entries use stride 2 in y and x.
///
/// The ring diagonals are (6,7)-type rotations rather than (6,6): with an
/// even stride, v+(6,6) and v-(-6,-6) would produce the same voxel pair from
/// two channels.
inline OffsetPattern default_pattern_2d() {
    constexpr std::array<int, 3> s{1, 2, 2};
    std::vector<Offset> e{
        {{0, -1, 0}, Polarity::attractive, {1, 1, 1}},
        {{0, 0, -1}, Polarity::attractive, {1, 1, 1}},
        {{0, -9, 0}, Polarity::repulsive, s},
        {{0, 0, -9}, Polarity::repulsive, s},
        {{0, 9, 0}, Polarity::repulsive, s},
        {{0, 0, 9}, Polarity::repulsive, s},
        {{0, 6, 7}, Polarity::repulsive, s},
        {{0, -7, 6}, Polarity::repulsive, s},
        {{0, -6, -7}, Polarity::repulsive, s},
        {{0, 7, -6}, Polarity::repulsive, s},
        {{0, -27, 0}, Polarity::repulsive, s},
        {{0, 0, -27}, Polarity::repulsive, s},
        {{0, 27, 0}, Polarity::repulsive, s},
        {{0, 0, 27}, Polarity::repulsive, s},
    };
    return OffsetPattern(std::move(e));
}

/// default_pattern_2d in every plane, plus the direct neighbour in the
/// previous slice (attractive) and its four in-plane neighbours there
/// (repulsive).
inline OffsetPattern default_pattern_3d() {
    const OffsetPattern plane = default_pattern_2d();
    std::vector<Offset> e(plane.entries().begin(), plane.entries().end());
    constexpr std::array<int, 3> s{1, 2, 2};
    e.push_back({{-1, 0, 0}, Polarity::attractive, {1, 1, 1}});
    e.push_back({{-1, -1, 0}, Polarity::repulsive, s});
    e.push_back({{-1, 1, 0}, Polarity::repulsive, s});
    e.push_back({{-1, 0, -1}, Polarity::repulsive, s});
    e.push_back({{-1, 0, 1}, Polarity::repulsive, s});
    return OffsetPattern(std::move(e));
}

/// Channels-first, C-order affinities in [0, 1].
struct AffinityVolume {
    Shape shape;
    std::size_t channels = 0;
    std::vector<float> data;

    AffinityVolume() = default;
    AffinityVolume(Shape s, std::size_t c) : shape(s), channels(c), data(s.size() * c, 0.0f) {}

    float& at(std::size_t c, std::size_t voxel) { return data[c * shape.size() + voxel]; }
    float at(std::size_t c, std::size_t voxel) const { return data[c * shape.size() + voxel]; }

    void validate() const {
        if (data.size() != shape.size() * channels) throw InputError("affinity volume: data size mismatch");
        for (float v : data)
            if (!(v >= 0.0f && v <= 1.0f)) throw InputError("affinity volume: value outside [0, 1]");
    }

    friend bool operator==(const AffinityVolume&, const AffinityVolume&) = default;
};

struct LabelVolume {
    Shape shape;
    std::vector<std::uint32_t> labels;

    LabelVolume() = default;
    explicit LabelVolume(Shape s) : shape(s), labels(s.size(), 0) {}

    friend bool operator==(const LabelVolume&, const LabelVolume&) = default;
};

namespace detail {

inline void check_channels(const AffinityVolume& vol, const OffsetPattern& pattern) {
    if (vol.channels != pattern.size())
        throw InputError("affinity volume has " + std::to_string(vol.channels) + " channels, pattern has " +
                         std::to_string(pattern.size()));
    if (vol.data.size() != vol.shape.size() * vol.channels) throw InputError("affinity volume: data size mismatch");
}

// Calls fn(voxel, partner) for every voxel on the offset's stride lattice
// whose partner lies inside the volume, in row-major order.
template <class Fn>
void for_each_offset_pair(const Shape& shape, const Offset& o, Fn&& fn) {
    const auto ext = shape.extents();
    std::array<std::size_t, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        const long long n = static_cast<long long>(ext[a]);
        const long long d = o.delta[a];
        lo[a] = static_cast<std::size_t>(std::max(0LL, -d));
        hi[a] = static_cast<std::size_t>(std::max(0LL, std::min(n, n - d)));
        // first lattice point (coordinate ≡ 0 mod stride) at or after lo
        const std::size_t s = static_cast<std::size_t>(o.stride[a]);
        lo[a] = (lo[a] + s - 1) / s * s;
    }
    const long long step = (static_cast<long long>(o.delta[0]) * static_cast<long long>(shape.y) + o.delta[1]) *
                               static_cast<long long>(shape.x) +
                           o.delta[2];
    for (std::size_t z = lo[0]; z < hi[0]; z += static_cast<std::size_t>(o.stride[0]))
        for (std::size_t y = lo[1]; y < hi[1]; y += static_cast<std::size_t>(o.stride[1]))
            for (std::size_t x = lo[2]; x < hi[2]; x += static_cast<std::size_t>(o.stride[2])) {
                const std::size_t v = shape.index(z, y, x);
                fn(v, static_cast<std::size_t>(static_cast<long long>(v) + step));
            }
}

} // namespace detail

/// Number of edges a pattern entry instantiates: per axis, the count of
/// lattice coordinates c ≡ 0 (mod stride) with both c and c + delta in range.
inline std::size_t offset_edge_count(const Shape& shape, const Offset& o) {
    const auto ext = shape.extents();
    std::size_t total = 1;
    for (int a = 0; a < 3; ++a) {
        const long long n = static_cast<long long>(ext[a]);
        const long long d = o.delta[a];
        const long long lo = std::max(0LL, -d);
        const long long hi = std::min(n, n - d); // exclusive
        if (hi <= lo) return 0;
        const long long s = o.stride[a];
        const long long first = (lo + s - 1) / s * s;
        total *= first < hi ? static_cast<std::size_t>((hi - 1 - first) / s + 1) : 0;
    }
    return total;
}

/// Vertices are voxels (row-major index); edges are enumerated channel by
/// channel, voxels row-major within a channel.
struct GridGraph {
    Shape shape;
    SignedGraph graph;
};

inline GridGraph graph_from_affinities(const AffinityVolume& vol, const OffsetPattern& pattern) {
    detail::check_channels(vol, pattern);
    std::size_t total = 0;
    for (const Offset& o : pattern.entries()) total += offset_edge_count(vol.shape, o);
    std::vector<Edge> edges;
    edges.reserve(total);
    for (std::size_t c = 0; c < pattern.size(); ++c) {
        const Offset& o = pattern[c];
        detail::for_each_offset_pair(vol.shape, o, [&](std::size_t v, std::size_t partner) {
            edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(partner),
                             static_cast<double>(vol.at(c, v)), o.polarity});
        });
    }
    try {
        return {vol.shape, SignedGraph(vol.shape.size(), edges)};
    } catch (const InputError& e) {
        throw InputError(std::string("pattern instantiates an invalid graph: ") + e.what());
    }
}

/// Ground-truth affinities: attractive channels are 1 where the pair shares
/// a label, repulsive channels 1 where labels differ. Positions whose partner
/// falls outside the volume are 0 in every channel and are never read.
inline AffinityVolume affinities_from_labels(const LabelVolume& labels, const OffsetPattern& pattern) {
    if (labels.labels.size() != labels.shape.size()) throw InputError("label volume: data size mismatch");
    AffinityVolume vol(labels.shape, pattern.size());
    for (std::size_t c = 0; c < pattern.size(); ++c) {
        Offset dense = pattern[c];
        dense.stride = {1, 1, 1};
        const bool attractive = dense.polarity == Polarity::attractive;
        detail::for_each_offset_pair(labels.shape, dense, [&](std::size_t v, std::size_t partner) {
            const bool same = labels.labels[v] == labels.labels[partner];
            vol.at(c, v) = (same == attractive) ? 1.0f : 0.0f;
        });
    }
    return vol;
}

/// Mutex Watershed on the grid graph; labels are the canonical clustering
/// (numbered in raster order of first appearance, starting at 0).
inline LabelVolume segment(const AffinityVolume& vol, const OffsetPattern& pattern, SolveStats* stats = nullptr) {
    const GridGraph gg = graph_from_affinities(vol, pattern);
    SolveOptions opts;
    opts.record_stats = stats != nullptr;
    SolveResult r = solve_efficient(gg.graph, opts);
    if (stats && r.stats) *stats = *r.stats;
    LabelVolume out(vol.shape);
    out.labels = std::move(r.clustering.labels);
    return out;
}

/// THRESH baseline. Boundary map b(v) = max over attractive channels of
/// (1 - affinity), taken only over channels whose partner is inside the
/// volume (0 if there is none). Foreground {b < t} is split into connected
/// components along the attractive offsets and numbered from 1 in raster
/// order; boundary voxels get label 0.
inline LabelVolume threshold_baseline(const AffinityVolume& vol, const OffsetPattern& pattern, double t) {
    detail::check_channels(vol, pattern);
    if (pattern.count(Polarity::attractive) == 0) throw InputError("threshold baseline needs attractive channels");
    const std::size_t n = vol.shape.size();
    std::vector<double> boundary(n, 0.0);
    for (std::size_t c = 0; c < pattern.size(); ++c) {
        Offset o = pattern[c];
        if (o.polarity != Polarity::attractive) continue;
        o.stride = {1, 1, 1};
        detail::for_each_offset_pair(vol.shape, o, [&](std::size_t v, std::size_t) {
            boundary[v] = std::max(boundary[v], 1.0 - static_cast<double>(vol.at(c, v)));
        });
    }
    std::vector<VertexId> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<VertexId>(i);
    auto find = [&](VertexId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Offset& o0 : pattern.entries()) {
        if (o0.polarity != Polarity::attractive) continue;
        Offset o = o0;
        o.stride = {1, 1, 1};
        detail::for_each_offset_pair(vol.shape, o, [&](std::size_t v, std::size_t w) {
            if (boundary[v] < t && boundary[w] < t) parent[find(static_cast<VertexId>(v))] = find(static_cast<VertexId>(w));
        });
    }
    LabelVolume out(vol.shape);
    std::vector<std::uint32_t> label_of_root(n, 0);
    std::uint32_t next = 1;
    for (std::size_t v = 0; v < n; ++v) {
        if (!(boundary[v] < t)) continue;
        auto& l = label_of_root[find(static_cast<VertexId>(v))];
        if (l == 0) l = next++;
        out.labels[v] = l;
    }
    return out;
}

inline constexpr double kAffinityClamp = 1e-6;

/// Multicut costs s_e = log(w/(1-w)) for attractive and log((1-w)/w) for
/// repulsive edges, affinities clamped to [1e-6, 1-1e-6]. Indexed like the
/// edges of graph_from_affinities(vol, pattern).
inline EdgeCosts multicut_costs(const AffinityVolume& vol, const OffsetPattern& pattern) {
    detail::check_channels(vol, pattern);
    EdgeCosts out;
    for (std::size_t c = 0; c < pattern.size(); ++c) {
        const Offset& o = pattern[c];
        detail::for_each_offset_pair(vol.shape, o, [&](std::size_t v, std::size_t) {
            const double w = std::clamp(static_cast<double>(vol.at(c, v)), kAffinityClamp, 1.0 - kAffinityClamp);
            if (o.polarity == Polarity::attractive)
                out.attractive.push_back(std::log(w / (1.0 - w)));
            else
                out.repulsive.push_back(std::log((1.0 - w) / w));
        });
    }
    return out;
}

} // namespace mws
