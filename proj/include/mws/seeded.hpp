#pragma once

#include <algorithm>
#include <istream>
#include <numeric>
#include <string>
#include <vector>

#include "mws/graph.hpp"
#include "mws/graph_io.hpp"
#include "mws/mutex_union_find.hpp"
#include "mws/mutex_watershed.hpp"

namespace mws {

class SeedSet {
public:
    SeedSet(std::vector<VertexId> seeds, std::size_t num_vertices) : seeds_(std::move(seeds)) {
        if (seeds_.empty()) throw InputError("seed set is empty");
        for (VertexId s : seeds_)
            if (s >= num_vertices) throw InputError("seed " + std::to_string(s) + " out of range");
        std::vector<VertexId> sorted = seeds_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InputError("duplicate seed");
    }

    std::span<const VertexId> seeds() const noexcept { return seeds_; }
    std::size_t size() const noexcept { return seeds_.size(); }

private:
    std::vector<VertexId> seeds_;
};

// One vertex id per line; '#' comments allowed.
inline SeedSet read_seeds(std::istream& in, std::size_t num_vertices) {
    std::vector<VertexId> seeds;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::strip_comment(raw);
        if (line.empty()) continue;
        std::uint64_t v = 0;
        if (!detail::parse_number(line, v)) throw ParseError(line_no, "expected a vertex id");
        if (v >= num_vertices) throw ParseError(line_no, "seed out of range");
        seeds.push_back(static_cast<VertexId>(v));
    }
    return SeedSet(std::move(seeds), num_vertices);
}

namespace detail {
inline void require_attractive_only(const SignedGraph& g) {
    if (g.num_repulsive() != 0) throw InputError("seeded watershed takes a purely attractive graph");
}
} // namespace detail

/// Seeded watershed as a mutex sweep: every pair of seeds starts out
/// mutually exclusive (a tier above all finite weights), then attractive
/// edges are swept in descending order.
inline Clustering seeded_mws(const SignedGraph& g, const SeedSet& seeds) {
    detail::require_attractive_only(g);
    MutexUnionFind uf(g.num_vertices());
    const auto s = seeds.seeds();
    EdgeId pair_id = 0;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) uf.add_mutex(s[a], s[b], pair_id++);

    for (EdgeRef ref : sort_edges(g)) {
        const Edge& e = g.edge(ref);
        const VertexId ru = uf.find(e.u), rv = uf.find(e.v);
        if (ru != rv && !uf.roots_mutex(ru, rv)) uf.merge_roots(ru, rv);
    }
    std::vector<VertexId> roots(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) roots[v] = uf.find(v);
    return Clustering::canonical(roots);
}

/// Classical construction: an auxiliary vertex tied to every seed by
/// infinitely attractive edges, a Kruskal maximum spanning tree, and the
/// auxiliary edges removed again.
inline Clustering seeded_msf_reference(const SignedGraph& g, const SeedSet& seeds) {
    detail::require_attractive_only(g);
    const std::size_t n = g.num_vertices();
    const VertexId aux = static_cast<VertexId>(n);

    std::vector<VertexId> parent(n + 1);
    std::iota(parent.begin(), parent.end(), VertexId{0});
    auto find = [&](VertexId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    // infinite tier: always in the tree, never creates a cycle (star)
    for (VertexId s : seeds.seeds()) parent[find(s)] = find(aux);

    std::vector<EdgeId> by_weight(g.num_attractive());
    std::iota(by_weight.begin(), by_weight.end(), EdgeId{0});
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](EdgeId a, EdgeId b) {
        return g.attractive_edges()[a].weight > g.attractive_edges()[b].weight;
    });

    std::vector<EdgeId> tree;
    for (EdgeId id : by_weight) {
        const Edge& e = g.attractive_edges()[id];
        const VertexId ru = find(e.u), rv = find(e.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        tree.push_back(id);
    }

    // forest after deleting the auxiliary vertex
    std::iota(parent.begin(), parent.end(), VertexId{0});
    for (EdgeId id : tree) {
        const Edge& e = g.attractive_edges()[id];
        parent[find(e.u)] = find(e.v);
    }
    std::vector<VertexId> roots(n);
    for (VertexId v = 0; v < n; ++v) roots[v] = find(v);
    return Clustering::canonical(roots);
}

} // namespace mws
