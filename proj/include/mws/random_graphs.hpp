#pragma once

// Seeded instance generators for property tests and the verify command.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "mws/graph.hpp"
#include "mws/mutex_watershed.hpp"
#include "mws/predicates.hpp"

namespace mws {

enum class WeightKind : std::uint8_t {
    unique,        // pairwise distinct, spaced at least 1/(4E+8) apart in (0, 1]
    with_ties,     // drawn from {0, 1/8, ..., 1}
    powers_of_two, // pairwise distinct 2^k, k in [-12, 12]
};

struct GraphSpec {
    std::size_t min_vertices = 2;
    std::size_t max_vertices = 8;
    std::size_t max_edges = 12;
    WeightKind weights = WeightKind::unique;
    double repulsive_fraction = 0.5;
};

namespace detail {

inline std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<double> draw_weights(std::mt19937_64& rng, std::size_t count, WeightKind kind) {
    std::vector<double> w(count);
    switch (kind) {
    case WeightKind::unique: {
        const std::size_t slots = 4 * count + 8;
        std::vector<std::size_t> pool(slots);
        std::iota(pool.begin(), pool.end(), std::size_t{1});
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < count; ++i) w[i] = static_cast<double>(pool[i]) / static_cast<double>(slots);
        break;
    }
    case WeightKind::with_ties:
        for (double& x : w) x = static_cast<double>(uniform_int(rng, 0, 8)) / 8.0;
        break;
    case WeightKind::powers_of_two: {
        std::vector<int> k(25);
        std::iota(k.begin(), k.end(), -12);
        std::shuffle(k.begin(), k.end(), rng);
        if (count > k.size()) throw InputError("too many edges for distinct powers of two");
        for (std::size_t i = 0; i < count; ++i) w[i] = std::ldexp(1.0, k[i]);
        break;
    }
    }
    return w;
}

} // namespace detail

/// Random simple signed graph (at most one edge per polarity and vertex pair).
inline SignedGraph random_signed_graph(std::mt19937_64& rng, const GraphSpec& spec) {
    if (spec.min_vertices < 2 || spec.max_vertices < spec.min_vertices) throw InputError("bad vertex bounds");
    const std::size_t n = detail::uniform_int(rng, spec.min_vertices, spec.max_vertices);
    const std::size_t pairs = n * (n - 1) / 2;
    // biased towards dense graphs, where the constraints actually interact
    const std::size_t cap = std::min(spec.max_edges, 2 * pairs);
    const std::size_t m = detail::uniform_int(rng, cap / 2, cap);

    std::set<std::tuple<int, VertexId, VertexId>> used;
    std::vector<Edge> edges;
    std::bernoulli_distribution repulsive(spec.repulsive_fraction);
    while (edges.size() < m) {
        VertexId u = static_cast<VertexId>(detail::uniform_int(rng, 0, n - 1));
        VertexId v = static_cast<VertexId>(detail::uniform_int(rng, 0, n - 1));
        if (u == v) continue;
        Polarity p = repulsive(rng) ? Polarity::repulsive : Polarity::attractive;
        const auto key = std::make_tuple(static_cast<int>(p), std::min(u, v), std::max(u, v));
        if (used.count(key)) {
            // keep the pair, try the other polarity so dense requests terminate
            p = p == Polarity::attractive ? Polarity::repulsive : Polarity::attractive;
            if (!used.insert({static_cast<int>(p), std::min(u, v), std::max(u, v)}).second) continue;
        } else {
            used.insert(key);
        }
        edges.push_back({u, v, 0.0, p});
    }
    const auto w = detail::draw_weights(rng, edges.size(), spec.weights);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = w[i];
    return SignedGraph(n, edges);
}

/// Connected, purely attractive graph: a random spanning tree plus up to
/// `extra_edges` further edges.
inline SignedGraph random_connected_attractive_graph(std::mt19937_64& rng, std::size_t min_vertices,
                                                     std::size_t max_vertices, std::size_t extra_edges,
                                                     WeightKind kind = WeightKind::with_ties) {
    if (min_vertices < 1 || max_vertices < min_vertices) throw InputError("bad vertex bounds");
    const std::size_t n = detail::uniform_int(rng, min_vertices, max_vertices);
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<VertexId, VertexId>> used;
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) {
        const VertexId u = perm[i], v = perm[detail::uniform_int(rng, 0, i - 1)];
        used.insert({std::min(u, v), std::max(u, v)});
        edges.push_back({u, v, 0.0, Polarity::attractive});
    }
    const std::size_t target = std::min(edges.size() + extra_edges, n * (n - 1) / 2);
    while (edges.size() < target) {
        const VertexId u = static_cast<VertexId>(detail::uniform_int(rng, 0, n - 1));
        const VertexId v = static_cast<VertexId>(detail::uniform_int(rng, 0, n - 1));
        if (u == v || !used.insert({std::min(u, v), std::max(u, v)}).second) continue;
        edges.push_back({u, v, 0.0, Polarity::attractive});
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    const auto w = detail::draw_weights(rng, edges.size(), kind);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = w[i];
    return SignedGraph(n, edges);
}

/// Every edge independently with probability 1/2; no consistency required.
inline ActiveSet random_active_set(std::mt19937_64& rng, const SignedGraph& g) {
    std::bernoulli_distribution coin(0.5);
    std::vector<EdgeId> att, rep;
    for (EdgeId id = 0; id < g.num_attractive(); ++id)
        if (coin(rng)) att.push_back(id);
    for (EdgeId id = 0; id < g.num_repulsive(); ++id)
        if (coin(rng)) rep.push_back(id);
    return ActiveSet(std::move(att), std::move(rep));
}

/// Random A0 with C0 = C1 = ∅ to which at least one more edge can be added,
/// or nothing when the graph admits no such set (no edges at all).
inline std::optional<ActiveSet> random_incomplete_active_set(std::mt19937_64& rng, const SignedGraph& g) {
    std::vector<EdgeRef> refs;
    for (EdgeId id = 0; id < g.num_attractive(); ++id) refs.push_back({Polarity::attractive, id});
    for (EdgeId id = 0; id < g.num_repulsive(); ++id) refs.push_back({Polarity::repulsive, id});
    if (refs.empty()) return std::nullopt;
    std::shuffle(refs.begin(), refs.end(), rng);
    const std::size_t attempts = detail::uniform_int(rng, 0, refs.size());

    detail::ActiveAdjacency adj(g.num_vertices());
    std::vector<EdgeRef> taken;
    for (std::size_t k = 0; k < attempts; ++k) {
        const Edge& e = g.edge(refs[k]);
        if (adj.connected(e.u, e.v)) continue;
        if (refs[k].polarity == Polarity::attractive && adj.mutex_related(e.u, e.v)) continue;
        adj.add(e);
        taken.push_back(refs[k]);
    }
    auto build = [](const std::vector<EdgeRef>& list) {
        ActiveSet a;
        for (EdgeRef r : list) a.insert(r);
        return a;
    };
    ActiveSet a = build(taken);
    if (!greedy_edge(g, a)) {
        // complete: removing any edge frees at least that edge again
        taken.pop_back();
        a = build(taken);
    }
    return a;
}

} // namespace mws
