#pragma once

// Reference predicates over an active set, evaluated by plain graph traversal.
// No amortized state: these exist to cross-check the union-find solver.

#include <cstdint>
#include <string>
#include <vector>

#include "mws/graph.hpp"

namespace mws {

namespace detail {

// Adjacency of the active edges, growable one edge at a time. Component
// queries are BFS with epoch-stamped visit marks so repeated queries cost
// O(|component|) rather than O(V).
class ActiveAdjacency {
public:
    explicit ActiveAdjacency(std::size_t num_vertices)
        : attractive_(num_vertices), repulsive_(num_vertices), mark_a_(num_vertices, 0), mark_b_(num_vertices, 0) {}

    ActiveAdjacency(const SignedGraph& g, const ActiveSet& a) : ActiveAdjacency(g.num_vertices()) {
        for (EdgeRef ref : a.refs()) add(g.edge(ref));
    }

    void add(const Edge& e) {
        auto& adj = e.polarity == Polarity::attractive ? attractive_ : repulsive_;
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }

    std::size_t num_vertices() const { return attractive_.size(); }

    bool connected(VertexId i, VertexId j) {
        if (i == j) return true;
        component(i, mark_a_, epoch_a_);
        return mark_a_[j] == epoch_a_;
    }

    // Some active repulsive edge joins the A+ component of i to that of j.
    bool mutex_related(VertexId i, VertexId j) {
        const std::vector<VertexId> ci = component(i, mark_a_, epoch_a_);
        component(j, mark_b_, epoch_b_);
        for (VertexId x : ci)
            for (VertexId y : repulsive_[x])
                if (mark_b_[y] == epoch_b_) return true;
        return false;
    }

    // Component ids of (V, A+) in order of first vertex; returns the count.
    std::size_t components(std::vector<std::uint32_t>& label) {
        label.assign(num_vertices(), UINT32_MAX);
        std::uint32_t next = 0;
        for (VertexId s = 0; s < num_vertices(); ++s) {
            if (label[s] != UINT32_MAX) continue;
            for (VertexId x : component(s, mark_a_, epoch_a_)) label[x] = next;
            ++next;
        }
        return next;
    }

    const std::vector<VertexId>& repulsive_neighbours(VertexId v) const { return repulsive_[v]; }

private:
    const std::vector<VertexId>& component(VertexId s, std::vector<std::uint32_t>& mark, std::uint32_t& epoch) {
        if (++epoch == 0) { // wrapped
            std::fill(mark.begin(), mark.end(), 0);
            epoch = 1;
        }
        queue_.clear();
        queue_.push_back(s);
        mark[s] = epoch;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const VertexId x = queue_[head];
            for (VertexId y : attractive_[x]) {
                if (mark[y] != epoch) {
                    mark[y] = epoch;
                    queue_.push_back(y);
                }
            }
        }
        return queue_;
    }

    std::vector<std::vector<VertexId>> attractive_;
    std::vector<std::vector<VertexId>> repulsive_;
    std::vector<std::uint32_t> mark_a_, mark_b_;
    std::uint32_t epoch_a_ = 0, epoch_b_ = 0;
    std::vector<VertexId> queue_;
};

inline void check_vertex(const SignedGraph& g, VertexId v) {
    if (v >= g.num_vertices())
        throw InputError("vertex id " + std::to_string(v) + " out of range (|V| = " +
                         std::to_string(g.num_vertices()) + ")");
}

inline void check_ids(const SignedGraph& g, const ActiveSet& a) {
    if (!a.attractive().empty() && a.attractive().back() >= g.num_attractive())
        throw InputError("active attractive edge id out of range");
    if (!a.repulsive().empty() && a.repulsive().back() >= g.num_repulsive())
        throw InputError("active repulsive edge id out of range");
}

} // namespace detail

/// Whether a path of active attractive edges joins i and j.
inline bool connected(const SignedGraph& g, const ActiveSet& a, VertexId i, VertexId j) {
    detail::check_vertex(g, i);
    detail::check_vertex(g, j);
    detail::check_ids(g, a);
    return detail::ActiveAdjacency(g, a).connected(i, j);
}

/// Whether some path in A from i to j contains exactly one active repulsive
/// edge.
inline bool mutex_related(const SignedGraph& g, const ActiveSet& a, VertexId i, VertexId j) {
    detail::check_vertex(g, i);
    detail::check_vertex(g, j);
    detail::check_ids(g, a);
    return detail::ActiveAdjacency(g, a).mutex_related(i, j);
}

/// C0(A) is empty, i.e. (V, A+) is a forest.
inline bool is_forest(const SignedGraph& g, const ActiveSet& a) {
    detail::check_ids(g, a);
    detail::ActiveAdjacency adj(g, a);
    std::vector<std::uint32_t> label;
    const std::size_t k = adj.components(label);
    return a.attractive().size() + k == g.num_vertices();
}

/// C1(A) is non-empty: an active repulsive edge has both endpoints connected
/// through A+.
inline bool has_violating_cycle(const SignedGraph& g, const ActiveSet& a) {
    detail::check_ids(g, a);
    detail::ActiveAdjacency adj(g, a);
    std::vector<std::uint32_t> label;
    adj.components(label);
    for (EdgeId id : a.repulsive()) {
        const Edge& e = g.repulsive_edges()[id];
        if (label[e.u] == label[e.v]) return true;
    }
    return false;
}

/// Connected components of (V, A+), canonically labelled.
inline Clustering clustering_of(const SignedGraph& g, const ActiveSet& a) {
    if (has_violating_cycle(g, a))
        throw ConsistencyError("active set contains a cycle with exactly one repulsive edge");
    detail::ActiveAdjacency adj(g, a);
    Clustering c;
    c.num_clusters = adj.components(c.labels);
    return c;
}

/// C0(A) = C1(A) = ∅, throwing ConsistencyError otherwise.
inline void require_consistent(const SignedGraph& g, const ActiveSet& a, const char* what) {
    detail::check_ids(g, a);
    if (!is_forest(g, a))
        throw ConsistencyError(std::string(what) + ": attractive edges contain a cycle");
    if (has_violating_cycle(g, a))
        throw ConsistencyError(std::string(what) + ": cycle with exactly one repulsive edge");
}

} // namespace mws
