#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mws/graph.hpp"
#include "mws/mutex_union_find.hpp"
#include "mws/predicates.hpp"

namespace mws {

struct SolveOptions {
    // With enforce_c0 off, attractive edges inside an existing cluster are
    // activated instead of rejected; the clustering is unchanged.
    bool enforce_c0 = true;
    bool record_stats = false;
    // Must satisfy C0 = C1 = ∅. Excluded from the returned active set.
    std::optional<ActiveSet> initial_active;
    AbsorbOrder absorb_order = AbsorbOrder::smaller_into_larger;
    std::uint64_t absorb_seed = 0;
};

struct SolveStats {
    std::uint64_t edge_visits = 0;
    std::uint64_t merges = 0;
    std::uint64_t mutexes_added = 0;
    std::uint64_t mutex_checks = 0;
    // Mean of min(|M[Ci]|, |M[Cj]|), sampled at mutex checks and at table
    // merges respectively. Zero for the naive solver, which has no tables.
    double mean_min_mutex_check = 0.0;
    double mean_min_mutex_merge = 0.0;

    friend bool operator==(const SolveStats&, const SolveStats&) = default;
};

struct SolveResult {
    ActiveSet active;
    Clustering clustering;
    double energy_exponent_free = 0.0; // Σ_{e ∈ A} w_e
    std::optional<SolveStats> stats;
};

/// All edges of both polarities by descending weight. Ties go to repulsive
/// edges first, then to the lower edge id.
inline std::vector<EdgeRef> sort_edges(const SignedGraph& g) {
    struct Key {
        double weight;
        EdgeRef ref;
    };
    std::vector<Key> keys;
    keys.reserve(g.num_edges());
    for (EdgeId id = 0; id < g.num_repulsive(); ++id)
        keys.push_back({g.repulsive_edges()[id].weight, {Polarity::repulsive, id}});
    for (EdgeId id = 0; id < g.num_attractive(); ++id)
        keys.push_back({g.attractive_edges()[id].weight, {Polarity::attractive, id}});
    // Repulsive keys precede attractive ones and ids ascend within each block,
    // so a stable sort on weight alone realizes the full tie-break.
    std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.weight > b.weight; });
    std::vector<EdgeRef> order(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k) order[k] = keys[k].ref;
    return order;
}

namespace detail {

class EdgeMask {
public:
    EdgeMask(const SignedGraph& g, const std::optional<ActiveSet>& a)
        : attractive_(g.num_attractive(), 0), repulsive_(g.num_repulsive(), 0) {
        if (!a) return;
        for (EdgeId id : a->attractive()) attractive_[id] = 1;
        for (EdgeId id : a->repulsive()) repulsive_[id] = 1;
    }
    bool operator()(EdgeRef r) const {
        return (r.polarity == Polarity::attractive ? attractive_ : repulsive_)[r.id] != 0;
    }

private:
    std::vector<char> attractive_, repulsive_;
};

inline double exponent_free_energy(const SignedGraph& g, const ActiveSet& a) {
    double sum = 0.0;
    for (EdgeId id : a.attractive()) sum += g.attractive_edges()[id].weight;
    for (EdgeId id : a.repulsive()) sum += g.repulsive_edges()[id].weight;
    return sum;
}

inline void validate_initial(const SignedGraph& g, const SolveOptions& opts) {
    if (opts.initial_active) require_consistent(g, *opts.initial_active, "initial active set");
}

} // namespace detail

/// Greedy sweep with constraints evaluated by traversal over the active set.
/// Quadratic-ish; meant as the reference for solve_efficient.
inline SolveResult solve_naive(const SignedGraph& g, const SolveOptions& opts = {}) {
    detail::validate_initial(g, opts);
    const detail::EdgeMask initial(g, opts.initial_active);

    detail::ActiveAdjacency adj(g.num_vertices());
    if (opts.initial_active)
        for (EdgeRef r : opts.initial_active->refs()) adj.add(g.edge(r));

    SolveStats stats;
    std::vector<EdgeId> att, rep;
    for (EdgeRef ref : sort_edges(g)) {
        if (initial(ref)) continue;
        ++stats.edge_visits;
        const Edge& e = g.edge(ref);
        bool accept = false;
        if (ref.polarity == Polarity::attractive) {
            // C0(A ∪ {e}) ≠ ∅ ⟺ connected; C1(A ∪ {e}) ≠ ∅ ⟺ mutex_related
            const bool joined = adj.connected(e.u, e.v);
            if (!opts.enforce_c0 || !joined) {
                ++stats.mutex_checks;
                accept = !adj.mutex_related(e.u, e.v);
            }
            if (accept && !joined) ++stats.merges;
        } else {
            // C1(A ∪ {e}) ≠ ∅ ⟺ connected
            accept = !adj.connected(e.u, e.v);
            if (accept) ++stats.mutexes_added;
        }
        if (accept) {
            adj.add(e);
            (ref.polarity == Polarity::attractive ? att : rep).push_back(ref.id);
        }
    }

    SolveResult result;
    result.active = ActiveSet(std::move(att), std::move(rep));
    Clustering c;
    c.num_clusters = adj.components(c.labels);
    result.clustering = std::move(c);
    result.energy_exponent_free = detail::exponent_free_energy(g, result.active);
    if (opts.record_stats) result.stats = stats;
    return result;
}

/// One sweep step, copied out of the graph so that the sweep reads its
/// input sequentially.
struct SweepEdge {
    VertexId u = 0;
    VertexId v = 0;
    EdgeId id = 0;
    Polarity polarity = Polarity::attractive;
};

inline std::vector<SweepEdge> gather_sweep(const SignedGraph& g, std::span<const EdgeRef> order) {
    if (order.size() != g.num_edges()) throw InputError("edge order does not cover the graph");
    std::vector<SweepEdge> out;
    out.reserve(order.size());
    for (EdgeRef r : order) {
        const Edge& e = g.edge(r);
        out.push_back({e.u, e.v, r.id, r.polarity});
    }
    return out;
}

inline std::vector<SweepEdge> sorted_sweep(const SignedGraph& g) { return gather_sweep(g, sort_edges(g)); }

/// Union-find sweep over a caller-supplied edge sequence (normally
/// sorted_sweep(g)), so benchmarks can time sorting separately.
inline SolveResult solve_efficient(const SignedGraph& g, std::span<const SweepEdge> sweep,
                                   const SolveOptions& opts = {}) {
    if (sweep.size() != g.num_edges()) throw InputError("edge order does not cover the graph");
    detail::validate_initial(g, opts);
    const detail::EdgeMask initial(g, opts.initial_active);

    MutexUnionFind uf(g.num_vertices(), opts.record_stats);
    uf.set_absorb_order(opts.absorb_order, opts.absorb_seed);
    if (opts.initial_active) {
        for (EdgeId id : opts.initial_active->attractive()) {
            const Edge& e = g.attractive_edges()[id];
            uf.merge_roots(uf.find(e.u), uf.find(e.v));
        }
        for (EdgeId id : opts.initial_active->repulsive()) {
            const Edge& e = g.repulsive_edges()[id];
            uf.add_mutex_roots(uf.find(e.u), uf.find(e.v), id);
        }
    }

    std::uint64_t visits = 0;
    std::vector<char> att(g.num_attractive(), 0), rep(g.num_repulsive(), 0);
    for (const SweepEdge& e : sweep) {
        if (e.id >= g.count(e.polarity)) throw InputError("edge order refers to a missing edge");
        if (initial({e.polarity, e.id})) continue;
        ++visits;
        const VertexId ru = uf.find(e.u);
        const VertexId rv = uf.find(e.v);
        if (e.polarity == Polarity::attractive) {
            if (ru == rv) {
                if (!opts.enforce_c0) att[e.id] = 1;
            } else if (!uf.roots_mutex(ru, rv)) {
                uf.merge_roots(ru, rv);
                att[e.id] = 1;
            }
        } else if (ru != rv) {
            uf.add_mutex_roots(ru, rv, e.id);
            rep[e.id] = 1;
        }
    }

    auto ids_of = [](const std::vector<char>& flags) {
        std::vector<EdgeId> ids;
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i]) ids.push_back(static_cast<EdgeId>(i));
        return ids;
    };
    SolveResult result;
    result.active = ActiveSet::from_sorted(ids_of(att), ids_of(rep));
    std::vector<VertexId> roots(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) roots[v] = uf.find(v);
    result.clustering = Clustering::canonical(roots);
    result.energy_exponent_free = detail::exponent_free_energy(g, result.active);
    if (opts.record_stats) {
        const MutexStats& s = uf.stats();
        SolveStats out;
        out.edge_visits = visits;
        out.mutex_checks = s.mutex_checks;
        out.mean_min_mutex_check = s.mean_min_table_at_check();
        out.mean_min_mutex_merge = s.mean_min_table_at_merge();
        // initial edges were replayed through the same counters
        const std::size_t init_att = opts.initial_active ? opts.initial_active->attractive().size() : 0;
        const std::size_t init_rep = opts.initial_active ? opts.initial_active->repulsive().size() : 0;
        out.merges = s.merges - init_att;
        out.mutexes_added = s.mutexes_added - init_rep;
        result.stats = out;
    }
    return result;
}

inline SolveResult solve_efficient(const SignedGraph& g, std::span<const EdgeRef> order,
                                   const SolveOptions& opts = {}) {
    const std::vector<SweepEdge> sweep = gather_sweep(g, order);
    return solve_efficient(g, std::span<const SweepEdge>(sweep), opts);
}

inline SolveResult solve_efficient(const SignedGraph& g, const SolveOptions& opts = {}) {
    const std::vector<SweepEdge> sweep = sorted_sweep(g);
    return solve_efficient(g, std::span<const SweepEdge>(sweep), opts);
}

/// The highest-ranked edge outside A0 whose addition keeps C0 = C1 = ∅, or
/// nothing when A0 is complete.
inline std::optional<EdgeRef> greedy_edge(const SignedGraph& g, const ActiveSet& initial_active) {
    require_consistent(g, initial_active, "initial active set");
    detail::ActiveAdjacency adj(g, initial_active);
    for (EdgeRef ref : sort_edges(g)) {
        if (initial_active.contains(ref)) continue;
        const Edge& e = g.edge(ref);
        if (adj.connected(e.u, e.v)) continue;
        if (ref.polarity == Polarity::attractive && adj.mutex_related(e.u, e.v)) continue;
        return ref;
    }
    return std::nullopt;
}

} // namespace mws
