#pragma once

// Randomized property suite: every solver claim that can be decided
// exhaustively on small graphs, checked against the oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mws/graph.hpp"
#include "mws/mutex_watershed.hpp"
#include "mws/oracle.hpp"
#include "mws/predicates.hpp"
#include "mws/random_graphs.hpp"
#include "mws/seeded.hpp"

namespace mws {

using Solver = std::function<SolveResult(const SignedGraph&, const SolveOptions&)>;

inline Solver efficient_solver() {
    return [](const SignedGraph& g, const SolveOptions& o) { return solve_efficient(g, o); };
}

/// True iff every cluster is connected through attractive edges inside it.
inline bool clusters_attractive_connected(const SignedGraph& g, const Clustering& c) {
    std::vector<std::uint32_t> parent(g.num_vertices());
    std::iota(parent.begin(), parent.end(), std::uint32_t{0});
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = g.num_vertices();
    for (const Edge& e : g.attractive_edges()) {
        if (c.labels[e.u] != c.labels[e.v]) continue;
        const std::uint32_t a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == c.num_clusters;
}

/// The clustering is a multicut minimizer and the only one whose clusters
/// are attractive-connected. Other minimizers can only differ by merging
/// clusters that share no edge, which costs nothing.
inline bool matches_multicut(const SignedGraph& g, const Clustering& c, const MulticutSolution& mc) {
    bool found = false;
    for (const Clustering& m : mc.minimizers) {
        if (!clusters_attractive_connected(g, m)) continue;
        if (m.labels != c.labels || found) return false;
        found = true;
    }
    return found;
}

struct VerifyConfig {
    std::size_t max_vertices = 8;
    std::size_t max_edges = 12;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
};

struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t passed = 0;
};

struct Counterexample {
    std::string property;
    SignedGraph graph;
    std::optional<ActiveSet> initial_active;
};

struct VerifyReport {
    std::vector<PropertyResult> properties;
    std::optional<Counterexample> counterexample; // first failure

    bool ok() const {
        for (const auto& p : properties)
            if (p.passed != p.trials) return false;
        return true;
    }
};

inline constexpr std::size_t kMaxMulticutTrialVertices = 7;
inline constexpr std::size_t kMaxCycleTrialEdges = 14;

/// Runs `trials` random instances through every property. `solver` is the
/// implementation under test; everything else is the reference.
inline VerifyReport run_verify(const VerifyConfig& cfg, const Solver& solver = efficient_solver()) {
    if (cfg.max_vertices < 2) throw InputError("verify: need at least 2 vertices");
    if (cfg.max_edges > kMaxBruteForceEdges)
        throw InputError("verify: at most " + std::to_string(kMaxBruteForceEdges) + " edges");

    VerifyReport report;
    auto& props = report.properties;
    enum { k_oracle, k_naive, k_relaxed, k_greedy, k_seeded, k_multicut, k_cycle };
    for (const char* name : {"oracle_optimality", "naive_equals_efficient", "relaxed_c0_clustering",
                             "greedy_substructure", "seeded_equivalence", "multicut_equivalence",
                             "cycle_inequalities"})
        props.push_back({name, 0, 0});

    auto record = [&](int which, bool pass, const SignedGraph& g, const std::optional<ActiveSet>& a0 = {}) {
        ++props[which].trials;
        if (pass)
            ++props[which].passed;
        else if (!report.counterexample)
            report.counterexample = Counterexample{props[which].name, g, a0};
    };

    std::mt19937_64 rng(cfg.seed);
    GraphSpec unique{2, cfg.max_vertices, cfg.max_edges, WeightKind::unique};
    GraphSpec ties{2, cfg.max_vertices, cfg.max_edges, WeightKind::with_ties};
    GraphSpec pow2{2, std::min(cfg.max_vertices, kMaxMulticutTrialVertices), cfg.max_edges,
                   WeightKind::powers_of_two};
    GraphSpec cyc{2, cfg.max_vertices, std::min(cfg.max_edges, kMaxCycleTrialEdges), WeightKind::unique};

    for (std::size_t t = 0; t < cfg.trials; ++t) {
        {
            const SignedGraph g = random_signed_graph(rng, unique);
            const unsigned p = minimal_dominant_power(g).exponent;
            const SolveResult r = solver(g, {});
            record(k_oracle, r.active == brute_force_mws(g, {}, p).active, g);

            SolveOptions relaxed;
            relaxed.enforce_c0 = false;
            record(k_relaxed, solver(g, relaxed).clustering == r.clustering, g);

            if (auto a0 = random_incomplete_active_set(rng, g)) {
                const auto step = greedy_edge(g, *a0);
                bool pass = false;
                if (step) {
                    const ActiveSet opt = brute_force_mws(g, *a0, p).active;
                    ActiveSet rest = *a0;
                    rest.insert(*step);
                    ActiveSet expect = brute_force_mws(g, rest, p).active;
                    expect.insert(*step);
                    SolveOptions from_a0;
                    from_a0.initial_active = *a0;
                    pass = opt.contains(*step) && opt == expect && solver(g, from_a0).active == opt;
                }
                record(k_greedy, pass, g, a0);
            }
        }
        {
            const SignedGraph g = random_signed_graph(rng, ties);
            const SolveResult a = solve_naive(g);
            const SolveResult b = solver(g, {});
            record(k_naive, a.active == b.active && a.clustering == b.clustering, g);
        }
        {
            const SignedGraph g =
                random_connected_attractive_graph(rng, 2, cfg.max_vertices, cfg.max_edges / 2, WeightKind::with_ties);
            std::vector<VertexId> all(g.num_vertices());
            std::iota(all.begin(), all.end(), VertexId{0});
            std::shuffle(all.begin(), all.end(), rng);
            const std::size_t k =
                detail::uniform_int(rng, std::min<std::size_t>(2, all.size()), std::min<std::size_t>(5, all.size()));
            const SeedSet seeds(std::vector<VertexId>(all.begin(), all.begin() + static_cast<long>(k)),
                                g.num_vertices());
            record(k_seeded, seeded_mws(g, seeds) == seeded_msf_reference(g, seeds), g);
        }
        {
            const SignedGraph g = random_signed_graph(rng, pow2);
            const MulticutSolution mc = brute_force_multicut(g, signed_costs_from_mws_graph(g, 1.0));
            record(k_multicut, matches_multicut(g, solver(g, {}).clustering, mc), g);
        }
        {
            const SignedGraph g = random_signed_graph(rng, cyc);
            const ActiveSet a = random_active_set(rng, g);
            record(k_cycle, cycle_inequalities_hold(g, a) == !has_violating_cycle(g, a), g, a);
        }
    }
    return report;
}

} // namespace mws
