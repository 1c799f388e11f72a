#include <gtest/gtest.h>

#include <random>

#include "mws/graph_io.hpp"
#include "mws/verify.hpp"

using namespace mws;

TEST(Properties, NaiveEqualsEfficientOnLargerGraphs) {
    std::mt19937_64 rng(101);
    for (WeightKind kind : {WeightKind::with_ties, WeightKind::unique}) {
        const GraphSpec spec{2, 40, 200, kind};
        for (int t = 0; t < 300; ++t) {
            const SignedGraph g = random_signed_graph(rng, spec);
            const SolveResult a = solve_naive(g), b = solve_efficient(g, SolveOptions{});
            ASSERT_EQ(a.active, b.active) << write_graph(g);
            ASSERT_EQ(a.clustering, b.clustering);
        }
    }
}

TEST(Properties, AbsorbDirectionNeverMatters) {
    std::mt19937_64 rng(102);
    for (int t = 0; t < 300; ++t) {
        const SignedGraph g = random_signed_graph(rng, {2, 30, 150, WeightKind::with_ties});
        SolveOptions random_absorb;
        random_absorb.absorb_order = AbsorbOrder::randomized;
        random_absorb.absorb_seed = static_cast<std::uint64_t>(t);
        const SolveResult a = solve_efficient(g, SolveOptions{}), b = solve_efficient(g, random_absorb);
        ASSERT_EQ(a.active, b.active);
        ASSERT_EQ(a.clustering, b.clustering);
    }
}

TEST(Properties, GreedyIsOptimal) {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 200; ++t) {
        const SignedGraph g = random_signed_graph(rng, {2, 8, 12, WeightKind::unique});
        const unsigned p = minimal_dominant_power(g).exponent;
        ASSERT_EQ(solve_naive(g).active, brute_force_mws(g, {}, p).active) << write_graph(g);
    }
}

TEST(Properties, VerifySuitePasses) {
    VerifyConfig cfg;
    cfg.trials = 60;
    cfg.seed = 7;
    const VerifyReport r = run_verify(cfg);
    EXPECT_TRUE(r.ok());
    EXPECT_FALSE(r.counterexample);
    ASSERT_EQ(r.properties.size(), 7u);
    for (const auto& p : r.properties) {
        EXPECT_GT(p.trials, 0u) << p.name;
        EXPECT_EQ(p.passed, p.trials) << p.name;
    }
}

TEST(Properties, VerifyWithZeroTrials) {
    VerifyConfig cfg;
    cfg.trials = 0;
    const VerifyReport r = run_verify(cfg);
    EXPECT_TRUE(r.ok());
    for (const auto& p : r.properties) EXPECT_EQ(p.trials, 0u);
}

TEST(Properties, VerifyCatchesBrokenSolver) {
    // processes edges in ascending instead of descending order
    const Solver backwards = [](const SignedGraph& g, const SolveOptions& o) {
        auto order = sort_edges(g);
        std::reverse(order.begin(), order.end());
        return solve_efficient(g, std::span<const EdgeRef>(order), o);
    };
    VerifyConfig cfg;
    cfg.trials = 30;
    const VerifyReport r = run_verify(cfg, backwards);
    EXPECT_FALSE(r.ok());
    ASSERT_TRUE(r.counterexample);
    const SignedGraph& g = r.counterexample->graph;
    EXPECT_EQ(read_graph(write_graph(g)), g);
}

TEST(Properties, VerifyRejectsOversizedBounds) {
    VerifyConfig cfg;
    cfg.max_edges = kMaxBruteForceEdges + 1;
    EXPECT_THROW(run_verify(cfg), InputError);
    cfg = {};
    cfg.max_vertices = 1;
    EXPECT_THROW(run_verify(cfg), InputError);
}
