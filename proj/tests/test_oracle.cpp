#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mws/mutex_watershed.hpp"
#include "mws/oracle.hpp"
#include "mws/random_graphs.hpp"

using namespace mws;

namespace {

constexpr Polarity kA = Polarity::attractive;
constexpr Polarity kR = Polarity::repulsive;

// repulsive 0-2 (3); attractive 0-1 (2), 1-2 (1)
SignedGraph triangle() { return SignedGraph(3, std::vector<Edge>{{0, 2, 3, kR}, {0, 1, 2, kA}, {1, 2, 1, kA}}); }

unsigned min_p(std::vector<double> w) { return minimal_dominant_power(w).exponent; }

// Same dominance test in 256-bit binary floating point.
bool dominant_in_float(std::vector<double> w, unsigned p) {
    using F = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256>>;
    std::sort(w.begin(), w.end());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        F below = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (w[j] < w[i]) below += boost::multiprecision::pow(F(w[j]), p);
        if (!(boost::multiprecision::pow(F(w[i]), p) > below)) return false;
    }
    return true;
}

} // namespace

TEST(DominantPower, Examples) {
    EXPECT_EQ(min_p({1, 2, 4}), 1u);
    EXPECT_EQ(min_p({1, 2, 3}), 2u);
    EXPECT_EQ(min_p({5}), 1u);
    EXPECT_EQ(min_p({}), 1u);
    EXPECT_EQ(min_p({0.5, 1, 2}), 1u);
    EXPECT_EQ(min_p({0.25, 0.5, 0.75}), 2u);
    EXPECT_TRUE(minimal_dominant_power(std::vector<double>{1, 2, 3}).certified);
}

TEST(DominantPower, ZeroWeightsAreExempt) { EXPECT_EQ(min_p({0, 0, 1, 3}), 1u); }

TEST(DominantPower, RepeatedSmallerWeightsAllCount) {
    const std::vector<double> w{1, 1, 1.5};
    EXPECT_FALSE(is_dominant_power(w, 1));
    EXPECT_TRUE(is_dominant_power(w, 2));
}

TEST(DominantPower, DuplicatesHaveNone) {
    EXPECT_THROW(min_p({1, 2, 2}), NoDominantPower);
    EXPECT_THROW(min_p({0.5, 0.5}), NoDominantPower);
}

TEST(DominantPower, NeedsLargeExponentForCloseWeights) {
    const std::vector<double> w{1.0, 1.01, 1.02};
    const unsigned p = minimal_dominant_power(w).exponent;
    EXPECT_GT(p, 1u);
    EXPECT_TRUE(is_dominant_power(w, p));
    EXPECT_FALSE(is_dominant_power(w, p - 1));
}

TEST(DominantPower, AgreesWithExtendedFloat) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> grid(0, 64);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> w(1 + t % 10);
        for (double& x : w) x = grid(rng) / 16.0;
        for (unsigned p = 1; p <= 8; ++p) ASSERT_EQ(is_dominant_power(w, p), dominant_in_float(w, p));
    }
}

TEST(BruteForceMws, TriangleAtSquaredWeights) {
    const EnergyReport r = brute_force_mws(triangle(), {}, 2);
    EXPECT_EQ(r.active, ActiveSet({0}, {0}));
    EXPECT_EQ(r.energy, -13.0);
    EXPECT_EQ(r.p, 2u);
    EXPECT_EQ(mws_energy(triangle(), r.active, 2), r.energy);
}

TEST(BruteForceMws, TrivialGraphs) {
    const SignedGraph one(2, std::vector<Edge>{{0, 1, 5, kA}});
    const EnergyReport r = brute_force_mws(one, {}, 1);
    EXPECT_EQ(r.active, ActiveSet({0}, {}));
    EXPECT_EQ(r.energy, -5.0);

    const EnergyReport empty = brute_force_mws(SignedGraph(3, std::vector<Edge>{}), {}, 1);
    EXPECT_TRUE(empty.active.empty());
    EXPECT_EQ(empty.energy, 0.0);
}

TEST(BruteForceMws, InitialSetIsExcluded) {
    const EnergyReport r = brute_force_mws(triangle(), ActiveSet({}, {0}), 2);
    EXPECT_EQ(r.active, ActiveSet({0}, {}));
    EXPECT_EQ(r.energy, -4.0);
}

TEST(BruteForceMws, Errors) {
    // three equal attractive edges: any two of them are optimal
    const SignedGraph tie(3, std::vector<Edge>{{0, 1, 1, kA}, {1, 2, 1, kA}, {0, 2, 1, kA}});
    EXPECT_THROW(brute_force_mws(tie, {}, 1), InvariantError);
    EXPECT_THROW(brute_force_mws(triangle(), ActiveSet({0, 1}, {0}), 1), ConsistencyError);
    EXPECT_THROW(brute_force_mws(triangle(), {}, 0), InputError);
    std::vector<Edge> many;
    for (VertexId i = 0; i < 26; ++i) many.push_back({i, i + 1, 1.0 + i, kA});
    EXPECT_THROW(brute_force_mws(SignedGraph(27, many), {}, 1), InputError);
}

TEST(BruteForceMws, MatchesGreedyOnTriangle) {
    const SignedGraph g = triangle();
    EXPECT_EQ(brute_force_mws(g, {}, min_p({3, 2, 1})).active, solve_efficient(g, SolveOptions{}).active);
}

TEST(SignedCosts, Examples) {
    const SignedGraph g(3, std::vector<Edge>{{0, 1, 2, kA}, {1, 2, 3, kR}, {0, 2, 0, kA}, {0, 1, 0, kR}});
    const EdgeCosts p1 = signed_costs_from_mws_graph(g, 1);
    const EdgeCosts p2 = signed_costs_from_mws_graph(g, 2);
    EXPECT_EQ(p1.attractive[0], 2.0);
    EXPECT_EQ(p2.repulsive[0], -9.0);
    EXPECT_EQ(p1.attractive[1], 0.0);
    EXPECT_EQ(p1.repulsive[1], 0.0);
}

TEST(Multicut, TriangleExample) {
    // θ(0,1) = +2, θ(1,2) = +1, θ(0,2) = -3
    const SignedGraph g(3, std::vector<Edge>{{0, 1, 2, kA}, {1, 2, 1, kA}, {0, 2, 3, kR}});
    const EdgeCosts costs = signed_costs_from_mws_graph(g, 1);
    const MulticutSolution mc = brute_force_multicut(g, costs);
    EXPECT_EQ(mc.energy, -2.0);
    ASSERT_EQ(mc.minimizers.size(), 1u);
    EXPECT_EQ(mc.minimizers[0].labels, (std::vector<std::uint32_t>{0, 0, 1}));

    // the five partitions, in restricted-growth order
    const std::vector<std::vector<std::uint32_t>> parts{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};
    std::vector<double> energies;
    for (const auto& lab : parts) {
        double e = 0;
        if (lab[0] != lab[1]) e += 2;
        if (lab[1] != lab[2]) e += 1;
        if (lab[0] != lab[2]) e -= 3;
        energies.push_back(e);
    }
    EXPECT_EQ(energies, (std::vector<double>{0, -2, 3, -1, 0}));
}

TEST(Multicut, SignOnlyCases) {
    const SignedGraph pos(3, std::vector<Edge>{{0, 1, 1, kA}, {1, 2, 2, kA}});
    const MulticutSolution a = brute_force_multicut(pos, signed_costs_from_mws_graph(pos, 1));
    EXPECT_EQ(a.energy, 0.0);
    ASSERT_EQ(a.minimizers.size(), 1u);
    EXPECT_EQ(a.minimizers[0].num_clusters, 1u);

    const SignedGraph neg(3, std::vector<Edge>{{0, 1, 1, kR}, {1, 2, 2, kR}, {0, 2, 4, kR}});
    const MulticutSolution b = brute_force_multicut(neg, signed_costs_from_mws_graph(neg, 1));
    EXPECT_EQ(b.energy, -7.0);
    ASSERT_EQ(b.minimizers.size(), 1u);
    EXPECT_EQ(b.minimizers[0].num_clusters, 3u);
}

TEST(Multicut, ReportsAllMinimizers) {
    // no edges between {0,1} and {2}: merging or not costs the same
    const SignedGraph g(3, std::vector<Edge>{{0, 1, 1, kA}});
    const MulticutSolution mc = brute_force_multicut(g, signed_costs_from_mws_graph(g, 1));
    EXPECT_EQ(mc.minimizers.size(), 2u);
}

TEST(Multicut, Errors) {
    const SignedGraph big(11, std::vector<Edge>{});
    EXPECT_THROW(brute_force_multicut(big, {}), InputError);
    EXPECT_THROW(brute_force_multicut(triangle(), EdgeCosts{}), InputError);
}

TEST(CycleInequalities, FrustratedCycleFails) {
    EXPECT_FALSE(cycle_inequalities_hold(triangle(), ActiveSet({0, 1}, {0})));
}

TEST(CycleInequalities, EmptyAndSolverOutputsHold) {
    EXPECT_TRUE(cycle_inequalities_hold(triangle(), {}));
    EXPECT_TRUE(cycle_inequalities_hold(triangle(), solve_efficient(triangle(), SolveOptions{}).active));
}

TEST(CycleInequalities, SizeBound) {
    std::vector<Edge> many;
    for (VertexId i = 0; i < 21; ++i) many.push_back({i, i + 1, 1, kA});
    EXPECT_THROW(cycle_inequalities_hold(SignedGraph(22, many), {}), InputError);
}
