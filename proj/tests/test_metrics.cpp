#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mws/bench.hpp"
#include "mws/metrics.hpp"

using namespace mws;

namespace {

LabelVolume row(std::vector<std::uint32_t> labels) {
    LabelVolume v({1, 1, labels.size()});
    v.labels = std::move(labels);
    return v;
}

LabelVolume random_labels(std::mt19937_64& rng, std::size_t n, std::uint32_t k) {
    std::vector<std::uint32_t> l(n);
    std::uniform_int_distribution<std::uint32_t> d(0, k - 1);
    for (auto& x : l) x = d(rng);
    return row(std::move(l));
}

LabelVolume permuted(const LabelVolume& v, std::uint32_t shift) {
    LabelVolume out = v;
    for (auto& l : out.labels) l = (l * 7919u + shift) ^ 0x55u;
    return out;
}

} // namespace

TEST(RandF, Identity) {
    const LabelVolume a = row({0, 0, 1, 2, 2, 2});
    EXPECT_EQ(rand_f_score(a, a), 1.0);
}

TEST(RandF, SingleClusterAgainstSingletons) {
    EXPECT_DOUBLE_EQ(rand_f_score(row({7, 7, 7, 7}), row({0, 1, 2, 3})), 0.4);
}

TEST(RandF, PermutationInvariant) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const LabelVolume a = random_labels(rng, 200, 6), b = random_labels(rng, 200, 4);
        EXPECT_EQ(rand_f_score(a, a), 1.0);
        EXPECT_EQ(rand_f_score(permuted(a, 3), a), 1.0);
        EXPECT_DOUBLE_EQ(rand_f_score(permuted(a, 5), permuted(b, 9)), rand_f_score(a, b));
    }
}

TEST(RandF, SymmetricAndBounded) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const LabelVolume a = random_labels(rng, 100, 5), b = random_labels(rng, 100, 3);
        const double f = rand_f_score(a, b);
        EXPECT_DOUBLE_EQ(f, rand_f_score(b, a));
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
}

TEST(RandF, IgnoreReferenceZero) {
    const LabelVolume ref = row({0, 0, 1, 1, 2, 2});
    const LabelVolume pred = row({5, 6, 1, 1, 2, 2});
    EXPECT_LT(rand_f_score(pred, ref), 1.0);
    EXPECT_EQ(rand_f_score(pred, ref, true), 1.0);
    EXPECT_EQ(rand_f_score(pred, row({0, 0, 0, 0, 0, 0}), true), 1.0);
}

TEST(Metrics, ShapeMismatch) {
    const LabelVolume a = row({0, 1, 2, 3});
    LabelVolume b({1, 2, 2});
    b.labels = {0, 1, 2, 3};
    EXPECT_THROW(rand_f_score(a, b), InputError);
    EXPECT_THROW(variation_of_information(a, b), InputError);
    LabelVolume short_data({1, 1, 4});
    short_data.labels.pop_back();
    EXPECT_THROW(rand_f_score(a, short_data), InputError);
}

TEST(Vi, IdentityIsExactlyZero) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const LabelVolume a = random_labels(rng, 1000, 17);
        const auto vi = variation_of_information(a, permuted(a, 1));
        EXPECT_EQ(vi.split, 0.0);
        EXPECT_EQ(vi.merge, 0.0);
    }
}

TEST(Vi, MergingTwoHalves) {
    const auto vi = variation_of_information(row({0, 0, 0, 0, 0, 0}), row({1, 1, 1, 2, 2, 2}));
    EXPECT_DOUBLE_EQ(vi.merge, std::log(2.0));
    EXPECT_EQ(vi.split, 0.0);
    EXPECT_DOUBLE_EQ(vi.total(), std::log(2.0));
}

TEST(Vi, RefinementHasNoMerge) {
    const auto vi = variation_of_information(row({0, 1, 2, 2, 3, 4}), row({0, 0, 1, 1, 2, 2}));
    EXPECT_EQ(vi.merge, 0.0);
    EXPECT_NEAR(vi.split, 4.0 / 6.0 * std::log(2.0), 1e-15);
}

TEST(Vi, SwapExchangesComponents) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const LabelVolume a = random_labels(rng, 300, 5), b = random_labels(rng, 300, 8);
        const auto ab = variation_of_information(a, b), ba = variation_of_information(b, a);
        EXPECT_NEAR(ab.split, ba.merge, 1e-12);
        EXPECT_NEAR(ab.merge, ba.split, 1e-12);
        EXPECT_GE(ab.split, 0.0);
        EXPECT_GE(ab.merge, 0.0);
        const auto pp = variation_of_information(permuted(a, 2), permuted(b, 4));
        EXPECT_NEAR(pp.split, ab.split, 1e-12);
        EXPECT_NEAR(pp.merge, ab.merge, 1e-12);
    }
}

TEST(Vi, MatchesEntropyDifferences) {
    // H(pred|ref) = H(pred, ref) - H(ref), computed from scratch
    std::mt19937_64 rng(5);
    const LabelVolume a = random_labels(rng, 500, 4), b = random_labels(rng, 500, 3);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
    std::map<std::uint32_t, double> ma, mb;
    for (std::size_t i = 0; i < 500; ++i) {
        joint[{a.labels[i], b.labels[i]}] += 1.0 / 500;
        ma[a.labels[i]] += 1.0 / 500;
        mb[b.labels[i]] += 1.0 / 500;
    }
    auto h = [](const auto& m) {
        double s = 0;
        for (const auto& [k, p] : m) s -= p * std::log(p);
        return s;
    };
    const auto vi = variation_of_information(a, b);
    EXPECT_NEAR(vi.split, h(joint) - h(mb), 1e-12);
    EXPECT_NEAR(vi.merge, h(joint) - h(ma), 1e-12);
}

TEST(Vi, IgnoreReferenceZero) {
    const auto vi = variation_of_information(row({9, 8, 1, 1}), row({0, 0, 1, 1}), true);
    EXPECT_EQ(vi.split, 0.0);
    EXPECT_EQ(vi.merge, 0.0);
}

TEST(Contingency, CountsAreConsistent) {
    const ContingencyTable t(std::vector<std::uint32_t>{1, 1, 2, 2, 2}, std::vector<std::uint32_t>{5, 6, 6, 6, 0},
                             false);
    EXPECT_EQ(t.total(), 5u);
    std::uint64_t sum = 0;
    for (const auto& c : t.cells()) sum += c.count;
    EXPECT_EQ(sum, 5u);
    EXPECT_EQ(t.cells().size(), 4u);
    EXPECT_EQ(t.pred_counts().size(), 2u);
    EXPECT_EQ(t.ref_counts().size(), 3u);
    const ContingencyTable masked(std::vector<std::uint32_t>{1, 1, 2, 2, 2},
                                  std::vector<std::uint32_t>{5, 6, 6, 6, 0}, true);
    EXPECT_EQ(masked.total(), 4u);
}

TEST(Metrics, LargeVolumes) {
    const LabelVolume gt = synth_labels({1, 256, 256}, 1);
    EXPECT_EQ(rand_f_score(gt, gt), 1.0);
    LabelVolume merged = gt;
    for (auto& l : merged.labels) l = l % 2;
    EXPECT_LT(rand_f_score(merged, gt), 1.0);
    EXPECT_EQ(variation_of_information(merged, gt).split, 0.0);
    EXPECT_GT(variation_of_information(merged, gt).merge, 0.0);
}
