#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mws/grid.hpp"

namespace mws {

/// Joint label counts n_st of a (predicted, reference) pair of labelings.
/// Labels are mapped to dense indices in order of first appearance.
class ContingencyTable {
public:
    struct Cell {
        std::uint32_t pred, ref;
        std::uint64_t count;
    };

    ContingencyTable(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> ref, bool ignore_ref_zero) {
        if (pred.size() != ref.size()) throw InputError("label volumes differ in size");
        std::unordered_map<std::uint32_t, std::uint32_t> pi, ri;
        std::unordered_map<std::uint64_t, std::size_t> cell_of;
        for (std::size_t k = 0; k < pred.size(); ++k) {
            if (ignore_ref_zero && ref[k] == 0) continue;
            const auto [ps, pnew] = pi.try_emplace(pred[k], static_cast<std::uint32_t>(pred_counts_.size()));
            if (pnew) pred_counts_.push_back(0);
            const auto [rs, rnew] = ri.try_emplace(ref[k], static_cast<std::uint32_t>(ref_counts_.size()));
            if (rnew) ref_counts_.push_back(0);
            ++pred_counts_[ps->second];
            ++ref_counts_[rs->second];
            const auto [c, cnew] =
                cell_of.try_emplace(static_cast<std::uint64_t>(ps->second) << 32 | rs->second, cells_.size());
            if (cnew) cells_.push_back({ps->second, rs->second, 0});
            ++cells_[c->second].count;
            ++total_;
        }
    }

    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> pred_counts() const noexcept { return pred_counts_; }
    std::span<const std::uint64_t> ref_counts() const noexcept { return ref_counts_; }
    // Non-zero cells only.
    std::span<const Cell> cells() const noexcept { return cells_; }

private:
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> pred_counts_, ref_counts_;
    std::vector<Cell> cells_;
};

namespace detail {

inline void check_same_shape(const LabelVolume& a, const LabelVolume& b) {
    if (!(a.shape == b.shape)) throw InputError("label volumes have different shapes");
    if (a.labels.size() != a.shape.size() || b.labels.size() != b.shape.size())
        throw InputError("label volume: data size mismatch");
}

inline double sum_squares(std::span<const std::uint64_t> counts) {
    long double s = 0;
    for (std::uint64_t c : counts) s += static_cast<long double>(c) * static_cast<long double>(c);
    return static_cast<double>(s);
}

} // namespace detail

/// Adapted Rand F-score: harmonic mean of pairwise precision Σp²/Σs² and
/// recall Σp²/Σt². Returns 1 when no voxel is counted.
inline double rand_f_score(const LabelVolume& pred, const LabelVolume& ref, bool ignore_ref_zero = false) {
    detail::check_same_shape(pred, ref);
    const ContingencyTable t(pred.labels, ref.labels, ignore_ref_zero);
    if (t.total() == 0) return 1.0;
    // the 1/N² factors cancel, so integer counts can be used directly
    long double joint_sq = 0;
    for (const auto& c : t.cells()) joint_sq += static_cast<long double>(c.count) * static_cast<long double>(c.count);
    const double joint = static_cast<double>(joint_sq);
    const double precision = joint / detail::sum_squares(t.pred_counts());
    const double recall = joint / detail::sum_squares(t.ref_counts());
    return 2.0 * precision * recall / (precision + recall);
}

struct VariationOfInformation {
    double split = 0.0; // H(pred | ref)
    double merge = 0.0; // H(ref | pred)

    double total() const noexcept { return split + merge; }
};

/// Conditional entropies in nats, summed cell by cell so that a labeling
/// compared with itself gives exactly zero.
inline VariationOfInformation variation_of_information(const LabelVolume& pred, const LabelVolume& ref,
                                                       bool ignore_ref_zero = false) {
    detail::check_same_shape(pred, ref);
    const ContingencyTable t(pred.labels, ref.labels, ignore_ref_zero);
    if (t.total() == 0) return {};
    const double n = static_cast<double>(t.total());
    VariationOfInformation vi;
    for (const auto& c : t.cells()) {
        const double p = static_cast<double>(c.count) / n;
        const double count = static_cast<double>(c.count);
        vi.split -= p * std::log(count / static_cast<double>(t.ref_counts()[c.ref]));
        vi.merge -= p * std::log(count / static_cast<double>(t.pred_counts()[c.pred]));
    }
    return {std::max(0.0, vi.split), std::max(0.0, vi.merge)};
}

} // namespace mws
