#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "mws/graph.hpp"

namespace mws {

// Which of two mutex tables is kept when clusters merge. Only
// smaller_into_larger gives the min(|M[Ci]|, |M[Cj]|) merge cost; the
// randomized order exists to show the choice cannot change any outcome.
enum class AbsorbOrder : std::uint8_t { smaller_into_larger, randomized };

struct MutexStats {
    std::uint64_t merges = 0;
    std::uint64_t mutexes_added = 0;
    std::uint64_t mutex_checks = 0;
    // Sums of min(|M[Ci]|, |M[Cj]|) sampled at every check and every merge.
    std::uint64_t check_min_table_sum = 0;
    std::uint64_t merge_min_table_sum = 0;

    double mean_min_table_at_check() const {
        return mutex_checks ? static_cast<double>(check_min_table_sum) / static_cast<double>(mutex_checks) : 0.0;
    }
    double mean_min_table_at_merge() const {
        return merges ? static_cast<double>(merge_min_table_sum) / static_cast<double>(merges) : 0.0;
    }
};

/// Disjoint-set forest (union by rank, iterative path compression) where
/// every root additionally owns a hash table M[C] of the active repulsive
/// edges touching its cluster.
///
/// Tables live inline, one per vertex; only roots hold entries. Two clusters
/// are mutually exclusive iff their tables intersect.
class MutexUnionFind {
public:
    using MutexTable = absl::flat_hash_set<EdgeId>;

    explicit MutexUnionFind(std::size_t num_vertices, bool record_stats = false)
        : parent_(num_vertices), rank_(num_vertices, 0), tables_(num_vertices), record_stats_(record_stats) {
        for (std::size_t i = 0; i < num_vertices; ++i) parent_[i] = static_cast<VertexId>(i);
    }

    void set_absorb_order(AbsorbOrder order, std::uint64_t seed = 0) {
        absorb_order_ = order;
        coin_.seed(seed);
    }

    std::size_t size() const noexcept { return parent_.size(); }

    VertexId find(VertexId x) noexcept {
        VertexId root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const VertexId next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    bool connected(VertexId i, VertexId j) noexcept { return find(i) == find(j); }

    bool check_mutex(VertexId i, VertexId j) { return roots_mutex(find(i), find(j)); }

    void merge(VertexId i, VertexId j) {
        const VertexId ri = find(i), rj = find(j);
        if (ri == rj) throw std::logic_error("merge: vertices already in one cluster");
        if (roots_mutex(ri, rj)) throw std::logic_error("merge: clusters are mutually exclusive");
        merge_roots(ri, rj);
    }

    void add_mutex(VertexId i, VertexId j, EdgeId edge) {
        const VertexId ri = find(i), rj = find(j);
        if (ri == rj) throw std::logic_error("add_mutex: vertices already in one cluster");
        add_mutex_roots(ri, rj, edge);
    }

    // Unchecked operations on roots, for solvers that already hold find().

    bool roots_mutex(VertexId ri, VertexId rj) {
        const MutexTable* a = &tables_[ri];
        const MutexTable* b = &tables_[rj];
        const std::size_t na = a->size();
        const std::size_t nb = b->size();
        if (record_stats_) {
            ++stats_.mutex_checks;
            stats_.check_min_table_sum += std::min(na, nb);
        }
        if (na == 0 || nb == 0) return false;
        if (na > nb) std::swap(a, b);
        for (EdgeId e : *a)
            if (b->count(e)) return true;
        return false;
    }

    // Returns the surviving root.
    VertexId merge_roots(VertexId ri, VertexId rj) {
        if (rank_[ri] < rank_[rj]) std::swap(ri, rj);
        parent_[rj] = ri;
        if (rank_[ri] == rank_[rj]) ++rank_[ri];

        auto& keep = tables_[ri];
        auto& gone = tables_[rj];
        if (record_stats_) {
            ++stats_.merges;
            stats_.merge_min_table_sum += std::min(keep.size(), gone.size());
        }
        if (!gone.empty()) {
            if (keep.empty()) {
                keep.swap(gone);
            } else {
                if (absorb_first(keep, gone)) keep.swap(gone);
                keep.insert(gone.begin(), gone.end());
                MutexTable().swap(gone); // release the storage, clear() keeps it
            }
        }
        return ri;
    }

    void add_mutex_roots(VertexId ri, VertexId rj, EdgeId edge) {
        tables_[ri].insert(edge);
        tables_[rj].insert(edge);
        if (record_stats_) ++stats_.mutexes_added;
    }

    // nullptr when the cluster rooted at `root` has no mutex edges.
    const MutexTable* mutex_table(VertexId root) const {
        const MutexTable& t = tables_.at(root);
        return t.empty() ? nullptr : &t;
    }

    std::vector<VertexId> roots_with_tables() const {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < tables_.size(); ++i)
            if (!tables_[i].empty()) out.push_back(static_cast<VertexId>(i));
        return out;
    }

    const MutexStats& stats() const noexcept { return stats_; }

private:
    // True when `gone` should be the table that survives (i.e. `keep` is the
    // one iterated and absorbed).
    bool absorb_first(const MutexTable& keep, const MutexTable& gone) {
        if (absorb_order_ == AbsorbOrder::randomized) return (coin_() & 1u) != 0;
        return gone.size() > keep.size();
    }

    std::vector<VertexId> parent_;
    std::vector<std::uint8_t> rank_;
    std::vector<MutexTable> tables_; // empty table: no mutex edges
    bool record_stats_ = false;
    MutexStats stats_;
    AbsorbOrder absorb_order_ = AbsorbOrder::smaller_into_larger;
    std::mt19937_64 coin_;
};

} // namespace mws
