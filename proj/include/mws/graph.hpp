#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "mws/error.hpp"

namespace mws {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Polarity : std::uint8_t { attractive, repulsive };

inline char polarity_symbol(Polarity p) { return p == Polarity::attractive ? '+' : '-'; }

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 0.0;
    Polarity polarity = Polarity::attractive;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Edge ids are counted separately per polarity class, so a reference always
// carries the class it indexes into.
struct EdgeRef {
    Polarity polarity = Polarity::attractive;
    EdgeId id = 0;

    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
    friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Undirected graph with an attractive edge set E+ and a repulsive edge set E-.
///
/// Immutable after construction. Edges keep their insertion order (used for
/// serialization) and get a per-polarity id equal to their rank among the
/// edges of the same polarity.
class SignedGraph {
public:
    SignedGraph() = default;

    SignedGraph(std::size_t num_vertices, std::span<const Edge> edges) : num_vertices_(num_vertices) {
        if (num_vertices > std::size_t{UINT32_MAX})
            throw InputError("too many vertices");
        order_.reserve(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Edge& e = edges[k];
            const std::string where = "edge " + std::to_string(k) + ": ";
            if (e.u >= num_vertices || e.v >= num_vertices)
                throw InputError(where + "vertex id out of range");
            if (e.u == e.v)
                throw InputError(where + "self-loop");
            if (!std::isfinite(e.weight) || !(e.weight >= 0.0))
                throw InputError(where + "weight must be finite and non-negative");
            auto& bucket = e.polarity == Polarity::attractive ? attractive_ : repulsive_;
            if (bucket.size() >= std::size_t{UINT32_MAX})
                throw InputError("too many edges");
            order_.push_back({e.polarity, static_cast<EdgeId>(bucket.size())});
            bucket.push_back(e);
        }
        reject_parallel(attractive_, "attractive");
        reject_parallel(repulsive_, "repulsive");
        unique_weights_ = compute_unique_weights();
    }

    SignedGraph(std::size_t num_vertices, std::initializer_list<Edge> edges)
        : SignedGraph(num_vertices, std::span<const Edge>(edges.begin(), edges.size())) {}

    std::size_t num_vertices() const noexcept { return num_vertices_; }
    std::size_t num_edges() const noexcept { return order_.size(); }
    std::size_t num_attractive() const noexcept { return attractive_.size(); }
    std::size_t num_repulsive() const noexcept { return repulsive_.size(); }

    std::span<const Edge> attractive_edges() const noexcept { return attractive_; }
    std::span<const Edge> repulsive_edges() const noexcept { return repulsive_; }

    std::size_t count(Polarity p) const noexcept {
        return p == Polarity::attractive ? attractive_.size() : repulsive_.size();
    }

    const Edge& edge(EdgeRef ref) const {
        return ref.polarity == Polarity::attractive ? attractive_.at(ref.id) : repulsive_.at(ref.id);
    }

    // Insertion order, e.g. the line order of a graph file.
    std::span<const EdgeRef> insertion_order() const noexcept { return order_; }

    // True iff no two edges (of any polarity) share a weight. Compared by exact
    // representation, no tolerance.
    bool unique_weights() const noexcept { return unique_weights_; }

    friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
        return a.num_vertices_ == b.num_vertices_ && a.order_ == b.order_ &&
               a.attractive_ == b.attractive_ && a.repulsive_ == b.repulsive_;
    }

private:
    static void reject_parallel(std::span<const Edge> edges, const char* what) {
        std::vector<std::uint64_t> keys;
        keys.reserve(edges.size());
        for (const Edge& e : edges) {
            const std::uint64_t lo = std::min(e.u, e.v);
            const std::uint64_t hi = std::max(e.u, e.v);
            keys.push_back(lo << 32 | hi);
        }
        std::sort(keys.begin(), keys.end());
        auto dup = std::adjacent_find(keys.begin(), keys.end());
        if (dup != keys.end())
            throw InputError(std::string("duplicate ") + what + " edge between " +
                             std::to_string(*dup >> 32) + " and " + std::to_string(*dup & 0xffffffffu));
    }

    bool compute_unique_weights() const {
        std::vector<double> w;
        w.reserve(num_edges());
        for (const Edge& e : attractive_) w.push_back(e.weight);
        for (const Edge& e : repulsive_) w.push_back(e.weight);
        std::sort(w.begin(), w.end());
        return std::adjacent_find(w.begin(), w.end()) == w.end();
    }

    std::size_t num_vertices_ = 0;
    std::vector<Edge> attractive_;
    std::vector<Edge> repulsive_;
    std::vector<EdgeRef> order_;
    bool unique_weights_ = true;
};

/// A = A+ ∪ A-, stored as two sorted, duplicate-free lists of edge ids.
class ActiveSet {
public:
    ActiveSet() = default;

    ActiveSet(std::vector<EdgeId> attractive, std::vector<EdgeId> repulsive)
        : attractive_(std::move(attractive)), repulsive_(std::move(repulsive)) {
        normalize(attractive_);
        normalize(repulsive_);
    }

    // Skips the sort for lists that are already ascending and duplicate-free.
    static ActiveSet from_sorted(std::vector<EdgeId> attractive, std::vector<EdgeId> repulsive) {
        auto strictly_ascending = [](const std::vector<EdgeId>& ids) {
            return std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<>()) == ids.end();
        };
        if (!strictly_ascending(attractive) || !strictly_ascending(repulsive))
            throw std::logic_error("ActiveSet::from_sorted: ids not strictly ascending");
        ActiveSet a;
        a.attractive_ = std::move(attractive);
        a.repulsive_ = std::move(repulsive);
        return a;
    }

    std::span<const EdgeId> attractive() const noexcept { return attractive_; }
    std::span<const EdgeId> repulsive() const noexcept { return repulsive_; }
    std::span<const EdgeId> ids(Polarity p) const noexcept {
        return p == Polarity::attractive ? attractive() : repulsive();
    }

    std::size_t size() const noexcept { return attractive_.size() + repulsive_.size(); }
    bool empty() const noexcept { return size() == 0; }

    bool contains(EdgeRef ref) const {
        const auto& ids = list(ref.polarity);
        return std::binary_search(ids.begin(), ids.end(), ref.id);
    }

    void insert(EdgeRef ref) {
        auto& ids = list(ref.polarity);
        auto it = std::lower_bound(ids.begin(), ids.end(), ref.id);
        if (it == ids.end() || *it != ref.id) ids.insert(it, ref.id);
    }

    void erase(EdgeRef ref) {
        auto& ids = list(ref.polarity);
        auto it = std::lower_bound(ids.begin(), ids.end(), ref.id);
        if (it != ids.end() && *it == ref.id) ids.erase(it);
    }

    std::vector<EdgeRef> refs() const {
        std::vector<EdgeRef> out;
        out.reserve(size());
        for (EdgeId id : attractive_) out.push_back({Polarity::attractive, id});
        for (EdgeId id : repulsive_) out.push_back({Polarity::repulsive, id});
        return out;
    }

    friend ActiveSet set_union(const ActiveSet& a, const ActiveSet& b) {
        ActiveSet out;
        std::set_union(a.attractive_.begin(), a.attractive_.end(), b.attractive_.begin(), b.attractive_.end(),
                       std::back_inserter(out.attractive_));
        std::set_union(a.repulsive_.begin(), a.repulsive_.end(), b.repulsive_.begin(), b.repulsive_.end(),
                       std::back_inserter(out.repulsive_));
        return out;
    }

    friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

private:
    static void normalize(std::vector<EdgeId>& ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
    std::vector<EdgeId>& list(Polarity p) { return p == Polarity::attractive ? attractive_ : repulsive_; }
    const std::vector<EdgeId>& list(Polarity p) const {
        return p == Polarity::attractive ? attractive_ : repulsive_;
    }

    std::vector<EdgeId> attractive_;
    std::vector<EdgeId> repulsive_;
};

/// Vertex -> cluster label. Canonical labels are numbered in order of each
/// cluster's smallest vertex id.
struct Clustering {
    std::vector<std::uint32_t> labels;
    std::size_t num_clusters = 0;

    // Relabels an arbitrary labelling into canonical form: scanning vertices
    // in id order, each new raw label gets the next dense label.
    template <class Label>
    static Clustering canonical(std::span<const Label> raw) {
        Clustering c;
        c.labels.resize(raw.size());
        if constexpr (std::is_integral_v<Label> && std::is_unsigned_v<Label>) {
            const Label top = raw.empty() ? Label{0} : *std::max_element(raw.begin(), raw.end());
            if (static_cast<std::uint64_t>(top) <= 4 * static_cast<std::uint64_t>(raw.size())) {
                std::vector<std::uint32_t> dense(static_cast<std::size_t>(top) + 1, UINT32_MAX);
                for (std::size_t i = 0; i < raw.size(); ++i) {
                    auto& slot = dense[static_cast<std::size_t>(raw[i])];
                    if (slot == UINT32_MAX) slot = static_cast<std::uint32_t>(c.num_clusters++);
                    c.labels[i] = slot;
                }
                return c;
            }
        }
        std::unordered_map<Label, std::uint32_t> relabel;
        relabel.reserve(64);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto [it, fresh] = relabel.try_emplace(raw[i], static_cast<std::uint32_t>(c.num_clusters));
            if (fresh) ++c.num_clusters;
            c.labels[i] = it->second;
        }
        return c;
    }

    template <class Label>
    static Clustering canonical(const std::vector<Label>& raw) {
        return canonical(std::span<const Label>(raw));
    }

    friend bool operator==(const Clustering&, const Clustering&) = default;
};

} // namespace mws
