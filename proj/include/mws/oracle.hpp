#pragma once

// Exhaustive ground truth for small instances. Everything here is
// exponential; size bounds are enforced up front.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "mws/graph.hpp"
#include "mws/predicates.hpp"

namespace mws {

class NoDominantPower : public InputError {
public:
    using InputError::InputError;
};

struct DominantPower {
    unsigned exponent = 1;
    bool certified = false;
};

struct EnergyReport {
    ActiveSet active;
    double energy = 0.0; // T(A) = -Σ_{e ∈ A} w_e^p
    unsigned p = 1;
};

struct EdgeCosts {
    std::vector<double> attractive;
    std::vector<double> repulsive;
};

struct MulticutSolution {
    std::vector<Clustering> minimizers; // in restricted-growth-string order
    double energy = 0.0;
};

inline constexpr std::size_t kMaxBruteForceEdges = 25;
inline constexpr std::size_t kMaxMulticutVertices = 10;
inline constexpr std::size_t kMaxCycleEdges = 20;

namespace detail {

namespace bmp = boost::multiprecision;
using BigInt = bmp::cpp_int;
using BigFloat = bmp::number<bmp::cpp_bin_float<256>>;

// Every finite double is m·2^e with an integer m; scaling a whole set by a
// common power of two turns it into exact integers without changing any
// ratio, so w^p comparisons can be done in integer arithmetic.
struct ScaledWeights {
    std::vector<BigInt> values;
    int exponent = 0; // w_i = values[i] · 2^exponent
};

inline ScaledWeights scale_to_integers(std::span<const double> weights) {
    ScaledWeights out;
    out.values.resize(weights.size());
    std::vector<std::pair<std::int64_t, int>> parts(weights.size(), {0, 0});
    bool any = false;
    int low = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and non-negative");
        if (w == 0.0) continue;
        int e = 0;
        const double f = std::frexp(w, &e); // w = f·2^e, f ∈ [0.5, 1)
        parts[i] = {static_cast<std::int64_t>(std::ldexp(f, 53)), e - 53};
        low = any ? std::min(low, e - 53) : e - 53;
        any = true;
    }
    out.exponent = low;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (parts[i].first == 0) continue;
        out.values[i] = BigInt(parts[i].first) << static_cast<unsigned>(parts[i].second - low);
    }
    return out;
}

// `sorted` ascending and positive; equal values are only compared against
// the strictly smaller ones, but all of them count towards later sums.
inline bool dominates(std::span<const BigInt> sorted, unsigned p) {
    BigInt below = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const BigInt wp = bmp::pow(sorted[i], p);
        if (!(wp > below)) return false;
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        below += wp * (j - i);
        i = j;
    }
    return true;
}

inline double to_double_checked(const BigInt& scaled_sum, long long binary_exponent) {
    if (scaled_sum == 0) return 0.0;
    BigFloat x(scaled_sum);
    x = bmp::ldexp(x, static_cast<int>(binary_exponent));
    const double d = x.convert_to<double>();
    if (!std::isfinite(d) || d == 0.0) throw InputError("energy magnitude not representable as a double");
    return d;
}

inline std::vector<double> all_weights(const SignedGraph& g) {
    std::vector<double> w;
    w.reserve(g.num_edges());
    for (const Edge& e : g.attractive_edges()) w.push_back(e.weight);
    for (const Edge& e : g.repulsive_edges()) w.push_back(e.weight);
    return w;
}

inline std::size_t flat_index(const SignedGraph& g, EdgeRef r) {
    return r.polarity == Polarity::attractive ? r.id : g.num_attractive() + r.id;
}

} // namespace detail

/// Whether w_e^p > Σ_{w_t < w_e} w_t^p holds for every positive weight,
/// evaluated exactly. Zero weights contribute nothing and are not tested.
inline bool is_dominant_power(std::span<const double> weights, unsigned p) {
    auto scaled = detail::scale_to_integers(weights);
    std::vector<detail::BigInt> pos;
    for (auto& v : scaled.values)
        if (v > 0) pos.push_back(v);
    std::sort(pos.begin(), pos.end());
    return detail::dominates(pos, p);
}

/// Smallest positive integer exponent p making every positive weight
/// dominate the sum of all strictly smaller weights raised to p.
///
/// Duplicate positive weights are rejected: the optimality theory assumes
/// unique weights. Weight-zero entries are energetically neutral at every
/// p and are exempt from the condition.
inline DominantPower minimal_dominant_power(std::span<const double> weights, unsigned max_exponent = 4096) {
    auto scaled = detail::scale_to_integers(weights);
    std::vector<detail::BigInt> pos;
    for (auto& v : scaled.values)
        if (v > 0) pos.push_back(v);
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end())
        throw NoDominantPower("duplicate positive weights admit no dominant power");
    if (detail::dominates(pos, 1)) return {1, true};

    // The condition is monotone in p (each ratio w_t/w_e < 1 shrinks), so
    // bracket by doubling, then bisect.
    unsigned lo = 1, hi = 2;
    while (!detail::dominates(pos, hi)) {
        lo = hi;
        if (hi >= max_exponent) throw NoDominantPower("no dominant power up to " + std::to_string(max_exponent));
        hi = std::min(hi * 2, max_exponent);
    }
    while (hi - lo > 1) {
        const unsigned mid = lo + (hi - lo) / 2;
        (detail::dominates(pos, mid) ? hi : lo) = mid;
    }
    return {hi, true};
}

inline DominantPower minimal_dominant_power(const SignedGraph& g, unsigned max_exponent = 4096) {
    const auto w = detail::all_weights(g);
    return minimal_dominant_power(w, max_exponent);
}

/// T(A) = -Σ_{e ∈ A} w_e^p, summed exactly and rounded once.
inline double mws_energy(const SignedGraph& g, const ActiveSet& a, unsigned p) {
    detail::check_ids(g, a);
    std::vector<double> w;
    for (EdgeRef r : a.refs()) w.push_back(g.edge(r).weight);
    auto scaled = detail::scale_to_integers(w);
    detail::BigInt sum = 0;
    for (auto& v : scaled.values) sum += detail::bmp::pow(v, p);
    return -detail::to_double_checked(sum, static_cast<long long>(scaled.exponent) * p);
}

/// Exhaustive minimizer of T(A) over A ⊆ E \ A0 with C0(A ∪ A0) = C1(A ∪ A0) = ∅.
///
/// Subsets are enumerated depth-first; a branch is cut as soon as the
/// partial set violates a constraint, which loses nothing because every
/// superset of an infeasible set is infeasible too.
inline EnergyReport brute_force_mws(const SignedGraph& g, const ActiveSet& initial_active, unsigned p) {
    if (g.num_edges() > kMaxBruteForceEdges)
        throw InputError("brute force limited to " + std::to_string(kMaxBruteForceEdges) + " edges");
    if (p == 0) throw InputError("exponent must be positive");
    require_consistent(g, initial_active, "initial active set");

    const auto scaled = detail::scale_to_integers(detail::all_weights(g));
    std::vector<detail::BigInt> powered(scaled.values.size());
    for (std::size_t i = 0; i < powered.size(); ++i) powered[i] = detail::bmp::pow(scaled.values[i], p);

    std::vector<EdgeRef> free_edges;
    for (EdgeId id = 0; id < g.num_attractive(); ++id)
        if (!initial_active.contains({Polarity::attractive, id})) free_edges.push_back({Polarity::attractive, id});
    for (EdgeId id = 0; id < g.num_repulsive(); ++id)
        if (!initial_active.contains({Polarity::repulsive, id})) free_edges.push_back({Polarity::repulsive, id});

    ActiveSet current = initial_active;
    ActiveSet chosen;
    detail::BigInt sum = 0;
    detail::BigInt best = -1;
    ActiveSet best_set;
    bool tied = false;

    std::function<void(std::size_t)> visit = [&](std::size_t k) {
        if (k == free_edges.size()) {
            if (sum > best) {
                best = sum;
                best_set = chosen;
                tied = false;
            } else if (sum == best) {
                tied = true;
            }
            return;
        }
        const EdgeRef r = free_edges[k];
        current.insert(r);
        if (is_forest(g, current) && !has_violating_cycle(g, current)) {
            chosen.insert(r);
            sum += powered[detail::flat_index(g, r)];
            visit(k + 1);
            sum -= powered[detail::flat_index(g, r)];
            chosen.erase(r);
        }
        current.erase(r);
        visit(k + 1);
    };
    visit(0);

    if (tied)
        throw InvariantError("brute force: several active sets share the minimal energy "
                             "(duplicate weights or a non-dominant exponent)");
    EnergyReport report;
    report.active = std::move(best_set);
    report.p = p;
    report.energy = -detail::to_double_checked(best, static_cast<long long>(scaled.exponent) * p);
    return report;
}

/// Attractive w ↦ +w^p, repulsive w ↦ -w^p: the signed multicut costs whose
/// minimizer coincides with the Mutex Watershed objective once p dominates.
inline EdgeCosts signed_costs_from_mws_graph(const SignedGraph& g, double p) {
    EdgeCosts c;
    for (const Edge& e : g.attractive_edges()) c.attractive.push_back(std::pow(e.weight, p));
    for (const Edge& e : g.repulsive_edges()) c.repulsive.push_back(-std::pow(e.weight, p));
    return c;
}

/// Exhaustive multicut: minimizes the summed cost of cut edges over all
/// partitions of V, enumerated as restricted growth strings.
inline MulticutSolution brute_force_multicut(const SignedGraph& g, const EdgeCosts& costs) {
    const std::size_t n = g.num_vertices();
    if (n > kMaxMulticutVertices)
        throw InputError("multicut brute force limited to " + std::to_string(kMaxMulticutVertices) + " vertices");
    if (costs.attractive.size() != g.num_attractive() || costs.repulsive.size() != g.num_repulsive())
        throw InputError("cost vector does not match the graph");

    MulticutSolution out;
    if (n == 0) {
        out.minimizers.push_back({});
        return out;
    }

    auto energy_of = [&](const std::vector<std::uint32_t>& lab) {
        double s = 0.0;
        for (EdgeId id = 0; id < g.num_attractive(); ++id) {
            const Edge& e = g.attractive_edges()[id];
            if (lab[e.u] != lab[e.v]) s += costs.attractive[id];
        }
        for (EdgeId id = 0; id < g.num_repulsive(); ++id) {
            const Edge& e = g.repulsive_edges()[id];
            if (lab[e.u] != lab[e.v]) s += costs.repulsive[id];
        }
        return s;
    };

    // a[i] ≤ 1 + max(a[0..i-1]); m[i] holds that prefix max
    std::vector<std::uint32_t> a(n, 0), m(n, 0);
    bool first = true;
    while (true) {
        const double en = energy_of(a);
        if (first || en < out.energy) {
            out.energy = en;
            out.minimizers.clear();
            first = false;
        }
        if (en == out.energy) {
            Clustering c;
            c.labels = a;
            c.num_clusters = *std::max_element(a.begin(), a.end()) + 1;
            out.minimizers.push_back(std::move(c));
        }
        std::size_t i = n - 1;
        while (i > 0 && a[i] == m[i - 1] + 1) --i;
        if (i == 0) break;
        ++a[i];
        m[i] = std::max(m[i - 1], a[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            a[j] = 0;
            m[j] = m[i];
        }
    }
    return out;
}

/// For every simple cycle with exactly one repulsive edge e-, checks
/// Σ_{e ∈ c \ e-} y_e ≥ y_{e-} where y_e = a_e on the repulsive edge and
/// y_e = 1 - a_e on attractive ones.
inline bool cycle_inequalities_hold(const SignedGraph& g, const ActiveSet& a) {
    if (g.num_edges() > kMaxCycleEdges)
        throw InputError("cycle enumeration limited to " + std::to_string(kMaxCycleEdges) + " edges");
    detail::check_ids(g, a);

    const std::size_t n = g.num_vertices();
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(n);
    for (EdgeId id = 0; id < g.num_attractive(); ++id) {
        const Edge& e = g.attractive_edges()[id];
        adj[e.u].push_back({e.v, id});
        adj[e.v].push_back({e.u, id});
    }

    std::vector<char> on_path(n, 0);
    // Every simple cycle with one repulsive edge (u, v) is that edge plus a
    // simple attractive path from u to v.
    std::function<bool(VertexId, VertexId, int, int)> paths_ok = [&](VertexId x, VertexId target, int lhs,
                                                                     int rhs) -> bool {
        if (x == target) return lhs >= rhs;
        on_path[x] = 1;
        bool ok = true;
        for (auto [y, id] : adj[x]) {
            if (on_path[y]) continue;
            const int y_e = a.contains({Polarity::attractive, id}) ? 0 : 1;
            if (!paths_ok(y, target, lhs + y_e, rhs)) {
                ok = false;
                break;
            }
        }
        on_path[x] = 0;
        return ok;
    };

    for (EdgeId id = 0; id < g.num_repulsive(); ++id) {
        const Edge& e = g.repulsive_edges()[id];
        const int rhs = a.contains({Polarity::repulsive, id}) ? 1 : 0;
        if (!paths_ok(e.u, e.v, 0, rhs)) return false;
    }
    return true;
}

} // namespace mws
