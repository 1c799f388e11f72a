#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mws/graph_io.hpp"
#include "mws/grid.hpp"
#include "mws/mutex_watershed.hpp"

namespace mws {

enum class SynthStyle : std::uint8_t { smooth_objects, noise };

struct SynthOptions {
    SynthStyle style = SynthStyle::smooth_objects;
    double flip_probability = 0.05;
    double jitter = 0.2;        // values move inward by U[0, jitter]
    std::size_t cell_size = 32; // Voronoi seed spacing in voxels (y, x; z too when Z > 1)
};

namespace detail {

// Platform-independent uniform double in [0, 1).
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_below(std::mt19937_64& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n)));
}

} // namespace detail

/// Random piecewise-constant label image: one Voronoi site per cell_size box
/// (position uniform inside the box), nearest site by squared Euclidean
/// distance with ties to the lower site index, then split into face-connected
/// components. Labels are 1..K in raster order of first appearance.
inline LabelVolume synth_labels(const Shape& shape, std::uint64_t seed, std::size_t cell_size = 32) {
    if (shape.size() == 0) throw InputError("empty shape");
    if (cell_size == 0) throw InputError("cell size must be positive");
    std::mt19937_64 rng(seed);
    const auto ext = shape.extents();
    std::array<std::size_t, 3> boxes{};
    std::array<std::size_t, 3> box_size{};
    for (int a = 0; a < 3; ++a) {
        box_size[a] = std::min(cell_size, ext[a]);
        boxes[a] = (ext[a] + box_size[a] - 1) / box_size[a];
    }
    std::vector<std::array<std::size_t, 3>> sites;
    sites.reserve(boxes[0] * boxes[1] * boxes[2]);
    for (std::size_t bz = 0; bz < boxes[0]; ++bz)
        for (std::size_t by = 0; by < boxes[1]; ++by)
            for (std::size_t bx = 0; bx < boxes[2]; ++bx) {
                const std::array<std::size_t, 3> b{bz, by, bx};
                std::array<std::size_t, 3> site{};
                for (int a = 0; a < 3; ++a) {
                    const std::size_t lo = b[a] * box_size[a];
                    const std::size_t hi = std::min(ext[a], lo + box_size[a]);
                    site[a] = lo + detail::uniform_below(rng, hi - lo);
                }
                sites.push_back(site);
            }

    // Each voxel's own box holds a site within one box diagonal, so sites
    // more than two boxes away along any axis can never be nearest.
    std::vector<std::uint32_t> cell(shape.size());
    for (std::size_t z = 0; z < ext[0]; ++z)
        for (std::size_t y = 0; y < ext[1]; ++y)
            for (std::size_t x = 0; x < ext[2]; ++x) {
                const std::array<std::size_t, 3> p{z, y, x};
                std::array<std::size_t, 3> lo{}, hi{};
                for (int a = 0; a < 3; ++a) {
                    const std::size_t b = p[a] / box_size[a];
                    lo[a] = b >= 2 ? b - 2 : 0;
                    hi[a] = std::min(boxes[a], b + 3);
                }
                std::size_t best = 0;
                long long best_d = std::numeric_limits<long long>::max();
                for (std::size_t bz = lo[0]; bz < hi[0]; ++bz)
                    for (std::size_t by = lo[1]; by < hi[1]; ++by)
                        for (std::size_t bx = lo[2]; bx < hi[2]; ++bx) {
                            const std::size_t s = (bz * boxes[1] + by) * boxes[2] + bx;
                            long long d = 0;
                            for (int a = 0; a < 3; ++a) {
                                const long long diff = static_cast<long long>(p[a]) - static_cast<long long>(sites[s][a]);
                                d += diff * diff;
                            }
                            if (d < best_d || (d == best_d && s < best)) {
                                best_d = d;
                                best = s;
                            }
                        }
                cell[shape.index(z, y, x)] = static_cast<std::uint32_t>(best);
            }

    // face-connected components of equal cell id
    const std::size_t n = shape.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::uint32_t{0});
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    const std::size_t strides[3] = {shape.y * shape.x, shape.x, 1};
    for (std::size_t v = 0; v < n; ++v) {
        const auto c = shape.coords(v);
        for (int a = 0; a < 3; ++a)
            if (c[a] > 0 && cell[v] == cell[v - strides[a]])
                parent[find(static_cast<std::uint32_t>(v))] = find(static_cast<std::uint32_t>(v - strides[a]));
    }
    LabelVolume out(shape);
    std::vector<std::uint32_t> label_of(n, 0);
    std::uint32_t next = 1;
    for (std::size_t v = 0; v < n; ++v) {
        auto& l = label_of[find(static_cast<std::uint32_t>(v))];
        if (l == 0) l = next++;
        out.labels[v] = l;
    }
    return out;
}

/// Deterministic stand-in for network predictions. smooth_objects: ground
/// truth affinities of synth_labels, each value flipped with
/// flip_probability and then pulled inward by U[0, jitter] (1 -> 1-u,
/// 0 -> u). noise: i.i.d. U[0, 1).
inline AffinityVolume synth_affinities(const Shape& shape, const OffsetPattern& pattern, std::uint64_t seed,
                                       const SynthOptions& opts = {}) {
    if (!(opts.flip_probability >= 0.0 && opts.flip_probability <= 1.0))
        throw InputError("flip probability must be in [0, 1]");
    if (!(opts.jitter >= 0.0 && opts.jitter <= 1.0)) throw InputError("jitter must be in [0, 1]");
    if (opts.style == SynthStyle::noise) {
        std::mt19937_64 rng(seed);
        AffinityVolume vol(shape, pattern.size());
        for (float& v : vol.data) v = static_cast<float>(detail::unit_uniform(rng));
        return vol;
    }
    AffinityVolume vol = affinities_from_labels(synth_labels(shape, seed, opts.cell_size), pattern);
    // separate stream so the label image does not depend on the noise settings
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (float& v : vol.data) {
        double x = v;
        if (opts.flip_probability > 0.0 && detail::unit_uniform(rng) < opts.flip_probability) x = 1.0 - x;
        if (opts.jitter > 0.0) {
            const double u = opts.jitter * detail::unit_uniform(rng);
            x = x >= 0.5 ? x - u : x + u;
        }
        v = static_cast<float>(std::clamp(x, 0.0, 1.0));
    }
    return vol;
}

// ---- scaling harness ----

struct ScalingRow {
    std::size_t num_edges = 0;
    double solve_seconds = 0.0; // median over repeats, sorting excluded
    double sort_seconds = 0.0;  // median over repeats
    double mean_min_mutex_check = 0.0;
    double mean_min_mutex_merge = 0.0;
    std::size_t repeats = 0;
};

struct LinearithmicFit {
    double a = 0.0; // T/E = a ln E + b
    double b = 0.0;
    double r_squared = 0.0;
    bool flat = false; // no variance in T/E; r_squared reported as 0
};

struct ScalingRun {
    std::vector<ScalingRow> rows; // ascending E
    LinearithmicFit fit;
};

/// Least squares of y = T/E against x = ln E.
inline LinearithmicFit fit_linearithmic(std::span<const std::size_t> num_edges, std::span<const double> seconds) {
    if (num_edges.size() != seconds.size()) throw InputError("fit: size mismatch");
    if (num_edges.size() < 2) throw InputError("fit: need at least two points");
    const std::size_t n = num_edges.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (num_edges[i] == 0) throw InputError("fit: zero edge count");
        x[i] = std::log(static_cast<double>(num_edges[i]));
        y[i] = seconds[i] / static_cast<double>(num_edges[i]);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw InputError("fit: all edge counts are equal");
    LinearithmicFit f;
    f.a = sxy / sxx;
    f.b = my - f.a * mx;
    const double tiny = 1e-12 * std::abs(my);
    if (syy <= static_cast<double>(n) * tiny * tiny) {
        f.a = 0.0;
        f.b = my;
        f.flat = true;
        return f;
    }
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.a * x[i] + f.b);
        ss_res += r * r;
    }
    f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return f;
}

// Timer hooks return seconds. Tests replace them to drive the fit with
// synthetic timings.
struct ScalingTimers {
    std::function<double(const SignedGraph&)> sort;
    std::function<double(const SignedGraph&, std::span<const SweepEdge>)> solve;
};

inline ScalingTimers wall_clock_timers() {
    using Clock = std::chrono::steady_clock;
    static_assert(Clock::is_steady);
    ScalingTimers t;
    t.sort = [](const SignedGraph& g) {
        const auto start = Clock::now();
        const auto order = sorted_sweep(g);
        const auto stop = Clock::now();
        if (order.size() != g.num_edges()) throw InvariantError("sort lost edges");
        return std::chrono::duration<double>(stop - start).count();
    };
    t.solve = [](const SignedGraph& g, std::span<const SweepEdge> order) {
        const auto start = Clock::now();
        const SolveResult r = solve_efficient(g, order);
        const auto stop = Clock::now();
        if (r.clustering.labels.size() != g.num_vertices()) throw InvariantError("solver lost vertices");
        return std::chrono::duration<double>(stop - start).count();
    };
    return t;
}

struct ScalingConfig {
    std::vector<Shape> sizes;
    std::size_t repeats = 3;
    std::uint64_t seed = 0;
    OffsetPattern pattern = default_pattern_2d();
    SynthOptions synth;
};

namespace detail {
inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
} // namespace detail

/// Times the solver (sorting excluded) on one synthetic volume per size and
/// fits T/E against ln E. M comes from a separate untimed run with
/// statistics enabled.
inline ScalingRun run_scaling(const ScalingConfig& cfg, const ScalingTimers& timers = wall_clock_timers()) {
    if (cfg.repeats < 3) throw InputError("scaling: need at least 3 repeats");
    if (cfg.sizes.size() < 4) throw InputError("scaling: need at least 4 sizes");
    ScalingRun run;
    for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
        const AffinityVolume vol = synth_affinities(cfg.sizes[k], cfg.pattern, cfg.seed + k, cfg.synth);
        const GridGraph gg = graph_from_affinities(vol, cfg.pattern);
        const std::vector<SweepEdge> order = sorted_sweep(gg.graph);

        ScalingRow row;
        row.num_edges = gg.graph.num_edges();
        row.repeats = cfg.repeats;
        std::vector<double> sort_t, solve_t;
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            sort_t.push_back(timers.sort(gg.graph));
            solve_t.push_back(timers.solve(gg.graph, order));
        }
        row.sort_seconds = detail::median(sort_t);
        row.solve_seconds = detail::median(solve_t);

        SolveOptions opts;
        opts.record_stats = true;
        const SolveResult stats_run = solve_efficient(gg.graph, std::span<const SweepEdge>(order), opts);
        row.mean_min_mutex_check = stats_run.stats->mean_min_mutex_check;
        row.mean_min_mutex_merge = stats_run.stats->mean_min_mutex_merge;
        run.rows.push_back(row);
    }
    std::sort(run.rows.begin(), run.rows.end(),
              [](const ScalingRow& a, const ScalingRow& b) { return a.num_edges < b.num_edges; });
    for (std::size_t k = 1; k < run.rows.size(); ++k)
        if (run.rows[k].num_edges == run.rows[k - 1].num_edges) throw InputError("scaling: sizes must be distinct");
    if (run.rows.front().num_edges == 0 ||
        static_cast<double>(run.rows.back().num_edges) < 100.0 * static_cast<double>(run.rows.front().num_edges))
        throw InputError("scaling: sizes must span at least two decades of edge counts");

    std::vector<std::size_t> e;
    std::vector<double> t;
    for (const ScalingRow& r : run.rows) {
        e.push_back(r.num_edges);
        t.push_back(r.solve_seconds);
    }
    run.fit = fit_linearithmic(e, t);
    return run;
}

inline void write_scaling_csv(const ScalingRun& run, std::ostream& out) {
    out << "E,T_solve_s,T_sort_s,M,repeats\n";
    for (const ScalingRow& r : run.rows)
        out << r.num_edges << ',' << detail::format_double(r.solve_seconds) << ','
            << detail::format_double(r.sort_seconds) << ',' << detail::format_double(r.mean_min_mutex_check) << ','
            << r.repeats << '\n';
}

// {a, b, r_squared, flat_fit, rows: [{E, M_check, M_merge}]}
inline nlohmann::ordered_json scaling_fit_json(const ScalingRun& run) {
    nlohmann::ordered_json j;
    j["a"] = run.fit.a;
    j["b"] = run.fit.b;
    j["r_squared"] = run.fit.r_squared;
    j["flat_fit"] = run.fit.flat;
    auto rows = nlohmann::ordered_json::array();
    for (const ScalingRow& r : run.rows)
        rows.push_back({{"E", r.num_edges}, {"M_check", r.mean_min_mutex_check}, {"M_merge", r.mean_min_mutex_merge}});
    j["rows"] = std::move(rows);
    return j;
}

} // namespace mws
