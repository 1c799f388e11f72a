// mws: command-line front end.
//
// Exit codes: 0 success, 1 bad input (arguments or files), 2 internal
// invariant failure or a failed verify property.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mws/bench.hpp"
#include "mws/graph_io.hpp"
#include "mws/grid.hpp"
#include "mws/metrics.hpp"
#include "mws/mutex_watershed.hpp"
#include "mws/random_graphs.hpp"
#include "mws/result_io.hpp"
#include "mws/seeded.hpp"
#include "mws/verify.hpp"
#include "mws/volume_io.hpp"

namespace fs = std::filesystem;
using namespace mws;

namespace {

constexpr const char* kFormats = R"(
Formats:
  graph       text; "mws-graph v1", "V <n>", then "+|- <u> <v> <w>" per edge,
              '#' starts a comment. Edge ids count per sign in file order.
  active set  text; "+ <id>" / "- <id>" per line
  clustering  text; "label <vertex> <cluster>" per line
  seeds       text; one vertex id per line
  volumes     <name>.json header + <name>.raw little-endian payload
              (affinities: f32 [C,Z,Y,X]; labels: u32 [Z,Y,X])
  pattern     "default2d", "default3d" or a JSON file: an array of
              {"offset": [dz,dy,dx], "polarity": "+"|"-", "stride": [sz,sy,sx]})";

std::ifstream open_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

SignedGraph load_graph(const std::string& path) {
    if (path == "-") return read_graph(std::cin);
    auto in = open_text(path);
    try {
        return read_graph(in);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Writes to `path`, or to stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    fn(out);
    if (!out) throw InputError("write failed: " + path);
}

// "X", "YxX" or "ZxYxX".
Shape parse_shape(const std::string& text) {
    std::vector<std::size_t> dims;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size() || v == 0) throw InputError("bad shape '" + text + "'");
        dims.push_back(static_cast<std::size_t>(v));
    }
    if (dims.empty() || dims.size() > 3) throw InputError("bad shape '" + text + "'");
    while (dims.size() < 3) dims.insert(dims.begin(), 1);
    return Shape{dims[0], dims[1], dims[2]};
}

WeightKind parse_weights(const std::string& s) {
    if (s == "unique") return WeightKind::unique;
    if (s == "ties") return WeightKind::with_ties;
    if (s == "pow2") return WeightKind::powers_of_two;
    throw InputError("unknown weight kind '" + s + "'");
}

std::uint64_t env_seed() {
    const char* s = std::getenv("MWS_SEED");
    if (!s || !*s) return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError("MWS_SEED is not an unsigned integer");
}

// ---- solve ----

struct SolveArgs {
    std::string graph;
    std::string active_out;
    std::string clustering_out;
    bool relax_c0 = false;
    bool stats = false;
    bool naive = false;
};

int run_solve(const SolveArgs& a) {
    const SignedGraph g = load_graph(a.graph);
    SolveOptions opts;
    opts.enforce_c0 = !a.relax_c0;
    opts.record_stats = a.stats;
    const SolveResult r = a.naive ? solve_naive(g, opts) : solve_efficient(g, opts);
    if (!a.active_out.empty()) emit(a.active_out, [&](std::ostream& o) { write_active_set(r.active, o); });
    emit(a.clustering_out, [&](std::ostream& o) { write_clustering(r.clustering, o); });
    if (a.stats && r.stats) std::cerr << stats_json(*r.stats).dump() << '\n';
    return 0;
}

// ---- verify ----

struct VerifyArgs {
    VerifyConfig cfg;
    std::string counterexample = "counterexample.mws";
    bool break_solver = false;
};

int run_verify_cmd(const VerifyArgs& a) {
    Solver solver = efficient_solver();
    if (a.break_solver) {
        // sweeps edges in ascending order; exists to exercise the failure path
        solver = [](const SignedGraph& g, const SolveOptions& o) {
            auto order = sort_edges(g);
            std::reverse(order.begin(), order.end());
            return solve_efficient(g, std::span<const EdgeRef>(order), o);
        };
    }
    const VerifyReport r = run_verify(a.cfg, solver);
    for (const auto& p : r.properties) std::cout << p.name << ' ' << p.passed << '/' << p.trials << '\n';
    if (r.ok()) {
        std::cout << "all properties hold\n";
        return 0;
    }
    if (r.counterexample) {
        const Counterexample& c = *r.counterexample;
        emit(a.counterexample, [&](std::ostream& o) {
            o << "# failed property: " << c.property << '\n';
            if (c.initial_active) {
                std::istringstream lines(to_text(*c.initial_active));
                for (std::string line; std::getline(lines, line);) o << "# initial " << line << '\n';
            }
            write_graph(c.graph, o);
        });
        std::cerr << "property " << c.property << " failed; counterexample written to " << a.counterexample << '\n';
    }
    return 2;
}

// ---- segment ----

struct SegmentArgs {
    std::string affinities;
    std::string pattern;
    std::string out;
    std::string baseline = "mws";
    double threshold = 0.5;
    bool stats = false;
};

int run_segment(const SegmentArgs& a) {
    AffinityFile in = read_affinities(fs::path(a.affinities));
    const OffsetPattern pattern = a.pattern.empty() ? in.pattern : resolve_pattern(a.pattern);
    detail::check_channels(in.volume, pattern);
    LabelVolume labels;
    if (a.baseline == "thresh") {
        labels = threshold_baseline(in.volume, pattern, a.threshold);
    } else {
        SolveStats st;
        labels = segment(in.volume, pattern, a.stats ? &st : nullptr);
        if (a.stats) std::cerr << stats_json(st).dump() << '\n';
    }
    write_labels(labels, fs::path(a.out));
    return 0;
}

// ---- seeded ----

struct SeededArgs {
    std::string graph, seeds, out;
    bool reference = false;
};

int run_seeded(const SeededArgs& a) {
    const SignedGraph g = load_graph(a.graph);
    auto in = open_text(a.seeds);
    const SeedSet seeds = read_seeds(in, g.num_vertices());
    const Clustering c = a.reference ? seeded_msf_reference(g, seeds) : seeded_mws(g, seeds);
    emit(a.out, [&](std::ostream& o) { write_clustering(c, o); });
    return 0;
}

// ---- metrics ----

struct MetricsArgs {
    std::string pred, ref;
    bool ignore_zero = false;
};

int run_metrics(const MetricsArgs& a) {
    const LabelVolume pred = read_labels(fs::path(a.pred));
    const LabelVolume ref = read_labels(fs::path(a.ref));
    const auto vi = variation_of_information(pred, ref, a.ignore_zero);
    nlohmann::ordered_json j;
    j["rand_f"] = rand_f_score(pred, ref, a.ignore_zero);
    j["vi_split"] = vi.split;
    j["vi_merge"] = vi.merge;
    std::cout << j.dump() << '\n';
    return 0;
}

// ---- bench ----

struct BenchArgs {
    std::vector<std::string> sizes{"64x64", "128x128", "256x256", "512x512", "1024x1024"};
    std::size_t repeats = 3;
    std::uint64_t seed = 0;
    std::string pattern = "default2d";
    std::string csv, fit;
    double flip = 0.05, jitter = 0.2;
};

int run_bench(const BenchArgs& a) {
    ScalingConfig cfg;
    for (const auto& s : a.sizes) cfg.sizes.push_back(parse_shape(s));
    cfg.repeats = a.repeats;
    cfg.seed = a.seed;
    cfg.pattern = resolve_pattern(a.pattern);
    cfg.synth.flip_probability = a.flip;
    cfg.synth.jitter = a.jitter;
    const ScalingRun run = run_scaling(cfg);
    emit(a.csv, [&](std::ostream& o) { write_scaling_csv(run, o); });
    const std::string fit = scaling_fit_json(run).dump(2);
    if (a.fit.empty())
        std::cerr << fit << '\n';
    else
        emit(a.fit, [&](std::ostream& o) { o << fit << '\n'; });
    return 0;
}

// ---- gen ----

struct GenLabelsArgs {
    std::string shape = "128x128", out;
    std::uint64_t seed = 0;
    std::size_t cell = 32;
};

struct GenAffinityArgs {
    std::string labels, shape = "128x128", pattern = "default2d", style = "smooth", out;
    std::uint64_t seed = 0;
    std::size_t cell = 32;
    double flip = 0.05, jitter = 0.2;
};

struct GenGraphArgs {
    std::size_t vertices = 8, edges = 12;
    std::string weights = "unique", out;
    double repulsive = 0.5;
    std::uint64_t seed = 0;
};

int run_gen_labels(const GenLabelsArgs& a) {
    write_labels(synth_labels(parse_shape(a.shape), a.seed, a.cell), fs::path(a.out));
    return 0;
}

int run_gen_affinities(const GenAffinityArgs& a) {
    const OffsetPattern pattern = resolve_pattern(a.pattern);
    AffinityVolume vol;
    if (!a.labels.empty()) {
        vol = affinities_from_labels(read_labels(fs::path(a.labels)), pattern);
    } else {
        SynthOptions o;
        if (a.style == "smooth")
            o.style = SynthStyle::smooth_objects;
        else if (a.style == "noise")
            o.style = SynthStyle::noise;
        else
            throw InputError("unknown style '" + a.style + "'");
        o.flip_probability = a.flip;
        o.jitter = a.jitter;
        o.cell_size = a.cell;
        vol = synth_affinities(parse_shape(a.shape), pattern, a.seed, o);
    }
    write_affinities(vol, pattern, fs::path(a.out));
    return 0;
}

int run_gen_graph(const GenGraphArgs& a) {
    if (a.vertices < 2) throw InputError("need at least 2 vertices");
    if (a.repulsive < 0.0 || a.repulsive > 1.0) throw InputError("repulsive fraction must lie in [0, 1]");
    std::mt19937_64 rng(a.seed);
    GraphSpec spec{a.vertices, a.vertices, a.edges, parse_weights(a.weights), a.repulsive};
    const SignedGraph g = random_signed_graph(rng, spec);
    emit(a.out, [&](std::ostream& o) { write_graph(g, o); });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mutex Watershed partitioning of signed graphs and affinity volumes"};
    app.footer(kFormats);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    SolveArgs solve_a;
    auto* solve = app.add_subcommand("solve", "Partition a signed graph; clustering goes to stdout");
    solve->add_option("graph", solve_a.graph, "mws-graph file ('-' for stdin)")->required();
    solve->add_option("--out", solve_a.active_out, "Write the active set here");
    solve->add_option("--clustering", solve_a.clustering_out, "Write the clustering here instead of stdout");
    solve->add_flag("--relax-c0", solve_a.relax_c0, "Keep attractive edges inside a cluster");
    solve->add_flag("--stats", solve_a.stats, "Print solver statistics as JSON on stderr");
    solve->add_flag("--naive", solve_a.naive, "Use the cycle-search reference solver");
    solve->footer(kFormats);

    VerifyArgs verify_a;
    verify_a.cfg.seed = 0;
    auto* verify = app.add_subcommand("verify", "Check the solver against the brute-force oracles");
    verify->add_option("--max-vertices", verify_a.cfg.max_vertices, "Vertex bound per instance")
        ->capture_default_str();
    verify->add_option("--max-edges", verify_a.cfg.max_edges, "Edge bound per instance")->capture_default_str();
    verify->add_option("--trials", verify_a.cfg.trials, "Random instances per property")->capture_default_str();
    auto* verify_seed = verify->add_option("--seed", verify_a.cfg.seed, "RNG seed (default: $MWS_SEED or 0)");
    verify->add_option("--counterexample", verify_a.counterexample, "Where to write a failing graph")
        ->capture_default_str();
    verify->add_flag("--break-solver", verify_a.break_solver)->group("");
    verify->footer(kFormats);

    SegmentArgs seg_a;
    auto* seg = app.add_subcommand("segment", "Segment an affinity volume");
    seg->add_option("affinities", seg_a.affinities, "Affinity volume name")->required();
    seg->add_option("--pattern", seg_a.pattern, "Offset pattern; defaults to the one in the header");
    seg->add_option("--out", seg_a.out, "Label volume name")->required();
    seg->add_option("--baseline", seg_a.baseline, "mws or thresh")
        ->check(CLI::IsMember({"mws", "thresh"}))
        ->capture_default_str();
    seg->add_option("--t", seg_a.threshold, "Threshold for --baseline thresh")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    seg->add_flag("--stats", seg_a.stats, "Print solver statistics as JSON on stderr");
    seg->footer(kFormats);

    SeededArgs seeded_a;
    auto* seeded = app.add_subcommand("seeded", "Seeded watershed on an attractive graph");
    seeded->add_option("graph", seeded_a.graph, "mws-graph file without repulsive edges")->required();
    seeded->add_option("seeds", seeded_a.seeds, "Seeds file")->required();
    seeded->add_option("--out", seeded_a.out, "Write the clustering here instead of stdout");
    seeded->add_flag("--reference", seeded_a.reference, "Use the spanning-forest reference");
    seeded->footer(kFormats);

    MetricsArgs metrics_a;
    auto* metrics = app.add_subcommand("metrics", "Rand F-score and VI of a prediction against a reference");
    metrics->add_option("pred", metrics_a.pred, "Predicted label volume")->required();
    metrics->add_option("ref", metrics_a.ref, "Reference label volume")->required();
    metrics->add_flag("--ignore-zero", metrics_a.ignore_zero, "Skip voxels labelled 0 in the reference");
    metrics->footer(kFormats);

    BenchArgs bench_a;
    auto* bench = app.add_subcommand("bench", "Runtime scaling on synthetic affinity grids");
    bench->add_option("--sizes", bench_a.sizes, "Volume shapes, YxX or ZxYxX")->capture_default_str();
    bench->add_option("--repeats", bench_a.repeats, "Timed runs per size (median)")->capture_default_str();
    auto* bench_seed = bench->add_option("--seed", bench_a.seed, "RNG seed (default: $MWS_SEED or 0)");
    bench->add_option("--pattern", bench_a.pattern, "Offset pattern")->capture_default_str();
    bench->add_option("--flip", bench_a.flip, "Boundary flip probability")->capture_default_str();
    bench->add_option("--jitter", bench_a.jitter, "Inward jitter amplitude")->capture_default_str();
    bench->add_option("--csv", bench_a.csv, "Write rows here instead of stdout");
    bench->add_option("--fit", bench_a.fit, "Write the fit JSON here instead of stderr");

    auto* gen = app.add_subcommand("gen", "Generate synthetic inputs");
    gen->require_subcommand(1);

    GenLabelsArgs gl_a;
    auto* gl = gen->add_subcommand("labels", "Random piecewise-constant label volume");
    gl->add_option("--shape", gl_a.shape, "YxX or ZxYxX")->capture_default_str();
    auto* gl_seed = gl->add_option("--seed", gl_a.seed, "RNG seed (default: $MWS_SEED or 0)");
    gl->add_option("--cell", gl_a.cell, "Region spacing in voxels")->capture_default_str();
    gl->add_option("--out", gl_a.out, "Label volume name")->required();

    GenAffinityArgs ga_a;
    auto* ga = gen->add_subcommand("affinities", "Affinity volume from labels or from scratch");
    ga->add_option("--labels", ga_a.labels, "Exact affinities of this label volume");
    ga->add_option("--shape", ga_a.shape, "YxX or ZxYxX")->capture_default_str();
    ga->add_option("--pattern", ga_a.pattern, "Offset pattern")->capture_default_str();
    ga->add_option("--style", ga_a.style, "smooth or noise")->capture_default_str();
    auto* ga_seed = ga->add_option("--seed", ga_a.seed, "RNG seed (default: $MWS_SEED or 0)");
    ga->add_option("--cell", ga_a.cell, "Region spacing in voxels")->capture_default_str();
    ga->add_option("--flip", ga_a.flip, "Boundary flip probability")->capture_default_str();
    ga->add_option("--jitter", ga_a.jitter, "Inward jitter amplitude")->capture_default_str();
    ga->add_option("--out", ga_a.out, "Affinity volume name")->required();

    GenGraphArgs gg_a;
    auto* gg = gen->add_subcommand("graph", "Random signed graph");
    gg->add_option("--vertices", gg_a.vertices)->capture_default_str();
    gg->add_option("--edges", gg_a.edges, "Upper bound on the edge count")->capture_default_str();
    gg->add_option("--weights", gg_a.weights, "unique, ties or pow2")->capture_default_str();
    gg->add_option("--repulsive", gg_a.repulsive, "Fraction of repulsive edges")->capture_default_str();
    auto* gg_seed = gg->add_option("--seed", gg_a.seed, "RNG seed (default: $MWS_SEED or 0)");
    gg->add_option("--out", gg_a.out, "Write here instead of stdout");
    for (auto* g : {gl, ga, gg}) g->footer(kFormats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (auto [opt, seed] : {std::pair{verify_seed, &verify_a.cfg.seed}, std::pair{bench_seed, &bench_a.seed},
                                 std::pair{gl_seed, &gl_a.seed}, std::pair{ga_seed, &ga_a.seed},
                                 std::pair{gg_seed, &gg_a.seed}})
            if (opt->count() == 0) *seed = env_seed();

        if (solve->parsed()) return run_solve(solve_a);
        if (verify->parsed()) return run_verify_cmd(verify_a);
        if (seg->parsed()) return run_segment(seg_a);
        if (seeded->parsed()) return run_seeded(seeded_a);
        if (metrics->parsed()) return run_metrics(metrics_a);
        if (bench->parsed()) return run_bench(bench_a);
        if (gl->parsed()) return run_gen_labels(gl_a);
        if (ga->parsed()) return run_gen_affinities(ga_a);
        if (gg->parsed()) return run_gen_graph(gg_a);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
