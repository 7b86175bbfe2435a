#include "trajbench/cli.hpp"

#include "trajbench/ann.hpp"
#include "trajbench/bench.hpp"
#include "trajbench/csv.hpp"
#include "trajbench/datagen.hpp"
#include "trajbench/error.hpp"
#include "trajbench/goc.hpp"
#include "trajbench/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace trajbench::cli {

namespace fs = std::filesystem;

namespace {

std::uint64_t default_seed() {
    const char* env = std::getenv("TRAJBENCH_SEED");
    if (!env || !*env) return 1;
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidParams, "TRAJBENCH_SEED is not an unsigned integer: " + std::string(s));
    }
    return v;
}

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "bad value for " + std::string(key) + ": " + std::string(text));
    }
    return v;
}

// "kind=skewed,m=1000,k=10,seed=3"; unspecified keys keep their defaults.
GenSpec parse_gen_spec(std::string_view text, std::uint64_t seed) {
    GenSpec spec;
    spec.seed = seed;
    for (auto field : csv::split_fields(text)) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, "gen-spec entry lacks '=': " + std::string(field));
        }
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "kind") {
            const auto kind = parse_gen_kind(value);
            if (!kind) throw Error(ErrorCode::ParseError, "unknown generator kind: " + std::string(value));
            spec.kind = *kind;
        } else if (key == "m") {
            spec.m = parse_number<std::size_t>(key, value);
        } else if (key == "k") {
            spec.k = parse_number<std::size_t>(key, value);
        } else if (key == "seed") {
            spec.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "step") {
            spec.step = parse_number<double>(key, value);
        } else if (key == "hotspots") {
            spec.hotspots = parse_number<std::size_t>(key, value);
        } else if (key == "sigma") {
            spec.sigma = parse_number<double>(key, value);
        } else if (key == "hotspot_fraction") {
            spec.hotspot_fraction = parse_number<double>(key, value);
        } else if (key == "travel_fraction") {
            spec.travel_fraction = parse_number<double>(key, value);
        } else {
            throw Error(ErrorCode::ParseError, "unknown gen-spec key: " + std::string(key));
        }
    }
    validate(spec);
    return spec;
}

std::string describe(const GenSpec& s) {
    std::ostringstream os;
    os << "kind=" << to_string(s.kind) << ",m=" << s.m << ",k=" << s.k << ",seed=" << s.seed
       << ",step=" << csv::format_double(s.step) << ",hotspots=" << s.hotspots
       << ",sigma=" << csv::format_double(s.sigma) << ",hotspot_fraction=" << csv::format_double(s.hotspot_fraction)
       << ",travel_fraction=" << csv::format_double(s.travel_fraction);
    return os.str();
}

// Metadata travels from bench to report as `key = value` lines.
void write_metadata(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& meta) {
    for (const auto& [k, v] : meta) out << k << " = " << v << '\n';
}

std::vector<std::pair<std::string, std::string>> read_metadata(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> meta;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        meta.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return meta;
}

struct DatagenArgs {
    std::string kind = "random";
    std::size_t m = 1000;
    std::size_t k = 10;
    std::uint64_t seed = 1;
    std::string out;
    GenSpec knobs;
};

struct CharacterizeArgs {
    std::string input;
    bool exact = false;
    bool approx = false;
    std::size_t n = 0; ///< 0: metric default
    std::size_t p = 0;
    std::uint64_t seed = 1;
    bool literal_scaling = false;
    unsigned threads = 1;
};

struct BenchArgs {
    std::vector<std::string> inputs;
    std::vector<std::string> gen_specs;
    std::vector<std::string> formats;
    std::vector<std::string> indexes;
    std::vector<std::string> workloads;
    std::vector<double> read_ratios;
    std::size_t reps = 3;
    std::size_t warmup = 1;
    std::size_t mixed_ops = 200;
    std::string out;
    std::string workload_config;
    std::uint64_t seed = 1;
    std::size_t configs = 0;
    std::size_t k = 0;
    double rect_side = 0.0;
    double proximity = 0.0;
    std::string contains_mode;
    unsigned threads = 1;
};

int cmd_datagen(const DatagenArgs& a, std::ostream& out) {
    GenSpec spec = a.knobs;
    const auto kind = parse_gen_kind(a.kind);
    if (!kind) throw Error(ErrorCode::InvalidParams, "unknown generator kind: " + a.kind);
    spec.kind = *kind;
    spec.m = a.m;
    spec.k = a.k;
    spec.seed = a.seed;
    validate(spec);
    const Dataset ds = generate(spec);
    csv::write_trajectories(fs::path(a.out), ds);
    out << "wrote " << ds.size() << " trajectories (" << ds.point_count() << " points) to " << a.out << '\n';
    return exit_ok;
}

int cmd_characterize(const std::string& metric, const CharacterizeArgs& a, std::ostream& out) {
    const Dataset ds = csv::read_trajectories(fs::path(a.input));
    validate(ds);
    const bool approx = a.approx && !a.exact;
    ApproxParams params;
    params.seed = a.seed;
    params.threads = a.threads;
    if (metric == "goc") {
        if (!approx) {
            out << fixed4(exact_goc(ds)) << '\n';
            return exit_ok;
        }
        if (a.n) params.n = a.n;
        if (a.p) params.p = a.p;
        out << fixed4(approx_goc(ds, params).value) << '\n';
        return exit_ok;
    }
    if (!approx) {
        out << fixed4(exact_ann(ds, a.threads).ann) << '\n';
        return exit_ok;
    }
    params.n = a.n ? a.n : 1000;
    params.p = a.p ? a.p : 50;
    out << fixed4(approx_ann(ds, params, a.literal_scaling).result.ann) << '\n';
    return exit_ok;
}

// Exact GOC is quadratic in the trajectory count; large inputs use the
// sampling estimator with its default parameters.
constexpr std::size_t exact_goc_limit = 20000;

DatasetInfo characterize_for_report(const Dataset& ds, std::uint64_t seed, unsigned threads) {
    DatasetInfo info;
    info.dataset = ds.name;
    info.trajectories = ds.size();
    info.segments = ds.segment_count();
    if (ds.size() <= exact_goc_limit) {
        info.goc = exact_goc(ds);
    } else {
        ApproxParams p;
        p.seed = seed;
        p.threads = threads;
        info.goc = approx_goc(ds, p).value;
    }
    info.ann = exact_ann(ds, threads).ann;
    return info;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    if (a.inputs.empty() && a.gen_specs.empty()) {
        throw Error(ErrorCode::InvalidParams, "bench needs --input or --gen-spec");
    }
    WorkloadSpec spec;
    if (!a.workload_config.empty()) {
        auto in = open_in(a.workload_config);
        spec = read_workload_spec(in);
    } else {
        spec.seed = a.seed;
    }
    if (a.configs) spec.configs_per_type = a.configs;
    if (a.k) spec.k = a.k;
    if (a.rect_side > 0) spec.rect_side_fraction = a.rect_side;
    if (a.proximity > 0) spec.proximity_fraction = a.proximity;
    if (!a.contains_mode.empty()) {
        if (a.contains_mode == "partial") {
            spec.contains_mode = ContainsMode::Partial;
        } else if (a.contains_mode == "complete") {
            spec.contains_mode = ContainsMode::Complete;
        } else {
            throw Error(ErrorCode::InvalidParams, "contains mode must be partial or complete");
        }
    }
    validate(spec);

    SuiteOptions options;
    options.repetitions = a.reps;
    options.warmup = a.warmup;
    options.mixed_ops = a.mixed_ops;
    if (options.repetitions == 0) throw Error(ErrorCode::InvalidParams, "--reps must be positive");
    if (!a.formats.empty()) {
        options.formats.clear();
        for (const auto& f : a.formats) {
            const auto v = parse_format(f);
            if (!v) throw Error(ErrorCode::InvalidParams, "unknown format: " + f);
            options.formats.push_back(*v);
        }
    }
    if (!a.indexes.empty()) {
        options.indexes.clear();
        for (const auto& i : a.indexes) {
            const auto v = parse_index(i);
            if (!v) throw Error(ErrorCode::InvalidParams, "unknown index: " + i);
            options.indexes.push_back(*v);
        }
    }
    const std::vector<std::string> workloads = a.workloads.empty() ? std::vector<std::string>{"read"} : a.workloads;
    options.reads = false;
    for (const auto& w : workloads) {
        if (w == "read") {
            options.reads = true;
        } else if (w == "write") {
            options.writes = true;
        } else if (w == "mixed") {
            options.read_ratios = a.read_ratios.empty() ? std::vector<double>{0.05, 0.5, 0.95} : a.read_ratios;
        } else {
            throw Error(ErrorCode::InvalidParams, "unknown workload: " + w);
        }
    }
    for (double r : options.read_ratios) {
        if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidParams, "--read-ratio must lie in [0,1]");
    }

    std::vector<Dataset> datasets;
    std::vector<std::string> sources;
    for (const auto& path : a.inputs) {
        datasets.push_back(csv::read_trajectories(fs::path(path)));
        sources.push_back(path);
    }
    for (const auto& g : a.gen_specs) {
        const GenSpec gs = parse_gen_spec(g, a.seed);
        datasets.push_back(generate(gs));
        datasets.back().name = to_string(gs.kind) + std::string("-s") + std::to_string(gs.seed);
        sources.push_back(describe(gs));
    }
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        validate(datasets[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (datasets[j].name == datasets[i].name) {
                throw Error(ErrorCode::InvalidParams, "duplicate dataset name: " + datasets[i].name);
            }
        }
    }

    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<BenchRecord> records;
    std::vector<std::string> errors;
    std::vector<DatasetInfo> infos;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& ds : datasets) {
        infos.push_back(characterize_for_report(ds, spec.seed, a.threads));
        const BenchWorkload workload = make_bench_workload(ds, spec, options);
        SuiteResult result = run_suite(ds, options, spec, workload);
        out << ds.name << ": " << result.records.size() << " records";
        if (!result.errors.empty()) out << ", " << result.errors.size() << " aborted cells";
        out << '\n';
        for (const auto& e : result.errors) err << "aborted: " << e << '\n';
        records.insert(records.end(), std::make_move_iterator(result.records.begin()),
                       std::make_move_iterator(result.records.end()));
        errors.insert(errors.end(), result.errors.begin(), result.errors.end());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
        auto o = open_out(dir / "records.csv");
        csv::write_records(o, records);
    }
    {
        auto o = open_out(dir / "datasets.csv");
        write_dataset_info(o, infos);
    }
    {
        auto o = open_out(dir / "workload.cfg");
        write_workload_spec(o, spec);
    }
    std::vector<std::pair<std::string, std::string>> meta;
    for (std::size_t i = 0; i < datasets.size(); ++i) meta.emplace_back("dataset." + datasets[i].name, sources[i]);
    std::ostringstream ws;
    write_workload_spec(ws, spec);
    std::istringstream wl(ws.str());
    for (const auto& [k, v] : read_metadata(wl)) meta.emplace_back("workload." + k, v);
    std::string fmts;
    for (auto f : options.formats) fmts += std::string(fmts.empty() ? "" : " ") + to_string(f);
    std::string idxs;
    for (auto i : options.indexes) idxs += std::string(idxs.empty() ? "" : " ") + to_string(i);
    std::string wls;
    for (const auto& w : workloads) wls += (wls.empty() ? "" : " ") + w;
    std::string ratios;
    for (double r : options.read_ratios) ratios += (ratios.empty() ? "" : " ") + csv::format_double(r);
    meta.emplace_back("formats", fmts);
    meta.emplace_back("indexes", idxs);
    meta.emplace_back("workloads", wls);
    if (!ratios.empty()) meta.emplace_back("read_ratios", ratios);
    meta.emplace_back("mixed_ops", std::to_string(options.mixed_ops));
    meta.emplace_back("repetitions", std::to_string(options.repetitions));
    meta.emplace_back("warmup", std::to_string(options.warmup));
    meta.emplace_back("rtree", std::to_string(options.backend.rtree_max) + "/" + std::to_string(options.backend.rtree_min));
    meta.emplace_back("quadtree_capacity", std::to_string(options.backend.quad_capacity));
    meta.emplace_back("brin_range_size", std::to_string(options.backend.brin_range_size));
    meta.emplace_back("bench_seconds", fixed4(seconds));
    {
        auto o = open_out(dir / "metadata.txt");
        write_metadata(o, meta);
        for (const auto& e : errors) o << "error = " << e << '\n';
    }
    out << "wrote " << records.size() << " records to " << (dir / "records.csv").string() << '\n';
    return errors.empty() ? exit_ok : exit_failure;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir, std::ostream& out) {
    const fs::path in(in_dir);
    std::vector<BenchRecord> records;
    {
        auto i = open_in(in / "records.csv");
        records = csv::read_records(i);
    }
    std::vector<DatasetInfo> infos;
    if (fs::exists(in / "datasets.csv")) {
        auto i = open_in(in / "datasets.csv");
        infos = read_dataset_info(i);
    }
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> errors;
    if (fs::exists(in / "metadata.txt")) {
        auto i = open_in(in / "metadata.txt");
        for (auto& [k, v] : read_metadata(i)) {
            if (k == "error") {
                errors.push_back(v);
            } else {
                meta.emplace_back(std::move(k), std::move(v));
            }
        }
    }
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    ReportPaths paths;
    if (fs::weakly_canonical(dir) != fs::weakly_canonical(in)) paths.records_csv = dir / "records.csv";
    paths.summary_md = dir / "summary.md";
    paths.summary_csv = dir / "summary.csv";
    emit_report(records, infos, meta, errors, paths);
    if (!infos.empty() && fs::weakly_canonical(dir) != fs::weakly_canonical(in)) {
        auto o = open_out(dir / "datasets.csv");
        write_dataset_info(o, infos);
    }
    out << "wrote " << paths.summary_md.string() << '\n';
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trajectory dataset characterization and spatial index benchmarks", "trajbench"};
    app.require_subcommand(1, 1);

    std::uint64_t seed = 1;
    try {
        seed = default_seed();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }

    DatagenArgs dg;
    dg.seed = seed;
    auto* datagen = app.add_subcommand("datagen", "Generate a synthetic trajectory dataset");
    datagen->add_option("--kind", dg.kind, "random, even, skewed or skewed-overlap")->capture_default_str();
    datagen->add_option("--m", dg.m, "Number of trajectories")->capture_default_str();
    datagen->add_option("--k", dg.k, "Segments per trajectory")->capture_default_str();
    datagen->add_option("--seed", dg.seed, "Seed (default: TRAJBENCH_SEED or 1)");
    datagen->add_option("--out", dg.out, "Output CSV path")->required();
    datagen->add_option("--step", dg.knobs.step, "Mean segment length as a fraction of bbox width")
        ->capture_default_str();
    datagen->add_option("--hotspots", dg.knobs.hotspots, "Hotspot count (skewed kinds)")->capture_default_str();
    datagen->add_option("--sigma", dg.knobs.sigma, "Hotspot spread as a fraction of bbox width")
        ->capture_default_str();
    datagen->add_option("--hotspot-fraction", dg.knobs.hotspot_fraction, "Share of trajectories starting in a hotspot")
        ->capture_default_str();
    datagen->add_option("--travel-fraction", dg.knobs.travel_fraction,
                        "Share of hotspot trajectories travelling between hotspots (skewed-overlap)")
        ->capture_default_str();

    CharacterizeArgs ch;
    ch.seed = seed;
    std::string metric;
    auto* characterize = app.add_subcommand("characterize", "Compute GOC or ANN for a dataset file");
    characterize->add_option("metric", metric, "goc or ann")->required()->check(CLI::IsMember({"goc", "ann"}));
    characterize->add_option("--input", ch.input, "Trajectory CSV")->required();
    auto* exact_flag = characterize->add_flag("--exact", ch.exact, "Exact computation (default)");
    auto* approx_flag = characterize->add_flag("--approx", ch.approx, "Sampling estimator");
    exact_flag->excludes(approx_flag);
    characterize->add_option("--n", ch.n, "Sample size per round (goc: 100, ann: 1000)")->needs(approx_flag);
    characterize->add_option("--p", ch.p, "Rounds (goc: 100, ann: 50)")->needs(approx_flag);
    characterize->add_option("--seed", ch.seed, "Seed (default: TRAJBENCH_SEED or 1)");
    characterize->add_flag("--paper-literal-scaling", ch.literal_scaling,
                           "ANN estimator: scale the sampled mean by total/sample size");
    characterize->add_option("--threads", ch.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    BenchArgs b;
    b.seed = seed;
    auto* bench = app.add_subcommand("bench", "Run the benchmark matrix");
    bench->add_option("--input", b.inputs, "Trajectory CSV (repeatable)");
    bench->add_option("--gen-spec", b.gen_specs,
                      "Inline generator spec, e.g. kind=skewed,m=1000,k=10,seed=3 (repeatable)");
    bench->add_option("--format", b.formats, "segmented or whole (repeatable; default both)");
    bench->add_option("--index", b.indexes, "rtree, quadtree, brin or seqscan (repeatable; default all)");
    bench->add_option("--workload", b.workloads, "read, write or mixed (repeatable; default read)");
    bench->add_option("--read-ratio", b.read_ratios, "Mixed read ratio (repeatable; default 0.05 0.5 0.95)");
    bench->add_option("--reps", b.reps, "Timed repetitions")->capture_default_str();
    bench->add_option("--warmup", b.warmup, "Untimed warmup passes for reads")->capture_default_str();
    bench->add_option("--mixed-ops", b.mixed_ops, "Operations per mixed run")->capture_default_str();
    bench->add_option("--out", b.out, "Output directory")->required();
    bench->add_option("--workload-config", b.workload_config, "Workload spec file (key = value)");
    bench->add_option("--seed", b.seed, "Workload seed (default: TRAJBENCH_SEED or 1)");
    bench->add_option("--configs", b.configs, "Configs per operation type");
    bench->add_option("--knn-k", b.k, "K for nearest-neighbour queries");
    bench->add_option("--rect-side", b.rect_side, "Query rect side as a fraction of the bbox");
    bench->add_option("--proximity", b.proximity, "Proximity distance as a fraction of bbox width");
    bench->add_option("--contains-mode", b.contains_mode, "partial or complete");
    bench->add_option("--threads", b.threads, "Worker threads for characterization")->check(CLI::PositiveNumber);

    std::string report_in;
    std::string report_out;
    auto* report = app.add_subcommand("report", "Summarize a bench output directory");
    report->add_option("--in", report_in, "Directory written by bench")->required();
    report->add_option("--out", report_out, "Directory for the summary files")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return exit_usage;
    }

    try {
        if (*datagen) return cmd_datagen(dg, out);
        if (*characterize) return cmd_characterize(metric, ch, out);
        if (*bench) return cmd_bench(b, out, err);
        if (*report) return cmd_report(report_in, report_out, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace trajbench::cli
