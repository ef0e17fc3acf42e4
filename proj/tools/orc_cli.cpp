#include <orc/bench.hpp>
#include <orc/curvature.hpp>
#include <orc/error.hpp>
#include <orc/generators.hpp>
#include <orc/hypergraph.hpp>
#include <orc/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string measure = "en";
    std::string agg = "a";
    std::string estimator = "bound";
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    double reg = orc::SinkhornOptions{}.reg;
    int iters = orc::SinkhornOptions{}.max_iters;
    double threshold = orc::SinkhornOptions{}.threshold;
    std::size_t threads = 1;
    std::string out_dir = ".";
    std::string overlap = "common";
    bool labeled = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_estimator) {
    cmd->add_option("--measure", c.measure, "Local measure")->check(CLI::IsMember({"en", "ee", "we", "graph"}))->capture_default_str();
    cmd->add_option("--agg", c.agg, "Hyperedge aggregation")->check(CLI::IsMember({"a", "m"}))->capture_default_str();
    if (with_estimator) {
        cmd->add_option("--estimator", c.estimator, "W1 estimator")
            ->check(CLI::IsMember({"bound", "exact", "sinkhorn"}))
            ->capture_default_str();
    }
    cmd->add_option("--alpha", c.alpha, "Extra laziness in [0, 1)")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Seed for generated datasets");
    cmd->add_option("--reg", c.reg, "Sinkhorn regularisation on max-normalised costs")->capture_default_str();
    cmd->add_option("--iters", c.iters, "Sinkhorn iteration cap")->capture_default_str();
    cmd->add_option("--threshold", c.threshold, "Sinkhorn stopping threshold")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
    cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--overlap", c.overlap, "Bound overlap sums: common support or all points")
        ->check(CLI::IsMember({"common", "all"}))
        ->capture_default_str();
    cmd->add_flag("--labeled", c.labeled, "Input vertices are arbitrary labels");
}

orc::CurvatureConfig to_config(const Common& c) {
    if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must lie in [0, 1)");
    if (!(c.reg > 0.0)) throw UsageError("--reg must be positive");
    if (c.iters <= 0) throw UsageError("--iters must be positive");
    if (!(c.threshold > 0.0)) throw UsageError("--threshold must be positive");
    if (c.threads == 0) throw UsageError("--threads must be positive");
    orc::CurvatureConfig cfg;
    cfg.measure = orc::parse_measure_kind(c.measure);
    cfg.agg = orc::parse_agg_kind(c.agg);
    cfg.estimator = orc::parse_estimator_kind(c.estimator);
    cfg.alpha = c.alpha;
    cfg.bound.overlap = c.overlap == "all" ? orc::OverlapMode::all_points : orc::OverlapMode::common_support;
    cfg.sinkhorn = {c.reg, c.iters, c.threshold};
    cfg.threads = c.threads;
    return cfg;
}

orc::Hypergraph load(const std::string& path, bool labeled, std::size_t* duplicates = nullptr) {
    if (!fs::is_regular_file(path)) throw UsageError("no such file: " + path);
    auto parsed = orc::load_hyperedge_list(path, labeled);
    if (duplicates) *duplicates = parsed.duplicate_count;
    return std::move(parsed.graph);
}

// A file argument or one of the built-in desk corpora.
orc::Dataset dataset_from(const std::string& file, const std::string& builtin, const Common& c) {
    if (file.empty() == builtin.empty()) throw UsageError("give exactly one of <file> or --dataset");
    if (!file.empty()) return {fs::path(file).stem().string(), load(file, c.labeled)};
    const std::uint64_t seed = c.seed.value_or(1);
    return builtin == "hcm" ? orc::desk_hcm_dataset(seed) : orc::desk_hsbm_dataset(seed);
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const auto& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw orc::Error("cannot write '" + path.string() + "'");
    writer(out);
    if (!out) throw orc::Error("error writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ollivier-Ricci curvature of hypergraphs via a closed-form transport bound"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "orc 1.0");

    Common common;

    std::string compute_file;
    bool count_singletons = false;
    auto* compute = app.add_subcommand("compute", "Edge and node curvature for a hyperedge list");
    add_common(compute, common, true);
    compute->add_option("file", compute_file, "Hyperedge list, one hyperedge per line")->required();
    compute->add_flag("--count-singletons", count_singletons, "Count singleton hyperedges in the edge-based node curvature");

    std::string compare_file, compare_dataset, baseline = "exact";
    std::size_t bins = 20;
    auto* compare = app.add_subcommand("compare", "Bound against a baseline estimator, edge by edge");
    add_common(compare, common, false);
    compare->add_option("file", compare_file, "Hyperedge list");
    compare->add_option("--dataset", compare_dataset, "Built-in desk corpus")->check(CLI::IsMember({"hcm", "hsbm"}));
    compare->add_option("--baseline", baseline, "Baseline estimator")->check(CLI::IsMember({"exact", "sinkhorn"}))->capture_default_str();
    compare->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();

    std::string bench_file, bench_dataset;
    int warmup = 1;
    bool scaling = false;
    auto* bench = app.add_subcommand("bench", "Time the bound against Sinkhorn on identical pair workloads");
    add_common(bench, common, false);
    bench->add_option("file", bench_file, "Hyperedge list");
    bench->add_option("--dataset", bench_dataset, "Built-in desk corpus")->check(CLI::IsMember({"hcm", "hsbm"}));
    bench->add_option("--warmup", warmup, "Untimed warm-up passes")->check(CLI::NonNegativeNumber)->capture_default_str();
    bench->add_flag("--scaling", scaling, "Also fit the bound's per-call cost against support size");

    std::string model, spec_path, output;
    std::optional<std::uint64_t> gen_seed;
    std::size_t gen_n = 200, gen_m = 300;
    auto* generate = app.add_subcommand("generate", "Write a synthetic hypergraph as a hyperedge list");
    generate->add_option("model", model, "Generator")->check(CLI::IsMember({"hcm", "hsbm"}))->required();
    generate->add_option("--spec", spec_path, "Key-value spec file; default is the desk preset");
    generate->add_option("--seed", gen_seed, "Overrides the seed in the spec file");
    generate->add_option("--n", gen_n, "Preset vertex count")->capture_default_str();
    generate->add_option("--m", gen_m, "Preset hyperedge count")->capture_default_str();
    generate->add_option("-o,--output", output, "Output file; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }
    // Timing runs default to the weighted-edges measure.
    if (bench->parsed() && bench->count("--measure") == 0) common.measure = "we";

    try {
        if (compute->parsed()) {
            auto cfg = to_config(common);
            cfg.count_singletons_in_node_degree = count_singletons;
            std::size_t duplicates = 0;
            const auto h = load(compute_file, common.labeled, &duplicates);
            const auto report = orc::compute_curvature(h, cfg);
            const auto dir = prepare_out_dir(common.out_dir);
            write_file(dir / "edges.csv", [&](std::ostream& o) { orc::write_edge_csv(o, report); });
            write_file(dir / "nodes.csv", [&](std::ostream& o) { orc::write_node_csv(o, report); });
            auto summary = orc::report_summary_json(report);
            summary["input"] = {{"file", compute_file}, {"vertices", h.num_vertices()}, {"hyperedges", h.num_edges()},
                                {"duplicate_vertices_removed", duplicates}};
            write_json(dir / "summary.json", summary);
            std::cout << "wrote " << report.edges.size() << " edge and " << report.nodes.size() << " node records to "
                      << dir.string() << '\n';
        } else if (compare->parsed()) {
            const auto cfg = to_config(common);
            if (common.alpha != 0.0) throw UsageError("compare does not take --alpha");
            orc::AgreementConfig ac;
            ac.measure = cfg.measure;
            ac.agg = cfg.agg;
            ac.baseline = orc::parse_estimator_kind(baseline);
            ac.sinkhorn = cfg.sinkhorn;
            ac.threads = cfg.threads;
            ac.bins = bins;
            const auto ds = dataset_from(compare_file, compare_dataset, common);
            const auto r = orc::run_agreement(ds, ac);
            const auto dir = prepare_out_dir(common.out_dir);
            write_file(dir / "agreement.csv", [&](std::ostream& o) { orc::write_agreement_csv(o, r); });
            write_json(dir / "agreement.json", orc::agreement_json(r));
            write_file(dir / "scatter.svg", [&](std::ostream& o) { orc::write_scatter_svg(o, r); });
            write_file(dir / "histogram.svg", [&](std::ostream& o) { orc::write_histogram_svg(o, r); });
            std::cout << r.samples.size() << " edges compared, " << r.skipped.size() << " skipped, "
                      << r.soundness_violations << " soundness violations\n";
        } else if (bench->parsed()) {
            const auto cfg = to_config(common);
            if (common.alpha != 0.0) throw UsageError("bench does not take --alpha");
            orc::TimingConfig tc;
            tc.measure = cfg.measure;
            tc.agg = cfg.agg;
            tc.sinkhorn = cfg.sinkhorn;
            tc.threads = cfg.threads;
            tc.warmup_passes = warmup;
            const auto ds = dataset_from(bench_file, bench_dataset, common);
            const auto r = orc::run_timing(ds, tc);
            const auto dir = prepare_out_dir(common.out_dir);
            write_file(dir / "timing.csv", [&](std::ostream& o) { orc::write_timing_csv(o, r); });
            write_json(dir / "timing.json", orc::timing_json(r));
            std::cout << r.timed_pairs << " pairs timed, " << r.sinkhorn_failures << " excluded; speedup "
                      << (r.speedup ? orc::format_double(*r.speedup) : std::string("n/a")) << '\n';
            if (scaling) {
                const auto s = orc::measure_bound_scaling();
                write_json(dir / "scaling.json", orc::scaling_json(s));
                std::cout << "bound log-log slope " << orc::format_double(s.slope) << '\n';
            }
        } else if (generate->parsed()) {
            auto emit = [&](const orc::Hypergraph& h) {
                if (output.empty()) {
                    orc::write_hyperedge_list(std::cout, h);
                } else {
                    write_file(output, [&](std::ostream& o) { orc::write_hyperedge_list(o, h); });
                }
            };
            if (!spec_path.empty() && !fs::is_regular_file(spec_path)) throw UsageError("no such file: " + spec_path);
            std::ifstream spec_in(spec_path);
            if (model == "hcm") {
                auto spec = spec_path.empty() ? orc::desk_hcm_spec(gen_n, gen_m, gen_seed.value_or(1)) : orc::parse_hcm_spec(spec_in);
                if (gen_seed) spec.seed = *gen_seed;
                const auto g = orc::generate_hcm(spec);
                emit(g.graph);
                std::cerr << "hcm: " << g.graph.num_edges() << " hyperedges, " << g.collapsed
                          << " duplicate stubs collapsed, engine " << orc::kGeneratorEngine << ", seed " << spec.seed << '\n';
            } else {
                auto spec = spec_path.empty() ? orc::desk_hsbm_spec(gen_n, gen_m, gen_seed.value_or(1)) : orc::parse_hsbm_spec(spec_in);
                if (gen_seed) spec.seed = *gen_seed;
                const auto g = orc::generate_hsbm(spec);
                emit(g.graph);
                std::cerr << "hsbm: " << g.graph.num_edges() << " hyperedges, " << g.dropped_edges
                          << " empty hyperedges dropped, engine " << orc::kGeneratorEngine << ", seed " << spec.seed << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
