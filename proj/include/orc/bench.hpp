#pragma once

#include <orc/curvature.hpp>
#include <orc/hypergraph.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace orc {

struct Dataset {
    std::string id;
    Hypergraph graph;
};

// The desk-scale synthetic corpora: n = 200 vertices, m = 300 hyperedges.
Dataset desk_hcm_dataset(std::uint64_t seed);
Dataset desk_hsbm_dataset(std::uint64_t seed);

// Unordered adjacent pairs that some hyperedge aggregation needs, in first-seen
// order over hyperedges.
std::vector<std::pair<VertexId, VertexId>> aggregation_pairs(const Hypergraph& h);

// -----------------------------------------------------------------------------
// Timing
// -----------------------------------------------------------------------------

struct TimingConfig {
    MeasureKind measure = MeasureKind::weighted_edges;
    AggKind agg = AggKind::average;
    SinkhornOptions sinkhorn;
    std::size_t threads = 1;
    // Untimed passes over the whole workload before measurement.
    int warmup_passes = 1;
};

struct PairTiming {
    VertexId u = 0;
    VertexId v = 0;
    std::int64_t bound_ns = 0;
    std::int64_t sinkhorn_ns = 0;   // solve only
    std::int64_t problem_ns = 0;    // union support and cost matrix for Sinkhorn
    double bound_w1 = 0.0;
    double sinkhorn_w1 = 0.0;
    bool excluded = false;          // Sinkhorn failed; counted on neither side
    std::string failure;
};

struct BenchResult {
    std::string dataset;
    TimingConfig config;
    std::vector<PairTiming> pairs;
    std::size_t timed_pairs = 0;
    std::size_t sinkhorn_failures = 0;
    std::int64_t bound_total_ns = 0;
    std::int64_t sinkhorn_total_ns = 0;
    std::int64_t problem_total_ns = 0;
    double bound_per_pair_ns = 0.0;
    double sinkhorn_per_pair_ns = 0.0;
    // sinkhorn_total / bound_total; std::nullopt for an empty workload.
    std::optional<double> speedup;
    std::size_t threads = 1;
    std::string build_flags;
};

// Times only the W1 evaluation of every aggregation pair under both the bound
// and the Sinkhorn baseline, with measures built beforehand.
BenchResult run_timing(const Dataset& dataset, const TimingConfig& config);

struct ScalingPoint {
    std::size_t support = 0;  // |supp mu_x| + |supp mu_y|
    double ns_per_call = 0.0;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    // Least squares fit of log(ns_per_call) on log(support).
    double slope = 0.0;
    double intercept = 0.0;
};

struct ScalingConfig {
    // Neighbours per endpoint; half of them are shared.
    std::vector<std::size_t> degrees{512, 1024, 2048, 4096, 8192, 16384};
    int trials = 7;
    // Minimum timed duration of one trial.
    std::int64_t min_trial_ns = 2'000'000;
};

// Per-call cost of the bound on equal-nodes measures of growing support.
ScalingResult measure_bound_scaling(const ScalingConfig& config = {});

// -----------------------------------------------------------------------------
// Agreement
// -----------------------------------------------------------------------------

struct AgreementConfig {
    MeasureKind measure = MeasureKind::equal_nodes;
    AggKind agg = AggKind::average;
    EstimatorKind baseline = EstimatorKind::exact;
    ExactOptions exact;
    SinkhornOptions sinkhorn;
    std::size_t threads = 1;
    std::size_t bins = 20;
};

struct AgreementSample {
    EdgeId edge = 0;
    double bound = 0.0;
    double baseline = 0.0;
};

struct Histogram {
    std::vector<double> edges;  // bins + 1 boundaries shared by both series
    std::vector<std::size_t> bound_counts;
    std::vector<std::size_t> baseline_counts;
};

struct AgreementResult {
    std::string dataset;
    AgreementConfig config;
    std::vector<AgreementSample> samples;
    std::vector<std::pair<EdgeId, std::string>> skipped;
    // std::nullopt when undefined (fewer than two samples or a constant
    // series that differs from the other).
    std::optional<double> pearson;
    std::optional<double> spearman;
    double bound_mean = 0.0;
    double baseline_mean = 0.0;
    double mean_shift = 0.0;  // baseline_mean - bound_mean
    // Ordinary least squares trend baseline = trend_intercept + trend_slope * bound.
    std::optional<double> trend_slope;
    std::optional<double> trend_intercept;
    Histogram histogram;
    // Samples with bound > baseline + 1e-9. Only meaningful against the exact oracle.
    std::size_t soundness_violations = 0;
};

AgreementResult run_agreement(const Dataset& dataset, const AgreementConfig& config);

// Pearson and Spearman with the conventions of AgreementResult.
std::optional<double> pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);
std::optional<double> spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);
Histogram shared_histogram(const std::vector<double>& a, const std::vector<double>& b, std::size_t bins);

// -----------------------------------------------------------------------------
// Output
// -----------------------------------------------------------------------------

nlohmann::json timing_json(const BenchResult& r);
nlohmann::json scaling_json(const ScalingResult& r);
nlohmann::json agreement_json(const AgreementResult& r);

// u,v,bound_ns,sinkhorn_ns,problem_ns,bound_w1,sinkhorn_w1,excluded,failure
void write_timing_csv(std::ostream& out, const BenchResult& r);
// edge_id,bound,baseline
void write_agreement_csv(std::ostream& out, const AgreementResult& r);

// Bound on x, baseline on y, dotted y = x and the least squares trend line.
void write_scatter_svg(std::ostream& out, const AgreementResult& r);
// Both series over the shared bins.
void write_histogram_svg(std::ostream& out, const AgreementResult& r);

}  // namespace orc
