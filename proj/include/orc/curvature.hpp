#pragma once

#include <orc/bound.hpp>
#include <orc/hypergraph.hpp>
#include <orc/measure.hpp>
#include <orc/metric_space.hpp>
#include <orc/transport.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace orc {

enum class AggKind { average, max };
enum class EstimatorKind { bound, exact, sinkhorn };

std::string_view to_string(AggKind kind);
std::string_view to_string(EstimatorKind kind);
AggKind parse_agg_kind(std::string_view text);              // "a" | "m"
EstimatorKind parse_estimator_kind(std::string_view text);  // "bound" | "exact" | "sinkhorn"

struct CurvatureConfig {
    MeasureKind measure = MeasureKind::equal_nodes;
    AggKind agg = AggKind::average;
    EstimatorKind estimator = EstimatorKind::bound;
    // Extra laziness mixed into every measure; 0 leaves measures unchanged.
    double alpha = 0.0;
    BoundOptions bound;
    ExactOptions exact;
    SinkhornOptions sinkhorn;
    // Count singleton hyperedges in the denominator of the edge-based node
    // curvature. Off by default: singletons carry no curvature.
    bool count_singletons_in_node_degree = false;
    std::size_t threads = 1;
};

using PairEvaluator = std::function<double(VertexId, VertexId)>;

// Pairwise W1 between the local measures of two adjacent vertices under the
// configured estimator. Measures are built once up front; values are memoised
// per unordered pair. Concurrent calls are safe.
class PairwiseW1 {
public:
    PairwiseW1(const Hypergraph& h, const AdjacencyIndex& adj, const CurvatureConfig& config);

    PairwiseW1(const PairwiseW1&) = delete;
    PairwiseW1& operator=(const PairwiseW1&) = delete;

    // Throws NotAdjacentError for non-adjacent pairs and MeasureError when a
    // vertex has no measure.
    double operator()(VertexId i, VertexId j) const;

    // Uncached evaluation; used by the timing harness.
    double evaluate(VertexId i, VertexId j) const;

    const LocalMeasure& measure(VertexId v) const;
    bool has_measure(VertexId v) const { return measures_.at(v).has_value(); }
    const GraphSpace& space() const noexcept { return space_; }
    const CurvatureConfig& config() const noexcept { return config_; }
    std::size_t cached_pairs() const;

private:
    static constexpr std::size_t kShards = 64;
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<std::uint64_t, double> values;
    };

    const AdjacencyIndex* adj_;
    GraphSpace space_;
    CurvatureConfig config_;
    std::vector<std::optional<LocalMeasure>> measures_;
    std::vector<std::string> measure_errors_;
    mutable std::array<Shard, kShards> shards_;
};

// Mean of W1 over all unordered pairs of e. Throws orc::Error when |e| < 2.
double agg_average(std::span<const VertexId> e, const PairEvaluator& w1);
// Maximum of W1 over all unordered pairs of e. Throws orc::Error when |e| < 2.
double agg_max(std::span<const VertexId> e, const PairEvaluator& w1);
double aggregate(AggKind kind, std::span<const VertexId> e, const PairEvaluator& w1);

// 1 - AGG(e).
double edge_curvature(std::span<const VertexId> e, AggKind kind, const PairEvaluator& w1);

// Mean of 1 - W1(mu_i, mu_j) over j in N(i); std::nullopt for isolated i.
std::optional<double> node_curvature_neighborhood(VertexId i, const AdjacencyIndex& adj, const PairEvaluator& w1);

// Mean of the curvatures of hyperedges containing i. edge_kappa holds one
// entry per hyperedge, std::nullopt where no curvature exists (singletons).
// std::nullopt when i has no curvature-bearing incident hyperedge.
std::optional<double> node_curvature_edges(VertexId i, const AdjacencyIndex& adj,
                                           std::span<const std::optional<double>> edge_kappa,
                                           bool count_singletons = false);

struct EdgeRecord {
    EdgeId id = 0;
    std::size_t cardinality = 0;
    std::optional<double> agg;
    std::optional<double> curvature;
    std::string skip_reason;  // empty when the record carries values
    std::int64_t time_ns = 0;

    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct NodeRecord {
    VertexId id = 0;
    std::optional<double> kappa_neighborhood;
    std::optional<double> kappa_edges;
    std::string skip_reason;

    friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct CurvatureReport {
    CurvatureConfig config;
    std::vector<EdgeRecord> edges;
    std::vector<NodeRecord> nodes;
    std::int64_t total_time_ns = 0;
};

// Edge curvature for every hyperedge and both node curvatures for every
// vertex. Records that cannot be computed carry a skip reason instead.
CurvatureReport compute_curvature(const Hypergraph& h, const CurvatureConfig& config);

}  // namespace orc
