#include <orc/curvature.hpp>

#include <orc/error.hpp>
#include <orc/parallel.hpp>

#include <algorithm>
#include <chrono>
#include <limits>

namespace orc {

std::string_view to_string(AggKind kind) { return kind == AggKind::average ? "a" : "m"; }

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::bound: return "bound";
        case EstimatorKind::exact: return "exact";
        case EstimatorKind::sinkhorn: return "sinkhorn";
    }
    return "?";
}

AggKind parse_agg_kind(std::string_view text) {
    if (text == "a") return AggKind::average;
    if (text == "m") return AggKind::max;
    throw Error("unknown aggregation '" + std::string(text) + "' (expected a|m)");
}

EstimatorKind parse_estimator_kind(std::string_view text) {
    if (text == "bound") return EstimatorKind::bound;
    if (text == "exact") return EstimatorKind::exact;
    if (text == "sinkhorn") return EstimatorKind::sinkhorn;
    throw Error("unknown estimator '" + std::string(text) + "' (expected bound|exact|sinkhorn)");
}

// -----------------------------------------------------------------------------
// PairwiseW1
// -----------------------------------------------------------------------------

namespace {

std::uint64_t pair_key(VertexId i, VertexId j) {
    if (i > j) std::swap(i, j);
    return (std::uint64_t{i} << 32) | j;
}

}  // namespace

PairwiseW1::PairwiseW1(const Hypergraph& h, const AdjacencyIndex& adj, const CurvatureConfig& config)
    : adj_(&adj), space_(adj), config_(config) {
    if (config.alpha < 0.0 || config.alpha >= 1.0) throw Error("laziness must lie in [0, 1)");
    const auto weights = h.is_weighted() ? std::optional<PairWeights>(pair_weights_from(h)) : std::nullopt;
    measures_.resize(h.num_vertices());
    measure_errors_.resize(h.num_vertices());
    for (VertexId v = 0; v < h.num_vertices(); ++v) {
        try {
            auto mu = make_measure(config.measure, h, adj, v, weights ? &*weights : nullptr);
            measures_[v] = config.alpha > 0.0 ? lazify(mu, config.alpha) : std::move(mu);
        } catch (const MeasureError& e) {
            measure_errors_[v] = e.what();
        }
    }
}

const LocalMeasure& PairwiseW1::measure(VertexId v) const {
    const auto& mu = measures_.at(v);
    if (!mu) throw MeasureError(measure_errors_[v]);
    return *mu;
}

double PairwiseW1::evaluate(VertexId i, VertexId j) const {
    const LocalMeasure& mi = measure(i);
    const LocalMeasure& mj = measure(j);
    switch (config_.estimator) {
        case EstimatorKind::bound:
            return w1_upper_bound(i, j, mi, mj, space_, config_.bound).w1_upper;
        case EstimatorKind::exact:
        case EstimatorKind::sinkhorn: {
            if (!adj_->adjacent(i, j)) {
                throw NotAdjacentError("vertices " + std::to_string(i) + " and " + std::to_string(j) +
                                       " are not adjacent");
            }
            const auto problem = make_transport_problem(mi, mj, space_);
            if (config_.estimator == EstimatorKind::exact) return exact_w1(problem, config_.exact).objective;
            return sinkhorn_w1(problem, config_.sinkhorn).cost;
        }
    }
    throw Error("unknown estimator");
}

double PairwiseW1::operator()(VertexId i, VertexId j) const {
    const auto key = pair_key(i, j);
    Shard& shard = shards_[key % kShards];
    {
        std::lock_guard lock(shard.mutex);
        if (auto it = shard.values.find(key); it != shard.values.end()) return it->second;
    }
    // Symmetric estimators: evaluate in canonical order so memo hits and
    // misses agree bit for bit.
    const double value = i < j ? evaluate(i, j) : evaluate(j, i);
    std::lock_guard lock(shard.mutex);
    return shard.values.try_emplace(key, value).first->second;
}

std::size_t PairwiseW1::cached_pairs() const {
    std::size_t n = 0;
    for (const Shard& s : shards_) {
        std::lock_guard lock(s.mutex);
        n += s.values.size();
    }
    return n;
}

// -----------------------------------------------------------------------------
// Aggregation
// -----------------------------------------------------------------------------

namespace {

void require_pair(std::span<const VertexId> e) {
    if (e.size() < 2) throw Error("hyperedge of cardinality " + std::to_string(e.size()) + " has no vertex pair");
}

}  // namespace

double agg_average(std::span<const VertexId> e, const PairEvaluator& w1) {
    require_pair(e);
    double sum = 0.0;
    for (std::size_t a = 0; a < e.size(); ++a) {
        for (std::size_t b = a + 1; b < e.size(); ++b) sum += w1(e[a], e[b]);
    }
    const double k = static_cast<double>(e.size());
    return 2.0 * sum / (k * (k - 1.0));
}

double agg_max(std::span<const VertexId> e, const PairEvaluator& w1) {
    require_pair(e);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < e.size(); ++a) {
        for (std::size_t b = a + 1; b < e.size(); ++b) best = std::max(best, w1(e[a], e[b]));
    }
    return best;
}

double aggregate(AggKind kind, std::span<const VertexId> e, const PairEvaluator& w1) {
    return kind == AggKind::average ? agg_average(e, w1) : agg_max(e, w1);
}

double edge_curvature(std::span<const VertexId> e, AggKind kind, const PairEvaluator& w1) {
    return 1.0 - aggregate(kind, e, w1);
}

std::optional<double> node_curvature_neighborhood(VertexId i, const AdjacencyIndex& adj, const PairEvaluator& w1) {
    const auto nb = adj.neighbors(i);
    if (nb.empty()) return std::nullopt;
    double sum = 0.0;
    for (VertexId j : nb) sum += 1.0 - w1(i, j);
    return sum / static_cast<double>(nb.size());
}

std::optional<double> node_curvature_edges(VertexId i, const AdjacencyIndex& adj,
                                           std::span<const std::optional<double>> edge_kappa,
                                           bool count_singletons) {
    double sum = 0.0;
    std::size_t count = 0, bearing = 0;
    for (EdgeId e : adj.incident_edges(i)) {
        const auto& k = edge_kappa[e];
        if (k) {
            sum += *k;
            ++bearing;
            ++count;
        } else if (count_singletons) {
            ++count;
        }
    }
    if (bearing == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

// -----------------------------------------------------------------------------
// Report
// -----------------------------------------------------------------------------

CurvatureReport compute_curvature(const Hypergraph& h, const CurvatureConfig& config) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();

    const AdjacencyIndex adj(h);
    const PairwiseW1 w1(h, adj, config);
    const PairEvaluator eval = [&w1](VertexId i, VertexId j) { return w1(i, j); };

    CurvatureReport report;
    report.config = config;
    report.edges.resize(h.num_edges());
    parallel_for(h.num_edges(), config.threads, [&](std::size_t e) {
        EdgeRecord& rec = report.edges[e];
        rec.id = static_cast<EdgeId>(e);
        const auto members = h.edge(rec.id);
        rec.cardinality = members.size();
        if (members.size() < 2) {
            rec.skip_reason = "singleton hyperedge";
            return;
        }
        const auto t0 = Clock::now();
        try {
            const double agg = aggregate(config.agg, members, eval);
            rec.agg = agg;
            rec.curvature = 1.0 - agg;
        } catch (const Error& err) {
            rec.skip_reason = err.what();
        }
        rec.time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
    });

    std::vector<std::optional<double>> edge_kappa(h.num_edges());
    for (const auto& rec : report.edges) edge_kappa[rec.id] = rec.curvature;

    report.nodes.resize(h.num_vertices());
    parallel_for(h.num_vertices(), config.threads, [&](std::size_t v) {
        NodeRecord& rec = report.nodes[v];
        rec.id = static_cast<VertexId>(v);
        if (adj.neighbors(rec.id).empty()) {
            rec.skip_reason = "isolated vertex";
            return;
        }
        try {
            rec.kappa_neighborhood = node_curvature_neighborhood(rec.id, adj, eval);
        } catch (const Error& err) {
            rec.skip_reason = err.what();
        }
        rec.kappa_edges = node_curvature_edges(rec.id, adj, edge_kappa, config.count_singletons_in_node_degree);
        if (!rec.kappa_edges && rec.skip_reason.empty()) rec.skip_reason = "no curvature-bearing hyperedge";
    });

    report.total_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - started).count();
    return report;
}

}  // namespace orc
