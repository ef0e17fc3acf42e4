#pragma once

#include <orc/hypergraph.hpp>
#include <orc/metric_space.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace orc {

struct Atom {
    PointId point;
    double mass;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Finitely supported probability measure attached to a base point. Atoms are
// kept sorted by point id with strictly positive masses, which lets two
// measures be merged in one linear pass. The base point may carry mass
// (laziness).
class LocalMeasure {
public:
    // Absolute slack accepted on the total mass at construction.
    static constexpr double kSumTolerance = 1e-9;

    LocalMeasure(PointId base, std::vector<Atom> atoms);

    PointId base() const noexcept { return base_; }
    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double mass_at(PointId p) const;
    double base_mass() const { return mass_at(base_); }
    double total() const;

private:
    PointId base_;
    std::vector<Atom> atoms_;
};

// Throws MeasureError unless every non-base support point is at distance one
// from the base point.
void check_support(const LocalMeasure& mu, const IntegerMetricSpace& space);

// Symmetric per-pair weights w_xy for the weighted graph walk.
class PairWeights {
public:
    void add(VertexId u, VertexId v, double w);
    double get(VertexId u, VertexId v) const;

private:
    static std::uint64_t key(VertexId u, VertexId v);
    std::unordered_map<std::uint64_t, double> weights_;
};

// w_xy = sum of the weights of hyperedges containing both x and y.
PairWeights pair_weights_from(const Hypergraph& h);

// mu_x(y) = w_xy / d_x with d_x = sum over neighbours; uniform when weights is null.
LocalMeasure graph_measure(const AdjacencyIndex& adj, const PairWeights* weights, VertexId x);

// Equal-Nodes walk: uniform over N(x).
LocalMeasure measure_equal_nodes(const Hypergraph& h, const AdjacencyIndex& adj, VertexId x);

// Equal-Edges walk: pick an incident non-singleton hyperedge uniformly, then a
// co-member uniformly.
LocalMeasure measure_equal_edges(const Hypergraph& h, const AdjacencyIndex& adj, VertexId x);

// Weighted-Edges walk: pick an incident hyperedge with probability
// proportional to |e|-1, then a co-member uniformly.
LocalMeasure measure_weighted_edges(const Hypergraph& h, const AdjacencyIndex& adj, VertexId x);

// alpha * delta_base + (1 - alpha) * mu, alpha in (0, 1).
LocalMeasure lazify(const LocalMeasure& mu, double alpha);

// (mu - alpha * delta_base) / (1 - alpha), alpha in [0, 1) and <= mu(base).
LocalMeasure delazify(const LocalMeasure& mu, double alpha);

enum class MeasureKind { equal_nodes, equal_edges, weighted_edges, graph };

std::string_view to_string(MeasureKind kind);
// Accepts "en", "ee", "we", "graph".
MeasureKind parse_measure_kind(std::string_view text);

LocalMeasure make_measure(MeasureKind kind, const Hypergraph& h, const AdjacencyIndex& adj, VertexId x,
                          const PairWeights* weights = nullptr);

}  // namespace orc
