#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace orc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// Shortest-path length; std::nullopt means "unreachable". Never encoded as a
// large integer, because such a value would silently enter transport costs.
using Distance = std::optional<std::uint32_t>;

// Vertex set 0..n-1 plus an ordered multiset of hyperedges. Each hyperedge is
// a sorted set of distinct vertex ids with at least one member. Identical
// hyperedges may repeat.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(std::size_t num_vertices) : num_vertices_(num_vertices) {}

    // Adds a hyperedge. Members are sorted; duplicates, out-of-range ids,
    // empty edges and non-positive weights are rejected with orc::Error.
    EdgeId add_edge(std::vector<VertexId> members, double weight = 1.0);

    std::size_t num_vertices() const noexcept { return num_vertices_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    std::span<const VertexId> edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<std::vector<VertexId>>& edges() const noexcept { return edges_; }
    double weight(EdgeId e) const { return weights_.at(e); }
    bool is_weighted() const noexcept;

    // Optional external labels for each vertex id (filled by labeled ingestion).
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);

    // Sorts and removes repeated ids in place; returns how many were removed.
    static std::size_t canonicalize(std::vector<VertexId>& members);

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    std::size_t num_vertices_ = 0;
    std::vector<std::vector<VertexId>> edges_;
    std::vector<double> weights_;
    std::vector<std::string> labels_;
};

// Derived, immutable incidence structure. Safe for concurrent reads.
class AdjacencyIndex {
public:
    explicit AdjacencyIndex(const Hypergraph& h);

    std::size_t num_vertices() const noexcept { return degree_.size(); }

    // Sorted distinct neighbours; v itself is never included.
    std::span<const VertexId> neighbors(VertexId v) const;
    // Number of incident hyperedges, repeated hyperedges counted separately.
    std::size_t degree(VertexId v) const { return degree_.at(v); }
    std::span<const EdgeId> incident_edges(VertexId v) const;
    bool adjacent(VertexId u, VertexId v) const;

private:
    std::vector<std::size_t> neighbor_offsets_;
    std::vector<VertexId> neighbor_list_;
    std::vector<std::size_t> incidence_offsets_;
    std::vector<EdgeId> incidence_list_;
    std::vector<std::size_t> degree_;
};

AdjacencyIndex build_adjacency(const Hypergraph& h);

// Breadth-first shortest-path length in the co-membership graph.
Distance graph_distance(const AdjacencyIndex& adj, VertexId s, VertexId t);

// Distances from s to each target. The search stops as soon as every target
// has been reached, or after max_depth levels when given.
std::vector<Distance> bfs_distances(const AdjacencyIndex& adj, VertexId s,
                                    std::span<const VertexId> targets,
                                    std::optional<std::uint32_t> max_depth = std::nullopt);

// Component label per vertex, labels numbered in order of first vertex.
std::vector<std::uint32_t> connected_components(const AdjacencyIndex& adj);

struct ParsedHypergraph {
    Hypergraph graph;
    // Number of vertex ids dropped because they repeated within a line.
    std::size_t duplicate_count = 0;
};

// One hyperedge per line, whitespace-separated non-negative integer ids.
// '#' lines and blank lines are skipped. Throws ParseError with the line number
// on a malformed token.
ParsedHypergraph parse_hyperedge_list(std::istream& in);

// Same layout, but tokens are arbitrary labels mapped to dense ids in order of
// first appearance. The label table is stored on the hypergraph.
ParsedHypergraph parse_labeled_hyperedge_list(std::istream& in);

ParsedHypergraph load_hyperedge_list(const std::string& path, bool labeled = false);

// Canonical form: sorted ids per line, edges in insertion order.
void write_hyperedge_list(std::ostream& out, const Hypergraph& h);
std::string to_hyperedge_list(const Hypergraph& h);

}  // namespace orc
