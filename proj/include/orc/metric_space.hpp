#pragma once

#include <orc/hypergraph.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orc {

// Points of every space are encoded as 64-bit ids: vertex ids for graphs,
// mixed-radix box offsets for lattices, bit patterns for Hamming strings.
using PointId = std::uint64_t;

// A discrete space whose metric takes integer values. Only distances and
// distance-one neighbourhoods are exposed; the bound estimator never needs to
// enumerate the universe.
class IntegerMetricSpace {
public:
    virtual ~IntegerMetricSpace() = default;

    virtual bool contains(PointId p) const = 0;
    // std::nullopt when p and q lie in different components.
    virtual Distance distance(PointId p, PointId q) const = 0;
    // Points at distance exactly one from p.
    virtual std::vector<PointId> unit_neighbors(PointId p) const = 0;

    virtual bool adjacent(PointId p, PointId q) const {
        const auto d = distance(p, q);
        return d && *d == 1;
    }

    // Row of distances from p; spaces with a cheaper batched query override it.
    virtual std::vector<Distance> distances_from(PointId p, std::span<const PointId> targets) const;

    // Full point list for finite test instances; std::nullopt if not enumerable.
    virtual std::optional<std::vector<PointId>> enumerate() const { return std::nullopt; }
};

// Graph distance over a hypergraph's co-membership graph. Holds a reference:
// the AdjacencyIndex must outlive the space.
class GraphSpace final : public IntegerMetricSpace {
public:
    explicit GraphSpace(const AdjacencyIndex& adj) : adj_(&adj) {}

    bool contains(PointId p) const override { return p < adj_->num_vertices(); }
    Distance distance(PointId p, PointId q) const override;
    std::vector<PointId> unit_neighbors(PointId p) const override;
    bool adjacent(PointId p, PointId q) const override;
    std::vector<Distance> distances_from(PointId p, std::span<const PointId> targets) const override;
    std::optional<std::vector<PointId>> enumerate() const override;

    const AdjacencyIndex& adjacency() const noexcept { return *adj_; }

private:
    const AdjacencyIndex* adj_;
};

GraphSpace graph_space(const AdjacencyIndex& adj);

// Integer lattice with the l1 metric, restricted to an axis-aligned box.
class L1LatticeSpace final : public IntegerMetricSpace {
public:
    struct Axis {
        std::int64_t lo;
        std::int64_t hi;
    };

    explicit L1LatticeSpace(std::vector<Axis> box);

    std::size_t dimension() const noexcept { return box_.size(); }
    PointId encode(std::span<const std::int64_t> coords) const;
    std::vector<std::int64_t> decode(PointId p) const;

    bool contains(PointId p) const override { return p < volume_; }
    Distance distance(PointId p, PointId q) const override;
    std::vector<PointId> unit_neighbors(PointId p) const override;
    std::optional<std::vector<PointId>> enumerate() const override;

private:
    std::vector<Axis> box_;
    std::vector<std::uint64_t> stride_;
    std::uint64_t volume_ = 1;
};

L1LatticeSpace l1_lattice_space(std::size_t dimension, std::span<const L1LatticeSpace::Axis> box);

// Binary strings of a fixed length under the Hamming distance.
class HammingSpace final : public IntegerMetricSpace {
public:
    static constexpr std::size_t kMaxLength = 63;

    explicit HammingSpace(std::size_t length);

    std::size_t length() const noexcept { return length_; }
    // Parses a '0'/'1' string; its length must equal length().
    PointId encode(std::string_view bits) const;
    std::string decode(PointId p) const;
    // Distance between two textual strings; throws orc::Error on length mismatch.
    static std::uint32_t string_distance(std::string_view a, std::string_view b);

    bool contains(PointId p) const override { return p < (PointId{1} << length_); }
    Distance distance(PointId p, PointId q) const override;
    std::vector<PointId> unit_neighbors(PointId p) const override;
    std::optional<std::vector<PointId>> enumerate() const override;

private:
    std::size_t length_;
};

HammingSpace hamming_space(std::size_t length);

}  // namespace orc
