#include <orc/metric_space.hpp>

#include <orc/error.hpp>

#include <bit>
#include <cstdlib>
#include <limits>

namespace orc {

namespace {

constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 22;

VertexId as_vertex(const AdjacencyIndex& adj, PointId p) {
    if (p >= adj.num_vertices()) throw Error("point " + std::to_string(p) + " is not a vertex");
    return static_cast<VertexId>(p);
}

}  // namespace

std::vector<Distance> IntegerMetricSpace::distances_from(PointId p,
                                                         std::span<const PointId> targets) const {
    std::vector<Distance> out;
    out.reserve(targets.size());
    for (PointId q : targets) out.push_back(distance(p, q));
    return out;
}

// -----------------------------------------------------------------------------
// GraphSpace
// -----------------------------------------------------------------------------

Distance GraphSpace::distance(PointId p, PointId q) const {
    return graph_distance(*adj_, as_vertex(*adj_, p), as_vertex(*adj_, q));
}

std::vector<PointId> GraphSpace::unit_neighbors(PointId p) const {
    const auto nb = adj_->neighbors(as_vertex(*adj_, p));
    return {nb.begin(), nb.end()};
}

bool GraphSpace::adjacent(PointId p, PointId q) const {
    return adj_->adjacent(as_vertex(*adj_, p), as_vertex(*adj_, q));
}

std::vector<Distance> GraphSpace::distances_from(PointId p, std::span<const PointId> targets) const {
    std::vector<VertexId> vs;
    vs.reserve(targets.size());
    for (PointId q : targets) vs.push_back(as_vertex(*adj_, q));
    return bfs_distances(*adj_, as_vertex(*adj_, p), vs);
}

std::optional<std::vector<PointId>> GraphSpace::enumerate() const {
    std::vector<PointId> all(adj_->num_vertices());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

GraphSpace graph_space(const AdjacencyIndex& adj) { return GraphSpace(adj); }

// -----------------------------------------------------------------------------
// L1LatticeSpace
// -----------------------------------------------------------------------------

L1LatticeSpace::L1LatticeSpace(std::vector<Axis> box) : box_(std::move(box)) {
    if (box_.empty()) throw Error("lattice dimension must be at least 1");
    stride_.resize(box_.size());
    for (std::size_t i = 0; i < box_.size(); ++i) {
        if (box_[i].hi < box_[i].lo) throw Error("lattice axis with hi < lo");
        const auto extent = static_cast<std::uint64_t>(box_[i].hi - box_[i].lo) + 1;
        stride_[i] = volume_;
        if (volume_ > std::numeric_limits<std::uint64_t>::max() / extent) {
            throw Error("lattice box too large to index");
        }
        volume_ *= extent;
    }
}

PointId L1LatticeSpace::encode(std::span<const std::int64_t> coords) const {
    if (coords.size() != box_.size()) throw Error("coordinate count does not match lattice dimension");
    PointId id = 0;
    for (std::size_t i = 0; i < box_.size(); ++i) {
        if (coords[i] < box_[i].lo || coords[i] > box_[i].hi) throw Error("coordinate outside lattice box");
        id += static_cast<std::uint64_t>(coords[i] - box_[i].lo) * stride_[i];
    }
    return id;
}

std::vector<std::int64_t> L1LatticeSpace::decode(PointId p) const {
    if (!contains(p)) throw Error("point outside lattice box");
    std::vector<std::int64_t> coords(box_.size());
    for (std::size_t i = box_.size(); i-- > 0;) {
        coords[i] = box_[i].lo + static_cast<std::int64_t>(p / stride_[i]);
        p %= stride_[i];
    }
    return coords;
}

Distance L1LatticeSpace::distance(PointId p, PointId q) const {
    const auto a = decode(p);
    const auto b = decode(q);
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::uint64_t>(std::llabs(a[i] - b[i]));
    return static_cast<std::uint32_t>(d);
}

std::vector<PointId> L1LatticeSpace::unit_neighbors(PointId p) const {
    const auto c = decode(p);
    std::vector<PointId> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] > box_[i].lo) out.push_back(p - stride_[i]);
        if (c[i] < box_[i].hi) out.push_back(p + stride_[i]);
    }
    return out;
}

std::optional<std::vector<PointId>> L1LatticeSpace::enumerate() const {
    if (volume_ > kEnumerationLimit) return std::nullopt;
    std::vector<PointId> all(volume_);
    for (std::uint64_t i = 0; i < volume_; ++i) all[i] = i;
    return all;
}

L1LatticeSpace l1_lattice_space(std::size_t dimension, std::span<const L1LatticeSpace::Axis> box) {
    if (dimension == 0) throw Error("lattice dimension must be at least 1");
    if (box.size() != dimension) throw Error("box must give bounds for every axis");
    return L1LatticeSpace({box.begin(), box.end()});
}

// -----------------------------------------------------------------------------
// HammingSpace
// -----------------------------------------------------------------------------

HammingSpace::HammingSpace(std::size_t length) : length_(length) {
    if (length == 0 || length > kMaxLength) {
        throw Error("Hamming length must be in [1, " + std::to_string(kMaxLength) + "]");
    }
}

PointId HammingSpace::encode(std::string_view bits) const {
    if (bits.size() != length_) throw Error("bit string length does not match space length");
    PointId p = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw Error("bit string may contain only '0' and '1'");
        p = (p << 1) | static_cast<PointId>(c == '1');
    }
    return p;
}

std::string HammingSpace::decode(PointId p) const {
    if (!contains(p)) throw Error("point outside Hamming space");
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((p >> (length_ - 1 - i)) & 1U) s[i] = '1';
    }
    return s;
}

std::uint32_t HammingSpace::string_distance(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) throw Error("Hamming distance requires equal-length strings");
    std::uint32_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

Distance HammingSpace::distance(PointId p, PointId q) const {
    if (!contains(p) || !contains(q)) throw Error("point outside Hamming space");
    return static_cast<std::uint32_t>(std::popcount(p ^ q));
}

std::vector<PointId> HammingSpace::unit_neighbors(PointId p) const {
    if (!contains(p)) throw Error("point outside Hamming space");
    std::vector<PointId> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = p ^ (PointId{1} << i);
    return out;
}

std::optional<std::vector<PointId>> HammingSpace::enumerate() const {
    const PointId count = PointId{1} << length_;
    if (count > kEnumerationLimit) return std::nullopt;
    std::vector<PointId> all(count);
    for (PointId i = 0; i < count; ++i) all[i] = i;
    return all;
}

HammingSpace hamming_space(std::size_t length) { return HammingSpace(length); }

}  // namespace orc
