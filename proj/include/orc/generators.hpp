#pragma once

#include <orc/hypergraph.hpp>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

namespace orc {

// Name of the pseudorandom engine, written into output metadata.
inline constexpr std::string_view kGeneratorEngine = "mt19937_64";

// Seeded engine plus draw helpers whose output depends only on the engine's
// bit stream (the standard distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);
    // Uniform double in [0, 1) with 53 random bits.
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// Hypergraph configuration model: d_v stubs per vertex matched at random into
// hyperedges of the prescribed cardinalities.
struct HcmSpec {
    std::vector<std::size_t> degrees;
    std::vector<std::size_t> cardinalities;
    std::uint64_t seed = 0;
};

// Hypergraph stochastic block model: vertex v of node community a joins
// hyperedge e of edge community b with probability affinity[a][b].
struct HsbmSpec {
    std::vector<std::size_t> node_communities;
    std::vector<std::size_t> edge_communities;
    std::vector<std::vector<double>> affinity;  // node communities x edge communities
    std::uint64_t seed = 0;
};

struct GeneratedHypergraph {
    Hypergraph graph;
    // HCM: stub groups before duplicate collapse, one per requested hyperedge.
    std::vector<std::vector<VertexId>> raw_edges;
    // Vertex ids removed because a stub group named the same vertex twice.
    std::size_t collapsed = 0;
    // HSBM: generated hyperedges that ended up empty and were dropped.
    std::size_t dropped_edges = 0;
    // HSBM: edge community of every kept hyperedge.
    std::vector<std::size_t> edge_block;
};

// Throws orc::Error when the stub counts differ or a cardinality is zero.
GeneratedHypergraph generate_hcm(const HcmSpec& spec);
// Throws orc::Error on empty or zero sizes, a mis-shaped affinity matrix, or
// probabilities outside [0, 1].
GeneratedHypergraph generate_hsbm(const HsbmSpec& spec);

// Key-value spec files: `key = values`, '#' comments. HCM keys: degrees,
// cardinalities, seed. HSBM keys: node_communities, edge_communities, seed and
// one `affinity` line per node community.
HcmSpec parse_hcm_spec(std::istream& in);
HsbmSpec parse_hsbm_spec(std::istream& in);
void write_hcm_spec(std::ostream& out, const HcmSpec& spec);
void write_hsbm_spec(std::ostream& out, const HsbmSpec& spec);

// Benchmark-sized presets with n vertices and m hyperedges.
// HCM: cardinalities uniform in [2, 5], every vertex at least one stub.
HcmSpec desk_hcm_spec(std::size_t n, std::size_t m, std::uint64_t seed);
// HSBM: four node and four edge communities, assortative affinities chosen for
// a mean hyperedge cardinality near 3.5.
HsbmSpec desk_hsbm_spec(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace orc
