#include <orc/generators.hpp>

#include <orc/error.hpp>

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

namespace orc {

// -----------------------------------------------------------------------------
// Rng
// -----------------------------------------------------------------------------

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error("Rng::below needs a positive bound");
    // Rejection sampling keeps the draw unbiased and portable.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r < limit) return r % bound;
    }
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

// -----------------------------------------------------------------------------
// Configuration model
// -----------------------------------------------------------------------------

GeneratedHypergraph generate_hcm(const HcmSpec& spec) {
    const std::size_t stubs = std::accumulate(spec.degrees.begin(), spec.degrees.end(), std::size_t{0});
    const std::size_t slots = std::accumulate(spec.cardinalities.begin(), spec.cardinalities.end(), std::size_t{0});
    if (stubs != slots) {
        throw Error("degree sum " + std::to_string(stubs) + " differs from cardinality sum " + std::to_string(slots));
    }
    if (std::find(spec.cardinalities.begin(), spec.cardinalities.end(), 0) != spec.cardinalities.end()) {
        throw Error("hyperedge cardinalities must be positive");
    }

    std::vector<VertexId> pool;
    pool.reserve(stubs);
    for (std::size_t v = 0; v < spec.degrees.size(); ++v) pool.insert(pool.end(), spec.degrees[v], static_cast<VertexId>(v));
    Rng rng(spec.seed);
    rng.shuffle(pool);

    GeneratedHypergraph out;
    out.graph = Hypergraph(spec.degrees.size());
    std::size_t cursor = 0;
    for (std::size_t k : spec.cardinalities) {
        std::vector<VertexId> group(pool.begin() + static_cast<std::ptrdiff_t>(cursor),
                                    pool.begin() + static_cast<std::ptrdiff_t>(cursor + k));
        cursor += k;
        out.raw_edges.push_back(group);
        out.collapsed += Hypergraph::canonicalize(group);
        out.graph.add_edge(std::move(group));
    }
    return out;
}

// -----------------------------------------------------------------------------
// Stochastic block model
// -----------------------------------------------------------------------------

GeneratedHypergraph generate_hsbm(const HsbmSpec& spec) {
    const auto& nc = spec.node_communities;
    const auto& ec = spec.edge_communities;
    if (nc.empty() || ec.empty()) throw Error("HSBM needs at least one node and one edge community");
    if (std::find(nc.begin(), nc.end(), 0) != nc.end() || std::find(ec.begin(), ec.end(), 0) != ec.end()) {
        throw Error("HSBM community sizes must be positive");
    }
    if (spec.affinity.size() != nc.size()) throw Error("affinity needs one row per node community");
    for (const auto& row : spec.affinity) {
        if (row.size() != ec.size()) throw Error("affinity rows need one entry per edge community");
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) throw Error("affinity entries must lie in [0, 1]");
        }
    }

    std::vector<std::size_t> node_block;
    for (std::size_t a = 0; a < nc.size(); ++a) node_block.insert(node_block.end(), nc[a], a);

    Rng rng(spec.seed);
    GeneratedHypergraph out;
    out.graph = Hypergraph(node_block.size());
    for (std::size_t b = 0; b < ec.size(); ++b) {
        for (std::size_t e = 0; e < ec[b]; ++e) {
            std::vector<VertexId> members;
            for (std::size_t v = 0; v < node_block.size(); ++v) {
                if (rng.bernoulli(spec.affinity[node_block[v]][b])) members.push_back(static_cast<VertexId>(v));
            }
            if (members.empty()) {
                ++out.dropped_edges;
                continue;
            }
            out.graph.add_edge(std::move(members));
            out.edge_block.push_back(b);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Spec files
// -----------------------------------------------------------------------------

namespace {

struct KeyValue {
    std::size_t line;
    std::string key;
    std::string value;
};

std::vector<KeyValue> read_key_values(std::istream& in) {
    std::vector<KeyValue> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(n, "expected 'key = value'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        out.push_back({n, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(const KeyValue& kv) {
    std::istringstream ss(kv.value);
    std::vector<T> out;
    std::string token;
    while (ss >> token) {
        std::istringstream one(token);
        T value{};
        if (!(one >> value) || !one.eof()) throw ParseError(kv.line, "malformed value '" + token + "' for " + kv.key);
        if constexpr (std::is_unsigned_v<T>) {
            if (token.front() == '-') throw ParseError(kv.line, "negative value for " + kv.key);
        }
        out.push_back(value);
    }
    return out;
}

std::uint64_t parse_seed(const KeyValue& kv) {
    const auto v = parse_list<std::uint64_t>(kv);
    if (v.size() != 1) throw ParseError(kv.line, "seed takes exactly one value");
    return v.front();
}

template <typename T>
void write_list(std::ostream& out, std::string_view key, const std::vector<T>& values) {
    out << key << " =" << std::setprecision(17);
    for (const auto& v : values) out << ' ' << v;
    out << '\n';
}

}  // namespace

HcmSpec parse_hcm_spec(std::istream& in) {
    HcmSpec spec;
    for (const auto& kv : read_key_values(in)) {
        if (kv.key == "degrees") {
            spec.degrees = parse_list<std::size_t>(kv);
        } else if (kv.key == "cardinalities") {
            spec.cardinalities = parse_list<std::size_t>(kv);
        } else if (kv.key == "seed") {
            spec.seed = parse_seed(kv);
        } else if (kv.key != "model") {
            throw ParseError(kv.line, "unknown HCM key '" + kv.key + "'");
        }
    }
    return spec;
}

HsbmSpec parse_hsbm_spec(std::istream& in) {
    HsbmSpec spec;
    for (const auto& kv : read_key_values(in)) {
        if (kv.key == "node_communities") {
            spec.node_communities = parse_list<std::size_t>(kv);
        } else if (kv.key == "edge_communities") {
            spec.edge_communities = parse_list<std::size_t>(kv);
        } else if (kv.key == "affinity") {
            spec.affinity.push_back(parse_list<double>(kv));
        } else if (kv.key == "seed") {
            spec.seed = parse_seed(kv);
        } else if (kv.key != "model") {
            throw ParseError(kv.line, "unknown HSBM key '" + kv.key + "'");
        }
    }
    return spec;
}

void write_hcm_spec(std::ostream& out, const HcmSpec& spec) {
    out << "model = hcm\nseed = " << spec.seed << '\n';
    write_list(out, "degrees", spec.degrees);
    write_list(out, "cardinalities", spec.cardinalities);
}

void write_hsbm_spec(std::ostream& out, const HsbmSpec& spec) {
    out << "model = hsbm\nseed = " << spec.seed << '\n';
    write_list(out, "node_communities", spec.node_communities);
    write_list(out, "edge_communities", spec.edge_communities);
    for (const auto& row : spec.affinity) write_list(out, "affinity", row);
}

// -----------------------------------------------------------------------------
// Presets
// -----------------------------------------------------------------------------

HcmSpec desk_hcm_spec(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0 || m == 0) throw Error("preset needs n > 0 and m > 0");
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    HcmSpec spec;
    spec.seed = seed;
    spec.cardinalities.resize(m);
    for (auto& k : spec.cardinalities) k = 2 + rng.below(4);
    const std::size_t stubs = std::accumulate(spec.cardinalities.begin(), spec.cardinalities.end(), std::size_t{0});
    if (stubs < n) throw Error("preset has fewer stubs than vertices");
    spec.degrees.assign(n, 1);
    for (std::size_t s = n; s < stubs; ++s) ++spec.degrees[rng.below(n)];
    return spec;
}

HsbmSpec desk_hsbm_spec(std::size_t n, std::size_t m, std::uint64_t seed) {
    constexpr std::size_t kBlocks = 4;
    if (n < kBlocks || m < kBlocks) throw Error("preset needs at least four vertices and four hyperedges");
    HsbmSpec spec;
    spec.seed = seed;
    for (std::size_t b = 0; b < kBlocks; ++b) {
        spec.node_communities.push_back(n / kBlocks + (b < n % kBlocks ? 1 : 0));
        spec.edge_communities.push_back(m / kBlocks + (b < m % kBlocks ? 1 : 0));
    }
    // Expected cardinality: in-block share plus three off-block shares.
    const double block = static_cast<double>(n) / kBlocks;
    const double inside = 2.8 / block, outside = 0.7 / (3.0 * block);
    spec.affinity.assign(kBlocks, std::vector<double>(kBlocks, outside));
    for (std::size_t b = 0; b < kBlocks; ++b) spec.affinity[b][b] = inside;
    return spec;
}

}  // namespace orc
