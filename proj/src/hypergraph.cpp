#include <orc/hypergraph.hpp>

#include <orc/error.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace orc {

// -----------------------------------------------------------------------------
// Hypergraph
// -----------------------------------------------------------------------------

std::size_t Hypergraph::canonicalize(std::vector<VertexId>& members) {
    std::sort(members.begin(), members.end());
    const auto last = std::unique(members.begin(), members.end());
    const auto removed = static_cast<std::size_t>(members.end() - last);
    members.erase(last, members.end());
    return removed;
}

EdgeId Hypergraph::add_edge(std::vector<VertexId> members, double weight) {
    if (members.empty()) {
        throw Error("hyperedge must contain at least one vertex");
    }
    if (!(weight > 0.0)) {
        throw Error("hyperedge weight must be positive");
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        throw Error("hyperedge contains a repeated vertex id");
    }
    if (members.back() >= num_vertices_) {
        throw Error("vertex id " + std::to_string(members.back()) + " out of range (n=" +
                    std::to_string(num_vertices_) + ")");
    }
    if (edges_.size() >= std::numeric_limits<EdgeId>::max()) {
        throw Error("too many hyperedges");
    }
    edges_.push_back(std::move(members));
    weights_.push_back(weight);
    return static_cast<EdgeId>(edges_.size() - 1);
}

bool Hypergraph::is_weighted() const noexcept {
    return std::any_of(weights_.begin(), weights_.end(), [](double w) { return w != 1.0; });
}

void Hypergraph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != num_vertices_) {
        throw Error("label table size does not match vertex count");
    }
    labels_ = std::move(labels);
}

// -----------------------------------------------------------------------------
// AdjacencyIndex
// -----------------------------------------------------------------------------

AdjacencyIndex::AdjacencyIndex(const Hypergraph& h) {
    const std::size_t n = h.num_vertices();
    degree_.assign(n, 0);
    for (const auto& e : h.edges()) {
        for (VertexId v : e) ++degree_[v];
    }

    incidence_offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) incidence_offsets_[v + 1] = incidence_offsets_[v] + degree_[v];
    incidence_list_.resize(incidence_offsets_[n]);
    {
        std::vector<std::size_t> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
        for (EdgeId e = 0; e < h.num_edges(); ++e) {
            for (VertexId v : h.edge(e)) incidence_list_[cursor[v]++] = e;
        }
    }

    // Neighbour sets: union of co-members over incident edges, sorted.
    neighbor_offsets_.assign(n + 1, 0);
    std::vector<VertexId> scratch;
    std::vector<std::vector<VertexId>> per_vertex(n);
    for (VertexId v = 0; v < n; ++v) {
        scratch.clear();
        for (std::size_t k = incidence_offsets_[v]; k < incidence_offsets_[v + 1]; ++k) {
            for (VertexId u : h.edge(incidence_list_[k])) {
                if (u != v) scratch.push_back(u);
            }
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        per_vertex[v] = scratch;
        neighbor_offsets_[v + 1] = neighbor_offsets_[v] + scratch.size();
    }
    neighbor_list_.reserve(neighbor_offsets_[n]);
    for (auto& nb : per_vertex) neighbor_list_.insert(neighbor_list_.end(), nb.begin(), nb.end());
}

std::span<const VertexId> AdjacencyIndex::neighbors(VertexId v) const {
    const auto begin = neighbor_offsets_.at(v);
    return {neighbor_list_.data() + begin, neighbor_offsets_[v + 1] - begin};
}

std::span<const EdgeId> AdjacencyIndex::incident_edges(VertexId v) const {
    const auto begin = incidence_offsets_.at(v);
    return {incidence_list_.data() + begin, incidence_offsets_[v + 1] - begin};
}

bool AdjacencyIndex::adjacent(VertexId u, VertexId v) const {
    if (u >= num_vertices() || v >= num_vertices()) return false;
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

AdjacencyIndex build_adjacency(const Hypergraph& h) { return AdjacencyIndex(h); }

// -----------------------------------------------------------------------------
// Distances
// -----------------------------------------------------------------------------

std::vector<Distance> bfs_distances(const AdjacencyIndex& adj, VertexId s,
                                    std::span<const VertexId> targets,
                                    std::optional<std::uint32_t> max_depth) {
    const std::size_t n = adj.num_vertices();
    if (s >= n) throw Error("vertex id out of range");
    std::vector<Distance> out(targets.size());

    std::unordered_map<VertexId, std::vector<std::size_t>> pending;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= n) throw Error("vertex id out of range");
        pending[targets[i]].push_back(i);
    }
    auto settle = [&](VertexId v, std::uint32_t d) {
        auto it = pending.find(v);
        if (it == pending.end()) return;
        for (std::size_t i : it->second) out[i] = d;
        pending.erase(it);
    };

    settle(s, 0);
    if (pending.empty()) return out;

    constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(n, kUnseen);
    std::vector<VertexId> frontier{s}, next;
    dist[s] = 0;
    std::uint32_t depth = 0;
    while (!frontier.empty() && !pending.empty()) {
        if (max_depth && depth >= *max_depth) break;
        ++depth;
        next.clear();
        for (VertexId v : frontier) {
            for (VertexId u : adj.neighbors(v)) {
                if (dist[u] != kUnseen) continue;
                dist[u] = depth;
                settle(u, depth);
                next.push_back(u);
            }
        }
        frontier.swap(next);
    }
    return out;
}

Distance graph_distance(const AdjacencyIndex& adj, VertexId s, VertexId t) {
    const VertexId target[] = {t};
    return bfs_distances(adj, s, target).front();
}

std::vector<std::uint32_t> connected_components(const AdjacencyIndex& adj) {
    constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = adj.num_vertices();
    std::vector<std::uint32_t> label(n, kNone);
    std::vector<VertexId> stack;
    std::uint32_t next = 0;
    for (VertexId root = 0; root < n; ++root) {
        if (label[root] != kNone) continue;
        label[root] = next;
        stack.push_back(root);
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            for (VertexId u : adj.neighbors(v)) {
                if (label[u] == kNone) {
                    label[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    return label;
}

// -----------------------------------------------------------------------------
// Hyperedge-list text format
// -----------------------------------------------------------------------------

namespace {

bool skippable(const std::string& line) {
    const auto first = line.find_first_not_of(" \t\r\f\v");
    return first == std::string::npos || line[first] == '#';
}

template <typename TokenFn>
void for_each_edge_line(std::istream& in, TokenFn&& on_line) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream tokens(line);
        std::vector<std::string> words;
        for (std::string w; tokens >> w;) words.push_back(std::move(w));
        on_line(line_no, words);
    }
}

ParsedHypergraph assemble(std::vector<std::vector<VertexId>> rows, std::size_t n,
                          std::size_t duplicates) {
    ParsedHypergraph out;
    out.graph = Hypergraph(n);
    out.duplicate_count = duplicates;
    for (auto& r : rows) out.graph.add_edge(std::move(r));
    return out;
}

}  // namespace

ParsedHypergraph parse_hyperedge_list(std::istream& in) {
    std::vector<std::vector<VertexId>> rows;
    std::size_t duplicates = 0;
    std::size_t n = 0;
    for_each_edge_line(in, [&](std::size_t line_no, const std::vector<std::string>& words) {
        std::vector<VertexId> members;
        members.reserve(words.size());
        for (const auto& w : words) {
            VertexId id{};
            const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), id);
            if (ec != std::errc{} || ptr != w.data() + w.size()) {
                throw ParseError(line_no, "malformed vertex id '" + w + "'");
            }
            if (id == std::numeric_limits<VertexId>::max()) {
                throw ParseError(line_no, "vertex id too large");
            }
            members.push_back(id);
        }
        if (members.empty()) throw ParseError(line_no, "hyperedge with no vertices");
        duplicates += Hypergraph::canonicalize(members);
        n = std::max<std::size_t>(n, members.back() + 1);
        rows.push_back(std::move(members));
    });
    return assemble(std::move(rows), n, duplicates);
}

ParsedHypergraph parse_labeled_hyperedge_list(std::istream& in) {
    std::vector<std::vector<VertexId>> rows;
    std::vector<std::string> labels;
    std::unordered_map<std::string, VertexId> ids;
    std::size_t duplicates = 0;
    for_each_edge_line(in, [&](std::size_t line_no, const std::vector<std::string>& words) {
        std::vector<VertexId> members;
        for (const auto& w : words) {
            auto [it, inserted] = ids.try_emplace(w, static_cast<VertexId>(labels.size()));
            if (inserted) labels.push_back(w);
            members.push_back(it->second);
        }
        if (members.empty()) throw ParseError(line_no, "hyperedge with no vertices");
        duplicates += Hypergraph::canonicalize(members);
        rows.push_back(std::move(members));
    });
    auto out = assemble(std::move(rows), labels.size(), duplicates);
    out.graph.set_labels(std::move(labels));
    return out;
}

ParsedHypergraph load_hyperedge_list(const std::string& path, bool labeled) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return labeled ? parse_labeled_hyperedge_list(in) : parse_hyperedge_list(in);
}

void write_hyperedge_list(std::ostream& out, const Hypergraph& h) {
    for (const auto& e : h.edges()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i) out << ' ';
            out << e[i];
        }
        out << '\n';
    }
}

std::string to_hyperedge_list(const Hypergraph& h) {
    std::ostringstream os;
    write_hyperedge_list(os, h);
    return os.str();
}

}  // namespace orc
