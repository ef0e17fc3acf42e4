#include <orc/measure.hpp>

#include <orc/error.hpp>

#include <algorithm>
#include <cmath>

namespace orc {

namespace {

// Masses at or below this after delazification are treated as removed.
constexpr double kResidualEpsilon = 1e-15;

std::vector<Atom> merge_sorted(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!out.empty() && out.back().point == a.point) {
            out.back().mass += a.mass;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

void require_alpha(double alpha, bool allow_zero) {
    const bool ok = allow_zero ? (alpha >= 0.0 && alpha < 1.0) : (alpha > 0.0 && alpha < 1.0);
    if (!ok) {
        throw MeasureError(std::string("laziness must lie in ") + (allow_zero ? "[0, 1)" : "(0, 1)") +
                           ", got " + std::to_string(alpha));
    }
}

}  // namespace

// -----------------------------------------------------------------------------
// LocalMeasure
// -----------------------------------------------------------------------------

LocalMeasure::LocalMeasure(PointId base, std::vector<Atom> atoms) : base_(base) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
    atoms_.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0 && atoms[i].point == atoms[i - 1].point) {
            throw MeasureError("measure lists point " + std::to_string(atoms[i].point) + " twice");
        }
        if (!(atoms[i].mass >= 0.0) || !std::isfinite(atoms[i].mass)) {
            throw MeasureError("measure mass must be a finite non-negative number");
        }
        if (atoms[i].mass > 0.0) atoms_.push_back(atoms[i]);
    }
    if (std::abs(total() - 1.0) > kSumTolerance) {
        throw MeasureError("measure masses sum to " + std::to_string(total()) + ", expected 1");
    }
}

double LocalMeasure::mass_at(PointId p) const {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                                     [](const Atom& a, PointId q) { return a.point < q; });
    return (it != atoms_.end() && it->point == p) ? it->mass : 0.0;
}

double LocalMeasure::total() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.mass;
    return s;
}

void check_support(const LocalMeasure& mu, const IntegerMetricSpace& space) {
    for (const Atom& a : mu.atoms()) {
        if (a.point == mu.base()) continue;
        if (!space.adjacent(mu.base(), a.point)) {
            throw MeasureError("support point " + std::to_string(a.point) + " is not adjacent to base " +
                               std::to_string(mu.base()));
        }
    }
}

// -----------------------------------------------------------------------------
// Weighted graph walk
// -----------------------------------------------------------------------------

std::uint64_t PairWeights::key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t{u} << 32) | v;
}

void PairWeights::add(VertexId u, VertexId v, double w) {
    if (u == v) return;
    weights_[key(u, v)] += w;
}

double PairWeights::get(VertexId u, VertexId v) const {
    const auto it = weights_.find(key(u, v));
    return it == weights_.end() ? 0.0 : it->second;
}

PairWeights pair_weights_from(const Hypergraph& h) {
    PairWeights w;
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        const auto members = h.edge(e);
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) w.add(members[i], members[j], h.weight(e));
        }
    }
    return w;
}

LocalMeasure graph_measure(const AdjacencyIndex& adj, const PairWeights* weights, VertexId x) {
    const auto nb = adj.neighbors(x);
    if (nb.empty()) throw MeasureError("vertex " + std::to_string(x) + " is isolated; no measure definable");
    std::vector<Atom> atoms;
    atoms.reserve(nb.size());
    if (weights == nullptr) {
        const double m = 1.0 / static_cast<double>(nb.size());
        for (VertexId y : nb) atoms.push_back({y, m});
        return LocalMeasure(x, std::move(atoms));
    }
    double degree = 0.0;
    for (VertexId y : nb) {
        const double w = weights->get(x, y);
        if (!(w > 0.0)) throw MeasureError("missing or non-positive weight on an edge at vertex " + std::to_string(x));
        degree += w;
        atoms.push_back({y, w});
    }
    for (Atom& a : atoms) a.mass /= degree;
    return LocalMeasure(x, std::move(atoms));
}

// -----------------------------------------------------------------------------
// Hypergraph walks
// -----------------------------------------------------------------------------

LocalMeasure measure_equal_nodes(const Hypergraph&, const AdjacencyIndex& adj, VertexId x) {
    const auto nb = adj.neighbors(x);
    if (nb.empty()) throw MeasureError("vertex " + std::to_string(x) + " has no neighbours");
    const double m = 1.0 / static_cast<double>(nb.size());
    std::vector<Atom> atoms;
    atoms.reserve(nb.size());
    for (VertexId y : nb) atoms.push_back({y, m});
    return LocalMeasure(x, std::move(atoms));
}

LocalMeasure measure_equal_edges(const Hypergraph& h, const AdjacencyIndex& adj, VertexId x) {
    std::size_t singletons = 0;
    std::vector<Atom> raw;
    for (EdgeId e : adj.incident_edges(x)) {
        const auto members = h.edge(e);
        if (members.size() == 1) {
            ++singletons;
            continue;
        }
        const double share = 1.0 / static_cast<double>(members.size() - 1);
        for (VertexId y : members) {
            if (y != x) raw.push_back({y, share});
        }
    }
    const std::size_t usable = adj.degree(x) - singletons;
    if (usable == 0) throw MeasureError("vertex " + std::to_string(x) + " lies only in singleton hyperedges");
    auto atoms = merge_sorted(std::move(raw));
    for (Atom& a : atoms) a.mass /= static_cast<double>(usable);
    return LocalMeasure(x, std::move(atoms));
}

LocalMeasure measure_weighted_edges(const Hypergraph& h, const AdjacencyIndex& adj, VertexId x) {
    // The (|e|-1) selection weight cancels the 1/(|e|-1) co-member choice, so
    // each hyperedge contributes one unit to every co-member.
    double denominator = 0.0;
    std::vector<Atom> raw;
    for (EdgeId e : adj.incident_edges(x)) {
        const auto members = h.edge(e);
        denominator += static_cast<double>(members.size() - 1);
        for (VertexId y : members) {
            if (y != x) raw.push_back({y, 1.0});
        }
    }
    if (denominator == 0.0) throw MeasureError("vertex " + std::to_string(x) + " has no co-members");
    auto atoms = merge_sorted(std::move(raw));
    for (Atom& a : atoms) a.mass /= denominator;
    return LocalMeasure(x, std::move(atoms));
}

// -----------------------------------------------------------------------------
// Laziness
// -----------------------------------------------------------------------------

LocalMeasure lazify(const LocalMeasure& mu, double alpha) {
    require_alpha(alpha, false);
    std::vector<Atom> atoms;
    atoms.reserve(mu.size() + 1);
    bool base_seen = false;
    for (const Atom& a : mu.atoms()) {
        if (a.point == mu.base()) {
            atoms.push_back({a.point, alpha + (1.0 - alpha) * a.mass});
            base_seen = true;
        } else {
            atoms.push_back({a.point, (1.0 - alpha) * a.mass});
        }
    }
    if (!base_seen) atoms.push_back({mu.base(), alpha});
    return LocalMeasure(mu.base(), std::move(atoms));
}

LocalMeasure delazify(const LocalMeasure& mu, double alpha) {
    require_alpha(alpha, true);
    if (alpha == 0.0) return mu;
    const double base_mass = mu.base_mass();
    if (base_mass < alpha - kResidualEpsilon) {
        throw MeasureError("cannot remove laziness " + std::to_string(alpha) + " from base mass " +
                           std::to_string(base_mass));
    }
    const double scale = 1.0 / (1.0 - alpha);
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    for (const Atom& a : mu.atoms()) {
        if (a.point == mu.base()) {
            const double rest = a.mass - alpha;
            if (rest > kResidualEpsilon) atoms.push_back({a.point, rest * scale});
        } else {
            atoms.push_back({a.point, a.mass * scale});
        }
    }
    return LocalMeasure(mu.base(), std::move(atoms));
}

// -----------------------------------------------------------------------------
// Kinds
// -----------------------------------------------------------------------------

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::equal_nodes: return "en";
        case MeasureKind::equal_edges: return "ee";
        case MeasureKind::weighted_edges: return "we";
        case MeasureKind::graph: return "graph";
    }
    return "?";
}

MeasureKind parse_measure_kind(std::string_view text) {
    if (text == "en") return MeasureKind::equal_nodes;
    if (text == "ee") return MeasureKind::equal_edges;
    if (text == "we") return MeasureKind::weighted_edges;
    if (text == "graph") return MeasureKind::graph;
    throw Error("unknown measure kind '" + std::string(text) + "' (expected en|ee|we|graph)");
}

LocalMeasure make_measure(MeasureKind kind, const Hypergraph& h, const AdjacencyIndex& adj, VertexId x,
                          const PairWeights* weights) {
    switch (kind) {
        case MeasureKind::equal_nodes: return measure_equal_nodes(h, adj, x);
        case MeasureKind::equal_edges: return measure_equal_edges(h, adj, x);
        case MeasureKind::weighted_edges: return measure_weighted_edges(h, adj, x);
        case MeasureKind::graph: return graph_measure(adj, weights, x);
    }
    throw Error("unknown measure kind");
}

}  // namespace orc
