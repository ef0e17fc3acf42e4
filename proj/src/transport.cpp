#include <orc/transport.hpp>

#include <orc/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace orc {

// -----------------------------------------------------------------------------
// Problem construction
// -----------------------------------------------------------------------------

TransportProblem make_transport_problem(const LocalMeasure& mu, const LocalMeasure& nu,
                                        const IntegerMetricSpace& space) {
    TransportProblem p;
    for (const Atom& a : mu.atoms()) p.points.push_back(a.point);
    for (const Atom& a : nu.atoms()) p.points.push_back(a.point);
    std::sort(p.points.begin(), p.points.end());
    p.points.erase(std::unique(p.points.begin(), p.points.end()), p.points.end());

    const std::size_t n = p.points.size();
    p.source.assign(n, 0.0);
    p.sink.assign(n, 0.0);
    auto index_of = [&](PointId q) {
        return static_cast<std::size_t>(std::lower_bound(p.points.begin(), p.points.end(), q) - p.points.begin());
    };
    for (const Atom& a : mu.atoms()) p.source[index_of(a.point)] = a.mass;
    for (const Atom& a : nu.atoms()) p.sink[index_of(a.point)] = a.mass;

    p.cost.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = space.distances_from(p.points[i], p.points);
        for (std::size_t j = 0; j < n; ++j) {
            if (!row[j]) {
                throw TransportError("points " + std::to_string(p.points[i]) + " and " + std::to_string(p.points[j]) +
                                     " lie in different components");
            }
            p.cost[i * n + j] = *row[j];
        }
    }
    return p;
}

// -----------------------------------------------------------------------------
// Successive shortest paths
// -----------------------------------------------------------------------------

namespace {

// Dense bipartite transport network solved by successive shortest paths with
// Johnson potentials. Cap is std::int64_t for the integer path and double
// otherwise; `eps` is the smallest residual treated as available capacity.
template <typename Cap>
class DenseFlow {
public:
    DenseFlow(std::vector<Cap> supply, std::vector<Cap> demand, std::vector<std::int64_t> cost, Cap eps)
        : ns_(supply.size()),
          nt_(demand.size()),
          supply_(std::move(supply)),
          demand_(std::move(demand)),
          cost_(std::move(cost)),
          flow_(ns_ * nt_, Cap{0}),
          eps_(eps) {}

    void solve() {
        const std::size_t V = ns_ + nt_ + 2;
        const std::size_t S = ns_ + nt_, T = S + 1;
        potential_.assign(V, 0.0);
        std::vector<double> dist(V);
        std::vector<std::size_t> pred(V);
        std::vector<char> done(V);
        constexpr double kInf = std::numeric_limits<double>::infinity();
        const std::size_t max_rounds = 4 * V * V + 64;

        for (std::size_t round = 0; any_supply(); ++round) {
            if (round > max_rounds) throw TransportError("min-cost flow did not terminate");
            std::fill(dist.begin(), dist.end(), kInf);
            std::fill(done.begin(), done.end(), 0);
            dist[S] = 0.0;
            for (;;) {
                std::size_t u = V;
                for (std::size_t v = 0; v < V; ++v) {
                    if (!done[v] && dist[v] < kInf && (u == V || dist[v] < dist[u])) u = v;
                }
                if (u == V) break;
                done[u] = 1;
                auto relax = [&](std::size_t v, double c) {
                    const double rc = std::max(0.0, c + potential_[u] - potential_[v]);
                    if (dist[u] + rc < dist[v]) {
                        dist[v] = dist[u] + rc;
                        pred[v] = u;
                    }
                };
                if (u == S) {
                    for (std::size_t i = 0; i < ns_; ++i) {
                        if (supply_[i] > eps_) relax(i, 0.0);
                    }
                } else if (u < ns_) {
                    for (std::size_t j = 0; j < nt_; ++j) relax(ns_ + j, static_cast<double>(cost_[u * nt_ + j]));
                } else if (u < ns_ + nt_) {
                    const std::size_t j = u - ns_;
                    for (std::size_t i = 0; i < ns_; ++i) {
                        if (flow_[i * nt_ + j] > eps_) relax(i, -static_cast<double>(cost_[i * nt_ + j]));
                    }
                    if (demand_[j] > eps_) relax(T, 0.0);
                }
            }
            if (dist[T] == kInf) throw TransportError("transport network has no augmenting path");
            for (std::size_t v = 0; v < V; ++v) potential_[v] += std::min(dist[v], dist[T]);

            // Bottleneck along T <- sink <- source <- ... <- source <- S.
            Cap push = demand_[pred[T] - ns_];
            for (std::size_t v = pred[T]; v != S;) {
                const std::size_t u = pred[v];
                if (u == S) {
                    push = std::min(push, supply_[v]);
                } else if (u >= ns_) {
                    push = std::min(push, flow_[v * nt_ + (u - ns_)]);
                }
                v = u;
            }
            demand_[pred[T] - ns_] -= push;
            for (std::size_t v = pred[T]; v != S;) {
                const std::size_t u = pred[v];
                if (u == S) {
                    supply_[v] -= push;
                } else if (u < ns_) {
                    flow_[u * nt_ + (v - ns_)] += push;
                } else {
                    flow_[v * nt_ + (u - ns_)] -= push;
                }
                v = u;
            }
        }
    }

    Cap flow(std::size_t i, std::size_t j) const { return flow_[i * nt_ + j]; }

private:
    bool any_supply() const {
        return std::any_of(supply_.begin(), supply_.end(), [&](Cap s) { return s > eps_; });
    }

    std::size_t ns_, nt_;
    std::vector<Cap> supply_, demand_;
    std::vector<std::int64_t> cost_;
    std::vector<Cap> flow_;
    std::vector<double> potential_;
    Cap eps_;
};

struct Rational {
    std::int64_t num;
    std::int64_t den;
};

// Best rational approximation with denominator <= max_den by continued
// fractions; std::nullopt unless it matches x to within 1e-13.
std::optional<Rational> rationalize(double x, std::int64_t max_den) {
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_real = std::floor(r);
        if (a_real > 1e15) break;
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= 1e-13) return Rational{h1, k1};
        const double frac = r - a_real;
        if (frac <= 0.0) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

// Common denominator D of all masses, or std::nullopt when none small enough exists.
std::optional<std::int64_t> common_denominator(const std::vector<double>& masses) {
    constexpr std::int64_t kMaxDen = 1'000'000;
    constexpr std::int64_t kMaxCommon = 1'000'000'000'000;
    std::int64_t d = 1;
    for (double m : masses) {
        const auto r = rationalize(m, kMaxDen);
        if (!r) return std::nullopt;
        d = std::lcm(d, r->den);
        if (d > kMaxCommon) return std::nullopt;
    }
    return d;
}

struct Sides {
    std::vector<std::size_t> sources, sinks;  // indices into problem points
};

Sides active_sides(const TransportProblem& p) {
    Sides s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.source[i] > 0.0) s.sources.push_back(i);
        if (p.sink[i] > 0.0) s.sinks.push_back(i);
    }
    return s;
}

std::optional<TransportPlan> solve_integral(const TransportProblem& p, const Sides& s,
                                            const std::vector<std::int64_t>& cost) {
    std::vector<double> masses;
    for (std::size_t i : s.sources) masses.push_back(p.source[i]);
    for (std::size_t j : s.sinks) masses.push_back(p.sink[j]);
    const auto den = common_denominator(masses);
    if (!den) return std::nullopt;

    const auto scale = [&](double m) { return static_cast<std::int64_t>(std::llround(m * static_cast<double>(*den))); };
    std::vector<std::int64_t> supply, demand;
    for (std::size_t i : s.sources) supply.push_back(scale(p.source[i]));
    for (std::size_t j : s.sinks) demand.push_back(scale(p.sink[j]));
    const auto total = [](const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); };
    if (total(supply) != *den || total(demand) != *den) return std::nullopt;

    DenseFlow<std::int64_t> net(std::move(supply), std::move(demand), cost, 0);
    net.solve();

    TransportPlan plan;
    plan.integral = true;
    std::int64_t objective = 0;
    for (std::size_t a = 0; a < s.sources.size(); ++a) {
        for (std::size_t b = 0; b < s.sinks.size(); ++b) {
            const std::int64_t f = net.flow(a, b);
            if (f <= 0) continue;
            objective += f * cost[a * s.sinks.size() + b];
            plan.flows.push_back({s.sources[a], s.sinks[b], static_cast<double>(f) / static_cast<double>(*den)});
        }
    }
    plan.objective = static_cast<double>(objective) / static_cast<double>(*den);
    return plan;
}

}  // namespace

TransportPlan exact_w1(const TransportProblem& p, const ExactOptions& options) {
    const Sides s = active_sides(p);
    if (s.sources.size() > options.max_support || s.sinks.size() > options.max_support) {
        throw TransportError("support exceeds the exact solver cap of " + std::to_string(options.max_support) +
                             " points per side; use the Sinkhorn estimator instead");
    }
    if (s.sources.empty() || s.sinks.empty()) throw TransportError("transport problem has an empty side");

    std::vector<std::int64_t> cost(s.sources.size() * s.sinks.size());
    std::int64_t max_cost = 0;
    for (std::size_t a = 0; a < s.sources.size(); ++a) {
        for (std::size_t b = 0; b < s.sinks.size(); ++b) {
            const std::int64_t c = p.distance(s.sources[a], s.sinks[b]);
            cost[a * s.sinks.size() + b] = c;
            max_cost = std::max(max_cost, c);
        }
    }

    if (s.sources.size() <= options.integral_support && s.sinks.size() <= options.integral_support &&
        max_cost <= 1'000'000) {
        if (auto plan = solve_integral(p, s, cost)) return *plan;
    }

    std::vector<double> supply, demand;
    for (std::size_t i : s.sources) supply.push_back(p.source[i]);
    for (std::size_t j : s.sinks) demand.push_back(p.sink[j]);
    DenseFlow<double> net(std::move(supply), std::move(demand), cost, 1e-14);
    net.solve();

    TransportPlan plan;
    for (std::size_t a = 0; a < s.sources.size(); ++a) {
        for (std::size_t b = 0; b < s.sinks.size(); ++b) {
            const double f = net.flow(a, b);
            if (f <= 0.0) continue;
            plan.objective += f * static_cast<double>(cost[a * s.sinks.size() + b]);
            plan.flows.push_back({s.sources[a], s.sinks[b], f});
        }
    }
    return plan;
}

// -----------------------------------------------------------------------------
// Duality
// -----------------------------------------------------------------------------

std::vector<double> optimal_potential(const TransportProblem& p, const TransportPlan& plan) {
    const Sides s = active_sides(p);
    const std::size_t ns = s.sources.size(), nt = s.sinks.size();
    std::vector<std::size_t> source_slot(p.size(), ns), sink_slot(p.size(), nt);
    for (std::size_t a = 0; a < ns; ++a) source_slot[s.sources[a]] = a;
    for (std::size_t b = 0; b < nt; ++b) sink_slot[s.sinks[b]] = b;

    std::vector<char> carries(ns * nt, 0);
    for (const Flow& f : plan.flows) {
        if (f.mass > 1e-13) carries[source_slot[f.from] * nt + sink_slot[f.to]] = 1;
    }

    // Shortest distances in the residual graph from a virtual root joined to
    // every node at zero cost. Forward arcs source->sink cost c, backward arcs
    // sink->source cost -c where the plan carries flow. An optimal plan leaves
    // no negative cycle, so the labels settle.
    std::vector<double> label(ns + nt, 0.0);
    constexpr double kSlack = 1e-12;
    for (std::size_t pass = 0; pass <= ns + nt; ++pass) {
        bool changed = false;
        for (std::size_t a = 0; a < ns; ++a) {
            for (std::size_t b = 0; b < nt; ++b) {
                const double c = p.distance(s.sources[a], s.sinks[b]);
                if (label[a] + c < label[ns + b] - kSlack) {
                    label[ns + b] = label[a] + c;
                    changed = true;
                }
                if (carries[a * nt + b] && label[ns + b] - c < label[a] - kSlack) {
                    label[a] = label[ns + b] - c;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    // Sink duals b_j = label_j; the potential phi(q) = min_j d(q, y_j) - b_j is
    // 1-Lipschitz and attains the dual objective.
    std::vector<double> phi(p.size(), std::numeric_limits<double>::infinity());
    for (std::size_t q = 0; q < p.size(); ++q) {
        for (std::size_t b = 0; b < nt; ++b) {
            phi[q] = std::min(phi[q], static_cast<double>(p.distance(q, s.sinks[b])) - label[ns + b]);
        }
    }
    return phi;
}

double dual_witness_lower_bound(const TransportProblem& p, const std::function<double(PointId)>& f) {
    std::vector<double> values(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) values[i] = f(p.points[i]);
    constexpr double kLipschitzSlack = 1e-12;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (std::abs(values[i] - values[j]) > p.distance(i, j) + kLipschitzSlack) {
                throw TransportError("witness is not 1-Lipschitz on points " + std::to_string(p.points[i]) + " and " +
                                     std::to_string(p.points[j]));
            }
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += values[i] * (p.source[i] - p.sink[i]);
    return total;
}

// -----------------------------------------------------------------------------
// Sinkhorn
// -----------------------------------------------------------------------------

SinkhornResult sinkhorn_w1(const TransportProblem& p, const SinkhornOptions& options) {
    if (!(options.reg > 0.0)) throw TransportError("Sinkhorn regularisation must be positive");
    if (options.max_iters < 1) throw TransportError("Sinkhorn needs at least one iteration");
    const Sides s = active_sides(p);
    const std::size_t ns = s.sources.size(), nt = s.sinks.size();
    if (ns == 0 || nt == 0) throw TransportError("transport problem has an empty side");

    std::vector<double> cost(ns * nt);
    double max_cost = 0.0;
    for (std::size_t a = 0; a < ns; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
            cost[a * nt + b] = p.distance(s.sources[a], s.sinks[b]);
            max_cost = std::max(max_cost, cost[a * nt + b]);
        }
    }
    SinkhornResult out;
    if (max_cost == 0.0) {
        out.converged = true;
        return out;
    }

    const double inv = 1.0 / (options.reg * max_cost);
    std::vector<double> kernel(ns * nt);
    for (std::size_t k = 0; k < kernel.size(); ++k) kernel[k] = std::exp(-cost[k] * inv);

    std::vector<double> a(ns), b(nt);
    for (std::size_t i = 0; i < ns; ++i) a[i] = p.source[s.sources[i]];
    for (std::size_t j = 0; j < nt; ++j) b[j] = p.sink[s.sinks[j]];

    std::vector<double> u(ns, 1.0), v(nt, 1.0);
    auto relative_change = [](double fresh, double old) {
        const double scale = std::max(std::abs(fresh), std::abs(old));
        return scale > 0.0 ? std::abs(fresh - old) / scale : 0.0;
    };
    for (int it = 1; it <= options.max_iters; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            double kv = 0.0;
            for (std::size_t j = 0; j < nt; ++j) kv += kernel[i * nt + j] * v[j];
            if (!(kv > 0.0)) throw TransportError("Sinkhorn kernel underflow; increase the regularisation");
            const double fresh = a[i] / kv;
            change = std::max(change, relative_change(fresh, u[i]));
            u[i] = fresh;
        }
        for (std::size_t j = 0; j < nt; ++j) {
            double ku = 0.0;
            for (std::size_t i = 0; i < ns; ++i) ku += kernel[i * nt + j] * u[i];
            if (!(ku > 0.0)) throw TransportError("Sinkhorn kernel underflow; increase the regularisation");
            const double fresh = b[j] / ku;
            change = std::max(change, relative_change(fresh, v[j]));
            v[j] = fresh;
        }
        out.iterations = it;
        if (change < options.threshold) {
            out.converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nt; ++j) out.cost += u[i] * kernel[i * nt + j] * v[j] * cost[i * nt + j];
    }
    return out;
}

}  // namespace orc
