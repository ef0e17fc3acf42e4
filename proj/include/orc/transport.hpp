#pragma once

#include <orc/measure.hpp>
#include <orc/metric_space.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace orc {

// Two discrete measures on a shared point list plus the integer distances
// between every pair of listed points. Both mass vectors are indexed like
// `points` and hold zero where a measure has no atom.
struct TransportProblem {
    std::vector<PointId> points;
    std::vector<double> source;
    std::vector<double> sink;
    std::vector<std::uint32_t> cost;  // row-major, points.size() squared

    std::size_t size() const noexcept { return points.size(); }
    std::uint32_t distance(std::size_t i, std::size_t j) const { return cost[i * points.size() + j]; }
};

// Builds the problem over the union of both supports. Distances are obtained
// by one batched query per point. Throws TransportError when two points are in
// different components.
TransportProblem make_transport_problem(const LocalMeasure& mu, const LocalMeasure& nu,
                                        const IntegerMetricSpace& space);

struct Flow {
    std::size_t from;  // index into TransportProblem::points
    std::size_t to;
    double mass;
};

struct TransportPlan {
    std::vector<Flow> flows;
    double objective = 0.0;
    // True when masses were recognised as rationals over a common denominator
    // and the flow was solved in integer arithmetic.
    bool integral = false;
};

struct ExactOptions {
    std::size_t max_support = 512;     // per side
    std::size_t integral_support = 32; // per side, for the integer path
};

// Optimal plan by successive shortest paths on the bipartite transport network.
TransportPlan exact_w1(const TransportProblem& p, const ExactOptions& options = {});

// Kantorovich potential recovered from an optimal plan: a 1-Lipschitz function
// on p.points whose dual objective equals plan.objective (up to rounding).
std::vector<double> optimal_potential(const TransportProblem& p, const TransportPlan& plan);

// Certified lower bound sum f dsource - sum f dsink after checking
// |f(u) - f(v)| <= d(u, v) on every pair of points. Throws TransportError
// naming the first violating pair.
double dual_witness_lower_bound(const TransportProblem& p, const std::function<double(PointId)>& f);

struct SinkhornOptions {
    // Entropic regularisation applied to costs divided by their maximum.
    double reg = 0.1;
    int max_iters = 500;
    // Stop once the relative change of both scaling vectors drops below this.
    double threshold = 1e-2;
};

struct SinkhornResult {
    double cost = 0.0;  // sum of plan * cost (un-normalised costs)
    int iterations = 0;
    bool converged = false;
};

// Entropic transport on the Gibbs kernel. Hitting max_iters is not an error.
// Throws TransportError when the kernel underflows to an all-zero row/column.
SinkhornResult sinkhorn_w1(const TransportProblem& p, const SinkhornOptions& options = {});

}  // namespace orc
