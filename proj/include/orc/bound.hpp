#pragma once

#include <orc/measure.hpp>
#include <orc/metric_space.hpp>

#include <string_view>

namespace orc {

// Which points feed the min/max overlap sums.
enum class OverlapMode {
    // Common support excluding both endpoints: z with nu_x(z) > 0, nu_y(z) > 0,
    // z not in {x, y}. This is the sum the transport argument is built on.
    common_support,
    // Every point of the union of supports, endpoints included, as in the
    // one-loop pseudocode formulation. Kept for side-by-side comparison only.
    all_points,
};

std::string_view to_string(OverlapMode mode);

struct BoundOptions {
    OverlapMode overlap = OverlapMode::common_support;
};

// Which of the three regimes of the transport plan applies.
enum class BoundCase {
    fill_all,         // 0 <= A <= B: cost-1, cost-2 and cost-3 moves
    fill_common,      // A < 0 <= B: no cost-3 moves
    cross_only,       // A <= B < 0: only cross moves
};

struct BoundBreakdown {
    double alpha = 0.0;        // laziness removed from both measures
    double mu_x_of_y = 0.0;    // nu_x(y)
    double mu_y_of_x = 0.0;    // nu_y(x)
    double overlap_min = 0.0;  // sum of nu_x(z) ^ nu_y(z)
    double overlap_max = 0.0;  // sum of nu_x(z) v nu_y(z)
    double term_A = 0.0;       // 1 - nu_x(y) - nu_y(x) - overlap_max
    double term_B = 0.0;       // 1 - nu_x(y) - nu_y(x) - overlap_min
    double w1_upper = 0.0;
    double kappa_lower = 0.0;

    BoundCase proof_case() const noexcept;
};

// Closed-form upper bound on W1(mu_x, mu_y) for points at distance one.
// Extracts alpha = min(mu_x(x), mu_y(y)) as shared laziness, then runs one
// merged pass over the two sorted supports. Linear in |supp mu_x| + |supp mu_y|.
//
// Throws NotAdjacentError when d(x, y) != 1 and MeasureError when a measure is
// not based at its endpoint.
BoundBreakdown w1_upper_bound(PointId x, PointId y, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                              const IntegerMetricSpace& space, const BoundOptions& options = {});

// 1 - w1_upper_bound(...).w1_upper; d(x, y) = 1 so no division is needed.
double kappa_lower_bound(PointId x, PointId y, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                         const IntegerMetricSpace& space, const BoundOptions& options = {});

// 1 + 2 (1 - mu_x(y) - mu_y(x))_+ with x, y the measures' base points. An
// independent, generally weaker bound obtained from the dual side.
double w1_simple_bound(const LocalMeasure& mu_x, const LocalMeasure& mu_y);

// (1 - alpha) w1 + alpha: the transport cost after adding laziness alpha.
double lazy_w1_bound(double w1, double alpha);

// (1 - alpha) kappa: the matching curvature lower bound.
double lazy_kappa_bound(double kappa, double alpha);

}  // namespace orc
