#include <orc/bound.hpp>

#include <orc/error.hpp>

#include <algorithm>
#include <string>

namespace orc {

namespace {

constexpr double kResidualEpsilon = 1e-15;

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

void require_open_unit(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("laziness must lie in (0, 1), got " + std::to_string(alpha));
    }
}

}  // namespace

std::string_view to_string(OverlapMode mode) {
    return mode == OverlapMode::common_support ? "common_support" : "all_points";
}

BoundCase BoundBreakdown::proof_case() const noexcept {
    if (term_A >= 0.0) return BoundCase::fill_all;
    if (term_B >= 0.0) return BoundCase::fill_common;
    return BoundCase::cross_only;
}

BoundBreakdown w1_upper_bound(PointId x, PointId y, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                              const IntegerMetricSpace& space, const BoundOptions& options) {
    if (mu_x.base() != x || mu_y.base() != y) {
        throw MeasureError("measure base points do not match the requested pair");
    }
    if (!space.adjacent(x, y)) {
        throw NotAdjacentError("bound requires d(x, y) = 1; points " + std::to_string(x) + " and " +
                               std::to_string(y) + " are not adjacent");
    }

    BoundBreakdown out;
    out.alpha = std::min(mu_x.base_mass(), mu_y.base_mass());
    const double scale = 1.0 / (1.0 - out.alpha);

    // nu = (mu - alpha delta_base) / (1 - alpha), evaluated atom by atom.
    auto nu = [&](const Atom& a, PointId base) {
        if (a.point != base) return a.mass * scale;
        const double rest = a.mass - out.alpha;
        return rest > kResidualEpsilon ? rest * scale : 0.0;
    };

    const bool literal = options.overlap == OverlapMode::all_points;
    const auto ax = mu_x.atoms();
    const auto ay = mu_y.atoms();
    std::size_t i = 0, j = 0;
    while (i < ax.size() || j < ay.size()) {
        PointId p;
        double a = 0.0, b = 0.0;
        if (j == ay.size() || (i < ax.size() && ax[i].point < ay[j].point)) {
            p = ax[i].point;
            a = nu(ax[i++], x);
        } else if (i == ax.size() || ay[j].point < ax[i].point) {
            p = ay[j].point;
            b = nu(ay[j++], y);
        } else {
            p = ax[i].point;
            a = nu(ax[i++], x);
            b = nu(ay[j++], y);
        }

        if (p == y) out.mu_x_of_y = a;
        if (p == x) out.mu_y_of_x = b;
        if (literal) {
            out.overlap_min += std::min(a, b);
            out.overlap_max += std::max(a, b);
        } else if (p != x && p != y && a > 0.0 && b > 0.0) {
            out.overlap_min += std::min(a, b);
            out.overlap_max += std::max(a, b);
        }
    }

    const double cross = 1.0 - out.mu_x_of_y - out.mu_y_of_x;
    out.term_A = cross - out.overlap_max;
    out.term_B = cross - out.overlap_min;
    const double inner = 1.0 + positive_part(out.term_A) + positive_part(out.term_B) - out.overlap_min;
    out.w1_upper = out.alpha + (1.0 - out.alpha) * inner;
    out.kappa_lower = 1.0 - out.w1_upper;
    return out;
}

double kappa_lower_bound(PointId x, PointId y, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                         const IntegerMetricSpace& space, const BoundOptions& options) {
    return 1.0 - w1_upper_bound(x, y, mu_x, mu_y, space, options).w1_upper;
}

double w1_simple_bound(const LocalMeasure& mu_x, const LocalMeasure& mu_y) {
    return 1.0 + 2.0 * positive_part(1.0 - mu_x.mass_at(mu_y.base()) - mu_y.mass_at(mu_x.base()));
}

double lazy_w1_bound(double w1, double alpha) {
    require_open_unit(alpha);
    if (w1 < 0.0) throw Error("transport cost must be non-negative");
    return (1.0 - alpha) * w1 + alpha;
}

double lazy_kappa_bound(double kappa, double alpha) {
    require_open_unit(alpha);
    return (1.0 - alpha) * kappa;
}

}  // namespace orc
