#include <orc/bench.hpp>

#include <orc/error.hpp>
#include <orc/generators.hpp>
#include <orc/parallel.hpp>
#include <orc/report.hpp>

#include <fmt/format.h>
#include <gsl/gsl_fit.h>
#include <gsl/gsl_statistics_double.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>

namespace orc {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Undefined correlations: identical series still correlate perfectly.
std::optional<double> degenerate_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (!a.empty() && a == b) return 1.0;
    return std::nullopt;
}

}  // namespace

Dataset desk_hcm_dataset(std::uint64_t seed) {
    return {fmt::format("syn_hcm_n200_m300_s{}", seed), generate_hcm(desk_hcm_spec(200, 300, seed)).graph};
}

Dataset desk_hsbm_dataset(std::uint64_t seed) {
    return {fmt::format("syn_hsbm_n200_m300_s{}", seed), generate_hsbm(desk_hsbm_spec(200, 300, seed)).graph};
}

std::vector<std::pair<VertexId, VertexId>> aggregation_pairs(const Hypergraph& h) {
    std::vector<std::pair<VertexId, VertexId>> out;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
        const auto members = h.edge(e);
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                if (seen.emplace(members[a], members[b]).second) out.emplace_back(members[a], members[b]);
            }
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Timing
// -----------------------------------------------------------------------------

BenchResult run_timing(const Dataset& dataset, const TimingConfig& config) {
    const AdjacencyIndex adj(dataset.graph);
    CurvatureConfig cc;
    cc.measure = config.measure;
    cc.agg = config.agg;
    const PairwiseW1 w1(dataset.graph, adj, cc);
    const auto& space = w1.space();
    const auto pairs = aggregation_pairs(dataset.graph);

    BenchResult r;
    r.dataset = dataset.id;
    r.config = config;
    r.threads = std::max<std::size_t>(1, config.threads);
    r.build_flags = build_flags();
    r.pairs.resize(pairs.size());

    auto run_bound = [&](std::size_t i) {
        const auto [u, v] = pairs[i];
        return w1_upper_bound(u, v, w1.measure(u), w1.measure(v), space).w1_upper;
    };

    for (int pass = 0; pass < config.warmup_passes; ++pass) {
        parallel_for(pairs.size(), r.threads, [&](std::size_t i) {
            const auto [u, v] = pairs[i];
            run_bound(i);
            try {
                sinkhorn_w1(make_transport_problem(w1.measure(u), w1.measure(v), space), config.sinkhorn);
            } catch (const TransportError&) {
            }
        });
    }

    parallel_for(pairs.size(), r.threads, [&](std::size_t i) {
        PairTiming& t = r.pairs[i];
        std::tie(t.u, t.v) = pairs[i];

        auto t0 = Clock::now();
        t.bound_w1 = run_bound(i);
        t.bound_ns = elapsed_ns(t0);

        t0 = Clock::now();
        const auto problem = make_transport_problem(w1.measure(t.u), w1.measure(t.v), space);
        t.problem_ns = elapsed_ns(t0);
        try {
            t0 = Clock::now();
            t.sinkhorn_w1 = sinkhorn_w1(problem, config.sinkhorn).cost;
            t.sinkhorn_ns = elapsed_ns(t0);
        } catch (const TransportError& e) {
            t.excluded = true;
            t.failure = e.what();
        }
    });

    for (const auto& t : r.pairs) {
        if (t.excluded) {
            ++r.sinkhorn_failures;
            continue;
        }
        ++r.timed_pairs;
        r.bound_total_ns += t.bound_ns;
        r.sinkhorn_total_ns += t.sinkhorn_ns;
        r.problem_total_ns += t.problem_ns;
    }
    if (r.timed_pairs > 0) {
        const double n = static_cast<double>(r.timed_pairs);
        r.bound_per_pair_ns = static_cast<double>(r.bound_total_ns) / n;
        r.sinkhorn_per_pair_ns = static_cast<double>(r.sinkhorn_total_ns) / n;
        if (r.bound_total_ns > 0) {
            r.speedup = static_cast<double>(r.sinkhorn_total_ns) / static_cast<double>(r.bound_total_ns);
        }
    }
    return r;
}

ScalingResult measure_bound_scaling(const ScalingConfig& config) {
    ScalingResult out;
    std::vector<double> log_size, log_time;
    for (std::size_t k : config.degrees) {
        if (k < 2) throw Error("scaling degrees must be at least 2");
        // x = 0 and y = 1 are adjacent; each has k further neighbours, half shared.
        const std::size_t shared = k / 2, own = k - shared;
        Hypergraph h(2 + shared + 2 * own);
        h.add_edge({0, 1});
        VertexId next = 2;
        for (std::size_t s = 0; s < shared; ++s, ++next) h.add_edge({0, 1, next});
        for (std::size_t s = 0; s < own; ++s, ++next) h.add_edge({0, next});
        for (std::size_t s = 0; s < own; ++s, ++next) h.add_edge({1, next});
        const AdjacencyIndex adj(h);
        const GraphSpace space(adj);
        const auto mx = measure_equal_nodes(h, adj, 0);
        const auto my = measure_equal_nodes(h, adj, 1);

        volatile double sink = 0.0;
        std::size_t reps = 1;
        for (;;) {
            const auto t0 = Clock::now();
            for (std::size_t r = 0; r < reps; ++r) sink = sink + w1_upper_bound(0, 1, mx, my, space).w1_upper;
            if (elapsed_ns(t0) >= config.min_trial_ns) break;
            reps *= 2;
        }
        double best = std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < config.trials; ++trial) {
            const auto t0 = Clock::now();
            for (std::size_t r = 0; r < reps; ++r) sink = sink + w1_upper_bound(0, 1, mx, my, space).w1_upper;
            best = std::min(best, static_cast<double>(elapsed_ns(t0)) / static_cast<double>(reps));
        }
        out.points.push_back({mx.size() + my.size(), best});
        log_size.push_back(std::log(static_cast<double>(mx.size() + my.size())));
        log_time.push_back(std::log(best));
    }
    if (out.points.size() >= 2) {
        double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
        gsl_fit_linear(log_size.data(), 1, log_time.data(), 1, log_size.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
        out.intercept = c0;
        out.slope = c1;
    }
    return out;
}

// -----------------------------------------------------------------------------
// Agreement
// -----------------------------------------------------------------------------

std::optional<double> pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("correlation needs series of equal length");
    if (a.size() < 2 || constant(a) || constant(b)) return degenerate_correlation(a, b);
    return gsl_stats_correlation(a.data(), 1, b.data(), 1, a.size());
}

std::optional<double> spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("correlation needs series of equal length");
    if (a.size() < 2 || constant(a) || constant(b)) return degenerate_correlation(a, b);
    std::unique_ptr<double[]> work(new double[2 * a.size()]);
    std::vector<double> ca = a, cb = b;  // gsl sorts in place
    return gsl_stats_spearman(ca.data(), 1, cb.data(), 1, a.size(), work.get());
}

Histogram shared_histogram(const std::vector<double>& a, const std::vector<double>& b, std::size_t bins) {
    if (bins == 0) throw Error("histogram needs at least one bin");
    Histogram h;
    h.bound_counts.assign(bins, 0);
    h.baseline_counts.assign(bins, 0);
    double lo = 0.0, hi = 1.0;
    if (!a.empty() || !b.empty()) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (const auto* v : {&a, &b}) {
            for (double x : *v) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
    auto bin_of = [&](double x) {
        const auto i = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
        return std::min(i, bins - 1);
    };
    for (double x : a) ++h.bound_counts[bin_of(x)];
    for (double x : b) ++h.baseline_counts[bin_of(x)];
    return h;
}

AgreementResult run_agreement(const Dataset& dataset, const AgreementConfig& config) {
    CurvatureConfig cc;
    cc.measure = config.measure;
    cc.agg = config.agg;
    cc.exact = config.exact;
    cc.sinkhorn = config.sinkhorn;
    cc.threads = config.threads;
    cc.estimator = EstimatorKind::bound;
    const auto bound = compute_curvature(dataset.graph, cc);
    cc.estimator = config.baseline;
    const auto baseline = compute_curvature(dataset.graph, cc);

    AgreementResult r;
    r.dataset = dataset.id;
    r.config = config;
    std::vector<double> xs, ys;
    for (std::size_t e = 0; e < bound.edges.size(); ++e) {
        const auto& b = bound.edges[e];
        const auto& x = baseline.edges[e];
        if (b.curvature && x.curvature) {
            r.samples.push_back({b.id, *b.curvature, *x.curvature});
            xs.push_back(*b.curvature);
            ys.push_back(*x.curvature);
            if (*b.curvature > *x.curvature + 1e-9) ++r.soundness_violations;
        } else {
            r.skipped.emplace_back(b.id, !b.skip_reason.empty() ? b.skip_reason : x.skip_reason);
        }
    }
    r.pearson = pearson_correlation(xs, ys);
    r.spearman = spearman_correlation(xs, ys);
    r.bound_mean = mean(xs);
    r.baseline_mean = mean(ys);
    r.mean_shift = r.baseline_mean - r.bound_mean;
    if (xs.size() >= 2 && !constant(xs)) {
        double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
        gsl_fit_linear(xs.data(), 1, ys.data(), 1, xs.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
        r.trend_intercept = c0;
        r.trend_slope = c1;
    }
    r.histogram = shared_histogram(xs, ys, config.bins);
    return r;
}

// -----------------------------------------------------------------------------
// Output
// -----------------------------------------------------------------------------

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json sinkhorn_json(const SinkhornOptions& s) {
    return {{"reg", s.reg}, {"max_iters", s.max_iters}, {"threshold", s.threshold},
            {"cost_normalisation", "divide by max cost"}};
}

}  // namespace

nlohmann::json timing_json(const BenchResult& r) {
    return {
        {"schema_version", kSchemaVersion},
        {"kind", "timing"},
        {"dataset", r.dataset},
        {"measure", to_string(r.config.measure)},
        {"agg", to_string(r.config.agg)},
        {"sinkhorn", sinkhorn_json(r.config.sinkhorn)},
        {"warmup_passes", r.config.warmup_passes},
        {"pairs", r.pairs.size()},
        {"timed_pairs", r.timed_pairs},
        {"sinkhorn_failures", r.sinkhorn_failures},
        {"bound_total_ns", r.bound_total_ns},
        {"sinkhorn_total_ns", r.sinkhorn_total_ns},
        {"sinkhorn_problem_build_ns", r.problem_total_ns},
        {"bound_per_pair_ns", r.bound_per_pair_ns},
        {"sinkhorn_per_pair_ns", r.sinkhorn_per_pair_ns},
        {"speedup", optional_json(r.speedup)},
        {"environment", {{"threads", r.threads}, {"build_flags", r.build_flags}, {"clock", "steady_clock"}}},
    };
}

nlohmann::json scaling_json(const ScalingResult& r) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : r.points) points.push_back({{"support", p.support}, {"ns_per_call", p.ns_per_call}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "bound_scaling"},
            {"points", points},
            {"fit", "ordinary least squares on log(ns) vs log(support)"},
            {"slope", r.slope},
            {"intercept", r.intercept}};
}

nlohmann::json agreement_json(const AgreementResult& r) {
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& [e, why] : r.skipped) skipped.push_back({{"edge_id", e}, {"reason", why}});
    return {
        {"schema_version", kSchemaVersion},
        {"kind", "agreement"},
        {"dataset", r.dataset},
        {"measure", to_string(r.config.measure)},
        {"agg", to_string(r.config.agg)},
        {"baseline", to_string(r.config.baseline)},
        {"sinkhorn", sinkhorn_json(r.config.sinkhorn)},
        {"samples", r.samples.size()},
        {"skipped", skipped},
        {"pearson", optional_json(r.pearson)},
        {"spearman", optional_json(r.spearman)},
        {"bound_mean", r.bound_mean},
        {"baseline_mean", r.baseline_mean},
        {"mean_shift", r.mean_shift},
        {"trend", {{"fit", "ordinary least squares"}, {"slope", optional_json(r.trend_slope)},
                   {"intercept", optional_json(r.trend_intercept)}}},
        {"histogram", {{"edges", r.histogram.edges}, {"bound", r.histogram.bound_counts},
                       {"baseline", r.histogram.baseline_counts}}},
        {"soundness_violations", r.soundness_violations},
    };
}

void write_timing_csv(std::ostream& out, const BenchResult& r) {
    out << "u,v,bound_ns,sinkhorn_ns,problem_ns,bound_w1,sinkhorn_w1,excluded,failure\n";
    for (const auto& t : r.pairs) {
        out << t.u << ',' << t.v << ',' << t.bound_ns << ',' << t.sinkhorn_ns << ',' << t.problem_ns << ','
            << format_double(t.bound_w1) << ',' << (t.excluded ? "" : format_double(t.sinkhorn_w1)) << ','
            << (t.excluded ? 1 : 0) << ",\"" << t.failure << "\"\n";
    }
}

void write_agreement_csv(std::ostream& out, const AgreementResult& r) {
    out << "edge_id,bound,baseline\n";
    for (const auto& s : r.samples) out << s.edge << ',' << format_double(s.bound) << ',' << format_double(s.baseline) << '\n';
}

// -----------------------------------------------------------------------------
// SVG
// -----------------------------------------------------------------------------

namespace {

constexpr double kWidth = 480, kHeight = 480, kMargin = 60;

struct Frame {
    double x_lo, x_hi, y_lo, y_hi;
    double sx(double x) const { return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); }
    double sy(double y) const { return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin); }
};

void svg_open(std::ostream& out, std::string_view title) {
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)", kWidth, kHeight)
        << '\n'
        << fmt::format(R"(<rect width="{}" height="{}" fill="white"/>)", kWidth, kHeight) << '\n'
        << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>)",
                       kWidth / 2, title)
        << '\n';
}

void svg_axes(std::ostream& out, const Frame& f, std::string_view x_label, std::string_view y_label) {
    out << fmt::format(R"(<rect x="{0}" y="{0}" width="{1}" height="{2}" fill="none" stroke="black"/>)", kMargin,
                       kWidth - 2 * kMargin, kHeight - 2 * kMargin)
        << '\n';
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x_lo + (f.x_hi - f.x_lo) * i / 4.0;
        const double y = f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
        out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="10" text-anchor="middle">{:.3g}</text>)",
                           f.sx(x), kHeight - kMargin + 14, x)
            << '\n'
            << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="10" text-anchor="end">{:.3g}</text>)",
                           kMargin - 4, f.sy(y) + 3, y)
            << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>)",
                       kWidth / 2, kHeight - 20, x_label)
        << '\n'
        << fmt::format(R"svg(<text x="16" y="{0}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>)svg",
                       kHeight / 2, y_label)
        << '\n';
}

}  // namespace

void write_scatter_svg(std::ostream& out, const AgreementResult& r) {
    double lo = 0.0, hi = 1.0;
    if (!r.samples.empty()) {
        lo = std::numeric_limits<double>::infinity();
        hi = -lo;
        for (const auto& s : r.samples) {
            lo = std::min({lo, s.bound, s.baseline});
            hi = std::max({hi, s.bound, s.baseline});
        }
    }
    const double pad = std::max(0.05 * (hi - lo), 0.05);
    const Frame f{lo - pad, hi + pad, lo - pad, hi + pad};

    svg_open(out, fmt::format("{}: edge curvature, {} vs {}", r.dataset, "bound", to_string(r.config.baseline)));
    svg_axes(out, f, "bound curvature", fmt::format("{} curvature", to_string(r.config.baseline)));
    out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="gray" stroke-dasharray="3,3"/>)",
                       f.sx(f.x_lo), f.sy(f.x_lo), f.sx(f.x_hi), f.sy(f.x_hi))
        << '\n';
    for (const auto& s : r.samples) {
        out << fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="2.5" fill="steelblue" fill-opacity="0.6"/>)", f.sx(s.bound),
                           f.sy(s.baseline))
            << '\n';
    }
    if (r.trend_slope && r.trend_intercept) {
        auto y = [&](double x) { return *r.trend_intercept + *r.trend_slope * x; };
        out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="red"/>)", f.sx(lo), f.sy(y(lo)),
                           f.sx(hi), f.sy(y(hi)))
            << '\n'
            << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="red">OLS trend: y = {:.3f} x + {:.3f}</text>)",
                           kMargin + 6, kMargin + 14, *r.trend_slope, *r.trend_intercept)
            << '\n';
    }
    out << "</svg>\n";
}

void write_histogram_svg(std::ostream& out, const AgreementResult& r) {
    const auto& h = r.histogram;
    std::size_t peak = 1;
    for (std::size_t i = 0; i < h.bound_counts.size(); ++i) peak = std::max({peak, h.bound_counts[i], h.baseline_counts[i]});
    const Frame f{h.edges.front(), h.edges.back(), 0.0, static_cast<double>(peak)};

    svg_open(out, fmt::format("{}: edge curvature histogram", r.dataset));
    svg_axes(out, f, "curvature", "edges");
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
        const double x0 = f.sx(h.edges[i]), x1 = f.sx(h.edges[i + 1]);
        const double w = (x1 - x0) / 2.0;
        out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="steelblue"/>)", x0,
                           f.sy(static_cast<double>(h.bound_counts[i])), w,
                           f.sy(0) - f.sy(static_cast<double>(h.bound_counts[i])))
            << '\n'
            << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="darkorange"/>)", x0 + w,
                           f.sy(static_cast<double>(h.baseline_counts[i])), w,
                           f.sy(0) - f.sy(static_cast<double>(h.baseline_counts[i])))
            << '\n';
    }
    out << fmt::format(R"(<rect x="{}" y="{}" width="10" height="10" fill="steelblue"/>)", kWidth - kMargin - 110, kMargin + 6)
        << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">bound</text>)", kWidth - kMargin - 96, kMargin + 15)
        << fmt::format(R"(<rect x="{}" y="{}" width="10" height="10" fill="darkorange"/>)", kWidth - kMargin - 110, kMargin + 22)
        << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">{}</text>)", kWidth - kMargin - 96,
                       kMargin + 31, to_string(r.config.baseline))
        << "\n</svg>\n";
}

}  // namespace orc
