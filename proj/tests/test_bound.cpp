#include <doctest.h>

#include "support/oracles.hpp"

#include <orc/bound.hpp>
#include <orc/error.hpp>
#include <orc/measure.hpp>

#include <array>
#include <cmath>

using namespace orc;

namespace {

constexpr double kTol = 1e-12;

Hypergraph hg(std::size_t n, std::initializer_list<std::vector<VertexId>> edges) {
    Hypergraph h(n);
    for (const auto& e : edges) h.add_edge(e);
    return h;
}

// A random measure based at x with masses k / denominator on x and part of N(x).
struct RationalMeasure {
    LocalMeasure measure;
    oracle::RationalAtoms atoms;
};

RationalMeasure random_rational_measure(Rng& rng, VertexId x, std::span<const VertexId> nb, int denominator,
                                        bool lazy) {
    std::vector<PointId> support;
    if (lazy) support.push_back(x);
    for (VertexId v : nb) {
        if (rng.bernoulli(0.7)) support.push_back(v);
    }
    if (support.empty() || (lazy && support.size() == 1)) support.push_back(nb[rng.below(nb.size())]);
    const auto parts = oracle::random_composition(rng, denominator, support.size());
    std::vector<Atom> atoms;
    oracle::RationalAtoms rational;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (parts[i] == 0) continue;
        atoms.push_back({support[i], static_cast<double>(parts[i]) / denominator});
        rational.emplace_back(support[i], parts[i]);
    }
    return {LocalMeasure(x, atoms), rational};
}

// The three closed forms of the bound, selected by the signs of A and B.
double piecewise(const BoundBreakdown& b) {
    const double cross = b.mu_x_of_y + b.mu_y_of_x;
    double inner;
    if (b.term_A >= 0) {
        inner = 3 - 2 * cross - b.overlap_max - 2 * b.overlap_min;
    } else if (b.term_B >= 0) {
        inner = 2 - cross - 2 * b.overlap_min;
    } else {
        inner = 1 - b.overlap_min;
    }
    return b.alpha + (1 - b.alpha) * inner;
}

}  // namespace

TEST_SUITE("bound") {

TEST_CASE("K3 edge") {
    const auto k3 = hg(3, {{0, 1}, {0, 2}, {1, 2}});
    AdjacencyIndex adj(k3);
    GraphSpace space(adj);
    const auto b = w1_upper_bound(0, 1, graph_measure(adj, nullptr, 0), graph_measure(adj, nullptr, 1), space);
    CHECK(b.alpha == 0.0);
    CHECK(b.mu_x_of_y == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.mu_y_of_x == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.overlap_min == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.overlap_max == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.term_A == doctest::Approx(-0.5).epsilon(kTol));
    CHECK(b.term_B == doctest::Approx(-0.5).epsilon(kTol));
    CHECK(b.w1_upper == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.kappa_lower == doctest::Approx(0.5).epsilon(kTol));
    CHECK(b.proof_case() == BoundCase::cross_only);
}

TEST_CASE("P3 edge") {
    const auto p3 = hg(3, {{0, 1}, {1, 2}});
    AdjacencyIndex adj(p3);
    GraphSpace space(adj);
    const auto b = w1_upper_bound(0, 1, graph_measure(adj, nullptr, 0), graph_measure(adj, nullptr, 1), space);
    CHECK(b.mu_x_of_y == doctest::Approx(1.0));
    CHECK(b.mu_y_of_x == doctest::Approx(0.5));
    CHECK(b.overlap_min == 0.0);
    CHECK(b.overlap_max == 0.0);
    CHECK(b.term_A == doctest::Approx(-0.5));
    CHECK(b.term_B == doctest::Approx(-0.5));
    CHECK(b.w1_upper == doctest::Approx(1.0));
    CHECK(b.kappa_lower == doctest::Approx(0.0));
}

TEST_CASE("K2 edge, plain and lazy") {
    const auto k2 = hg(2, {{0, 1}});
    AdjacencyIndex adj(k2);
    GraphSpace space(adj);
    const auto mx = graph_measure(adj, nullptr, 0), my = graph_measure(adj, nullptr, 1);
    const auto b = w1_upper_bound(0, 1, mx, my, space);
    CHECK(b.term_A == doctest::Approx(-1.0));
    CHECK(b.term_B == doctest::Approx(-1.0));
    CHECK(b.w1_upper == doctest::Approx(1.0));
    CHECK(kappa_lower_bound(0, 1, mx, my, space) == doctest::Approx(0.0));

    const auto lazy = w1_upper_bound(0, 1, lazify(mx, 0.5), lazify(my, 0.5), space);
    CHECK(lazy.alpha == doctest::Approx(0.5));
    CHECK(lazy.w1_upper == doctest::Approx(1.0));
}

TEST_CASE("preconditions") {
    const auto p3 = hg(3, {{0, 1}, {1, 2}});
    AdjacencyIndex adj(p3);
    GraphSpace space(adj);
    const auto m0 = graph_measure(adj, nullptr, 0), m1 = graph_measure(adj, nullptr, 1), m2 = graph_measure(adj, nullptr, 2);
    CHECK_THROWS_AS(w1_upper_bound(0, 2, m0, m2, space), NotAdjacentError);
    CHECK_THROWS_AS(w1_upper_bound(0, 1, m1, m0, space), MeasureError);
}

TEST_CASE("simple and lazy helper bounds") {
    const auto k2 = hg(2, {{0, 1}});
    const auto k3 = hg(3, {{0, 1}, {0, 2}, {1, 2}});
    const auto p3 = hg(3, {{0, 1}, {1, 2}});
    for (const auto* h : {&k2, &k3, &p3}) {
        AdjacencyIndex adj(*h);
        CHECK(w1_simple_bound(graph_measure(adj, nullptr, 0), graph_measure(adj, nullptr, 1)) == doctest::Approx(1.0));
    }
    CHECK(lazy_w1_bound(1.0, 0.5) == doctest::Approx(1.0));
    CHECK(lazy_w1_bound(0.5, 0.5) == doctest::Approx(0.75));
    CHECK(lazy_w1_bound(2.0, 1e-12) == doctest::Approx(2.0));
    CHECK(lazy_kappa_bound(0.5, 0.5) == doctest::Approx(0.25));
    CHECK(lazy_kappa_bound(0.0, 0.3) == 0.0);
    CHECK(lazy_kappa_bound(-1.0, 0.5) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(lazy_w1_bound(1.0, 0.0), Error);
    CHECK_THROWS_AS(lazy_kappa_bound(1.0, 1.0), Error);
}

TEST_CASE("bound works on lattice and Hamming spaces") {
    const std::vector<L1LatticeSpace::Axis> box{{-2, 2}, {-2, 2}};
    const auto z2 = l1_lattice_space(2, box);
    auto uniform = [](const IntegerMetricSpace& s, PointId p) {
        const auto nb = s.unit_neighbors(p);
        std::vector<Atom> atoms;
        for (PointId q : nb) atoms.push_back({q, 1.0 / static_cast<double>(nb.size())});
        return LocalMeasure(p, atoms);
    };
    const std::vector<std::int64_t> o{0, 0}, e1{1, 0};
    const PointId x = z2.encode(o), y = z2.encode(e1);
    // Four neighbours each, no common neighbour: A = B = 1/2, bound 3 - 1 - 0 = 2.
    const auto b = w1_upper_bound(x, y, uniform(z2, x), uniform(z2, y), z2);
    CHECK(b.overlap_min == 0.0);
    CHECK(b.w1_upper == doctest::Approx(2.0));
    CHECK(b.proof_case() == BoundCase::fill_all);

    const auto h3 = hamming_space(3);
    const PointId s = h3.encode("000"), t = h3.encode("001");
    const auto hb = w1_upper_bound(s, t, uniform(h3, s), uniform(h3, t), h3);
    CHECK(hb.w1_upper == doctest::Approx(1.0 + 1.0 / 3 + 1.0 / 3));
}

TEST_CASE("all-points overlap mode follows the one-loop formulation") {
    const auto k3 = hg(3, {{0, 1}, {0, 2}, {1, 2}});
    AdjacencyIndex adj(k3);
    GraphSpace space(adj);
    const auto mx = graph_measure(adj, nullptr, 0), my = graph_measure(adj, nullptr, 1);
    const auto b = w1_upper_bound(0, 1, mx, my, space, {OverlapMode::all_points});
    // Union {0, 1, 2}: max sums 1/2 + 1/2 + 1/2, min sums 0 + 0 + 1/2.
    CHECK(b.overlap_max == doctest::Approx(1.5));
    CHECK(b.overlap_min == doctest::Approx(0.5));
}

TEST_CASE("property: soundness against exhaustive transport") {
    Rng rng(31);
    int checked = 0;
    std::array<int, 3> cases{};
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 3 + rng.below(9);
        const auto h = oracle::random_hypergraph(rng, n, 2 + rng.below(n), 2, 4);
        const AdjacencyIndex adj(h);
        const GraphSpace space(adj);
        const auto fw = oracle::floyd_warshall(h);
        const VertexId x = static_cast<VertexId>(rng.below(n));
        if (adj.neighbors(x).empty()) continue;
        const VertexId y = adj.neighbors(x)[rng.below(adj.neighbors(x).size())];
        const int denominator = 2 + static_cast<int>(rng.below(8));
        const bool lazy = rng.bernoulli(0.3);
        const auto mx = random_rational_measure(rng, x, adj.neighbors(x), denominator, lazy);
        const auto my = random_rational_measure(rng, y, adj.neighbors(y), denominator, lazy);
        const double exact = oracle::brute_force_w1(mx.atoms, my.atoms, denominator,
                                                    [&](auto p, auto q) { return fw[p][q]; });
        const auto b = w1_upper_bound(x, y, mx.measure, my.measure, space);
        REQUIRE(b.w1_upper >= exact - 1e-9);
        REQUIRE(b.kappa_lower <= 1.0 - exact + 1e-9);
        if (!lazy) REQUIRE(w1_simple_bound(mx.measure, my.measure) >= exact - 1e-9);
        ++cases[static_cast<int>(b.proof_case())];
        ++checked;
    }
    CHECK(checked > 300);
    CHECK(cases[0] > 0);
    CHECK(cases[1] > 0);
    CHECK(cases[2] > 0);
}

TEST_CASE("property: symmetry, term order and the closed forms") {
    Rng rng(32);
    std::array<int, 3> cases{};
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t n = 2 + rng.below(23);
        const auto h = oracle::random_hypergraph(rng, n, 1 + rng.below(2 * n), 2, 6);
        const AdjacencyIndex adj(h);
        const GraphSpace space(adj);
        const VertexId x = static_cast<VertexId>(rng.below(n));
        if (adj.neighbors(x).empty()) continue;
        const VertexId y = adj.neighbors(x)[rng.below(adj.neighbors(x).size())];
        const auto kind = static_cast<MeasureKind>(rng.below(3));
        auto mx = make_measure(kind, h, adj, x), my = make_measure(kind, h, adj, y);
        if (rng.bernoulli(0.3)) {
            mx = lazify(mx, 0.1 + 0.8 * rng.uniform());
            my = lazify(my, 0.1 + 0.8 * rng.uniform());
        }
        const auto xy = w1_upper_bound(x, y, mx, my, space);
        const auto yx = w1_upper_bound(y, x, my, mx, space);
        REQUIRE(xy.w1_upper == doctest::Approx(yx.w1_upper).epsilon(1e-12));
        REQUIRE(xy.term_A <= xy.term_B);
        REQUIRE(xy.w1_upper == doctest::Approx(piecewise(xy)).epsilon(1e-12));
        REQUIRE(xy.kappa_lower == doctest::Approx(1.0 - xy.w1_upper).epsilon(1e-12));
        if (xy.alpha == 0.0) REQUIRE(xy.w1_upper <= w1_simple_bound(mx, my) + 1e-12);
        ++cases[static_cast<int>(xy.proof_case())];
    }
    CHECK(cases[0] > 0);
    CHECK(cases[1] > 0);
    CHECK(cases[2] > 0);
}

TEST_CASE("property: laziness passes through the estimator") {
    Rng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(20);
        const auto h = oracle::random_hypergraph(rng, n, 1 + rng.below(2 * n), 2, 5);
        const AdjacencyIndex adj(h);
        const GraphSpace space(adj);
        const VertexId x = static_cast<VertexId>(rng.below(n));
        if (adj.neighbors(x).empty()) continue;
        const VertexId y = adj.neighbors(x)[0];
        const auto mx = measure_equal_nodes(h, adj, x), my = measure_equal_nodes(h, adj, y);
        const double plain = w1_upper_bound(x, y, mx, my, space).w1_upper;
        for (double alpha : {0.1, 0.5, 0.9}) {
            const double lazy = w1_upper_bound(x, y, lazify(mx, alpha), lazify(my, alpha), space).w1_upper;
            REQUIRE(lazy <= lazy_w1_bound(plain, alpha) + 1e-9);
        }
    }
}

}  // TEST_SUITE
