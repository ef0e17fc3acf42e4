#include <doctest.h>

#include "support/oracles.hpp"

#include <orc/curvature.hpp>
#include <orc/error.hpp>

#include <cmath>

using namespace orc;

namespace {

Hypergraph hg(std::size_t n, std::initializer_list<std::vector<VertexId>> edges) {
    Hypergraph h(n);
    for (const auto& e : edges) h.add_edge(e);
    return h;
}

CurvatureConfig config(MeasureKind m, EstimatorKind e, AggKind a = AggKind::average) {
    CurvatureConfig c;
    c.measure = m;
    c.estimator = e;
    c.agg = a;
    return c;
}

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("single hyperedge {a,b,c}") {
    const auto h = hg(3, {{0, 1, 2}});
    for (auto m : {MeasureKind::equal_nodes, MeasureKind::equal_edges, MeasureKind::weighted_edges}) {
        for (auto e : {EstimatorKind::bound, EstimatorKind::exact}) {
            const auto r = compute_curvature(h, config(m, e));
            REQUIRE(r.edges.size() == 1);
            CHECK(*r.edges[0].agg == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(*r.edges[0].curvature == doctest::Approx(0.5).epsilon(1e-12));
            for (const auto& n : r.nodes) {
                CHECK(*n.kappa_neighborhood == doctest::Approx(0.5));
                CHECK(*n.kappa_edges == doctest::Approx(0.5));
            }
        }
    }
}

TEST_CASE("aggregation") {
    const auto h = hg(3, {{0, 1, 2}});
    const AdjacencyIndex adj(h);
    const PairwiseW1 w1(h, adj, config(MeasureKind::equal_nodes, EstimatorKind::exact));
    const PairEvaluator eval = [&](VertexId i, VertexId j) { return w1(i, j); };
    const std::vector<VertexId> e{0, 1, 2}, pair{0, 1}, single{0};
    CHECK(agg_average(e, eval) == doctest::Approx(0.5));
    CHECK(agg_max(e, eval) == doctest::Approx(0.5));
    CHECK(agg_average(pair, eval) == doctest::Approx(w1(0, 1)));
    CHECK(agg_max(pair, eval) == doctest::Approx(w1(0, 1)));
    CHECK_THROWS_AS(agg_average(single, eval), Error);
    CHECK(w1.cached_pairs() == 3);

    const PairEvaluator zero = [](VertexId, VertexId) { return 0.0; };
    CHECK(agg_average(e, zero) == 0.0);
    CHECK(edge_curvature(e, AggKind::max, eval) == doctest::Approx(0.5));
}

TEST_CASE("graph edges") {
    const auto k3 = hg(3, {{0, 1}, {0, 2}, {1, 2}});
    const auto p3 = hg(3, {{0, 1}, {1, 2}});
    const auto k2 = hg(2, {{0, 1}});
    for (auto e : {EstimatorKind::bound, EstimatorKind::exact}) {
        const auto rk3 = compute_curvature(k3, config(MeasureKind::graph, e));
        CHECK(*rk3.edges[0].curvature == doctest::Approx(0.5));
        CHECK(*rk3.nodes[0].kappa_neighborhood == doctest::Approx(0.5));
        CHECK(*compute_curvature(p3, config(MeasureKind::graph, e)).edges[0].curvature == doctest::Approx(0.0));
        const auto rk2 = compute_curvature(k2, config(MeasureKind::graph, e));
        CHECK(*rk2.edges[0].curvature == doctest::Approx(0.0));
        CHECK(*rk2.nodes[0].kappa_neighborhood == doctest::Approx(0.0));
    }
}

TEST_CASE("non-adjacent pairs are rejected") {
    const auto h = hg(4, {{0, 1}, {2, 3}});
    const AdjacencyIndex adj(h);
    for (auto e : {EstimatorKind::bound, EstimatorKind::exact, EstimatorKind::sinkhorn}) {
        const PairwiseW1 w1(h, adj, config(MeasureKind::equal_nodes, e));
        CHECK_THROWS_AS(w1(0, 2), NotAdjacentError);
    }
}

TEST_CASE("node curvature from incident hyperedges") {
    const std::vector<std::optional<double>> kappa{0.2, 0.6, std::nullopt};
    const auto h = hg(3, {{0, 1}, {0, 2}, {0}});
    const AdjacencyIndex adj(h);
    CHECK(*node_curvature_edges(0, adj, kappa) == doctest::Approx(0.4));
    CHECK(*node_curvature_edges(0, adj, kappa, true) == doctest::Approx(0.8 / 3));

    // Repeated hyperedges count once each.
    const auto multi = hg(3, {{0, 1}, {0, 1}, {0, 2}});
    const AdjacencyIndex am(multi);
    const std::vector<std::optional<double>> k3{0.3, 0.3, 0.9};
    CHECK(*node_curvature_edges(0, am, k3) == doctest::Approx(0.5));
    CHECK(am.degree(0) == 3);
}

TEST_CASE("skipped records carry a reason") {
    const auto h = hg(4, {{0}, {1, 2}});
    const auto r = compute_curvature(h, config(MeasureKind::equal_nodes, EstimatorKind::bound));
    CHECK(r.edges[0].skip_reason == "singleton hyperedge");
    CHECK_FALSE(r.edges[0].curvature.has_value());
    CHECK(r.edges[1].curvature.has_value());
    CHECK(r.nodes[0].skip_reason == "isolated vertex");
    CHECK(r.nodes[3].skip_reason == "isolated vertex");
    CHECK(r.nodes[1].skip_reason.empty());
}

TEST_CASE("vertex-transitive instance has equal node curvature") {
    Hypergraph cycle(6);
    for (VertexId v = 0; v < 6; ++v) cycle.add_edge({v, static_cast<VertexId>((v + 1) % 6)});
    const auto r = compute_curvature(cycle, config(MeasureKind::equal_nodes, EstimatorKind::exact));
    for (const auto& n : r.nodes) CHECK(*n.kappa_neighborhood == doctest::Approx(*r.nodes[0].kappa_neighborhood));
}

TEST_CASE("threads do not change the report") {
    Rng rng(51);
    const auto h = oracle::random_hypergraph(rng, 30, 40, 2, 5);
    auto c = config(MeasureKind::weighted_edges, EstimatorKind::exact);
    const auto one = compute_curvature(h, c);
    c.threads = 4;
    const auto four = compute_curvature(h, c);
    for (std::size_t e = 0; e < one.edges.size(); ++e) CHECK(one.edges[e].curvature == four.edges[e].curvature);
    for (std::size_t v = 0; v < one.nodes.size(); ++v) CHECK(one.nodes[v].kappa_edges == four.nodes[v].kappa_edges);
}

TEST_CASE("property: bound curvature never exceeds exact curvature") {
    Rng rng(52);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng.below(18);
        const auto h = oracle::random_hypergraph(rng, n, 1 + rng.below(2 * n), 1, 6);
        for (auto m : {MeasureKind::equal_nodes, MeasureKind::equal_edges, MeasureKind::weighted_edges}) {
            for (auto a : {AggKind::average, AggKind::max}) {
                const auto lb = compute_curvature(h, config(m, EstimatorKind::bound, a));
                const auto ex = compute_curvature(h, config(m, EstimatorKind::exact, a));
                for (std::size_t e = 0; e < h.num_edges(); ++e) {
                    REQUIRE(lb.edges[e].curvature.has_value() == ex.edges[e].curvature.has_value());
                    if (lb.edges[e].curvature) REQUIRE(*lb.edges[e].curvature <= *ex.edges[e].curvature + 1e-9);
                }
            }
            const auto avg = compute_curvature(h, config(m, EstimatorKind::exact, AggKind::average));
            const auto mx = compute_curvature(h, config(m, EstimatorKind::exact, AggKind::max));
            for (std::size_t e = 0; e < h.num_edges(); ++e) {
                if (avg.edges[e].curvature) REQUIRE(*mx.edges[e].curvature <= *avg.edges[e].curvature + 1e-12);
            }
        }
    }
}

}  // TEST_SUITE
