#include <doctest.h>

#include "support/oracles.hpp"

#include <orc/bound.hpp>
#include <orc/error.hpp>
#include <orc/transport.hpp>

#include <cmath>
#include <unordered_map>

using namespace orc;

namespace {

Hypergraph hg(std::size_t n, std::initializer_list<std::vector<VertexId>> edges) {
    Hypergraph h(n);
    for (const auto& e : edges) h.add_edge(e);
    return h;
}

struct Fixture {
    Hypergraph h;
    AdjacencyIndex adj;
    GraphSpace space;
    explicit Fixture(Hypergraph g) : h(std::move(g)), adj(h), space(adj) {}
};

// Random measure with masses k / denominator on `support` (some may get zero).
std::pair<LocalMeasure, oracle::RationalAtoms> rational_measure(Rng& rng, PointId base, const std::vector<PointId>& support,
                                                                int denominator) {
    const auto parts = oracle::random_composition(rng, denominator, support.size());
    std::vector<Atom> atoms;
    oracle::RationalAtoms rational;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (parts[i] == 0) continue;
        atoms.push_back({support[i], static_cast<double>(parts[i]) / denominator});
        rational.emplace_back(support[i], parts[i]);
    }
    return {LocalMeasure(base, atoms), rational};
}

std::vector<PointId> random_subset(Rng& rng, std::size_t n, std::size_t max_size) {
    std::vector<PointId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    rng.shuffle(all);
    all.resize(1 + rng.below(std::min(n, max_size)));
    return all;
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("exact solver on hand-checked problems") {
    Fixture k3(hg(3, {{0, 1, 2}}));
    const LocalMeasure at0(0, {{0, 1.0}}), at1(1, {{1, 1.0}});
    CHECK(exact_w1(make_transport_problem(at0, at1, k3.space)).objective == doctest::Approx(1.0));

    const LocalMeasure halves(0, {{1, 0.5}, {2, 0.5}});
    const auto same = exact_w1(make_transport_problem(halves, halves, k3.space));
    CHECK(same.objective == doctest::Approx(0.0));
    for (const auto& f : same.flows) CHECK(f.from == f.to);

    const LocalMeasure mx(0, {{1, 0.5}, {2, 0.5}}), my(1, {{0, 0.5}, {2, 0.5}});
    const auto plan = exact_w1(make_transport_problem(mx, my, k3.space));
    CHECK(plan.objective == doctest::Approx(0.5));
    CHECK(plan.integral);
}

TEST_CASE("exact solver errors") {
    Fixture split(hg(4, {{0, 1}, {2, 3}}));
    const LocalMeasure a(0, {{1, 1.0}}), b(2, {{3, 1.0}});
    CHECK_THROWS_AS(make_transport_problem(a, b, split.space), TransportError);

    Hypergraph big(40);
    std::vector<VertexId> all(40);
    for (VertexId v = 0; v < 40; ++v) all[v] = v;
    big.add_edge(all);
    Fixture clique(std::move(big));
    std::vector<Atom> atoms;
    for (PointId p = 1; p < 40; ++p) atoms.push_back({p, 1.0 / 39});
    const LocalMeasure wide(0, atoms);
    ExactOptions tight;
    tight.max_support = 10;
    CHECK_THROWS_AS(exact_w1(make_transport_problem(wide, wide, clique.space), tight), TransportError);
}

TEST_CASE("sinkhorn on hand-checked problems") {
    Fixture k3(hg(3, {{0, 1, 2}}));
    const LocalMeasure halves(0, {{1, 0.5}, {2, 0.5}});
    CHECK(std::abs(sinkhorn_w1(make_transport_problem(halves, halves, k3.space)).cost) <= 0.05);

    const LocalMeasure at0(0, {{0, 1.0}}), at1(1, {{1, 1.0}});
    CHECK(std::abs(sinkhorn_w1(make_transport_problem(at0, at1, k3.space)).cost - 1.0) <= 0.05);

    const LocalMeasure mx(0, {{1, 0.5}, {2, 0.5}}), my(1, {{0, 0.5}, {2, 0.5}});
    SinkhornOptions fine;
    fine.reg = 0.01;
    const auto r = sinkhorn_w1(make_transport_problem(mx, my, k3.space), fine);
    CHECK(std::abs(r.cost - 0.5) <= 0.1);
    CHECK(r.iterations >= 1);

    SinkhornOptions bad;
    bad.reg = 0.0;
    CHECK_THROWS_AS(sinkhorn_w1(make_transport_problem(mx, my, k3.space), bad), TransportError);
}

TEST_CASE("sinkhorn reports underflow") {
    Fixture path(hg(4, {{0, 1}, {1, 2}, {2, 3}}));
    const LocalMeasure a(0, {{0, 1.0}}), b(3, {{3, 1.0}});
    SinkhornOptions tiny;
    tiny.reg = 1e-4;
    CHECK_THROWS_AS(sinkhorn_w1(make_transport_problem(a, b, path.space), tiny), TransportError);
}

TEST_CASE("dual witnesses") {
    Fixture k3(hg(3, {{0, 1, 2}}));
    const LocalMeasure at0(0, {{0, 1.0}}), at1(1, {{1, 1.0}});
    const auto p01 = make_transport_problem(at0, at1, k3.space);
    CHECK(dual_witness_lower_bound(p01, [](PointId) { return 0.0; }) == 0.0);
    CHECK(dual_witness_lower_bound(p01, [&](PointId q) { return static_cast<double>(*k3.space.distance(q, 1)); }) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(dual_witness_lower_bound(p01, [](PointId q) { return 5.0 * static_cast<double>(q); }), TransportError);

    const LocalMeasure mx(0, {{1, 0.5}, {2, 0.5}}), my(1, {{0, 0.5}, {2, 0.5}});
    const auto p = make_transport_problem(mx, my, k3.space);
    const auto plan = exact_w1(p);
    const auto phi = optimal_potential(p, plan);
    std::unordered_map<PointId, double> f;
    for (std::size_t i = 0; i < p.size(); ++i) f[p.points[i]] = phi[i];
    CHECK(dual_witness_lower_bound(p, [&](PointId q) { return f.at(q); }) == doctest::Approx(0.5));
}

TEST_CASE("property: exact solver matches exhaustive assignment") {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(10);
        Fixture fx(oracle::random_hypergraph(rng, n, n + rng.below(n), 2, 4));
        const auto fw = oracle::floyd_warshall(fx.h);
        const auto comp = connected_components(fx.adj);
        const int denominator = 1 + static_cast<int>(rng.below(10));
        const auto s = random_subset(rng, n, 6);
        const auto t = random_subset(rng, n, 6);
        bool connected = true;
        for (auto a : s) {
            for (auto b : t) connected = connected && comp[a] == comp[b];
        }
        if (!connected) continue;
        const auto [mu, ra] = rational_measure(rng, s[0], s, denominator);
        const auto [nu, rb] = rational_measure(rng, t[0], t, denominator);
        const double expect = oracle::brute_force_w1(ra, rb, denominator, [&](auto p, auto q) { return fw[p][q]; });
        const auto problem = make_transport_problem(mu, nu, fx.space);
        REQUIRE(exact_w1(problem).objective == doctest::Approx(expect).epsilon(1e-12));
        ExactOptions floating;
        floating.integral_support = 0;
        const auto fp = exact_w1(problem, floating);
        REQUIRE_FALSE(fp.integral);
        REQUIRE(fp.objective == doctest::Approx(expect).epsilon(1e-9));
        double moved = 0.0;
        for (const auto& f : fp.flows) moved += f.mass;
        REQUIRE(moved == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("property: W1 symmetry, triangle inequality and the dual sandwich") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.below(15);
        Fixture fx(oracle::random_hypergraph(rng, n, 2 * n, 2, 4));
        const auto comp = connected_components(fx.adj);
        const VertexId x = static_cast<VertexId>(rng.below(n));
        if (fx.adj.neighbors(x).empty()) continue;
        const VertexId y = fx.adj.neighbors(x)[rng.below(fx.adj.neighbors(x).size())];
        std::vector<PointId> pool;
        for (VertexId v = 0; v < n; ++v) {
            if (comp[v] == comp[x]) pool.push_back(v);
        }
        auto random_measure = [&](PointId base) {
            std::vector<Atom> atoms;
            double total = 0.0;
            for (PointId p : pool) {
                if (rng.bernoulli(0.5)) {
                    atoms.push_back({p, rng.uniform() + 0.01});
                    total += atoms.back().mass;
                }
            }
            if (atoms.empty()) return LocalMeasure(base, {{base, 1.0}});
            for (auto& a : atoms) a.mass /= total;
            return LocalMeasure(base, atoms);
        };
        const auto a = random_measure(x), b = random_measure(y), c = random_measure(x);
        const double ab = exact_w1(make_transport_problem(a, b, fx.space)).objective;
        const double ba = exact_w1(make_transport_problem(b, a, fx.space)).objective;
        const double bc = exact_w1(make_transport_problem(b, c, fx.space)).objective;
        const double ac = exact_w1(make_transport_problem(a, c, fx.space)).objective;
        REQUIRE(ab == doctest::Approx(ba).epsilon(1e-9));
        REQUIRE(ac <= ab + bc + 1e-9);

        const auto mx = make_measure(MeasureKind::equal_nodes, fx.h, fx.adj, x);
        const auto my = make_measure(MeasureKind::equal_nodes, fx.h, fx.adj, y);
        const auto p = make_transport_problem(mx, my, fx.space);
        const auto plan = exact_w1(p);
        const auto phi = optimal_potential(p, plan);
        std::unordered_map<PointId, double> f;
        for (std::size_t i = 0; i < p.size(); ++i) f[p.points[i]] = phi[i];
        const double dual = dual_witness_lower_bound(p, [&](PointId q) { return f.at(q); });
        REQUIRE(dual >= plan.objective - 1e-6);
        REQUIRE(dual <= plan.objective + 1e-9);
        REQUIRE(plan.objective <= w1_upper_bound(x, y, mx, my, fx.space).w1_upper + 1e-9);
    }
}

}  // TEST_SUITE
