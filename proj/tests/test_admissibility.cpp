#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgf/admissible.hpp"
#include "test_util.hpp"

using namespace sgf;
using testutil::circuit_graph;

namespace {

// two unbalanced triangles sharing vertex 0
SignedGraph short_barbell_graph() {
    SignedGraph g(5);
    g.add_edge(0, 1, -1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 0, 1);
    g.add_edge(0, 3, -1);
    g.add_edge(3, 4, 1);
    g.add_edge(4, 0, 1);
    return g;
}

// two unbalanced triangles joined by the path edge 0-3 (id 3)
SignedGraph long_barbell_graph() {
    SignedGraph g(6);
    g.add_edge(0, 1, -1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 0, 1);
    g.add_edge(0, 3, 1);
    g.add_edge(3, 4, -1);
    g.add_edge(4, 5, 1);
    g.add_edge(5, 3, 1);
    return g;
}

} // namespace

TEST_CASE("classification accepts balanced circuits only among circuits") {
    SignedGraph even = circuit_graph(5, {1, 3});
    auto r = classify_signed_circuit(even, even.edge_ids());
    REQUIRE(r.ok);
    CHECK(r.value.kind == SignedCircuitKind::BalancedCircuit);
    CHECK(r.value.edges() == even.edge_ids());

    SignedGraph odd = circuit_graph(5, {2});
    auto bad = classify_signed_circuit(odd, odd.edge_ids());
    CHECK_FALSE(bad.ok);
    CHECK(bad.reason.find("unbalanced") != std::string::npos);

    auto partial = classify_signed_circuit(even, {0, 1, 2});
    CHECK_FALSE(partial.ok); // a path, degree profile has degree-1 vertices
}

TEST_CASE("classification recognizes short barbells") {
    SignedGraph g = short_barbell_graph();
    auto r = classify_signed_circuit(g, g.edge_ids());
    REQUIRE(r.ok);
    CHECK(r.value.kind == SignedCircuitKind::ShortBarbell);
    CHECK(r.value.path.empty());
    CHECK(g.sign_product(r.value.circuit1) == -1);
    CHECK(g.sign_product(r.value.circuit2) == -1);
    CHECK(r.value.edges() == g.edge_ids());

    // same shape but balanced lobes is not a signed circuit
    SignedGraph b(5);
    b.add_edge(0, 1, 1);
    b.add_edge(1, 2, 1);
    b.add_edge(2, 0, 1);
    b.add_edge(0, 3, 1);
    b.add_edge(3, 4, 1);
    b.add_edge(4, 0, 1);
    auto rb = classify_signed_circuit(b, b.edge_ids());
    CHECK_FALSE(rb.ok);
    CHECK(rb.reason.find("balanced") != std::string::npos);
}

TEST_CASE("classification recognizes long barbells") {
    SignedGraph g = long_barbell_graph();
    auto r = classify_signed_circuit(g, g.edge_ids());
    REQUIRE(r.ok);
    CHECK(r.value.kind == SignedCircuitKind::LongBarbell);
    CHECK(r.value.path == std::vector<int>{3});
    CHECK(g.sign_product(r.value.circuit1) == -1);
    CHECK(g.sign_product(r.value.circuit2) == -1);
    CHECK(r.value.edges() == g.edge_ids());
}

TEST_CASE("classification rejects non-circuit shapes") {
    // theta graph: two degree-3 vertices joined by three chains
    SignedGraph theta(4);
    theta.add_edge(0, 2, -1);
    theta.add_edge(2, 1, 1);
    theta.add_edge(0, 3, 1);
    theta.add_edge(3, 1, 1);
    theta.add_edge(0, 1, -1);
    CHECK_FALSE(classify_signed_circuit(theta, theta.edge_ids()).ok);

    // two disjoint circuits
    SignedGraph two(6);
    two.add_edge(0, 1, 1);
    two.add_edge(1, 2, 1);
    two.add_edge(2, 0, 1);
    two.add_edge(3, 4, 1);
    two.add_edge(4, 5, 1);
    two.add_edge(5, 3, 1);
    auto r = classify_signed_circuit(two, two.edge_ids());
    CHECK_FALSE(r.ok);
    CHECK(r.reason.find("connected") != std::string::npos);

    CHECK_FALSE(classify_signed_circuit(two, {}).ok);

    // complete graph on four vertices: degree-3 profile but no barbell split
    SignedGraph k4(4);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) k4.add_edge(u, v, 1);
    CHECK_FALSE(classify_signed_circuit(k4, k4.edge_ids()).ok);
}

TEST_CASE("admissibility on the canonical small examples") {
    CHECK(is_flow_admissible(circuit_graph(4)).admissible);
    CHECK(is_flow_admissible(circuit_graph(4, {0, 2})).admissible);
    CHECK(is_flow_admissible(short_barbell_graph()).admissible);
    CHECK(is_flow_admissible(long_barbell_graph()).admissible);
    CHECK(is_flow_admissible(SignedGraph(3)).admissible); // isolated vertices

    // a lone unbalanced circuit: deleting any edge leaves a balanced path
    auto r1 = is_flow_admissible(circuit_graph(4, {1}));
    CHECK_FALSE(r1.admissible);
    CHECK(r1.offending_edge == 0);

    // unbalanced digon
    SignedGraph digon(2);
    digon.add_edge(0, 1, 1);
    digon.add_edge(0, 1, -1);
    CHECK_FALSE(is_flow_admissible(digon).admissible);

    // bridge between two balanced triangles
    SignedGraph bridged(6);
    bridged.add_edge(0, 1, 1);
    bridged.add_edge(1, 2, 1);
    bridged.add_edge(2, 0, 1);
    bridged.add_edge(2, 3, 1); // the bridge, id 3
    bridged.add_edge(3, 4, 1);
    bridged.add_edge(4, 5, 1);
    bridged.add_edge(5, 3, 1);
    auto r2 = is_flow_admissible(bridged);
    CHECK_FALSE(r2.admissible);
    CHECK(r2.offending_edge == 3);
    CHECK(r2.reason.find("bridge") != std::string::npos);

    // pendant edge on an unbalanced triangle: deleting any edge leaves a
    // balanced part, and edge 0 is the first the deterministic scan hits
    SignedGraph pendant(4);
    pendant.add_edge(0, 1, -1);
    pendant.add_edge(1, 2, 1);
    pendant.add_edge(2, 0, 1);
    pendant.add_edge(2, 3, 1);
    auto r3 = is_flow_admissible(pendant);
    CHECK_FALSE(r3.admissible);
    CHECK(r3.offending_edge == 0);
}

TEST_CASE("admissibility and per-edge circuit search match the flow-support reference") {
    testutil::Rng rng(2026'08'01);
    for (int trial = 0; trial < 60; ++trial) {
        int n = testutil::rand_int(rng, 3, 6);
        int extra = testutil::rand_int(rng, 0, std::min(4, 8 - (n - 1)));
        SignedGraph g = testutil::random_connected(rng, n, extra);
        auto mask = testutil::flow_support_mask(g);
        bool all_covered = true;
        for (int e : g.edge_ids()) all_covered = all_covered && mask[size_t(e)];

        auto adm = is_flow_admissible(g);
        CHECK(adm.admissible == all_covered);
        if (!adm.admissible) CHECK_FALSE(mask[size_t(adm.offending_edge)]);

        for (int e : g.edge_ids()) {
            auto sc = signed_circuit_through(g, e);
            CHECK(sc.has_value() == bool(mask[size_t(e)]));
            if (sc) {
                auto cls = classify_signed_circuit(g, sc->edges());
                CHECK(cls.ok);
                CHECK(cls.value.kind == sc->kind);
                CHECK(contains_id(sc->edges(), e));
            }
        }
    }
}

TEST_CASE("admissibility is switching invariant") {
    testutil::Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        int n = testutil::rand_int(rng, 3, 7);
        SignedGraph g = testutil::random_connected(rng, n, testutil::rand_int(rng, 0, 4));
        std::vector<int> u;
        for (int v = 0; v < n; ++v)
            if (testutil::rand_int(rng, 0, 1)) u.push_back(v);
        SignedGraph h = g.switch_at(u);
        CHECK(is_flow_admissible(g).admissible == is_flow_admissible(h).admissible);
    }
}

TEST_CASE("signed-circuit covers exist exactly on admissible graphs") {
    testutil::Rng rng(4040);
    int admissible_seen = 0, inadmissible_seen = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int n = testutil::rand_int(rng, 3, 7);
        SignedGraph g = testutil::random_connected(rng, n, testutil::rand_int(rng, 0, 5));
        if (is_flow_admissible(g).admissible) {
            ++admissible_seen;
            auto cover = signed_circuit_cover(g);
            std::vector<int> covered;
            for (const auto& sc : cover) {
                auto cls = classify_signed_circuit(g, sc.edges());
                CHECK(cls.ok);
                auto part = sc.edges();
                covered.insert(covered.end(), part.begin(), part.end());
            }
            CHECK(sorted_unique(covered) == g.edge_ids());
        } else {
            ++inadmissible_seen;
            CHECK_THROWS_WITH_AS(signed_circuit_cover(g),
                                 doctest::Contains("NotFlowAdmissible"), Error);
        }
    }
    CHECK(admissible_seen > 5);
    CHECK(inadmissible_seen > 5);
}

TEST_CASE("circuit search respects its node budget") {
    SignedGraph g = circuit_graph(5);
    CHECK_FALSE(signed_circuit_through(g, 0, 1).has_value());
    CHECK(signed_circuit_through(g, 0).has_value());
}
