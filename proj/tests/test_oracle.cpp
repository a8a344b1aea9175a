#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgf/admissible.hpp"
#include "sgf/graph_json.hpp"
#include "sgf/oracle.hpp"
#include "test_util.hpp"

using namespace sgf;
using testutil::circuit_graph;

namespace {

// even circuit with every second edge doubled, one negative edge per doubled
// pair: the classic cubic example whose flow number is exactly 6
SignedGraph doubled_circuit_graph() {
    SignedGraph g(6);
    for (int i = 0; i < 6; ++i) g.add_edge(i, (i + 1) % 6, 1);
    g.add_edge(0, 1, -1);
    g.add_edge(2, 3, -1);
    g.add_edge(4, 5, -1);
    return g;
}

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

SignedGraph k4_graph() {
    SignedGraph g(4);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) g.add_edge(u, v, 1);
    return g;
}

} // namespace

TEST_CASE("existence on canonical examples") {
    SignedGraph c5 = circuit_graph(5);
    for (FlowMode mode : {FlowMode::Integer, FlowMode::Modular}) {
        auto rep = exists_nzf(c5, 2, mode);
        CHECK(rep.decision == Decision::Exists);
        REQUIRE(rep.witness.has_value());
        auto vr = verify_flow(c5, *rep.witness);
        CHECK(vr.valid_flow);
        CHECK(vr.nowhere_zero);
    }

    SignedGraph digon(2);
    digon.add_edge(0, 1, 1);
    digon.add_edge(0, 1, -1);
    for (int k = 2; k <= 8; ++k)
        CHECK(exists_nzf(digon, k, FlowMode::Integer).decision == Decision::NotExists);

    SignedGraph single(2);
    single.add_edge(0, 1, 1);
    CHECK(exists_nzf(single, 2, FlowMode::Integer).decision == Decision::NotExists);

    CHECK(exists_nzf(SignedGraph(0), 2, FlowMode::Integer).decision == Decision::Exists);
    CHECK(exists_nzf(SignedGraph(3), 2, FlowMode::Modular).decision == Decision::Exists);

    CHECK_THROWS_WITH_AS(exists_nzf(c5, 1, FlowMode::Integer), doctest::Contains("BadK"), Error);
}

TEST_CASE("flow numbers of the standard small graphs") {
    auto barbell = flow_number(long_barbell_graph());
    CHECK(barbell.admissible);
    CHECK(barbell.bounded);
    CHECK(barbell.phi == 3);
    // k = 2 dies at depth 0: the barbell has odd-degree vertices
    auto k2 = exists_nzf(long_barbell_graph(), 2, FlowMode::Integer);
    CHECK(k2.decision == Decision::NotExists);
    CHECK(k2.nodes == 0);

    SignedGraph digon(2);
    digon.add_edge(0, 1, 1);
    digon.add_edge(0, 1, -1);
    auto inf = flow_number(digon);
    CHECK_FALSE(inf.admissible); // the infinity marker
    CHECK_FALSE(inf.bounded);

    auto c4 = flow_number(circuit_graph(4, {0, 1}));
    CHECK(c4.bounded);
    CHECK(c4.phi == 2);
}

TEST_CASE("the doubled-circuit example has flow number six") {
    SignedGraph g = doubled_circuit_graph();
    CHECK(exists_nzf(g, 5, FlowMode::Integer).decision == Decision::NotExists);
    CHECK(exists_nzf(g, 6, FlowMode::Integer).decision == Decision::Exists);
    auto fn = flow_number(g);
    CHECK(fn.admissible);
    CHECK(fn.bounded);
    CHECK(fn.phi == 6);
    REQUIRE(fn.witness.has_value());
    auto vr = verify_flow(g, *fn.witness);
    CHECK(vr.valid_flow);
    CHECK(vr.nowhere_zero);

    // odd negative count refutes k = 2 without expanding a single node
    auto k2 = exists_nzf(g, 2, FlowMode::Integer);
    CHECK(k2.decision == Decision::NotExists);
    CHECK(k2.nodes == 0);
}

TEST_CASE("search agrees with the unpruned reference") {
    testutil::Rng rng(515151);
    for (int trial = 0; trial < 30; ++trial) {
        int n = testutil::rand_int(rng, 3, 5);
        int extra = testutil::rand_int(rng, 0, std::min(3, 7 - (n - 1)));
        SignedGraph g = testutil::random_connected(rng, n, extra);
        for (int k : {2, 3, 4}) {
            for (FlowMode mode : {FlowMode::Integer, FlowMode::Modular}) {
                bool expect = testutil::naive_exists_nzf(g, k, mode);
                auto rep = exists_nzf(g, k, mode);
                CHECK(rep.decision == (expect ? Decision::Exists : Decision::NotExists));
            }
        }
    }
}

TEST_CASE("integer existence is monotone in k") {
    testutil::Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        SignedGraph g = testutil::random_connected(rng, testutil::rand_int(rng, 3, 6),
                                                   testutil::rand_int(rng, 0, 4));
        bool prev = false;
        for (int k = 2; k <= 6; ++k) {
            bool now = exists_nzf(g, k, FlowMode::Integer).decision == Decision::Exists;
            if (prev) CHECK(now);
            prev = now;
        }
    }
}

TEST_CASE("flow number is switching invariant across whole signature classes") {
    // fixed underlying multigraph, all 2^7 signatures, all 2^4 switchings
    SignedGraph base(4);
    base.add_edge(0, 1, 1);
    base.add_edge(1, 2, 1);
    base.add_edge(2, 3, 1);
    base.add_edge(3, 0, 1);
    base.add_edge(0, 2, 1);
    base.add_edge(1, 3, 1);
    base.add_edge(0, 1, 1);
    int edges = base.edge_count();
    for (int sig = 0; sig < (1 << edges); ++sig) {
        SignedGraph g(4);
        for (int id : base.edge_ids())
            g.add_edge(base.edge(id).u, base.edge(id).v, (sig >> id) & 1 ? -1 : 1);
        auto fn = flow_number(g, 6);
        for (int u = 1; u < 16; ++u) {
            std::vector<int> set;
            for (int v = 0; v < 4; ++v)
                if ((u >> v) & 1) set.push_back(v);
            SignedGraph h = g.switch_at(set);
            auto fh = flow_number(h, 6);
            CHECK(fh.admissible == fn.admissible);
            CHECK(fh.bounded == fn.bounded);
            CHECK(fh.phi == fn.phi);
        }
    }
}

TEST_CASE("witnesses are deterministic") {
    testutil::Rng rng(123123);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 10; ++trial) {
        SignedGraph g = testutil::random_connected(rng, testutil::rand_int(rng, 3, 6),
                                                   testutil::rand_int(rng, 1, 4));
        auto fn = flow_number(g);
        if (!fn.bounded) continue;
        ++checked;
        auto a = exists_nzf(g, fn.phi, FlowMode::Integer);
        auto b = exists_nzf(g, fn.phi, FlowMode::Integer);
        REQUIRE(a.witness.has_value());
        REQUIRE(b.witness.has_value());
        CHECK(flow_to_json(g, *a.witness) == flow_to_json(g, *b.witness));
        CHECK(flow_to_json(g, *a.witness) == flow_to_json(g, *fn.witness));
    }
    CHECK(checked == 10);
}

TEST_CASE("budget exhaustion is reported, not misreported as a decision") {
    SignedGraph g = k4_graph();
    // K4 has no 3-flow; proving that takes more than a handful of nodes
    auto rep = exists_nzf(g, 3, FlowMode::Integer, 10);
    CHECK(rep.decision == Decision::BudgetExceeded);
    CHECK(rep.nodes >= 10);
    CHECK_THROWS_WITH_AS(flow_number(g, 8, 10), doctest::Contains("BudgetExceeded"), Error);
    // with no budget pressure the same search exhausts cleanly
    CHECK(exists_nzf(g, 3, FlowMode::Integer).decision == Decision::NotExists);
    CHECK(flow_number(g).phi == 4);
}

TEST_CASE("antibalanced 2-factor search on cubic graphs") {
    auto rep = antibalanced_2factor(k4_graph());
    CHECK(rep.exists);
    CHECK(rep.factor.size() == 4); // a 4-circuit complement of a perfect matching
    CHECK(rep.matchings >= 1);
    SignedGraph k4 = k4_graph();
    auto comps = k4.components(k4.ref(rep.factor));
    REQUIRE(comps.size() == 1);
    CHECK(k4.sign_product(comps[0].edges) == 1); // even circuit must be balanced

    CHECK_THROWS_WITH_AS(antibalanced_2factor(circuit_graph(5)), doctest::Contains("NotCubic"),
                         Error);
}

TEST_CASE("antibalanced 2-factor exists exactly when a modular 4-flow does") {
    testutil::Rng rng(808);
    int with = 0, without = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SignedGraph g = testutil::random_cubic(rng, testutil::rand_int(rng, 2, 4) * 2);
        auto rep = antibalanced_2factor(g);
        bool z4 = exists_nzf(g, 4, FlowMode::Modular).decision == Decision::Exists;
        CHECK(rep.exists == z4);
        if (rep.exists) {
            ++with;
            // witness really is an antibalanced 2-factor
            std::vector<int> deg(size_t(g.vertex_count()), 0);
            for (int id : rep.factor) {
                deg[size_t(g.edge(id).u)]++;
                deg[size_t(g.edge(id).v)]++;
            }
            for (int v = 0; v < g.vertex_count(); ++v) CHECK(deg[size_t(v)] == 2);
            for (const auto& c : g.components(g.ref(rep.factor)))
                CHECK(g.sign_product(c.edges) == (c.edges.size() % 2 == 0 ? 1 : -1));
        } else {
            ++without;
        }
    }
    CHECK(with > 5);
    CHECK(without > 5);
}
