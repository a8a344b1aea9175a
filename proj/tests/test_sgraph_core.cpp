#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sgf/graph_json.hpp"
#include "sgf/sha256.hpp"
#include "sgf/signed_graph.hpp"
#include "test_util.hpp"

using namespace sgf;
using testutil::Rng;

namespace {

SignedGraph circuit_graph(int n, const std::vector<int>& neg_positions = {}) {
    SignedGraph g(n);
    for (int i = 0; i < n; ++i) {
        int s = std::find(neg_positions.begin(), neg_positions.end(), i) != neg_positions.end()
                    ? -1
                    : 1;
        g.add_edge(i, (i + 1) % n, s);
    }
    return g;
}

} // namespace

TEST_CASE("construction rejects loops and bad endpoints") {
    SignedGraph g(3);
    CHECK_THROWS_WITH_AS(g.add_edge(1, 1, 1), doctest::Contains("LoopRejected"), Error);
    CHECK_THROWS_AS(g.add_edge(0, 3, 1), Error);
    CHECK_THROWS_AS(g.add_edge(-1, 0, 1), Error);
    CHECK_THROWS_AS(g.add_edge(0, 1, 2), Error);
    CHECK(g.add_edge(0, 1, -1) == 0);
    CHECK(g.add_edge(0, 1, 1) == 1); // parallel edges fine
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(2) == 0);
    CHECK(g.negative_edges() == std::vector<int>{0});
}

TEST_CASE("switching negates exactly the cut and preserves circuit signs") {
    Rng rng(7001);
    for (int trial = 0; trial < 50; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 6, 6);
        std::vector<int> U;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (testutil::rand_int(rng, 0, 1)) U.push_back(v);
        SignedGraph h = g.switch_at(U);
        std::vector<int> cut = g.boundary_cut(U);
        for (int id : g.edge_ids()) {
            bool flipped = g.edge(id).sign != h.edge(id).sign;
            CHECK(flipped == contains_id(cut, id));
        }
        // Circuit signs are switching invariants.
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        if (!even.empty() && testutil::is_circuit(g, even))
            CHECK(g.sign_product(even) == h.sign_product(even));
    }
}

TEST_CASE("balance decision with verified witnesses") {
    Rng rng(7002);
    int balanced_seen = 0, unbalanced_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 6, 5, trial % 2 ? 300 : 0);
        auto r = g.is_balanced();
        if (r.balanced) {
            ++balanced_seen;
            SignedGraph pos = g.switch_at(r.switching_set);
            for (int id : pos.edge_ids()) CHECK(pos.edge(id).sign == 1);
        } else {
            ++unbalanced_seen;
            CHECK(testutil::is_circuit(g, r.unbalanced_circuit));
            CHECK(g.sign_product(r.unbalanced_circuit) == -1);
        }
    }
    CHECK(balanced_seen > 20);
    CHECK(unbalanced_seen > 20);
}

TEST_CASE("balanced circuit iff positive sign product") {
    SignedGraph c5 = circuit_graph(5, {2});
    CHECK_FALSE(c5.is_balanced().balanced);
    SignedGraph c5b = circuit_graph(5, {1, 3});
    CHECK(c5b.is_balanced().balanced);
}

TEST_CASE("split keeps edge ids and moves incidence") {
    SignedGraph g(3);
    int a = g.add_edge(0, 1, 1);
    int b = g.add_edge(0, 2, -1);
    int c = g.add_edge(0, 1, 1);
    auto r = g.split_vertex(0, {a, c});
    CHECK(r.new_vertex == 3);
    CHECK(r.graph.vertex_count() == 4);
    CHECK(r.graph.degree(0) == 1);
    CHECK(r.graph.degree(3) == 2);
    CHECK(r.graph.edge(a).sign == 1);
    CHECK(r.graph.edge(b).u == 0);
    CHECK_THROWS_AS(g.split_vertex(0, {99}), Error);
    SignedGraph g2(2);
    int d = g2.add_edge(0, 1, 1);
    CHECK_THROWS_WITH_AS(g2.split_vertex(1, {d, 5}), doctest::Contains("BadEdgeIds"), Error);
}

TEST_CASE("contraction identifies components and drops new loops") {
    // Path 0-1-2 contracted on both path edges collapses to one vertex; a
    // parallel edge between 0 and 2 becomes a loop and is removed.
    SignedGraph g(4);
    int p0 = g.add_edge(0, 1, 1);
    int p1 = g.add_edge(1, 2, 1);
    int q = g.add_edge(0, 2, -1);
    int out = g.add_edge(2, 3, -1);
    auto r = g.contract_edges({p0, p1});
    CHECK(r.graph.vertex_count() == 2);
    CHECK(r.removed_loops == std::vector<int>{q});
    CHECK(r.vertex_map[0] == 0);
    CHECK(r.vertex_map[1] == 0);
    CHECK(r.vertex_map[2] == 0);
    CHECK(r.vertex_map[3] == 1);
    CHECK(r.graph.edge_alive(out));
    CHECK(r.graph.edge(out).sign == -1);
    CHECK_FALSE(r.graph.edge_alive(p0));
}

TEST_CASE("euler tour is a closed spanning walk, deterministic") {
    Rng rng(7003);
    int toured = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 6, 6);
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        if (even.empty()) continue;
        auto ref = g.ref(even);
        if (g.components(ref).size() != 1) continue;
        ++toured;
        auto tour = g.euler_tour(ref);
        REQUIRE(tour.size() == even.size());
        std::set<int> used;
        for (size_t i = 0; i < tour.size(); ++i) {
            used.insert(tour[i].edge);
            const Edge& e = g.edge(tour[i].edge);
            CHECK(((tour[i].from == e.u && tour[i].to == e.v) ||
                   (tour[i].from == e.v && tour[i].to == e.u)));
            CHECK(tour[i].to == tour[(i + 1) % tour.size()].from);
        }
        CHECK(used.size() == even.size());
        auto tour2 = g.euler_tour(ref);
        for (size_t i = 0; i < tour.size(); ++i) {
            CHECK(tour[i].edge == tour2[i].edge);
            CHECK(tour[i].from == tour2[i].from);
        }
    }
    CHECK(toured > 30);

    SignedGraph path(3);
    path.add_edge(0, 1, 1);
    path.add_edge(1, 2, 1);
    CHECK_THROWS_WITH_AS(path.euler_tour(path.full_ref()), doctest::Contains("NotEulerian"),
                         Error);
}

TEST_CASE("components and refs") {
    SignedGraph g(5);
    int a = g.add_edge(0, 1, 1);
    int b = g.add_edge(1, 2, -1);
    int c = g.add_edge(3, 4, 1);
    auto comps = g.components(g.full_ref());
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].edges == std::vector<int>{a, b});
    CHECK(comps[1].edges == std::vector<int>{c});
    CHECK_FALSE(g.connected());
    CHECK(g.vertex_components().size() == 2);

    // spanning ref keeps the isolated-vertex component visible
    SignedGraph h(3);
    h.add_edge(0, 1, 1);
    CHECK(h.components(h.ref({0})).size() == 1);
    CHECK(h.components(h.ref({0}, true)).size() == 2);

    SignedGraph other(5);
    other.add_edge(0, 1, 1);
    CHECK_THROWS_WITH_AS(other.check_ref(g.full_ref()), doctest::Contains("MixedParents"), Error);
}

TEST_CASE("restriction and deletion keep ids stable") {
    SignedGraph g(4);
    int a = g.add_edge(0, 1, 1);
    int b = g.add_edge(1, 2, -1);
    int c = g.add_edge(2, 3, 1);
    SignedGraph r = g.restriction({b, c});
    CHECK_FALSE(r.edge_alive(a));
    CHECK(r.edge(b).sign == -1);
    CHECK(r.edge(c).v == 3);
    SignedGraph d = g.delete_edges({b});
    CHECK_FALSE(d.edge_alive(b));
    CHECK(d.edge_count() == 2);
    CHECK_THROWS_AS(d.delete_edges({b}), Error);
    CHECK(d.digest() != g.digest());
}

TEST_CASE("symmetric difference of even sets is even") {
    Rng rng(7004);
    for (int trial = 0; trial < 50; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 7, 7);
        auto ea = testutil::random_even_subgraph(rng, g);
        auto eb = testutil::random_even_subgraph(rng, g);
        auto d = symmetric_difference(g, g.ref(ea), g.ref(eb));
        std::vector<int> deg(size_t(g.vertex_count()), 0);
        for (int id : d) {
            deg[size_t(g.edge(id).u)]++;
            deg[size_t(g.edge(id).v)]++;
        }
        for (int x : deg) CHECK(x % 2 == 0);
    }
}

TEST_CASE("json round trip and canonical bytes") {
    SignedGraph g(4);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, -1);
    g.add_edge(2, 3, 1);
    g.add_edge(3, 0, -1);
    std::string s1 = canonical_graph_json(g);
    SignedGraph h = graph_from_json_text(s1);
    CHECK(h.same_structure(g));
    CHECK(canonical_graph_json(h) == s1);
    CHECK(graph_sha(g) == graph_sha(h));

    SignedGraph flipped = g.switch_at({0});
    CHECK(graph_sha(flipped) != graph_sha(g));

    CHECK_THROWS_WITH_AS(graph_from_json_text("{\"vertices\": 2, \"edges\": [{\"id\": 1, "
                                              "\"u\": 0, \"v\": 1, \"sign\": 1}]}"),
                         doctest::Contains("BadEdgeIds"), Error);
    CHECK_THROWS_WITH_AS(graph_from_json_text("not json"), doctest::Contains("FormatError"),
                         Error);

    // compact copy drops dead slots and reports the id mapping
    SignedGraph del = g.delete_edges({1});
    auto cc = compact_copy(del);
    CHECK(cc.graph.edge_count() == 3);
    CHECK(cc.edge_map[0] == 0);
    CHECK(cc.edge_map[1] == -1);
    CHECK(cc.edge_map[2] == 1);
    CHECK(cc.edge_map[3] == 2);
    CHECK(cc.graph.edge(1).u == 2);
}

TEST_CASE("sha256 reference vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}
