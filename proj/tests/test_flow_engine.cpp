#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgf/flow.hpp"
#include "sgf/graph_json.hpp"
#include "test_util.hpp"

using namespace sgf;
using testutil::Rng;

namespace {

// Sample a connected graph together with an even edge set whose negative
// count is even; retries until found.
struct LiftInstance {
    SignedGraph g;
    std::vector<int> supp;
};

LiftInstance sample_lift_instance(Rng& rng, int n, int extra) {
    for (;;) {
        SignedGraph g = testutil::random_connected(rng, n, extra);
        std::vector<int> supp = testutil::random_even_subgraph(rng, g);
        if (supp.empty()) continue;
        if (g.sign_product(supp) < 0) continue;
        return {std::move(g), std::move(supp)};
    }
}

} // namespace

TEST_CASE("default orientation satisfies the coupling law") {
    Rng rng(7101);
    for (int trial = 0; trial < 50; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 7, 8);
        Orientation o = default_orientation(g);
        CHECK_NOTHROW(check_orientation(g, o));
        for (int id : g.edge_ids())
            CHECK(o.at(id, 0) * o.at(id, 1) == -g.edge(id).sign);
    }
    SignedGraph g(2);
    g.add_edge(0, 1, 1);
    Orientation bad = default_orientation(g);
    bad.tau[0] = {1, 1}; // violates the law on a positive edge
    CHECK_THROWS_AS(check_orientation(g, bad), Error);
}

TEST_CASE("verify_flow catches each violation kind") {
    SignedGraph g(3);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 0, 1);
    FlowAssignment fa = make_zero_flow(g, FlowMode::Integer, 2);
    // Cyclic unit flow around the positive triangle: edge 2 runs 2->0, which
    // is against its default direction 0->2, so its value is -1.
    fa.value = {1, 1, -1};
    auto res = verify_flow(g, fa);
    CHECK(res.valid_flow);
    CHECK(res.nowhere_zero);
    CHECK(res.violations.empty());

    FlowAssignment zero = make_zero_flow(g, FlowMode::Integer, 2);
    res = verify_flow(g, zero);
    CHECK(res.valid_flow);
    CHECK_FALSE(res.nowhere_zero);
    CHECK(res.violations.size() == 3);
    CHECK(res.violations[0].kind == "zero");

    FlowAssignment broken = fa;
    broken.value[1] = 2; // out of range for k=2, and breaks two boundaries
    res = verify_flow(g, broken);
    CHECK_FALSE(res.valid_flow);
    bool saw_range = false, saw_boundary = false;
    for (auto& v : res.violations) {
        saw_range |= v.kind == "range";
        saw_boundary |= v.kind == "boundary";
    }
    CHECK(saw_range);
    CHECK(saw_boundary);

    FlowAssignment skew = fa;
    skew.tau.tau[0] = {1, 1};
    CHECK_FALSE(verify_flow(g, skew).valid_flow);

    // Modular verification reduces boundaries mod k.
    SignedGraph neg(2);
    neg.add_edge(0, 1, -1);
    neg.add_edge(0, 1, -1);
    FlowAssignment mf = make_zero_flow(neg, FlowMode::Modular, 3);
    mf.value = {1, 2}; // boundary 1+2=3 == 0 mod 3 at both ends
    res = verify_flow(neg, mf);
    CHECK(res.valid_flow);
    CHECK(res.nowhere_zero);
}

TEST_CASE("two_nzf_on_even handles balanced-even supports") {
    Rng rng(7102);
    int built = 0;
    for (int trial = 0; trial < 200 && built < 60; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 7, 7);
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        if (even.empty()) continue;
        bool ok = true;
        for (auto& comp : g.components(g.ref(even)))
            if (g.sign_product(comp.edges) < 0) ok = false;
        if (!ok) continue;
        ++built;
        FlowAssignment fa = two_nzf_on_even(g, g.ref(even));
        CHECK(fa.mode == FlowMode::Integer);
        CHECK(fa.k == 2);
        auto res = verify_flow(g, fa);
        CHECK(res.valid_flow);
        for (int id : g.edge_ids()) {
            bool on = contains_id(even, id);
            CHECK(std::abs(fa.f(id)) == (on ? 1 : 0));
        }
    }
    CHECK(built == 60);

    // Odd negative count on a component is rejected.
    SignedGraph c3(3);
    c3.add_edge(0, 1, -1);
    c3.add_edge(1, 2, 1);
    c3.add_edge(2, 0, 1);
    CHECK_THROWS_WITH_AS(two_nzf_on_even(c3, c3.full_ref()),
                         doctest::Contains("TemplatePreconditionViolated"), Error);

    // Odd-degree sets are rejected.
    SignedGraph p2(3);
    p2.add_edge(0, 1, 1);
    p2.add_edge(1, 2, 1);
    CHECK_THROWS_WITH_AS(two_nzf_on_even(p2, p2.full_ref()), doctest::Contains("NotEven"), Error);
}

TEST_CASE("tour defects appear exactly on odd components") {
    Rng rng(7103);
    for (int trial = 0; trial < 60; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 7, 7);
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        if (even.empty()) continue;
        auto df = tour_flow_with_defects(g, g.ref(even), 2);
        // Defect bookkeeping must match the actual boundary vector.
        std::vector<long long> expect(size_t(g.vertex_count()), 0);
        for (auto& [v, d] : df.defects) expect[size_t(v)] += d;
        for (int v = 0; v < g.vertex_count(); ++v)
            CHECK(boundary(g, df.flow, v) == expect[size_t(v)]);
        size_t odd_comps = 0;
        for (auto& comp : g.components(g.ref(even)))
            if (g.sign_product(comp.edges) < 0) ++odd_comps;
        CHECK(df.defects.size() == odd_comps);
        for (auto& [v, d] : df.defects) {
            (void)v;
            CHECK(d == 4); // 2 * magnitude
        }
    }

    // Base vertex can be steered to any vertex of the component.
    SignedGraph c4(4);
    c4.add_edge(0, 1, -1);
    c4.add_edge(1, 2, 1);
    c4.add_edge(2, 3, 1);
    c4.add_edge(3, 0, 1);
    auto df = tour_flow_with_defects(c4, c4.full_ref(), 1, 2);
    REQUIRE(df.defects.size() == 1);
    CHECK(df.defects[0].first == 2);
    CHECK(boundary(c4, df.flow, 2) == 2);
}

TEST_CASE("combine adds flows in a shared orientation frame") {
    SignedGraph g(3);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(2, 0, 1);
    FlowAssignment f1 = make_zero_flow(g, FlowMode::Integer, 2);
    f1.value = {1, 1, -1};
    // Same circulation expressed in a different orientation for edge 0.
    FlowAssignment f2 = f1;
    f2.tau.tau[0] = {-1, 1};
    f2.value[0] = -1;

    FlowAssignment sum = combine(g, 1, f1, 1, f2);
    CHECK(sum.k == 3);
    CHECK(sum.value == std::vector<int>{2, 2, -2});
    CHECK(verify_flow(g, sum).valid_flow);

    FlowAssignment diff = combine(g, 2, f1, -1, f2);
    CHECK(diff.k == 4);
    CHECK(diff.value == std::vector<int>{1, 1, -1});
    CHECK(verify_flow(g, diff).nowhere_zero);

    FlowAssignment m1 = make_zero_flow(g, FlowMode::Modular, 3);
    m1.value = {1, 1, 2};
    CHECK(verify_flow(g, m1).valid_flow);
    FlowAssignment m2 = combine(g, 2, m1, 0, m1);
    CHECK(m2.k == 3);
    CHECK(m2.value == std::vector<int>{2, 2, 1});
    CHECK(verify_flow(g, m2).nowhere_zero);

    CHECK_THROWS_WITH_AS(combine(g, 1, f1, 1, m1), doctest::Contains("ModeMismatch"), Error);
    FlowAssignment m5 = make_zero_flow(g, FlowMode::Modular, 5);
    CHECK_THROWS_WITH_AS(combine(g, 1, m1, 1, m5), doctest::Contains("ModeMismatch"), Error);
}

TEST_CASE("switching transport preserves verification") {
    Rng rng(7104);
    int moved = 0;
    for (int trial = 0; trial < 120 && moved < 40; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 6, 6);
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        if (even.empty()) continue;
        bool ok = true;
        for (auto& comp : g.components(g.ref(even)))
            if (g.sign_product(comp.edges) < 0) ok = false;
        if (!ok) continue;
        ++moved;
        FlowAssignment fa = two_nzf_on_even(g, g.ref(even));
        std::vector<int> U;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (testutil::rand_int(rng, 0, 1)) U.push_back(v);
        SignedGraph h = g.switch_at(U);
        FlowAssignment moved_fa = transport_switching(fa, g, U);
        auto res = verify_flow(h, moved_fa);
        CHECK(res.valid_flow);
        for (int id : g.edge_ids()) CHECK(moved_fa.f(id) == fa.f(id));
    }
    CHECK(moved == 40);
}

TEST_CASE("z2 flow on even sets verifies modulo 2") {
    Rng rng(7105);
    for (int trial = 0; trial < 40; ++trial) {
        SignedGraph g = testutil::random_connected(rng, 6, 6);
        std::vector<int> even = testutil::random_even_subgraph(rng, g);
        FlowAssignment fa = z2_flow_on_even(g, g.ref(even));
        CHECK(verify_flow(g, fa).valid_flow);
    }
}

TEST_CASE("parity lift produces the lexicographically least 3-flow") {
    Rng rng(7106);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = sample_lift_instance(rng, 5, 3); // at most 7 edges: brute force is cheap
        FlowAssignment z2 = z2_flow_on_even(inst.g, inst.g.ref(inst.supp));
        FlowAssignment lifted = lift_z2_to_3flow(inst.g, z2);
        CHECK(lifted.mode == FlowMode::Integer);
        CHECK(lifted.k == 3);
        auto res = verify_flow(inst.g, lifted);
        CHECK(res.valid_flow);
        for (int id : inst.g.edge_ids()) {
            bool on = contains_id(inst.supp, id);
            if (on)
                CHECK(std::abs(lifted.f(id)) == 1);
            else
                CHECK((lifted.f(id) == 0 || std::abs(lifted.f(id)) == 2));
        }
        // Cross-check against the unpruned reference enumeration.
        std::vector<char> in_supp(size_t(inst.g.edge_slots()), 0);
        for (int id : inst.supp) in_supp[size_t(id)] = 1;
        std::vector<int> ref_value;
        REQUIRE(testutil::brute_lift_first(inst.g, in_supp, default_orientation(inst.g),
                                           ref_value));
        CHECK(lifted.value == ref_value);
    }
}

TEST_CASE("parity lift rejects bad inputs") {
    SignedGraph c3(3);
    c3.add_edge(0, 1, -1);
    c3.add_edge(1, 2, 1);
    c3.add_edge(2, 0, 1);
    FlowAssignment z2 = z2_flow_on_even(c3, c3.full_ref());
    CHECK_THROWS_WITH_AS(lift_z2_to_3flow(c3, z2), doctest::Contains("OddNegativeSupport"),
                         Error);

    SignedGraph two(6);
    for (int i = 0; i < 3; ++i) two.add_edge(i, (i + 1) % 3, 1);
    for (int i = 0; i < 3; ++i) two.add_edge(3 + i, 3 + (i + 1) % 3, 1);
    FlowAssignment z2b = z2_flow_on_even(two, two.ref({0, 1, 2}));
    CHECK_THROWS_WITH_AS(lift_z2_to_3flow(two, z2b), doctest::Contains("Disconnected"), Error);

    SignedGraph c4(4);
    for (int i = 0; i < 4; ++i) c4.add_edge(i, (i + 1) % 4, 1);
    FlowAssignment notz2 = make_zero_flow(c4, FlowMode::Modular, 3);
    CHECK_THROWS_WITH_AS(lift_z2_to_3flow(c4, notz2), doctest::Contains("ModeMismatch"), Error);
}

TEST_CASE("flow json round trip and graph binding") {
    SignedGraph g(4);
    for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4, i == 0 ? -1 : 1);
    std::vector<int> even = {0, 1, 2, 3};
    // one negative edge: use the defect-free modular representation instead
    FlowAssignment fa = z2_flow_on_even(g, g.ref(even));
    std::string s = flow_to_json(g, fa);
    FlowAssignment back = flow_from_json_text(g, s);
    CHECK(back.mode == fa.mode);
    CHECK(back.k == fa.k);
    CHECK(back.value == fa.value);
    CHECK(flow_to_json(g, back) == s);

    SignedGraph other = g.switch_at({0});
    CHECK_THROWS_WITH_AS(flow_from_json_text(other, s), doctest::Contains("BadWitness"), Error);
    CHECK_THROWS_WITH_AS(flow_from_json_text(g, "{}"), doctest::Contains("FormatError"), Error);
}
