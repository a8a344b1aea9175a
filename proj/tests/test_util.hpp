#pragma once

// Shared helpers for the unit-test binaries: small deterministic generators
// and independent brute-force reference implementations used to cross-check
// library results.

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/signed_graph.hpp"

namespace testutil {

using sgf::SignedGraph;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) { // inclusive bounds
    return int(rng() % uint64_t(hi - lo + 1)) + lo;
}

// Connected random multigraph: a random spanning tree plus `extra` random
// edges (parallels allowed, loops never), each edge negative with the given
// per-mille probability.
inline SignedGraph random_connected(Rng& rng, int n, int extra, int neg_permille = 400) {
    SignedGraph g(n);
    for (int v = 1; v < n; ++v) {
        int u = rand_int(rng, 0, v - 1);
        int s = rand_int(rng, 0, 999) < neg_permille ? -1 : 1;
        g.add_edge(u, v, s);
    }
    for (int i = 0; i < extra; ++i) {
        int u = rand_int(rng, 0, n - 1);
        int v = rand_int(rng, 0, n - 1);
        if (u == v) {
            --i;
            continue;
        }
        int s = rand_int(rng, 0, 999) < neg_permille ? -1 : 1;
        g.add_edge(u, v, s);
    }
    return g;
}

// Uniform-ish random member of the cycle space: XOR of fundamental circuits
// over a random subset of non-tree edges.
inline std::vector<int> random_even_subgraph(Rng& rng, const SignedGraph& g) {
    int n = g.vertex_count();
    std::vector<int> parent_edge(size_t(n), -1), parent(size_t(n), -1);
    std::vector<char> seen(size_t(n), 0);
    std::vector<int> tree;
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int id : g.incident(u)) {
            const auto& e = g.edge(id);
            int w = e.u == u ? e.v : e.u;
            if (!seen[size_t(w)]) {
                seen[size_t(w)] = 1;
                parent[size_t(w)] = u;
                parent_edge[size_t(w)] = id;
                tree.push_back(id);
                stack.push_back(w);
            }
        }
    }
    std::vector<char> in(size_t(g.edge_slots()), 0);
    auto toggle_path_to_root = [&](int x) {
        while (parent_edge[size_t(x)] >= 0) {
            in[size_t(parent_edge[size_t(x)])] ^= 1;
            x = parent[size_t(x)];
        }
    };
    for (int id : g.edge_ids()) {
        if (std::find(tree.begin(), tree.end(), id) != tree.end()) continue;
        if (rand_int(rng, 0, 1) == 0) continue;
        in[size_t(id)] ^= 1;
        toggle_path_to_root(g.edge(id).u);
        toggle_path_to_root(g.edge(id).v);
    }
    std::vector<int> out;
    for (int id : g.edge_ids())
        if (in[size_t(id)]) out.push_back(id);
    return out;
}

// Independent check that an edge set is a circuit of g: nonempty, connected,
// and every touched vertex has degree exactly 2 in the set.
inline bool is_circuit(const SignedGraph& g, const std::vector<int>& edges) {
    if (edges.empty()) return false;
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : edges) {
        deg[size_t(g.edge(id).u)]++;
        deg[size_t(g.edge(id).v)]++;
    }
    for (int d : deg)
        if (d != 0 && d != 2) return false;
    return g.components(g.ref(edges)).size() == 1;
}

// Brute-force reference for the parity-flow lift: enumerate assignments in
// ascending edge-id order with ascending value order and return the first
// full assignment whose boundary vanishes everywhere.  Exponential; only for
// tiny graphs.
inline bool brute_lift_first(const SignedGraph& g, const std::vector<char>& in_supp,
                             const sgf::Orientation& tau, std::vector<int>& value) {
    std::vector<int> order = g.edge_ids();
    value.assign(size_t(g.edge_slots()), 0);
    std::vector<long long> bnd(size_t(g.vertex_count()), 0);
    std::function<bool(size_t)> rec = [&](size_t idx) -> bool {
        if (idx == order.size()) {
            for (long long b : bnd)
                if (b != 0) return false;
            return true;
        }
        int id = order[idx];
        const auto& e = g.edge(id);
        static const int dom_supp[] = {-1, 1};
        static const int dom_off[] = {-2, 0, 2};
        const int* dom = in_supp[size_t(id)] ? dom_supp : dom_off;
        int dn = in_supp[size_t(id)] ? 2 : 3;
        for (int i = 0; i < dn; ++i) {
            value[size_t(id)] = dom[i];
            bnd[size_t(e.u)] += tau.at(id, 0) * dom[i];
            bnd[size_t(e.v)] += tau.at(id, 1) * dom[i];
            if (rec(idx + 1)) return true;
            bnd[size_t(e.u)] -= tau.at(id, 0) * dom[i];
            bnd[size_t(e.v)] -= tau.at(id, 1) * dom[i];
        }
        return false;
    };
    return rec(0);
}


// Unpruned reference decision for nowhere-zero k-flow existence: odometer
// over all live edges with full-domain values, verifying each complete
// assignment.  Only usable on very small graphs.
inline bool naive_exists_nzf(const sgf::SignedGraph& g, int k, sgf::FlowMode mode) {
    auto ids = g.edge_ids();
    std::vector<int> dom;
    if (mode == sgf::FlowMode::Integer)
        for (int v = 1; v < k; ++v) {
            dom.push_back(v);
            dom.push_back(-v);
        }
    else
        for (int v = 1; v < k; ++v) dom.push_back(v);
    if (ids.empty()) return true;
    sgf::FlowAssignment fa = sgf::make_zero_flow(g, mode, k);
    std::vector<size_t> idx(ids.size(), 0);
    for (;;) {
        for (size_t i = 0; i < ids.size(); ++i) fa.value[size_t(ids[i])] = dom[idx[i]];
        auto vr = sgf::verify_flow(g, fa);
        if (vr.valid_flow && vr.nowhere_zero) return true;
        size_t p = 0;
        while (p < idx.size() && ++idx[p] == dom.size()) idx[p++] = 0;
        if (p == idx.size()) return false;
    }
}

// Marks every edge that carries a nonzero value in some boundary-zero
// assignment with values in {-2..2}.  Since minimal flow supports realize
// with such values, an edge is marked iff it lies on a signed circuit, which
// gives an oracle-independent admissibility reference.
inline std::vector<char> flow_support_mask(const sgf::SignedGraph& g) {
    auto ids = g.edge_ids();
    auto tau = sgf::default_orientation(g);
    std::vector<long long> resid(size_t(g.vertex_count()), 0);
    std::vector<int> remaining(size_t(g.vertex_count()), 0);
    for (int id : ids) {
        remaining[size_t(g.edge(id).u)]++;
        remaining[size_t(g.edge(id).v)]++;
    }
    std::vector<char> covered(size_t(g.edge_slots()), 0);
    std::vector<int> val(ids.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == ids.size()) {
            for (size_t j = 0; j < ids.size(); ++j)
                if (val[j] != 0) covered[size_t(ids[j])] = 1;
            return;
        }
        int id = ids[i];
        const sgf::Edge& e = g.edge(id);
        for (int f = -2; f <= 2; ++f) {
            resid[size_t(e.u)] += tau.at(id, 0) * f;
            resid[size_t(e.v)] += tau.at(id, 1) * f;
            remaining[size_t(e.u)]--;
            remaining[size_t(e.v)]--;
            bool ok = (remaining[size_t(e.u)] > 0 || resid[size_t(e.u)] == 0) &&
                      (remaining[size_t(e.v)] > 0 || resid[size_t(e.v)] == 0);
            if (ok) {
                val[i] = f;
                rec(i + 1);
                val[i] = 0;
            }
            remaining[size_t(e.u)]++;
            remaining[size_t(e.v)]++;
            resid[size_t(e.u)] -= tau.at(id, 0) * f;
            resid[size_t(e.v)] -= tau.at(id, 1) * f;
        }
    };
    rec(0);
    return covered;
}

// Loop-free random cubic multigraph on n vertices (n even) via stub pairing;
// parallel edges are kept.
inline sgf::SignedGraph random_cubic(Rng& rng, int n, int neg_permille = 400) {
    for (;;) {
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < 3; ++j) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        bool loop = false;
        for (size_t i = 0; i < stubs.size() && !loop; i += 2)
            if (stubs[i] == stubs[i + 1]) loop = true;
        if (loop) continue;
        sgf::SignedGraph g(n);
        for (size_t i = 0; i < stubs.size(); i += 2)
            g.add_edge(stubs[i], stubs[i + 1], rand_int(rng, 1, 1000) <= neg_permille ? -1 : 1);
        return g;
    }
}

// Circuit on n vertices with negative signs at the listed positions.
inline sgf::SignedGraph circuit_graph(int n, const std::vector<int>& neg_positions = {}) {
    sgf::SignedGraph g(n);
    for (int i = 0; i < n; ++i) {
        bool neg = std::find(neg_positions.begin(), neg_positions.end(), i) != neg_positions.end();
        g.add_edge(i, (i + 1) % n, neg ? -1 : 1);
    }
    return g;
}

} // namespace testutil
