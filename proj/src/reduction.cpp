#include "sgf/reduction.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "sgf/admissible.hpp"
#include "sgf/errors.hpp"

namespace sgf {

namespace {

bool is_even_edge_set(const SignedGraph& g, const std::vector<int>& edges) {
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : edges) {
        const auto& e = g.edge(id);
        ++deg[size_t(e.u)];
        ++deg[size_t(e.v)];
    }
    for (int d : deg)
        if (d % 2 != 0) return false;
    return true;
}

// Vertex components of the spanning subgraph with the given edges: every
// vertex of g lands in exactly one row, rows ordered by smallest vertex,
// vertices and edges ascending.  A vertex without incident edges forms a
// singleton row with an empty edge list.
struct VertexComponent {
    std::vector<int> vertices;
    std::vector<int> edges;
};

std::vector<VertexComponent> spanning_components(const SignedGraph& g,
                                                 const std::vector<int>& edges) {
    const int n = g.vertex_count();
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
    for (int id : edges) {
        const auto& e = g.edge(id);
        adj[size_t(e.u)].push_back({id, e.v});
        adj[size_t(e.v)].push_back({id, e.u});
    }
    std::vector<char> seen(size_t(n), 0);
    std::vector<VertexComponent> out;
    for (int s = 0; s < n; ++s) {
        if (seen[size_t(s)]) continue;
        VertexComponent comp;
        std::set<int> comp_edges;
        std::queue<int> q;
        q.push(s);
        seen[size_t(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            comp.vertices.push_back(u);
            for (auto [id, w] : adj[size_t(u)]) {
                comp_edges.insert(id);
                if (!seen[size_t(w)]) {
                    seen[size_t(w)] = 1;
                    q.push(w);
                }
            }
        }
        std::sort(comp.vertices.begin(), comp.vertices.end());
        comp.edges.assign(comp_edges.begin(), comp_edges.end());
        out.push_back(std::move(comp));
    }
    return out;
}

// First spanning connected even subgraph in ascending binary order over
// subsets of non-tree edges (bit i = i-th chord by ascending id).
SubgraphRef find_spanning_even(const SignedGraph& g) {
    const int n = g.vertex_count();
    if (n <= 1) return g.ref({}, true);
    if (!g.connected())
        throw Error(errc::not_supereulerian, "graph is not connected");

    // BFS spanning tree over ascending edge ids.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
    for (int id : g.edge_ids()) {
        const auto& e = g.edge(id);
        adj[size_t(e.u)].push_back({id, e.v});
        adj[size_t(e.v)].push_back({id, e.u});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<int> parent_edge(size_t(n), -1);
    std::vector<char> in_tree_edge(size_t(g.edge_slots()), 0);
    {
        std::vector<char> seen(size_t(n), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [id, w] : adj[size_t(u)]) {
                if (seen[size_t(w)]) continue;
                seen[size_t(w)] = 1;
                parent_edge[size_t(w)] = id;
                in_tree_edge[size_t(id)] = 1;
                q.push(w);
            }
        }
    }
    std::vector<int> chords;
    for (int id : g.edge_ids())
        if (!in_tree_edge[size_t(id)]) chords.push_back(id);
    if (chords.size() >= 63)
        throw Error(errc::budget_exceeded,
                    "cycle space too large to enumerate (" + std::to_string(chords.size()) +
                        " chords)");

    // Fundamental tree cycle of each chord, as a parity mask over edge ids.
    std::vector<int> depth(size_t(n), 0);
    std::vector<int> up(size_t(n), -1);
    for (int v = 0; v < n; ++v) {
        if (parent_edge[size_t(v)] < 0) continue;
        const auto& e = g.edge(parent_edge[size_t(v)]);
        up[size_t(v)] = e.u == v ? e.v : e.u;
    }
    // Depths via repeated relaxation are fine at these sizes; compute by
    // walking to the root with memoization instead.
    std::vector<int> order;
    {
        std::vector<char> done(size_t(n), 0);
        done[0] = 1;
        for (int v = 0; v < n; ++v) {
            std::vector<int> stack;
            int x = v;
            while (!done[size_t(x)]) {
                stack.push_back(x);
                x = up[size_t(x)];
            }
            while (!stack.empty()) {
                int y = stack.back();
                stack.pop_back();
                depth[size_t(y)] = depth[size_t(up[size_t(y)])] + 1;
                done[size_t(y)] = 1;
            }
        }
    }
    std::vector<std::vector<int>> cyc(chords.size());
    for (size_t ci = 0; ci < chords.size(); ++ci) {
        const auto& e = g.edge(chords[ci]);
        int a = e.u, b = e.v;
        std::vector<int> path{chords[ci]};
        while (a != b) {
            if (depth[size_t(a)] < depth[size_t(b)]) std::swap(a, b);
            path.push_back(parent_edge[size_t(a)]);
            a = up[size_t(a)];
        }
        cyc[ci] = std::move(path);
    }

    std::vector<char> parity(size_t(g.edge_slots()), 0);
    for (unsigned long long mask = 0; mask < (1ULL << chords.size()); ++mask) {
        std::fill(parity.begin(), parity.end(), 0);
        for (size_t ci = 0; ci < chords.size(); ++ci)
            if (mask & (1ULL << ci))
                for (int id : cyc[ci]) parity[size_t(id)] ^= 1;
        std::vector<int> sel;
        for (int id : g.edge_ids())
            if (parity[size_t(id)]) sel.push_back(id);
        if (sel.empty()) continue;
        SubgraphRef r = g.ref(sel, true);
        if (g.components(r).size() == 1) return r;
    }
    throw Error(errc::not_supereulerian, "no spanning connected even subgraph exists");
}

// Shortest path between the endpoints of `eid` inside the connected edge set
// h1 (which must not contain eid): BFS distances from one endpoint, then a
// backwalk that always takes the smallest usable edge id.
std::vector<int> shortest_h1_path(const SignedGraph& g,
                                  const std::vector<std::vector<std::pair<int, int>>>& h1_adj,
                                  int eid) {
    const auto& e = g.edge(eid);
    const int n = g.vertex_count();
    std::vector<int> dist(size_t(n), -1);
    std::queue<int> q;
    dist[size_t(e.u)] = 0;
    q.push(e.u);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [id, w] : h1_adj[size_t(u)]) {
            (void)id;
            if (dist[size_t(w)] < 0) {
                dist[size_t(w)] = dist[size_t(u)] + 1;
                q.push(w);
            }
        }
    }
    if (dist[size_t(e.v)] < 0)
        throw Error(errc::internal, "fundamental circuit endpoints are disconnected");
    std::vector<int> path;
    int x = e.v;
    while (x != e.u) {
        int best_id = -1, best_to = -1;
        for (auto [id, w] : h1_adj[size_t(x)]) {
            if (dist[size_t(w)] == dist[size_t(x)] - 1 && (best_id < 0 || id < best_id)) {
                best_id = id;
                best_to = w;
            }
        }
        path.push_back(best_id);
        x = best_to;
    }
    return path;
}

void assert_mod4_nzf(const SignedGraph& g, const FlowAssignment& fa) {
    VerifyResult vr = verify_flow(g, fa);
    if (!vr.valid_flow || !vr.nowhere_zero)
        throw Error(errc::internal, "constructed mod-4 flow failed verification");
}

} // namespace

void check_covering_pair(const SignedGraph& g, const CoveringPair& pair) {
    auto fail = [](const std::string& why) -> void { throw Error(errc::invalid_pair, why); };
    const SubgraphRef* refs[2] = {&pair.h1, &pair.h2};
    for (int i = 0; i < 2; ++i) {
        const char* name = i == 0 ? "first" : "second";
        try {
            g.check_ref(*refs[i]);
        } catch (const Error& e) {
            fail(std::string(name) + " subgraph ref rejected: " + e.what());
        }
        if (!refs[i]->spanning) fail(std::string(name) + " subgraph is not marked spanning");
        if (!is_even_edge_set(g, refs[i]->edges))
            fail(std::string(name) + " subgraph is not even");
    }
    std::vector<char> covered(size_t(g.edge_slots()), 0);
    for (int id : pair.h1.edges) covered[size_t(id)] = 1;
    for (int id : pair.h2.edges) covered[size_t(id)] = 1;
    for (int id : g.edge_ids())
        if (!covered[size_t(id)])
            fail("edge " + std::to_string(id) + " lies outside both supports");

    auto check_witness = [&](const FlowAssignment& f, const std::vector<int>& support,
                             const char* name) {
        if (f.mode != FlowMode::Modular || f.k != 2)
            fail(std::string(name) + " witness is not a mod-2 flow");
        VerifyResult vr;
        try {
            vr = verify_flow(g, f);
        } catch (const Error& e) {
            fail(std::string(name) + " witness rejected: " + e.what());
        }
        if (!vr.valid_flow) fail(std::string(name) + " witness does not verify");
        std::vector<int> supp;
        for (int id : g.edge_ids())
            if (f.f(id) != 0) supp.push_back(id);
        if (supp != support)
            fail(std::string(name) + " witness support differs from the edge set");
    };
    check_witness(pair.f1, pair.h1.edges, "first");
    check_witness(pair.f2, pair.h2.edges, "second");
}

CoveringPair covering_pair_supereulerian(const SignedGraph& g,
                                         const std::optional<SubgraphRef>& h1_opt) {
    const int n = g.vertex_count();
    SubgraphRef h1;
    if (h1_opt) {
        try {
            g.check_ref(*h1_opt);
        } catch (const Error& e) {
            throw Error(errc::bad_witness, std::string("subgraph ref rejected: ") + e.what());
        }
        if (!is_even_edge_set(g, h1_opt->edges))
            throw Error(errc::bad_witness, "witness subgraph is not even");
        h1 = g.ref(h1_opt->edges, true);
        if (n > 0 && g.components(h1).size() != 1)
            throw Error(errc::bad_witness, "witness subgraph is not spanning connected");
    } else {
        h1 = find_spanning_even(g);
    }

    std::vector<char> in_h1(size_t(g.edge_slots()), 0);
    for (int id : h1.edges) in_h1[size_t(id)] = 1;
    std::vector<std::vector<std::pair<int, int>>> h1_adj(static_cast<size_t>(n));
    for (int id : h1.edges) {
        const auto& e = g.edge(id);
        h1_adj[size_t(e.u)].push_back({id, e.v});
        h1_adj[size_t(e.v)].push_back({id, e.u});
    }

    std::vector<char> parity(size_t(g.edge_slots()), 0);
    for (int id : g.edge_ids()) {
        if (in_h1[size_t(id)]) continue;
        parity[size_t(id)] ^= 1;
        for (int pe : shortest_h1_path(g, h1_adj, id)) parity[size_t(pe)] ^= 1;
    }
    std::vector<int> h2_edges;
    for (int id : g.edge_ids())
        if (parity[size_t(id)]) h2_edges.push_back(id);
    SubgraphRef h2 = g.ref(h2_edges, true);

    CoveringPair pair;
    pair.h1 = h1;
    pair.h2 = h2;
    pair.f1 = z2_flow_on_even(g, pair.h1);
    pair.f2 = z2_flow_on_even(g, pair.h2);
    check_covering_pair(g, pair);
    return pair;
}

ReductionResult three_regularize(const SignedGraph& g, const CoveringPair& pair) {
    check_covering_pair(g, pair);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == 0)
            throw Error(errc::invalid_pair,
                        "vertex " + std::to_string(v) + " has degree zero");

    ReductionResult out;
    std::vector<std::string>& events = out.trace.events;
    std::vector<int> s_edges;
    std::vector<int> j_all;

    SignedGraph cur = g;
    auto comps = spanning_components(g, pair.h1.edges);

    for (size_t ci = 0; ci < comps.size(); ++ci) {
        const auto& comp = comps[ci];
        std::vector<int> comp_vertices = comp.vertices;
        // Tour pair at each vertex of the component circuit: the edge kept
        // on the incoming side stays put under blow-up, the outgoing one
        // moves to the adjacent circuit vertex.
        std::map<int, std::pair<int, int>> tour_pair;

        if (!comp.edges.empty()) {
            auto steps = g.euler_tour(g.ref(comp.edges, false));
            const int m = int(steps.size());
            events.push_back("component " + std::to_string(ci) + ": tour of " +
                             std::to_string(m) + " edges from vertex " +
                             std::to_string(steps[0].from));
            std::map<int, int> ideg;
            for (int id : comp.edges) {
                ++ideg[g.edge(id).u];
                ++ideg[g.edge(id).v];
            }
            auto in_edge = [&](int x) { return steps[size_t((x + m - 1) % m)].edge; };
            auto out_edge = [&](int x) { return steps[size_t(x)].edge; };
            std::map<int, std::vector<int>> cluster;
            for (int v : comp.vertices) cluster[v] = {v};
            std::vector<char> split_here(size_t(m), 0);
            for (int x = 2; x < m; ++x) {
                int v = steps[size_t(x)].from;
                if (ideg[v] <= 2) continue;
                SplitResult sr = cur.split_vertex(v, {in_edge(x), out_edge(x)});
                int fresh = sr.new_vertex;
                cur = std::move(sr.graph);
                ideg[v] -= 2;
                split_here[size_t(x)] = 1;
                cluster[v].push_back(fresh);
                tour_pair[fresh] = {in_edge(x), out_edge(x)};
                comp_vertices.push_back(fresh);
                events.push_back("split tour visit " + std::to_string(x) + " of vertex " +
                                 std::to_string(v) + " onto vertex " + std::to_string(fresh));
            }
            for (int x = 0; x < m; ++x) {
                int v = steps[size_t(x)].from;
                if (!split_here[size_t(x)] && !tour_pair.count(v))
                    tour_pair[v] = {in_edge(x), out_edge(x)};
            }
            // Reconnect each split cluster with all-positive edges: a digon
            // for two vertices, a complete graph beyond that.
            for (int v : comp.vertices) {
                const auto& c = cluster[v];
                int l = int(c.size()) - 1;
                if (l == 1) {
                    s_edges.push_back(cur.add_edge(c[0], c[1], +1));
                    s_edges.push_back(cur.add_edge(c[0], c[1], +1));
                    events.push_back("digon across the split cluster of vertex " +
                                     std::to_string(v));
                } else if (l > 1) {
                    for (size_t i = 0; i < c.size(); ++i)
                        for (size_t j = i + 1; j < c.size(); ++j)
                            s_edges.push_back(cur.add_edge(c[i], c[j], +1));
                    events.push_back("complete graph on the " + std::to_string(l + 1) +
                                     "-vertex split cluster of vertex " + std::to_string(v));
                }
            }
        }

        // Blow every vertex that is not yet cubic up into an all-positive
        // circuit of length equal to its degree.
        std::vector<int> snapshot = comp_vertices;
        std::sort(snapshot.begin(), snapshot.end());
        std::vector<int> comp_j = comp.edges;
        for (int b : snapshot) {
            int d = cur.degree(b);
            if (d == 3) continue;
            std::vector<int> inc = cur.incident(b);
            bool on_tour = tour_pair.count(b) != 0;
            std::vector<int> attach;
            if (on_tour) {
                auto [ine, oute] = tour_pair[b];
                attach.push_back(oute);
                for (int id : inc)
                    if (id != ine && id != oute) attach.push_back(id);
            } else {
                for (size_t i = 1; i < inc.size(); ++i) attach.push_back(inc[i]);
            }
            std::vector<int> circ{b};
            for (int f : attach) {
                SplitResult sr = cur.split_vertex(b, {f});
                circ.push_back(sr.new_vertex);
                cur = std::move(sr.graph);
            }
            for (int i = 0; i < d; ++i) {
                int id = cur.add_edge(circ[size_t(i)], circ[size_t((i + 1) % d)], +1);
                s_edges.push_back(id);
                // On tour vertices the first circuit edge is the one the new
                // circuit skips; an isolated-in-h1 vertex contributes its
                // whole blow-up circuit.
                if (!on_tour || i > 0) comp_j.push_back(id);
            }
            events.push_back("blow up vertex " + std::to_string(b) + " of degree " +
                             std::to_string(d) + " into an all-positive circuit");
        }
        std::sort(comp_j.begin(), comp_j.end());
        out.bijection.push_back(ComponentImage{comp.vertices, comp.edges, comp_j});
        j_all.insert(j_all.end(), comp_j.begin(), comp_j.end());
    }

    out.g_prime = std::move(cur);
    out.s_edges = std::move(s_edges);
    out.j = out.g_prime.ref(j_all, true);
    return out;
}

ReductionCheck verify_reduction(const SignedGraph& g, const ReductionResult& r) {
    ReductionCheck out;
    auto bad = [&](const std::string& s) { out.violations.push_back(s); };
    const SignedGraph& gp = r.g_prime;

    for (int v = 0; v < gp.vertex_count(); ++v)
        if (gp.degree(v) != 3) {
            bad("vertex " + std::to_string(v) + " has degree " + std::to_string(gp.degree(v)));
            break;
        }

    std::set<int> sset(r.s_edges.begin(), r.s_edges.end());
    bool s_alive = true;
    for (int id : r.s_edges)
        if (!gp.edge_alive(id)) {
            bad("added edge " + std::to_string(id) + " is not a live edge");
            s_alive = false;
            break;
        }
    if (s_alive) {
        for (int id : r.s_edges)
            if (gp.edge(id).sign != +1) {
                bad("added edge " + std::to_string(id) + " is negative");
                break;
            }
    }
    for (int id : g.edge_ids()) {
        if (!gp.edge_alive(id)) {
            bad("original edge " + std::to_string(id) + " is missing");
            break;
        }
        if (sset.count(id)) {
            bad("added set contains original edge " + std::to_string(id));
            break;
        }
        if (gp.edge(id).sign != g.edge(id).sign) {
            bad("original edge " + std::to_string(id) + " changed sign");
            break;
        }
    }
    for (int id : gp.edge_ids())
        if (!sset.count(id) && !g.edge_alive(id)) {
            bad("edge " + std::to_string(id) + " is neither original nor listed as added");
            break;
        }

    bool j_regular = false;
    try {
        gp.check_ref(r.j);
        std::vector<int> jdeg(size_t(gp.vertex_count()), 0);
        for (int id : r.j.edges) {
            ++jdeg[size_t(gp.edge(id).u)];
            ++jdeg[size_t(gp.edge(id).v)];
        }
        j_regular = true;
        for (int v = 0; v < gp.vertex_count(); ++v)
            if (jdeg[size_t(v)] != 2) {
                bad("j degree at vertex " + std::to_string(v) + " is " +
                    std::to_string(jdeg[size_t(v)]));
                j_regular = false;
                break;
            }
    } catch (const Error& e) {
        bad(std::string("j ref rejected: ") + e.what());
    }

    if (j_regular) {
        auto jcomps = gp.components(r.j);
        std::map<std::vector<int>, int> uses;
        for (const auto& c : jcomps) {
            if (c.edges.size() % 2 != 0)
                bad("a j component has odd length " + std::to_string(c.edges.size()));
            uses[c.edges] = 0;
        }
        for (size_t i = 0; i < r.bijection.size(); ++i) {
            const auto& entry = r.bijection[i];
            std::vector<int> je = entry.j_edges;
            std::sort(je.begin(), je.end());
            auto it = uses.find(je);
            if (it == uses.end()) {
                bad("bijection entry " + std::to_string(i) + " does not name a j component");
                continue;
            }
            ++it->second;
            bool edges_ok = true;
            for (int id : entry.h1_edges)
                if (!g.edge_alive(id)) {
                    bad("bijection entry " + std::to_string(i) + " lists a dead input edge");
                    edges_ok = false;
                    break;
                }
            if (edges_ok && g.sign_product(entry.h1_edges) != gp.sign_product(je))
                bad("sign mismatch at bijection entry " + std::to_string(i));
        }
        for (const auto& [edges, count] : uses)
            if (count != 1) {
                bad("a j component is matched " + std::to_string(count) + " times");
                break;
            }
        // The listed input components must partition the vertices of g.
        std::vector<int> owner(size_t(g.vertex_count()), -1);
        bool part_ok = true;
        for (size_t i = 0; i < r.bijection.size() && part_ok; ++i)
            for (int v : r.bijection[i].h1_vertices) {
                if (v < 0 || v >= g.vertex_count() || owner[size_t(v)] != -1) {
                    bad("input components do not partition the vertex set");
                    part_ok = false;
                    break;
                }
                owner[size_t(v)] = int(i);
            }
        if (part_ok)
            for (int v = 0; v < g.vertex_count(); ++v)
                if (owner[size_t(v)] == -1) {
                    bad("vertex " + std::to_string(v) + " is in no input component");
                    break;
                }
    }

    try {
        ContractionResult c = gp.contract_edges(r.s_edges);
        if (!c.removed_loops.empty())
            bad("contraction removed " + std::to_string(c.removed_loops.size()) + " loops");
        else if (c.graph.vertex_count() != g.vertex_count())
            bad("contraction has " + std::to_string(c.graph.vertex_count()) +
                " vertices, expected " + std::to_string(g.vertex_count()));
        else {
            bool same = true;
            for (int id = 0; id < std::max(g.edge_slots(), c.graph.edge_slots()) && same;
                 ++id) {
                bool ga = g.edge_alive(id), ca = c.graph.edge_alive(id);
                if (ga != ca) {
                    bad("contraction disagrees on edge " + std::to_string(id));
                    same = false;
                    break;
                }
                if (!ga) continue;
                const auto& a = g.edge(id);
                const auto& b = c.graph.edge(id);
                int mu = c.vertex_map[size_t(gp.edge(id).u)];
                int mv = c.vertex_map[size_t(gp.edge(id).v)];
                if (a.sign != b.sign || std::minmax(a.u, a.v) != std::minmax(mu, mv) ||
                    std::minmax(b.u, b.v) != std::minmax(mu, mv)) {
                    bad("contracted edge " + std::to_string(id) + " differs from the input");
                    same = false;
                }
            }
        }
    } catch (const Error& e) {
        bad(std::string("contraction failed: ") + e.what());
    }

    try {
        if (is_flow_admissible(g).admissible && !is_flow_admissible(gp).admissible)
            bad("flow-admissibility was lost");
    } catch (const Error& e) {
        bad(std::string("admissibility check failed: ") + e.what());
    }

    out.ok = out.violations.empty();
    return out;
}

FlowAssignment z4_nzf_from_even_eulerian(const SignedGraph& g, const SubgraphRef& h) {
    const int n = g.vertex_count();
    try {
        g.check_ref(h);
    } catch (const Error& e) {
        throw Error(errc::not_even_eulerian, std::string("subgraph ref rejected: ") + e.what());
    }
    if (!is_even_edge_set(g, h.edges))
        throw Error(errc::not_even_eulerian, "subgraph is not even");
    if (n == 0) return make_zero_flow(g, FlowMode::Modular, 4);
    SubgraphRef hs = g.ref(h.edges, true);
    if (g.components(hs).size() != 1)
        throw Error(errc::not_even_eulerian, "subgraph is not spanning connected");
    int negs = 0;
    for (int id : h.edges)
        if (g.edge(id).sign < 0) ++negs;
    if (negs % 2 != 0)
        throw Error(errc::not_even_eulerian, "odd number of negative edges");

    if (g.edge_count() == 0) return make_zero_flow(g, FlowMode::Modular, 4);

    bool two_regular = true;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) != 2) {
            two_regular = false;
            break;
        }
    if (two_regular) {
        // The graph is its own even circuit: reuse the +-1 tour flow mod 4.
        FlowAssignment t = two_nzf_on_even(g, g.full_ref());
        FlowAssignment out = make_zero_flow(g, FlowMode::Modular, 4);
        out.tau = t.tau;
        for (int id : g.edge_ids()) out.value[size_t(id)] = t.f(id) == 1 ? 1 : 3;
        assert_mod4_nzf(g, out);
        return out;
    }

    CoveringPair pair = covering_pair_supereulerian(g, hs);
    ReductionResult red = three_regularize(g, pair);
    const SignedGraph& gp = red.g_prime;

    // The 2-factor is a single even circuit with positive sign: switch it
    // all-positive.
    SignedGraph jg = gp.restriction(red.j.edges);
    auto bal = jg.is_balanced();
    if (!bal.balanced)
        throw Error(errc::internal, "image circuit is not balanced");
    SignedGraph g2 = gp.switch_at(bal.switching_set);

    FlowAssignment fa = make_zero_flow(g2, FlowMode::Modular, 4);
    std::vector<char> in_j(size_t(g2.edge_slots()), 0);
    for (int id : red.j.edges) in_j[size_t(id)] = 1;
    for (int id : g2.edge_ids())
        if (!in_j[size_t(id)]) fa.value[size_t(id)] = 2;

    // Around the circuit, pick values in {1,3} so that the two tau-weighted
    // circuit contributions at every vertex agree; together with the 2 from
    // the matching edge the boundary vanishes mod 4.
    auto steps = g2.euler_tour(g2.ref(red.j.edges, false));
    auto tau_at = [&](int eid, int v) {
        return g2.edge(eid).u == v ? fa.tau.at(eid, 0) : fa.tau.at(eid, 1);
    };
    int eff_needed = 1;
    for (size_t i = 0; i < steps.size(); ++i) {
        int e = steps[i].edge;
        int tf = tau_at(e, steps[i].from);
        int f = i == 0 ? 1 : (tf == 1 ? eff_needed : 4 - eff_needed);
        fa.value[size_t(e)] = f;
        int tt = tau_at(e, steps[i].to);
        eff_needed = ((tt * f) % 4 + 4) % 4;
    }
    assert_mod4_nzf(g2, fa);

    FlowAssignment on_gp = transport_switching(fa, g2, bal.switching_set);
    assert_mod4_nzf(gp, on_gp);

    FlowAssignment out = make_zero_flow(g, FlowMode::Modular, 4);
    for (int id : g.edge_ids()) {
        out.value[size_t(id)] = on_gp.f(id);
        out.tau.tau[size_t(id)] = on_gp.tau.tau[size_t(id)];
    }
    assert_mod4_nzf(g, out);
    return out;
}

} // namespace sgf
