#include "sgf/admissible.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace sgf {

std::vector<int> SignedCircuit::edges() const {
    std::vector<int> all = circuit1;
    all.insert(all.end(), circuit2.begin(), circuit2.end());
    all.insert(all.end(), path.begin(), path.end());
    return sorted_unique(std::move(all));
}

namespace {

// Follow a degree-2 chain inside `in_set` starting from `from` along `first`;
// stops at the first vertex whose set-degree differs from 2 (or at the start
// vertex of a closed chain).  Returns the edge list and the terminal vertex.
struct Chain {
    std::vector<int> edges;
    int end = -1;
};

Chain walk_chain(const SignedGraph& g, const std::vector<int>& set, int from, int first) {
    Chain c;
    std::vector<char> used(size_t(g.edge_slots()), 0);
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : set) {
        deg[size_t(g.edge(id).u)]++;
        deg[size_t(g.edge(id).v)]++;
    }
    int v = from, e = first;
    for (;;) {
        c.edges.push_back(e);
        used[size_t(e)] = 1;
        v = g.edge(e).u == v ? g.edge(e).v : g.edge(e).u;
        if (v == from || deg[size_t(v)] != 2) {
            c.end = v;
            return c;
        }
        int next = -1;
        for (int id : set)
            if (!used[size_t(id)] && (g.edge(id).u == v || g.edge(id).v == v)) {
                next = id;
                break;
            }
        if (next < 0) { // half-open chain; caller rejects on end degree
            c.end = v;
            return c;
        }
        e = next;
    }
}

ClassifyResult reject(const std::string& why) {
    ClassifyResult r;
    r.reason = why;
    return r;
}

} // namespace

ClassifyResult classify_signed_circuit(const SignedGraph& g, const std::vector<int>& edge_set) {
    std::vector<int> set = sorted_unique(edge_set);
    if (set.empty()) return reject("empty edge set");
    for (int id : set) g.edge(id); // validates liveness

    if (g.components(g.ref(set)).size() != 1) return reject("edge set is not connected");

    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : set) {
        deg[size_t(g.edge(id).u)]++;
        deg[size_t(g.edge(id).v)]++;
    }
    std::vector<int> deg3, deg4;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (deg[size_t(v)] == 0 || deg[size_t(v)] == 2) continue;
        if (deg[size_t(v)] == 3)
            deg3.push_back(v);
        else if (deg[size_t(v)] == 4)
            deg4.push_back(v);
        else
            return reject("vertex " + std::to_string(v) + " has set-degree " +
                          std::to_string(deg[size_t(v)]));
    }

    if (deg3.empty() && deg4.empty()) {
        // connected, all degrees 2: a circuit
        if (g.sign_product(set) != 1) return reject("circuit is unbalanced");
        ClassifyResult r;
        r.ok = true;
        r.value.kind = SignedCircuitKind::BalancedCircuit;
        r.value.circuit1 = set;
        return r;
    }

    if (deg3.empty() && deg4.size() == 1) {
        // candidate short barbell: two circuits through the degree-4 vertex
        int v = deg4[0];
        std::vector<int> at_v;
        for (int id : set)
            if (g.edge(id).u == v || g.edge(id).v == v) at_v.push_back(id);
        Chain c1 = walk_chain(g, set, v, at_v[0]);
        if (c1.end != v) return reject("chain from the degree-4 vertex does not close");
        std::vector<int> rest;
        for (int id : set)
            if (!contains_id(sorted_unique(c1.edges), id)) rest.push_back(id);
        if (rest.empty()) return reject("single circuit through the degree-4 vertex");
        Chain c2 = walk_chain(g, rest, v, rest[0]);
        if (c2.end != v || c1.edges.size() + c2.edges.size() != set.size())
            return reject("edge set is not two circuits through one vertex");
        if (g.sign_product(c1.edges) != -1 || g.sign_product(c2.edges) != -1)
            return reject("a barbell circuit is balanced");
        ClassifyResult r;
        r.ok = true;
        r.value.kind = SignedCircuitKind::ShortBarbell;
        r.value.circuit1 = sorted_unique(c1.edges);
        r.value.circuit2 = sorted_unique(c2.edges);
        return r;
    }

    if (deg4.empty() && deg3.size() == 2) {
        // candidate long barbell: circuit at a, circuit at b, path a..b
        int a = deg3[0], b = deg3[1];
        std::vector<int> at_a;
        for (int id : set)
            if (g.edge(id).u == a || g.edge(id).v == a) at_a.push_back(id);
        std::vector<int> circuitA, path;
        std::vector<char> used(size_t(g.edge_slots()), 0);
        for (int id : at_a) {
            if (used[size_t(id)]) continue;
            Chain c = walk_chain(g, set, a, id);
            for (int x : c.edges) used[size_t(x)] = 1;
            if (c.end == a) {
                if (!circuitA.empty()) return reject("two circuits at one degree-3 vertex");
                circuitA = c.edges;
            } else if (c.end == b) {
                if (!path.empty()) return reject("theta shape is not a barbell");
                path = c.edges;
            } else {
                return reject("dangling chain");
            }
        }
        if (circuitA.empty() || path.empty()) return reject("missing circuit or path at an end");
        std::vector<int> rest;
        {
            auto usedset = sorted_unique(circuitA);
            auto pathset = sorted_unique(path);
            for (int id : set)
                if (!contains_id(usedset, id) && !contains_id(pathset, id)) rest.push_back(id);
        }
        if (rest.empty()) return reject("missing second circuit");
        Chain c2 = walk_chain(g, rest, b, rest[0]);
        bool covers = circuitA.size() + path.size() + c2.edges.size() == set.size();
        if (c2.end != b || !covers) return reject("edge set is not circuit-path-circuit");
        if (g.sign_product(circuitA) != -1 || g.sign_product(c2.edges) != -1)
            return reject("a barbell circuit is balanced");
        ClassifyResult r;
        r.ok = true;
        r.value.kind = SignedCircuitKind::LongBarbell;
        r.value.circuit1 = sorted_unique(circuitA);
        r.value.circuit2 = sorted_unique(c2.edges);
        r.value.path = sorted_unique(path);
        return r;
    }

    return reject("degree profile matches no signed-circuit shape");
}

namespace {

// Potential BFS over one vertex component of `g` restricted to `allowed`
// vertices and non-banned edges; applies `conflict` to every non-forest edge
// whose sign disagrees with the endpoint potentials.  Used for both balance
// checking and unbalanced-ear discovery.
struct PotentialForest {
    std::vector<int> pot;         // 0 unvisited
    std::vector<int> parent;      // vertex
    std::vector<int> parent_edge; // edge id
};

// Runs BFS from root; returns the first conflicting edge (x, y, id) or -1s.
struct Conflict {
    int x = -1, y = -1, edge = -1;
};

Conflict potential_bfs(const SignedGraph& g, int root, const std::vector<char>& allowed,
                       const std::vector<char>& banned_edge, PotentialForest& f) {
    f.pot.assign(size_t(g.vertex_count()), 0);
    f.parent.assign(size_t(g.vertex_count()), -1);
    f.parent_edge.assign(size_t(g.vertex_count()), -1);
    f.pot[size_t(root)] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int id : g.incident(x)) {
            if (banned_edge[size_t(id)]) continue;
            if (id == f.parent_edge[size_t(x)]) continue;
            const Edge& e = g.edge(id);
            int y = e.u == x ? e.v : e.u;
            if (!allowed[size_t(y)]) continue;
            int want = f.pot[size_t(x)] * e.sign;
            if (f.pot[size_t(y)] == 0) {
                f.pot[size_t(y)] = want;
                f.parent[size_t(y)] = x;
                f.parent_edge[size_t(y)] = id;
                q.push(y);
            } else if (f.pot[size_t(y)] != want) {
                return Conflict{x, y, id};
            }
        }
    }
    return Conflict{};
}

struct Ear {
    std::vector<int> circuit; // unbalanced circuit
    std::vector<int> path;    // root .. circuit (possibly empty)
};

std::optional<Ear> find_ear(const SignedGraph& g, int root, const std::vector<char>& allowed,
                            const std::vector<char>& banned_edge) {
    PotentialForest f;
    Conflict c = potential_bfs(g, root, allowed, banned_edge, f);
    if (c.edge < 0) return std::nullopt;
    auto to_root = [&](int v) {
        std::vector<int> p;
        while (f.parent_edge[size_t(v)] >= 0) {
            p.push_back(f.parent_edge[size_t(v)]);
            v = f.parent[size_t(v)];
        }
        return p;
    };
    std::vector<int> px = to_root(c.x), py = to_root(c.y);
    Ear ear;
    while (!px.empty() && !py.empty() && px.back() == py.back()) {
        ear.path.push_back(px.back());
        px.pop_back();
        py.pop_back();
    }
    std::reverse(ear.path.begin(), ear.path.end()); // root-outward order
    ear.circuit = px;
    ear.circuit.insert(ear.circuit.end(), py.begin(), py.end());
    ear.circuit.push_back(c.edge);
    ear.circuit = sorted_unique(std::move(ear.circuit));
    return ear;
}

std::vector<int> circuit_vertices(const SignedGraph& g, const std::vector<int>& edges) {
    std::vector<int> vs;
    for (int id : edges) {
        vs.push_back(g.edge(id).u);
        vs.push_back(g.edge(id).v);
    }
    return sorted_unique(std::move(vs));
}

// Depth-first enumeration of simple paths from u to v avoiding banned edges,
// extending along ascending edge ids; cb(sign, edge list) returns true to
// stop.  Returns false when the node budget runs out.
bool dfs_paths(const SignedGraph& g, int u, int v, const std::vector<char>& banned_edge,
               long long& budget, const std::function<bool(int, const std::vector<int>&)>& cb) {
    std::vector<char> visited(size_t(g.vertex_count()), 0);
    std::vector<int> path_edges;
    bool stop = false;
    std::function<void(int, int)> rec = [&](int x, int sign) {
        if (stop || budget <= 0) return;
        if (x == v) {
            stop = cb(sign, path_edges);
            if (stop) return;
        }
        visited[size_t(x)] = 1;
        for (int id : g.incident(x)) {
            if (stop) break;
            if (banned_edge[size_t(id)]) continue;
            const Edge& e = g.edge(id);
            int y = e.u == x ? e.v : e.u;
            if (visited[size_t(y)]) continue;
            --budget;
            if (budget <= 0) break;
            path_edges.push_back(id);
            rec(y, sign * e.sign);
            path_edges.pop_back();
        }
        visited[size_t(x)] = 0;
    };
    // the target must stay unvisited so paths may end there
    rec(u, 1);
    return budget > 0;
}

} // namespace

AdmissibilityResult is_flow_admissible(const SignedGraph& g) {
    AdmissibilityResult res;
    res.admissible = true;
    int n = g.vertex_count();
    for (const auto& comp : g.vertex_components()) {
        std::vector<char> in_comp(size_t(n), 0);
        for (int v : comp) in_comp[size_t(v)] = 1;
        std::vector<int> comp_edges;
        for (int id : g.edge_ids())
            if (in_comp[size_t(g.edge(id).u)]) comp_edges.push_back(id);
        if (comp_edges.empty()) continue; // isolated vertex: vacuously admissible

        std::vector<char> banned(size_t(g.edge_slots()), 1);
        for (int id : comp_edges) banned[size_t(id)] = 0;

        // Balance of the whole component.
        PotentialForest f;
        Conflict c = potential_bfs(g, comp[0], in_comp, banned, f);
        bool balanced = c.edge < 0;

        for (int e : comp_edges) {
            banned[size_t(e)] = 1;
            if (balanced) {
                // balanced component: admissible iff bridgeless
                PotentialForest fb;
                potential_bfs(g, g.edge(e).u, in_comp, banned, fb);
                if (fb.pot[size_t(g.edge(e).v)] == 0) {
                    res.admissible = false;
                    res.offending_edge = e;
                    res.reason = "bridge in a balanced component";
                    return res;
                }
            } else {
                // unbalanced component: no deletion may leave a balanced part
                std::vector<char> seen(size_t(n), 0);
                for (int s : comp) {
                    if (seen[size_t(s)]) continue;
                    PotentialForest fp;
                    Conflict cc = potential_bfs(g, s, in_comp, banned, fp);
                    bool part_balanced = cc.edge < 0;
                    for (int v : comp)
                        if (fp.pot[size_t(v)] != 0) seen[size_t(v)] = 1;
                    if (part_balanced) {
                        res.admissible = false;
                        res.offending_edge = e;
                        res.reason = "deleting the edge leaves a balanced component";
                        return res;
                    }
                }
            }
            banned[size_t(e)] = 0;
        }
    }
    return res;
}

std::optional<SignedCircuit> signed_circuit_through(const SignedGraph& g, int e,
                                                    long long budget_nodes) {
    const Edge& ed = g.edge(e);
    long long budget = budget_nodes;
    std::vector<char> banned(size_t(g.edge_slots()), 0);
    for (int id = 0; id < g.edge_slots(); ++id)
        if (!g.edge_alive(id)) banned[size_t(id)] = 1;
    banned[size_t(e)] = 1;
    std::vector<char> all_vertices(size_t(g.vertex_count()), 1);

    // Balanced circuit through e: a path between the endpoints whose sign
    // matches sigma(e).
    std::optional<SignedCircuit> found;
    dfs_paths(g, ed.u, ed.v, banned, budget, [&](int sign, const std::vector<int>& path) {
        if (sign != ed.sign) return false;
        SignedCircuit sc;
        sc.kind = SignedCircuitKind::BalancedCircuit;
        sc.circuit1 = path;
        sc.circuit1.push_back(e);
        sc.circuit1 = sorted_unique(std::move(sc.circuit1));
        found = sc;
        return true;
    });
    if (found) return found;

    // Barbell with e on one circuit: enumerate unbalanced circuits through e
    // and look for a disjoint unbalanced ear anchored on the circuit.
    dfs_paths(g, ed.u, ed.v, banned, budget, [&](int sign, const std::vector<int>& path) {
        if (sign != -ed.sign) return false;
        std::vector<int> c1 = path;
        c1.push_back(e);
        c1 = sorted_unique(std::move(c1));
        std::vector<int> vs = circuit_vertices(g, c1);
        std::vector<char> ban2 = banned;
        for (int id : c1) ban2[size_t(id)] = 1;
        for (int a : vs) {
            std::vector<char> allowed(size_t(g.vertex_count()), 1);
            for (int v : vs) allowed[size_t(v)] = 0;
            allowed[size_t(a)] = 1;
            auto ear = find_ear(g, a, allowed, ban2);
            if (!ear) continue;
            SignedCircuit sc;
            sc.kind = ear->path.empty() ? SignedCircuitKind::ShortBarbell
                                        : SignedCircuitKind::LongBarbell;
            sc.circuit1 = c1;
            sc.circuit2 = ear->circuit;
            sc.path = sorted_unique(ear->path);
            found = sc;
            return true;
        }
        return false;
    });
    if (found) return found;

    // Barbell with e on the connecting path: one unbalanced ear from each
    // endpoint, vertex-disjoint.  When e is a bridge the two searches run in
    // separate components and cannot interfere; otherwise the first ear is
    // re-searched with its circuit banned whenever it blocks the second.
    for (int first = 0; first < 2 && !found; ++first) {
        int r1 = first == 0 ? ed.u : ed.v;
        int r2 = first == 0 ? ed.v : ed.u;
        std::vector<char> ban1 = banned;
        for (int attempt = 0; attempt < 16 && !found; ++attempt) {
            auto ear1 = find_ear(g, r1, all_vertices, ban1);
            if (!ear1) break;
            std::vector<int> used1 = ear1->circuit;
            used1.insert(used1.end(), ear1->path.begin(), ear1->path.end());
            std::vector<int> vs1 = circuit_vertices(g, used1);
            std::vector<char> allowed(size_t(g.vertex_count()), 1);
            for (int v : vs1) allowed[size_t(v)] = 0;
            if (allowed[size_t(r2)]) {
                auto ear2 = find_ear(g, r2, allowed, banned);
                if (ear2) {
                    SignedCircuit sc;
                    sc.kind = SignedCircuitKind::LongBarbell;
                    sc.circuit1 = ear1->circuit;
                    sc.circuit2 = ear2->circuit;
                    sc.path = ear1->path;
                    sc.path.push_back(e);
                    sc.path.insert(sc.path.end(), ear2->path.begin(), ear2->path.end());
                    sc.path = sorted_unique(std::move(sc.path));
                    found = sc;
                    break;
                }
            }
            for (int id : ear1->circuit) ban1[size_t(id)] = 1;
        }
    }
    return found;
}

std::vector<SignedCircuit> signed_circuit_cover(const SignedGraph& g, long long budget_nodes) {
    AdmissibilityResult adm = is_flow_admissible(g);
    if (!adm.admissible)
        throw Error(errc::not_flow_admissible,
                    "no signed-circuit cover: " + adm.reason + " (edge " +
                        std::to_string(adm.offending_edge) + ")");
    std::vector<SignedCircuit> cover;
    std::vector<char> covered(size_t(g.edge_slots()), 0);
    for (int e : g.edge_ids()) {
        if (covered[size_t(e)]) continue;
        auto sc = signed_circuit_through(g, e, budget_nodes);
        if (!sc)
            throw Error(errc::internal, "signed-circuit search failed on an admissible graph at "
                                        "edge " +
                                            std::to_string(e));
        for (int id : sc->edges()) covered[size_t(id)] = 1;
        cover.push_back(std::move(*sc));
    }
    return cover;
}

} // namespace sgf
