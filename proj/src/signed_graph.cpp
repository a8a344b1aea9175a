#include "sgf/signed_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>

namespace sgf {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool contains_id(const std::vector<int>& sorted, int id) {
    return std::binary_search(sorted.begin(), sorted.end(), id);
}

int SignedGraph::add_edge(int u, int v, int sign) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw Error(errc::bad_vertex, "edge endpoint out of range");
    if (u == v)
        throw Error(errc::loop_rejected, "loops are not representable");
    if (sign != 1 && sign != -1)
        throw Error(errc::format_error, "edge sign must be +1 or -1");
    edges_.push_back({u, v, sign, true});
    digest_valid_ = false;
    return int(edges_.size()) - 1;
}

int SignedGraph::edge_count() const {
    int c = 0;
    for (const auto& e : edges_)
        if (e.alive) ++c;
    return c;
}

const Edge& SignedGraph::edge(int id) const {
    if (!edge_alive(id))
        throw Error(errc::bad_edge_ids, "no live edge with id " + std::to_string(id));
    return edges_[size_t(id)];
}

std::vector<int> SignedGraph::edge_ids() const {
    std::vector<int> out;
    out.reserve(edges_.size());
    for (int i = 0; i < edge_slots(); ++i)
        if (edges_[size_t(i)].alive) out.push_back(i);
    return out;
}

int SignedGraph::degree(int v) const {
    int d = 0;
    for (const auto& e : edges_)
        if (e.alive && (e.u == v || e.v == v)) ++d;
    return d;
}

std::vector<int> SignedGraph::incident(int v) const {
    std::vector<int> out;
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& e = edges_[size_t(i)];
        if (e.alive && (e.u == v || e.v == v)) out.push_back(i);
    }
    return out;
}

int SignedGraph::negative_count() const {
    int c = 0;
    for (const auto& e : edges_)
        if (e.alive && e.sign < 0) ++c;
    return c;
}

std::vector<int> SignedGraph::negative_edges() const {
    std::vector<int> out;
    for (int i = 0; i < edge_slots(); ++i)
        if (edges_[size_t(i)].alive && edges_[size_t(i)].sign < 0) out.push_back(i);
    return out;
}

uint64_t SignedGraph::digest() const {
    if (digest_valid_) return digest_cache_;
    uint64_t h = 1469598103934665603ULL; // FNV offset
    auto mix = [&h](uint64_t x) {
        h ^= x;
        h *= 1099511628211ULL;
    };
    mix(uint64_t(n_));
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& e = edges_[size_t(i)];
        if (!e.alive) {
            mix(0xdeadULL);
            continue;
        }
        mix(uint64_t(i));
        mix(uint64_t(e.u) << 32 | uint64_t(uint32_t(e.v)));
        mix(e.sign > 0 ? 3ULL : 5ULL);
    }
    digest_cache_ = h;
    digest_valid_ = true;
    return h;
}

SubgraphRef SignedGraph::ref(std::vector<int> ids, bool spanning) const {
    ids = sorted_unique(std::move(ids));
    for (int id : ids)
        if (!edge_alive(id))
            throw Error(errc::bad_edge_ids, "subgraph ref mentions dead edge " + std::to_string(id));
    return SubgraphRef{digest(), std::move(ids), spanning};
}

SubgraphRef SignedGraph::full_ref() const { return ref(edge_ids(), true); }

void SignedGraph::check_ref(const SubgraphRef& r) const {
    if (r.parent_digest != digest())
        throw Error(errc::mixed_parents, "subgraph ref belongs to a different graph");
}

int SignedGraph::sign_product(const std::vector<int>& ids) const {
    int s = 1;
    for (int id : ids) s *= edge(id).sign;
    return s;
}

SignedGraph SignedGraph::switch_at(const std::vector<int>& vertices) const {
    std::vector<char> in(size_t(n_), 0);
    for (int v : vertices) {
        if (v < 0 || v >= n_) throw Error(errc::bad_vertex, "switching set vertex out of range");
        in[size_t(v)] = 1;
    }
    SignedGraph g = *this;
    for (auto& e : g.edges_) {
        if (!e.alive) continue;
        if (in[size_t(e.u)] != in[size_t(e.v)]) e.sign = -e.sign;
    }
    g.digest_valid_ = false;
    return g;
}

SignedGraph::BalanceResult SignedGraph::is_balanced() const {
    // Potential assignment along a BFS forest; the first non-tree edge whose
    // sign disagrees with the endpoint potentials closes an unbalanced circuit.
    std::vector<int> pot(size_t(n_), 0); // 0 unvisited, else +1/-1
    std::vector<int> parent_edge(size_t(n_), -1);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n_)); // (edge, other)
    for (int i = 0; i < edge_slots(); ++i) {
        if (!edges_[size_t(i)].alive) continue;
        const auto& e = edges_[size_t(i)];
        adj[size_t(e.u)].push_back({i, e.v});
        adj[size_t(e.v)].push_back({i, e.u});
    }
    for (int s = 0; s < n_; ++s) {
        if (pot[size_t(s)] != 0) continue;
        pot[size_t(s)] = 1;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [eid, w] : adj[size_t(u)]) {
                int want = pot[size_t(u)] * edges_[size_t(eid)].sign;
                if (pot[size_t(w)] == 0) {
                    pot[size_t(w)] = want;
                    parent_edge[size_t(w)] = eid;
                    q.push(w);
                } else if (eid != parent_edge[size_t(u)] && pot[size_t(w)] != want) {
                    // unbalanced circuit: tree paths from u and w to their
                    // meeting point, plus this edge.
                    std::vector<int> pu, pw;
                    auto path_to_root = [&](int x, std::vector<int>& path) {
                        while (parent_edge[size_t(x)] >= 0) {
                            int pe = parent_edge[size_t(x)];
                            path.push_back(pe);
                            const auto& ed = edges_[size_t(pe)];
                            x = (ed.u == x) ? ed.v : ed.u;
                        }
                    };
                    path_to_root(u, pu);
                    path_to_root(w, pw);
                    // Drop the common suffix of both root paths.
                    while (!pu.empty() && !pw.empty() && pu.back() == pw.back()) {
                        pu.pop_back();
                        pw.pop_back();
                    }
                    std::vector<int> circuit = pu;
                    circuit.insert(circuit.end(), pw.begin(), pw.end());
                    circuit.push_back(eid);
                    BalanceResult r;
                    r.balanced = false;
                    r.unbalanced_circuit = sorted_unique(std::move(circuit));
                    return r;
                }
            }
        }
    }
    BalanceResult r;
    r.balanced = true;
    for (int v = 0; v < n_; ++v)
        if (pot[size_t(v)] < 0) r.switching_set.push_back(v);
    return r;
}

SplitResult SignedGraph::split_vertex(int v, const std::vector<int>& F) const {
    if (v < 0 || v >= n_) throw Error(errc::bad_vertex, "split vertex out of range");
    SignedGraph g = *this;
    int nv = g.n_++;
    for (int id : F) {
        if (!edge_alive(id))
            throw Error(errc::bad_edge_ids, "split set mentions dead edge");
        Edge& e = g.edges_[size_t(id)];
        if (e.u == v)
            e.u = nv;
        else if (e.v == v)
            e.v = nv;
        else
            throw Error(errc::bad_edge_ids, "split set edge not incident with vertex");
    }
    g.digest_valid_ = false;
    return SplitResult{std::move(g), nv};
}

ContractionResult SignedGraph::contract_edges(const std::vector<int>& S) const {
    std::vector<int> s = sorted_unique(S);
    for (int id : s) {
        if (!edge_alive(id)) throw Error(errc::bad_edge_ids, "contraction set mentions dead edge");
        // Contraction is only defined on positive edge sets here: a negative
        // edge has no sign-consistent single-vertex image.
        if (edges_[size_t(id)].sign < 0)
            throw Error(errc::negative_edge_in_contraction,
                        "edge " + std::to_string(id) + " is negative");
    }

    // Union-find over vertices through S.
    std::vector<int> up(static_cast<size_t>(n_));
    std::iota(up.begin(), up.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (up[size_t(x)] != x) {
            up[size_t(x)] = up[size_t(up[size_t(x)])];
            x = up[size_t(x)];
        }
        return x;
    };
    for (int id : s) {
        const auto& e = edges_[size_t(id)];
        int a = find(e.u), b = find(e.v);
        if (a != b) up[size_t(std::max(a, b))] = std::min(a, b); // smallest id represents
    }
    // Compact labels in order of representative id.
    std::vector<int> vmap(size_t(n_), -1);
    int next = 0;
    for (int v = 0; v < n_; ++v) {
        int r = find(v);
        if (vmap[size_t(r)] == -1) vmap[size_t(r)] = next++;
        vmap[size_t(v)] = vmap[size_t(r)];
    }

    ContractionResult res;
    res.graph.n_ = next;
    res.graph.edges_.resize(edges_.size());
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& e = edges_[size_t(i)];
        Edge dead{-1, -1, 1, false};
        if (!e.alive || contains_id(s, i)) {
            res.graph.edges_[size_t(i)] = dead;
            continue;
        }
        int nu = vmap[size_t(e.u)], nv2 = vmap[size_t(e.v)];
        if (nu == nv2) {
            res.graph.edges_[size_t(i)] = dead;
            res.removed_loops.push_back(i);
            continue;
        }
        res.graph.edges_[size_t(i)] = Edge{nu, nv2, e.sign, true};
    }
    res.vertex_map = std::move(vmap);
    return res;
}

std::vector<SubgraphRef> SignedGraph::components(const SubgraphRef& r) const {
    check_ref(r);
    std::vector<char> vert_in(size_t(n_), r.spanning ? 1 : 0);
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n_));
    for (int id : r.edges) {
        const auto& e = edge(id);
        vert_in[size_t(e.u)] = vert_in[size_t(e.v)] = 1;
        adj[size_t(e.u)].push_back({id, e.v});
        adj[size_t(e.v)].push_back({id, e.u});
    }
    std::vector<char> seen(size_t(n_), 0);
    std::vector<SubgraphRef> out;
    for (int s = 0; s < n_; ++s) {
        if (!vert_in[size_t(s)] || seen[size_t(s)]) continue;
        std::vector<int> comp_edges;
        std::queue<int> q;
        q.push(s);
        seen[size_t(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [eid, w] : adj[size_t(u)]) {
                comp_edges.push_back(eid);
                if (!seen[size_t(w)]) {
                    seen[size_t(w)] = 1;
                    q.push(w);
                }
            }
        }
        out.push_back(SubgraphRef{digest(), sorted_unique(std::move(comp_edges)), false});
    }
    return out;
}

std::vector<std::vector<int>> SignedGraph::vertex_components() const {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n_));
    for (const auto& e : edges_) {
        if (!e.alive) continue;
        adj[size_t(e.u)].push_back(e.v);
        adj[size_t(e.v)].push_back(e.u);
    }
    std::vector<char> seen(size_t(n_), 0);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < n_; ++s) {
        if (seen[size_t(s)]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(s);
        seen[size_t(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            comp.push_back(u);
            for (int w : adj[size_t(u)])
                if (!seen[size_t(w)]) {
                    seen[size_t(w)] = 1;
                    q.push(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool SignedGraph::connected() const { return vertex_components().size() <= 1; }

std::vector<EulerStep> SignedGraph::euler_tour(const SubgraphRef& r) const {
    check_ref(r);
    if (r.edges.empty()) return {};
    // Degrees within the edge set must all be even, and the edge-induced
    // subgraph must be connected.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n_));
    int start = n_;
    for (int id : r.edges) {
        const auto& e = edge(id);
        adj[size_t(e.u)].push_back({id, e.v});
        adj[size_t(e.v)].push_back({id, e.u});
        start = std::min({start, e.u, e.v});
    }
    for (int v = 0; v < n_; ++v) {
        if (adj[size_t(v)].size() % 2 != 0)
            throw Error(errc::not_eulerian, "odd degree at vertex " + std::to_string(v));
        std::sort(adj[size_t(v)].begin(), adj[size_t(v)].end());
    }
    {
        auto comps = components(r);
        if (comps.size() != 1)
            throw Error(errc::not_eulerian, "edge set is not connected");
    }

    // Hierholzer with smallest-edge-id extension and in-place splicing.
    std::vector<char> used(size_t(edge_slots()), 0);
    std::vector<size_t> cursor(size_t(n_), 0);
    std::vector<EulerStep> tour;
    std::vector<std::pair<int, int>> stack; // (vertex, edge used to get here)
    stack.push_back({start, -1});
    while (!stack.empty()) {
        auto [v, via] = stack.back();
        size_t& c = cursor[size_t(v)];
        while (c < adj[size_t(v)].size() && used[size_t(adj[size_t(v)][c].first)]) ++c;
        if (c < adj[size_t(v)].size()) {
            auto [eid, w] = adj[size_t(v)][c];
            used[size_t(eid)] = 1;
            stack.push_back({w, eid});
        } else {
            stack.pop_back();
            if (via >= 0 && !stack.empty())
                tour.push_back(EulerStep{via, v, stack.back().first});
        }
    }
    std::reverse(tour.begin(), tour.end());
    for (auto& st : tour) std::swap(st.from, st.to);
    if (tour.size() != r.edges.size())
        throw Error(errc::internal, "euler tour did not cover the edge set");
    return tour;
}

std::vector<int> SignedGraph::boundary_cut(const std::vector<int>& U) const {
    std::vector<char> in(size_t(n_), 0);
    for (int v : U) {
        if (v < 0 || v >= n_) throw Error(errc::bad_vertex, "cut set vertex out of range");
        in[size_t(v)] = 1;
    }
    std::vector<int> out;
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& e = edges_[size_t(i)];
        if (e.alive && in[size_t(e.u)] != in[size_t(e.v)]) out.push_back(i);
    }
    return out;
}

SignedGraph SignedGraph::restriction(const std::vector<int>& ids) const {
    std::vector<int> keep = sorted_unique(ids);
    SignedGraph g = *this;
    for (int i = 0; i < edge_slots(); ++i)
        if (g.edges_[size_t(i)].alive && !contains_id(keep, i)) g.edges_[size_t(i)].alive = false;
    g.digest_valid_ = false;
    return g;
}

SignedGraph SignedGraph::delete_edges(const std::vector<int>& ids) const {
    std::vector<int> del = sorted_unique(ids);
    SignedGraph g = *this;
    for (int id : del) {
        if (!edge_alive(id)) throw Error(errc::bad_edge_ids, "deleting dead edge");
        g.edges_[size_t(id)].alive = false;
    }
    g.digest_valid_ = false;
    return g;
}

bool SignedGraph::same_structure(const SignedGraph& other) const {
    if (n_ != other.n_ || edge_slots() != other.edge_slots()) return false;
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& a = edges_[size_t(i)];
        const auto& b = other.edges_[size_t(i)];
        if (a.alive != b.alive) return false;
        if (!a.alive) continue;
        if (a.sign != b.sign) return false;
        if (std::minmax(a.u, a.v) != std::minmax(b.u, b.v)) return false;
    }
    return true;
}

bool SignedGraph::equal_under_map(const SignedGraph& other, const std::vector<int>& vertex_map) const {
    if (int(vertex_map.size()) != n_) return false;
    if (edge_slots() != other.edge_slots() || n_ != other.n_) return false;
    for (int i = 0; i < edge_slots(); ++i) {
        const auto& a = edges_[size_t(i)];
        const auto& b = other.edges_[size_t(i)];
        if (a.alive != b.alive) return false;
        if (!a.alive) continue;
        if (a.sign != b.sign) return false;
        int mu = vertex_map[size_t(a.u)], mv = vertex_map[size_t(a.v)];
        if (std::minmax(mu, mv) != std::minmax(b.u, b.v)) return false;
    }
    return true;
}

std::vector<int> symmetric_difference(const SignedGraph& g, const SubgraphRef& a,
                                      const SubgraphRef& b) {
    g.check_ref(a);
    g.check_ref(b);
    std::vector<int> out;
    std::set_symmetric_difference(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                                  std::back_inserter(out));
    return out;
}

} // namespace sgf
