#include "sgf/cayley.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sgf/admissible.hpp"
#include "sgf/errors.hpp"

namespace sgf {

namespace {

using Elem = std::vector<int>;

constexpr long long kMaxGroupSize = 1 << 16;

// Mixed-radix arithmetic over a direct product of cyclic factors.  Vertex
// ids enumerate the tuples lexicographically, first coordinate most
// significant.
struct Group {
    std::vector<int> orders;
    long long size = 1;

    explicit Group(const std::vector<int>& factors) : orders(factors) {
        if (orders.empty())
            throw Error(errc::precondition_violated, "group needs at least one cyclic factor");
        for (int m : orders) {
            if (m < 1)
                throw Error(errc::precondition_violated, "cyclic factor orders must be >= 1");
            size *= m;
            if (size > kMaxGroupSize)
                throw Error(errc::precondition_violated,
                            "group order exceeds the supported bound " +
                                std::to_string(kMaxGroupSize));
        }
    }

    size_t rank() const { return orders.size(); }

    Elem reduce(Elem a) const {
        for (size_t i = 0; i < a.size(); ++i) {
            int m = orders[i];
            a[i] = ((a[i] % m) + m) % m;
        }
        return a;
    }

    Elem zero() const { return Elem(rank(), 0); }

    bool is_zero(const Elem& a) const {
        return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c(rank());
        for (size_t i = 0; i < rank(); ++i) c[i] = (a[i] + b[i]) % orders[i];
        return c;
    }

    Elem neg(const Elem& a) const {
        Elem c(rank());
        for (size_t i = 0; i < rank(); ++i) c[i] = (orders[i] - a[i]) % orders[i];
        return c;
    }

    Elem mul(long long t, const Elem& a) const {
        Elem c(rank());
        for (size_t i = 0; i < rank(); ++i) c[i] = int((t % orders[i]) * a[i] % orders[i]);
        return c;
    }

    int id_of(const Elem& a) const {
        long long id = 0;
        for (size_t i = 0; i < rank(); ++i) id = id * orders[i] + a[i];
        return int(id);
    }

    Elem elem_of(long long id) const {
        Elem a(rank());
        for (size_t i = rank(); i-- > 0;) {
            a[i] = int(id % orders[i]);
            id /= orders[i];
        }
        return a;
    }

    // Smallest t >= 1 with t*a = 0.
    long long order_of(const Elem& a) const {
        Elem cur = a;
        long long t = 1;
        while (!is_zero(cur)) {
            cur = add(cur, a);
            ++t;
        }
        return t;
    }

    // Size of the subgroup generated by the given elements (each list entry
    // assumed reduced; inverses are added internally).
    long long span_size(const std::vector<Elem>& gens) const {
        std::vector<char> seen(size_t(size), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        long long count = 1;
        while (!stack.empty()) {
            Elem cur = elem_of(stack.back());
            stack.pop_back();
            for (const Elem& s : gens)
                for (const Elem& step : {s, neg(s)}) {
                    int w = id_of(add(cur, step));
                    if (!seen[size_t(w)]) {
                        seen[size_t(w)] = 1;
                        ++count;
                        stack.push_back(w);
                    }
                }
        }
        return count;
    }
};

// One inverse-pair class of the connection multiset.
struct ConnClass {
    Elem rep;              // first-listed element of the pair
    bool involution = false;
    int multiplicity = 0;  // parallel copies
};

// One emitted copy of a class: edge ids [first_edge, first_edge + count).
struct EmittedCopy {
    int cls = 0;
    int first_edge = 0;
    int count = 0;
};

struct Emission {
    Group group;
    std::vector<ConnClass> classes;
    std::vector<EmittedCopy> copies;
    int total_edges = 0;
    int valency = 0; // |S| with multiplicity
};

Emission plan_emission(const CayleySpec& spec) {
    Emission em{Group(spec.group), {}, {}, 0, 0};
    const Group& G = em.group;

    std::vector<Elem> conn;
    for (const auto& raw : spec.connection) {
        if (raw.size() != G.rank())
            throw Error(errc::precondition_violated,
                        "connection element arity does not match the factor count");
        Elem e = G.reduce(raw);
        if (G.is_zero(e))
            throw Error(errc::identity_in_s, "connection set contains the identity");
        conn.push_back(std::move(e));
    }

    std::map<Elem, int> count;
    for (const auto& e : conn) count[e]++;
    for (const auto& [e, c] : count) {
        Elem ne = em.group.neg(e);
        int nc = count.count(ne) ? count.at(ne) : 0;
        if (nc != c)
            throw Error(errc::not_inverse_closed,
                        "connection multiset is not closed under inverses with matching "
                        "multiplicity");
    }

    std::map<Elem, char> claimed;
    for (const auto& e : conn) {
        if (claimed.count(e)) continue;
        claimed[e] = 1;
        claimed[G.neg(e)] = 1;
        ConnClass cls;
        cls.rep = e;
        cls.involution = (e == G.neg(e));
        cls.multiplicity = count.at(e);
        em.classes.push_back(std::move(cls));
    }

    int n = int(G.size);
    for (size_t ci = 0; ci < em.classes.size(); ++ci) {
        const ConnClass& cls = em.classes[ci];
        int per_copy = cls.involution ? n / 2 : n;
        for (int copy = 0; copy < cls.multiplicity; ++copy) {
            em.copies.push_back({int(ci), em.total_edges, per_copy});
            em.total_edges += per_copy;
        }
        em.valency += cls.involution ? cls.multiplicity : 2 * cls.multiplicity;
    }
    return em;
}

SignedGraph emit_graph(const Emission& em, const std::vector<int>& signs) {
    const Group& G = em.group;
    int n = int(G.size);
    if (!signs.empty() && int(signs.size()) != em.total_edges)
        throw Error(errc::precondition_violated,
                    "sign vector has " + std::to_string(signs.size()) + " entries, expected " +
                        std::to_string(em.total_edges));
    for (int s : signs)
        if (s != 1 && s != -1)
            throw Error(errc::precondition_violated, "sign entries must be +1 or -1");

    SignedGraph g(n);
    int next = 0;
    for (const EmittedCopy& copy : em.copies) {
        const ConnClass& cls = em.classes[size_t(copy.cls)];
        for (int gid = 0; gid < n; ++gid) {
            int hid = G.id_of(G.add(G.elem_of(gid), cls.rep));
            if (cls.involution && gid >= hid) continue;
            int sign = signs.empty() ? 1 : signs[size_t(next)];
            g.add_edge(gid, hid, sign);
            ++next;
        }
    }
    if (next != em.total_edges)
        throw Error(errc::internal, "edge emission count mismatch");
    return g;
}

bool same_underlying(const SignedGraph& a, const SignedGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_slots() != b.edge_slots()) return false;
    for (int id = 0; id < a.edge_slots(); ++id) {
        if (a.edge_alive(id) != b.edge_alive(id)) return false;
        if (!a.edge_alive(id)) continue;
        const Edge& ea = a.edge(id);
        const Edge& eb = b.edge(id);
        if (std::minmax(ea.u, ea.v) != std::minmax(eb.u, eb.v)) return false;
    }
    return true;
}

void require_matching_structure(const SignedGraph& g, const Emission& em) {
    SignedGraph base = emit_graph(em, {});
    if (!same_underlying(g, base))
        throw Error(errc::precondition_violated,
                    "graph does not match gen_cayley of the given spec");
}

// --- ladder realization ----------------------------------------------------

std::optional<LadderRealization> realize_ladder(const SignedGraph& g, const Emission& em) {
    const Group& G = em.group;
    int n = int(G.size);
    if (em.valency != 3) return std::nullopt;

    std::vector<Elem> reps;
    for (const auto& cls : em.classes) reps.push_back(cls.rep);
    if (G.span_size(reps) != G.size) return std::nullopt;

    LadderKind kind;
    int rungs = 0;
    std::vector<int> vm(size_t(n), -1);

    // Split the classes into the pair class (if any) and the involutions.
    const ConnClass* pair_cls = nullptr;
    std::vector<const ConnClass*> invs;
    for (const auto& cls : em.classes) {
        if (cls.involution)
            invs.push_back(&cls);
        else
            pair_cls = &cls;
    }

    if (pair_cls) {
        // {s, -s, z}: CL_d when z is outside <s>, ML_{d/2} when inside.
        if (invs.size() != 1 || pair_cls->multiplicity != 1 || invs[0]->multiplicity != 1)
            throw Error(errc::internal, "impossible cubic class shape");
        const Elem& s = pair_cls->rep;
        const Elem& z = invs[0]->rep;
        long long d = G.order_of(s);
        bool z_in_s = false;
        {
            Elem cur = G.zero();
            for (long long t = 0; t < d; ++t) {
                if (cur == z) {
                    z_in_s = true;
                    break;
                }
                cur = G.add(cur, s);
            }
        }
        if (z_in_s) {
            if (d % 2 != 0 || G.mul(d / 2, s) != z || G.size != d)
                throw Error(errc::internal, "inconsistent cyclic realization");
            kind = LadderKind::Moebius;
            rungs = int(d / 2);
            for (long long t = 0; t < d; ++t) vm[size_t(G.id_of(G.mul(t, s)))] = int(t);
        } else {
            if (G.size != 2 * d) throw Error(errc::internal, "inconsistent coset realization");
            kind = LadderKind::Circular;
            rungs = int(d);
            for (long long t = 0; t < d; ++t) {
                Elem xt = G.mul(t, s);
                vm[size_t(G.id_of(xt))] = int(t);
                vm[size_t(G.id_of(G.add(z, xt)))] = int(d + t);
            }
        }
    } else if (invs.size() == 3) {
        // Three distinct involutions: the cube (CL_4) or K_4 (ML_2).
        const Elem &z1 = invs[0]->rep, &z2 = invs[1]->rep, &z3 = invs[2]->rep;
        Elem z12 = G.add(z1, z2);
        if (G.size == 8) {
            kind = LadderKind::Circular;
            rungs = 4;
            Elem x[4] = {G.zero(), z1, z12, z2};
            for (int t = 0; t < 4; ++t) {
                vm[size_t(G.id_of(x[t]))] = t;
                vm[size_t(G.id_of(G.add(z3, x[t])))] = 4 + t;
            }
        } else if (G.size == 4) {
            if (z3 != z12) throw Error(errc::internal, "three involutions in a Klein group");
            kind = LadderKind::Moebius;
            rungs = 2;
            vm[size_t(G.id_of(G.zero()))] = 0;
            vm[size_t(G.id_of(z1))] = 1;
            vm[size_t(G.id_of(z12))] = 2;
            vm[size_t(G.id_of(z2))] = 3;
        } else {
            throw Error(errc::internal, "three involutions must span order 4 or 8");
        }
    } else if (invs.size() == 2) {
        // Doubled involution plus a single one: CL_2.
        const ConnClass* doubled = invs[0]->multiplicity == 2 ? invs[0] : invs[1];
        const ConnClass* single = invs[0]->multiplicity == 2 ? invs[1] : invs[0];
        if (doubled->multiplicity != 2 || single->multiplicity != 1)
            throw Error(errc::internal, "impossible cubic involution multiplicities");
        const Elem &z = doubled->rep, &zp = single->rep;
        if (G.size != 4) throw Error(errc::internal, "two involutions must span order 4");
        kind = LadderKind::Circular;
        rungs = 2;
        vm[size_t(G.id_of(G.zero()))] = 0;
        vm[size_t(G.id_of(z))] = 1;
        vm[size_t(G.id_of(zp))] = 2;
        vm[size_t(G.id_of(G.add(z, zp)))] = 3;
    } else {
        // One involution with multiplicity 3: ML_1, the triple dipole.
        if (invs.size() != 1 || invs[0]->multiplicity != 3)
            throw Error(errc::internal, "impossible cubic class shape");
        if (G.size != 2) throw Error(errc::internal, "tripled involution must span order 2");
        kind = LadderKind::Moebius;
        rungs = 1;
        vm[0] = 0;
        vm[size_t(G.id_of(invs[0]->rep))] = 1;
    }

    for (int v : vm)
        if (v < 0) throw Error(errc::internal, "partial vertex map in ladder realization");

    LadderSpec ls;
    ls.kind = kind;
    ls.n = rungs;
    SignedGraph ladder = gen_ladder(ls);

    std::map<std::pair<int, int>, std::vector<int>> by_pair_g, by_pair_l;
    for (int id : g.edge_ids()) {
        const Edge& e = g.edge(id);
        by_pair_g[std::minmax(vm[size_t(e.u)], vm[size_t(e.v)])].push_back(id);
    }
    for (int id : ladder.edge_ids()) {
        const Edge& e = ladder.edge(id);
        by_pair_l[std::minmax(e.u, e.v)].push_back(id);
    }
    if (by_pair_g.size() != by_pair_l.size())
        throw Error(errc::internal, "ladder realization pair classes mismatch");

    LadderRealization out;
    out.spec = ls;
    out.spec.rung_signs.assign(size_t(rungs), 1);
    out.spec.x_signs.assign(size_t(rungs), 1);
    out.spec.y_signs.assign(size_t(rungs), 1);
    out.vertex_map = vm;
    out.edge_map.assign(size_t(g.edge_slots()), -1);
    for (auto& [pr, gids] : by_pair_g) {
        auto it = by_pair_l.find(pr);
        if (it == by_pair_l.end() || it->second.size() != gids.size())
            throw Error(errc::internal, "ladder realization pair classes mismatch");
        for (size_t i = 0; i < gids.size(); ++i) {
            int gid = gids[i];
            int lid = it->second[i];
            out.edge_map[size_t(gid)] = lid;
            int sign = g.edge(gid).sign;
            if (lid < rungs)
                out.spec.rung_signs[size_t(lid)] = sign;
            else if (lid < 2 * rungs)
                out.spec.x_signs[size_t(lid - rungs)] = sign;
            else
                out.spec.y_signs[size_t(lid - 2 * rungs)] = sign;
        }
    }
    return out;
}

// --- circuit helpers --------------------------------------------------------

bool is_hamiltonian_circuit(const SignedGraph& g, const std::vector<int>& edges) {
    if (int(edges.size()) != g.vertex_count() || edges.empty()) return false;
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : edges) {
        if (!g.edge_alive(id)) return false;
        deg[size_t(g.edge(id).u)]++;
        deg[size_t(g.edge(id).v)]++;
    }
    for (int d : deg)
        if (d != 2) return false;
    return g.components(g.ref(edges)).size() == 1;
}

// Splits a circuit (sorted edge ids, every vertex degree 2) into the two
// edge-disjoint paths between distinct vertices a and b: the first path
// leaves a along its smallest incident circuit edge.
std::pair<std::vector<int>, std::vector<int>> circuit_split(const SignedGraph& g,
                                                            const std::vector<int>& circuit,
                                                            int a, int b) {
    std::vector<char> in(size_t(g.edge_slots()), 0), used(size_t(g.edge_slots()), 0);
    for (int id : circuit) in[size_t(id)] = 1;
    std::vector<int> first;
    int cur = a;
    while (cur != b) {
        int chosen = -1;
        for (int id : g.incident(cur))
            if (in[size_t(id)] && !used[size_t(id)]) {
                chosen = id;
                break;
            }
        if (chosen < 0) throw Error(errc::internal, "circuit walk dead end");
        used[size_t(chosen)] = 1;
        first.push_back(chosen);
        const Edge& e = g.edge(chosen);
        cur = e.u == cur ? e.v : e.u;
        if (int(first.size()) > int(circuit.size()))
            throw Error(errc::internal, "circuit walk does not terminate");
    }
    std::vector<int> second;
    for (int id : circuit)
        if (!used[size_t(id)]) second.push_back(id);
    return {sorted_unique(first), sorted_unique(second)};
}

// Checks that `part` is a connected Eulerian edge set with an odd number of
// negative edges whose support contains `hub`.
void check_part(const SignedGraph& g, const std::vector<int>& part, int hub) {
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    int neg = 0;
    for (int id : part) {
        const Edge& e = g.edge(id);
        deg[size_t(e.u)]++;
        deg[size_t(e.v)]++;
        if (e.sign < 0) ++neg;
    }
    bool ok = neg % 2 == 1 && deg[size_t(hub)] > 0;
    for (int d : deg) ok = ok && d % 2 == 0;
    ok = ok && g.components(g.ref(part)).size() == 1;
    if (!ok) throw Error(errc::internal, "constructed Eulerian part violates its invariants");
}

// Enumerates Hamiltonian circuits of the `avail` edge set containing the
// edge `forced`; calls cb with sorted edge ids, stops when cb returns true.
bool enum_hamiltonian(const SignedGraph& g, const std::vector<char>& avail, int forced,
                      const std::function<bool(const std::vector<int>&)>& cb) {
    int n = g.vertex_count();
    const Edge& fe = g.edge(forced);
    std::vector<char> visited(size_t(n), 0);
    std::vector<int> used{forced};
    visited[size_t(fe.u)] = 1;
    visited[size_t(fe.v)] = 1;
    int count = 2;
    std::function<bool(int)> dfs = [&](int cur) -> bool {
        if (count == n) {
            for (int id : g.incident(cur)) {
                if (!avail[size_t(id)] || id == forced) continue;
                const Edge& e = g.edge(id);
                int w = e.u == cur ? e.v : e.u;
                if (w != fe.u) continue;
                used.push_back(id);
                bool stop = cb(sorted_unique(used));
                used.pop_back();
                if (stop) return true;
            }
            return false;
        }
        for (int id : g.incident(cur)) {
            if (!avail[size_t(id)] || id == forced) continue;
            const Edge& e = g.edge(id);
            int w = e.u == cur ? e.v : e.u;
            if (visited[size_t(w)]) continue;
            visited[size_t(w)] = 1;
            ++count;
            used.push_back(id);
            if (dfs(w)) return true;
            used.pop_back();
            --count;
            visited[size_t(w)] = 0;
        }
        return false;
    };
    return dfs(fe.v);
}

} // namespace

// --- public API --------------------------------------------------------------

long long cayley_order(const CayleySpec& spec) { return Group(spec.group).size; }

SignedGraph gen_cayley(const CayleySpec& spec) {
    Emission em = plan_emission(spec);
    return emit_graph(em, spec.signs);
}

std::optional<LadderRealization> recognize_cubic_cayley_ladder(const SignedGraph& g,
                                                               const CayleySpec& spec) {
    Emission em = plan_emission(spec);
    require_matching_structure(g, em);
    return realize_ladder(g, em);
}

FlowAssignment six_nzf_abelian_cayley(const SignedGraph& g, const CayleySpec& spec) {
    Emission em = plan_emission(spec);
    require_matching_structure(g, em);
    if (!g.connected()) throw Error(errc::disconnected, "the connection set does not generate the group");
    AdmissibilityResult adm = is_flow_admissible(g);
    if (!adm.admissible)
        throw Error(errc::not_flow_admissible, "graph is not flow-admissible: " + adm.reason);
    if (g.edge_count() == 0) return make_zero_flow(g, FlowMode::Integer, 2);

    FlowAssignment out;
    if (em.valency >= 4) {
        SearchReport rep = exists_nzf(g, 4, FlowMode::Integer);
        if (rep.decision != Decision::Exists)
            throw Error(errc::internal,
                        "4-NZF search failed on an admissible Cayley graph of valency >= 4");
        out = *rep.witness;
    } else if (em.valency == 3) {
        std::optional<LadderRealization> real = realize_ladder(g, em);
        if (!real)
            throw Error(errc::internal, "connected cubic Cayley graph did not realize a ladder");
        SignedGraph ladder = gen_ladder(real->spec);
        FlowAssignment lf = real->spec.kind == LadderKind::Circular ? six_nzf_circular(ladder)
                                                                    : six_nzf_moebius(ladder);
        out = make_zero_flow(g, FlowMode::Integer, lf.k);
        for (int gid : g.edge_ids()) {
            int lid = real->edge_map[size_t(gid)];
            const Edge& ge = g.edge(gid);
            const Edge& le = ladder.edge(lid);
            int lu = real->vertex_map[size_t(ge.u)];
            int end_l = le.u == lu ? 0 : 1;
            long long inflow = (long long)lf.tau.at(lid, end_l) * lf.value[size_t(lid)];
            out.value[size_t(gid)] = int(inflow) * out.tau.at(gid, 0);
        }
    } else { // valency == 2 after the admissibility gate: a balanced circuit
        out = two_nzf_on_even(g, g.full_ref());
    }

    VerifyResult vr = verify_flow(g, out);
    if (!vr.valid_flow || !vr.nowhere_zero)
        throw Error(errc::internal, "constructed Cayley flow failed verification");
    return out;
}

FlowAssignment hamilton_decomposable_3flow(const SignedGraph& g, const SubgraphRef& c1,
                                           const SubgraphRef& c2, const SubgraphRef& c3,
                                           ThreeFlowParts* parts_out) {
    g.check_ref(c1);
    g.check_ref(c2);
    g.check_ref(c3);
    std::vector<std::vector<int>> circ{c1.edges, c2.edges, c3.edges};
    for (const auto& c : circ)
        if (!is_hamiltonian_circuit(g, c))
            throw Error(errc::not_decomposition, "each part must be a Hamiltonian circuit");
    std::vector<int> all;
    for (const auto& c : circ) all.insert(all.end(), c.begin(), c.end());
    std::vector<int> merged = sorted_unique(all);
    if (all.size() != merged.size() || merged != g.edge_ids())
        throw Error(errc::not_decomposition,
                    "the three circuits must partition the edge set");
    if (g.negative_count() % 2 == 0)
        throw Error(errc::even_negative_count,
                    "an even negative count admits a 2-NZF; the 3-flow split needs an odd one");
    AdmissibilityResult adm = is_flow_admissible(g);
    if (!adm.admissible)
        throw Error(errc::not_flow_admissible, "graph is not flow-admissible: " + adm.reason);

    int unbalanced = 0;
    for (const auto& c : circ)
        if (g.sign_product(c) < 0) ++unbalanced;
    if (unbalanced % 2 == 0)
        throw Error(errc::internal, "odd negative total forces an odd unbalanced-circuit count");

    SignedGraph gs = g;
    std::vector<int> switching;
    std::vector<std::vector<int>> parts;
    int hub = 0;

    if (unbalanced == 3) {
        parts = circ;
        hub = 0;
    } else {
        std::stable_partition(circ.begin(), circ.end(),
                              [&](const std::vector<int>& c) { return g.sign_product(c) < 0; });
        auto bal = g.restriction(circ[1]).is_balanced();
        if (!bal.balanced) throw Error(errc::internal, "balanced circuit failed to switch positive");
        switching = bal.switching_set;
        gs = g.switch_at(switching);
        for (int id : circ[1])
            if (gs.edge(id).sign < 0)
                throw Error(errc::internal, "switching did not make the second circuit positive");

        std::vector<int> neg3;
        for (int id : circ[2])
            if (gs.edge(id).sign < 0) neg3.push_back(id);

        if (!neg3.empty()) {
            // Case 1: a negative edge e on the third circuit closes one half
            // of the positive circuit; the other half absorbs the rest.
            int e = neg3[0];
            int a = gs.edge(e).u, b = gs.edge(e).v;
            auto [pa, pb] = circuit_split(gs, circ[1], a, b);
            std::vector<int> part1 = pa;
            part1.push_back(e);
            std::vector<int> rest3;
            for (int id : circ[2])
                if (id != e) rest3.push_back(id);
            std::vector<int> part2 = pb;
            part2.insert(part2.end(), rest3.begin(), rest3.end());
            parts = {sorted_unique(part1), sorted_unique(part2), circ[0]};
            hub = a;
        } else {
            // Case 2: all negatives sit on the unbalanced circuit.  Peel two
            // of them off into single-negative circuits through the two
            // positive circuits; the remainder keeps an odd count.  A single
            // negative edge overall is impossible here: the admissibility
            // gate rejects such signatures.
            std::vector<int> neg1;
            for (int id : circ[0])
                if (gs.edge(id).sign < 0) neg1.push_back(id);
            if (neg1.size() < 3)
                throw Error(errc::internal,
                            "admissible all-on-one-circuit case needs at least three negatives");
            int e1 = neg1[0], e2 = neg1[1];
            int u1 = gs.edge(e1).u, v1 = gs.edge(e1).v;
            int u2 = gs.edge(e2).u, v2 = gs.edge(e2).v;
            auto [p2a, p2b] = circuit_split(gs, circ[1], u1, v1);
            auto [p3a, p3b] = circuit_split(gs, circ[2], u2, v2);
            auto touches = [&](const std::vector<int>& path, int v) {
                for (int id : path)
                    if (gs.edge(id).u == v || gs.edge(id).v == v) return true;
                return false;
            };
            std::vector<int>& delta = touches(p3a, u1) || u1 == u2 || u1 == v2 ? p3a : p3b;
            std::vector<int>& gamma = (&delta == &p3a) ? p3b : p3a;

            std::vector<int> part1;
            for (int id : circ[0])
                if (id != e1 && id != e2) part1.push_back(id);
            part1.insert(part1.end(), p2b.begin(), p2b.end());
            part1.insert(part1.end(), gamma.begin(), gamma.end());
            std::vector<int> part2 = p2a;
            part2.push_back(e1);
            std::vector<int> part3 = delta;
            part3.push_back(e2);
            parts = {sorted_unique(part1), sorted_unique(part2), sorted_unique(part3)};
            hub = u1;
        }
    }

    for (const auto& part : parts) check_part(gs, part, hub);

    const int magnitudes[3] = {1, 1, 2};
    std::vector<FlowAssignment> flows;
    for (int i = 0; i < 3; ++i) {
        DefectFlow df = tour_flow_with_defects(gs, gs.ref(parts[size_t(i)]), magnitudes[i], hub);
        if (df.defects.size() != 1 || df.defects[0].first != hub ||
            df.defects[0].second != 2 * magnitudes[i])
            throw Error(errc::internal, "tour defect did not land on the hub");
        flows.push_back(std::move(df.flow));
    }
    FlowAssignment f = combine(gs, 1, flows[0], 1, flows[1]);
    f = combine(gs, 1, f, -1, flows[2]);
    f.k = 3;
    VerifyResult vr = verify_flow(gs, f);
    if (!vr.valid_flow || !vr.nowhere_zero)
        throw Error(errc::internal, "assembled 3-flow failed verification on the switched graph");
    if (!switching.empty()) {
        f = transport_switching(f, gs, switching);
        vr = verify_flow(g, f);
        if (!vr.valid_flow || !vr.nowhere_zero)
            throw Error(errc::internal, "assembled 3-flow failed verification after switching back");
    }
    if (parts_out) {
        parts_out->parts = parts;
        parts_out->hub = hub;
    }
    return f;
}

std::optional<std::vector<std::vector<int>>> find_hamilton_decomposition(
    const SignedGraph& g, const CayleySpec& spec) {
    Emission em = plan_emission(spec);
    require_matching_structure(g, em);

    // Generator-class fast path: three full-order copies are three rotational
    // Hamiltonian circuits already.
    if (em.copies.size() == 3) {
        bool all_full = true;
        for (const EmittedCopy& copy : em.copies) {
            const ConnClass& cls = em.classes[size_t(copy.cls)];
            if (cls.involution || em.group.order_of(cls.rep) != em.group.size) all_full = false;
        }
        if (all_full) {
            std::vector<std::vector<int>> out;
            for (const EmittedCopy& copy : em.copies) {
                std::vector<int> ids(size_t(copy.count));
                std::iota(ids.begin(), ids.end(), copy.first_edge);
                out.push_back(std::move(ids));
            }
            return out;
        }
    }

    // Exact backtracking: the first circuit owns edge 0, the second owns the
    // smallest remaining edge, the third takes whatever is left.
    std::vector<char> avail(size_t(g.edge_slots()), 0);
    for (int id : g.edge_ids()) avail[size_t(id)] = 1;
    std::optional<std::vector<std::vector<int>>> result;
    enum_hamiltonian(g, avail, 0, [&](const std::vector<int>& h1) {
        std::vector<char> avail2 = avail;
        int lowest = -1;
        for (int id : h1) avail2[size_t(id)] = 0;
        for (int id = 0; id < g.edge_slots(); ++id)
            if (avail2[size_t(id)]) {
                lowest = id;
                break;
            }
        if (lowest < 0) return false;
        enum_hamiltonian(g, avail2, lowest, [&](const std::vector<int>& h2) {
            std::vector<int> h3;
            for (int id = 0; id < g.edge_slots(); ++id)
                if (avail2[size_t(id)] && !contains_id(h2, id)) h3.push_back(id);
            if (!is_hamiltonian_circuit(g, h3)) return false;
            result = std::vector<std::vector<int>>{h1, h2, h3};
            return true;
        });
        return result.has_value();
    });
    return result;
}

OddCayleyPhi flow_number_odd_cayley(const SignedGraph& g, const CayleySpec& spec) {
    Emission em = plan_emission(spec);
    if (em.group.size % 2 == 0)
        throw Error(errc::even_order, "the classification needs a group of odd order");
    require_matching_structure(g, em);
    if (!g.connected())
        throw Error(errc::disconnected, "the connection set does not generate the group");
    AdmissibilityResult adm = is_flow_admissible(g);
    if (!adm.admissible)
        throw Error(errc::not_flow_admissible, "graph is not flow-admissible: " + adm.reason);

    OddCayleyPhi out;
    if (g.edge_count() == 0) {
        out.phi = 2;
        out.flow = make_zero_flow(g, FlowMode::Integer, 2);
        return out;
    }
    if (g.negative_count() % 2 == 0) {
        out.phi = 2;
        out.flow = two_nzf_on_even(g, g.full_ref());
    } else {
        int pairs = em.valency / 2;
        if (pairs < 2)
            throw Error(errc::internal,
                        "an odd-negative 2-regular instance survived the admissibility gate");
        if (pairs == 2) {
            SearchReport rep3 = exists_nzf(g, 3, FlowMode::Integer);
            if (rep3.decision != Decision::NotExists)
                throw Error(errc::internal, "valency-4 classification expects no 3-NZF");
            SearchReport rep4 = exists_nzf(g, 4, FlowMode::Integer);
            if (rep4.decision != Decision::Exists)
                throw Error(errc::internal, "valency-4 classification expects a 4-NZF");
            out.phi = 4;
            out.flow = *rep4.witness;
            out.exhaustion = rep3;
        } else if (pairs == 3) {
            auto dec = find_hamilton_decomposition(g, spec);
            if (!dec)
                throw Error(errc::internal,
                            "6-regular odd abelian Cayley graphs are Hamilton-decomposable");
            out.flow = hamilton_decomposable_3flow(g, g.ref((*dec)[0]), g.ref((*dec)[1]),
                                                   g.ref((*dec)[2]), &out.parts);
            out.phi = 3;
        } else {
            SearchReport rep3 = exists_nzf(g, 3, FlowMode::Integer);
            if (rep3.decision != Decision::Exists)
                throw Error(errc::internal,
                            "valency >= 8 classification expects a 3-NZF");
            out.phi = 3;
            out.flow = *rep3.witness;
        }
    }
    VerifyResult vr = verify_flow(g, out.flow);
    if (!vr.valid_flow || !vr.nowhere_zero)
        throw Error(errc::internal, "classification certificate failed verification");
    return out;
}

std::string cayley_spec_to_json(const CayleySpec& spec) {
    nlohmann::json j;
    j["group"] = spec.group;
    j["connection"] = spec.connection;
    if (!spec.signs.empty()) j["signs"] = spec.signs;
    return j.dump(2) + "\n";
}

CayleySpec cayley_spec_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::format_error, std::string("cayley spec parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("group") || !j.contains("connection"))
        throw Error(errc::format_error, "cayley spec needs 'group' and 'connection'");
    CayleySpec spec;
    try {
        spec.group = j.at("group").get<std::vector<int>>();
        spec.connection = j.at("connection").get<std::vector<std::vector<int>>>();
        if (j.contains("signs")) spec.signs = j.at("signs").get<std::vector<int>>();
    } catch (const std::exception& e) {
        throw Error(errc::format_error, std::string("cayley spec field type: ") + e.what());
    }
    return spec;
}

} // namespace sgf
