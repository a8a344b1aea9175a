#include "sgf/six_flow.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sgf/admissible.hpp"
#include "sgf/errors.hpp"
#include "sgf/graph_json.hpp"
#include "sgf/reduction.hpp"

namespace sgf {

namespace {

std::vector<int> negative_edges(const SignedGraph& g) {
    std::vector<int> out;
    for (int id : g.edge_ids())
        if (g.edge(id).sign < 0)
            out.push_back(id);
    return out;
}

// A spanning circuit walked into rotation order.  verts[0] is the smallest
// vertex, edges[i] joins verts[i] and verts[(i + 1) % n], and the first step
// leaves along the smaller incident edge id, so the walk is deterministic.
struct CircuitWalk {
    std::vector<int> verts;
    std::vector<int> edges;
    std::vector<int> pos; // vertex -> position along the walk, -1 off it
};

CircuitWalk walk_circuit(const SignedGraph& g, const std::vector<int>& circuit) {
    std::vector<std::vector<std::pair<int, int>>> inc(size_t(g.vertex_count()));
    int start = g.vertex_count();
    for (int id : circuit) {
        const Edge& e = g.edge(id);
        inc[size_t(e.u)].push_back({id, e.v});
        inc[size_t(e.v)].push_back({id, e.u});
        start = std::min({start, e.u, e.v});
    }
    for (auto& row : inc)
        std::sort(row.begin(), row.end());
    CircuitWalk w;
    w.pos.assign(size_t(g.vertex_count()), -1);
    int prev_edge = -1;
    int at = start;
    for (size_t step = 0; step < circuit.size(); ++step) {
        w.pos[size_t(at)] = int(step);
        w.verts.push_back(at);
        bool moved = false;
        for (auto [id, other] : inc[size_t(at)]) {
            if (id == prev_edge)
                continue;
            w.edges.push_back(id);
            prev_edge = id;
            at = other;
            moved = true;
            break;
        }
        if (!moved)
            throw Error(errc::internal, "circuit walk stuck");
    }
    if (at != start)
        throw Error(errc::internal, "circuit walk did not close");
    return w;
}

// h must be a single circuit through every vertex of g.
void require_spanning_circuit(const SignedGraph& g, const SubgraphRef& h,
                              const char* code) {
    try {
        g.check_ref(h);
    } catch (const Error& ex) {
        throw Error(code, std::string("bad circuit reference: ") + ex.what());
    }
    if (g.vertex_count() < 2 || int(h.edges.size()) != g.vertex_count())
        throw Error(code, "edge set is not a spanning circuit");
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : h.edges) {
        deg[size_t(g.edge(id).u)] += 1;
        deg[size_t(g.edge(id).v)] += 1;
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (deg[size_t(v)] != 2)
            throw Error(code, "vertex " + std::to_string(v) +
                                  " does not lie on exactly two circuit edges");
    if (g.components(g.ref(h.edges, true)).size() != 1)
        throw Error(code, "the circuit edges form more than one circuit");
}

void require_all_positive(const SignedGraph& g, const std::vector<int>& ids,
                          const char* code, const char* what) {
    for (int id : ids)
        if (g.edge(id).sign < 0)
            throw Error(code, std::string(what) + " must be all-positive");
}

// Chords cross iff their endpoint positions interleave strictly along the
// circuit; sharing an endpoint counts as parallel.
bool chords_cross(const SignedGraph& g, const CircuitWalk& w, int c1, int c2) {
    auto span = [&](int c) {
        const Edge& e = g.edge(c);
        int i = w.pos[size_t(e.u)];
        int j = w.pos[size_t(e.v)];
        return std::pair<int, int>(std::min(i, j), std::max(i, j));
    };
    auto [i, j] = span(c1);
    auto [k, l] = span(c2);
    bool k_inside = i < k && k < j;
    bool l_inside = i < l && l < j;
    return k_inside != l_inside;
}

void assert_six_nzf(const SignedGraph& g, const FlowAssignment& fa,
                    const char* who) {
    VerifyResult vr = verify_flow(g, fa);
    if (!vr.valid_flow || !vr.nowhere_zero)
        throw Error(errc::internal,
                    std::string(who) + ": constructed flow failed verification");
}

int tau_at_vertex(const SignedGraph& g, const Orientation& tau, int id, int v) {
    const Edge& e = g.edge(id);
    return e.u == v ? tau.at(id, 0) : tau.at(id, 1);
}

// 3-flow whose value is exactly +-1 on every edge outside the circuit.
// Works by taking the symmetric difference of one fundamental circuit per
// chord (through the circuit minus its smallest edge id) — an even set
// containing every chord — and parity-lifting it.  Requires the circuit
// all-positive and the total number of negative edges even.
FlowAssignment three_flow_chords_pm1(const SignedGraph& g,
                                     const std::vector<int>& circuit) {
    CircuitWalk w = walk_circuit(g, circuit);
    int n = int(w.verts.size());
    int removed = circuit.front(); // smallest circuit edge id
    int a = 0;
    while (w.edges[size_t(a)] != removed)
        ++a;
    // Path order: verts[a+1], ..., verts[a]; path edge t is walk edge a+1+t.
    std::vector<char> in_circuit(size_t(g.edge_slots()), 0);
    for (int id : circuit)
        in_circuit[size_t(id)] = 1;
    std::vector<char> support(size_t(g.edge_slots()), 0);
    for (int id : g.edge_ids()) {
        if (in_circuit[size_t(id)])
            continue;
        support[size_t(id)] ^= 1;
        const Edge& e = g.edge(id);
        int pu = (w.pos[size_t(e.u)] - (a + 1) + n) % n;
        int pv = (w.pos[size_t(e.v)] - (a + 1) + n) % n;
        for (int t = std::min(pu, pv); t < std::max(pu, pv); ++t)
            support[size_t(w.edges[size_t((a + 1 + t) % n)])] ^= 1;
    }
    std::vector<int> support_ids;
    for (int id : g.edge_ids())
        if (support[size_t(id)])
            support_ids.push_back(id);
    FlowAssignment fz = z2_flow_on_even(g, g.ref(support_ids));
    return lift_z2_to_3flow(g, fz);
}

// Boundary-zero integer assignment supported on the circuit plus chords c1,
// c2, with prescribed magnitudes: mag_c on both chords, p_mag on the arc
// containing p_probe_edge (when >= 0), other_mag on the remaining arcs.
// The four arcs between consecutive chord endpoints each carry a constant
// transit; the 64 sign patterns are scanned in a fixed order and the first
// one with zero boundary at all four branch vertices wins.
FlowAssignment circuit_chord_template(const SignedGraph& g,
                                      const CircuitWalk& w, int c1, int c2,
                                      int mag_c, int p_probe_edge, int p_mag,
                                      int other_mag, int k) {
    int n = int(w.verts.size());
    const Edge& E1 = g.edge(c1);
    const Edge& E2 = g.edge(c2);
    std::array<int, 4> bp = {w.pos[size_t(E1.u)], w.pos[size_t(E1.v)],
                             w.pos[size_t(E2.u)], w.pos[size_t(E2.v)]};
    std::sort(bp.begin(), bp.end());
    std::array<std::vector<int>, 4> arc_idx; // walk-edge indices per arc
    std::array<int, 4> arc_mag;
    for (int t = 0; t < 4; ++t) {
        arc_mag[size_t(t)] = other_mag;
        for (int i = bp[size_t(t)]; i != bp[size_t((t + 1) % 4)]; i = (i + 1) % n) {
            arc_idx[size_t(t)].push_back(i);
            if (w.edges[size_t(i)] == p_probe_edge)
                arc_mag[size_t(t)] = p_mag;
        }
    }
    Orientation tau = default_orientation(g);
    for (int mask = 0; mask < 64; ++mask) {
        std::array<int, 4> transit;
        for (int t = 0; t < 4; ++t)
            transit[size_t(t)] =
                (mask >> t & 1) ? arc_mag[size_t(t)] : -arc_mag[size_t(t)];
        int f1v = (mask >> 4 & 1) ? mag_c : -mag_c;
        int f2v = (mask >> 5 & 1) ? mag_c : -mag_c;
        bool ok = true;
        for (int t = 0; t < 4 && ok; ++t) {
            int v = w.verts[size_t(bp[size_t(t)])];
            // Walking a positive edge x->y contributes +transit at x and
            // -transit at y once f = -transit * tau(y); a branch vertex sees
            // its outgoing arc, its incoming arc, and its chord ends.
            long long sum = transit[size_t(t)] - transit[size_t((t + 3) % 4)];
            if (E1.u == v)
                sum += (long long)tau.at(c1, 0) * f1v;
            if (E1.v == v)
                sum += (long long)tau.at(c1, 1) * f1v;
            if (E2.u == v)
                sum += (long long)tau.at(c2, 0) * f2v;
            if (E2.v == v)
                sum += (long long)tau.at(c2, 1) * f2v;
            ok = sum == 0;
        }
        if (!ok)
            continue;
        FlowAssignment out = make_zero_flow(g, FlowMode::Integer, k);
        for (int t = 0; t < 4; ++t)
            for (int i : arc_idx[size_t(t)]) {
                int id = w.edges[size_t(i)];
                int head = w.verts[size_t((i + 1) % n)];
                out.value[size_t(id)] =
                    -transit[size_t(t)] * tau_at_vertex(g, tau, id, head);
            }
        out.value[size_t(c1)] = f1v;
        out.value[size_t(c2)] = f2v;
        return out;
    }
    throw Error(errc::internal, "no sign pattern satisfies the template");
}

int other_end(const SignedGraph& g, int id, int v) {
    const Edge& e = g.edge(id);
    return e.u == v ? e.v : e.u;
}

void append_labels(ConstructionTrace& tr, const ConstructionTrace& sub) {
    std::vector<std::string> labels = tr.case_labels;
    labels.insert(labels.end(), sub.case_labels.begin(), sub.case_labels.end());
    std::vector<int> switching = tr.switching_set;
    std::vector<int> circuit = tr.circuit_h;
    tr = sub;
    tr.case_labels = std::move(labels);
    tr.switching_set = std::move(switching);
    if (!circuit.empty())
        tr.circuit_h = std::move(circuit);
}

} // namespace

std::string trace_to_json(const SignedGraph& g, const ConstructionTrace& t) {
    nlohmann::json j;
    j["graph_sha"] = graph_sha(g);
    j["case_labels"] = t.case_labels;
    j["switching_set"] = t.switching_set;
    j["circuit_h"] = t.circuit_h;
    j["e1"] = t.e1;
    j["e2"] = t.e2;
    j["path_p"] = t.path_p;
    j["m"] = t.m_edges;
    j["m_p"] = t.m_p_edges;
    j["m_prime"] = t.m_prime_edges;
    j["m_star"] = t.m_star_edges;
    j["g1"] = t.g1_edges;
    j["g2"] = t.g2_edges;
    j["g3"] = t.g3_edges;
    j["g4"] = t.g4_edges;
    j["component_circuits"] = t.component_circuits;
    nlohmann::json flows = nlohmann::json::array();
    for (const auto& [label, fa] : t.flows) {
        nlohmann::json f;
        f["label"] = label;
        f["mode"] = fa.mode == FlowMode::Integer ? "int" : "mod";
        f["k"] = fa.k;
        nlohmann::json vals = nlohmann::json::object();
        for (size_t id = 0; id < fa.value.size(); ++id)
            if (fa.value[id] != 0)
                vals[std::to_string(id)] = fa.value[id];
        f["f"] = vals;
        flows.push_back(f);
    }
    j["flows"] = flows;
    j["chosen_sign"] = t.chosen_sign;
    return j.dump(2) + "\n";
}

FlowAssignment even_case(const SignedGraph& g, const SubgraphRef& h) {
    require_spanning_circuit(g, h, errc::precondition_violated);
    require_all_positive(g, h.edges, errc::precondition_violated,
                         "the spanning circuit");
    if (int(negative_edges(g).size()) % 2 != 0)
        throw Error(errc::odd_negative_count,
                    "the construction needs an even number of negative edges");
    FlowAssignment f1 = three_flow_chords_pm1(g, h.edges);
    FlowAssignment f2 = two_flow_on_positive_even(g, h);
    FlowAssignment out = combine(g, 1, f1, 3, f2);
    assert_six_nzf(g, out, "even-negatives construction");
    return out;
}

FlowAssignment intersect_case(const SignedGraph& g, const SubgraphRef& h,
                              int e1, int e2) {
    require_spanning_circuit(g, h, errc::precondition_violated);
    require_all_positive(g, h.edges, errc::precondition_violated,
                         "the spanning circuit");
    for (int id : {e1, e2})
        if (!g.edge_alive(id) || g.edge(id).sign > 0 ||
            std::binary_search(h.edges.begin(), h.edges.end(), id))
            throw Error(errc::not_intersecting,
                        "edge " + std::to_string(id) +
                            " is not a negative chord of the circuit");
    if (e1 == e2)
        throw Error(errc::not_intersecting, "the selected edges must differ");
    CircuitWalk w = walk_circuit(g, h.edges);
    if (!chords_cross(g, w, e1, e2))
        throw Error(errc::not_intersecting,
                    "the selected chords are parallel along the circuit");
    if (int(negative_edges(g).size()) % 2 == 0)
        return even_case(g, h);
    // Doubling a 3-flow on g - e1 that is +-1 on chords leaves only e1 at
    // zero; a magnitude-2 correction on the circuit and the crossing pair
    // fixes that, and exactly one sign keeps e2 nonzero.
    SignedGraph gdel = g.delete_edges({e1});
    FlowAssignment f1sub = three_flow_chords_pm1(gdel, h.edges);
    FlowAssignment f1 = make_zero_flow(g, FlowMode::Integer, 3);
    for (int id : gdel.edge_ids())
        f1.value[size_t(id)] = f1sub.value[size_t(id)];
    FlowAssignment f2 = circuit_chord_template(g, w, e1, e2, 2, -1, 0, 1, 3);
    for (int s : {+1, -1}) {
        FlowAssignment cand = combine(g, 2, f1, s, f2);
        cand.k = 6;
        VerifyResult vr = verify_flow(g, cand);
        if (vr.valid_flow && vr.nowhere_zero)
            return cand;
    }
    throw Error(errc::internal,
                "neither sign of the crossing-pair combination verified");
}

std::pair<FlowAssignment, ConstructionTrace>
parallel_case(const SignedGraph& g, const SubgraphRef& h) {
    require_spanning_circuit(g, h, errc::precondition_violated);
    require_all_positive(g, h.edges, errc::precondition_violated,
                         "the spanning circuit");
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) != 3)
            throw Error(errc::precondition_violated,
                        "the graph is not cubic at vertex " + std::to_string(v));
    std::vector<int> negs = negative_edges(g);
    if (negs.size() < 3 || negs.size() % 2 == 0)
        throw Error(errc::precondition_violated,
                    "the number of negative edges is not an odd count of at "
                    "least three");
    int n = g.vertex_count();
    CircuitWalk w = walk_circuit(g, h.edges);
    for (size_t i = 0; i < negs.size(); ++i)
        for (size_t j = i + 1; j < negs.size(); ++j)
            if (chords_cross(g, w, negs[i], negs[j]))
                throw Error(errc::precondition_violated,
                            "negative chords " + std::to_string(negs[i]) +
                                " and " + std::to_string(negs[j]) +
                                " cross along the circuit");
    std::vector<char> in_circuit(size_t(g.edge_slots()), 0);
    for (int id : h.edges)
        in_circuit[size_t(id)] = 1;
    std::vector<int> chord_at(size_t(n), -1); // cubic: one chord per vertex
    for (int id : g.edge_ids())
        if (!in_circuit[size_t(id)]) {
            chord_at[size_t(g.edge(id).u)] = id;
            chord_at[size_t(g.edge(id).v)] = id;
        }

    // Shortest circuit arc from an end of one negative chord forward to an
    // end of another, avoiding both far ends; its interior chords are then
    // automatically positive (an interior negative chord would yield a
    // strictly shorter such arc).  Ties by chord ids, then start position.
    struct Candidate {
        int len = 0, a = -1, b = -1, va = -1, vb = -1, pa = -1;
    };
    std::optional<Candidate> best;
    for (int a : negs)
        for (int b : negs) {
            if (a == b)
                continue;
            for (int va : {g.edge(a).u, g.edge(a).v})
                for (int vb : {g.edge(b).u, g.edge(b).v}) {
                    int pa = w.pos[size_t(va)];
                    int len = (w.pos[size_t(vb)] - pa + n) % n;
                    if (len == 0)
                        continue;
                    int ua = other_end(g, a, va);
                    int ub = other_end(g, b, vb);
                    int qa = (w.pos[size_t(ua)] - pa + n) % n;
                    int qb = (w.pos[size_t(ub)] - pa + n) % n;
                    if ((qa >= 1 && qa <= len - 1) || (qb >= 1 && qb <= len - 1))
                        continue;
                    bool clean = true;
                    for (int t = 1; t < len && clean; ++t) {
                        int c = chord_at[size_t(w.verts[size_t((pa + t) % n)])];
                        if (c >= 0 && g.edge(c).sign < 0)
                            clean = false;
                    }
                    if (!clean)
                        continue;
                    Candidate cd{len, a, b, va, vb, pa};
                    if (!best ||
                        std::tie(cd.len, cd.a, cd.b, cd.pa) <
                            std::tie(best->len, best->a, best->b, best->pa))
                        best = cd;
                }
        }
    if (!best)
        throw Error(errc::internal,
                    "no clean connecting arc between negative chords");

    int e1 = best->a, e2 = best->b, v1 = best->va, v2 = best->vb;
    int p1 = w.pos[size_t(v1)];
    int len = best->len; // number of path edges
    std::vector<int> p_edges;
    std::vector<char> interior(size_t(n), 0);
    for (int t = 0; t < len; ++t)
        p_edges.push_back(w.edges[size_t((p1 + t) % n)]);
    for (int t = 1; t < len; ++t)
        interior[size_t(w.verts[size_t((p1 + t) % n)])] = 1;

    ConstructionTrace tr;
    tr.circuit_h = h.edges;
    tr.e1 = e1;
    tr.e2 = e2;
    tr.path_p = p_edges;
    tr.g1_edges = h.edges;
    tr.g1_edges.push_back(e1);
    tr.g1_edges.push_back(e2);
    std::sort(tr.g1_edges.begin(), tr.g1_edges.end());

    // Remove e2 plus alternating path edges; on an even path also the
    // circuit edge e* just before the path, shifting its end off v1.
    bool odd_path = len % 2 == 1;
    tr.case_labels.push_back(odd_path ? "parallel subcase: odd path"
                                      : "parallel subcase: even path");
    std::vector<int> removed = {e2};
    std::vector<int> kept;
    int e_star = -1;
    if (odd_path) {
        for (int t = 0; t < len; t += 2)
            removed.push_back(p_edges[size_t(t)]);
        for (int t = 1; t < len; t += 2)
            kept.push_back(p_edges[size_t(t)]);
    } else {
        e_star = w.edges[size_t((p1 - 1 + n) % n)];
        removed.push_back(e_star);
        for (int t = 1; t < len; t += 2)
            removed.push_back(p_edges[size_t(t)]);
        for (int t = 0; t < len; t += 2)
            kept.push_back(p_edges[size_t(t)]);
    }
    SignedGraph g2 = g.delete_edges(removed);
    tr.g2_edges = g2.edge_ids();

    // Chord classification: M = chords minus e2; the chords at interior
    // path vertices (all positive) form the matching M_P; e1 counts as an
    // ordinary member of M' on an odd path but joins the kept family Q on
    // an even one.
    std::vector<int> m_all, m_p, m_prime;
    for (int id : g.edge_ids()) {
        if (in_circuit[size_t(id)] || id == e2)
            continue;
        m_all.push_back(id);
        if (id == e1)
            continue;
        const Edge& e = g.edge(id);
        if (interior[size_t(e.u)] || interior[size_t(e.v)])
            m_p.push_back(id);
        else
            m_prime.push_back(id);
    }
    if (odd_path) {
        m_prime.push_back(e1);
        std::sort(m_prime.begin(), m_prime.end());
    }
    tr.m_edges = m_all;
    tr.m_p_edges = m_p;
    tr.m_prime_edges = m_prime;

    std::vector<int> q_edges = m_p;
    q_edges.insert(q_edges.end(), kept.begin(), kept.end());
    if (!odd_path)
        q_edges.push_back(e1);
    std::sort(q_edges.begin(), q_edges.end());

    // The kept family splits into paths (ends off the path interior) and
    // all-positive circuits.
    std::vector<std::vector<int>> circuits;
    std::vector<std::pair<std::vector<int>, std::pair<int, int>>> q_paths;
    for (const SubgraphRef& comp : g.components(g.ref(q_edges))) {
        std::vector<int> deg(size_t(n), 0);
        for (int id : comp.edges) {
            deg[size_t(g.edge(id).u)] += 1;
            deg[size_t(g.edge(id).v)] += 1;
        }
        std::vector<int> ends;
        for (int v = 0; v < n; ++v)
            if (deg[size_t(v)] == 1)
                ends.push_back(v);
            else if (deg[size_t(v)] > 2)
                throw Error(errc::internal, "kept family is not a path system");
        if (ends.empty()) {
            require_all_positive(g, comp.edges, errc::internal,
                                 "every kept circuit");
            circuits.push_back(comp.edges);
        } else if (ends.size() == 2) {
            q_paths.push_back({comp.edges, {ends[0], ends[1]}});
        } else {
            throw Error(errc::internal, "kept component with odd ends");
        }
    }
    tr.component_circuits = circuits;

    // Residual circuit path P': the complement arc from v2 forward to v1,
    // shortened past e* on an even path.
    int pp_from = w.pos[size_t(v2)];
    int pp_limit = (n - len) - (odd_path ? 0 : 1); // number of P' edges
    std::vector<int> pp_index(size_t(n), -1);
    std::vector<int> pp_edges;
    for (int t = 0; t <= pp_limit; ++t)
        pp_index[size_t(w.verts[size_t((pp_from + t) % n)])] = t;
    for (int t = 0; t < pp_limit; ++t)
        pp_edges.push_back(w.edges[size_t((pp_from + t) % n)]);

    // Symmetric difference of one circuit per member of M' and per kept
    // path, each closed through P'.
    std::vector<char> g4(size_t(g.edge_slots()), 0);
    auto close_through_pp = [&](int x, int y, const std::vector<int>& extra) {
        int ix = pp_index[size_t(x)];
        int iy = pp_index[size_t(y)];
        if (ix < 0 || iy < 0)
            throw Error(errc::internal, "chord end off the residual path");
        for (int id : extra)
            g4[size_t(id)] ^= 1;
        for (int t = std::min(ix, iy); t < std::max(ix, iy); ++t)
            g4[size_t(pp_edges[size_t(t)])] ^= 1;
    };
    for (int id : m_prime)
        close_through_pp(g.edge(id).u, g.edge(id).v, {id});
    for (const auto& [edges, ends] : q_paths)
        close_through_pp(ends.first, ends.second, edges);
    std::vector<int> g4_ids;
    for (int id : g.edge_ids())
        if (g4[size_t(id)])
            g4_ids.push_back(id);
    tr.g4_edges = g4_ids;

    std::vector<int> g3_ids = pp_edges;
    g3_ids.insert(g3_ids.end(), m_prime.begin(), m_prime.end());
    for (const auto& [edges, ends] : q_paths)
        g3_ids.insert(g3_ids.end(), edges.begin(), edges.end());
    std::sort(g3_ids.begin(), g3_ids.end());
    tr.g3_edges = g3_ids;

    // Every chord and kept path edge must end up at +-1 in the lift, except
    // those on kept circuits, which the circuit 2-flows cover instead.
    std::vector<char> on_kept_circuit(size_t(g.edge_slots()), 0);
    for (const auto& circ : circuits)
        for (int id : circ)
            on_kept_circuit[size_t(id)] = 1;
    std::vector<int> m_star;
    for (int id : m_all)
        if (!on_kept_circuit[size_t(id)])
            m_star.push_back(id);
    for (int id : kept)
        if (!on_kept_circuit[size_t(id)])
            m_star.push_back(id);
    std::sort(m_star.begin(), m_star.end());
    tr.m_star_edges = m_star;
    for (int id : m_star)
        if (!g4[size_t(id)])
            throw Error(errc::internal,
                        "edge " + std::to_string(id) +
                            " missing from the parity support");

    // Lift the parity pattern to a 3-flow pinned to +-1 on m_star, then add
    // a 2-flow on each kept circuit.
    SignedGraph g3g = g.restriction(g3_ids);
    FlowAssignment f4 = z2_flow_on_even(g3g, g3g.ref(g4_ids));
    FlowAssignment f3 = lift_z2_to_3flow(g3g, f4);
    FlowAssignment f2 = make_zero_flow(g, FlowMode::Integer, 3);
    for (int id : g3_ids)
        f2.value[size_t(id)] = f3.value[size_t(id)];
    for (const auto& circ : circuits) {
        FlowAssignment fc = two_flow_on_positive_even(g, g.ref(circ));
        for (int id : circ)
            f2.value[size_t(id)] = fc.value[size_t(id)];
    }
    FlowAssignment f1 =
        circuit_chord_template(g, w, e1, e2, 2, p_edges.front(), 3, 1, 4);
    tr.flows.push_back({"f1", f1});
    tr.flows.push_back({"f2", f2});
    tr.flows.push_back({"f3", f3});
    tr.flows.push_back({"f4", f4});

    for (int s : {+1, -1}) {
        FlowAssignment cand = combine(g, 1, f1, 2 * s, f2);
        cand.k = 6;
        VerifyResult vr = verify_flow(g, cand);
        if (vr.valid_flow && vr.nowhere_zero) {
            tr.chosen_sign = s;
            return {cand, tr};
        }
    }
    throw Error(errc::internal,
                "neither sign of the parallel-pair combination verified");
}

std::pair<FlowAssignment, ConstructionTrace>
six_nzf_balanced_hamiltonian(const SignedGraph& g, const SubgraphRef& h) {
    if (!is_flow_admissible(g).admissible)
        throw Error(errc::not_flow_admissible,
                    "the graph has no nowhere-zero flow for any k");
    require_spanning_circuit(g, h, errc::not_balanced_hamiltonian);
    if (g.sign_product(h.edges) != 1)
        throw Error(errc::not_balanced_hamiltonian,
                    "the spanning circuit has negative total sign");

    ConstructionTrace tr;
    tr.circuit_h = h.edges;
    std::vector<int> switching =
        g.restriction(h.edges).is_balanced().switching_set;
    SignedGraph gs = g.switch_at(switching);
    tr.switching_set = switching;
    if (!switching.empty())
        tr.case_labels.push_back("switched at " +
                                 std::to_string(switching.size()) + " vertices");
    for (int id : h.edges)
        if (gs.edge(id).sign < 0)
            throw Error(errc::internal, "switching left the circuit negative");

    bool cubic = true;
    for (int v = 0; v < gs.vertex_count() && cubic; ++v)
        cubic = gs.degree(v) == 3;

    SubgraphRef hs = gs.ref(h.edges, true);
    FlowAssignment flow;
    if (!cubic) {
        tr.case_labels.push_back("regularized to a cubic graph");
        CoveringPair pair = covering_pair_supereulerian(gs, hs);
        ReductionResult red = three_regularize(gs, pair);
        auto [sub_flow, sub_tr] =
            six_nzf_balanced_hamiltonian(red.g_prime, red.j);
        append_labels(tr, sub_tr);
        // Contracting the added edges maps original edges to themselves, so
        // the flow pulls back id by id; the added edges are positive, so
        // their two boundary contributions cancel and drop out.
        flow = make_zero_flow(gs, FlowMode::Integer, 6);
        for (int id : gs.edge_ids()) {
            flow.value[size_t(id)] = sub_flow.value[size_t(id)];
            flow.tau.tau[size_t(id)] = sub_flow.tau.tau[size_t(id)];
        }
    } else {
        std::vector<int> negs = negative_edges(gs);
        if (int(negs.size()) % 2 == 0) {
            tr.case_labels.push_back("even-negatives case");
            flow = even_case(gs, hs);
        } else {
            CircuitWalk w = walk_circuit(gs, hs.edges);
            int c1 = -1, c2 = -1;
            for (size_t i = 0; i < negs.size() && c1 < 0; ++i)
                for (size_t j = i + 1; j < negs.size(); ++j)
                    if (chords_cross(gs, w, negs[i], negs[j])) {
                        c1 = negs[i];
                        c2 = negs[j];
                        break;
                    }
            if (c1 >= 0) {
                tr.case_labels.push_back("crossing-pair case");
                tr.e1 = c1;
                tr.e2 = c2;
                flow = intersect_case(gs, hs, c1, c2);
            } else {
                tr.case_labels.push_back("parallel-pair case");
                auto [pf, ptr] = parallel_case(gs, hs);
                append_labels(tr, ptr);
                flow = std::move(pf);
            }
        }
    }
    if (!switching.empty())
        flow = transport_switching(flow, gs, switching);
    flow.k = 6;
    assert_six_nzf(g, flow, "balanced-circuit construction");
    return {flow, tr};
}

FlowAssignment six_nzf_spanning_even_eulerian(const SignedGraph& g,
                                              const SubgraphRef& h) {
    if (!is_flow_admissible(g).admissible)
        throw Error(errc::not_flow_admissible,
                    "the graph has no nowhere-zero flow for any k");
    try {
        g.check_ref(h);
    } catch (const Error& ex) {
        throw Error(errc::not_even_eulerian,
                    std::string("bad subgraph reference: ") + ex.what());
    }
    if (g.vertex_count() == 0 || g.edge_count() == 0)
        return make_zero_flow(g, FlowMode::Integer, 6);
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : h.edges) {
        deg[size_t(g.edge(id).u)] += 1;
        deg[size_t(g.edge(id).v)] += 1;
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (deg[size_t(v)] % 2 != 0)
            throw Error(errc::not_even_eulerian,
                        "vertex " + std::to_string(v) +
                            " has odd degree in the subgraph");
    if (g.components(g.ref(h.edges, true)).size() != 1)
        throw Error(errc::not_even_eulerian,
                    "the subgraph does not connect every vertex");
    if (g.sign_product(h.edges) != 1)
        throw Error(errc::not_even_eulerian,
                    "the subgraph has an odd number of negative edges");
    CoveringPair pair = covering_pair_supereulerian(g, g.ref(h.edges, true));
    ReductionResult red = three_regularize(g, pair);
    auto [sub_flow, sub_tr] = six_nzf_balanced_hamiltonian(red.g_prime, red.j);
    (void)sub_tr;
    FlowAssignment out = make_zero_flow(g, FlowMode::Integer, 6);
    for (int id : g.edge_ids()) {
        out.value[size_t(id)] = sub_flow.value[size_t(id)];
        out.tau.tau[size_t(id)] = sub_flow.tau.tau[size_t(id)];
    }
    assert_six_nzf(g, out, "spanning-even construction");
    return out;
}

FlowAssignment six_nzf_kotzig(const SignedGraph& g, const SubgraphRef& m1,
                              const SubgraphRef& m2, const SubgraphRef& m3) {
    std::array<const SubgraphRef*, 3> ms = {&m1, &m2, &m3};
    for (const SubgraphRef* m : ms) {
        try {
            g.check_ref(*m);
        } catch (const Error& ex) {
            throw Error(errc::not_kotzig,
                        std::string("bad matching reference: ") + ex.what());
        }
        std::vector<int> deg(size_t(g.vertex_count()), 0);
        for (int id : m->edges) {
            deg[size_t(g.edge(id).u)] += 1;
            deg[size_t(g.edge(id).v)] += 1;
        }
        for (int v = 0; v < g.vertex_count(); ++v)
            if (deg[size_t(v)] != 1)
                throw Error(errc::not_kotzig,
                            "an edge set is not a perfect matching");
    }
    auto union_of = [&](const SubgraphRef& a, const SubgraphRef& b) {
        std::vector<int> ids = a.edges;
        ids.insert(ids.end(), b.edges.begin(), b.edges.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    };
    std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    for (auto [i, j] : pairs) {
        std::vector<int> ids = union_of(*ms[size_t(i)], *ms[size_t(j)]);
        try {
            require_spanning_circuit(g, g.ref(ids, true), errc::not_kotzig);
        } catch (const Error&) {
            throw Error(errc::not_kotzig,
                        "a pairwise union of the matchings is not a spanning "
                        "circuit");
        }
    }
    // Two of the three matchings share their negative-edge parity; their
    // union is a spanning circuit of positive total sign.
    for (auto [i, j] : pairs)
        if (g.sign_product(ms[size_t(i)]->edges) ==
            g.sign_product(ms[size_t(j)]->edges)) {
            std::vector<int> ids = union_of(*ms[size_t(i)], *ms[size_t(j)]);
            return six_nzf_balanced_hamiltonian(g, g.ref(ids, true)).first;
        }
    throw Error(errc::internal, "no parity-matched pair of matchings");
}

std::optional<std::vector<int>>
find_balanced_hamiltonian_circuit(const SignedGraph& g, long long node_budget) {
    int n = g.vertex_count();
    if (n < 2)
        return std::nullopt;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
    for (int id : g.edge_ids()) {
        const Edge& e = g.edge(id);
        adj[size_t(e.u)].push_back({id, e.v});
        adj[size_t(e.v)].push_back({id, e.u});
    }
    for (auto& row : adj)
        std::sort(row.begin(), row.end());
    struct BudgetOut {};
    std::vector<char> used(size_t(n), 0);
    std::vector<int> chosen;
    int sign_acc = 1;
    int visited = 1;
    long long left = node_budget;
    std::optional<std::vector<int>> found;
    std::function<void(int)> dfs = [&](int v) {
        if (found)
            return;
        if (--left < 0)
            throw BudgetOut{};
        if (visited == n) {
            for (auto [id, to] : adj[size_t(v)]) {
                if (to != 0 || (!chosen.empty() && id == chosen.back()))
                    continue;
                if (sign_acc * g.edge(id).sign == 1) {
                    std::vector<int> ids = chosen;
                    ids.push_back(id);
                    std::sort(ids.begin(), ids.end());
                    found = std::move(ids);
                    return;
                }
            }
            return;
        }
        for (auto [id, to] : adj[size_t(v)]) {
            if (found)
                return;
            if (used[size_t(to)])
                continue;
            used[size_t(to)] = 1;
            chosen.push_back(id);
            sign_acc *= g.edge(id).sign;
            visited += 1;
            dfs(to);
            visited -= 1;
            sign_acc *= g.edge(id).sign;
            chosen.pop_back();
            used[size_t(to)] = 0;
        }
    };
    used[0] = 1;
    try {
        dfs(0);
    } catch (const BudgetOut&) {
        return std::nullopt;
    }
    return found;
}

} // namespace sgf
