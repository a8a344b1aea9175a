#include "sgf/flow.hpp"

#include <algorithm>
#include <cstdlib>

#include "sgf/graph_json.hpp"

#include <json.hpp>

namespace sgf {

using nlohmann::json;

Orientation default_orientation(const SignedGraph& g) {
    Orientation o;
    o.tau.assign(size_t(g.edge_slots()), {0, 0});
    for (int id : g.edge_ids()) {
        const Edge& e = g.edge(id);
        if (e.sign > 0) {
            // Directed from the smaller endpoint to the larger one.
            if (e.u < e.v)
                o.tau[size_t(id)] = {1, -1};
            else
                o.tau[size_t(id)] = {-1, 1};
        } else {
            // Negative edges start extroverted; value signs flip to introverted.
            o.tau[size_t(id)] = {1, 1};
        }
    }
    return o;
}

void check_orientation(const SignedGraph& g, const Orientation& o) {
    if (int(o.tau.size()) != g.edge_slots())
        throw Error(errc::format_error, "orientation size does not match the graph");
    for (int id : g.edge_ids()) {
        int tu = o.tau[size_t(id)][0];
        int tv = o.tau[size_t(id)][1];
        if ((tu != 1 && tu != -1) || (tv != 1 && tv != -1))
            throw Error(errc::format_error, "tau must be +1 or -1 on edge " + std::to_string(id));
        if (tu * tv != -g.edge(id).sign)
            throw Error(errc::format_error,
                        "orientation violates tau_u*tau_v == -sign on edge " + std::to_string(id));
    }
}

FlowAssignment make_zero_flow(const SignedGraph& g, FlowMode mode, int k) {
    if (k < 2)
        throw Error(errc::bad_k, "k must be at least 2");
    FlowAssignment fa;
    fa.mode = mode;
    fa.k = k;
    fa.tau = default_orientation(g);
    fa.value.assign(size_t(g.edge_slots()), 0);
    return fa;
}

long long boundary(const SignedGraph& g, const FlowAssignment& fa, int v) {
    long long s = 0;
    for (int id : g.incident(v)) {
        const Edge& e = g.edge(id);
        if (e.u == v)
            s += (long long)fa.tau.at(id, 0) * fa.value[size_t(id)];
        if (e.v == v)
            s += (long long)fa.tau.at(id, 1) * fa.value[size_t(id)];
    }
    return s;
}

VerifyResult verify_flow(const SignedGraph& g, const FlowAssignment& fa) {
    VerifyResult res;
    if (fa.k < 2 || int(fa.tau.tau.size()) != g.edge_slots() ||
        int(fa.value.size()) != g.edge_slots()) {
        res.violations.push_back({"orientation", -1, -1});
        return res;
    }
    bool zero_free = true;
    bool sound = true;
    for (int id : g.edge_ids()) {
        const Edge& e = g.edge(id);
        int tu = fa.tau.at(id, 0), tv = fa.tau.at(id, 1);
        if ((tu != 1 && tu != -1) || (tv != 1 && tv != -1) || tu * tv != -e.sign) {
            res.violations.push_back({"orientation", id, -1});
            sound = false;
            continue;
        }
        int f = fa.value[size_t(id)];
        bool in_range = fa.mode == FlowMode::Integer ? (std::abs(f) <= fa.k - 1)
                                                     : (f >= 0 && f <= fa.k - 1);
        if (!in_range) {
            res.violations.push_back({"range", id, -1});
            sound = false;
        }
        if (f == 0) {
            res.violations.push_back({"zero", id, -1});
            zero_free = false;
        }
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        long long b = boundary(g, fa, v);
        bool ok = fa.mode == FlowMode::Integer ? (b == 0) : (((b % fa.k) + fa.k) % fa.k == 0);
        if (!ok) {
            res.violations.push_back({"boundary", -1, v});
            sound = false;
        }
    }
    res.valid_flow = sound;
    res.nowhere_zero = sound && zero_free;
    return res;
}

FlowAssignment combine(const SignedGraph& g, long long a, const FlowAssignment& f1, long long b,
                       const FlowAssignment& f2) {
    if (f1.mode != f2.mode)
        throw Error(errc::mode_mismatch, "cannot combine integer and modular flows");
    if (f1.mode == FlowMode::Modular && f1.k != f2.k)
        throw Error(errc::mode_mismatch, "modular combination requires equal k");
    check_orientation(g, f1.tau);
    check_orientation(g, f2.tau);

    FlowAssignment out;
    out.mode = f1.mode;
    out.tau = f1.tau;
    out.value.assign(size_t(g.edge_slots()), 0);
    if (f1.mode == FlowMode::Integer) {
        long long k = std::llabs(a) * (f1.k - 1) + std::llabs(b) * (f2.k - 1) + 1;
        out.k = int(k);
    } else {
        out.k = f1.k;
    }
    for (int id : g.edge_ids()) {
        // Both orientations satisfy the law for the same sign, so per edge
        // they are equal or fully opposite.
        long long s2 = f2.tau.at(id, 0) == f1.tau.at(id, 0) ? 1 : -1;
        long long val = a * f1.value[size_t(id)] + s2 * b * f2.value[size_t(id)];
        if (out.mode == FlowMode::Modular) val = ((val % out.k) + out.k) % out.k;
        out.value[size_t(id)] = int(val);
    }
    return out;
}

FlowAssignment transport_switching(const FlowAssignment& fa, const SignedGraph& g_before,
                                   const std::vector<int>& U) {
    std::vector<char> in_u(size_t(g_before.vertex_count()), 0);
    for (int v : U) {
        if (v < 0 || v >= g_before.vertex_count())
            throw Error(errc::bad_vertex, "switching set vertex out of range");
        in_u[size_t(v)] = 1;
    }
    FlowAssignment out = fa;
    for (int id : g_before.edge_ids()) {
        const Edge& e = g_before.edge(id);
        if (in_u[size_t(e.u)]) out.tau.tau[size_t(id)][0] = -out.tau.tau[size_t(id)][0];
        if (in_u[size_t(e.v)]) out.tau.tau[size_t(id)][1] = -out.tau.tau[size_t(id)][1];
    }
    return out;
}

namespace {

void require_even(const SignedGraph& g, const SubgraphRef& h, const char* what) {
    std::vector<int> deg(size_t(g.vertex_count()), 0);
    for (int id : h.edges) {
        deg[size_t(g.edge(id).u)]++;
        deg[size_t(g.edge(id).v)]++;
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (deg[size_t(v)] % 2 != 0)
            throw Error(errc::not_even, std::string(what) + ": vertex " + std::to_string(v) +
                                            " has odd degree in the edge set");
}

std::vector<EulerStep> rotated_tour(const SignedGraph& g, const SubgraphRef& comp, int base) {
    std::vector<EulerStep> tour = g.euler_tour(comp);
    if (base < 0) return tour;
    size_t s = 0;
    while (s < tour.size() && tour[s].from != base) ++s;
    if (s == 0 || s >= tour.size()) return tour;
    std::vector<EulerStep> rot(tour.begin() + long(s), tour.end());
    rot.insert(rot.end(), tour.begin(), tour.begin() + long(s));
    return rot;
}

} // namespace

DefectFlow tour_flow_with_defects(const SignedGraph& g, const SubgraphRef& h, int magnitude,
                                  int base_vertex) {
    g.check_ref(h);
    if (magnitude == 0)
        throw Error(errc::bad_k, "tour flow magnitude must be nonzero");
    require_even(g, h, "tour flow");

    DefectFlow out;
    out.flow.mode = FlowMode::Integer;
    out.flow.k = std::abs(magnitude) + 1;
    out.flow.tau = default_orientation(g);
    out.flow.value.assign(size_t(g.edge_slots()), 0);

    for (const SubgraphRef& comp : g.components(h)) {
        if (comp.edges.empty()) continue;
        std::vector<EulerStep> tour = rotated_tour(g, comp, base_vertex);
        int base = tour.front().from;
        int p = 1;
        for (const EulerStep& st : tour) {
            const Edge& e = g.edge(st.edge);
            int t_from = p;
            int t_to = -e.sign * p;
            if (st.from == e.u)
                out.flow.tau.tau[size_t(st.edge)] = {t_from, t_to};
            else
                out.flow.tau.tau[size_t(st.edge)] = {t_to, t_from};
            out.flow.value[size_t(st.edge)] = magnitude;
            p *= e.sign;
        }
        if (p == -1) out.defects.emplace_back(base, 2 * magnitude);
    }
    std::sort(out.defects.begin(), out.defects.end());
    return out;
}

FlowAssignment two_nzf_on_even(const SignedGraph& g, const SubgraphRef& h) {
    DefectFlow df = tour_flow_with_defects(g, h, 1);
    if (!df.defects.empty())
        throw Error(errc::template_precondition,
                    "a component of the edge set has an odd number of negative edges");
    return df.flow;
}

FlowAssignment two_flow_on_positive_even(const SignedGraph& g, const SubgraphRef& h) {
    g.check_ref(h);
    for (int id : h.edges)
        if (g.edge(id).sign < 0)
            throw Error(errc::negative_edge_present,
                        "edge " + std::to_string(id) + " is negative");
    return two_nzf_on_even(g, h);
}

FlowAssignment z2_flow_on_even(const SignedGraph& g, const SubgraphRef& h) {
    g.check_ref(h);
    require_even(g, h, "z2 flow");
    FlowAssignment fa = make_zero_flow(g, FlowMode::Modular, 2);
    for (int id : h.edges) fa.value[size_t(id)] = 1;
    return fa;
}

namespace {

struct LiftState {
    std::vector<long long> resid;  // target minus assigned contributions
    std::vector<int> supp_left;    // unassigned support half edges at v
    std::vector<int> off_left;     // unassigned non-support half edges at v

    bool feasible(int v) const {
        long long cap = (long long)supp_left[size_t(v)] + 2LL * off_left[size_t(v)];
        if (std::llabs(resid[size_t(v)]) > cap) return false;
        if (((resid[size_t(v)] - supp_left[size_t(v)]) % 2 + 2) % 2 != 0) return false;
        return true;
    }
};

bool lift_dfs(const SignedGraph& g, const std::vector<int>& order, size_t idx,
              const std::vector<char>& in_supp, const Orientation& tau, LiftState& st,
              std::vector<int>& value) {
    if (idx == order.size()) return true;
    int id = order[idx];
    const Edge& e = g.edge(id);
    bool supp = in_supp[size_t(id)] != 0;
    static const int dom_supp[] = {-1, 1};
    static const int dom_off[] = {-2, 0, 2};
    const int* dom = supp ? dom_supp : dom_off;
    int dom_n = supp ? 2 : 3;

    st.supp_left[size_t(e.u)] -= supp;
    st.supp_left[size_t(e.v)] -= supp;
    st.off_left[size_t(e.u)] -= !supp;
    st.off_left[size_t(e.v)] -= !supp;

    for (int i = 0; i < dom_n; ++i) {
        int x = dom[i];
        long long cu = (long long)tau.at(id, 0) * x;
        long long cv = (long long)tau.at(id, 1) * x;
        st.resid[size_t(e.u)] -= cu;
        st.resid[size_t(e.v)] -= cv;
        if (st.feasible(e.u) && st.feasible(e.v)) {
            value[size_t(id)] = x;
            if (lift_dfs(g, order, idx + 1, in_supp, tau, st, value)) return true;
        }
        st.resid[size_t(e.u)] += cu;
        st.resid[size_t(e.v)] += cv;
    }

    st.supp_left[size_t(e.u)] += supp;
    st.supp_left[size_t(e.v)] += supp;
    st.off_left[size_t(e.u)] += !supp;
    st.off_left[size_t(e.v)] += !supp;
    return false;
}

} // namespace

FlowAssignment lift_z2_to_3flow(const SignedGraph& g, const FlowAssignment& f_z2) {
    if (f_z2.mode != FlowMode::Modular || f_z2.k != 2)
        throw Error(errc::mode_mismatch, "lift input must be a modular flow with k=2");
    {
        int with_edges = 0;
        for (const auto& comp : g.vertex_components()) {
            bool any = false;
            for (int v : comp)
                if (g.degree(v) > 0) {
                    any = true;
                    break;
                }
            with_edges += any;
        }
        if (with_edges > 1)
            throw Error(errc::disconnected, "lift requires the edges to lie in one component");
    }

    std::vector<int> supp;
    for (int id : g.edge_ids())
        if (f_z2.value[size_t(id)] % 2 != 0) supp.push_back(id);
    SubgraphRef sref = g.ref(supp);
    require_even(g, sref, "lift support");
    if (g.sign_product(supp) < 0)
        throw Error(errc::odd_negative_support,
                    "lift support must contain an even number of negative edges");

    std::vector<int> order = g.edge_ids();
    std::vector<char> in_supp(size_t(g.edge_slots()), 0);
    for (int id : supp) in_supp[size_t(id)] = 1;
    Orientation tau = default_orientation(g);

    LiftState st;
    st.resid.assign(size_t(g.vertex_count()), 0);
    st.supp_left.assign(size_t(g.vertex_count()), 0);
    st.off_left.assign(size_t(g.vertex_count()), 0);
    for (int id : order) {
        const Edge& e = g.edge(id);
        bool s = in_supp[size_t(id)] != 0;
        st.supp_left[size_t(e.u)] += s;
        st.supp_left[size_t(e.v)] += s;
        st.off_left[size_t(e.u)] += !s;
        st.off_left[size_t(e.v)] += !s;
    }

    std::vector<int> value(size_t(g.edge_slots()), 0);
    if (!lift_dfs(g, order, 0, in_supp, tau, st, value))
        throw Error(errc::search_exhausted, "no 3-flow extends the given parity flow");

    FlowAssignment out;
    out.mode = FlowMode::Integer;
    out.k = 3;
    out.tau = tau;
    out.value = std::move(value);
    return out;
}

std::string flow_to_json(const SignedGraph& g, const FlowAssignment& fa) {
    json tau = json::object();
    json f = json::object();
    for (int id : g.edge_ids()) {
        std::string key = std::to_string(id);
        tau[key] = {fa.tau.at(id, 0), fa.tau.at(id, 1)};
        f[key] = fa.value[size_t(id)];
    }
    json j;
    j["mode"] = fa.mode == FlowMode::Integer ? "int" : "mod";
    j["k"] = fa.k;
    j["graph_sha"] = graph_sha(g);
    j["tau"] = tau;
    j["f"] = f;
    return j.dump();
}

FlowAssignment flow_from_json_text(const SignedGraph& g, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw Error(errc::format_error, std::string("flow json: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("mode") || !j.contains("k") || !j.contains("tau") ||
        !j.contains("f"))
        throw Error(errc::format_error, "flow json must have mode, k, tau, f");
    if (j.contains("graph_sha") && j["graph_sha"].get<std::string>() != graph_sha(g))
        throw Error(errc::bad_witness, "flow was produced for a different graph");

    FlowAssignment fa;
    std::string mode = j["mode"].get<std::string>();
    if (mode == "int")
        fa.mode = FlowMode::Integer;
    else if (mode == "mod")
        fa.mode = FlowMode::Modular;
    else
        throw Error(errc::format_error, "mode must be int or mod");
    fa.k = j["k"].get<int>();
    if (fa.k < 2) throw Error(errc::bad_k, "k must be at least 2");

    fa.tau.tau.assign(size_t(g.edge_slots()), {0, 0});
    fa.value.assign(size_t(g.edge_slots()), 0);
    for (int id : g.edge_ids()) {
        std::string key = std::to_string(id);
        if (!j["tau"].contains(key) || !j["f"].contains(key))
            throw Error(errc::missing_value, "edge " + key + " has no tau/f entry");
        auto& t = j["tau"][key];
        if (!t.is_array() || t.size() != 2)
            throw Error(errc::format_error, "tau entries must be pairs");
        fa.tau.tau[size_t(id)] = {t[0].get<int>(), t[1].get<int>()};
        fa.value[size_t(id)] = j["f"][key].get<int>();
    }
    for (auto& [key, val] : j["f"].items()) {
        (void)val;
        char* end = nullptr;
        long id = std::strtol(key.c_str(), &end, 10);
        if (end == key.c_str() || *end != '\0' || !g.edge_alive(int(id)))
            throw Error(errc::bad_edge_ids, "flow entry for unknown edge id " + key);
    }
    return fa;
}

} // namespace sgf
