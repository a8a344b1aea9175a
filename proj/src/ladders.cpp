#include "sgf/ladders.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sgf/admissible.hpp"
#include "sgf/errors.hpp"
#include "sgf/six_flow.hpp"

namespace sgf {

namespace {

bool ok_nz(const VerifyResult& vr) { return vr.valid_flow && vr.nowhere_zero; }

std::vector<int> fill_signs(const std::vector<int>& signs, int n, const char* what) {
    if (signs.empty()) return std::vector<int>(size_t(n), 1);
    if (int(signs.size()) != n)
        throw Error(errc::precondition_violated,
                    std::string(what) + " signature has " + std::to_string(signs.size()) +
                        " entries, expected " + std::to_string(n));
    for (int s : signs)
        if (s != 1 && s != -1)
            throw Error(errc::precondition_violated,
                        std::string(what) + " signature entries must be +1 or -1");
    return signs;
}

struct SpecSigns {
    std::vector<int> rung, x, y;
};

SpecSigns checked_signs(const LadderSpec& spec) {
    if (spec.n < 1)
        throw Error(errc::precondition_violated, "ladder needs n >= 1 rungs");
    return {fill_signs(spec.rung_signs, spec.n, "rung"), fill_signs(spec.x_signs, spec.n, "x-rail"),
            fill_signs(spec.y_signs, spec.n, "y-rail")};
}

} // namespace

SignedGraph gen_ladder(const LadderSpec& spec) {
    SpecSigns sg = checked_signs(spec);
    const int n = spec.n;
    if (spec.kind == LadderKind::Circular && n == 1)
        throw Error(errc::loop_rejected,
                    "circular ladder with one rung closes both rails into loops; "
                    "use the 2-vertex 4-edge encoding (gen_ladder_cl1)");
    SignedGraph g(2 * n);
    for (int i = 0; i < n; ++i) g.add_edge(i, n + i, sg.rung[i]);
    for (int t = 0; t < n; ++t) {
        int u = t;
        int v = (t + 1) % n;
        if (t == n - 1 && spec.kind == LadderKind::Moebius) v = n + 0; // x_{n-1} -> y_0
        g.add_edge(u, v, sg.x[t]);
    }
    for (int t = 0; t < n; ++t) {
        int u = n + t;
        int v = n + (t + 1) % n;
        if (t == n - 1 && spec.kind == LadderKind::Moebius) v = 0; // y_{n-1} -> x_0
        g.add_edge(u, v, sg.y[t]);
    }
    return g;
}

SignedGraph gen_ladder_cl1(int rung_sign, int x_sign, int y_sign) {
    for (int s : {rung_sign, x_sign, y_sign})
        if (s != 1 && s != -1)
            throw Error(errc::precondition_violated, "signs must be +1 or -1");
    SignedGraph g(2);
    g.add_edge(0, 1, rung_sign);
    g.add_edge(0, 1, 1);
    g.add_edge(0, 1, x_sign);
    g.add_edge(0, 1, y_sign);
    return g;
}

bool is_cl1_encoding(const SignedGraph& g) {
    if (g.vertex_count() != 2 || g.edge_count() != 4) return false;
    for (int id : g.edge_ids()) {
        const Edge& e = g.edge(id);
        if (std::min(e.u, e.v) != 0 || std::max(e.u, e.v) != 1) return false;
    }
    return true;
}

std::optional<LadderSpec> ladder_spec_of(const SignedGraph& g) {
    const int nv = g.vertex_count();
    if (nv < 2 || nv % 2 != 0) return std::nullopt;
    const int n = nv / 2;
    if (g.edge_count() != 3 * n || g.edge_slots() != 3 * n) return std::nullopt;
    for (LadderKind kind : {LadderKind::Circular, LadderKind::Moebius}) {
        if (kind == LadderKind::Circular && n == 1) continue;
        LadderSpec spec;
        spec.kind = kind;
        spec.n = n;
        spec.rung_signs.assign(size_t(n), 1);
        spec.x_signs.assign(size_t(n), 1);
        spec.y_signs.assign(size_t(n), 1);
        bool ok = true;
        for (int id = 0; id < 3 * n && ok; ++id) {
            const Edge& e = g.edge(id);
            int u = -1, v = -1;
            if (id < n) {
                u = id;
                v = n + id;
                spec.rung_signs[size_t(id)] = e.sign;
            } else if (id < 2 * n) {
                int t = id - n;
                u = t;
                v = (t + 1) % n;
                if (t == n - 1 && kind == LadderKind::Moebius) v = n;
                spec.x_signs[size_t(t)] = e.sign;
            } else {
                int t = id - 2 * n;
                u = n + t;
                v = n + (t + 1) % n;
                if (t == n - 1 && kind == LadderKind::Moebius) v = 0;
                spec.y_signs[size_t(t)] = e.sign;
            }
            if (e.u != u || e.v != v) ok = false;
        }
        if (ok) return spec;
    }
    return std::nullopt;
}

LadderSpec extended_spec(const ExtenderSpec& spec) {
    SpecSigns sg = checked_signs(spec.base);
    const int n = spec.base.n;
    const int i = spec.position;
    const int m = spec.length;
    if (spec.base.kind != LadderKind::Circular)
        throw Error(errc::precondition_violated, "extenders are defined on circular ladders");
    if (i < 0 || i >= n)
        throw Error(errc::precondition_violated, "extender position out of range");
    if (m < 0) throw Error(errc::precondition_violated, "extender length must be >= 0");
    if (sg.x[size_t(i)] != 1 || sg.y[size_t(i)] != 1)
        throw Error(errc::base_pair_not_positive,
                    "both rail slots at the extension position must be positive");
    LadderSpec out;
    out.kind = LadderKind::Circular;
    out.n = n + m;
    out.rung_signs.assign(size_t(n + m), 1);
    out.x_signs.assign(size_t(n + m), 1);
    out.y_signs.assign(size_t(n + m), 1);
    for (int t = 0; t < n; ++t) {
        int tp = t <= i ? t : t + m;
        out.rung_signs[size_t(tp)] = sg.rung[size_t(t)];
    }
    for (int j = 1; j <= m; ++j) out.rung_signs[size_t(i + j)] = (j % 2 == 1) ? -1 : 1;
    for (int t = 0; t < n; ++t) {
        if (t == i) continue; // replaced by the all-positive inserted slots
        int tp = t < i ? t : t + m;
        out.x_signs[size_t(tp)] = sg.x[size_t(t)];
        out.y_signs[size_t(tp)] = sg.y[size_t(t)];
    }
    return out;
}

SignedGraph extend_ladder(const ExtenderSpec& spec) { return gen_ladder(extended_spec(spec)); }

// --------------------------------------------------------------------------
// Flow helpers.
// --------------------------------------------------------------------------

FlowAssignment to_default_orientation(const SignedGraph& g, const FlowAssignment& fa) {
    if (int(fa.value.size()) != g.edge_slots() || int(fa.tau.tau.size()) != g.edge_slots())
        throw Error(errc::mode_mismatch, "flow does not fit the graph");
    Orientation def = default_orientation(g);
    FlowAssignment out = fa;
    out.tau = def;
    for (int id : g.edge_ids())
        if (fa.tau.at(id, 0) != def.at(id, 0)) out.value[size_t(id)] = -fa.value[size_t(id)];
    return out;
}

namespace {

// Sets `edge_id` (default orientation) so that the half edge at `at`
// contributes `inflow` to the boundary sum of `at`.
void set_inflow_at(const SignedGraph& g, FlowAssignment& fa, int edge_id, int at,
                   long long inflow) {
    const Edge& e = g.edge(edge_id);
    int end = (e.u == at) ? 0 : 1;
    if ((end == 0 && e.u != at) || (end == 1 && e.v != at))
        throw Error(errc::bad_vertex, "vertex not an endpoint of the edge");
    fa.value[size_t(edge_id)] = int(inflow) * fa.tau.at(edge_id, end);
}

} // namespace

long long directed_value(const SignedGraph& g, const FlowAssignment& fa, int edge_id, int from,
                         int to) {
    const Edge& e = g.edge(edge_id);
    if (e.sign != 1)
        throw Error(errc::precondition_violated, "directed_value reads positive edges only");
    if (!((e.u == from && e.v == to) || (e.u == to && e.v == from)))
        throw Error(errc::bad_vertex, "edge does not join the given vertices");
    int end = (e.v == to) ? 1 : 0;
    return (long long)fa.tau.at(edge_id, end) * fa.value[size_t(edge_id)];
}

void set_edge_flow(const SignedGraph& g, FlowAssignment& fa, int edge_id,
                   const std::string& orient, int magnitude) {
    const Edge& e = g.edge(edge_id);
    if (magnitude <= 0) throw Error(errc::format_error, "edge flow magnitude must be positive");
    if (orient == "uv" || orient == "vu") {
        if (e.sign != 1)
            throw Error(errc::format_error, "directed orient token on a negative edge");
        int to_end = (orient == "uv") ? 1 : 0;
        fa.value[size_t(edge_id)] = magnitude * fa.tau.at(edge_id, to_end);
    } else if (orient == "in" || orient == "out") {
        if (e.sign != -1)
            throw Error(errc::format_error, "in/out orient token on a positive edge");
        // tau is equal at both ends of a negative edge, so either end works.
        int inflow = (orient == "in") ? magnitude : -magnitude;
        fa.value[size_t(edge_id)] = inflow * fa.tau.at(edge_id, 0);
    } else {
        throw Error(errc::format_error, "unknown orient token: " + orient);
    }
}

// --------------------------------------------------------------------------
// Template data files.
// --------------------------------------------------------------------------

#ifndef SGF_DATA_DIR_DEFAULT
#define SGF_DATA_DIR_DEFAULT "data"
#endif

std::string template_data_dir() {
    if (const char* env = std::getenv("SFF_DATA_DIR"); env && *env) return env;
    return SGF_DATA_DIR_DEFAULT;
}

namespace {

TemplateFixture load_template_file(const std::string& name) {
    const std::string path = template_data_dir() + "/templates/" + name + ".json";
    std::ifstream in(path);
    if (!in) throw Error(errc::format_error, "cannot open template table " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw Error(errc::format_error, "bad JSON in " + path + ": " + ex.what());
    }
    try {
        if (j.at("version").get<int>() != 1)
            throw Error(errc::format_error, "unsupported template version in " + path);
        TemplateFixture fx;
        fx.name = name;
        fx.k = j.at("k").get<int>();
        fx.spec.kind =
            j.at("kind").get<std::string>() == "moebius" ? LadderKind::Moebius : LadderKind::Circular;
        fx.spec.n = j.at("n").get<int>();
        fx.spec.rung_signs = j.at("signs").at("rung").get<std::vector<int>>();
        fx.spec.x_signs = j.at("signs").at("x").get<std::vector<int>>();
        fx.spec.y_signs = j.at("signs").at("y").get<std::vector<int>>();
        fx.graph = gen_ladder(fx.spec);
        fx.flow = make_zero_flow(fx.graph, FlowMode::Integer, fx.k);
        const int n = fx.spec.n;
        std::set<int> seen;
        for (const auto& row : j.at("rows")) {
            const std::string kind = row.at("edge").get<std::string>();
            const int pos = row.at("pos").get<int>();
            if (pos < 0 || pos >= n)
                throw Error(errc::format_error, "row position out of range in " + path);
            int id = -1;
            if (kind == "rung")
                id = rung_id(n, pos);
            else if (kind == "x")
                id = x_slot_id(n, pos);
            else if (kind == "y")
                id = y_slot_id(n, pos);
            else
                throw Error(errc::format_error, "unknown row edge kind in " + path);
            if (!seen.insert(id).second)
                throw Error(errc::format_error, "duplicate row for an edge in " + path);
            set_edge_flow(fx.graph, fx.flow, id, row.at("orient").get<std::string>(),
                          row.at("value").get<int>());
        }
        if (int(seen.size()) != 3 * n)
            throw Error(errc::format_error, "template rows do not cover every edge in " + path);
        VerifyResult vr = verify_flow(fx.graph, fx.flow);
        if (!vr.valid_flow || !vr.nowhere_zero)
            throw Error(errc::format_error, "template flow fails verification: " + path);
        return fx;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(errc::format_error, "bad template layout in " + path + ": " + ex.what());
    }
}

const std::map<LadderTemplate, std::string>& template_names() {
    static const std::map<LadderTemplate, std::string> names = {
        {LadderTemplate::Cl4PositiveRims, "cl4_positive_rims"},
        {LadderTemplate::Cl6PositiveRims, "cl6_positive_rims"},
        {LadderTemplate::Cl4NegativeRims, "cl4_negative_rims"},
        {LadderTemplate::Cl2NegativeRims, "cl2_negative_rims"},
        {LadderTemplate::Cl6NegativeRims, "cl6_negative_rims"},
    };
    return names;
}

} // namespace

const TemplateFixture& ladder_template(LadderTemplate t) {
    static std::map<LadderTemplate, TemplateFixture> cache = [] {
        std::map<LadderTemplate, TemplateFixture> m;
        for (const auto& [key, name] : template_names()) m.emplace(key, load_template_file(name));
        return m;
    }();
    return cache.at(t);
}

// --------------------------------------------------------------------------
// Flow extension.
// --------------------------------------------------------------------------

FlowAssignment extend_flow(const FlowAssignment& base_flow, const ExtenderSpec& spec,
                           int variant) {
    if (variant != 1 && variant != 2)
        throw Error(errc::precondition_violated, "variant must be 1 or 2");
    const SignedGraph base = gen_ladder(spec.base);
    if (base_flow.mode != FlowMode::Integer || base_flow.k < 4)
        throw Error(errc::template_precondition, "base flow must be an integer k-NZF with k >= 4");
    if (!ok_nz(verify_flow(base, base_flow)))
        throw Error(errc::template_precondition, "base flow does not verify on the base ladder");
    const int n = spec.base.n;
    const int i = spec.position;
    const int m = spec.length;
    if (m % 4 != 0)
        throw Error(errc::template_precondition, "flow extension needs length divisible by 4");

    FlowAssignment fb = to_default_orientation(base, base_flow);
    const long long dx = directed_value(base, fb, x_slot_id(n, i), i, (i + 1) % n);
    const long long dy =
        directed_value(base, fb, y_slot_id(n, i), n + i, n + (i + 1) % n);
    const long long want_dy = (variant == 1) ? 2 : 1;
    if (std::abs(dx) != 1 || std::abs(dy) != want_dy)
        throw Error(errc::template_precondition,
                    "replaced rail pair must carry magnitudes (1," + std::to_string(want_dy) +
                        ") for variant " + std::to_string(variant));
    if (m == 0) return base_flow;

    const LadderSpec espec = extended_spec(spec);
    const SignedGraph ge = gen_ladder(espec);
    const int ne = espec.n;
    FlowAssignment f1 = make_zero_flow(ge, FlowMode::Integer, base_flow.k);

    // Old positions keep their values; inserted slots replicate the pair.
    auto new_rung = [&](int t) { return rung_id(ne, t <= i ? t : t + m); };
    auto new_x_slot = [&](int t) { return x_slot_id(ne, t < i ? t : t + m); };
    auto new_y_slot = [&](int t) { return y_slot_id(ne, t < i ? t : t + m); };
    auto transfer = [&](int old_id, int new_id) {
        const Edge& eo = base.edge(old_id);
        const Edge& en = ge.edge(new_id);
        if (eo.sign != en.sign)
            throw Error(errc::internal, "extender sign transfer mismatch");
        // Preserve the contribution at the second endpoint (negative edges
        // contribute equally at both ends, so this is lossless for them).
        long long at_v = (long long)fb.tau.at(old_id, 1) * fb.value[size_t(old_id)];
        set_inflow_at(ge, f1, new_id, en.v, at_v);
    };
    for (int t = 0; t < n; ++t) transfer(rung_id(n, t), new_rung(t));
    for (int t = 0; t < n; ++t) {
        if (t == i) continue;
        transfer(x_slot_id(n, t), new_x_slot(t));
        transfer(y_slot_id(n, t), new_y_slot(t));
    }
    for (int j = 0; j <= m; ++j) {
        // Slot i+j runs from position i+j to i+j+1 (mod ne).
        set_inflow_at(ge, f1, x_slot_id(ne, i + j), (i + j + 1) % ne, dx);
        set_inflow_at(ge, f1, y_slot_id(ne, i + j), ne + (i + j + 1) % ne, dy);
    }

    // Periodic correction: zero outside the insertion, period-4 pattern on
    // the inserted slots and rungs, zero on the junction slots (j = 0 mod 4).
    FlowAssignment f2 = make_zero_flow(ge, FlowMode::Integer, base_flow.k);
    for (int j = 0; j <= m; ++j) {
        static const long long ax[4] = {0, 1, 2, 1};
        static const long long ay[4] = {0, 1, 0, -1};
        if (ax[j % 4] != 0)
            set_inflow_at(ge, f2, x_slot_id(ne, i + j), (i + j + 1) % ne, ax[j % 4]);
        if (ay[j % 4] != 0)
            set_inflow_at(ge, f2, y_slot_id(ne, i + j), ne + (i + j + 1) % ne, ay[j % 4]);
    }
    for (int j = 1; j <= m; ++j) {
        int id = rung_id(ne, i + j);
        switch (j % 4) {
        case 1: set_edge_flow(ge, f2, id, "in", 1); break;
        case 2: set_edge_flow(ge, f2, id, "vu", 1); break;
        case 3: set_edge_flow(ge, f2, id, "out", 1); break;
        default: set_edge_flow(ge, f2, id, "uv", 1); break;
        }
    }

    const int c = variant; // 1: f1 +- f2, 2: f1 +- 2 f2
    for (int s : {1, -1}) {
        FlowAssignment cand = f1;
        for (int id : ge.edge_ids())
            cand.value[size_t(id)] += s * c * f2.value[size_t(id)];
        if (ok_nz(verify_flow(ge, cand))) return cand;
    }
    throw Error(errc::internal, "no sign choice extends the base flow");
}

// --------------------------------------------------------------------------
// 6-NZF constructions.
// --------------------------------------------------------------------------

namespace {

void gate_admissible(const SignedGraph& g) {
    AdmissibilityResult ar = is_flow_admissible(g);
    if (!ar.admissible)
        throw Error(errc::not_flow_admissible, "graph is not flow-admissible: " + ar.reason);
}

// Hamiltonian-circuit candidates obtained by swapping one rail pair (or the
// wrap pair) for the two rungs that close the detour.
std::vector<std::vector<int>> circular_candidates(int n) {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> ids = {rung_id(n, i), rung_id(n, (i + 1) % n)};
        for (int t = 0; t < n; ++t) {
            if (t == i) continue;
            ids.push_back(x_slot_id(n, t));
            ids.push_back(y_slot_id(n, t));
        }
        out.push_back(std::move(ids));
    }
    return out;
}

std::vector<std::vector<int>> moebius_candidates(int n) {
    std::vector<std::vector<int>> out;
    if (n == 1) {
        out.push_back({x_slot_id(1, 0), y_slot_id(1, 0)});
        out.push_back({rung_id(1, 0), x_slot_id(1, 0)});
        out.push_back({rung_id(1, 0), y_slot_id(1, 0)});
        return out;
    }
    std::vector<int> rim;
    for (int t = 0; t < n; ++t) {
        rim.push_back(x_slot_id(n, t));
        rim.push_back(y_slot_id(n, t));
    }
    out.push_back(rim);
    std::vector<int> cross = {rung_id(n, 0), rung_id(n, n - 1)};
    for (int t = 0; t + 1 < n; ++t) {
        cross.push_back(x_slot_id(n, t));
        cross.push_back(y_slot_id(n, t));
    }
    out.push_back(cross);
    for (int j = 0; j + 1 < n; ++j) {
        std::vector<int> ids = {rung_id(n, j), rung_id(n, j + 1)};
        for (int t = 0; t < n; ++t) {
            if (t == j) continue;
            ids.push_back(x_slot_id(n, t));
            ids.push_back(y_slot_id(n, t));
        }
        out.push_back(std::move(ids));
    }
    return out;
}

FlowAssignment delegate_balanced(const SignedGraph& g, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    auto [fa, trace] = six_nzf_balanced_hamiltonian(g, g.ref(ids, true));
    (void)trace;
    return fa;
}

// Switching set (as a vertex list) normalising a circular ladder whose rail
// signs multiply to (+,+): every rail slot positive and rung 0 positive.
std::vector<int> normalize_positive_rims(const SignedGraph& g, const LadderSpec& spec) {
    const int n = spec.n;
    std::vector<int> s(size_t(2 * n), 1);
    for (int t = 0; t + 1 < n; ++t)
        s[size_t(t + 1)] = g.edge(x_slot_id(n, t)).sign * s[size_t(t)];
    s[size_t(n)] = g.edge(rung_id(n, 0)).sign * s[size_t(0)];
    for (int t = 0; t + 1 < n; ++t)
        s[size_t(n + t + 1)] = g.edge(y_slot_id(n, t)).sign * s[size_t(n + t)];
    std::vector<int> u;
    for (int v = 0; v < 2 * n; ++v)
        if (s[size_t(v)] < 0) u.push_back(v);
    return u;
}

// Switching set normalising rails multiplying to (-,-): slot 0 of each rail
// negative, all other slots positive, rung 1 positive.
std::vector<int> normalize_negative_rims(const SignedGraph& g, const LadderSpec& spec) {
    const int n = spec.n;
    std::vector<int> s(size_t(2 * n), 1);
    s[1] = 1;
    for (int t = 1; t + 1 < n; ++t)
        s[size_t(t + 1)] = g.edge(x_slot_id(n, t)).sign * s[size_t(t)];
    s[0] = g.edge(x_slot_id(n, n - 1)).sign * s[size_t(n - 1)];
    s[size_t(n + 1)] = g.edge(rung_id(n, 1)).sign * s[1];
    for (int t = 1; t + 1 < n; ++t)
        s[size_t(n + t + 1)] = g.edge(y_slot_id(n, t)).sign * s[size_t(n + t)];
    s[size_t(n)] = g.edge(y_slot_id(n, n - 1)).sign * s[size_t(2 * n - 1)];
    std::vector<int> u;
    for (int v = 0; v < 2 * n; ++v)
        if (s[size_t(v)] < 0) u.push_back(v);
    return u;
}

void expect_signature(const SignedGraph& gs, const LadderSpec& want) {
    SignedGraph target = gen_ladder(want);
    if (!gs.same_structure(target))
        throw Error(errc::internal, "normalised ladder signature is not the expected one");
}

FlowAssignment finish_on_original(const SignedGraph& g, const SignedGraph& gs,
                                  const std::vector<int>& u, FlowAssignment fa) {
    FlowAssignment back = transport_switching(fa, gs, u);
    if (!ok_nz(verify_flow(g, back)))
        throw Error(errc::internal, "transported ladder flow fails verification");
    return back;
}

} // namespace

FlowAssignment six_nzf_circular(const SignedGraph& g) {
    if (is_cl1_encoding(g)) {
        gate_admissible(g);
        FlowAssignment fa = two_nzf_on_even(g, g.full_ref());
        fa.k = 3;
        return fa;
    }
    std::optional<LadderSpec> spec = ladder_spec_of(g);
    if (!spec || spec->kind != LadderKind::Circular)
        throw Error(errc::precondition_violated,
                    "input is not a circular ladder in canonical layout");
    gate_admissible(g);
    const int n = spec->n;

    for (auto& ids : circular_candidates(n))
        if (g.sign_product(ids) == 1) return delegate_balanced(g, std::move(ids));

    // No rail-swap candidate is balanced, so (after normalisation) the rungs
    // alternate and n is even; dispatch on the rail signs.
    std::vector<int> x_ids, y_ids;
    for (int t = 0; t < n; ++t) {
        x_ids.push_back(x_slot_id(n, t));
        y_ids.push_back(y_slot_id(n, t));
    }
    const int sx = g.sign_product(x_ids);
    const int sy = g.sign_product(y_ids);
    if (sx != sy)
        throw Error(errc::internal,
                    "mixed rail signs always leave a balanced rail-swap candidate");
    if (n % 2 != 0 || n < 2)
        throw Error(errc::internal, "alternating rungs require an even rung count");

    if (sx == 1) {
        if (n == 2)
            throw Error(errc::internal,
                        "admissible positive-rim 2-rung ladders always have a balanced candidate");
        std::vector<int> u = normalize_positive_rims(g, *spec);
        SignedGraph gs = g.switch_at(u);
        LadderTemplate which =
            (n % 4 == 0) ? LadderTemplate::Cl4PositiveRims : LadderTemplate::Cl6PositiveRims;
        const TemplateFixture& tpl = ladder_template(which);
        const int variant = (n % 4 == 0) ? 1 : 2;
        ExtenderSpec ext{tpl.spec, 0, n - tpl.spec.n};
        expect_signature(gs, extended_spec(ext));
        FlowAssignment fa =
            ext.length == 0 ? tpl.flow : extend_flow(tpl.flow, ext, variant);
        return finish_on_original(g, gs, u, std::move(fa));
    }

    std::vector<int> u = normalize_negative_rims(g, *spec);
    SignedGraph gs = g.switch_at(u);
    LadderTemplate which = (n == 2)       ? LadderTemplate::Cl2NegativeRims
                           : (n % 4 == 0) ? LadderTemplate::Cl4NegativeRims
                                          : LadderTemplate::Cl6NegativeRims;
    const TemplateFixture& tpl = ladder_template(which);
    const int position = (n % 4 == 0) ? 3 : 1;
    const int variant = (n % 4 == 0) ? 2 : 1;
    ExtenderSpec ext{tpl.spec, position, n - tpl.spec.n};
    expect_signature(gs, ext.length == 0 ? tpl.spec : extended_spec(ext));
    FlowAssignment fa = ext.length == 0 ? tpl.flow : extend_flow(tpl.flow, ext, variant);
    return finish_on_original(g, gs, u, std::move(fa));
}

FlowAssignment six_nzf_moebius(const SignedGraph& g) {
    std::optional<LadderSpec> spec = ladder_spec_of(g);
    if (!spec || spec->kind != LadderKind::Moebius)
        throw Error(errc::precondition_violated,
                    "input is not a Moebius ladder in canonical layout");
    gate_admissible(g);
    for (auto& ids : moebius_candidates(spec->n))
        if (g.sign_product(ids) == 1) return delegate_balanced(g, std::move(ids));
    throw Error(errc::internal,
                "a flow-admissible Moebius ladder always has a balanced Hamiltonian circuit");
}

} // namespace sgf
