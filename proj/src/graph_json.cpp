#include "sgf/graph_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgf/sha256.hpp"

namespace sgf {

using nlohmann::json;

SignedGraph graph_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::format_error, std::string("graph JSON parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw Error(errc::format_error, "graph JSON needs 'vertices' and 'edges'");
    int n = j.at("vertices").get<int>();
    if (n < 0) throw Error(errc::format_error, "negative vertex count");
    const auto& edges = j.at("edges");
    if (!edges.is_array()) throw Error(errc::format_error, "'edges' must be an array");

    std::vector<Edge> slots(edges.size());
    std::vector<char> seen(edges.size(), 0);
    for (const auto& je : edges) {
        int id = je.at("id").get<int>();
        if (id < 0 || id >= int(edges.size()) || seen[size_t(id)])
            throw Error(errc::bad_edge_ids, "edge ids must be exactly 0..|E|-1");
        seen[size_t(id)] = 1;
        slots[size_t(id)] = Edge{je.at("u").get<int>(), je.at("v").get<int>(),
                                 je.at("sign").get<int>(), true};
    }
    SignedGraph g(n);
    for (const auto& e : slots) g.add_edge(e.u, e.v, e.sign);
    return g;
}

SignedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::format_error, "cannot open graph file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return graph_from_json_text(ss.str());
}

std::string canonical_graph_json(const SignedGraph& g) {
    auto ids = g.edge_ids();
    if (!ids.empty() && ids.back() != int(ids.size()) - 1)
        throw Error(errc::bad_edge_ids, "canonical serialization needs contiguous edge ids");
    json edges = json::array();
    for (int id : ids) {
        const auto& e = g.edge(id);
        edges.push_back({{"id", id}, {"u", e.u}, {"v", e.v}, {"sign", e.sign}});
    }
    json j{{"vertices", g.vertex_count()}, {"edges", edges}};
    return j.dump(); // nlohmann orders object keys, so this is canonical
}

void save_graph(const SignedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::format_error, "cannot write graph file " + path);
    out << canonical_graph_json(g) << "\n";
}

std::string graph_sha(const SignedGraph& g) { return sha256_hex(canonical_graph_json(g)); }

CompactCopy compact_copy(const SignedGraph& g) {
    CompactCopy out;
    out.graph = SignedGraph(g.vertex_count());
    out.edge_map.assign(size_t(g.edge_slots()), -1);
    for (int id : g.edge_ids()) {
        const auto& e = g.edge(id);
        out.edge_map[size_t(id)] = out.graph.add_edge(e.u, e.v, e.sign);
    }
    return out;
}

} // namespace sgf
