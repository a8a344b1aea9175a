#pragma once

#include <string>

#include "sgf/signed_graph.hpp"

namespace sgf {

// Graph file format:
//   {"vertices": N, "edges": [{"id": I, "u": U, "v": V, "sign": S}, ...]}
// On ingest, edge ids must be exactly 0..|E|-1 (any order in the array);
// emitted files always satisfy that and list edges by ascending id.
SignedGraph graph_from_json_text(const std::string& text);
SignedGraph load_graph(const std::string& path);

// Canonical serialization (sorted keys, ascending edge ids, no whitespace
// variance) — the byte stream hashed into certificate fingerprints.
// Requires contiguous edge ids; use compact_copy() first when a graph has
// dead edge slots.
std::string canonical_graph_json(const SignedGraph& g);
void save_graph(const SignedGraph& g, const std::string& path);
std::string graph_sha(const SignedGraph& g);

// Densely relabels edge ids (dropping dead slots); vertex labels unchanged.
// edge_map[old_id] = new_id or -1.
struct CompactCopy {
    SignedGraph graph;
    std::vector<int> edge_map;
};
CompactCopy compact_copy(const SignedGraph& g);

} // namespace sgf
