#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgf/errors.hpp"

namespace sgf {

// A loopless signed multigraph.  Vertices are always the contiguous range
// [0, vertex_count()).  Edges carry stable integer ids: the id of an edge
// never changes across splits; operations that delete edges leave holes in
// the id range (dead slots), and operations that add edges append fresh ids.
//
// Graphs behave as immutable values: every editing operation returns a new
// graph.  The only in-place mutator is add_edge(), intended for construction.
struct Edge {
    int u = -1;
    int v = -1;
    int sign = 1;    // +1 or -1
    bool alive = true;
};

class SignedGraph;

// A set of edges of a specific parent graph.  `spanning` widens the implied
// vertex set from "endpoints of the listed edges" to all parent vertices,
// which matters for spanning even subgraphs with isolated vertices.
struct SubgraphRef {
    uint64_t parent_digest = 0;
    std::vector<int> edges; // sorted, unique
    bool spanning = false;
};

struct EulerStep {
    int edge = -1;
    int from = -1;
    int to = -1;
};

struct ContractionResult;
struct SplitResult;

class SignedGraph {
public:
    SignedGraph() = default;
    explicit SignedGraph(int n) : n_(n) {}

    // Construction.  Rejects loops and out-of-range endpoints.
    int add_edge(int u, int v, int sign);

    int vertex_count() const { return n_; }
    // Number of live edges.
    int edge_count() const;
    // Upper bound on edge ids (dead slots included).
    int edge_slots() const { return int(edges_.size()); }
    bool edge_alive(int id) const { return id >= 0 && id < edge_slots() && edges_[size_t(id)].alive; }
    const Edge& edge(int id) const;
    std::vector<int> edge_ids() const;

    int degree(int v) const;
    // Incident live edge ids at v, ascending.  A parallel block contributes
    // each edge once; both ends of an edge never coincide (loopless).
    std::vector<int> incident(int v) const;

    int negative_count() const;
    std::vector<int> negative_edges() const;

    // Cheap structural digest, used to tie SubgraphRefs to their parent.
    uint64_t digest() const;

    SubgraphRef ref(std::vector<int> edge_ids, bool spanning = false) const;
    SubgraphRef full_ref() const;
    void check_ref(const SubgraphRef& r) const;

    // sign product over an edge set (any set, not only circuits).
    int sign_product(const std::vector<int>& edge_ids) const;

    // Switching at U: negates the sign of every edge with exactly one
    // endpoint in U.  Circuit signs are invariant under switching.
    SignedGraph switch_at(const std::vector<int>& vertices) const;

    // Balance test.  Balanced: returns the switching set that makes all
    // edges positive.  Unbalanced: returns an unbalanced circuit witness.
    struct BalanceResult {
        bool balanced = false;
        std::vector<int> switching_set;    // valid when balanced
        std::vector<int> unbalanced_circuit; // valid when not balanced
    };
    BalanceResult is_balanced() const;

    // Splitting: detach the edges F from v and re-attach them at a fresh
    // vertex (id = old vertex_count()).  Every edge of F must be incident
    // with v; edge ids and signs are unchanged.
    SplitResult split_vertex(int v, const std::vector<int>& F) const;

    // Contraction: delete all edges of S and identify the vertices of each
    // S-component.  Edges (not in S) whose endpoints get identified become
    // loops and are silently removed; their ids are reported.  Vertices are
    // re-labelled contiguously; vertex_map gives old -> new.
    ContractionResult contract_edges(const std::vector<int>& S) const;

    // Connected components of the subgraph (edge subset + implied vertices).
    // Isolated vertices of a spanning ref form their own components.
    std::vector<SubgraphRef> components(const SubgraphRef& r) const;
    // Components of the whole graph, spanning the full vertex set.
    std::vector<std::vector<int>> vertex_components() const;
    bool connected() const;

    // Deterministic Euler tour of a connected even edge set: Hierholzer,
    // starting at the smallest incident vertex, always extending along the
    // smallest unused incident edge id.  Throws NotEulerian if the edge set
    // is not connected or has an odd-degree vertex.
    std::vector<EulerStep> euler_tour(const SubgraphRef& r) const;

    // Edges with exactly one endpoint in U.
    std::vector<int> boundary_cut(const std::vector<int>& U) const;

    // Restriction to live edges with ids in the set (keeps ids and vertex
    // labels; other edges become dead slots).
    SignedGraph restriction(const std::vector<int>& edge_ids) const;
    // Deletion of a set of edges.
    SignedGraph delete_edges(const std::vector<int>& edge_ids) const;

    bool same_structure(const SignedGraph& other) const;
    // Equality after applying `vertex_map` (old -> new) to this graph's
    // endpoints; edge ids must match one-to-one.
    bool equal_under_map(const SignedGraph& other, const std::vector<int>& vertex_map) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    mutable uint64_t digest_cache_ = 0;
    mutable bool digest_valid_ = false;
};

struct SplitResult {
    SignedGraph graph;
    int new_vertex = -1;
};

struct ContractionResult {
    SignedGraph graph;
    std::vector<int> vertex_map;   // old vertex id -> new id, -1 never occurs
    std::vector<int> removed_loops; // edge ids deleted as loops
};

// Symmetric difference of two edge sets of the same parent.
std::vector<int> symmetric_difference(const SignedGraph& g, const SubgraphRef& a,
                                      const SubgraphRef& b);

// Set helpers used across modules (inputs need not be sorted).
std::vector<int> sorted_unique(std::vector<int> v);
bool contains_id(const std::vector<int>& sorted, int id);

} // namespace sgf
