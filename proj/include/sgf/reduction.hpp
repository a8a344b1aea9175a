#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// A pair of even spanning subgraphs whose supports together cover every live
// edge, each carried with a mod-2 flow witness on exactly its support.  The
// subgraphs may contain negative edges; only their supports and evenness are
// consumed downstream, which is why the witnesses are modular.
struct CoveringPair {
    SubgraphRef h1;
    SubgraphRef h2;
    FlowAssignment f1; // Modular(2), support exactly h1
    FlowAssignment f2; // Modular(2), support exactly h2
};

// Validates pair against g: both refs spanning and alive, both edge sets
// even, supports cover E(g), and each witness is a valid mod-2 flow whose
// support equals the corresponding edge set.  Throws InvalidPair otherwise.
void check_covering_pair(const SignedGraph& g, const CoveringPair& pair);

// Builds a covering pair whose first subgraph is a spanning connected even
// subgraph of g.  If h1 is given it is validated (BadWitness on failure);
// otherwise the cycle space is searched in ascending binary order over
// non-tree edge subsets and the first spanning connected combination wins.
// The second subgraph is the symmetric difference of the fundamental
// circuits, one per edge outside h1, each chosen as "shortest path inside
// h1, ties by smallest edge id".  Throws NotSupereulerian when no spanning
// connected even subgraph exists.
CoveringPair covering_pair_supereulerian(const SignedGraph& g,
                                         const std::optional<SubgraphRef>& h1 = std::nullopt);

struct ReductionTrace {
    std::vector<std::string> events;
};

// One component of h1 paired with its image circuit in the cubic graph.
struct ComponentImage {
    std::vector<int> h1_vertices; // component vertices in g, ascending
    std::vector<int> h1_edges;    // component edges in g (empty for an
                                  // isolated-in-h1 vertex)
    std::vector<int> j_edges;     // edges of the image circuit in g_prime
};

struct ReductionResult {
    SignedGraph g_prime;           // 3-regular
    std::vector<int> s_edges;      // added edge ids, all positive
    SubgraphRef j;                 // spanning 2-regular subgraph of g_prime,
                                   // every component an even circuit
    std::vector<ComponentImage> bijection;
    ReductionTrace trace;
};

// Turns g into a 3-regular signed graph by (i) splitting consecutive
// Euler-tour edge pairs off every vertex of h1-degree over two, (ii)
// reconnecting each split cluster with an all-positive digon (one extra
// vertex) or complete graph (more), and (iii) blowing every remaining
// vertex of degree != 3 up into an all-positive circuit of length equal to
// its degree, the two tour edges attached at adjacent circuit vertices.
// Deterministic: components by smallest vertex, the canonical Euler tour,
// remaining edges attached in ascending id order.  Throws InvalidPair on a
// bad pair or on a vertex of degree zero.
ReductionResult three_regularize(const SignedGraph& g, const CoveringPair& pair);

struct ReductionCheck {
    bool ok = false;
    std::vector<std::string> violations; // deterministic order, empty iff ok
};

// Re-checks every ReductionResult invariant from scratch: 3-regularity,
// positivity and freshness of s_edges, j a spanning 2-regular subgraph with
// even circuits, the sign-preserving component bijection, contraction of
// s_edges giving back g under the identity edge map, and preservation of
// flow-admissibility.  Never throws; problems land in `violations`.
ReductionCheck verify_reduction(const SignedGraph& g, const ReductionResult& r);

// Modular 4-NZF built from a spanning connected even subgraph h carrying an
// even number of negative edges: reduce to a cubic graph whose 2-factor is
// a single balanced even circuit, switch the circuit all-positive, assign 2
// to the complementary matching and alternate 1/3 around the circuit, then
// transport back through the switching and the contraction.  Throws
// NotEvenEulerian when h is not spanning connected even with an even
// negative count.
FlowAssignment z4_nzf_from_even_eulerian(const SignedGraph& g, const SubgraphRef& h);

} // namespace sgf
