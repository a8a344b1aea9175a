#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/ladders.hpp"
#include "sgf/oracle.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// A signed Cayley graph over a finite abelian group, given as a direct
// product of cyclic factors.  Group elements are coordinate tuples; the
// connection set is a list of such tuples (a multiset: repeated entries
// yield parallel edge classes) that must exclude the identity and be closed
// under inverses with matching multiplicities.
struct CayleySpec {
    std::vector<int> group;                   // cyclic factor orders, each >= 1
    std::vector<std::vector<int>> connection; // generators as coordinate tuples
    // Signs per emitted edge id (see gen_cayley for the emission order);
    // empty means all-positive.
    std::vector<int> signs;
};

// Number of group elements (product of the factor orders).
long long cayley_order(const CayleySpec& spec);

// Vertex ids enumerate group elements in lexicographic coordinate order
// (first coordinate most significant).  Edges are emitted per inverse-pair
// class of the connection set, classes in order of first appearance, one
// copy at a time: a non-involution class {s, -s} contributes the edge
// {g, g+s} for every vertex g in id order; an involution class {z}
// contributes {g, g+z} for every g with id(g) < id(g+z).
// Throws IdentityInS / NotInverseClosed on bad connection sets and
// PreconditionViolated on malformed factor lists or sign vectors.
SignedGraph gen_cayley(const CayleySpec& spec);

// Lemma-style realization of a connected cubic abelian Cayley graph as a
// circular or Moebius ladder: the ladder spec (signs induced from g), plus
// the vertex and edge bijections onto the canonical gen_ladder layout.
struct LadderRealization {
    LadderSpec spec;
    std::vector<int> vertex_map; // cayley vertex id -> ladder vertex id
    std::vector<int> edge_map;   // cayley edge id -> ladder edge id
};

// Recognizes the ladder structure of gen_cayley(spec) when the connection
// set has total multiplicity 3 and generates the whole group; nullopt when
// the graph is not cubic or not connected.  Signs in the returned spec are
// read from `g`, which must match gen_cayley(spec) structurally.
std::optional<LadderRealization> recognize_cubic_cayley_ladder(const SignedGraph& g,
                                                               const CayleySpec& spec);

// 6-NZF construction for connected flow-admissible signed abelian Cayley
// graphs.  Dispatch on the valency |S| (with multiplicity): >= 4 uses the
// exact search for a 4-NZF (guaranteed by 4-edge-connectivity); == 3 maps
// the graph onto its ladder realization and delegates to the ladder
// constructions; == 2 returns the 2-NZF of the balanced circuit; an
// edgeless graph gets the empty 2-flow.  The graph's own signs are
// authoritative; spec.signs are ignored.  Throws Disconnected on
// disconnected input and NotFlowAdmissible when the admissibility gate
// rejects (covers |S| <= 1 with edges).
FlowAssignment six_nzf_abelian_cayley(const SignedGraph& g, const CayleySpec& spec);

// The three connected Eulerian edge sets (each with an odd number of
// negative edges) that certify a 3-NZF, together with the common base
// vertex used to cancel the tour defects.
struct ThreeFlowParts {
    std::vector<std::vector<int>> parts;
    int hub = -1;
};

// 3-NZF from a decomposition of g into three Hamiltonian circuits.
// Requires the circuits to partition E(g) (NotDecomposition otherwise) and
// |E_N(g)| to be odd (EvenNegativeCount otherwise; that case has a 2-NZF
// instead).  Runs the two-case analysis: with one unbalanced circuit the
// other two are split at negative-edge endpoints into three odd-negative
// Eulerian parts; with three unbalanced circuits the circuits themselves
// are the parts.  Each part carries a tour flow with defect +2c at the hub
// (c = 1, 1, 2) and the combination f1 + f2 - f3 is the verified 3-NZF.
FlowAssignment hamilton_decomposable_3flow(const SignedGraph& g, const SubgraphRef& c1,
                                           const SubgraphRef& c2, const SubgraphRef& c3,
                                           ThreeFlowParts* parts_out = nullptr);

// Decomposition of a connected 6-regular multigraph into three Hamiltonian
// circuits: first tries the per-copy generator-class circuits of `spec`
// (each class whose generator spans the group is already Hamiltonian), then
// falls back to exact backtracking.  nullopt when no decomposition exists
// within the (structural, exact) search.
std::optional<std::vector<std::vector<int>>> find_hamilton_decomposition(
    const SignedGraph& g, const CayleySpec& spec);

// Exact flow-number classification for connected signed Cayley graphs over
// abelian groups of odd order (hence Eulerian: no involutions, |S| even).
struct OddCayleyPhi {
    int phi = 0;                             // 2, 3, or 4
    FlowAssignment flow;                     // verified phi-NZF
    std::optional<SearchReport> exhaustion;  // phi == 4: the k = 3 not-exists report
    ThreeFlowParts parts;                    // phi == 3 via decomposition; empty otherwise
};

// phi = 2 iff |E_N| is even (2-NZF on the Eulerian graph); otherwise
// phi = 4 when |S|/2 == 2 (exact 4-NZF witness plus exhaustive rejection at
// k = 3) and phi = 3 when |S|/2 >= 3 (Hamilton-decomposition construction
// at |S|/2 == 3, exact 3-NZF search above).  Throws EvenOrder on groups of
// even order, Disconnected when S does not generate the group, and
// NotFlowAdmissible from the admissibility gate.
OddCayleyPhi flow_number_odd_cayley(const SignedGraph& g, const CayleySpec& spec);

// JSON (de)serialization of CayleySpec:
// {"group":[...],"connection":[[...],...],"signs":[...]} with signs
// optional.  Used by the CLI for generator input and spec sidecar files.
std::string cayley_spec_to_json(const CayleySpec& spec);
CayleySpec cayley_spec_from_json_text(const std::string& text);

} // namespace sgf
