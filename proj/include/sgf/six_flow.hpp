#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// Record of the decisions a 6-flow construction made, sufficient to replay
// it by hand.  Edge ids refer to the graph the recorded step actually ran
// on: the input after the recorded switching, and additionally after cubic
// regularization whenever a "regularized" label is present (original edges
// keep their ids through both, added edges get fresh ones).
struct ConstructionTrace {
    std::vector<std::string> case_labels; // dispatch decisions, in order
    std::vector<int> switching_set;       // vertices switched before dispatch
    std::vector<int> circuit_h;           // spanning circuit edge ids
    int e1 = -1;                          // selected negative pair, -1 if unused
    int e2 = -1;
    std::vector<int> path_p;              // connecting path edges, in order
    std::vector<int> m_edges;             // negative-pair chord set minus e2
    std::vector<int> m_p_edges;           // chords touching the path interior
    std::vector<int> m_prime_edges;       // chords kept away from the path
    std::vector<int> m_star_edges;        // edges pinned to +-1 in the lift
    std::vector<int> g1_edges;            // circuit plus the selected pair
    std::vector<int> g2_edges;            // graph after the removal step
    std::vector<int> g3_edges;            // support handed to the parity lift
    std::vector<int> g4_edges;            // parity pattern realized by f4
    std::vector<std::vector<int>> component_circuits; // all-positive circuits
    std::vector<std::pair<std::string, FlowAssignment>> flows; // f1..f4
    int chosen_sign = 0;                  // sign picked in the final sum
};

// Serializes a trace (with the graph fingerprint) to pretty JSON.
std::string trace_to_json(const SignedGraph& g, const ConstructionTrace& t);

// 6-NZF on a signed graph with an all-positive spanning circuit h and an
// even number of negative edges.  Sums a 3-flow that is +-1 on every chord
// (found by parity-lifting the symmetric difference of the chords'
// fundamental circuits) with three times a 2-flow on the circuit.  Throws
// OddNegativeCount, or PreconditionViolated when h is not an all-positive
// spanning circuit.
FlowAssignment even_case(const SignedGraph& g, const SubgraphRef& h);

// 6-NZF when two negative chords e1, e2 of the all-positive spanning
// circuit h cross (their endpoints interleave strictly along h).  With an
// even number of negative edges delegates to even_case; otherwise doubles a
// 3-flow on g - e1 that is +-1 on chords and corrects with a magnitude-2
// template on h + e1 + e2, trying both signs.  Throws NotIntersecting when
// the pair does not cross (or is not a pair of negative chords), and
// PreconditionViolated as in even_case.
FlowAssignment intersect_case(const SignedGraph& g, const SubgraphRef& h,
                              int e1, int e2);

// 6-NZF on a cubic g whose negative edges (an odd number, at least three)
// are pairwise non-crossing chords of the all-positive Hamiltonian circuit
// h.  Selects the shortest circuit arc joining two negative chords whose
// interior chords are all positive, removes alternating edges, parity-lifts
// the rest, and corrects with a magnitude pattern on the two selected
// chords.  Throws PreconditionViolated naming the failed clause.
std::pair<FlowAssignment, ConstructionTrace>
parallel_case(const SignedGraph& g, const SubgraphRef& h);

// 6-NZF on any flow-admissible signed graph with a spanning circuit h of
// positive total sign.  Switches h all-positive, regularizes to a cubic
// graph when needed, dispatches on the negative-edge pattern, and
// transports the result back.  Throws NotFlowAdmissible or
// NotBalancedHamiltonian.
std::pair<FlowAssignment, ConstructionTrace>
six_nzf_balanced_hamiltonian(const SignedGraph& g, const SubgraphRef& h);

// 6-NZF on any flow-admissible signed graph with a spanning connected even
// subgraph h carrying an even number of negative edges.  Regularizes to a
// cubic graph with a balanced Hamiltonian circuit and pulls the flow back.
// Throws NotFlowAdmissible or NotEvenEulerian.
FlowAssignment six_nzf_spanning_even_eulerian(const SignedGraph& g,
                                              const SubgraphRef& h);

// 6-NZF on a cubic signed graph whose edges split into three perfect
// matchings with every pairwise union a Hamiltonian circuit.  Two of the
// matchings carry the same negative-edge parity; their union is a spanning
// circuit of positive sign and the balanced-circuit construction applies.
// Throws NotKotzig when the decomposition is invalid, NotFlowAdmissible.
FlowAssignment six_nzf_kotzig(const SignedGraph& g, const SubgraphRef& m1,
                              const SubgraphRef& m2, const SubgraphRef& m3);

// Backtracking search for a spanning circuit of positive total sign,
// returned as a sorted edge-id list.  Explores incident edges in ascending
// id order from vertex 0 and stops at the first balanced circuit, so the
// result is deterministic.  Returns nullopt when none exists or when the
// node budget runs out.
std::optional<std::vector<int>>
find_balanced_hamiltonian_circuit(const SignedGraph& g,
                                  long long node_budget = 4'000'000);

} // namespace sgf
