#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgf/signed_graph.hpp"

namespace sgf {

// The three signed-circuit shapes: a balanced circuit; two unbalanced
// circuits meeting at a single vertex (short barbell); two vertex-disjoint
// unbalanced circuits joined by a path that meets them only at its ends
// (long barbell).
enum class SignedCircuitKind { BalancedCircuit, ShortBarbell, LongBarbell };

struct SignedCircuit {
    SignedCircuitKind kind = SignedCircuitKind::BalancedCircuit;
    std::vector<int> circuit1; // balanced circuit, or first unbalanced circuit
    std::vector<int> circuit2; // second unbalanced circuit (barbells)
    std::vector<int> path;     // connecting path (long barbell; empty otherwise)

    std::vector<int> edges() const; // sorted union of the parts
};

struct ClassifyResult {
    bool ok = false;
    SignedCircuit value;
    std::string reason; // violated structural condition when !ok
};

// Recognizes exactly the three signed-circuit shapes.
ClassifyResult classify_signed_circuit(const SignedGraph& g, const std::vector<int>& edge_set);

struct AdmissibilityResult {
    bool admissible = false;
    // When inadmissible: an edge whose deletion leaves a balanced component
    // (for unbalanced components), or a bridge (for balanced components);
    // -1 when the graph is admissible or empty.
    int offending_edge = -1;
    std::string reason;
};

// Flow-admissibility, decided per connected component: a balanced component
// is admissible iff bridgeless; an unbalanced component is admissible iff no
// single edge deletion leaves a balanced component.  Isolated vertices and
// the empty graph are vacuously admissible.
AdmissibilityResult is_flow_admissible(const SignedGraph& g);

// A signed circuit containing `e`, or nullopt when none exists within the
// node budget.  Layered deterministic search: balanced circuits through e
// first; then barbells with e on an unbalanced circuit; then barbells with e
// on the connecting path.  On flow-admissible graphs a circuit always
// exists; a nullopt there indicates the budget was too small.
std::optional<SignedCircuit> signed_circuit_through(const SignedGraph& g, int e,
                                                    long long budget_nodes = 200000);

// One signed circuit per edge, covering E(g).  Throws NotFlowAdmissible on
// inadmissible input and InternalError if the per-edge search ever fails on
// an admissible graph.
std::vector<SignedCircuit> signed_circuit_cover(const SignedGraph& g,
                                                long long budget_nodes = 200000);

} // namespace sgf
