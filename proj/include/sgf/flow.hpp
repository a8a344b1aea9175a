#pragma once

#include <array>
#include <string>
#include <vector>

#include "sgf/signed_graph.hpp"

namespace sgf {

enum class FlowMode { Integer, Modular };

// Bidirected orientation: one tau in {+1,-1} per half edge, stored as
// (tau at stored endpoint u, tau at stored endpoint v).  The law couples it
// to the signature: tau_u * tau_v == -sign(e) for every live edge.
struct Orientation {
    std::vector<std::array<int, 2>> tau; // indexed by edge id; {0,0} for dead slots

    int at(int edge_id, int end) const { return tau[size_t(edge_id)][size_t(end)]; }
};

Orientation default_orientation(const SignedGraph& g);
void check_orientation(const SignedGraph& g, const Orientation& o);

// A flow candidate.  Integer mode: values in (-k, k).  Modular mode: values
// in [0, k).  Dead edge slots carry value 0.
struct FlowAssignment {
    FlowMode mode = FlowMode::Integer;
    int k = 0;
    Orientation tau;
    std::vector<int> value; // indexed by edge id

    int f(int edge_id) const { return value[size_t(edge_id)]; }
};

FlowAssignment make_zero_flow(const SignedGraph& g, FlowMode mode, int k);

// Sum of tau(h) * f(e) over the half edges at v (integer arithmetic; callers
// reduce mod k themselves in modular mode).
long long boundary(const SignedGraph& g, const FlowAssignment& fa, int v);

struct FlowViolation {
    std::string kind; // "orientation" | "range" | "zero" | "boundary"
    int edge = -1;
    int vertex = -1;
};

struct VerifyResult {
    bool valid_flow = false;    // boundary + range + orientation law
    bool nowhere_zero = false;  // additionally no zero values on live edges
    std::vector<FlowViolation> violations;
};

// Full verification of fa against g at fa.k in fa.mode.  Violations are
// reported in deterministic order (edges ascending, then vertices ascending).
VerifyResult verify_flow(const SignedGraph& g, const FlowAssignment& fa);

// a*f1 + b*f2 with f2 re-expressed in f1's orientation (per-edge negation
// where the orientations disagree).  Integer x Integer only, or Modular x
// Modular with equal k; anything else throws ModeMismatch.
FlowAssignment combine(const SignedGraph& g, long long a, const FlowAssignment& f1, long long b,
                       const FlowAssignment& f2);

// Flow transport across a switching: negating tau on every half edge
// incident with U turns a flow on g into a flow on g.switch_at(U) with the
// same values and the same verification verdict.
FlowAssignment transport_switching(const FlowAssignment& fa, const SignedGraph& g_before,
                                   const std::vector<int>& U);

// Integer 2-flow (all values +-1) with support exactly `h`, which must be an
// even subgraph whose every component has an even number of negative edges;
// all-positive h is the common special case.  Orientation follows the
// deterministic Euler tour of each component.
FlowAssignment two_nzf_on_even(const SignedGraph& g, const SubgraphRef& h);

// Strict variant used by the construction pipeline: h must be all-positive.
FlowAssignment two_flow_on_positive_even(const SignedGraph& g, const SubgraphRef& h);

// Same tour construction but allowing components with an odd number of
// negative edges: values are all +-c and the boundary vanishes everywhere
// except possibly the tour base of odd components, where it equals +2c.
// Used to assemble 3-flows from Eulerian decompositions.
struct DefectFlow {
    FlowAssignment flow;
    std::vector<std::pair<int, int>> defects; // (vertex, boundary value)
};
DefectFlow tour_flow_with_defects(const SignedGraph& g, const SubgraphRef& h, int magnitude,
                                  int base_vertex = -1);

// Z2 flow with support h (h must be even); values 1 on h under the default
// orientation.
FlowAssignment z2_flow_on_even(const SignedGraph& g, const SubgraphRef& h);

// Integer 3-flow f with {e : |f(e)| = 1} == supp(f_z2) and values in
// {0,+-2} elsewhere.  Requires every edge of g to lie in one component
// (isolated vertices are permitted) and supp(f_z2) to carry an even number
// of negative edges.  Deterministic: first solution of a depth-first
// search in ascending edge-id order with ascending value order, i.e. the
// lexicographically least solution.  Throws SearchExhausted if none exists.
FlowAssignment lift_z2_to_3flow(const SignedGraph& g, const FlowAssignment& f_z2);

// Serialization (certificate payload format).
std::string flow_to_json(const SignedGraph& g, const FlowAssignment& fa);
FlowAssignment flow_from_json_text(const SignedGraph& g, const std::string& text);

} // namespace sgf
