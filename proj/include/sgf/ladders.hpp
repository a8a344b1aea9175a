#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// ---------------------------------------------------------------------------
// Signed ladders.
//
// A ladder on n rungs has vertices x_0..x_{n-1} (ids 0..n-1) and
// y_0..y_{n-1} (ids n..2n-1) and the canonical edge-id layout
//
//   rung i      : id i        = (x_i, y_i)                     i in [0, n)
//   x-rail slot : id n + t    = (x_t, x_{t+1 mod n})           t in [0, n)
//   y-rail slot : id 2n + t   = (y_t, y_{t+1 mod n})           t in [0, n)
//
// In the circular kind both rails close onto themselves; in the Moebius
// kind the two wrap slots cross over: slot n-1 of the x-rail joins
// x_{n-1} to y_0 and slot n-1 of the y-rail joins y_{n-1} to x_0.
// ---------------------------------------------------------------------------

enum class LadderKind { Circular, Moebius };

struct LadderSpec {
    LadderKind kind = LadderKind::Circular;
    int n = 3;
    // Signatures per position; empty vectors mean all-positive.
    std::vector<int> rung_signs;
    std::vector<int> x_signs;
    std::vector<int> y_signs;
};

// Canonical edge ids for a ladder on n rungs.
inline int rung_id(int /*n*/, int i) { return i; }
inline int x_slot_id(int n, int t) { return n + t; }
inline int y_slot_id(int n, int t) { return 2 * n + t; }

// Builds the ladder in the canonical layout above.  The circular kind with
// n = 1 would need loops at x_0 and y_0, which the graph type rejects; that
// case throws LoopRejected and is served by gen_ladder_cl1 instead.  The
// Moebius kind with n = 1 is the triple edge on {x_0, y_0} and is built
// normally.  Throws PreconditionViolated on malformed specs.
SignedGraph gen_ladder(const LadderSpec& spec);

// Loop-free encoding of the 1-rung circular ladder: a 2-vertex multigraph
// on {x_0 = 0, y_0 = 1} with four parallel edges,
//   id 0: the rung, carrying rung_sign     id 1: a second, positive rung
//   id 2: stand-in for the x-rail loop     id 3: stand-in for the y-rail loop
// i.e. the doubled-rung barbell isomorph of the degenerate product graph.
SignedGraph gen_ladder_cl1(int rung_sign, int x_sign, int y_sign);
bool is_cl1_encoding(const SignedGraph& g);

// Reads the spec back off a graph in canonical layout (vertex and edge ids
// exactly as produced by gen_ladder); nullopt when the graph is not in that
// form.  The two kinds never collide: they differ in the wrap-slot
// endpoints for every n gen_ladder accepts (circular n = 1 is rejected).
std::optional<LadderSpec> ladder_spec_of(const SignedGraph& g);

// ---------------------------------------------------------------------------
// Extenders: replace the rail pair at one position of a circular ladder by
// two all-positive paths of length m+1 and connect the inserted vertices
// with rungs that alternate sign (negative at odd offsets).
// ---------------------------------------------------------------------------

struct ExtenderSpec {
    LadderSpec base; // circular
    int position = 0; // i: the rail slots (x_i x_{i+1}) and (y_i y_{i+1})
    int length = 0;   // m: number of inserted rungs (m = 4q for flows)
};

// The spec of the extended ladder on n + m rungs: inserted vertices take
// positions i+1..i+m, old positions beyond i shift up by m.  Requires both
// replaced rail slots positive (BasePairNotPositive otherwise).
LadderSpec extended_spec(const ExtenderSpec& spec);

// gen_ladder(extended_spec(spec)); for m = 0 this is the base itself.
SignedGraph extend_ladder(const ExtenderSpec& spec);

// Extends a k-NZF of the base ladder across the inserted paths.  The base
// flow is combined with (variant 1) one or (variant 2) two copies of a
// periodic correction flow supported on the insertion; the sign of the
// correction is chosen so that the result verifies, preferring +.
// Preconditions (TemplatePreconditionViolated otherwise): base_flow is a
// verified k-NZF with k >= 4, m is a multiple of 4, and the values on the
// replaced rail pair have magnitudes (1, 2) for variant 1 or (1, 1) for
// variant 2.
FlowAssignment extend_flow(const FlowAssignment& base_flow, const ExtenderSpec& spec,
                           int variant);

// ---------------------------------------------------------------------------
// Template fixtures: five explicitly verified flows on small ladders,
// shipped as versioned data files (see data/templates/README.md) and used
// as the bases of the alternating-rung constructions below.
// ---------------------------------------------------------------------------

enum class LadderTemplate {
    Cl4PositiveRims, // circular n=4, positive rails, rungs +,-,+,-    (k=4)
    Cl6PositiveRims, // circular n=6, positive rails, rungs +,-,...    (k=4)
    Cl4NegativeRims, // circular n=4, slot 0 of both rails negative,
                     // rungs -,+,-,+                                  (k=6)
    Cl2NegativeRims, // circular n=2, slot 0 of both rails negative,
                     // rungs -,+                                      (k=4)
    Cl6NegativeRims, // circular n=6, slot 0 of both rails negative,
                     // rungs -,+,-,+,-,+                              (k=4)
};

struct TemplateFixture {
    std::string name; // data file stem
    LadderSpec spec;
    SignedGraph graph;
    FlowAssignment flow; // verified k-NZF in the default orientation
    int k = 0;
};

// Loads (and caches) a template from the data directory; every load
// re-verifies the flow and throws FormatError on any mismatch.
const TemplateFixture& ladder_template(LadderTemplate t);

// Directory the templates are read from: $SFF_DATA_DIR when set, else the
// compiled-in default.
std::string template_data_dir();

// ---------------------------------------------------------------------------
// Flow-building helpers shared by the template loader and constructions.
// ---------------------------------------------------------------------------

// Overwrites fa.value[id] (fa must carry the default orientation of g) so
// that the edge carries `magnitude` units in the direction given by orient:
//   "uv"  from e.u to e.v            "vu"  from e.v to e.u   (positive edges)
//   "in"  toward both endpoints      "out" away from both    (negative edges)
// Throws FormatError when the orient token does not fit the edge sign.
void set_edge_flow(const SignedGraph& g, FlowAssignment& fa, int edge_id,
                   const std::string& orient, int magnitude);

// Signed flow on a positive edge read in the direction from -> to:
// positive when the edge carries flow from `from` toward `to`.
long long directed_value(const SignedGraph& g, const FlowAssignment& fa, int edge_id,
                         int from, int to);

// Re-expresses fa over the default orientation of g (negating values where
// the stored tau is the reversed state).  Throws ModeMismatch when fa does
// not fit g.
FlowAssignment to_default_orientation(const SignedGraph& g, const FlowAssignment& fa);

// ---------------------------------------------------------------------------
// 6-NZF constructions for signed ladders.  Both gate on flow-admissibility
// (NotFlowAdmissible) and return a verified flow whose k records the
// achieved bound (2, 3 or 4 on many families, 6 in general).
// ---------------------------------------------------------------------------

// Circular ladders, including the 2-vertex encoding of the 1-rung case.
FlowAssignment six_nzf_circular(const SignedGraph& g);

// Moebius ladders (any n >= 1 in canonical layout).
FlowAssignment six_nzf_moebius(const SignedGraph& g);

} // namespace sgf
