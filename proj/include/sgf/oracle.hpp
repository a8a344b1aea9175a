#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sgf/flow.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// Exact brute-force decision procedures.  These are the ground truth the
// constructive algorithms are tested against, so they use only elementary
// arithmetic pruning that is provably sound: per-vertex residual range and
// parity bounds, and the per-component identity that the boundary sums of
// all vertices add up to twice the signed sum over negative edges.

enum class Decision { Exists, NotExists, BudgetExceeded };

struct SearchReport {
    Decision decision = Decision::NotExists;
    int k = 0;
    FlowMode mode = FlowMode::Integer;
    std::optional<FlowAssignment> witness; // present iff decision == Exists
    long long nodes = 0;                   // assignments attempted
    int max_depth = 0;                     // deepest partial assignment
    double millis = 0.0;
};

inline constexpr long long kUnbounded = std::numeric_limits<long long>::max();

// Decides whether g admits a nowhere-zero k-flow (integer mode: values in
// {±1,…,±(k−1)}; modular mode: values in {1,…,k−1} mod k), by backtracking
// over the non-tree edges of a spanning forest in ascending id order; each
// tree edge is forced once a vertex has a single unassigned incident edge.
// The default orientation is kept fixed: negating a negative edge's two half
// edges is equivalent to negating its value, so signed values (respectively
// the complement k−f) already range over both orientation states.  Value
// order is 1, −1, 2, −2, … (integer) and 1, 2, … (modular); the witness is
// the first solution in this order, hence lexicographically least in the
// search order.  NotExists is only reported after full exhaustion; running
// out of budget yields BudgetExceeded instead.
SearchReport exists_nzf(const SignedGraph& g, int k, FlowMode mode,
                        long long budget_nodes = kUnbounded);

struct FlowNumberResult {
    bool admissible = false; // false: no k-NZF for any k (the infinity marker)
    bool bounded = false;    // true: phi found within k_max
    int phi = 0;             // smallest k with a k-NZF, when bounded
    int k_max = 0;
    std::optional<FlowAssignment> witness; // integer phi-NZF, when bounded
    long long nodes = 0;                   // total over all k tried
};

// Exact integer flow number: smallest k ≤ k_max admitting a k-NZF.  When no
// such k exists the result distinguishes a flow-inadmissible graph
// (admissible=false, the infinity marker) from one whose flow number merely
// exceeds k_max.  Throws BudgetExceeded when the node budget runs out.
FlowNumberResult flow_number(const SignedGraph& g, int k_max = 8,
                             long long budget_nodes = kUnbounded);

struct TwoFactorReport {
    bool exists = false;
    std::vector<int> factor; // edge ids of the antibalanced 2-factor
    long long matchings = 0; // perfect matchings enumerated
};

// Searches a cubic graph for an antibalanced 2-factor (each even circuit of
// the factor balanced, each odd circuit unbalanced) by enumerating perfect
// matchings — always matching the smallest uncovered vertex next, edges in
// ascending id order — and testing each complement.
// Throws NotCubic unless every vertex has degree 3.
TwoFactorReport antibalanced_2factor(const SignedGraph& g);

} // namespace sgf
