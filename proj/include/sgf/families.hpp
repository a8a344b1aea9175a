#pragma once

#include <vector>

#include "sgf/cayley.hpp"
#include "sgf/signed_graph.hpp"

namespace sgf {

// Cubic sharpness family: the circuit on 2n vertices with every other edge
// doubled into a digon, exactly one copy per digon negative.  Canonical
// layout, for t in [0, n):
//   id 2t     : positive digon copy of (2t, 2t+1)
//   id 2t + 1 : negative digon copy of (2t, 2t+1)
//   id 2n + t : single positive edge (2t+1, 2t+2 mod 2n)
// |E| = 3n, |E_N| = n.  Throws PreconditionViolated for n < 1.
SignedGraph gen_gn(int n);

// The positive digon copies together with the single edges: a balanced
// Hamiltonian circuit of gen_gn(n), as sorted edge ids.
std::vector<int> gn_balanced_hamiltonian(int n);

// Fixed 8-vertex sharpness example: the cube over Z_2 x Z_2 x Z_2 with the
// three unit generators and four negative edges; its flow number is exactly
// 6 (no 5-NZF exists).  Identical to gen_cayley(fig2_cayley_spec()).
SignedGraph gen_fig2();

// The Cayley description of gen_fig2(), usable as a sidecar spec for the
// abelian-Cayley constructions.
CayleySpec fig2_cayley_spec();

} // namespace sgf
