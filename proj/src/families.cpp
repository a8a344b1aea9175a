#include "sgf/families.hpp"

#include <string>

#include "sgf/errors.hpp"

namespace sgf {

SignedGraph gen_gn(int n) {
    if (n < 1)
        throw Error(errc::precondition_violated, "gn needs n >= 1, got " + std::to_string(n));
    SignedGraph g(2 * n);
    for (int t = 0; t < n; ++t) {
        g.add_edge(2 * t, 2 * t + 1, 1);
        g.add_edge(2 * t, 2 * t + 1, -1);
    }
    for (int t = 0; t < n; ++t) g.add_edge(2 * t + 1, (2 * t + 2) % (2 * n), 1);
    return g;
}

std::vector<int> gn_balanced_hamiltonian(int n) {
    if (n < 1)
        throw Error(errc::precondition_violated, "gn needs n >= 1, got " + std::to_string(n));
    std::vector<int> ids;
    for (int t = 0; t < n; ++t) ids.push_back(2 * t);
    for (int t = 0; t < n; ++t) ids.push_back(2 * n + t);
    return ids;
}

CayleySpec fig2_cayley_spec() {
    CayleySpec spec;
    spec.group = {2, 2, 2};
    spec.connection = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    spec.signs.assign(12, 1);
    // Four negative edges pinning the unique switching class of the cube
    // whose flow number is 6; all other classes stay at 4 or below.
    for (int id : {0, 1, 8, 11}) spec.signs[static_cast<size_t>(id)] = -1;
    return spec;
}

SignedGraph gen_fig2() { return gen_cayley(fig2_cayley_spec()); }

} // namespace sgf
