#include "sgf/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>

#include "sgf/admissible.hpp"

namespace sgf {

namespace {

// Backtracking state for one connected component.  Values are written into
// the shared assignment so a full-graph witness accumulates across
// components.
class ComponentSearch {
  public:
    ComponentSearch(const SignedGraph& g, int k, FlowMode mode, const Orientation& tau,
                    std::vector<int>& value, long long budget)
        : g_(g), k_(k), mode_(mode), tau_(tau), value_(value), budget_(budget),
          assigned_(size_t(g.edge_slots()), 0), in_comp_(size_t(g.edge_slots()), 0),
          resid_(size_t(g.vertex_count()), 0), remaining_(size_t(g.vertex_count()), 0) {}

    long long nodes = 0;
    int max_depth = 0;
    bool exceeded = false;

    // true iff some assignment over the component's edges extends to a
    // nowhere-zero flow on it
    bool run(const std::vector<int>& comp_vertices, const std::vector<int>& comp_edges) {
        comp_edges_ = &comp_edges;
        for (int e : comp_edges) {
            in_comp_[size_t(e)] = 1;
            remaining_[size_t(g_.edge(e).u)]++;
            remaining_[size_t(g_.edge(e).v)]++;
            if (g_.edge(e).sign < 0) neg_remaining_++;
        }
        // spanning forest (BFS, ascending ids); non-tree edges are the free
        // search variables
        std::vector<char> reached(size_t(g_.vertex_count()), 0);
        std::vector<char> in_tree(size_t(g_.edge_slots()), 0);
        std::vector<int> queue;
        reached[size_t(comp_vertices[0])] = 1;
        queue.push_back(comp_vertices[0]);
        for (size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int id : g_.incident(v)) {
                if (!in_comp_[size_t(id)]) continue;
                const Edge& e = g_.edge(id);
                int w = e.u == v ? e.v : e.u;
                if (reached[size_t(w)]) continue;
                reached[size_t(w)] = 1;
                in_tree[size_t(id)] = 1;
                queue.push_back(w);
            }
        }
        for (int e : comp_edges)
            if (!in_tree[size_t(e)]) free_edges_.push_back(e);

        // depth-0 feasibility (this is where an odd number of negative edges
        // refutes k = 2 in O(1)) and initial forcing
        for (int v : comp_vertices)
            if (!vertex_ok(v)) return false;
        if (!neg_ok()) return false;
        std::vector<int> force = comp_vertices;
        if (!propagate(force)) return false;
        return dfs(0);
    }

  private:
    const SignedGraph& g_;
    int k_;
    FlowMode mode_;
    const Orientation& tau_;
    std::vector<int>& value_;
    long long budget_;
    std::vector<char> assigned_, in_comp_;
    std::vector<long long> resid_;
    std::vector<int> remaining_;
    long long neg_sum_ = 0;
    int neg_remaining_ = 0;
    std::vector<int> trail_;
    std::vector<int> free_edges_;
    const std::vector<int>* comp_edges_ = nullptr;

    bool vertex_ok(int v) const {
        long long r = resid_[size_t(v)];
        int rem = remaining_[size_t(v)];
        if (mode_ == FlowMode::Integer) {
            if (std::llabs(r) > (long long)(k_ - 1) * rem) return false;
            if (k_ == 2 && ((std::llabs(r) + rem) & 1)) return false;
        } else {
            if (rem == 0 && ((r % k_) + k_) % k_ != 0) return false;
        }
        return true;
    }

    // Boundary sums over a component add to twice the value sum over its
    // negative edges (positive-edge contributions cancel), so that sum must
    // reach zero in integer mode: range and k=2 parity prune on it.
    bool neg_ok() const {
        if (mode_ != FlowMode::Integer) return true;
        if (std::llabs(neg_sum_) > (long long)(k_ - 1) * neg_remaining_) return false;
        if (k_ == 2 && ((std::llabs(neg_sum_) + neg_remaining_) & 1)) return false;
        return true;
    }

    bool assign(int e, long long f) {
        ++nodes;
        if (nodes > budget_) {
            exceeded = true;
            return false;
        }
        const Edge& ed = g_.edge(e);
        assigned_[size_t(e)] = 1;
        value_[size_t(e)] = (int)f;
        trail_.push_back(e);
        max_depth = std::max(max_depth, (int)trail_.size());
        resid_[size_t(ed.u)] += (long long)tau_.at(e, 0) * f;
        resid_[size_t(ed.v)] += (long long)tau_.at(e, 1) * f;
        remaining_[size_t(ed.u)]--;
        remaining_[size_t(ed.v)]--;
        if (ed.sign < 0) {
            neg_sum_ += f;
            neg_remaining_--;
        }
        return vertex_ok(ed.u) && vertex_ok(ed.v) && neg_ok();
    }

    void undo_to(size_t mark) {
        while (trail_.size() > mark) {
            int e = trail_.back();
            trail_.pop_back();
            const Edge& ed = g_.edge(e);
            long long f = value_[size_t(e)];
            resid_[size_t(ed.u)] -= (long long)tau_.at(e, 0) * f;
            resid_[size_t(ed.v)] -= (long long)tau_.at(e, 1) * f;
            remaining_[size_t(ed.u)]++;
            remaining_[size_t(ed.v)]++;
            if (ed.sign < 0) {
                neg_sum_ -= f;
                neg_remaining_++;
            }
            assigned_[size_t(e)] = 0;
            value_[size_t(e)] = 0;
        }
    }

    // Forces every edge that has become the only unassigned edge at some
    // vertex; `work` seeds the vertices to inspect.
    bool propagate(std::vector<int>& work) {
        while (!work.empty()) {
            int v = work.back();
            work.pop_back();
            if (remaining_[size_t(v)] != 1) continue;
            int e = -1;
            for (int id : g_.incident(v))
                if (in_comp_[size_t(id)] && !assigned_[size_t(id)]) {
                    e = id;
                    break;
                }
            const Edge& ed = g_.edge(e);
            int end = ed.u == v ? 0 : 1;
            int other = ed.u == v ? ed.v : ed.u;
            long long f;
            if (mode_ == FlowMode::Integer) {
                f = -resid_[size_t(v)] * tau_.at(e, end);
                if (f == 0 || std::llabs(f) > k_ - 1) return false;
            } else {
                f = (((-resid_[size_t(v)] * tau_.at(e, end)) % k_) + k_) % k_;
                if (f == 0) return false;
            }
            if (!assign(e, f)) return false;
            work.push_back(other);
        }
        return true;
    }

    bool dfs(size_t idx) {
        if (exceeded) return false;
        while (idx < free_edges_.size() && assigned_[size_t(free_edges_[idx])]) ++idx;
        if (idx == free_edges_.size()) return true; // propagation closed the rest
        int e = free_edges_[idx];
        const Edge& ed = g_.edge(e);
        int limit = mode_ == FlowMode::Integer ? 2 * (k_ - 1) : k_ - 1;
        for (int step = 0; step < limit; ++step) {
            long long f = mode_ == FlowMode::Integer
                              ? ((step & 1) ? -(step / 2 + 1) : step / 2 + 1)
                              : step + 1;
            size_t mark = trail_.size();
            std::vector<int> work{ed.u, ed.v};
            if (assign(e, f) && propagate(work) && dfs(idx + 1)) return true;
            undo_to(mark);
            if (exceeded) return false;
        }
        return false;
    }
};

} // namespace

SearchReport exists_nzf(const SignedGraph& g, int k, FlowMode mode, long long budget_nodes) {
    if (k < 2) throw Error(errc::bad_k, "nowhere-zero k-flow needs k >= 2, got " + std::to_string(k));
    auto t0 = std::chrono::steady_clock::now();
    SearchReport rep;
    rep.k = k;
    rep.mode = mode;

    Orientation tau = default_orientation(g);
    std::vector<int> value(size_t(g.edge_slots()), 0);
    bool all_found = true;
    long long budget_left = budget_nodes;
    for (const auto& comp : g.vertex_components()) {
        std::vector<int> comp_edges;
        for (int id : g.edge_ids()) {
            const Edge& e = g.edge(id);
            if (std::find(comp.begin(), comp.end(), e.u) != comp.end()) comp_edges.push_back(id);
        }
        if (comp_edges.empty()) continue;
        ComponentSearch cs(g, k, mode, tau, value, budget_left);
        bool found = cs.run(comp, comp_edges);
        rep.nodes += cs.nodes;
        rep.max_depth = std::max(rep.max_depth, cs.max_depth);
        if (budget_left != kUnbounded) budget_left -= cs.nodes;
        if (cs.exceeded) {
            rep.decision = Decision::BudgetExceeded;
            rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return rep;
        }
        if (!found) {
            all_found = false;
            break;
        }
    }
    if (all_found) {
        FlowAssignment fa;
        fa.mode = mode;
        fa.k = k;
        fa.tau = tau;
        fa.value = value;
        VerifyResult check = verify_flow(g, fa);
        if (!check.valid_flow || !check.nowhere_zero)
            throw Error(errc::internal, "oracle produced a witness that fails verification");
        rep.witness = std::move(fa);
        rep.decision = Decision::Exists;
    } else {
        rep.decision = Decision::NotExists;
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

FlowNumberResult flow_number(const SignedGraph& g, int k_max, long long budget_nodes) {
    FlowNumberResult res;
    res.k_max = k_max;
    long long budget_left = budget_nodes;
    for (int k = 2; k <= k_max; ++k) {
        SearchReport rep = exists_nzf(g, k, FlowMode::Integer, budget_left);
        res.nodes += rep.nodes;
        if (budget_left != kUnbounded) budget_left -= rep.nodes;
        if (rep.decision == Decision::BudgetExceeded)
            throw Error(errc::budget_exceeded,
                        "flow-number search ran out of nodes at k = " + std::to_string(k));
        if (rep.decision == Decision::Exists) {
            res.admissible = true;
            res.bounded = true;
            res.phi = k;
            res.witness = std::move(rep.witness);
            return res;
        }
    }
    res.admissible = is_flow_admissible(g).admissible;
    res.bounded = false;
    return res;
}

namespace {

bool factor_antibalanced(const SignedGraph& g, const std::vector<int>& factor) {
    for (const auto& comp : g.components(g.ref(factor))) {
        int sign = g.sign_product(comp.edges);
        int want = (comp.edges.size() % 2 == 0) ? 1 : -1;
        if (sign != want) return false;
    }
    return true;
}

} // namespace

TwoFactorReport antibalanced_2factor(const SignedGraph& g) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) != 3)
            throw Error(errc::not_cubic, "vertex " + std::to_string(v) + " has degree " +
                                             std::to_string(g.degree(v)));
    TwoFactorReport rep;
    int n = g.vertex_count();
    if (n == 0) {
        rep.exists = true;
        return rep;
    }
    if (n % 2 != 0) return rep; // no perfect matching, hence no 2-factor

    std::vector<char> matched(size_t(n), 0);
    std::vector<int> matching;
    std::function<bool()> rec = [&]() {
        int v = -1;
        for (int i = 0; i < n; ++i)
            if (!matched[size_t(i)]) {
                v = i;
                break;
            }
        if (v < 0) {
            rep.matchings++;
            std::vector<int> factor;
            auto m = sorted_unique(matching);
            for (int id : g.edge_ids())
                if (!contains_id(m, id)) factor.push_back(id);
            if (factor_antibalanced(g, factor)) {
                rep.exists = true;
                rep.factor = factor;
                return true;
            }
            return false;
        }
        for (int id : g.incident(v)) {
            const Edge& e = g.edge(id);
            int w = e.u == v ? e.v : e.u;
            if (matched[size_t(w)]) continue;
            matched[size_t(v)] = matched[size_t(w)] = 1;
            matching.push_back(id);
            if (rec()) return true;
            matching.pop_back();
            matched[size_t(v)] = matched[size_t(w)] = 0;
        }
        return false;
    };
    rec();
    return rep;
}

} // namespace sgf
