#include "eult/counting.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace eult {

BigCount bareiss_determinant(std::vector<std::vector<BigCount>> m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("matrix is not square");
    if (n == 0) return 1;

    int sign = 1;
    BigCount prev_pivot = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(),
                             prev_pivot.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev_pivot = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : BigCount(-m[n - 1][n - 1]);
}

BigCount count_arborescences(const Multigraph& g, NodeId root) {
    const NodeId n = g.node_count();
    if (n <= 1) return 1;

    // In-degree Laplacian restricted to nodes != root.
    std::vector<NodeId> idx(n, -1);
    NodeId k = 0;
    for (NodeId v = 0; v < n; ++v)
        if (v != root) idx[v] = k++;

    std::vector<std::vector<BigCount>> m(k, std::vector<BigCount>(k, 0));
    for (NodeId v = 0; v < n; ++v)
        if (v != root) m[idx[v]][idx[v]] = g.in_degree(v);
    for (const EdgeRecord& r : g.edges()) {
        if (r.tail == r.head) {
            // Self-loops contribute equally to the diagonal and the adjacency
            // entry; they cancel and never appear in an arborescence.
            if (r.tail != root) m[idx[r.tail]][idx[r.tail]] -= r.multiplicity;
            continue;
        }
        if (r.tail != root && r.head != root)
            m[idx[r.tail]][idx[r.head]] -= r.multiplicity;
    }
    return bareiss_determinant(std::move(m));
}

BigCount count_best(const Multigraph& g, const EulerInfo& info) {
    if (!info.feasible) throw std::invalid_argument("graph has no Eulerian trail");
    if (!g.is_simple())
        throw std::invalid_argument("count_best requires a simple graph");

    BigCount z = count_arborescences(g, info.source);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        int64_t r = g.out_degree(v);
        if (v == info.target) r += 1;
        for (int64_t f = 2; f < r; ++f) z *= f;   // (r - 1)!
    }
    return z;
}

namespace {

struct TrailSearch {
    const Multigraph& g;
    TrailMode mode;
    std::vector<int64_t> remaining;           // per edge record
    std::vector<int32_t> seq;
    std::vector<std::vector<int32_t>>* out;   // null => count only
    BigCount count = 0;
    int64_t units_left;

    void dfs(NodeId at) {
        if (units_left == 0) {
            count += 1;
            if (out) out->push_back(seq);
            return;
        }
        for (EdgeId e : g.out_edges(at)) {
            if (remaining[e] == 0) continue;
            if (mode == TrailMode::NodeDistinct) {
                remaining[e]--;
                units_left--;
                seq.push_back(e);
                dfs(g.edge(e).head);
                seq.pop_back();
                units_left++;
                remaining[e]++;
            } else {
                // Edge-distinct: each unused copy of the record is a distinct
                // continuation. Copies are consumed in ascending id order, so
                // the k-th take of record e uses copy base + (mult - remaining).
                const EdgeRecord& r = g.edge(e);
                const int64_t used = r.multiplicity - remaining[e];
                for (int64_t c = used; c < r.multiplicity; ++c) {
                    remaining[e]--;
                    units_left--;
                    seq.push_back(g.copy_base(e) + static_cast<int32_t>(c));
                    dfs(r.head);
                    seq.pop_back();
                    units_left++;
                    remaining[e]++;
                }
            }
        }
    }
};

void run_trail_search(TrailSearch& s, NodeId v0, int64_t unit_cap) {
    if (s.g.total_multiplicity() > unit_cap)
        throw std::length_error("graph exceeds brute-force unit cap");
    s.remaining.resize(s.g.edge_count());
    for (const EdgeRecord& r : s.g.edges()) s.remaining[r.id] = r.multiplicity;
    s.units_left = s.g.total_multiplicity();
    s.dfs(v0);
    if (s.out) std::sort(s.out->begin(), s.out->end());
}

}  // namespace

std::vector<std::vector<int32_t>> brute_force_trails(const Multigraph& g, NodeId v0,
                                                     TrailMode mode, int64_t unit_cap) {
    std::vector<std::vector<int32_t>> result;
    TrailSearch s{g, mode};
    s.out = &result;
    run_trail_search(s, v0, unit_cap);
    return result;
}

BigCount brute_force_trail_count(const Multigraph& g, NodeId v0, TrailMode mode,
                                 int64_t unit_cap) {
    TrailSearch s{g, mode};
    s.out = nullptr;
    run_trail_search(s, v0, unit_cap);
    return s.count;
}

namespace {

bool is_out_arborescence(const Multigraph& g, NodeId root,
                         const std::vector<EdgeId>& subset) {
    const NodeId n = g.node_count();
    std::vector<EdgeId> parent_edge(n, -1);
    for (EdgeId e : subset) {
        const EdgeRecord& r = g.edge(e);
        if (r.tail == r.head) return false;
        if (r.head == root) return false;
        if (parent_edge[r.head] != -1) return false;   // in-degree must be 1
        parent_edge[r.head] = e;
    }
    // Every non-root node needs a parent and must reach root upward.
    for (NodeId v = 0; v < n; ++v) {
        if (v == root) continue;
        NodeId at = v;
        NodeId hops = 0;
        while (at != root) {
            if (parent_edge[at] == -1 || ++hops > n) return false;
            at = g.edge(parent_edge[at]).tail;
        }
    }
    return true;
}

}  // namespace

BigCount brute_force_arborescences(const Multigraph& g, NodeId root, NodeId node_cap) {
    const NodeId n = g.node_count();
    if (n > node_cap) throw std::length_error("graph exceeds brute-force node cap");
    if (n <= 1) return 1;

    const EdgeId m = g.edge_count();
    const NodeId need = n - 1;
    if (m < need) return 0;

    std::vector<EdgeId> pick(need);
    BigCount total = 0;
    // Enumerate edge-record subsets of size n-1.
    std::vector<EdgeId> stack{0};
    while (!stack.empty()) {
        const size_t depth = stack.size() - 1;
        EdgeId& e = stack.back();
        if (e >= m || m - e < need - static_cast<EdgeId>(depth)) {
            stack.pop_back();
            if (!stack.empty()) ++stack.back();
            continue;
        }
        pick[depth] = e;
        if (depth + 1 == static_cast<size_t>(need)) {
            if (is_out_arborescence(g, root, pick)) {
                BigCount w = 1;
                for (EdgeId p : pick) w *= g.edge(p).multiplicity;
                total += w;
            }
            ++e;
        } else {
            stack.push_back(e + 1);
        }
    }
    return total;
}

}  // namespace eult
