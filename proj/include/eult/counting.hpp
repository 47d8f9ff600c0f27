#ifndef EULT_COUNTING_HPP
#define EULT_COUNTING_HPP

#include <gmpxx.h>

#include <vector>

#include "eult/multigraph.hpp"

namespace eult {

// Exact nonnegative count; all counting here is integer arithmetic.
using BigCount = mpz_class;

// Fraction-free elimination determinant; exact for integer matrices of any
// size, with row pivoting (sign tracked) when a pivot vanishes.
BigCount bareiss_determinant(std::vector<std::vector<BigCount>> mat);

// Spanning out-arborescences rooted at `root`: principal minor of the
// in-degree Laplacian (multiplicity weighted) with root's row/column removed.
BigCount count_arborescences(const Multigraph& g, NodeId root);

// Trail count z_T = z_A(source) * prod_u (r_u - 1)! where r_u = outdeg(u)
// except r_target = outdeg(target) + 1. Requires a simple graph; subdivide
// multigraphs first for edge-distinct counts.
BigCount count_best(const Multigraph& g, const EulerInfo& info);

enum class TrailMode { Simple, EdgeDistinct, NodeDistinct };

// Exhaustive trail oracle. Trails are copy-id sequences in Simple and
// EdgeDistinct modes and edge-record-id sequences in NodeDistinct mode
// (records are unique per (tail, head), so these are the node sequences).
// Lexicographic order; throws std::length_error above the unit cap.
std::vector<std::vector<int32_t>> brute_force_trails(const Multigraph& g,
                                                     NodeId v0,
                                                     TrailMode mode,
                                                     int64_t unit_cap = 14);

BigCount brute_force_trail_count(const Multigraph& g, NodeId v0, TrailMode mode,
                                 int64_t unit_cap = 14);

// Arborescence oracle: checks all (n-1)-subsets of edge records for the
// out-arborescence property, weighting each tree by its multiplicity product.
BigCount brute_force_arborescences(const Multigraph& g, NodeId root,
                                   NodeId node_cap = 8);

}  // namespace eult

#endif
