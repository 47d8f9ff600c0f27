#ifndef EULT_EXPLORE_HPP
#define EULT_EXPLORE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "eult/compressed_graph.hpp"
#include "eult/state_tree.hpp"

namespace eult {

struct WalkStep {
    EdgeId edge = -1;             // compressed edge object, walk-start granularity
    NodeId tail_anchor = -1;      // base node the trail stands on before this step
    LabelId frozen_label = kNoLabel;   // the edge's label at walk start
    bool taken = false;           // false: absorbed into an earlier take's label
    LabelId taken_label = kNoLabel;
    int64_t checkpoint = -1;      // journal mark before the covering take
};

struct WalkResult {
    std::vector<WalkStep> steps;  // unit-granular, trail order
    NodeId origin_anchor = -1;
    NodeId end_anchor = -1;
    bool is_closed = false;
};

struct BranchRecord {
    int32_t position = -1;            // step index of the branching state
    Checkpoint checkpoint;
    std::vector<EdgeId> alternatives; // untried non-crossing out-edges
};

struct BranchAnalysis {
    std::vector<char> branch_bit;     // per step
    std::vector<BranchRecord> records;
};

// Completes the remaining graph to a full trail: a scratch pass over the
// frozen graph discovers the trail (with sub-tour splicing), then the steps
// are re-taken through take_edge in trail order so that journal prefixes
// match trail prefixes. Steps whose edge was fused into an earlier label by
// recompression are recorded but not re-taken.
WalkResult hierholzer_complete(CompressedGraph& cg,
                               std::optional<EdgeId> forced_first);

// Last-departure crossing flags: step i is a crossing in the remaining graph
// at its own position iff it is the final departure from its tail anchor and
// that anchor is not the node the walk ends on.
std::vector<char> mark_crossings(const WalkResult& r);

// Generic form used by oracles on plain walks.
std::vector<char> last_departure_flags(const std::vector<NodeId>& tails,
                                       NodeId end_node);

// Branching states along the walk. A state is branching iff its anchor has
// at least two non-crossing out-edge objects at that position; the only
// candidate whose status is not immediate is the anchor's final-departure
// object, resolved by a reachability test over the walk itself.
BranchAnalysis detect_branchings(const CompressedGraph& cg, const WalkResult& r,
                                 const std::vector<char>& flags);

struct EnumerateOptions {
    std::optional<int64_t> max_trails;   // absent: all
    std::optional<NodeId> start;         // node id in the input graph
    bool validate = false;               // slow per-state oracle checks
};

EnumerationResult enumerate_trails(const Multigraph& g, TrailMode mode,
                                   const EnumerateOptions& opt = {});

}  // namespace eult

#endif
