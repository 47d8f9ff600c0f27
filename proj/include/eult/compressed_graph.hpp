#ifndef EULT_COMPRESSED_GRAPH_HPP
#define EULT_COMPRESSED_GRAPH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eult/label.hpp"
#include "eult/multigraph.hpp"

namespace eult {

enum class EngineMode { Simple, NodeDistinct };

struct StepCounters {
    int64_t walker_steps = 0;        // discovery steps + journaled takes
    int64_t journal_entries = 0;
    int64_t transitions_created = 0;
    int64_t leaves_emitted = 0;
};

// Reversible mutation log. Entries are undone strictly in reverse order;
// unlinked edges keep their list pointers, so relinking restores the exact
// adjacency order.
struct JournalEntry {
    enum Kind : uint8_t {
        MultiplicityDecrement,   // edge; prev current/anchor stored
        EdgeUnlinked,            // edge removed from both lists at zero
        Contracted,              // node merged into its out-neighbor
        SelfLoopRemoved,         // loop label fused into the other out-edge
    };
    Kind kind;
    bool moved_became_loop = false;
    EdgeId edge = -1;        // taken edge / absorbed edge / removed loop
    EdgeId other = -1;       // moved in-edge (Contracted), out-edge (SelfLoopRemoved)
    NodeId node_v = -1;      // contracted node / loop node
    NodeId node_w = -1;      // contraction survivor
    NodeId prev_anchor = -1;
    LabelId old_label = kNoLabel;     // `other`'s label before the rule fired
    EdgeId moved_in_prev = -1;        // `other`'s position in v's in-list
    EdgeId moved_in_next = -1;
};

struct Checkpoint {
    int64_t mark = -1;
};

// The mutable remaining graph: label-carrying edges over the nodes of a base
// graph, kept exhaustively compressed after every removal. Contractions
// rewrite edge endpoints in place (the merged node's in-edges are O(1) many),
// so no alias table is needed; dead nodes simply run out of edges.
class CompressedGraph {
public:
    CompressedGraph(const Multigraph& base, const EulerInfo& info, EngineMode mode,
                    LabelArena& arena, StepCounters& counters);

    EngineMode mode() const { return mode_; }
    const Multigraph& base() const { return *base_; }
    LabelArena& arena() { return *arena_; }
    const LabelArena& arena() const { return *arena_; }
    StepCounters& counters() { return *counters_; }

    NodeId current() const { return current_; }
    NodeId target() const { return target_; }
    NodeId current_anchor() const { return current_anchor_; }
    int64_t units_remaining() const { return units_remaining_; }

    NodeId edge_tail(EdgeId e) const { return tail_[e]; }
    NodeId edge_head(EdgeId e) const { return head_[e]; }
    int64_t edge_multiplicity(EdgeId e) const { return mult_[e]; }
    LabelId edge_label(EdgeId e) const { return label_[e]; }

    int32_t out_objects(NodeId v) const { return out_obj_[v]; }
    int32_t in_objects(NodeId v) const { return in_obj_[v]; }
    int32_t loop_objects(NodeId v) const { return loop_obj_[v]; }
    int64_t out_weight(NodeId v) const { return out_w_[v]; }
    int64_t in_weight(NodeId v) const { return in_w_[v]; }

    EdgeId first_out(NodeId v) const { return out_next_[out_sentinel(v)]; }
    EdgeId next_out(EdgeId e) const { return out_next_[e]; }
    bool at_out_end(NodeId v, EdgeId e) const { return e == out_sentinel(v); }
    EdgeId first_in(NodeId v) const { return in_next_[in_sentinel(v)]; }
    EdgeId next_in(EdgeId e) const { return in_next_[e]; }
    bool at_in_end(NodeId v, EdgeId e) const { return e == in_sentinel(v); }

    std::vector<EdgeId> out_list(NodeId v) const;

    // Consumes one unit of an out-edge of `current` and recompresses around
    // the removal. Returns the pre-take checkpoint and the edge's label at
    // take time. Bounded journal growth per call.
    std::pair<Checkpoint, LabelId> take_edge(EdgeId e);

    Checkpoint checkpoint() const { return Checkpoint{journal_size()}; }
    void rewind_to(Checkpoint cp);
    int64_t journal_size() const { return static_cast<int64_t>(journal_.size()); }

    // Edge absorbed into another edge's label by a rule during the current
    // walk epoch (used by the walker to skip planned steps).
    void begin_absorb_epoch() { ++absorb_epoch_; }
    bool absorbed_this_epoch(EdgeId e) const { return absorb_stamp_[e] == absorb_epoch_; }

    // Remaining original multigraph (expanded labels) with the anchor of
    // `current` as trail head; for validation oracles.
    Multigraph decompress() const;

    // Full structural snapshot: adjacency orders, labels, counters, position.
    std::string fingerprint() const;

    void check_invariants() const;   // post-build / post-rewind structural audit

private:
    friend CompressedGraph build_compressed(const Multigraph&, const EulerInfo&,
                                            EngineMode, LabelArena&, StepCounters&);

    EdgeId out_sentinel(NodeId v) const { return m_ + v; }
    EdgeId in_sentinel(NodeId v) const { return m_ + v; }

    void out_unlink(EdgeId e);
    void out_relink(EdgeId e);
    void out_push_back(NodeId v, EdgeId e);
    void in_unlink(EdgeId e);
    void in_relink(EdgeId e);
    void in_push_back(NodeId v, EdgeId e);

    bool rule1_applicable(NodeId v) const;
    bool rule2_applicable(NodeId v) const;
    void rule1_fire(NodeId v);
    NodeId rule2_fire(NodeId v);            // returns the node (for rechecks)
    NodeId maybe_rule1(NodeId v);           // returns survivor (or v)
    void compress_exhaustively();

    void undo(const JournalEntry& je);

    const Multigraph* base_;
    EngineMode mode_;
    LabelArena* arena_;
    StepCounters* counters_;

    NodeId n_;
    EdgeId m_;
    std::vector<NodeId> tail_, head_;
    std::vector<int64_t> mult_;
    std::vector<LabelId> label_;
    std::vector<EdgeId> out_next_, out_prev_, in_next_, in_prev_;
    std::vector<int32_t> out_obj_, in_obj_, loop_obj_;
    std::vector<int64_t> out_w_, in_w_;

    NodeId current_, target_;
    NodeId current_anchor_;
    int64_t units_remaining_;

    std::vector<JournalEntry> journal_;

    std::vector<int64_t> absorb_stamp_;
    int64_t absorb_epoch_ = 0;
};

// Construction plus initial exhaustive compression.
CompressedGraph build_compressed(const Multigraph& base, const EulerInfo& info,
                                 EngineMode mode, LabelArena& arena,
                                 StepCounters& counters);

}  // namespace eult

#endif
