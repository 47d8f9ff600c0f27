#include "eult/compressed_graph.hpp"

#include <cassert>
#include <deque>
#include <sstream>

namespace eult {

CompressedGraph::CompressedGraph(const Multigraph& base, const EulerInfo& info,
                                 EngineMode mode, LabelArena& arena,
                                 StepCounters& counters)
    : base_(&base),
      mode_(mode),
      arena_(&arena),
      counters_(&counters),
      n_(base.node_count()),
      m_(base.edge_count()) {
    assert(info.feasible);

    tail_.resize(m_);
    head_.resize(m_);
    mult_.resize(m_);
    label_.resize(m_);
    out_next_.resize(m_ + n_);
    out_prev_.resize(m_ + n_);
    in_next_.resize(m_ + n_);
    in_prev_.resize(m_ + n_);
    out_obj_.assign(n_, 0);
    in_obj_.assign(n_, 0);
    loop_obj_.assign(n_, 0);
    out_w_.assign(n_, 0);
    in_w_.assign(n_, 0);
    absorb_stamp_.assign(m_, -1);

    for (NodeId v = 0; v < n_; ++v) {
        const EdgeId s = out_sentinel(v);
        out_next_[s] = out_prev_[s] = s;
        in_next_[s] = in_prev_[s] = s;
    }
    for (EdgeId e = 0; e < m_; ++e) {
        const EdgeRecord& r = base.edge(e);
        assert(mode_ == EngineMode::NodeDistinct || (r.multiplicity == 1 && r.tail != r.head));
        tail_[e] = r.tail;
        head_[e] = r.head;
        mult_[e] = r.multiplicity;
        label_[e] = arena.leaf(base.copy_base(e), r.tail, r.head);
        out_push_back(r.tail, e);
        in_push_back(r.head, e);
        out_obj_[r.tail]++;
        in_obj_[r.head]++;
        if (r.tail == r.head) loop_obj_[r.tail]++;
        out_w_[r.tail] += r.multiplicity;
        in_w_[r.head] += r.multiplicity;
    }
    current_ = info.source;
    target_ = info.target;
    current_anchor_ = info.source;
    units_remaining_ = base.total_multiplicity();
}

std::vector<EdgeId> CompressedGraph::out_list(NodeId v) const {
    std::vector<EdgeId> out;
    for (EdgeId e = first_out(v); !at_out_end(v, e); e = next_out(e)) out.push_back(e);
    return out;
}

void CompressedGraph::out_unlink(EdgeId e) {
    out_next_[out_prev_[e]] = out_next_[e];
    out_prev_[out_next_[e]] = out_prev_[e];
}

void CompressedGraph::out_relink(EdgeId e) {
    out_next_[out_prev_[e]] = e;
    out_prev_[out_next_[e]] = e;
}

void CompressedGraph::out_push_back(NodeId v, EdgeId e) {
    const EdgeId s = out_sentinel(v);
    const EdgeId last = out_prev_[s];
    out_next_[last] = e;
    out_prev_[e] = last;
    out_next_[e] = s;
    out_prev_[s] = e;
}

void CompressedGraph::in_unlink(EdgeId e) {
    in_next_[in_prev_[e]] = in_next_[e];
    in_prev_[in_next_[e]] = in_prev_[e];
}

void CompressedGraph::in_relink(EdgeId e) {
    in_next_[in_prev_[e]] = e;
    in_prev_[in_next_[e]] = e;
}

void CompressedGraph::in_push_back(NodeId v, EdgeId e) {
    const EdgeId s = in_sentinel(v);
    const EdgeId last = in_prev_[s];
    in_next_[last] = e;
    in_prev_[e] = last;
    in_next_[e] = s;
    in_prev_[s] = e;
}

bool CompressedGraph::rule1_applicable(NodeId v) const {
    if (v == current_ || v == target_) return false;
    if (out_obj_[v] != 1 || loop_obj_[v] != 0) return false;
    return mult_[first_out(v)] == 1;
}

// Contract v into its only out-neighbor w: the in-edge of v absorbs the
// forced edge's label and relinks to w. A balanced contractible node has
// exactly one in-edge object, which keeps this O(1).
void CompressedGraph::rule1_fire(NodeId v) {
    const EdgeId ev = first_out(v);
    const NodeId w = head_[ev];
    assert(w != v);
    assert(in_obj_[v] <= 2);
    assert(in_obj_[v] == 1);
    const EdgeId f = first_in(v);
    assert(f != ev);
    assert(mult_[f] == 1);

    JournalEntry je;
    je.kind = JournalEntry::Contracted;
    je.edge = ev;
    je.other = f;
    je.node_v = v;
    je.node_w = w;
    je.old_label = label_[f];
    je.moved_in_prev = in_prev_[f];
    je.moved_in_next = in_next_[f];
    je.moved_became_loop = (tail_[f] == w);
    journal_.push_back(je);

    label_[f] = arena_->concat(label_[f], label_[ev]);

    out_unlink(ev);
    in_unlink(ev);
    out_obj_[v]--;
    out_w_[v] -= 1;
    in_obj_[w]--;
    in_w_[w] -= 1;
    units_remaining_ -= 1;
    absorb_stamp_[ev] = absorb_epoch_;

    in_unlink(f);
    in_obj_[v]--;
    in_w_[v] -= 1;
    head_[f] = w;
    in_push_back(w, f);
    in_obj_[w]++;
    in_w_[w] += 1;
    if (tail_[f] == w) loop_obj_[w]++;
}

bool CompressedGraph::rule2_applicable(NodeId v) const {
    if (loop_obj_[v] != 1 || out_obj_[v] != 2 || out_w_[v] != 2) return false;
    if (v == current_) {
        if (in_obj_[v] != 1 || in_w_[v] != 1) return false;
    } else {
        if (v == target_) return false;
        if (in_obj_[v] != 2 || in_w_[v] != 2) return false;
    }
    return true;
}

// Remove the forced self-loop: it must be traversed directly before the only
// other out-edge, whose label absorbs it.
NodeId CompressedGraph::rule2_fire(NodeId v) {
    EdgeId loop = first_out(v);
    EdgeId other = next_out(loop);
    if (head_[loop] != v) std::swap(loop, other);
    assert(tail_[loop] == v && head_[loop] == v);
    assert(mult_[loop] == 1 && mult_[other] == 1);

    JournalEntry je;
    je.kind = JournalEntry::SelfLoopRemoved;
    je.edge = loop;
    je.other = other;
    je.node_v = v;
    je.old_label = label_[other];
    journal_.push_back(je);

    label_[other] = arena_->concat(label_[loop], label_[other]);

    out_unlink(loop);
    in_unlink(loop);
    out_obj_[v]--;
    in_obj_[v]--;
    loop_obj_[v]--;
    out_w_[v] -= 1;
    in_w_[v] -= 1;
    units_remaining_ -= 1;
    absorb_stamp_[loop] = absorb_epoch_;
    return v;
}

NodeId CompressedGraph::maybe_rule1(NodeId v) {
    if (!rule1_applicable(v)) return v;
    const NodeId w = head_[first_out(v)];
    rule1_fire(v);
    return w;
}

void CompressedGraph::compress_exhaustively() {
    std::deque<NodeId> queue;
    for (NodeId v = 0; v < n_; ++v) queue.push_back(v);
    while (!queue.empty()) {
        const NodeId v = queue.front();
        queue.pop_front();
        if (rule1_applicable(v)) {
            const NodeId w = head_[first_out(v)];
            rule1_fire(v);
            queue.push_back(w);
        } else if (rule2_applicable(v)) {
            rule2_fire(v);
            queue.push_back(v);
        }
    }
}

std::pair<Checkpoint, LabelId> CompressedGraph::take_edge(EdgeId e) {
    assert(tail_[e] == current_);
    assert(mult_[e] > 0);
    const Checkpoint cp = checkpoint();
    const NodeId v = tail_[e];
    const NodeId h = head_[e];
    const LabelId taken = label_[e];

    JournalEntry je;
    je.kind = JournalEntry::MultiplicityDecrement;
    je.edge = e;
    je.prev_anchor = current_anchor_;
    journal_.push_back(je);

    mult_[e]--;
    out_w_[v] -= 1;
    in_w_[h] -= 1;
    units_remaining_ -= 1;
    current_ = h;
    current_anchor_ = arena_->last_head(taken);

    if (mult_[e] == 0) {
        JournalEntry ju;
        ju.kind = JournalEntry::EdgeUnlinked;
        ju.edge = e;
        journal_.push_back(ju);
        out_unlink(e);
        in_unlink(e);
        out_obj_[v]--;
        in_obj_[h]--;
        if (v == h) loop_obj_[v]--;
    }

    // Recompression sites: the tail may have become forced, then the loop
    // rule is checked at the tail's survivor and at the new current node,
    // each firing at most once, with a contraction recheck after each.
    const NodeId sv = maybe_rule1(v);
    if (rule2_applicable(sv)) maybe_rule1(rule2_fire(sv));
    if (h != sv && rule2_applicable(h)) maybe_rule1(rule2_fire(h));

    const int64_t grown = journal_size() - cp.mark;
    assert(grown <= 6);
    counters_->journal_entries += grown;
    counters_->walker_steps += 1;
    return {cp, taken};
}

void CompressedGraph::undo(const JournalEntry& je) {
    switch (je.kind) {
        case JournalEntry::MultiplicityDecrement: {
            const EdgeId e = je.edge;
            mult_[e]++;
            out_w_[tail_[e]] += 1;
            in_w_[head_[e]] += 1;
            units_remaining_ += 1;
            current_ = tail_[e];
            current_anchor_ = je.prev_anchor;
            break;
        }
        case JournalEntry::EdgeUnlinked: {
            const EdgeId e = je.edge;
            out_relink(e);
            in_relink(e);
            out_obj_[tail_[e]]++;
            in_obj_[head_[e]]++;
            if (tail_[e] == head_[e]) loop_obj_[tail_[e]]++;
            break;
        }
        case JournalEntry::Contracted: {
            const EdgeId ev = je.edge;
            const EdgeId f = je.other;
            const NodeId v = je.node_v;
            const NodeId w = je.node_w;
            if (je.moved_became_loop) loop_obj_[w]--;
            in_unlink(f);
            in_obj_[w]--;
            in_w_[w] -= 1;
            head_[f] = v;
            in_prev_[f] = je.moved_in_prev;
            in_next_[f] = je.moved_in_next;
            in_relink(f);
            in_obj_[v]++;
            in_w_[v] += 1;
            in_relink(ev);
            out_relink(ev);
            out_obj_[v]++;
            out_w_[v] += 1;
            in_obj_[w]++;
            in_w_[w] += 1;
            units_remaining_ += 1;
            label_[f] = je.old_label;
            break;
        }
        case JournalEntry::SelfLoopRemoved: {
            const EdgeId loop = je.edge;
            const NodeId v = je.node_v;
            label_[je.other] = je.old_label;
            in_relink(loop);
            out_relink(loop);
            out_obj_[v]++;
            in_obj_[v]++;
            loop_obj_[v]++;
            out_w_[v] += 1;
            in_w_[v] += 1;
            units_remaining_ += 1;
            break;
        }
    }
}

void CompressedGraph::rewind_to(Checkpoint cp) {
    assert(cp.mark >= 0 && cp.mark <= journal_size());
    while (journal_size() > cp.mark) {
        undo(journal_.back());
        journal_.pop_back();
    }
}

Multigraph CompressedGraph::decompress() const {
    std::vector<EdgeRecord> raw;
    std::vector<CopyId> copies;
    for (NodeId v = 0; v < n_; ++v) {
        for (EdgeId e = first_out(v); !at_out_end(v, e); e = next_out(e)) {
            copies.clear();
            arena_->expand(label_[e], copies);
            for (CopyId c : copies) {
                const EdgeRecord& r = base_->edge(base_->copy_edge(c));
                raw.push_back(EdgeRecord{-1, r.tail, r.head, mult_[e]});
            }
        }
    }
    return compact_multiplicities(base_->names(), raw);
}

std::string CompressedGraph::fingerprint() const {
    std::ostringstream os;
    os << current_ << '|' << target_ << '|' << current_anchor_ << '|'
       << units_remaining_ << ';';
    for (NodeId v = 0; v < n_; ++v) {
        bool any = false;
        for (EdgeId e = first_out(v); !at_out_end(v, e); e = next_out(e)) {
            if (!any) { os << v << ':'; any = true; }
            os << e << ',' << head_[e] << ',' << mult_[e] << ',' << label_[e] << ' ';
        }
        if (any) {
            os << '/';
            for (EdgeId e = first_in(v); !at_in_end(v, e); e = next_in(e)) os << e << ' ';
            os << ';';
        }
    }
    return os.str();
}

void CompressedGraph::check_invariants() const {
    int64_t units = 0;
    int64_t labelled = 0;
    for (NodeId v = 0; v < n_; ++v) {
        int32_t oo = 0, io = 0, lo = 0;
        int64_t ow = 0, iw = 0;
        for (EdgeId e = first_out(v); !at_out_end(v, e); e = next_out(e)) {
            assert(tail_[e] == v);
            assert(mult_[e] >= 1);
            oo++;
            ow += mult_[e];
            if (head_[e] == v) lo++;
            units += mult_[e];
            labelled += mult_[e] * arena_->length(label_[e]);
        }
        for (EdgeId e = first_in(v); !at_in_end(v, e); e = next_in(e)) {
            assert(head_[e] == v);
            io++;
            iw += mult_[e];
        }
        assert(oo == out_obj_[v]);
        assert(io == in_obj_[v]);
        assert(lo == loop_obj_[v]);
        assert(ow == out_w_[v]);
        assert(iw == in_w_[v]);

        const int64_t surplus = ow - iw;
        if (v == current_ && v != target_) {
            assert(surplus == 1);
        } else if (v == target_ && v != current_) {
            assert(surplus == -1);
        } else {
            assert(surplus == 0);
        }
        if (v != current_ && v != target_ && out_obj_[v] == 1 && loop_obj_[v] == 0) {
            // Only an uncontractible multi-unit forced edge may remain.
            assert(mult_[first_out(v)] >= 2);
        }
        assert(!rule2_applicable(v));
    }
    assert(units == units_remaining_);
    (void)units;
    (void)labelled;
}

CompressedGraph build_compressed(const Multigraph& base, const EulerInfo& info,
                                 EngineMode mode, LabelArena& arena,
                                 StepCounters& counters) {
    CompressedGraph cg(base, info, mode, arena, counters);
    cg.compress_exhaustively();
    counters.journal_entries += cg.journal_size();
    return cg;
}

}  // namespace eult
