#include "eult/explore.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace eult {

namespace {

// Reusable per-walk scratch; stamped arrays avoid O(n + m) clears per walk.
struct Scratch {
    std::vector<int64_t> node_stamp;
    std::vector<int32_t> node_val;      // last visit index per anchor
    std::vector<int64_t> edge_stamp;
    std::vector<int32_t> edge_val;      // last step index per edge
    std::vector<int64_t> rem_stamp;
    std::vector<int64_t> rem_val;       // discovery: remaining units per edge
    std::vector<int64_t> cur_stamp;
    std::vector<EdgeId> cur_val;        // discovery: out-list cursor per node
    std::vector<int64_t> seen_stamp;    // distinct-edge marking per group
    int64_t epoch = 0;

    void ensure(NodeId n, EdgeId m) {
        if (static_cast<NodeId>(node_stamp.size()) < n) {
            node_stamp.resize(n, -1);
            node_val.resize(n);
            cur_stamp.resize(n, -1);
            cur_val.resize(n);
        }
        if (static_cast<EdgeId>(edge_stamp.size()) < m) {
            edge_stamp.resize(m, -1);
            edge_val.resize(m);
            rem_stamp.resize(m, -1);
            rem_val.resize(m);
            seen_stamp.resize(m, -1);
        }
    }
    int64_t fresh() { return ++epoch; }
};

// Greedy walk over the frozen graph with sub-tour splicing: classic
// Hierholzer over scratch unit counters, never mutating the graph. Returns
// step edge ids in trail order.
std::vector<EdgeId> discover(CompressedGraph& cg, std::optional<EdgeId> forced_first,
                             Scratch& sc) {
    sc.ensure(cg.base().node_count(), cg.base().edge_count());
    const int64_t ep = sc.fresh();

    auto remaining = [&](EdgeId e) -> int64_t& {
        if (sc.rem_stamp[e] != ep) {
            sc.rem_stamp[e] = ep;
            sc.rem_val[e] = cg.edge_multiplicity(e);
        }
        return sc.rem_val[e];
    };
    auto next_unused = [&](NodeId v) -> EdgeId {
        if (sc.cur_stamp[v] != ep) {
            sc.cur_stamp[v] = ep;
            sc.cur_val[v] = cg.first_out(v);
        }
        EdgeId& c = sc.cur_val[v];
        while (!cg.at_out_end(v, c)) {
            if (remaining(c) > 0) return c;
            c = cg.next_out(c);
        }
        return -1;
    };

    std::vector<EdgeId> steps;
    std::vector<int32_t> nxt;
    steps.reserve(static_cast<size_t>(cg.units_remaining()));
    int64_t left = cg.units_remaining();

    auto push_step = [&](EdgeId e) -> int32_t {
        remaining(e)--;
        left--;
        cg.counters().walker_steps++;
        steps.push_back(e);
        nxt.push_back(-1);
        return static_cast<int32_t>(steps.size() - 1);
    };
    // Walks from v until stuck; chain indices returned through first/last.
    auto greedy = [&](NodeId v, int32_t& first, int32_t& last) {
        first = last = -1;
        while (true) {
            const EdgeId e = next_unused(v);
            if (e < 0) break;
            const int32_t i = push_step(e);
            if (first < 0) first = i; else nxt[last] = i;
            last = i;
            v = cg.edge_head(e);
        }
    };

    int32_t head = -1, tail = -1;
    NodeId at = cg.current();
    if (forced_first) {
        assert(cg.edge_tail(*forced_first) == at);
        head = tail = push_step(*forced_first);
        at = cg.edge_head(*forced_first);
    }
    int32_t f = -1, l = -1;
    greedy(at, f, l);
    if (f >= 0) {
        if (head < 0) head = f; else nxt[tail] = f;
        tail = l;
    }

    if (left > 0) {
        // Sub-tours are spliced at the first trail position with unused
        // out-edges; a drained node stays drained, so one forward scan
        // suffices. With a forced first edge the walk origin itself is not
        // a splice point (a later occurrence of it always exists).
        if (!forced_first) {
            while (next_unused(cg.current()) >= 0) {
                greedy(cg.current(), f, l);
                nxt[l] = head;
                head = f;
            }
        }
        for (int32_t p = head; p != -1 && left > 0; p = nxt[p]) {
            const NodeId v = cg.edge_head(steps[p]);
            while (next_unused(v) >= 0) {
                greedy(v, f, l);
                nxt[l] = nxt[p];
                nxt[p] = f;
            }
        }
    }
    assert(left == 0);

    std::vector<EdgeId> plan;
    plan.reserve(steps.size());
    for (int32_t p = head; p != -1; p = nxt[p]) plan.push_back(steps[p]);
    assert(plan.size() == steps.size());
    return plan;
}

WalkResult hierholzer_complete_impl(CompressedGraph& cg,
                                    std::optional<EdgeId> forced_first, Scratch& sc) {
    assert(cg.units_remaining() > 0);
    WalkResult r;
    r.origin_anchor = cg.current_anchor();

    const std::vector<EdgeId> plan = discover(cg, forced_first, sc);
    const LabelArena& arena = cg.arena();

    r.steps.resize(plan.size());
    NodeId anchor = r.origin_anchor;
    for (size_t q = 0; q < plan.size(); ++q) {
        WalkStep& s = r.steps[q];
        s.edge = plan[q];
        s.tail_anchor = anchor;
        s.frozen_label = cg.edge_label(plan[q]);
        anchor = arena.last_head(s.frozen_label);
    }
    r.end_anchor = anchor;
    r.is_closed = (r.end_anchor == r.origin_anchor);

    // Replay through the journal in trail order so that journal prefixes are
    // trail prefixes. Steps whose edge got fused into an earlier label by a
    // compression during this replay are skipped; the covering take already
    // consumed their copies.
    cg.begin_absorb_epoch();
    for (WalkStep& s : r.steps) {
        if (cg.absorbed_this_epoch(s.edge)) {
            s.taken = false;
            s.checkpoint = cg.journal_size();
            continue;
        }
        auto [cp, taken_label] = cg.take_edge(s.edge);
        s.taken = true;
        s.taken_label = taken_label;
        s.checkpoint = cp.mark;
    }
    assert(cg.units_remaining() == 0);
    assert(cg.current() == cg.target());
    return r;
}

}  // namespace

WalkResult hierholzer_complete(CompressedGraph& cg, std::optional<EdgeId> forced_first) {
    Scratch sc;
    return hierholzer_complete_impl(cg, forced_first, sc);
}

std::vector<char> last_departure_flags(const std::vector<NodeId>& tails, NodeId end_node) {
    std::vector<char> flags(tails.size(), 0);
    std::vector<NodeId> seen;
    for (size_t qi = tails.size(); qi-- > 0;) {
        const NodeId a = tails[qi];
        if (std::find(seen.begin(), seen.end(), a) == seen.end()) {
            seen.push_back(a);
            if (a != end_node) flags[qi] = 1;
        }
    }
    return flags;
}

std::vector<char> mark_crossings(const WalkResult& r) {
    // Linear variant of last_departure_flags (the generic helper is
    // quadratic in distinct tails; fine for oracles, not for the engine).
    std::vector<char> flags(r.steps.size(), 0);
    std::unordered_map<NodeId, char> seen;
    seen.reserve(r.steps.size() * 2);
    for (size_t qi = r.steps.size(); qi-- > 0;) {
        const NodeId a = r.steps[qi].tail_anchor;
        if (seen.emplace(a, 1).second && a != r.end_anchor) flags[qi] = 1;
    }
    return flags;
}

namespace {

// Range-max table; values compared against step positions.
struct SparseMax {
    std::vector<std::vector<int32_t>> t;
    std::vector<int32_t> log2_;

    void build(const std::vector<int32_t>& a) {
        const size_t n = a.size();
        log2_.assign(n + 1, 0);
        for (size_t i = 2; i <= n; ++i) log2_[i] = log2_[i / 2] + 1;
        const int levels = n ? log2_[n] + 1 : 1;
        t.assign(levels, {});
        t[0] = a;
        for (int k = 1; k < levels; ++k) {
            const size_t w = size_t{1} << k;
            t[k].resize(n + 1 - w);
            for (size_t i = 0; i + w <= n; ++i)
                t[k][i] = std::max(t[k - 1][i], t[k - 1][i + w / 2]);
        }
    }
    int32_t query(int32_t lo, int32_t hi) const {   // inclusive, lo <= hi
        const int k = log2_[hi - lo + 1];
        return std::max(t[k][lo], t[k][hi - (1 << k) + 1]);
    }
};

BranchAnalysis detect_branchings_impl(const CompressedGraph& cg, const WalkResult& r,
                                      const std::vector<char>& flags, Scratch& sc) {
    const int32_t K = static_cast<int32_t>(r.steps.size());
    const Multigraph& base = cg.base();
    const LabelArena& arena = cg.arena();
    sc.ensure(base.node_count(), base.edge_count());

    BranchAnalysis ba;
    ba.branch_bit.assign(K, 0);
    if (K == 0) return ba;

    // Visit anchors: V[q] is where the trail stands before step q; V[K] ends it.
    auto visit_anchor = [&](int32_t q) {
        return q == K ? r.end_anchor : r.steps[q].tail_anchor;
    };

    const int64_t ep = sc.fresh();
    for (int32_t q = 0; q <= K; ++q) {
        sc.node_stamp[visit_anchor(q)] = ep;
        sc.node_val[visit_anchor(q)] = q;
    }
    for (int32_t q = 0; q < K; ++q) {
        sc.edge_stamp[r.steps[q].edge] = ep;
        sc.edge_val[r.steps[q].edge] = q;
    }

    // Straddle array: a step position inside an excursion witnesses escape if
    // its anchor is visited again, or its edge has another unit taken, after
    // the excursion closes.
    std::vector<int32_t> straddle(K);
    for (int32_t q = 0; q < K; ++q)
        straddle[q] = std::max(sc.node_val[r.steps[q].tail_anchor],
                               sc.edge_val[r.steps[q].edge]);
    SparseMax table;
    table.build(straddle);

    // Anchor occurrences sorted for the first-successor membership test.
    std::vector<std::pair<NodeId, int32_t>> occ(K + 1);
    for (int32_t q = 0; q <= K; ++q) occ[q] = {visit_anchor(q), q};
    std::sort(occ.begin(), occ.end());
    auto anchor_visited_in = [&](NodeId y, int32_t lo, int32_t hi) {
        if (lo > hi) return false;
        auto it = std::lower_bound(occ.begin(), occ.end(), std::make_pair(y, lo));
        return it != occ.end() && it->first == y && it->second <= hi;
    };

    // Departure positions grouped by anchor.
    std::vector<std::pair<NodeId, int32_t>> deps(K);
    for (int32_t q = 0; q < K; ++q) deps[q] = {r.steps[q].tail_anchor, q};
    std::sort(deps.begin(), deps.end());

    std::vector<EdgeId> distinct;
    std::vector<std::pair<int32_t, std::vector<EdgeId>>> branch_alts;   // position -> alts

    size_t gi = 0;
    while (gi < deps.size()) {
        size_t gj = gi;
        const NodeId a = deps[gi].first;
        while (gj < deps.size() && deps[gj].first == a) ++gj;
        const int32_t k = static_cast<int32_t>(gj - gi);
        const int32_t j_last = deps[gj - 1].second;
        const EdgeId o_star = r.steps[j_last].edge;
        assert(!flags[j_last] == (a == r.end_anchor));

        // Second-to-last departure position of the o_star object itself.
        int32_t o_star_prev = -1;
        for (size_t i = gj - 1; i-- > gi;) {
            if (r.steps[deps[i].second].edge == o_star) {
                o_star_prev = deps[i].second;
                break;
            }
        }
        const NodeId w_star =
            base.edge(base.copy_edge(arena.first_copy(r.steps[j_last].frozen_label))).head;

        // Backward over departures, tracking the distinct remaining objects.
        const int64_t gep = sc.fresh();
        distinct.clear();
        for (size_t i = gj; i-- > gi;) {
            const int32_t p = deps[i].second;
            const EdgeId e = r.steps[p].edge;
            if (sc.seen_stamp[e] != gep) {
                sc.seen_stamp[e] = gep;
                distinct.push_back(e);
            }
            const int32_t c = static_cast<int32_t>(distinct.size());
            if (c < 2) continue;

            // The final-departure object is the only possible crossing here;
            // every other remaining object departs again before j_last and is
            // therefore non-crossing at p.
            bool o_star_nc;
            if (o_star_prev >= p) {
                o_star_nc = true;   // another unit of it departs before j_last
            } else if (a == r.end_anchor) {
                o_star_nc = true;   // the walk returns here to end
            } else {
                o_star_nc = (p + 1 <= j_last - 1) &&
                            table.query(p + 1, j_last - 1) > j_last;
                if (!o_star_nc)
                    o_star_nc = anchor_visited_in(w_star, p + 1, j_last - 1);
            }

            const int32_t noncrossing = (c - 1) + (o_star_nc ? 1 : 0);
            if (noncrossing < 2) continue;
            ba.branch_bit[p] = 1;
            std::vector<EdgeId> alts;
            alts.reserve(distinct.size());
            for (EdgeId d : distinct)
                if (d != e && (d != o_star || o_star_nc)) alts.push_back(d);
            branch_alts.emplace_back(p, std::move(alts));
        }
        gi = gj;
    }

    std::sort(branch_alts.begin(), branch_alts.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    ba.records.reserve(branch_alts.size());
    for (auto& [pos, alts] : branch_alts) {
        BranchRecord rec;
        rec.position = pos;
        rec.checkpoint = Checkpoint{r.steps[pos].checkpoint};
        rec.alternatives = std::move(alts);
        assert(r.steps[pos].taken);
        ba.records.push_back(std::move(rec));
    }
    return ba;
}

}  // namespace

BranchAnalysis detect_branchings(const CompressedGraph& cg, const WalkResult& r,
                                 const std::vector<char>& flags) {
    Scratch sc;
    return detect_branchings_impl(cg, r, flags, sc);
}

namespace {

class Explorer {
public:
    Explorer(const Multigraph& engine_graph, const EulerInfo& info, EngineMode emode,
             bool validate)
        : validate_(validate),
          cg_(build_compressed(engine_graph, info, emode, arena_, counters_)) {
        post_build_mark_ = cg_.journal_size();
        cg_.check_invariants();
    }

    void run(int64_t z_cap) {
        tree_.add_state();   // root
        post_build_fingerprint_ = validate_ ? cg_.fingerprint() : std::string();
        do_walk(std::nullopt, tree_.root(), /*first=*/true, z_cap);
        while (tree_.leaf_count < z_cap && !pending_.empty()) {
            const size_t ti = pending_.size() - 1;
            if (pending_[ti].next_alt == pending_[ti].alternatives.size()) {
                pending_.pop_back();
                continue;
            }
            const EdgeId alt = pending_[ti].alternatives[pending_[ti].next_alt++];
            const StateId origin = pending_[ti].state;
            cg_.rewind_to(Checkpoint{pending_[ti].checkpoint});
            do_walk(alt, origin, /*first=*/false, z_cap);
        }
        for (const auto& p : pending_)
            if (p.next_alt < p.alternatives.size()) cap_reached_ = true;
        cg_.rewind_to(Checkpoint{post_build_mark_});
    }

    LabelArena arena_;
    StepCounters counters_;
    CompressedGraph cg_;
    StateTree tree_;
    bool cap_reached_ = false;
    int64_t post_build_mark_ = 0;
    std::string post_build_fingerprint_;

private:
    struct Pending {
        StateId state;
        int64_t checkpoint;
        std::vector<EdgeId> alternatives;
        size_t next_alt = 0;
    };

    void do_walk(std::optional<EdgeId> forced_first, StateId origin, bool first,
                 int64_t z_cap) {
        const WalkResult walk = hierholzer_complete_impl(cg_, forced_first, scratch_);
        const int32_t K = static_cast<int32_t>(walk.steps.size());

        // The last budgeted leaf needs no branch analysis: its walk becomes a
        // single root-to-leaf chain and nothing below it is explored.
        BranchAnalysis ba;
        if (tree_.leaf_count + 1 < z_cap) {
            const std::vector<char> flags = mark_crossings(walk);
            ba = detect_branchings_impl(cg_, walk, flags, scratch_);
            if (validate_) validate_walk(walk, flags, ba);
        } else {
            ba.branch_bit.assign(K, 0);
        }

        // Fuse runs between branching states into single transitions. On the
        // first walk the run before the first branching state is the shared
        // root preamble.
        int32_t q = 0;
        StateId state = origin;
        if (first) {
            LabelId pre = kNoLabel;
            while (q < K && !ba.branch_bit[q]) {
                if (walk.steps[q].taken)
                    pre = arena_.concat(pre, walk.steps[q].taken_label);
                ++q;
            }
            tree_.preamble = pre;
            if (q == K) {   // the whole graph was forced: root is the leaf
                tree_.is_leaf[tree_.root()] = 1;
                tree_.leaf_count++;
                counters_.leaves_emitted++;
                return;
            }
        }

        size_t rec_idx = 0;
        while (rec_idx < ba.records.size() && ba.records[rec_idx].position < q) ++rec_idx;

        LabelId run = kNoLabel;
        EdgeId run_first_edge = -1;
        const int32_t run_start = q;
        for (; q < K; ++q) {
            if (ba.branch_bit[q] && q > run_start) {
                const StateId ns = tree_.add_state();
                push_transition(state, ns, run_first_edge, run);
                state = ns;
                run = kNoLabel;
                run_first_edge = -1;
            }
            if (ba.branch_bit[q] && (q > run_start || first)) {
                assert(rec_idx < ba.records.size() &&
                       ba.records[rec_idx].position == q);
                pending_.push_back(Pending{state, ba.records[rec_idx].checkpoint.mark,
                                           std::move(ba.records[rec_idx].alternatives)});
                ++rec_idx;
            } else if (ba.branch_bit[q]) {
                ++rec_idx;   // origin state: its record already owns the siblings
            }
            if (walk.steps[q].taken) {
                if (run_first_edge < 0) run_first_edge = walk.steps[q].edge;
                run = arena_.concat(run, walk.steps[q].taken_label);
            }
        }
        const StateId leaf = tree_.add_state();
        tree_.is_leaf[leaf] = 1;
        push_transition(state, leaf, run_first_edge, run);
        tree_.leaf_count++;
        counters_.leaves_emitted++;
    }

    void push_transition(StateId parent, StateId child, EdgeId choice, LabelId label) {
        tree_.transitions.push_back(Transition{parent, child, choice, label});
        tree_.children[parent].push_back(static_cast<int32_t>(tree_.transitions.size() - 1));
        counters_.transitions_created++;
    }

    // Slow oracle pass: rewind to every taken position and compare the
    // crossing flag and branching bit against SCCs of the decompressed
    // remaining graph. Leaves the journal exactly as it found it by
    // re-taking the walk (deterministic replay).
    void validate_walk(const WalkResult& walk, const std::vector<char>& flags,
                       const BranchAnalysis& ba) {
        const Multigraph& base = cg_.base();
        for (size_t qi = walk.steps.size(); qi-- > 0;) {
            const WalkStep& s = walk.steps[qi];
            if (!s.taken) continue;
            cg_.rewind_to(Checkpoint{s.checkpoint});

            const Multigraph rem = cg_.decompress();
            const SccPartition scc = tarjan_scc(rem);
            const CopyId fc = cg_.arena().first_copy(s.frozen_label);
            const EdgeRecord& rec = base.edge(base.copy_edge(fc));
            const bool crossing_truth =
                scc.component_of[rec.tail] != scc.component_of[rec.head];
            assert(flags[qi] == crossing_truth);
            (void)crossing_truth;

            if (cg_.mode() == EngineMode::Simple) {
                int32_t noncrossing = 0;
                for (EdgeId oe : rem.out_edges(s.tail_anchor))
                    if (scc.component_of[rem.edge(oe).tail] ==
                        scc.component_of[rem.edge(oe).head])
                        ++noncrossing;
                assert((ba.branch_bit[qi] != 0) == (noncrossing >= 2));
                (void)noncrossing;
            }
        }
        // Re-take the walk; the replay is deterministic, so checkpoints and
        // skip decisions must reproduce exactly.
        cg_.begin_absorb_epoch();
        for (const WalkStep& s : walk.steps) {
            if (!s.taken) {
                assert(cg_.absorbed_this_epoch(s.edge));
                continue;
            }
            assert(!cg_.absorbed_this_epoch(s.edge));
            auto [cp, lbl] = cg_.take_edge(s.edge);
            assert(cp.mark == s.checkpoint);
            assert(lbl == s.taken_label);
            (void)cp;
            (void)lbl;
        }
        assert(cg_.units_remaining() == 0);
    }

    bool validate_;
    Scratch scratch_;
    std::vector<Pending> pending_;
};

}  // namespace

EnumerationResult enumerate_trails(const Multigraph& g, TrailMode mode,
                                   const EnumerateOptions& opt) {
    if (opt.max_trails && *opt.max_trails < 1)
        throw std::invalid_argument("max_trails must be at least 1");
    if (mode == TrailMode::Simple && !g.is_simple())
        throw std::invalid_argument("simple mode requires a simple graph");

    EnumerationResult res;
    res.mode = mode;
    res.input_units = g.total_multiplicity();
    if (mode == TrailMode::EdgeDistinct) {
        SubdivisionResult sub = subdivide(g);
        res.engine_graph = std::move(sub.graph);
        res.back_map = std::move(sub.back_map);
    } else {
        res.engine_graph = g;
    }

    const EulerInfo info = check_eulerian(res.engine_graph, opt.start);
    if (!info.feasible)
        throw std::invalid_argument("graph has no Eulerian trail: " + info.reason);
    res.start_node = info.source;

    const EngineMode emode =
        mode == TrailMode::NodeDistinct ? EngineMode::NodeDistinct : EngineMode::Simple;
    Explorer ex(res.engine_graph, info, emode, opt.validate);
    const int64_t z_cap =
        opt.max_trails ? *opt.max_trails : std::numeric_limits<int64_t>::max();
    ex.run(z_cap);

    if (opt.validate) {
        // Post-run journal integrity: the rewound graph must be byte-equal
        // to the freshly built one.
        if (ex.cg_.fingerprint() != ex.post_build_fingerprint_)
            throw std::logic_error("journal rewind did not restore the built graph");
        ex.cg_.check_invariants();
    }

    res.arena = std::move(ex.arena_);
    res.tree = std::move(ex.tree_);
    res.counters = ex.counters_;
    res.cap_reached = ex.cap_reached_;
    return res;
}

}  // namespace eult
