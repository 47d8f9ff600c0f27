#include "eult/state_tree.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_map>

namespace eult {

namespace {

// Output token for a label leaf: original copy id in Simple/EdgeDistinct
// modes, edge record id in NodeDistinct mode.
int32_t map_copy(const EnumerationResult& r, CopyId engine_copy) {
    switch (r.mode) {
        case TrailMode::Simple: return engine_copy;
        case TrailMode::EdgeDistinct: return r.back_map[engine_copy];
        case TrailMode::NodeDistinct: return r.engine_graph.copy_edge(engine_copy);
    }
    return engine_copy;
}

int32_t transition_sort_key(const EnumerationResult& r, const Transition& t) {
    return map_copy(r, r.arena.first_copy(t.label));
}

std::vector<int32_t> mapped_expansion(const EnumerationResult& r, LabelId l) {
    std::vector<int32_t> out;
    for (CopyId c : r.arena.expand(l)) {
        const int32_t tok = map_copy(r, c);
        if (r.mode == TrailMode::EdgeDistinct) {
            // Subdivision halves expand pairwise; keep one token per copy.
            if (!out.empty() && out.back() == tok) continue;
        }
        out.push_back(tok);
    }
    return out;
}

std::vector<int32_t> sorted_children(const EnumerationResult& r, StateId s) {
    std::vector<int32_t> kids = r.tree.children[s];
    std::sort(kids.begin(), kids.end(), [&](int32_t a, int32_t b) {
        const int32_t ka = transition_sort_key(r, r.tree.transitions[a]);
        const int32_t kb = transition_sort_key(r, r.tree.transitions[b]);
        if (ka != kb) return ka < kb;
        // Parallel node-distinct multi-edges: order by node sequence.
        return mapped_expansion(r, r.tree.transitions[a].label) <
               mapped_expansion(r, r.tree.transitions[b].label);
    });
    return kids;
}

void verify_trail(const EnumerationResult& r, const std::vector<CopyId>& engine_trail) {
    const Multigraph& g = r.engine_graph;
    assert(static_cast<int64_t>(engine_trail.size()) == g.total_multiplicity());
    std::vector<char> used(g.total_multiplicity(), 0);
    NodeId at = r.start_node;
    for (CopyId c : engine_trail) {
        const EdgeRecord& rec = g.edge(g.copy_edge(c));
        assert(!used[c]);
        used[c] = 1;
        assert(rec.tail == at);
        at = rec.head;
    }
    (void)at;
}

}  // namespace

void for_each_trail(const EnumerationResult& r,
                    const std::function<void(const std::vector<int32_t>&)>& emit) {
    if (r.tree.children.empty()) return;

    struct Frame {
        StateId state;
        std::vector<int32_t> kids;
        size_t next = 0;
    };
    std::vector<LabelId> label_stack{r.tree.preamble};
    std::vector<Frame> stack{{r.tree.root(), sorted_children(r, r.tree.root()), 0}};
    std::vector<CopyId> engine_trail;
    std::vector<int32_t> out;

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (r.tree.is_leaf[f.state]) {
            engine_trail.clear();
            for (LabelId l : label_stack) r.arena.expand(l, engine_trail);
            verify_trail(r, engine_trail);
            out.clear();
            for (CopyId c : engine_trail) {
                const int32_t tok = map_copy(r, c);
                if (r.mode == TrailMode::EdgeDistinct && !out.empty() && out.back() == tok)
                    continue;
                out.push_back(tok);
            }
            emit(out);
            stack.pop_back();
            label_stack.pop_back();
            continue;
        }
        if (f.next == f.kids.size()) {
            stack.pop_back();
            label_stack.pop_back();
            continue;
        }
        const Transition& t = r.tree.transitions[f.kids[f.next++]];
        label_stack.push_back(t.label);
        stack.push_back({t.child, sorted_children(r, t.child), 0});
    }
}

std::vector<std::vector<int32_t>> decode_trails(const EnumerationResult& r) {
    std::vector<std::vector<int32_t>> all;
    for_each_trail(r, [&](const std::vector<int32_t>& t) { all.push_back(t); });
    return all;
}

std::string trail_to_node_names(const EnumerationResult& r,
                                const std::vector<int32_t>& record_seq) {
    assert(r.mode == TrailMode::NodeDistinct);
    std::string s = r.engine_graph.name(r.start_node);
    for (int32_t rec : record_seq) {
        s += ' ';
        s += r.engine_graph.name(r.engine_graph.edge(rec).head);
    }
    return s;
}

std::string trail_to_edge_tokens(const std::vector<int32_t>& copy_seq) {
    std::string s;
    for (size_t i = 0; i < copy_seq.size(); ++i) {
        if (i) s += ' ';
        s += 'e';
        s += std::to_string(copy_seq[i]);
    }
    return s;
}

namespace {

// Mode-aware rewrite of the label DAG for shared emission: leaves become
// output tokens and edge-distinct second halves collapse away, preserving
// sharing. Returns -1 for an empty rewrite.
class SharedEmitter {
public:
    explicit SharedEmitter(const EnumerationResult& r) : r_(r) {}

    int32_t rewrite(LabelId l) {
        if (l == kNoLabel) return -1;
        auto it = memo_.find(l);
        if (it != memo_.end()) return it->second;
        int32_t id;
        if (r_.arena.is_leaf(l)) {
            const CopyId c = r_.arena.leaf_copy(l);
            if (r_.mode == TrailMode::EdgeDistinct && (c & 1)) {
                id = -1;   // second subdivision half rides with the first
            } else {
                id = next_id_++;
                lines_ << "L " << id << " e" << map_copy(r_, c) << "\n";
            }
        } else {
            const int32_t a = rewrite(r_.arena.left(l));
            const int32_t b = rewrite(r_.arena.right(l));
            if (a < 0) {
                id = b;
            } else if (b < 0) {
                id = a;
            } else {
                id = next_id_++;
                lines_ << "C " << id << " " << a << " " << b << "\n";
            }
        }
        memo_.emplace(l, id);
        return id;
    }

    std::string table() const { return lines_.str(); }
    int64_t label_entries() const { return next_id_; }

private:
    const EnumerationResult& r_;
    std::unordered_map<LabelId, int32_t> memo_;
    std::ostringstream lines_;
    int32_t next_id_ = 0;
};

struct SharedOutput {
    std::string text;
    int64_t entries = 0;
};

SharedOutput emit_shared(const EnumerationResult& r) {
    SharedEmitter em(r);
    std::ostringstream tree;
    int64_t entries = 0;

    const int32_t pre = em.rewrite(r.tree.preamble);
    if (pre >= 0) {
        tree << "P " << pre << "\n";
        entries++;
    }
    if (!r.tree.children.empty()) {
        // Renumber states in emission (depth-first, sorted-children) order.
        std::vector<int32_t> number(r.tree.children.size(), -1);
        int32_t next_state = 0;
        number[r.tree.root()] = next_state++;
        std::vector<std::pair<StateId, size_t>> stack;
        std::vector<std::vector<int32_t>> kid_cache(r.tree.children.size());
        kid_cache[r.tree.root()] = sorted_children(r, r.tree.root());
        stack.emplace_back(r.tree.root(), 0);
        while (!stack.empty()) {
            auto& [s, i] = stack.back();
            if (i == kid_cache[s].size()) {
                stack.pop_back();
                continue;
            }
            const Transition& t = r.tree.transitions[kid_cache[s][i++]];
            number[t.child] = next_state++;
            const int32_t k = em.rewrite(t.label);
            tree << "T " << number[t.parent] << " " << number[t.child] << " " << k;
            if (r.tree.is_leaf[t.child]) tree << " leaf";
            tree << "\n";
            entries++;
            if (!r.tree.is_leaf[t.child]) {
                kid_cache[t.child] = sorted_children(r, t.child);
                stack.emplace_back(t.child, 0);
            }
        }
    }
    return SharedOutput{em.table() + tree.str(), entries + em.label_entries()};
}

void emit_expanded_state(const EnumerationResult& r, StateId s, int depth,
                         std::ostringstream& os) {
    for (int32_t ti : sorted_children(r, s)) {
        const Transition& t = r.tree.transitions[ti];
        os << std::string(static_cast<size_t>(depth) * 2, ' ') << "-> ["
           << trail_to_edge_tokens(mapped_expansion(r, t.label)) << "]";
        if (r.tree.is_leaf[t.child]) os << " leaf";
        os << "\n";
        emit_expanded_state(r, t.child, depth + 1, os);
    }
}

}  // namespace

std::string trie_emit(const EnumerationResult& r, TrieFormat format) {
    if (format == TrieFormat::Shared) return emit_shared(r).text;

    std::ostringstream os;
    if (r.arena.length(r.tree.preamble) > 0)
        os << "preamble [" << trail_to_edge_tokens(mapped_expansion(r, r.tree.preamble))
           << "]\n";
    if (!r.tree.children.empty()) {
        if (r.tree.is_leaf[r.tree.root()]) os << "leaf\n";
        emit_expanded_state(r, r.tree.root(), 0, os);
    }
    return os.str();
}

int64_t trie_shared_entry_count(const EnumerationResult& r) {
    return emit_shared(r).entries;
}

std::string dot_export(const EnumerationResult& r) {
    std::ostringstream os;
    os << "digraph trie {\n  rankdir=TB;\n";
    if (!r.tree.children.empty()) {
        for (size_t s = 0; s < r.tree.children.size(); ++s)
            os << "  s" << s << " [shape=" << (r.tree.is_leaf[s] ? "doublecircle" : "circle")
               << ", label=\"" << s << "\"];\n";
        if (r.arena.length(r.tree.preamble) > 0) {
            os << "  pre [shape=point];\n  pre -> s0 [label=\""
               << trail_to_edge_tokens(mapped_expansion(r, r.tree.preamble)) << "\"];\n";
        }
        for (size_t s = 0; s < r.tree.children.size(); ++s) {
            for (int32_t ti : sorted_children(r, static_cast<StateId>(s))) {
                const Transition& t = r.tree.transitions[ti];
                os << "  s" << t.parent << " -> s" << t.child << " [label=\""
                   << trail_to_edge_tokens(mapped_expansion(r, t.label)) << "\"];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace eult
